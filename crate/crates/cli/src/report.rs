//! Builds analysis reports as JSON values.

use std::collections::BTreeMap;

use hgls::algebra::{fmt_rational, QMatrix};
use hgls::cone::{graded_generator_counts, Cone, ConePoint};
use hgls::covering::{lattice_primitivity, quadrilateral_covering, CoveringData};
use hgls::dwork_katz::{build_basis, CohomologyBasis};
use hgls::gamma::{family_parameter, hg_params, rank, volume, GammaVector};
use hgls::hodge::{hodge_numbers, hodge_polynomial, hodge_total};
use hgls::monodromy::{levelt_triple, pseudoreflection_rank, verify_triple};
use hgls::ore::{build_gkz_operator, build_hypergeometric, solve_eta};
use hgls::series::{annihilation_check, constant_term_series, hg_series};
use hgls::toric::{
    build_model, hessian_determinant, quasi_regularity_check, singular_fiber_criterion, singular_point, standard_model,
    SingularPoint,
};
use hgls::{Error, OreOperator, RatFunc, Rational, Result, ToricModel};
use serde_json::{json, Map, Value};

/// Sections requested on top of the basic parameter data.
#[derive(Clone, Debug, Default)]
pub struct Sections {
    pub hodge: bool,
    pub model: bool,
    pub cone: bool,
    pub minimal_op: Vec<String>,
    pub gkz_op: Vec<String>,
    pub monodromy: bool,
    pub series: Option<usize>,
    pub covering: bool,
    pub validate: bool,
}

/// A report together with the first error met while filling sections.
pub struct Outcome {
    pub value: Value,
    pub error: Option<Error>,
}

pub fn error_json(e: &Error) -> Value {
    json!({"code": e.code(), "message": e.to_string()})
}

fn rats(v: &[Rational]) -> Value {
    Value::from(v.iter().map(fmt_rational).collect::<Vec<_>>())
}

fn matrix(m: &QMatrix) -> Value {
    json!(m.to_strings())
}

/// Parses `"beta0;b1,...,bd"`.
pub fn parse_form(s: &str) -> Result<ConePoint> {
    let bad = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    let (k, rest) = s.split_once(';').ok_or_else(|| bad(0, "expected \"beta0;b1,...,bd\""))?;
    let k: i64 = k.trim().parse().map_err(|_| bad(0, "beta0 is not an integer"))?;
    let mut m = Vec::new();
    let mut pos = k.to_string().len() + 1;
    for part in rest.split(',') {
        let v: i64 = part.trim().parse().map_err(|_| bad(pos, &format!("not an integer: {part:?}")))?;
        m.push(v);
        pos += part.len() + 1;
    }
    Ok(ConePoint::new(k, m))
}

fn form_text(p: &ConePoint) -> String {
    let m: Vec<String> = p.m.iter().map(|x| x.to_string()).collect();
    format!("{};{}", p.k, m.join(","))
}

pub fn model_json(model: &ToricModel) -> Value {
    let a = model.matrix().to_i64_rows().expect("validated models have small entries");
    json!({
        "gamma": model.gamma().entries(),
        "A": a,
        "m": model.m(),
        "k": model.k(),
        "Gamma": fmt_rational(&model.big_gamma()),
    })
}

fn operator_json(op: &OreOperator) -> Value {
    let hyper = op.hypergeometric_parameters().map(|(a, b)| json!({"alpha": rats(&a), "beta": rats(&b)}));
    json!({
        "order": op.order(),
        "terms": op.to_terms(),
        "hypergeometric": hyper,
    })
}

fn covering_json(c: &CoveringData) -> Value {
    let mut exps = Map::new();
    for (j, s) in c.slots.iter().enumerate() {
        exps.insert(format!("u{}", j + 1), json!(format!("y{}^{}", s.var, s.exp)));
    }
    json!({
        "normalized_gamma": c.normalized,
        "sign": c.sign,
        "permutation": c.permutation,
        "case": c.case.as_str(),
        "a": c.a, "A": c.big_a, "b": c.b, "B": c.big_b, "c": c.c,
        "d14": c.d14, "d23": c.d23,
        "d": c.de.map(|x| x.0), "e": c.de.map(|x| x.1),
        "covering_exponents": exps,
        "polynomial": c.polynomial_text(),
        "degrees": [c.degrees().0, c.degrees().1],
        "conditions": {
            "coprime_y1": c.conditions.coprime_y1,
            "coprime_y2": c.conditions.coprime_y2,
            "distinct_degrees": c.conditions.distinct_degrees,
            "c_integral": c.conditions.c_integral,
        },
        "etale_property_checked": false,
    })
}

struct Context<'a> {
    gamma: &'a GammaVector,
    model: Option<Result<ToricModel>>,
    basis: Option<Result<CohomologyBasis<RatFunc>>>,
    first_error: Option<Error>,
}

impl<'a> Context<'a> {
    fn model(&mut self) -> Result<ToricModel> {
        if self.model.is_none() {
            self.model = Some(build_model(self.gamma));
        }
        self.model.clone().unwrap()
    }

    fn basis(&mut self) -> Result<&CohomologyBasis<RatFunc>> {
        if self.basis.is_none() {
            let b = self.model().and_then(|m| build_basis(&m));
            self.basis = Some(b);
        }
        self.basis.as_ref().unwrap().as_ref().map_err(|e| e.clone())
    }

    fn section(&mut self, out: &mut Map<String, Value>, key: &str, v: Result<Value>) {
        let v = match v {
            Ok(v) => v,
            Err(e) => {
                let j = json!({"error": error_json(&e)});
                self.first_error.get_or_insert(e);
                j
            }
        };
        out.insert(key.to_string(), v);
    }
}

fn hodge_section(g: &GammaVector) -> Result<Value> {
    let p = hodge_polynomial(g)?;
    let nums: Vec<Value> = hodge_numbers(g)?.iter().map(|&(p, q, h)| json!({"p": p, "q": q, "h": h})).collect();
    Ok(json!({"kappa": g.kappa(), "polynomial": p.display_var("T"), "numbers": nums}))
}

fn cone_section(ctx: &mut Context) -> Result<Value> {
    let model = ctx.model()?;
    let d = model.d();
    let cone = Cone::new(&model);
    let counts = graded_generator_counts(&model);
    let mut levels = Vec::new();
    for k in 1..=d as i64 {
        let by_dim: BTreeMap<String, usize> =
            counts.iter().filter(|((kk, _), _)| *kk == k).map(|((_, fd), c)| (fd.to_string(), *c)).collect();
        let total: usize = by_dim.values().sum();
        let interior = counts.get(&(k, d)).copied().unwrap_or(0);
        levels.push(json!({"k": k, "points": total, "interior": interior, "by_face_dim": by_dim}));
    }
    let basis = ctx.basis()?;
    let weights: Vec<Value> =
        (d + 1..=2 * d).map(|w| json!({"weight": w, "dimension": basis.weight_graded_dimension(w)})).collect();
    Ok(json!({
        "dimension": d,
        "vertices": cone.polytope.vertices.len(),
        "normalized_volume": cone.polytope.normalized_volume().to_string(),
        "levels": levels,
        "quotient_dimension": basis.dim(),
        "basis": basis.basis().iter().map(form_text).collect::<Vec<_>>(),
        "weight_filtration": weights,
    }))
}

fn minimal_op_section(ctx: &mut Context, form: &str) -> Result<(ConePoint, OreOperator, Value)> {
    let p = parse_form(form)?;
    let basis = ctx.basis()?;
    if p.m.len() != basis.model().d() {
        return Err(Error::InvalidArgument(format!("form needs {} exponents", basis.model().d())));
    }
    let op = basis.minimal_operator(&hgls::dwork_katz::CohomologyClass::form(p.clone()))?;
    let mut v = operator_json(&op);
    v["form"] = json!(form_text(&p));
    Ok((p, op, v))
}

fn gkz_section(ctx: &mut Context, form: &str, minimal: &BTreeMap<ConePoint, OreOperator>) -> Result<Value> {
    let p = parse_form(form)?;
    let model = ctx.model()?;
    if p.m.len() != model.d() {
        return Err(Error::InvalidArgument(format!("form needs {} exponents", model.d())));
    }
    let eta = solve_eta(&model, p.k, &p.m)?;
    let (op, params) = build_gkz_operator(model.gamma(), &eta)?;
    let (ca, cb) = hgls::ore::cancel_parameters(&params.alpha_eta, &params.beta_eta);
    let divides = match minimal.get(&p) {
        Some(l) => Some(op.right_divide(l)?.1.is_zero()),
        None => None,
    };
    Ok(json!({
        "form": form_text(&p),
        "eta": eta,
        "alpha_eta": rats(&params.alpha_eta),
        "beta_eta": rats(&params.beta_eta),
        "cancelled": {"alpha": rats(&ca), "beta": rats(&cb)},
        "order": op.order(),
        "terms": op.to_terms(),
        "right_divisible_by_minimal_operator": divides,
    }))
}

fn monodromy_section(g: &GammaVector) -> Result<Value> {
    let t = levelt_triple(g)?;
    let fp = family_parameter(g)?;
    Ok(json!({
        "rank": t.rank(),
        "h0": matrix(&t.h0),
        "h1": matrix(&t.h1),
        "hinf": matrix(&t.hinf),
        "pseudoreflection_rank": pseudoreflection_rank(&t.h1),
        "product_is_identity": t.product() == QMatrix::identity(t.rank()),
        "charpoly_hinf": t.hinf.charpoly().display_var("T"),
        "charpoly_h0_inverse": t.h0.inverse().map(|m| m.charpoly().display_var("T")),
        "consistent": verify_triple(&t, &fp.q_inf(), &fp.q_zero()),
    }))
}

/// Power series of the period (one negative entry) or of `F(α, β | t)`,
/// with the annihilation verdict of `H(α, β)`.
pub fn series_section(g: &GammaVector, n: usize, check: bool) -> Result<Value> {
    let params = hg_params(g)?;
    let one_negative = g.entries().iter().filter(|&&x| x < 0).count() == 1;
    let (kind, s) = if one_negative {
        ("constant_term", constant_term_series(g, n)?)
    } else {
        ("hypergeometric", hg_series(&params.alpha, &params.beta, n)?)
    };
    let annihilation = if check {
        let h = build_hypergeometric(&params.alpha, &params.beta)?;
        match annihilation_check(&h, &s) {
            Ok(v) => json!({"annihilated": v.annihilated, "checked": v.checked, "first_nonzero": v.first_nonzero}),
            Err(e) => json!({"error": error_json(&e)}),
        }
    } else {
        Value::Null
    };
    Ok(json!({
        "kind": kind,
        "alpha": rats(&params.alpha),
        "beta": rats(&params.beta),
        "terms": n,
        "coefficients": rats(s.coeffs()),
        "annihilation": annihilation,
    }))
}

fn covering_section(ctx: &mut Context) -> Result<Value> {
    let model = ctx.model()?;
    let quad = if ctx.gamma.len() == 4 { Some(covering_json(&quadrilateral_covering(ctx.gamma)?)) } else { None };
    Ok(json!({"lattice_primitive": lattice_primitivity(&model), "quadrilateral": quad}))
}

fn validate_section(ctx: &mut Context) -> Result<Value> {
    let g = ctx.gamma;
    let model = ctx.model()?;
    let prod: i64 = g.entries().iter().product();
    let u: Vec<Rational> = g.entries().iter().map(|&x| Rational::from_integer(x.into())).collect();
    let ones = vec![Rational::from_integer(1.into()); model.d()];
    let mut checks = vec![
        ("hessian_law", hessian_determinant(&model) == (-prod).into()),
        ("rank_equals_hodge_total", hodge_total(g)? == rank(g) as i64),
        ("singular_fibre_at_one", singular_fiber_criterion(g, &u)),
        ("singular_point_is_one", singular_point(&model, &u)? == SingularPoint::Rational(ones)),
        ("quasi_regular_faces", quasi_regularity_check(&model).iter().all(|f| f.full_column_rank)),
        ("lattice_primitive", lattice_primitivity(&model)),
        ("volume_matches_polytope", Cone::new(&model).polytope.normalized_volume() == volume(g).into()),
    ];
    if let Ok(fp) = family_parameter(g) {
        let t = levelt_triple(g)?;
        checks.push(("levelt_triple", verify_triple(&t, &fp.q_inf(), &fp.q_zero())));
    }
    let all = checks.iter().all(|c| c.1);
    let list: Vec<Value> = checks.iter().map(|(n, p)| json!({"name": n, "pass": p})).collect();
    Ok(json!({"checks": list, "all_pass": all}))
}

/// Full report for one gamma vector. Fails only if the basic parameter
/// data cannot be computed; section failures are recorded inline.
/// Where the toric model of a report comes from.
#[derive(Clone, Debug)]
pub enum ModelChoice {
    /// The standard model when one is registered, else the built one.
    Default,
    Built,
    Imported(ToricModel),
}

pub fn analyze(g: &GammaVector, sections: &Sections, choice: ModelChoice) -> Result<Outcome> {
    let params = hg_params(g)?;
    let fp = family_parameter(g)?;
    let mult = |m: &BTreeMap<u64, u32>| m.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>();
    let mut out = Map::new();
    out.insert("gamma".into(), json!(g.entries()));
    out.insert("reduced".into(), json!(g.is_reduced()));
    out.insert("prime".into(), json!(g.is_prime()));
    out.insert("kappa".into(), json!(g.kappa()));
    out.insert("parameters".into(), json!({"alpha": rats(&params.alpha), "beta": rats(&params.beta)}));
    out.insert(
        "family_parameter".into(),
        json!({
            "numerator": mult(&fp.numerator),
            "denominator": mult(&fp.denominator),
            "q_inf": fp.q_inf().display_var("T"),
            "q_zero": fp.q_zero().display_var("T"),
        }),
    );
    out.insert("rank".into(), json!(rank(g)));
    out.insert("volume".into(), json!(volume(g)));
    out.insert("irreducible".into(), json!(params.is_irreducible()));

    let (model, source) = match choice {
        ModelChoice::Imported(m) => (Some(m), "imported"),
        ModelChoice::Built => (None, "built"),
        ModelChoice::Default => match standard_model(g) {
            Some(m) => (Some(m), "standard"),
            None => (None, "built"),
        },
    };
    out.insert("model_source".into(), json!(source));
    let mut ctx = Context { gamma: g, model: model.map(Ok), basis: None, first_error: None };
    if sections.hodge {
        let v = hodge_section(g);
        ctx.section(&mut out, "hodge", v);
    }
    if sections.model {
        let v = ctx.model().map(|m| model_json(&m));
        ctx.section(&mut out, "model", v);
    }
    if sections.cone {
        let v = cone_section(&mut ctx);
        ctx.section(&mut out, "cone", v);
    }
    let mut minimal = BTreeMap::new();
    if !sections.minimal_op.is_empty() {
        let mut list = Vec::new();
        for f in &sections.minimal_op {
            match minimal_op_section(&mut ctx, f) {
                Ok((p, op, v)) => {
                    minimal.insert(p, op);
                    list.push(v);
                }
                Err(e) => {
                    list.push(json!({"form": f, "error": error_json(&e)}));
                    ctx.first_error.get_or_insert(e);
                }
            }
        }
        out.insert("minimal_operators".into(), Value::from(list));
    }
    if !sections.gkz_op.is_empty() {
        let mut list = Vec::new();
        for f in &sections.gkz_op {
            match gkz_section(&mut ctx, f, &minimal) {
                Ok(v) => list.push(v),
                Err(e) => {
                    list.push(json!({"form": f, "error": error_json(&e)}));
                    ctx.first_error.get_or_insert(e);
                }
            }
        }
        out.insert("gkz_operators".into(), Value::from(list));
    }
    if sections.monodromy {
        let v = monodromy_section(g);
        ctx.section(&mut out, "monodromy", v);
    }
    if let Some(n) = sections.series {
        let v = series_section(g, n, true);
        ctx.section(&mut out, "series", v);
    }
    if sections.covering {
        let v = covering_section(&mut ctx);
        ctx.section(&mut out, "covering", v);
    }
    if sections.validate {
        let v = validate_section(&mut ctx);
        ctx.section(&mut out, "validation", v);
    }
    Ok(Outcome { value: Value::Object(out), error: ctx.first_error })
}
