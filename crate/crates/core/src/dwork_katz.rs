//! The Dwork–Katz quotient over ℚ(t): reduction of monomial forms, the
//! Gauss–Manin action of `θ`, weight-graded ranks and minimal operators.
//!
//! Forms are `ω_(k,m) = x^m/f^k · dx/x`. The quotient is assembled from
//! the relations at pole orders `k ≤ d` among cone points of pole order
//! `≤ d + 1`; forms of higher pole order are lowered on demand.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::algebra::linalg::{rref, solve, Field, SparseRow};
use crate::algebra::{RatFunc, Rational};
use crate::cone::{Cone, ConePoint};
use crate::error::{Error, Result};
use crate::ore::OreOperator;
use crate::toric::ToricModel;

/// `ω_(β₀,β)`, identified with its cone point.
pub type MonomialForm = ConePoint;

/// Finite combination of monomial forms.
#[derive(Clone, PartialEq, Debug)]
pub struct CohomologyClass<F> {
    terms: BTreeMap<ConePoint, F>,
}

impl<F: Field> Default for CohomologyClass<F> {
    fn default() -> Self {
        CohomologyClass { terms: BTreeMap::new() }
    }
}

impl<F: Field> CohomologyClass<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn form(p: ConePoint) -> Self {
        let mut c = Self::new();
        c.add_term(p, F::one());
        c
    }

    pub fn add_term(&mut self, p: ConePoint, c: F) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert_with(F::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ConePoint, F)>) -> Self {
        let mut c = Self::new();
        for (p, v) in terms {
            c.add_term(p, v);
        }
        c
    }

    pub fn terms(&self) -> &BTreeMap<ConePoint, F> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, v)| (p.clone(), v.mul(c))))
    }
}

impl CohomologyClass<RatFunc> {
    /// `dx/x = Σ_j u_j ω_(1,m_j)`.
    pub fn dx_over_x(model: &ToricModel) -> Self {
        Self::from_terms(model.m().iter().zip(model.coefficients()).map(|(mj, u)| (ConePoint::new(1, mj.clone()), u)))
    }
}

fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `𝒟_i(x₀^k x^m)` in `S_Δ⁺`, with `f̃ = x₀f − 1`.
pub fn apply_d(model: &ToricModel, i: usize, p: &ConePoint) -> Result<Vec<(ConePoint, RatFunc)>> {
    if i > model.d() || p.m.len() != model.d() || p.k < 1 {
        return Err(Error::InvalidArgument("operator index or point out of range".into()));
    }
    let u = model.coefficients();
    let own = if i == 0 { p.k } else { p.m[i - 1] };
    let mut out = vec![(p.clone(), RatFunc::from_i64(own))];
    for (mj, uj) in model.m().iter().zip(&u) {
        let w = if i == 0 { 1 } else { mj[i - 1] };
        if w != 0 {
            out.push((ConePoint::new(p.k + 1, add_vec(&p.m, mj)), uj.scale(&Rational::from_integer(w.into()))));
        }
    }
    Ok(out)
}

/// `(−1)^{k−1}(k−1)!`.
pub fn residue_factor(k: i64) -> Rational {
    let mut f = <Rational as One>::one();
    for j in 1..k {
        f *= Rational::from_integer(j.into());
    }
    if k % 2 == 0 {
        -f
    } else {
        f
    }
}

/// Image under `x₀^k x^m ↦ (−1)^{k−1}(k−1)! ω_(k,m)`.
pub fn realize(elem: &[(ConePoint, RatFunc)]) -> CohomologyClass<RatFunc> {
    CohomologyClass::from_terms(elem.iter().map(|(p, c)| (p.clone(), c.scale(&residue_factor(p.k)))))
}

/// Relation `𝒟_i(x₀^k x^m)` divided by the residue factor, in forms.
fn form_relation<F: Field>(m: &[Vec<i64>], u: &[F], i: usize, p: &ConePoint) -> Vec<(ConePoint, F)> {
    let own = if i == 0 { 1 } else { p.m[i - 1] };
    let mut out = Vec::with_capacity(m.len() + 1);
    if own != 0 {
        out.push((p.clone(), F::from_rational(&Rational::from_integer(own.into()))));
    }
    for (mj, uj) in m.iter().zip(u) {
        let w = if i == 0 { -1 } else { -p.k * mj[i - 1] };
        if w != 0 {
            out.push((
                ConePoint::new(p.k + 1, add_vec(&p.m, mj)),
                uj.mul(&F::from_rational(&Rational::from_integer(w.into()))),
            ));
        }
    }
    out
}

/// Basis of the quotient together with the reduction of every cone point
/// of pole order at most `d + 1`.
#[derive(Clone, Debug)]
pub struct CohomologyBasis<F> {
    model: ToricModel,
    cone: Cone,
    u: Vec<F>,
    max_level: i64,
    basis: Vec<ConePoint>,
    reduction: HashMap<ConePoint, SparseRow<F>>,
}

fn preference_key(cone: &Cone, p: &ConePoint) -> (i64, std::cmp::Reverse<usize>, Vec<i64>) {
    let dim = cone.classify(p).map(|t| t.minimal_face_dim).unwrap_or(0);
    (p.k, std::cmp::Reverse(dim), p.m.clone())
}

/// Assembles the quotient over `ℚ(t)`.
pub fn build_basis(model: &ToricModel) -> Result<CohomologyBasis<RatFunc>> {
    CohomologyBasis::build(model, model.coefficients())
}

/// The quotient of the fibre at `t = t₀`.
pub fn build_fibre_basis(model: &ToricModel, t0: &Rational) -> Result<CohomologyBasis<Rational>> {
    if Zero::is_zero(t0) {
        return Err(Error::InvalidArgument("fibre at t = 0".into()));
    }
    let u = model
        .coefficients()
        .iter()
        .map(|c| c.eval(t0).ok_or_else(|| Error::InvalidArgument("coefficient pole".into())))
        .collect::<Result<Vec<_>>>()?;
    CohomologyBasis::build(model, u)
}

impl<F: Field> CohomologyBasis<F> {
    pub fn build(model: &ToricModel, u: Vec<F>) -> Result<Self> {
        let d = model.d();
        if d < 1 {
            return Err(Error::DegenerateModel);
        }
        let cone = Cone::new(model);
        let max_level = d as i64 + 1;
        let mut points = cone.enumerate(max_level);
        points.sort_by_cached_key(|p| preference_key(&cone, p));
        // worst first, so pivots land on the least preferred columns
        points.reverse();
        let column: HashMap<ConePoint, usize> = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut rows: Vec<SparseRow<F>> = Vec::new();
        for p in points.iter().filter(|p| p.k <= d as i64) {
            for i in 0..=d {
                let mut r: SparseRow<F> =
                    form_relation(model.m(), &u, i, p).into_iter().map(|(q, c)| (column[&q], c)).collect();
                if r.is_empty() {
                    continue;
                }
                r.sort_by_key(|e| e.0);
                rows.push(r);
            }
        }
        let pivots = rref(rows, points.len());
        let mut is_pivot = vec![None; points.len()];
        for (n, (c, _)) in pivots.iter().enumerate() {
            is_pivot[*c] = Some(n);
        }
        let mut basis_cols: Vec<usize> = (0..points.len()).filter(|&c| is_pivot[c].is_none()).collect();
        basis_cols.reverse();
        if basis_cols.is_empty() {
            return Err(Error::DegenerateModel);
        }
        if basis_cols.iter().any(|&c| points[c].k > d as i64) {
            return Err(Error::DegenerateModel);
        }
        let basis_index: HashMap<usize, usize> = basis_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut reduction = HashMap::with_capacity(points.len());
        for (c, p) in points.iter().enumerate() {
            let coords: SparseRow<F> = match is_pivot[c] {
                None => vec![(basis_index[&c], F::one())],
                Some(n) => {
                    let mut v: SparseRow<F> = pivots[n]
                        .1
                        .iter()
                        .filter(|(cc, _)| *cc != c)
                        .map(|(cc, x)| (basis_index[cc], x.neg()))
                        .collect();
                    v.sort_by_key(|e| e.0);
                    v
                }
            };
            reduction.insert(p.clone(), coords);
        }
        let basis = basis_cols.iter().map(|&c| points[c].clone()).collect();
        Ok(CohomologyBasis { model: model.clone(), cone, u, max_level, basis, reduction })
    }

    pub fn model(&self) -> &ToricModel {
        &self.model
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ConePoint] {
        &self.basis
    }

    /// Highest pole order held in the reduction table.
    pub fn max_level(&self) -> i64 {
        self.max_level
    }

    pub fn relation(&self, i: usize, p: &ConePoint) -> CohomologyClass<F> {
        CohomologyClass::from_terms(form_relation(self.model.m(), &self.u, i, p))
    }

    /// Coordinates of a single form.
    pub fn reduce_form(&self, p: &ConePoint) -> Result<Vec<F>> {
        let mut out = vec![F::zero(); self.dim()];
        self.accumulate(p, &F::one(), &mut out, 0)?;
        Ok(out)
    }

    pub fn reduce_class(&self, c: &CohomologyClass<F>) -> Result<Vec<F>> {
        let mut out = vec![F::zero(); self.dim()];
        for (p, v) in c.terms() {
            self.accumulate(p, v, &mut out, 0)?;
        }
        Ok(out)
    }

    fn accumulate(&self, p: &ConePoint, scale: &F, out: &mut [F], depth: usize) -> Result<()> {
        if !self.cone.contains(p) {
            return Err(Error::PointOutsideCone);
        }
        if let Some(r) = self.reduction.get(p) {
            for (i, v) in r {
                out[*i] = out[*i].add(&v.mul(scale));
            }
            return Ok(());
        }
        if depth > 64 {
            return Err(Error::UnreducibleForm(format!("{:?}", p)));
        }
        for (q, v) in self.lower(p)? {
            self.accumulate(&q, &v.mul(scale), out, depth + 1)?;
        }
        Ok(())
    }

    /// Rewrites a form of pole order `N > d + 1` as a combination of forms
    /// of pole order `N − 1` by matching its leading part against the
    /// relations at pole order `N − 1`.
    fn lower(&self, p: &ConePoint) -> Result<Vec<(ConePoint, F)>> {
        let d = self.model.d();
        let prev = self.cone.level(p.k - 1);
        let top = self.cone.level(p.k);
        let row_of: HashMap<&ConePoint, usize> = top.iter().enumerate().map(|(i, q)| (q, i)).collect();
        let ncols = prev.len() * (d + 1);
        let mut mat = vec![vec![F::zero(); ncols]; top.len()];
        for (qi, q) in prev.iter().enumerate() {
            for i in 0..=d {
                for (r, c) in form_relation(self.model.m(), &self.u, i, q) {
                    if r.k == p.k {
                        let row = row_of[&r];
                        let col = qi * (d + 1) + i;
                        mat[row][col] = mat[row][col].add(&c);
                    }
                }
            }
        }
        let mut rhs = vec![F::zero(); top.len()];
        rhs[*row_of.get(p).ok_or(Error::PointOutsideCone)?] = F::one();
        let x = solve(&mat, &rhs).ok_or_else(|| Error::UnreducibleForm(format!("{:?}", p)))?;
        let mut out = CohomologyClass::<F>::new();
        for (qi, q) in prev.iter().enumerate() {
            for i in 0..=d {
                let c = &x[qi * (d + 1) + i];
                if c.is_zero() {
                    continue;
                }
                for (r, v) in form_relation(self.model.m(), &self.u, i, q) {
                    if r.k < p.k {
                        out.add_term(r, v.mul(c).neg());
                    }
                }
            }
        }
        Ok(out.terms.into_iter().collect())
    }

    /// Rank of `W_{d+ℓ}`: the span of forms whose minimal face has
    /// codimension `< ℓ` for `ℓ < d`, everything for `ℓ ≥ d`.
    pub fn weight_graded_dimension(&self, weight_level: usize) -> usize {
        let d = self.model.d();
        if weight_level <= d {
            return 0;
        }
        if weight_level >= 2 * d {
            return self.dim();
        }
        let l = weight_level - d;
        let mut rows: Vec<SparseRow<F>> = Vec::new();
        for (p, r) in &self.reduction {
            let tag = match self.cone.classify(p) {
                Ok(t) => t,
                Err(_) => continue,
            };
            if tag.in_weight_ideal(l) {
                rows.push(r.clone());
            }
        }
        rref(rows, self.dim()).len()
    }

    /// Whether `v` lies in the weight piece `W_{d+ℓ}`.
    pub fn in_weight_piece(&self, v: &[F], l: usize) -> bool {
        if l >= self.model.d() {
            return true;
        }
        let mut rows: Vec<SparseRow<F>> = Vec::new();
        for (p, r) in &self.reduction {
            if self.cone.classify(p).map(|t| t.in_weight_ideal(l)).unwrap_or(false) {
                rows.push(r.clone());
            }
        }
        let base = rref(rows.clone(), self.dim()).len();
        rows.push(crate::algebra::linalg::to_sparse(v));
        rref(rows, self.dim()).len() == base
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }
}

impl CohomologyBasis<RatFunc> {
    /// `θω_(k,m) = −k Σ_j k_j u_j ω_(k+1, m+m_j)`.
    pub fn theta_form(&self, p: &ConePoint) -> CohomologyClass<RatFunc> {
        let mut out = CohomologyClass::new();
        for ((mj, uj), &kj) in self.model.m().iter().zip(&self.u).zip(self.model.k()) {
            if kj != 0 {
                out.add_term(
                    ConePoint::new(p.k + 1, add_vec(&p.m, mj)),
                    uj.scale(&Rational::from_integer((-p.k * kj).into())),
                );
            }
        }
        out
    }

    /// `θ` applied to a class, as a class.
    pub fn theta_class(&self, c: &CohomologyClass<RatFunc>) -> CohomologyClass<RatFunc> {
        let mut out = CohomologyClass::new();
        for (p, v) in c.terms() {
            out.add_term(p.clone(), v.theta());
            for (q, w) in self.theta_form(p).terms() {
                out.add_term(q.clone(), v * w);
            }
        }
        out
    }

    pub fn gauss_manin_theta(&self, c: &CohomologyClass<RatFunc>) -> Result<Vec<RatFunc>> {
        self.reduce_class(&self.theta_class(c))
    }

    /// Column `j` holds the coordinates of `θ` applied to basis form `j`.
    pub fn connection_matrix(&self) -> Result<Vec<Vec<RatFunc>>> {
        let n = self.dim();
        let mut m = vec![vec![RatFunc::zero(); n]; n];
        for (j, b) in self.basis.iter().enumerate() {
            let v = self.reduce_class(&self.theta_form(b))?;
            for (i, x) in v.into_iter().enumerate() {
                m[i][j] = x;
            }
        }
        Ok(m)
    }

    /// `θ` on coordinate vectors.
    pub fn theta_coords(&self, conn: &[Vec<RatFunc>], v: &[RatFunc]) -> Vec<RatFunc> {
        let n = v.len();
        (0..n)
            .map(|i| {
                let mut acc = v[i].theta();
                for (j, vj) in v.iter().enumerate() {
                    if !vj.is_zero() && !conn[i][j].is_zero() {
                        acc = &acc + &(&conn[i][j] * vj);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn minimal_operator(&self, c: &CohomologyClass<RatFunc>) -> Result<OreOperator> {
        let v = self.reduce_class(c)?;
        self.minimal_operator_of(&v)
    }

    /// Monic generator of the annihilator of the class with coordinates `v`.
    pub fn minimal_operator_of(&self, v: &[RatFunc]) -> Result<OreOperator> {
        if v.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroClass);
        }
        let conn = self.connection_matrix()?;
        let n = self.dim();
        let mut iterates = vec![v.to_vec()];
        loop {
            let next = self.theta_coords(&conn, iterates.last().unwrap());
            let mat: Vec<Vec<RatFunc>> = (0..n).map(|i| iterates.iter().map(|w| w[i].clone()).collect()).collect();
            if let Some(x) = solve(&mat, &next) {
                let mut coeffs: Vec<RatFunc> = x.iter().map(|c| -c).collect();
                coeffs.push(RatFunc::one());
                return Ok(OreOperator::new(coeffs));
            }
            iterates.push(next);
            if iterates.len() > n + 1 {
                return Err(Error::UnreducibleForm("no dependence among θ-iterates".into()));
            }
        }
    }
}

/// `d_j = −β₀ μ_j` from the convex combination of `β/β₀` over its
/// minimal face; the `t`-eigenvalue is `Σ_j k_j d_j`.
pub fn weight_theta_eigenvalues(model: &ToricModel, form: &ConePoint) -> Result<Vec<Rational>> {
    let cone = Cone::new(model);
    let tag = cone.classify(form)?;
    if tag.is_interior() {
        return Err(Error::InteriorPoint);
    }
    let l = model.l();
    let d = model.d();
    let face = &tag.face_points;
    let mut rows: Vec<Vec<Rational>> = vec![vec![<Rational as Zero>::zero(); face.len()]; d + 1];
    for (c, &j) in face.iter().enumerate() {
        rows[0][c] = <Rational as One>::one();
        for i in 0..d {
            rows[i + 1][c] = Rational::from_integer(model.m()[j][i].into());
        }
    }
    let b0 = Rational::from_integer(form.k.into());
    let mut rhs = vec![<Rational as One>::one()];
    rhs.extend(form.m.iter().map(|&x| Rational::from_integer(x.into()) / &b0));
    let mu = solve(&rows, &rhs).ok_or_else(|| Error::InvalidArgument("no convex combination".into()))?;
    let mut out = vec![<Rational as Zero>::zero(); l];
    for (c, &j) in face.iter().enumerate() {
        out[j] = -&b0 * &mu[c];
    }
    Ok(out)
}

/// `Σ_j k_j d_j`.
pub fn t_eigenvalue(model: &ToricModel, d: &[Rational]) -> Rational {
    d.iter().zip(model.k()).map(|(x, &k)| x * Rational::from_integer(k.into())).sum()
}
