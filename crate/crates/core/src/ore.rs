//! Differential operators in `θ = t·d/dt` with coefficients in ℚ(t).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::linalg::nullspace;
use crate::algebra::{frac, Poly, RatFunc, Rational};
use crate::error::{Error, Result};
use crate::gamma::GammaVector;
use crate::toric::{inverse_matrix, ToricModel};

/// `Σ a_i(t) θ^i`, trimmed so the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OreOperator {
    coeffs: Vec<RatFunc>,
}

impl OreOperator {
    pub fn new(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OreOperator { coeffs }
    }

    pub fn zero() -> Self {
        OreOperator { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        OreOperator::constant(RatFunc::one())
    }

    pub fn constant(a: RatFunc) -> Self {
        OreOperator::new(vec![a])
    }

    pub fn theta() -> Self {
        OreOperator::new(vec![RatFunc::zero(), RatFunc::one()])
    }

    /// `p(θ)` for a polynomial `p` with constant coefficients.
    pub fn from_theta_poly(p: &Poly) -> Self {
        OreOperator::new(p.coeffs().iter().map(|c| RatFunc::constant(c.clone())).collect())
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFunc {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order; the zero operator has order 0.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> RatFunc {
        self.coeffs.last().cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn add(&self, o: &OreOperator) -> OreOperator {
        let n = self.coeffs.len().max(o.coeffs.len());
        OreOperator::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &OreOperator) -> OreOperator {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> OreOperator {
        OreOperator { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// `f · L`.
    pub fn left_mul(&self, f: &RatFunc) -> OreOperator {
        OreOperator::new(self.coeffs.iter().map(|c| f * c).collect())
    }

    /// `L · θ^k`.
    fn shift_theta(&self, k: usize) -> OreOperator {
        let mut c = vec![RatFunc::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        OreOperator::new(c)
    }

    /// `θ · L`, using `θ·a = a·θ + θ(a)`.
    pub fn theta_left(&self) -> OreOperator {
        let mut c = vec![RatFunc::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i + 1] = &c[i + 1] + a;
            c[i] = &c[i] + &a.theta();
        }
        OreOperator::new(c)
    }

    /// Noncommutative product `self · o`.
    pub fn mul(&self, o: &OreOperator) -> OreOperator {
        let mut acc = OreOperator::zero();
        let mut power = o.clone();
        for a in &self.coeffs {
            if !a.is_zero() {
                acc = acc.add(&power.left_mul(a));
            }
            power = power.theta_left();
        }
        acc
    }

    /// `(q, r)` with `self = q·b + r` and `order(r) < order(b)`.
    ///
    /// Runs as a pseudo-division on polynomial coefficients, keeping
    /// `C·self = Q·b̃ + R` with `b̃` the denominator-free multiple of `b`.
    pub fn right_divide(&self, b: &OreOperator) -> Result<(OreOperator, OreOperator)> {
        if b.is_zero() {
            return Err(Error::InvalidArgument("division by the zero operator".into()));
        }
        let m = b.order();
        let (db, bp) = b.cleared();
        let (da, ap) = self.cleared();
        let lb = bp.lead();
        let steps = ap.coeffs.len().saturating_sub(m);
        let mut powers = Vec::with_capacity(steps);
        let mut cur = bp.clone();
        for _ in 0..steps {
            let next = cur.theta_left();
            powers.push(cur);
            cur = next;
        }
        let mut c = RatFunc::from_poly(da);
        let mut q = OreOperator::zero();
        let mut r = ap;
        while !r.is_zero() && r.order() >= m {
            let s = r.order() - m;
            let lr = r.lead();
            r = r.left_mul(&lb).sub(&powers[s].left_mul(&lr));
            q = q.left_mul(&lb).add(&OreOperator::constant(lr).shift_theta(s));
            c = &c * &lb;
            let k = content_of(q.coeffs.iter().chain(r.coeffs.iter()).chain(std::iter::once(&c)));
            if !k.is_one() {
                let inv = k.recip();
                q = q.left_mul(&RatFunc::constant(inv.clone()));
                r = r.left_mul(&RatFunc::constant(inv.clone()));
                c = c.scale(&inv);
            }
        }
        let ci = c.inv();
        let q = q.left_mul(&ci).mul(&OreOperator::constant(RatFunc::from_poly(db)));
        Ok((q, r.left_mul(&ci)))
    }

    /// `(D, D·self)` with `D` the monic lcm of the coefficient denominators.
    fn cleared(&self) -> (Poly, OreOperator) {
        let mut den = Poly::one();
        for c in &self.coeffs {
            let g = Poly::gcd(&den, c.den());
            den = &den * &c.den().exact_div(&g);
        }
        let op = OreOperator::new(
            self.coeffs.iter().map(|c| RatFunc::from_poly(c.num() * &den.exact_div(c.den()))).collect(),
        );
        (den, op)
    }

    /// Leading coefficient scaled to 1.
    pub fn monic(&self) -> OreOperator {
        if self.is_zero() {
            return self.clone();
        }
        self.left_mul(&self.lead().inv())
    }

    /// `self = f·o` for some nonzero `f ∈ ℚ(t)`.
    pub fn equals_up_to_unit(&self, o: &OreOperator) -> bool {
        self.monic() == o.monic()
    }

    /// Common multiple of the coefficient denominators times the
    /// operator, with coprime integer polynomial coefficients.
    pub fn polynomial_coeffs(&self) -> Vec<Poly> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut den = Poly::one();
        for c in &self.coeffs {
            let g = Poly::gcd(&den, c.den());
            den = &den * &c.den().exact_div(&g);
        }
        let polys: Vec<Poly> = self.coeffs.iter().map(|c| &c.num().clone() * &den.exact_div(c.den())).collect();
        let mut g = Poly::zero();
        for p in &polys {
            g = Poly::gcd(&g, p);
        }
        let polys: Vec<Poly> = polys.iter().map(|p| p.exact_div(&g)).collect();
        let mut content: Option<Rational> = None;
        for p in &polys {
            if !p.is_zero() {
                let (c, _) = p.content_primitive();
                content = Some(match content {
                    None => c,
                    Some(x) => rat_gcd(&x, &c),
                });
            }
        }
        let mut c = content.unwrap_or_else(Rational::one);
        if polys.last().unwrap().lead().is_negative() {
            c = -c;
        }
        polys.iter().map(|p| p.scale(&c.recip())).collect()
    }

    /// `(α, β)` with `self = f·H(α, β)` for a unit `f`, when the operator
    /// has that shape and both `θ`-polynomials split over ℚ.
    pub fn hypergeometric_parameters(&self) -> Option<(Vec<Rational>, Vec<Rational>)> {
        if self.order() == 0 {
            return None;
        }
        let p = self.polynomial_coeffs();
        if p.iter().any(|x| x.degree().is_some_and(|d| d > 1)) {
            return None;
        }
        let at0 = Poly::new(p.iter().map(|x| x.coeff(0)).collect());
        let at1 = Poly::new(p.iter().map(|x| -x.coeff(1)).collect());
        let n = self.order();
        if at0.degree() != Some(n) || at1.degree() != Some(n) || at0.lead() != at1.lead() {
            return None;
        }
        let (r0, rest0) = at0.rational_roots();
        let (r1, rest1) = at1.rational_roots();
        if !rest0.is_constant() || !rest1.is_constant() {
            return None;
        }
        let one = Rational::one();
        let mut beta: Vec<Rational> = r0.iter().map(|r| &one - r).collect();
        let mut alpha: Vec<Rational> = r1.iter().map(|r| -r).collect();
        alpha.sort();
        beta.sort();
        Some((alpha, beta))
    }

    /// `θ`-polynomials `P_k` with `L ∝ Σ_k t^k P_k(θ)` after removing the
    /// common power of `t`; fails if `0` is an irregular singular point.
    fn expansion_at_zero(&self) -> Result<Vec<Poly>> {
        let p = self.polynomial_coeffs();
        let v = p.iter().filter_map(|x| x.valuation()).min().unwrap_or(0);
        let lead_v = p.last().and_then(|x| x.valuation()).unwrap_or(0);
        if lead_v > v {
            return Err(Error::Unsupported("irregular singular point at t = 0".into()));
        }
        let top = p.iter().filter_map(|x| x.degree()).max().unwrap_or(0);
        Ok((v..=top).map(|k| Poly::new(p.iter().map(|x| x.coeff(k)).collect())).collect())
    }

    /// `Σ_i a_i(0) θ^i` after normalising the coefficients to be regular at 0.
    pub fn indicial_polynomial(&self) -> Result<Poly> {
        Ok(self.expansion_at_zero()?.swap_remove(0))
    }

    /// Applies the operator to `t^ρ Σ c_n t^n`; returns the first `c.len()`
    /// coefficients of `D·L` applied to the series, where `D` is the
    /// polynomial that clears the coefficient denominators.
    pub fn apply_series(&self, rho: &Rational, c: &[Rational]) -> Vec<Rational> {
        let p = self.polynomial_coeffs();
        let n = c.len();
        let lcm = |acc: BigInt, d: &BigInt| num_integer::Integer::lcm(&acc, d);
        let dc = c.iter().map(|x| x.denom()).fold(BigInt::one(), lcm);
        let da = p.iter().flat_map(|x| x.coeffs()).map(|x| x.denom()).fold(BigInt::one(), lcm);
        let (r, big_r) = (rho.denom().clone(), rho.numer().clone());
        let ord = p.len().saturating_sub(1);
        let r_ord = num_traits::pow(r.clone(), ord);
        // θ^i applied to the series, times dc·r^{ord−i}, with t^ρ removed
        let exps: Vec<BigInt> = (0..n).map(|m| &big_r + &r * BigInt::from(m)).collect();
        let mut th: Vec<BigInt> = c.iter().map(|x| x.numer() * (&dc / x.denom()) * &r_ord).collect();
        let mut acc = vec![BigInt::zero(); n];
        for (i, pi) in p.iter().enumerate() {
            if i > 0 {
                th.iter_mut().zip(&exps).for_each(|(x, e)| *x = &*x / &r * e);
            }
            for (k, a) in pi.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let a = a.numer() * (&da / a.denom());
                for (m, cm) in th.iter().enumerate().take(n.saturating_sub(k)) {
                    if !cm.is_zero() {
                        acc[m + k] += &a * cm;
                    }
                }
            }
        }
        let scale = dc * da * r_ord;
        acc.into_iter().map(|x| Rational::new(x, scale.clone())).collect()
    }

    /// Applies the operator to a rational function.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        let mut g = f.clone();
        for a in &self.coeffs {
            acc = &acc + &(a * &g);
            g = g.theta();
        }
        acc
    }

    /// The same operator in `ϑ = s·d/ds` around `t = a`, `s = t − a`.
    pub fn recentre(&self, a: &Rational) -> OreOperator {
        if a.is_zero() {
            return self.clone();
        }
        let s_plus_a = RatFunc::new(Poly::new(vec![a.clone(), Rational::one()]), Poly::one());
        let g = OreOperator::new(vec![RatFunc::zero(), &s_plus_a / &RatFunc::t()]);
        let mut acc = OreOperator::zero();
        let mut power = OreOperator::one();
        for c in &self.coeffs {
            acc = acc.add(&power.left_mul(&c.taylor_shift(a)));
            power = g.mul(&power);
        }
        acc
    }

    /// Terms `"(N)/(D)*TH^i"` from the highest power down.
    pub fn to_terms(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*TH^{}", c.to_text(), i))
            .collect()
    }

    pub fn from_terms<S: AsRef<str>>(terms: &[S]) -> Result<OreOperator> {
        let mut c: Vec<RatFunc> = Vec::new();
        for term in terms {
            let term = term.as_ref().trim();
            let idx = term.rfind("*TH^").ok_or_else(|| Error::Parse { pos: 0, msg: "expected '*TH^'".into() })?;
            let i: usize = term[idx + 4..]
                .trim()
                .parse()
                .map_err(|_| Error::Parse { pos: idx + 4, msg: "bad power of TH".into() })?;
            let a = RatFunc::parse(&term[..idx])?;
            if c.len() <= i {
                c.resize(i + 1, RatFunc::zero());
            }
            c[i] = &c[i] + &a;
        }
        Ok(OreOperator::new(c))
    }

    /// Text form: the terms joined by `" + "`; `"0"` for the zero operator.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.to_terms().join(" + ")
    }

    pub fn parse(s: &str) -> Result<OreOperator> {
        let s = s.trim();
        if s == "0" {
            return Ok(OreOperator::zero());
        }
        let mut terms = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        let bytes = s.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' if depth == 0 => {
                    terms.push(&s[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::Parse { pos: s.len(), msg: "unbalanced parenthesis".into() });
        }
        terms.push(&s[start..]);
        OreOperator::from_terms(&terms)
    }
}

/// Positive rational gcd of the coefficients of polynomial entries.
fn content_of<'a>(xs: impl Iterator<Item = &'a RatFunc>) -> Rational {
    let mut g: Option<Rational> = None;
    for x in xs {
        if x.is_zero() {
            continue;
        }
        let (c, _) = x.num().content_primitive();
        let c = c.abs();
        g = Some(match g {
            None => c,
            Some(y) => rat_gcd(&y, &c),
        });
    }
    g.unwrap_or_else(Rational::one)
}

fn rat_gcd(a: &Rational, b: &Rational) -> Rational {
    use num_integer::Integer;
    let n = a.numer().gcd(b.numer());
    let d = a.denom().lcm(b.denom());
    Rational::new(n, d)
}

impl fmt::Display for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn linear_product(roots: impl IntoIterator<Item = Rational>) -> Poly {
    roots.into_iter().fold(Poly::one(), |acc, r| &acc * &Poly::new(vec![r, Rational::one()]))
}

/// `∏(θ + β_i − 1) − t∏(θ + α_i)`.
pub fn build_hypergeometric(alpha: &[Rational], beta: &[Rational]) -> Result<OreOperator> {
    if alpha.is_empty() || alpha.len() != beta.len() {
        return Err(Error::InvalidArgument("parameter multisets must be nonempty and of equal size".into()));
    }
    let one = Rational::one();
    let p = OreOperator::from_theta_poly(&linear_product(beta.iter().map(|b| b - &one)));
    let q = OreOperator::from_theta_poly(&linear_product(alpha.iter().cloned()));
    Ok(p.sub(&q.left_mul(&RatFunc::t())))
}

/// Exponent data of the reduced GKZ operator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GKZParams {
    pub alpha_eta: Vec<Rational>,
    pub beta_eta: Vec<Rational>,
    pub eta: Vec<i64>,
}

/// Integer `η̄` with `Aη̄ = (−β₀, −β, 0)`.
pub fn solve_eta(model: &ToricModel, beta0: i64, beta: &[i64]) -> Result<Vec<i64>> {
    if beta.len() != model.d() || beta0 < 1 {
        return Err(Error::InvalidArgument("form does not match the model dimension".into()));
    }
    let inv = inverse_matrix(model);
    let mut rhs = vec![BigInt::from(-beta0)];
    rhs.extend(beta.iter().map(|&b| BigInt::from(-b)));
    rhs.push(BigInt::zero());
    inv.mul_vec(&rhs)
        .into_iter()
        .map(|x| i64::try_from(x).map_err(|_| Error::BoundExceeded("eta entry exceeds 64 bits".into())))
        .collect()
}

fn gkz_roots(g: &GammaVector, eta: &[i64], positive: bool) -> Vec<Rational> {
    let mut out = Vec::new();
    for (&gi, &ei) in g.entries().iter().zip(eta) {
        if (gi > 0) != positive {
            continue;
        }
        for j in 0..gi.abs() {
            out.push(Rational::new(BigInt::from(ei - j), BigInt::from(gi)));
        }
    }
    out
}

/// The reduced GKZ operator in `t` with `z = Γt`, divided by `Γ`.
pub fn build_gkz_operator(g: &GammaVector, eta: &[i64]) -> Result<(OreOperator, GKZParams)> {
    if eta.len() != g.len() {
        return Err(Error::InvalidArgument("eta must have one entry per gamma entry".into()));
    }
    let pos = gkz_roots(g, eta, true);
    let neg = gkz_roots(g, eta, false);
    let p = OreOperator::from_theta_poly(&linear_product(pos.iter().cloned()));
    let n = OreOperator::from_theta_poly(&linear_product(neg.iter().cloned()));
    let op = p.sub(&n.left_mul(&RatFunc::t()));
    let one = Rational::one();
    let params = GKZParams { alpha_eta: neg, beta_eta: pos.iter().map(|x| x + &one).collect(), eta: eta.to_vec() };
    Ok((op, params))
}

fn by_residue(v: &[Rational]) -> Vec<Rational> {
    let mut v = v.to_vec();
    v.sort_by(|a, b| frac(a).cmp(&frac(b)).then_with(|| a.cmp(b)));
    v
}

/// Removes pairs `(a, b)` with `a − b ∈ ℤ`.
pub fn cancel_parameters(alpha: &[Rational], beta: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let a = by_residue(alpha);
    let mut b: Vec<Option<Rational>> = by_residue(beta).into_iter().map(Some).collect();
    let mut rest_a = Vec::new();
    for x in a {
        let hit = b.iter().position(|y| y.as_ref().is_some_and(|y| (&x - y).is_integer()));
        match hit {
            Some(i) => b[i] = None,
            None => rest_a.push(x),
        }
    }
    let rest_b = b.into_iter().flatten().collect();
    (rest_a, rest_b)
}

/// Hypergeometric operator of the cancelled parameters.
pub fn cancelled_operator(params: &GKZParams) -> Result<OreOperator> {
    let (a, b) = cancel_parameters(&params.alpha_eta, &params.beta_eta);
    if a.is_empty() {
        return Err(Error::TrivialSystem);
    }
    build_hypergeometric(&a, &b)
}

/// Exact local exponents at `t = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalExponents {
    /// Rational exponents with multiplicity, sorted.
    pub rational: Vec<Rational>,
    /// Monic factor of the indicial polynomial without rational roots.
    pub residual: Poly,
}

impl LocalExponents {
    pub fn all_integral(&self) -> bool {
        self.residual.is_one() && self.rational.iter().all(|r| r.is_integer())
    }
}

pub fn local_exponents_at_zero(a: &OreOperator) -> Result<LocalExponents> {
    let ind = a.indicial_polynomial()?;
    let (rational, residual) = ind.rational_roots();
    Ok(LocalExponents { rational, residual })
}

/// Outcome of the bounded-order probe at `t = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SingularityVerdict {
    Genuine,
    PossiblyApparent,
}

pub const DEFAULT_JET_ORDER: usize = 50;

/// Local monodromy test at `t = 1` through exponents and log-free jets.
pub fn apparent_singularity_probe(a: &OreOperator, jet_order: usize) -> Result<SingularityVerdict> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("zero operator".into()));
    }
    if jet_order < a.order() {
        return Err(Error::InvalidArgument("jet order below the operator order".into()));
    }
    let local = a.recentre(&Rational::one());
    let expansion = local.expansion_at_zero()?;
    let exps = local_exponents_at_zero(&local)?;
    if !exps.all_integral() {
        return Ok(SingularityVerdict::Genuine);
    }
    let n = local.order();
    let rho = exps.rational[0].clone();
    let spread = (exps.rational.last().unwrap() - &rho).to_integer();
    let len = jet_order.max(usize::try_from(spread).unwrap_or(usize::MAX).saturating_add(1));
    let mut rows = Vec::with_capacity(len);
    for eq in 0..len {
        let mut row = vec![Rational::zero(); len];
        for (k, pk) in expansion.iter().enumerate() {
            if k > eq {
                break;
            }
            let e = &rho + Rational::from_integer(BigInt::from(eq - k));
            row[eq - k] = pk.eval(&e);
        }
        rows.push(row);
    }
    let free = nullspace(&rows, len).len();
    Ok(if free >= n { SingularityVerdict::PossiblyApparent } else { SingularityVerdict::Genuine })
}
