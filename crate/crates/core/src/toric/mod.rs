//! Toric models `f = Σ γ_j t^{k_j} x^{m_j}` of a gamma vector and the
//! singularity analysis of the resulting family.

mod polytope;

pub use polytope::{
    newton_polytope, quasi_regularity_check, quasi_regularity_points, Face, FaceVerdict, Facet, LatticePolytope,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::intmatrix::{complete_to_unimodular, inverse_unimodular, smith_normal_form, solve_left_integer};
use crate::algebra::{kernel_basis, rpow, IntMatrix, LaurentPolynomial, RatFunc, Rational};
use crate::error::{Error, Result};
use crate::gamma::{big_gamma, GammaVector};

/// Unimodular `l × l` matrix `A` with rows `(1,…,1)`, the rows of `M`
/// (columns `m_j ∈ ℤ^d`), and the twist `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ToricModel {
    gamma: GammaVector,
    a: IntMatrix,
    m: Vec<Vec<i64>>,
    k: Vec<i64>,
}

impl ToricModel {
    pub fn gamma(&self) -> &GammaVector {
        &self.gamma
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    /// Exponent vectors `m_1..m_l`.
    pub fn m(&self) -> &[Vec<i64>] {
        &self.m
    }

    pub fn k(&self) -> &[i64] {
        &self.k
    }

    /// Number of monomials `l`.
    pub fn l(&self) -> usize {
        self.m.len()
    }

    /// Fibre dimension `d = l − 2`.
    pub fn d(&self) -> usize {
        self.m.len() - 2
    }

    /// Coefficients `u_j = γ_j t^{k_j}`.
    pub fn coefficients(&self) -> Vec<RatFunc> {
        self.gamma
            .entries()
            .iter()
            .zip(&self.k)
            .map(|(&g, &k)| RatFunc::monomial(Rational::from_integer(g.into()), k))
            .collect()
    }

    /// `f` as a Laurent polynomial in `x` over ℚ(t).
    pub fn laurent(&self) -> LaurentPolynomial {
        let mut f = LaurentPolynomial::zero(self.d());
        for (mj, u) in self.m.iter().zip(self.coefficients()) {
            f.add_term(mj.clone(), u);
        }
        f
    }

    /// `Γ = ∏ γ_j^{γ_j}`.
    pub fn big_gamma(&self) -> Rational {
        big_gamma(&self.gamma)
    }

    fn assemble(gamma: GammaVector, m_rows: &[Vec<BigInt>], k: &[BigInt]) -> Result<ToricModel> {
        let l = gamma.len();
        let mut rows = vec![vec![BigInt::one(); l]];
        rows.extend(m_rows.iter().cloned());
        rows.push(k.to_vec());
        import_model(&gamma, &IntMatrix::from_rows(&rows))
    }
}

fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Deterministic model built from the Hermite-reduced kernel of `γ`.
pub fn build_model(g: &GammaVector) -> Result<ToricModel> {
    g.require_prime()?;
    let l = g.len();
    let ker = IntMatrix::from_rows(&kernel_basis(g.entries())?);
    let ones = vec![BigInt::one(); l];
    let c = solve_left_integer(&ker, &ones).expect("ones lies in the saturated kernel");
    let w = complete_to_unimodular(&c).expect("coordinates of a primitive vector are primitive");
    let b = w.mul(&ker);
    debug_assert_eq!(b.row(0), ones);
    let rest: Vec<Vec<BigInt>> = (1..b.nrows()).map(|i| b.row(i)).collect();
    let mut m_rows: Vec<Vec<BigInt>> =
        if rest.is_empty() { Vec::new() } else { IntMatrix::from_rows(&rest).hermite_rows().to_rows() };
    for r in &mut m_rows {
        let mn = r.iter().min().unwrap().clone();
        for x in r.iter_mut() {
            *x -= &mn;
        }
    }
    // k from the extended gcd certificate, reduced modulo the kernel
    let (u, _, v) = smith_normal_form(&IntMatrix::from_i64(&[g.entries().to_vec()]));
    let mut k = v.col(0);
    if u.get(0, 0).is_negative() {
        k.iter_mut().for_each(|x| *x = -x.clone());
    }
    for row in ker.hermite_rows().to_rows() {
        let p = row.iter().position(|x| !x.is_zero()).unwrap();
        let qq = num_integer::Integer::div_floor(&k[p], &row[p]);
        for (kj, rj) in k.iter_mut().zip(&row) {
            *kj -= &qq * rj;
        }
    }
    ToricModel::assemble(g.clone(), &m_rows, &k)
}

/// Hand-picked models for the worked curve `(−5,−2,3,4)` and threefold
/// `(−30,−1,6,10,15)`, in the coordinates used for their standard forms.
pub fn standard_model(g: &GammaVector) -> Option<ToricModel> {
    let rows: Vec<Vec<i64>> = match g.entries() {
        [-5, -2, 3, 4] => vec![vec![1, 1, 1, 1], vec![2, 0, 2, 1], vec![0, 3, 2, 0], vec![0, 1, 1, 0]],
        [-30, -1, 6, 10, 15] => vec![
            vec![1, 1, 1, 1, 1],
            vec![1, 0, 5, 0, 0],
            vec![1, 0, 0, 3, 0],
            vec![1, 0, 0, 0, 2],
            vec![0, -1, 0, 0, 0],
        ],
        _ => return None,
    };
    Some(import_model(g, &IntMatrix::from_i64(&rows)).expect("standard models are valid"))
}

/// Validates a user supplied matrix.
pub fn import_model(g: &GammaVector, a: &IntMatrix) -> Result<ToricModel> {
    let l = g.len();
    if a.nrows() != l || a.ncols() != l {
        return Err(Error::InvalidArgument(format!("A must be {l}x{l}")));
    }
    if !a.row(0).iter().all(|x| x.is_one()) {
        return Err(Error::RowOneNotOnes);
    }
    let gv = big_vec(g.entries());
    for i in 0..l - 1 {
        let dot: BigInt = a.row(i).iter().zip(&gv).map(|(x, y)| x * y).sum();
        if !dot.is_zero() {
            return Err(Error::KernelConditionFailed(format!("row {} is not orthogonal to gamma", i + 1)));
        }
    }
    let top = IntMatrix::from_rows(&(0..l - 1).map(|i| a.row(i)).collect::<Vec<_>>());
    let inv = top.invariant_factors();
    if inv.len() != l - 1 || !inv.iter().all(|x| x.is_one()) {
        return Err(Error::KernelConditionFailed("rows do not generate the saturated kernel".into()));
    }
    let kd: BigInt = a.row(l - 1).iter().zip(&gv).map(|(x, y)| x * y).sum();
    if !kd.is_one() {
        return Err(Error::TwistConditionFailed(kd.to_string()));
    }
    let det = a.det();
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    let small = a.to_i64_rows().ok_or_else(|| Error::InvalidArgument("entries exceed 64 bits".into()))?;
    let m: Vec<Vec<i64>> = (0..l).map(|j| (1..l - 1).map(|i| small[i][j]).collect()).collect();
    let k = small[l - 1].clone();
    Ok(ToricModel { gamma: g.clone(), a: a.clone(), m, k })
}

/// Moves `m_h` to the origin and `k_h` to zero (`h` is 0-based).
pub fn translate_model(model: &ToricModel, h: usize) -> ToricModel {
    let l = model.l();
    let d = model.d();
    let mut rows = vec![vec![1i64; l]];
    for i in 0..d {
        rows.push((0..l).map(|j| model.m[j][i] - model.m[h][i]).collect());
    }
    rows.push(model.k.iter().map(|x| x - model.k[h]).collect());
    import_model(&model.gamma, &IntMatrix::from_i64(&rows)).expect("translation preserves validity")
}

/// `∏ u_j^{γ_j} = Γ`.
pub fn singular_fiber_criterion(g: &GammaVector, u: &[Rational]) -> bool {
    assert_eq!(u.len(), g.len(), "one coefficient per entry");
    let mut p = Rational::one();
    for (uj, &gj) in u.iter().zip(g.entries()) {
        p *= rpow(uj, gj);
    }
    p == big_gamma(g)
}

/// The singular point of `Σ u_j x^{m_j} = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SingularPoint {
    Rational(Vec<Rational>),
    /// `y^{s_i} = r_i` in coordinates `x = y^V` when some root is not rational.
    Certificate {
        powers: Vec<BigInt>,
        rhs: Vec<Rational>,
        change: IntMatrix,
    },
}

/// Solves `x^{m_j − m_1} = u_1 γ_j / (γ_1 u_j)`.
pub fn singular_point(model: &ToricModel, u: &[Rational]) -> Result<SingularPoint> {
    if !singular_fiber_criterion(&model.gamma, u) {
        return Err(Error::CriterionFails);
    }
    let l = model.l();
    let d = model.d();
    let g = model.gamma.entries();
    let diffs: Vec<Vec<i64>> = (1..l).map(|j| (0..d).map(|i| model.m[j][i] - model.m[0][i]).collect()).collect();
    let rhs: Vec<Rational> = (1..l)
        .map(|j| &u[0] * Rational::from_integer(g[j].into()) / (Rational::from_integer(g[0].into()) * &u[j]))
        .collect();
    let dm = IntMatrix::from_i64(&diffs);
    let (uu, s, v) = smith_normal_form(&dm);
    let pow_of = |row: usize| {
        let mut acc = Rational::one();
        for (j, r) in rhs.iter().enumerate() {
            let e = uu.get(row, j).to_i64().expect("small exponent");
            acc *= rpow(r, e);
        }
        acc
    };
    for i in d..l - 1 {
        if !pow_of(i).is_one() {
            return Err(Error::CriterionFails);
        }
    }
    let targets: Vec<Rational> = (0..d).map(pow_of).collect();
    let powers: Vec<BigInt> = (0..d).map(|i| s.get(i, i).clone()).collect();
    let mut y = Vec::with_capacity(d);
    for (t, p) in targets.iter().zip(&powers) {
        match rational_root(t, p.to_u32().expect("small power")) {
            Some(r) => y.push(r),
            None => return Ok(SingularPoint::Certificate { powers, rhs: targets, change: v }),
        }
    }
    let x = (0..d)
        .map(|i| {
            let mut acc = Rational::one();
            for (k, yk) in y.iter().enumerate() {
                acc *= rpow(yk, v.get(i, k).to_i64().expect("small exponent"));
            }
            acc
        })
        .collect();
    Ok(SingularPoint::Rational(x))
}

fn rational_root(x: &Rational, n: u32) -> Option<Rational> {
    if n == 1 {
        return Some(x.clone());
    }
    let neg = x.is_negative();
    if neg && n.is_multiple_of(2) {
        return None;
    }
    let a = x.numer().abs().nth_root(n);
    let b = x.denom().nth_root(n);
    let r = Rational::new(a, b);
    let r = if neg { -r } else { r };
    if num_traits::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

/// `det(M·diag(γ)·M^T)`; equals `−∏ γ_j`.
pub fn hessian_determinant(model: &ToricModel) -> BigInt {
    hessian(model).det()
}

pub fn hessian(model: &ToricModel) -> IntMatrix {
    let d = model.d();
    let g = model.gamma.entries();
    let mut h = IntMatrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            let s: i64 = (0..model.l()).map(|j| g[j] * model.m[j][a] * model.m[j][b]).sum();
            h.set(a, b, s.into());
        }
    }
    h
}

/// Inverse of `A`.
pub fn inverse_matrix(model: &ToricModel) -> IntMatrix {
    inverse_unimodular(&model.a).expect("A is unimodular")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::{q, qf};
    use crate::gamma::{make_gamma, primify};
    use proptest::prelude::*;

    pub fn curve_model() -> ToricModel {
        standard_model(&make_gamma(&[-5, -2, 3, 4]).unwrap()).unwrap()
    }

    pub fn chebyshev_model() -> ToricModel {
        standard_model(&make_gamma(&[-30, -1, 6, 10, 15]).unwrap()).unwrap()
    }

    fn check_invariants(m: &ToricModel) {
        let a = m.matrix();
        assert!(a.det().abs().is_one());
        assert!(a.row(0).iter().all(|x| x.is_one()));
        let k: i64 = m.k().iter().zip(m.gamma().entries()).map(|(a, b)| a * b).sum();
        assert_eq!(k, 1);
        for i in 0..m.l() {
            for j in i + 1..m.l() {
                assert_ne!(m.m()[i], m.m()[j]);
            }
        }
    }

    #[test]
    fn standard_models_import() {
        assert!(standard_model(&make_gamma(&[-2, 1, 1]).unwrap()).is_none());
        let c = curve_model();
        assert_eq!(c.m(), &[vec![2, 0], vec![0, 3], vec![2, 2], vec![1, 0]]);
        check_invariants(&c);
        check_invariants(&chebyshev_model());
    }

    #[test]
    fn import_rejections() {
        let g = make_gamma(&[-5, -2, 3, 4]).unwrap();
        assert_eq!(import_model(&g, &IntMatrix::identity(4)), Err(Error::RowOneNotOnes));
        let mut rows = vec![vec![1, 1, 1, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]];
        assert!(matches!(import_model(&g, &IntMatrix::from_i64(&rows)), Err(Error::KernelConditionFailed(_))));
        rows = vec![vec![1, 1, 1, 1], vec![2, 0, 2, 1], vec![0, 3, 2, 0], vec![0, 0, 0, 0]];
        assert!(matches!(import_model(&g, &IntMatrix::from_i64(&rows)), Err(Error::TwistConditionFailed(_))));
    }

    #[test]
    fn built_models_valid() {
        for v in [vec![-5, -2, 3, 4], vec![-30, -1, 6, 10, 15], vec![-2, 1, 1], vec![-4, 1, 1, 2]] {
            let m = build_model(&make_gamma(&v).unwrap()).unwrap();
            check_invariants(&m);
        }
        assert_eq!(build_model(&make_gamma(&[-2, 1, 1]).unwrap()).unwrap().d(), 1);
        assert!(matches!(build_model(&make_gamma(&[-4, 2, 2]).unwrap()), Err(Error::NotPrime(2))));
    }

    #[test]
    fn translation() {
        let c = curve_model();
        let t = translate_model(&c, 3);
        assert_eq!(t.m(), &[vec![1, 0], vec![-1, 3], vec![1, 2], vec![0, 0]]);
        assert_eq!(t.k(), c.k());
        assert_eq!(translate_model(&t, 3), t);
        check_invariants(&translate_model(&chebyshev_model(), 1));
    }

    #[test]
    fn hessian_examples() {
        let c = curve_model();
        assert_eq!(hessian(&c), IntMatrix::from_i64(&[vec![-4, 12], vec![12, -6]]));
        assert_eq!(hessian_determinant(&c), BigInt::from(-120));
        assert_eq!(hessian_determinant(&chebyshev_model()), BigInt::from(-27000));
        let m = build_model(&make_gamma(&[-2, 1, 1]).unwrap()).unwrap();
        assert_eq!(hessian_determinant(&m), BigInt::from(2));
    }

    #[test]
    fn criterion_examples() {
        let g = make_gamma(&[-5, -2, 3, 4]).unwrap();
        let u: Vec<Rational> = g.entries().iter().map(|&x| q(x)).collect();
        assert!(singular_fiber_criterion(&g, &u));
        let u2: Vec<Rational> = u.iter().map(|x| x * q(2)).collect();
        assert!(singular_fiber_criterion(&g, &u2));
        // u = (−5, −2t, 3t, 4): the boundary value of u3^3 u4^4/(u1^5 u2^2) is Γ = −3^3·2^6/5^5
        let at = |t: Rational| vec![q(-5), q(-2) * &t, q(3) * &t, q(4)];
        assert!(singular_fiber_criterion(&g, &at(q(1))));
        assert!(!singular_fiber_criterion(&g, &at(qf(1, 2))));
        let r = |u: &[Rational]| rpow(&u[2], 3) * rpow(&u[3], 4) / (rpow(&u[0], 5) * rpow(&u[1], 2));
        assert_eq!(r(&at(q(1))), qf(-27 * 64, 3125));
        assert_eq!(r(&at(q(1))), big_gamma(&g));
    }

    #[test]
    fn singular_points() {
        let c = curve_model();
        let u: Vec<Rational> = c.gamma().entries().iter().map(|&x| q(x)).collect();
        assert_eq!(singular_point(&c, &u).unwrap(), SingularPoint::Rational(vec![q(1), q(1)]));
        let ch = chebyshev_model();
        let u: Vec<Rational> = ch.gamma().entries().iter().map(|&x| q(x)).collect();
        assert_eq!(singular_point(&ch, &u).unwrap(), SingularPoint::Rational(vec![q(1), q(1), q(1)]));
        let bad = vec![q(1), q(1), q(1), q(1)];
        assert_eq!(singular_point(&c, &bad), Err(Error::CriterionFails));
    }

    pub(crate) fn prime_gamma() -> impl Strategy<Value = GammaVector> {
        crate::gamma::tests::gamma_strategy(3, 7, 30).prop_map(|g| primify(&g))
    }

    /// Scales `u = γ` by a random torus point image, keeping the criterion.
    fn scaled_u(m: &ToricModel, x: &[i64], c: i64) -> Vec<Rational> {
        m.m()
            .iter()
            .zip(m.gamma().entries())
            .map(|(mj, &g)| {
                let mut v = q(g) * q(c);
                for (xi, &e) in x.iter().zip(mj) {
                    v *= rpow(&q(*xi), -e);
                }
                v
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn built_model_unimodular_and_hessian(g in prime_gamma()) {
            let m = build_model(&g).unwrap();
            prop_assert!(m.matrix().det().abs().is_one());
            let prod: i64 = g.entries().iter().product();
            prop_assert_eq!(hessian_determinant(&m), BigInt::from(-prod));
        }

        #[test]
        fn translations_compose(g in prime_gamma(), h1 in 0usize..8, h2 in 0usize..8) {
            let m = build_model(&g).unwrap();
            let (h1, h2) = (h1 % m.l(), h2 % m.l());
            let a = translate_model(&translate_model(&m, h1), h2);
            let b = translate_model(&m, h2);
            prop_assert_eq!(a.m(), b.m());
            let prod: i64 = g.entries().iter().product();
            prop_assert_eq!(hessian_determinant(&a), BigInt::from(-prod));
        }

        #[test]
        fn singular_point_solves_system(g in prime_gamma(), x in proptest::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 8), c in 1i64..4) {
            let m = build_model(&g).unwrap();
            let d = m.d();
            let u = scaled_u(&m, &x[..d], c);
            prop_assert!(singular_fiber_criterion(&g, &u));
            let SingularPoint::Rational(p) = singular_point(&m, &u).unwrap() else { panic!("rational input gives rational point") };
            let mut f = q(0);
            let mut grad = vec![q(0); d];
            for (mj, uj) in m.m().iter().zip(&u) {
                let mut mono = uj.clone();
                for (xi, &e) in p.iter().zip(mj) {
                    mono *= rpow(xi, e);
                }
                for (i, gi) in grad.iter_mut().enumerate() {
                    *gi += &mono * q(mj[i]);
                }
                f += mono;
            }
            prop_assert_eq!(f, q(0));
            prop_assert!(grad.iter().all(|v| *v == q(0)));
            let want: Vec<Rational> = x[..d].iter().map(|&v| q(v)).collect();
            prop_assert_eq!(p, want);
        }
    }
}
