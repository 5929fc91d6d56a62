//! Levelt normal form of the hypergeometric monodromy.
//!
//! Loops around `0`, `1`, `∞` satisfy `g_∞ g_1 g_0 = 1`, so
//! `h_∞ = M_∞`, `h_0 = M_0^{−1}` and `h_1 = M_∞^{−1} M_0`.

use num_traits::{One, Zero};

use crate::algebra::{Poly, QMatrix};
use crate::error::{Error, Result};
use crate::gamma::{family_parameter, GammaVector};

/// Companion matrix of a monic `p`: ones below the diagonal and `−a_i` in
/// the last column.
pub fn companion(p: &Poly) -> Result<QMatrix> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::InvalidArgument("companion needs degree at least 1".into())),
    };
    if !p.lead().is_one() {
        return Err(Error::InvalidArgument("companion needs a monic polynomial".into()));
    }
    let mut m = QMatrix::zeros(n, n);
    for i in 1..n {
        m.set(i, i - 1, One::one());
    }
    for i in 0..n {
        m.set(i, n - 1, -p.coeff(i));
    }
    Ok(m)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonodromyTriple {
    pub h0: QMatrix,
    pub h1: QMatrix,
    pub hinf: QMatrix,
}

impl MonodromyTriple {
    pub fn rank(&self) -> usize {
        self.h0.rows
    }

    /// `h_∞ h_1 h_0`.
    pub fn product(&self) -> QMatrix {
        self.hinf.mul(&self.h1).mul(&self.h0)
    }
}

/// Triple attached to the coprime pair `(q_∞, q_0)`.
pub fn levelt_from_polys(q_inf: &Poly, q_zero: &Poly) -> Result<MonodromyTriple> {
    if q_inf.degree() != q_zero.degree() {
        return Err(Error::InvalidArgument("characteristic polynomials differ in degree".into()));
    }
    let m_inf = companion(q_inf)?;
    let m_zero = companion(q_zero)?;
    let h0 = m_zero.inverse().ok_or_else(|| Error::InvalidArgument("q_0(0) = 0".into()))?;
    let inf_inv = m_inf.inverse().ok_or_else(|| Error::InvalidArgument("q_∞(0) = 0".into()))?;
    Ok(MonodromyTriple { h0, h1: inf_inv.mul(&m_zero), hinf: m_inf })
}

pub fn levelt_triple(g: &GammaVector) -> Result<MonodromyTriple> {
    let fp = family_parameter(g)?;
    levelt_from_polys(&fp.q_inf(), &fp.q_zero())
}

/// `rank(m − I)`.
pub fn pseudoreflection_rank(m: &QMatrix) -> usize {
    m.sub(&QMatrix::identity(m.rows)).rank()
}

/// Checks the product relation, both characteristic polynomials and the
/// pseudoreflection property.
pub fn verify_triple(t: &MonodromyTriple, q_inf: &Poly, q_zero: &Poly) -> bool {
    let n = t.rank();
    let h0_inv = match t.h0.inverse() {
        Some(m) => m,
        None => return false,
    };
    t.product() == QMatrix::identity(n)
        && t.hinf.charpoly() == *q_inf
        && h0_inv.charpoly() == *q_zero
        && pseudoreflection_rank(&t.h1) == 1
        && !q_inf.coeff(0).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclotomic, q, Rational};
    use crate::gamma::{hg_params, make_gamma};
    use crate::toric::tests::prime_gamma;
    use proptest::prelude::*;

    fn g(v: &[i64]) -> GammaVector {
        make_gamma(v).unwrap()
    }

    fn phi(n: u64) -> Poly {
        cyclotomic(n).unwrap()
    }

    fn qm(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    /// `det(xI − m)` at `n + 1` integer points, interpolated.
    fn charpoly_by_interpolation(m: &QMatrix) -> Poly {
        let n = m.rows;
        let xs: Vec<Rational> = (0..=n as i64).map(q).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| QMatrix::identity(n).scale(x).sub(m).det()).collect();
        let mut acc = Poly::zero();
        for (i, xi) in xs.iter().enumerate() {
            let mut basis = Poly::one();
            let mut den = Rational::one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    basis = &basis * &Poly::new(vec![-xj.clone(), Rational::one()]);
                    den *= xi - xj;
                }
            }
            acc = &acc + &basis.scale(&(&ys[i] / den));
        }
        acc
    }

    #[test]
    fn companion_examples() {
        assert_eq!(companion(&Poly::from_i64(&[-1, 1])).unwrap(), qm(&[&[1]]));
        assert_eq!(companion(&Poly::from_i64(&[1, 1])).unwrap(), qm(&[&[-1]]));
        let c = companion(&phi(5)).unwrap();
        assert_eq!(c.rows, 4);
        assert_eq!(charpoly_by_interpolation(&c), phi(5));
        assert_eq!(c.charpoly(), phi(5));
        assert!(companion(&Poly::from_i64(&[1, 2])).is_err());
        assert!(companion(&Poly::from_i64(&[3])).is_err());
    }

    #[test]
    fn one_dimensional_triple() {
        let t = levelt_triple(&g(&[-2, 1, 1])).unwrap();
        assert_eq!(t.hinf, qm(&[&[-1]]));
        assert_eq!(t.h0, qm(&[&[1]]));
        assert_eq!(t.h1, qm(&[&[-1]]));
        assert_eq!(pseudoreflection_rank(&t.h1), 1);
    }

    #[test]
    fn curve_triple() {
        let t = levelt_triple(&g(&[-5, -2, 3, 4])).unwrap();
        assert_eq!(t.rank(), 4);
        assert_eq!(charpoly_by_interpolation(&t.hinf), phi(5));
        let q0 = &phi(3) * &phi(4);
        assert_eq!(charpoly_by_interpolation(&t.h0.inverse().unwrap()), q0);
        assert_eq!(pseudoreflection_rank(&t.h1), 1);
        assert_eq!(t.product(), QMatrix::identity(4));
        assert!(verify_triple(&t, &phi(5), &q0));
    }

    #[test]
    fn chebyshev_triple() {
        let t = levelt_triple(&g(&[-30, -1, 6, 10, 15])).unwrap();
        assert_eq!(t.rank(), 8);
        assert_eq!(charpoly_by_interpolation(&t.hinf), phi(30));
        assert_eq!(charpoly_by_interpolation(&t.h0.inverse().unwrap()), &(&phi(1) * &phi(2)) * &(&phi(3) * &phi(5)));
        assert_eq!(pseudoreflection_rank(&t.h1), 1);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(pseudoreflection_rank(&QMatrix::identity(3)), 0);
        assert_eq!(pseudoreflection_rank(&qm(&[&[-1, 0], &[0, -1]])), 2);
        assert_eq!(levelt_triple(&g(&[1, -1])), Err(Error::TrivialSystem));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn levelt_properties(gv in prime_gamma()) {
            let fp = match family_parameter(&gv) {
                Ok(f) => f,
                Err(_) => return Ok(()),
            };
            let t = levelt_triple(&gv).unwrap();
            prop_assert!(hg_params(&gv).unwrap().is_irreducible());
            prop_assert_eq!(pseudoreflection_rank(&t.h1), 1);
            prop_assert_eq!(t.product(), QMatrix::identity(t.rank()));
            prop_assert_eq!(t.hinf.charpoly(), fp.q_inf());
            prop_assert_eq!(t.h0.inverse().unwrap().charpoly(), fp.q_zero());
            let (qi, q0) = (fp.q_inf(), fp.q_zero());
            prop_assert_eq!(t.h1.det(), q0.coeff(0) / qi.coeff(0));
        }
    }
}
