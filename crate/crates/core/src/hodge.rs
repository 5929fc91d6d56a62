//! Hodge numbers of the middle graded piece from fractional-part sums.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{Poly, Rational};
use crate::error::Result;
use crate::gamma::GammaVector;

/// Counts of positive and negative entries divisible by `n`.
pub fn m_plus_minus(g: &GammaVector, n: u64) -> (usize, usize) {
    let n = n as i64;
    let p = g.entries().iter().filter(|&&x| x > 0 && x % n == 0).count();
    let m = g.entries().iter().filter(|&&x| x < 0 && x % n == 0).count();
    (p, m)
}

/// `Σ_j T^{Σ_i {jγ_i/N}}` over `1 ≤ j ≤ N` with `gcd(j, N) = 1`.
///
/// For `N = 1` the single term `j = 1` gives the constant `1`.
pub fn delta_n(g: &GammaVector, n: u64) -> Poly {
    let mut coeffs: Vec<i64> = Vec::new();
    for j in 1..=n {
        if j.gcd(&n) != 1 {
            continue;
        }
        let mut s = Rational::zero();
        for &x in g.entries() {
            let r = Rational::new(BigInt::from(j as i64 * x), BigInt::from(n));
            s += &r - r.floor();
        }
        debug_assert!(s.is_integer());
        let e = s.to_integer().to_usize().expect("nonnegative exponent");
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        coeffs[e] += 1;
    }
    Poly::from_i64(&coeffs)
}

/// `δ^#(T)`; the coefficient of `T^{i+1}` is `h^{i, κ−i}`.
pub fn hodge_polynomial(g: &GammaVector) -> Result<Poly> {
    g.require_prime()?;
    let max = g.entries().iter().map(|x| x.unsigned_abs()).max().unwrap_or(1);
    let mut acc = Poly::zero();
    for n in 1..=max {
        let (mp, mm) = m_plus_minus(g, n);
        if mp <= mm {
            continue;
        }
        let ones: Vec<i64> = vec![1; mp - mm];
        let geom = Poly::from_i64(&ones).shift(mm);
        acc = &acc + &(&geom * &delta_n(g, n));
    }
    Ok(acc)
}

/// Triples `(p, q, h^{p,q})` with `p + q = κ`.
pub fn hodge_numbers(g: &GammaVector) -> Result<Vec<(i64, i64, i64)>> {
    let p = hodge_polynomial(g)?;
    let kappa = g.kappa();
    let mut out = Vec::new();
    for i in 0..=kappa.max(0) {
        let h = p.coeff((i + 1) as usize).to_integer().to_i64().expect("small Hodge number");
        out.push((i, kappa - i, h));
    }
    Ok(out)
}

/// `δ^#(1)`.
pub fn hodge_total(g: &GammaVector) -> Result<i64> {
    let p = hodge_polynomial(g)?;
    Ok(p.eval(&Rational::from_integer(1.into())).to_integer().to_i64().expect("small"))
}
