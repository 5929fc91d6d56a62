//! Exact arithmetic: rationals, dense polynomials, rational functions,
//! sparse Laurent polynomials and integer matrices.

pub mod cyclotomic;
pub mod intmatrix;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod qmatrix;
pub mod ratfunc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use cyclotomic::cyclotomic;
pub use intmatrix::{kernel_basis, smith_normal_form, IntMatrix};
pub use laurent::LaurentPolynomial;
pub use linalg::Field;
pub use poly::Poly;
pub use qmatrix::QMatrix;
pub use ratfunc::RatFunc;

/// Arbitrary precision rational number.
pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q` text, or just `p` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse { pos: 0, msg: format!("not a rational: {s:?}") };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// Representative of `r mod 1` in `(0, 1]`.
pub fn frac_pos(r: &Rational) -> Rational {
    let f = frac(r);
    if Zero::is_zero(&f) {
        <Rational as One>::one()
    } else {
        f
    }
}

/// `b^e` for a rational base and signed exponent.
pub fn rpow(b: &Rational, e: i64) -> Rational {
    let p = num_traits::pow(b.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::lcm(a, b)
}

pub fn abs_big(a: &BigInt) -> BigInt {
    a.abs()
}
