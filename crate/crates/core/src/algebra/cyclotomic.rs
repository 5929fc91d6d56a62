//! Cyclotomic polynomials with a shared memo table.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::One;

use super::{Poly, Rational};
use crate::error::{Error, Result};

static MEMO: OnceLock<Mutex<HashMap<u64, Poly>>> = OnceLock::new();

/// `Φ_N(T)`, obtained by dividing `T^N − 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic(n: u64) -> Result<Poly> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclotomic index must be positive".into()));
    }
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = memo.lock().unwrap().get(&n) {
        return Ok(p.clone());
    }
    let mut p = &Poly::x_pow(n as usize) - &Poly::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p.exact_div(&cyclotomic(d)?);
        }
    }
    memo.lock().unwrap().insert(n, p.clone());
    Ok(p)
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// `T^n − 1`.
pub fn x_pow_minus_one(n: usize) -> Poly {
    &Poly::x_pow(n) - &Poly::constant(Rational::one())
}
