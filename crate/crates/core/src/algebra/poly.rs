//! Dense univariate polynomials over ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_rational, Rational};

/// Polynomial stored by ascending degree. The leading coefficient is nonzero
/// unless the polynomial is zero (empty coefficient list).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `c·T^n`.
    pub fn monomial(c: Rational, n: usize) -> Self {
        let mut v = vec![Rational::zero(); n + 1];
        v[n] = c;
        Poly::new(v)
    }

    /// `T^n`.
    pub fn x_pow(n: usize) -> Self {
        Poly::monomial(Rational::one(), n)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Order of vanishing at 0 (`None` for zero).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead().recip();
        self.scale(&l)
    }

    /// Multiply by `T^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); n];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect(),
        )
    }

    /// `T·p'(T)`.
    pub fn theta(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
    }

    /// `p(T + a)`.
    pub fn taylor_shift(&self, a: &Rational) -> Poly {
        let mut out = Poly::zero();
        let lin = Poly::new(vec![a.clone(), Rational::one()]);
        for c in self.coeffs.iter().rev() {
            out = &(&out * &lin) + &Poly::constant(c.clone());
        }
        out
    }

    /// Euclidean division.
    pub fn div_rem(&self, b: &Poly) -> (Poly, Poly) {
        assert!(!b.is_zero(), "polynomial division by zero");
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return (Poly::zero(), self.clone());
        }
        let inv = b.lead().recip();
        let mut r = self.coeffs.clone();
        let mut qc = vec![Rational::zero(); r.len() - db];
        for i in (0..qc.len()).rev() {
            let c = &r[i + db] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                if !bj.is_zero() {
                    r[i + j] -= &c * bj;
                }
            }
            qc[i] = c;
        }
        r.truncate(db);
        (Poly::new(qc), Poly::new(r))
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, b: &Poly) -> Poly {
        let (q, r) = self.div_rem(b);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero only if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_constant() && !a.is_zero() || b.is_constant() && !b.is_zero() {
            return Poly::one();
        }
        let mut x = a.primitive();
        let mut y = b.primitive();
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            y = r.primitive();
        }
        x.monic()
    }

    /// Integer-coefficient primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        let (_, p) = self.content_primitive();
        Poly::new(p.into_iter().map(Rational::from_integer).collect())
    }

    /// Splits `p = c·P` with `P ∈ ℤ[T]` primitive and positive lead.
    pub fn content_primitive(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (Rational::zero(), Vec::new());
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if self.lead().is_negative() {
            g = -g;
        }
        let prim = ints.into_iter().map(|c| c / &g).collect();
        (Rational::new(g, den), prim)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Rational roots with multiplicity, ascending, plus the remaining factor.
    pub fn rational_roots(&self) -> (Vec<Rational>, Poly) {
        let mut roots = Vec::new();
        if self.is_zero() {
            return (roots, Poly::zero());
        }
        let mut p = self.monic();
        while p.coeff(0).is_zero() && !p.is_constant() {
            roots.push(Rational::zero());
            p = Poly::new(p.coeffs[1..].to_vec());
        }
        if p.is_constant() {
            return (roots, p);
        }
        let (_, ints) = p.content_primitive();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let mut cands = Vec::new();
        for num in divisors(&a0) {
            for den in divisors(&an) {
                if num.gcd(&den).is_one() {
                    let r = Rational::new(num.clone(), den.clone());
                    cands.push(-r.clone());
                    cands.push(r);
                }
            }
        }
        cands.sort();
        for r in cands {
            let lin = Poly::new(vec![-r.clone(), Rational::one()]);
            loop {
                if p.is_constant() || !p.eval(&r).is_zero() {
                    break;
                }
                p = p.exact_div(&lin);
                roots.push(r.clone());
            }
        }
        roots.sort();
        (roots, p.monic())
    }

    pub fn display_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&fmt_rational(&a));
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{}", fmt_rational(&a), mono));
            }
        }
        s
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("T"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => v.push(a + b),
                (Some(a), None) => v.push(a.clone()),
                (None, Some(b)) => v.push(b.clone()),
                _ => unreachable!(),
            }
        }
        Poly::new(v)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Poly::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    #[test]
    fn division_roundtrip() {
        let a = Poly::from_i64(&[1, -3, 0, 2, 5]);
        let b = Poly::from_i64(&[2, 1, 3]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(&(&qq * &b) + &r, a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = Poly::from_i64(&[-1, 1]);
        let a = &f * &Poly::from_i64(&[3, 0, 2]);
        let b = &f * &Poly::from_i64(&[5, 7]);
        assert_eq!(Poly::gcd(&a, &b), f);
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (2T-1)^2 (T+3) (T^2+1)
        let p = &(&Poly::from_i64(&[-1, 2]).pow(2) * &Poly::from_i64(&[3, 1])) * &Poly::from_i64(&[1, 0, 1]);
        let (roots, rest) = p.rational_roots();
        assert_eq!(roots, vec![q(-3), qf(1, 2), qf(1, 2)]);
        assert_eq!(rest, Poly::from_i64(&[1, 0, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_i64(&[-1, 1, -3]).display_var("t"), "-3*t^2 + t - 1");
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let p = Poly::from_i64(&[4, -1, 0, 3]);
        let s = p.taylor_shift(&q(2));
        for x in -3..4 {
            assert_eq!(s.eval(&q(x)), p.eval(&q(x + 2)));
        }
    }
}
