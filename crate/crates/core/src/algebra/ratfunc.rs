//! Rational functions in `t` over ℚ, kept in a canonical reduced form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{parse_rational, Poly, Rational};
use crate::error::{Error, Result};

/// `num/den` with `den` monic and `gcd(num, den) = 1`; zero is `0/1`.
/// Structural equality is therefore mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let l = d.lead();
        if !l.is_one() {
            let li = l.recip();
            n = n.scale(&li);
            d = d.scale(&li);
        }
        RatFunc { num: n, den: d }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn from_i64(c: i64) -> Self {
        RatFunc::constant(Rational::from_integer(c.into()))
    }

    /// The variable `t`.
    pub fn t() -> Self {
        RatFunc::from_poly(Poly::x_pow(1))
    }

    /// `c·t^e` for any integer `e`.
    pub fn monomial(c: Rational, e: i64) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        if e >= 0 {
            RatFunc::from_poly(Poly::monomial(c, e as usize))
        } else {
            RatFunc { num: Poly::constant(c), den: Poly::x_pow((-e) as usize) }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Constant value if this is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `t·d/dt`.
    pub fn theta(&self) -> RatFunc {
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.theta());
        }
        let n = &(&self.num.theta() * &self.den) - &(&self.num * &self.den.theta());
        RatFunc::new(n, &self.den * &self.den)
    }

    /// Valuation at `t = 0`.
    pub fn valuation(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        let vd = self.den.valuation().unwrap() as i64;
        Some(vn - vd)
    }

    /// Leading Laurent coefficient at `t = 0`.
    pub fn leading_at_zero(&self) -> Rational {
        match self.num.valuation() {
            None => Rational::zero(),
            Some(vn) => {
                let vd = self.den.valuation().unwrap();
                self.num.coeff(vn) / self.den.coeff(vd)
            }
        }
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Substitute `t = s + a`.
    pub fn taylor_shift(&self, a: &Rational) -> RatFunc {
        RatFunc::new(self.num.taylor_shift(a), self.den.taylor_shift(a))
    }

    /// Integer numerator and denominator with coprime combined content and
    /// positive leading denominator coefficient.
    pub fn integer_parts(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        if self.is_zero() {
            return (Vec::new(), vec![BigInt::one()]);
        }
        let (cn, pn) = self.num.content_primitive();
        let (cd, pd) = self.den.content_primitive();
        let c = cn / cd;
        let n = pn.into_iter().map(|x| x * c.numer()).collect();
        let d = pd.into_iter().map(|x| x * c.denom()).collect();
        (n, d)
    }

    /// `(N)/(D)` with integer polynomials in `t`.
    pub fn to_text(&self) -> String {
        let (n, d) = self.integer_parts();
        let np = Poly::new(n.into_iter().map(Rational::from_integer).collect());
        let dp = Poly::new(d.into_iter().map(Rational::from_integer).collect());
        format!("({})/({})", np.display_var("t"), dp.display_var("t"))
    }

    /// Parses `(N)/(D)`, `(N)`, or a bare polynomial in `t`.
    pub fn parse(s: &str) -> Result<RatFunc> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('(') {
            let close = matching_paren(rest).ok_or_else(|| perr(0, "unbalanced parenthesis"))?;
            let num = parse_poly(&rest[..close], "t")?;
            let tail = rest[close + 1..].trim();
            if tail.is_empty() {
                return Ok(RatFunc::from_poly(num));
            }
            let tail = tail.strip_prefix('/').ok_or_else(|| perr(close + 1, "expected '/'"))?.trim();
            let inner = tail
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| perr(close + 2, "expected parenthesised denominator"))?;
            let den = parse_poly(inner, "t")?;
            if den.is_zero() {
                return Err(perr(close + 2, "zero denominator"));
            }
            Ok(RatFunc::new(num, den))
        } else {
            Ok(RatFunc::from_poly(parse_poly(s, "t")?))
        }
    }
}

fn perr(pos: usize, msg: &str) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Parses sums of terms `c`, `c*v`, `c*v^k`, `v^k` with rational `c`.
pub fn parse_poly(s: &str, var: &str) -> Result<Poly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(perr(0, "empty polynomial"));
    }
    let mut terms: Vec<(usize, String)> = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
            terms.push((start, compact[start..i].to_string()));
            start = i;
        }
    }
    terms.push((start, compact[start..].to_string()));
    let mut acc = Poly::zero();
    for (pos, term) in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term.strip_prefix('+').unwrap_or(&term)),
        };
        if body.is_empty() {
            return Err(perr(pos, "empty term"));
        }
        let (coef, power) = if let Some(idx) = body.find(var) {
            let c = body[..idx].trim_end_matches('*');
            let c = if c.is_empty() {
                Rational::one()
            } else {
                parse_rational(c).map_err(|_| perr(pos, "bad coefficient"))?
            };
            let rest = &body[idx + var.len()..];
            let e = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|x| x.parse::<usize>().ok())
                    .ok_or_else(|| perr(pos + idx, "bad exponent"))?
            };
            (c, e)
        } else {
            (parse_rational(body).map_err(|_| perr(pos, "bad constant"))?, 0)
        };
        let coef = if neg { -coef } else { coef };
        acc = &acc + &Poly::monomial(coef, power);
    }
    Ok(acc)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num.display_var("t"))
        } else {
            write!(f, "({})/({})", self.num.display_var("t"), self.den.display_var("t"))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return RatFunc::from_poly(&self.num + &o.num);
            }
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &o.den);
        let a = self.den.exact_div(&g);
        let b = o.den.exact_div(&g);
        let n = &(&self.num * &b) + &(&o.num * &a);
        RatFunc::new(n, &a * &o.den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(&self.num * &o.num);
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let g1 = Poly::gcd(&self.num, &o.den);
        let g2 = Poly::gcd(&o.num, &self.den);
        let n = &self.num.exact_div(&g1) * &o.num.exact_div(&g2);
        let d = &self.den.exact_div(&g2) * &o.den.exact_div(&g1);
        let l = d.lead();
        if l.is_one() {
            RatFunc { num: n, den: d }
        } else {
            let li = l.recip();
            RatFunc { num: n.scale(&li), den: d.scale(&li) }
        }
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &RatFunc) -> RatFunc {
        self * &o.inv()
    }
}

impl From<Rational> for RatFunc {
    fn from(c: Rational) -> Self {
        RatFunc::constant(c)
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_i64(n), Poly::from_i64(d))
    }

    #[test]
    fn canonical_form() {
        let a = rf(&[-2, 2], &[-3, 0, 3]);
        let b = rf(&[2], &[3, 3]);
        assert_eq!(a, b);
        assert!(a.den().lead() == q(1));
    }

    #[test]
    fn field_ops() {
        let a = rf(&[1, 2], &[0, 1, 1]);
        let b = rf(&[3, 0, -1], &[5, 1]);
        let c = &(&a * &b) / &b;
        assert_eq!(c, a);
        assert_eq!(&(&a + &b) - &b, a);
        assert!((&a * &a.inv()).is_one());
    }

    #[test]
    fn theta_of_quotient() {
        // θ(1/(1-t)) = t/(1-t)^2
        let a = rf(&[1], &[1, -1]);
        assert_eq!(a.theta(), rf(&[0, 1], &[1, -2, 1]));
    }

    #[test]
    fn text_roundtrip() {
        let a = rf(&[1, 0, -6], &[0, 4, -2]).scale(&qf(3, 7));
        let s = a.to_text();
        assert_eq!(RatFunc::parse(&s).unwrap(), a);
        assert_eq!(RatFunc::parse("(-3*t^2 + t - 1)/(2)").unwrap(), rf(&[-1, 1, -3], &[2]));
    }
}
