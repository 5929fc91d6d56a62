//! Sparse Laurent polynomials in `x_1..x_n` with coefficients in ℚ(t).

use std::collections::BTreeMap;
use std::fmt;

use super::{RatFunc, Rational};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, RatFunc>,
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(exp: Vec<i64>, c: RatFunc) -> Self {
        let mut p = LaurentPolynomial::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, RatFunc> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[i64]) -> RatFunc {
        self.terms.get(exp).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn add_term(&mut self, exp: Vec<i64>, c: RatFunc) {
        assert_eq!(exp.len(), self.nvars, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&exp) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(exp, v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// `x_i·∂/∂x_i`.
    pub fn euler(&self, i: usize) -> Self {
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.scale(&Rational::from_integer(e[i].into())));
        }
        out
    }

    /// `t·∂/∂t` applied to the coefficients.
    pub fn theta_t(&self) -> Self {
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.theta());
        }
        out
    }

    /// Evaluates at a point of `(ℚ^×)^n` after specialising `t`.
    pub fn eval(&self, t: &Rational, x: &[Rational]) -> Option<Rational> {
        let mut acc = Rational::from_integer(0.into());
        for (e, c) in &self.terms {
            let mut term = c.eval(t)?;
            for (xi, &ei) in x.iter().zip(e) {
                term *= super::rpow(xi, ei);
            }
            acc += term;
        }
        Some(acc)
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c})*x^{e:?}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}
