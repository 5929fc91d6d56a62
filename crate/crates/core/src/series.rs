//! Power series solutions: hypergeometric series, constant-term series of
//! one-negative-entry gamma vectors, and annihilation checks.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{rpow, Rational};
use crate::error::{Error, Result};
use crate::gamma::{big_gamma, GammaVector};
use crate::ore::OreOperator;
use crate::toric::ToricModel;

/// `c_0 + c_1 t + … + c_N t^N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least one coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// `Σ_k (α_1)_k⋯(α_n)_k / ((β_1)_k⋯(β_n)_k) t^k` up to `t^N`.
pub fn hg_series(alpha: &[Rational], beta: &[Rational], n: usize) -> Result<TruncatedSeries> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = Rational::one();
    out.push(c.clone());
    for k in 0..n {
        let kq = Rational::from_integer(BigInt::from(k));
        let mut den = Rational::one();
        for b in beta {
            den *= b + &kq;
        }
        if den.is_zero() {
            return Err(Error::ZeroPochhammer);
        }
        for a in alpha {
            c *= a + &kq;
        }
        c /= den;
        out.push(c.clone());
    }
    Ok(TruncatedSeries::new(out))
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::one()];
    for i in 1..=n {
        let next = &f[i - 1] * BigInt::from(i);
        f.push(next);
    }
    f
}

fn negative_index(g: &GammaVector) -> Result<usize> {
    let neg: Vec<usize> = (0..g.len()).filter(|&i| g.entries()[i] < 0).collect();
    match neg[..] {
        [i] => Ok(i),
        _ => Err(Error::MultipleNegativeEntries),
    }
}

/// `(−1)^{γ_1 h} (−γ_1 h)! / ∏_{j≥2} (γ_j h)! · Γ^h` for `h = 0..N`, where
/// `γ_1` is the single negative entry.
pub fn constant_term_series(g: &GammaVector, n: usize) -> Result<TruncatedSeries> {
    let neg = negative_index(g)?;
    let g1 = -g.entries()[neg] as usize;
    let fact = factorials(g1 * n);
    let big = big_gamma(g);
    let mut out = Vec::with_capacity(n + 1);
    for h in 0..=n {
        let mut den = BigInt::one();
        for (j, &x) in g.entries().iter().enumerate() {
            if j != neg {
                den *= &fact[x as usize * h];
            }
        }
        let mut c = Rational::new(fact[g1 * h].clone(), den) * rpow(&big, h as i64);
        if (g1 * h) % 2 == 1 {
            c = -c;
        }
        out.push(c);
    }
    Ok(TruncatedSeries::new(out))
}

/// Constant terms of `(−g)^n`, `g = (u_1 x^{m_1})^{−1} Σ_{j≥2} u_j x^{m_j}`,
/// summed by powers of `t`, found by expanding the Laurent polynomial
/// directly for `n ≤ −γ_1·N`.
pub fn constant_term_series_brute(model: &ToricModel, n: usize) -> Result<TruncatedSeries> {
    let g = model.gamma();
    let neg = negative_index(g)?;
    let g1 = g.entries()[neg];
    let (m, k) = (model.m(), model.k());
    let terms: Vec<(Vec<i64>, i64, Rational)> = (0..model.l())
        .filter(|&j| j != neg)
        .map(|j| {
            let x = m[j].iter().zip(&m[neg]).map(|(a, b)| a - b).collect();
            (x, k[j] - k[neg], Rational::new((-g.entries()[j]).into(), g1.into()))
        })
        .collect();
    let zero = vec![0i64; model.d()];
    let mut out = vec![Rational::zero(); n + 1];
    let mut power: HashMap<(Vec<i64>, i64), Rational> = HashMap::from([((zero.clone(), 0), Rational::one())]);
    for step in 0..=(-g1) as usize * n {
        if step > 0 {
            let mut next: HashMap<(Vec<i64>, i64), Rational> = HashMap::new();
            for ((x, e), c) in &power {
                for (dx, de, u) in &terms {
                    let key = (x.iter().zip(dx).map(|(a, b)| a + b).collect(), e + de);
                    *next.entry(key).or_insert_with(Rational::zero) += c * u;
                }
            }
            next.retain(|_, c| !c.is_zero());
            power = next;
        }
        for ((x, e), c) in &power {
            if *x == zero {
                if *e < 0 || *e as usize > n {
                    return Err(Error::Unsupported(format!("constant term at t^{e}")));
                }
                out[*e as usize] += c;
            }
        }
    }
    Ok(TruncatedSeries::new(out))
}

/// Outcome of applying an operator to a truncated series.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Annihilation {
    pub annihilated: bool,
    /// Output coefficients inspected, `t^0..t^{checked−1}`.
    pub checked: usize,
    pub first_nonzero: Option<usize>,
}

/// Applies `op` (cleared of denominators) to `s` and inspects the exactly
/// computable coefficients.
pub fn annihilation_check(op: &OreOperator, s: &TruncatedSeries) -> Result<Annihilation> {
    let need = op.order() + 5;
    if s.order() < need {
        return Err(Error::InsufficientTruncation { need, got: s.order() });
    }
    let out = op.apply_series(&Rational::zero(), s.coeffs());
    let first_nonzero = out.iter().position(|c| !c.is_zero());
    Ok(Annihilation { annihilated: first_nonzero.is_none(), checked: out.len(), first_nonzero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};
    use crate::gamma::{hg_params, make_gamma};
    use crate::ore::build_hypergeometric;
    use crate::toric::build_model;
    use proptest::prelude::*;

    fn g(v: &[i64]) -> GammaVector {
        make_gamma(v).unwrap()
    }

    fn binom(n: u64, k: u64) -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
    }

    #[test]
    fn hg_series_examples() {
        let s = hg_series(&[qf(1, 2), qf(1, 2)], &[q(1), q(1)], 5).unwrap();
        assert_eq!(s.coeff(1), &qf(1, 4));
        for n in 0..=5u64 {
            let want = Rational::new(binom(2 * n, n).pow(2), BigInt::from(16).pow(n as u32));
            assert_eq!(s.coeff(n as usize), &want);
        }
        assert_eq!(hg_series(&[qf(1, 4), qf(3, 4)], &[q(1), q(1)], 1).unwrap().coeff(1), &qf(3, 16));
        let same = hg_series(&[qf(1, 3), qf(5, 7)], &[qf(1, 3), qf(5, 7)], 8).unwrap();
        assert!(same.coeffs().iter().all(|c| c.is_one()));
        assert_eq!(hg_series(&[q(1)], &[q(-2)], 5), Err(Error::ZeroPochhammer));
        assert!(hg_series(&[q(1)], &[q(-2)], 2).is_ok());
    }

    #[test]
    fn constant_term_examples() {
        let s = constant_term_series(&g(&[-2, 1, 1]), 6).unwrap();
        for h in 0..=6u64 {
            assert_eq!(s.coeff(h as usize), &Rational::new(binom(2 * h, h), BigInt::from(4).pow(h as u32)));
        }
        assert_eq!(s.coeff(1), &qf(1, 2));
        let s = constant_term_series(&g(&[-4, 1, 1, 2]), 2).unwrap();
        assert_eq!(s.coeff(1), &qf(3, 16));
        assert_eq!(s.coeff(2), &(q(420) * qf(1, 4096)));
        assert!(constant_term_series(&g(&[-30, 6, 10, 14]), 0).unwrap().coeff(0).is_one());
        assert_eq!(constant_term_series(&g(&[-5, -2, 3, 4]), 3), Err(Error::MultipleNegativeEntries));
    }

    #[test]
    fn annihilation_examples() {
        let p = hg_params(&g(&[-2, 1, 1])).unwrap();
        let h = build_hypergeometric(&p.alpha, &p.beta).unwrap();
        let s = constant_term_series(&g(&[-2, 1, 1]), 30).unwrap();
        assert!(annihilation_check(&h, &s).unwrap().annihilated);

        let h = build_hypergeometric(&[qf(1, 2), qf(1, 2)], &[q(1), q(1)]).unwrap();
        let s = hg_series(&[qf(1, 2), qf(1, 2)], &[q(1), q(1)], 30).unwrap();
        let v = annihilation_check(&h, &s).unwrap();
        assert!(v.annihilated);
        assert_eq!(v.checked, 31);

        let flat = TruncatedSeries::new(vec![q(1); 1].into_iter().chain(vec![q(0); 6]).collect());
        assert!(annihilation_check(&OreOperator::theta(), &flat).unwrap().annihilated);
        let short = TruncatedSeries::new(vec![q(1); 4]);
        assert_eq!(
            annihilation_check(&OreOperator::theta(), &short),
            Err(Error::InsufficientTruncation { need: 6, got: 3 })
        );
    }

    #[test]
    fn wrong_series_is_detected() {
        let h = build_hypergeometric(&[qf(1, 2), qf(1, 2)], &[q(1), q(1)]).unwrap();
        let mut c = hg_series(&[qf(1, 2), qf(1, 2)], &[q(1), q(1)], 20).unwrap().coeffs().to_vec();
        c[7] += q(1);
        let v = annihilation_check(&h, &TruncatedSeries::new(c)).unwrap();
        assert_eq!(v.first_nonzero, Some(7));
    }

    #[test]
    fn no_unit_beta_means_no_annihilation() {
        // as many negative as positive entries: no β equals 1
        for v in [vec![-5, -2, 3, 4], vec![-6, -1, 2, 5], vec![-3, -20, 8, 15]] {
            let p = hg_params(&g(&v)).unwrap();
            assert!(!p.beta.contains(&q(1)));
            let h = build_hypergeometric(&p.alpha, &p.beta).unwrap();
            let s = hg_series(&p.alpha, &p.beta, 20).unwrap();
            assert_eq!(annihilation_check(&h, &s).unwrap().first_nonzero, Some(0));
        }
    }

    /// Prime gamma vectors with one negative entry and `max|γ_i| ≤ bound`.
    fn one_negative_corpus(bound: i64) -> Vec<GammaVector> {
        let mut out = Vec::new();
        for neg in 2..=bound {
            let mut stack: Vec<(Vec<i64>, i64)> = vec![(vec![], neg)];
            while let Some((parts, rest)) = stack.pop() {
                if rest == 0 {
                    if parts.len() >= 2 {
                        let mut e = vec![-neg];
                        e.extend(&parts);
                        let gv = g(&e);
                        if gv.is_prime() {
                            out.push(gv);
                        }
                    }
                    continue;
                }
                let lo = parts.last().copied().unwrap_or(1);
                for p in lo..=rest {
                    let mut next = parts.clone();
                    next.push(p);
                    stack.push((next, rest - p));
                }
            }
        }
        out
    }

    #[test]
    fn constant_terms_are_hypergeometric() {
        let corpus = one_negative_corpus(12);
        assert!(corpus.len() > 100);
        for gv in corpus {
            let p = hg_params(&gv).unwrap();
            assert!(p.beta.contains(&q(1)), "{gv:?}");
            assert_eq!(constant_term_series(&gv, 12).unwrap(), hg_series(&p.alpha, &p.beta, 12).unwrap(), "{gv:?}");
        }
    }

    #[test]
    fn brute_force_oracle_small_corpus() {
        for gv in one_negative_corpus(6) {
            let model = build_model(&gv).unwrap();
            let n = if gv.len() > 4 { 2 } else { 3 };
            assert_eq!(constant_term_series_brute(&model, n).unwrap(), constant_term_series(&gv, n).unwrap(), "{gv:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn hg_series_annihilated_with_unit_beta(
            a in proptest::collection::vec((1i64..12, 1i64..12), 1..4),
            b in proptest::collection::vec((1i64..12, 1i64..12), 0..3),
        ) {
            let alpha: Vec<Rational> = a.iter().map(|&(x, y)| qf(x, y)).collect();
            let mut beta: Vec<Rational> = vec![q(1)];
            beta.extend(b.iter().map(|&(x, y)| qf(x, y)));
            beta.truncate(alpha.len());
            while beta.len() < alpha.len() {
                beta.push(qf(1, 2));
            }
            let h = build_hypergeometric(&alpha, &beta).unwrap();
            let s = hg_series(&alpha, &beta, 15).unwrap();
            prop_assert!(annihilation_check(&h, &s).unwrap().annihilated);
        }

        #[test]
        fn brute_force_matches_formula(v in proptest::collection::vec(1i64..5, 2..4)) {
            let total: i64 = v.iter().sum();
            let mut e = vec![-total];
            e.extend(&v);
            let gv = g(&e);
            prop_assume!(gv.is_prime());
            let model = build_model(&gv).unwrap();
            prop_assert_eq!(constant_term_series_brute(&model, 2).unwrap(), constant_term_series(&gv, 2).unwrap());
        }
    }
}
