//! Irreducibility of the fibres: the lattice primitivity test and the étale
//! covering data for quadrilateral Newton polytopes.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{IntMatrix, Poly, Rational};
use crate::error::{Error, Result};
use crate::gamma::GammaVector;
use crate::toric::ToricModel;

/// `{p_j − p_1}` spans `ℤ^d`.
pub fn points_primitive(points: &[Vec<i64>]) -> bool {
    let Some(first) = points.first() else { return false };
    let d = first.len();
    if d == 0 {
        return true;
    }
    let diffs: Vec<Vec<i64>> = points[1..].iter().map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
    if diffs.is_empty() {
        return false;
    }
    let inv = IntMatrix::from_i64(&diffs).invariant_factors();
    inv.len() == d && inv.iter().all(|x| x.is_one())
}

pub fn lattice_primitivity(model: &ToricModel) -> bool {
    points_primitive(model.m())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoveringCase {
    DistinctDegrees,
    EqualDegrees,
}

impl CoveringCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoveringCase::DistinctDegrees => "distinct_degrees",
            CoveringCase::EqualDegrees => "equal_degrees",
        }
    }
}

/// The monomial `y_var^exp` attached to one coefficient.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SlotMonomial {
    /// `1` or `2`.
    pub var: u8,
    pub exp: i64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoveringConditions {
    pub coprime_y1: bool,
    pub coprime_y2: bool,
    pub distinct_degrees: bool,
    pub c_integral: bool,
}

impl CoveringConditions {
    pub fn all(&self) -> bool {
        self.coprime_y1 && self.coprime_y2 && self.distinct_degrees && self.c_integral
    }
}

/// Covering `h(y_1, y_2) = Σ u_j y^{slot_j}` for a quadrilateral.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoveringData {
    /// `±1`.
    pub sign: i64,
    /// `normalized[i] = sign · γ[permutation[i]]`.
    pub permutation: [usize; 4],
    pub normalized: [i64; 4],
    pub case: CoveringCase,
    pub a: i64,
    pub big_a: i64,
    pub b: i64,
    pub big_b: i64,
    pub c: i64,
    pub d14: i64,
    pub d23: i64,
    /// `(gcd(n−a, n−b), gcd(a, b))` in the equal-degree case.
    pub de: Option<(i64, i64)>,
    /// Monomials for the normalized coefficients `u_1..u_4`.
    pub slots: [SlotMonomial; 4],
    pub conditions: CoveringConditions,
}

impl CoveringData {
    fn exps(&self, var: u8) -> Vec<i64> {
        self.slots.iter().filter(|s| s.var == var).map(|s| s.exp).collect()
    }

    pub fn y1_exponents(&self) -> Vec<i64> {
        self.exps(1)
    }

    pub fn y2_exponents(&self) -> Vec<i64> {
        self.exps(2)
    }

    /// `deg h_1`, `deg h_2`.
    pub fn degrees(&self) -> (i64, i64) {
        let max = |v: Vec<i64>| v.into_iter().max().unwrap_or(0);
        (max(self.y1_exponents()), max(self.y2_exponents()))
    }

    /// `"u1*y1^5 + u2*y2^1 + …"`.
    pub fn polynomial_text(&self) -> String {
        self.slots
            .iter()
            .enumerate()
            .map(|(j, s)| format!("u{}*y{}^{}", j + 1, s.var, s.exp))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Sign and permutation with `|γ_1| < γ_3 ≤ γ_4 < |γ_2|`, `γ_1, γ_2 < 0`.
fn normalize(g: &[i64]) -> Result<(i64, [usize; 4], [i64; 4])> {
    let neg: Vec<usize> = (0..4).filter(|&i| g[i] < 0).collect();
    let pos: Vec<usize> = (0..4).filter(|&i| g[i] > 0).collect();
    if neg.len() != 2 || pos.len() != 2 {
        return Err(Error::NotQuadrilateral);
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if g[i] + g[j] == 0 {
                return Err(Error::OppositePair);
            }
        }
    }
    let top = (0..4).max_by_key(|&i| (g[i].abs(), i)).unwrap();
    let sign = if g[top] < 0 { 1 } else { -1 };
    let (mut big, mut small) = if sign == 1 { (neg, pos) } else { (pos, neg) };
    big.sort_by_key(|&i| g[i].abs());
    small.sort_by_key(|&i| g[i].abs());
    let perm = [big[0], big[1], small[0], small[1]];
    let norm = perm.map(|i| sign * g[i]);
    debug_assert!(-norm[0] < norm[2] && norm[2] <= norm[3] && norm[3] < -norm[1]);
    Ok((sign, perm, norm))
}

/// Covering data for a prime gamma vector of length 4 with sign pattern
/// `(−, −, +, +)`.
pub fn quadrilateral_covering(g: &GammaVector) -> Result<CoveringData> {
    if g.len() != 4 {
        return Err(Error::NotQuadrilateral);
    }
    let (sign, permutation, n4) = normalize(g.entries())?;
    g.require_prime()?;
    let [g1, g2, g3, g4] = n4;
    let d14 = g1.gcd(&g4);
    let d23 = g2.gcd(&g3);
    let (a, big_a) = (-g1 / d14, g4 / d14);
    let (b, big_b) = (g3 / d23, -g2 / d23);
    let c_integral = (big_a - a) % d23 == 0 && (big_b - b) % d14 == 0 && (big_a - a) / d23 == (big_b - b) / d14;
    let c = (big_a - a) / d23;
    let y = |var: u8, exp: i64| SlotMonomial { var, exp };
    let (case, de, slots) = if big_a != big_b {
        (CoveringCase::DistinctDegrees, None, [y(1, big_a), y(2, b), y(2, big_b), y(1, a)])
    } else {
        let n = big_a;
        let d = (n - a).gcd(&(n - b));
        let e = a.gcd(&b);
        let slots = [y(1, b * (n - a) / (d * e)), y(2, (n - b) / d), y(1, a * (n - b) / (d * e)), y(2, (n - a) / d)];
        (CoveringCase::EqualDegrees, Some((d, e)), slots)
    };
    let mut data = CoveringData {
        sign,
        permutation,
        normalized: n4,
        case,
        a,
        big_a,
        b,
        big_b,
        c,
        d14,
        d23,
        de,
        slots,
        conditions: CoveringConditions { coprime_y1: false, coprime_y2: false, distinct_degrees: false, c_integral },
    };
    let coprime = |v: Vec<i64>| v.len() == 2 && v[0].gcd(&v[1]) == 1;
    let (h1, h2) = data.degrees();
    data.conditions.coprime_y1 = coprime(data.y1_exponents());
    data.conditions.coprime_y2 = coprime(data.y2_exponents());
    data.conditions.distinct_degrees = h1 != h2 && h1 > 0 && h2 > 0;
    Ok(data)
}

/// Largest degree accepted by [`indecomposable_brute`].
pub const INDECOMPOSABLE_BOUND: u32 = 24;

/// A decomposition `f = g∘h` with `deg h = s`, `h` monic and `h(0) = 0`.
/// Such `h` is unique: its coefficients are forced by the top `s`
/// coefficients of `f = h^r + (terms of degree ≤ s(r−1))`.
fn decompose_with_inner_degree(f: &Poly, s: usize) -> Option<(Poly, Poly)> {
    let m = f.degree()?;
    if s < 2 || m % s != 0 || m == s {
        return None;
    }
    let r = m / s;
    let lead = f.lead();
    let f = f.scale(&lead.recip());
    let mut h = Poly::x_pow(s);
    for i in 1..s {
        // coefficient of x^{m−i} in h^r is r·h_{s−i} plus terms in higher h_j
        let current = h.pow(r).coeff(m - i);
        let target = f.coeff(m - i);
        let hk = (target - current) / Rational::from_integer(r.into());
        h = &h + &Poly::monomial(hk, s - i);
    }
    let mut rest = f.clone();
    let mut g = vec![Rational::zero(); r + 1];
    for i in (0..=r).rev() {
        let hp = h.pow(i);
        let c = rest.coeff(i * s);
        rest = &rest - &hp.scale(&c);
        g[i] = c;
        if rest.degree().is_some_and(|dd| dd >= i * s) {
            return None;
        }
    }
    if !rest.is_zero() {
        return None;
    }
    Some((Poly::new(g).scale(&lead), h))
}

/// Some `(g, h)` with `f = g∘h`, `deg g, deg h ≥ 2`.
pub fn find_decomposition(f: &Poly) -> Option<(Poly, Poly)> {
    let m = f.degree()?;
    (2..m).filter(|s| m % s == 0).find_map(|s| decompose_with_inner_degree(f, s))
}

/// Decides whether `x^m + x^n` decomposes, without checking `gcd(m, n) = 1`.
pub fn indecomposable_brute_unchecked(m: u32, n: u32) -> Result<bool> {
    if m > INDECOMPOSABLE_BOUND {
        return Err(Error::BoundExceeded(format!("degree {m} exceeds {INDECOMPOSABLE_BOUND}")));
    }
    if !(m > n && n > 0) {
        return Err(Error::InvalidArgument("need m > n > 0".into()));
    }
    let f = &Poly::x_pow(m as usize) + &Poly::x_pow(n as usize);
    Ok(find_decomposition(&f).is_none())
}

/// `x^m + x^n` has no decomposition with both degrees at least 2.
pub fn indecomposable_brute(m: u32, n: u32) -> Result<bool> {
    if m.gcd(&n) != 1 {
        return Err(Error::InvalidArgument(format!("gcd({m}, {n}) is not 1")));
    }
    indecomposable_brute_unchecked(m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::make_gamma;
    use crate::toric::tests::{chebyshev_model, curve_model, prime_gamma};
    use crate::toric::{build_model, translate_model};
    use proptest::prelude::*;

    fn g(v: &[i64]) -> GammaVector {
        make_gamma(v).unwrap()
    }

    fn exps(c: &CoveringData) -> Vec<(u8, i64)> {
        c.slots.iter().map(|s| (s.var, s.exp)).collect()
    }

    #[test]
    fn primitivity_examples() {
        assert!(lattice_primitivity(&curve_model()));
        assert!(lattice_primitivity(&chebyshev_model()));
        assert!(!points_primitive(&[vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 4]]));
        assert!(points_primitive(&[vec![2, 0], vec![0, 3], vec![2, 2], vec![1, 0]]));
        assert!(!points_primitive(&[vec![0, 0], vec![2, 0], vec![0, 3], vec![2, 2]]));
    }

    #[test]
    fn covering_of_6_1_2_5() {
        let c = quadrilateral_covering(&g(&[-6, -1, 2, 5])).unwrap();
        assert_eq!(c.normalized, [-1, -6, 2, 5]);
        assert_eq!(c.permutation, [1, 0, 2, 3]);
        assert_eq!((c.a, c.big_a, c.b, c.big_b, c.c), (1, 5, 1, 3, 2));
        assert_eq!(exps(&c), vec![(1, 5), (2, 1), (2, 3), (1, 1)]);
        assert_eq!(c.case, CoveringCase::DistinctDegrees);
        assert!(c.conditions.all());
    }

    #[test]
    fn covering_of_6_1_3_4() {
        let c = quadrilateral_covering(&g(&[-6, -1, 3, 4])).unwrap();
        assert_eq!(c.normalized, [-1, -6, 3, 4]);
        assert_eq!((c.a, c.big_a, c.b, c.big_b), (1, 4, 1, 2));
        assert_eq!(exps(&c), vec![(1, 4), (2, 1), (2, 2), (1, 1)]);
        assert_eq!(c.polynomial_text(), "u1*y1^4 + u2*y2^1 + u3*y2^2 + u4*y1^1");
    }

    #[test]
    fn equal_degree_example() {
        let c = quadrilateral_covering(&g(&[-3, -20, 8, 15])).unwrap();
        assert_eq!((c.big_a, c.big_b, c.de), (5, 5, Some((1, 1))));
        assert_eq!(c.case, CoveringCase::EqualDegrees);
        assert_eq!(exps(&c), vec![(1, 8), (2, 3), (1, 3), (2, 4)]);
        assert_eq!(c.degrees(), (8, 4));
        assert!(c.conditions.all());
    }

    #[test]
    fn sign_flip_and_errors() {
        let c = quadrilateral_covering(&g(&[6, 1, -2, -5])).unwrap();
        assert_eq!((c.sign, c.normalized), (-1, [-1, -6, 2, 5]));
        assert_eq!(quadrilateral_covering(&g(&[-5, 1, 2, 2])), Err(Error::NotQuadrilateral));
        assert_eq!(quadrilateral_covering(&g(&[-2, 1, 1])), Err(Error::NotQuadrilateral));
        assert_eq!(quadrilateral_covering(&g(&[-3, -1, 1, 3])), Err(Error::OppositePair));
        assert_eq!(quadrilateral_covering(&g(&[-4, -2, 2, 4])), Err(Error::OppositePair));
        assert_eq!(quadrilateral_covering(&g(&[-6, -2, 4, 4])), Err(Error::NotPrime(2)));
    }

    #[test]
    fn indecomposable_examples() {
        assert_eq!(indecomposable_brute(3, 2), Ok(true));
        assert_eq!(indecomposable_brute(4, 3), Ok(true));
        assert!(indecomposable_brute(4, 2).is_err());
        assert_eq!(indecomposable_brute_unchecked(4, 2), Ok(false));
        assert_eq!(indecomposable_brute_unchecked(6, 3), Ok(false));
        assert!(matches!(indecomposable_brute(25, 2), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn decomposition_recovers_composites() {
        let gp = Poly::from_i64(&[3, -1, 2, 1]);
        let hp = Poly::from_i64(&[0, 5, 0, 1]);
        let mut f = Poly::zero();
        for (i, c) in gp.coeffs().iter().enumerate() {
            f = &f + &hp.pow(i).scale(c);
        }
        let (g2, h2) = find_decomposition(&f).unwrap();
        let mut back = Poly::zero();
        for (i, c) in g2.coeffs().iter().enumerate() {
            back = &back + &h2.pow(i).scale(c);
        }
        assert_eq!(back, f);
        assert_eq!(h2.degree(), Some(3));
    }

    #[test]
    fn lemma_holds_up_to_sixteen() {
        for m in 2..=16u32 {
            for n in 1..m {
                if m.gcd(&n) == 1 {
                    assert_eq!(indecomposable_brute(m, n), Ok(true), "({m}, {n})");
                }
            }
        }
    }

    #[test]
    fn all_small_quadrilaterals() {
        let mut count = 0;
        for a in 1..=25i64 {
            for b in a..=25 {
                for c in 1..=25i64 {
                    let d = a + b - c;
                    if d < c || d > 25 {
                        continue;
                    }
                    let Ok(gv) = make_gamma(&[-a, -b, c, d]) else { continue };
                    if !gv.is_prime() || a == c || a == d || b == c || b == d {
                        continue;
                    }
                    let cov = quadrilateral_covering(&gv).unwrap();
                    assert!(cov.conditions.all(), "{gv:?} {cov:?}");
                    count += 1;
                }
            }
        }
        assert!(count > 1000);
    }

    proptest! {
        #[test]
        fn primitivity_translation_invariant(gv in prime_gamma(), h in 0usize..8) {
            let m = build_model(&gv).unwrap();
            let t = translate_model(&m, h % m.l());
            prop_assert_eq!(lattice_primitivity(&m), lattice_primitivity(&t));
            prop_assert!(lattice_primitivity(&m));
        }
    }
}
