//! Gamma vectors and their hypergeometric data.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::cyclotomic::{cyclotomic, euler_phi};
use crate::algebra::{frac_pos, gcd_i64, Poly, Rational};
use crate::error::{Error, Result};

/// Nonzero integers summing to zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GammaVector {
    entries: Vec<i64>,
    is_reduced: bool,
    is_prime: bool,
}

impl GammaVector {
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.is_reduced
    }

    pub fn is_prime(&self) -> bool {
        self.is_prime
    }

    pub fn gcd(&self) -> i64 {
        self.entries.iter().fold(0, |g, &x| gcd_i64(g, x))
    }

    /// `−γ`.
    pub fn negated(&self) -> GammaVector {
        make_gamma(&self.entries.iter().map(|x| -x).collect::<Vec<_>>()).expect("negation stays valid")
    }

    /// Fibre dimension `d = l − 2`.
    pub fn fibre_dim(&self) -> usize {
        self.entries.len() - 2
    }

    /// Weight `κ = l − 3` of the middle cohomology of a fibre.
    pub fn kappa(&self) -> i64 {
        self.entries.len() as i64 - 3
    }

    pub fn require_prime(&self) -> Result<()> {
        if self.is_prime {
            Ok(())
        } else {
            Err(Error::NotPrime(self.gcd()))
        }
    }
}

impl fmt::Display for GammaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

/// Validates entries and computes the reduced and prime flags.
pub fn make_gamma(entries: &[i64]) -> Result<GammaVector> {
    if let Some(i) = entries.iter().position(|&x| x == 0) {
        return Err(Error::InvalidEntry(format!("entry {} is zero", i + 1)));
    }
    if entries.len() < 2 {
        return Err(Error::InvalidEntry("need at least two entries".into()));
    }
    let sum: i64 = entries.iter().sum();
    if sum != 0 {
        return Err(Error::SumNotZero(sum));
    }
    let is_reduced = !entries.iter().enumerate().any(|(i, &a)| entries[i + 1..].iter().any(|&b| a + b == 0));
    let g = entries.iter().fold(0, |g, &x| gcd_i64(g, x));
    Ok(GammaVector { entries: entries.to_vec(), is_reduced, is_prime: g == 1 })
}

/// Parses `"c1,c2,...,cl"`.
pub fn parse_gamma(s: &str) -> Result<GammaVector> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in s.split(',') {
        let t = part.trim();
        let v: i64 = t.parse().map_err(|_| Error::Parse { pos, msg: format!("expected integer, found {t:?}") })?;
        out.push(v);
        pos += part.len() + 1;
    }
    make_gamma(&out)
}

/// Removes opposite pairs, keeping the order of the survivors.
pub fn reduce(g: &GammaVector) -> Result<GammaVector> {
    let mut out: Vec<i64> = Vec::new();
    for &x in &g.entries {
        match out.iter().position(|&y| y == -x) {
            Some(p) => {
                out.remove(p);
            }
            None => out.push(x),
        }
    }
    if out.is_empty() {
        return Err(Error::TrivialSystem);
    }
    make_gamma(&out)
}

/// Appends `(−(2m+1), 2m+1)` for the least `m ≥ 1` making the vector prime.
pub fn primify(g: &GammaVector) -> GammaVector {
    let d = g.gcd();
    if d == 1 {
        return g.clone();
    }
    let mut m = 1;
    while gcd_i64(2 * m + 1, d) != 1 {
        m += 1;
    }
    let mut e = g.entries.clone();
    e.push(-(2 * m + 1));
    e.push(2 * m + 1);
    make_gamma(&e).expect("appending an opposite pair keeps validity")
}

/// `Q(T) = q_∞/q_0` as cancelled cyclotomic multiplicities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FamilyParameter {
    pub numerator: BTreeMap<u64, u32>,
    pub denominator: BTreeMap<u64, u32>,
}

impl FamilyParameter {
    fn product(m: &BTreeMap<u64, u32>) -> Poly {
        let mut p = Poly::one();
        for (&n, &k) in m {
            p = &p * &cyclotomic(n).expect("positive index").pow(k as usize);
        }
        p
    }

    /// `q_∞`, the numerator polynomial.
    pub fn q_inf(&self) -> Poly {
        Self::product(&self.numerator)
    }

    /// `q_0`, the denominator polynomial.
    pub fn q_zero(&self) -> Poly {
        Self::product(&self.denominator)
    }

    pub fn degree(&self) -> u64 {
        self.numerator.iter().map(|(&n, &k)| euler_phi(n) * k as u64).sum()
    }
}

pub fn family_parameter(g: &GammaVector) -> Result<FamilyParameter> {
    let mut count: BTreeMap<u64, i64> = BTreeMap::new();
    for &x in &g.entries {
        let a = x.unsigned_abs();
        let s = if x < 0 { 1 } else { -1 };
        for n in (1..=a).filter(|n| a % n == 0) {
            *count.entry(n).or_insert(0) += s;
        }
    }
    let mut numerator = BTreeMap::new();
    let mut denominator = BTreeMap::new();
    for (n, c) in count {
        if c > 0 {
            numerator.insert(n, c as u32);
        } else if c < 0 {
            denominator.insert(n, (-c) as u32);
        }
    }
    if numerator.is_empty() && denominator.is_empty() {
        return Err(Error::TrivialSystem);
    }
    Ok(FamilyParameter { numerator, denominator })
}

/// Hypergeometric parameters, sorted multisets in `(0, 1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HGParams {
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
}

impl HGParams {
    pub fn rank(&self) -> usize {
        self.alpha.len()
    }

    /// No `α_i − β_j` is an integer.
    pub fn is_irreducible(&self) -> bool {
        self.alpha.iter().all(|a| self.beta.iter().all(|b| !(a - b).is_integer()))
    }
}

fn roots_of_unity_exponents(m: &BTreeMap<u64, u32>) -> Vec<Rational> {
    let mut out = Vec::new();
    for (&n, &k) in m {
        for j in 1..=n {
            if num_integer::gcd(j, n) == 1 {
                let r = frac_pos(&Rational::new(BigInt::from(j), BigInt::from(n)));
                for _ in 0..k {
                    out.push(r.clone());
                }
            }
        }
    }
    out.sort();
    out
}

/// `α` from the numerator (negative entries), `β` from the denominator.
pub fn hg_params(g: &GammaVector) -> Result<HGParams> {
    let fp = family_parameter(g)?;
    Ok(HGParams { alpha: roots_of_unity_exponents(&fp.numerator), beta: roots_of_unity_exponents(&fp.denominator) })
}

/// Degree of the cancelled numerator.
pub fn rank(g: &GammaVector) -> usize {
    family_parameter(g).map(|f| f.degree() as usize).unwrap_or(0)
}

/// Sum of the positive entries.
pub fn volume(g: &GammaVector) -> u64 {
    g.entries.iter().filter(|&&x| x > 0).map(|&x| x as u64).sum()
}

/// `Γ = ∏ γ_j^{γ_j}` exactly.
pub fn big_gamma(g: &GammaVector) -> Rational {
    let mut acc = Rational::one();
    for &x in &g.entries {
        acc *= crate::algebra::rpow(&Rational::from_integer(x.into()), x);
    }
    acc
}
