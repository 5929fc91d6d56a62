//! Field-generic exact linear algebra on sparse rows.

use std::fmt::Debug;

use num_traits::{One, Zero};

use super::{RatFunc, Rational};

/// Exact field arithmetic.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;

    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    /// Rough size used for pivot selection.
    fn weight(&self) -> usize {
        1
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        RatFunc::inv(self)
    }
    fn from_rational(r: &Rational) -> Self {
        RatFunc::constant(r.clone())
    }
    fn weight(&self) -> usize {
        self.num().coeffs().len() + self.den().coeffs().len()
    }
}

/// Sparse row: sorted `(column, value)` pairs with nonzero values.
pub type SparseRow<F> = Vec<(usize, F)>;

/// `a + c·b` on sparse rows.
pub fn axpy<F: Field>(a: &SparseRow<F>, c: &F, b: &SparseRow<F>) -> SparseRow<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c.mul(&b[j].1)));
            j += 1;
        } else {
            let v = a[i].1.add(&c.mul(&b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry<F: Field>(row: &SparseRow<F>, col: usize) -> Option<&F> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

/// Reduced row echelon form of sparse rows. Columns are processed in
/// increasing index order, so lower indices are preferred as pivots.
/// Returns the pivot rows (each normalised to 1 at its pivot) together with
/// their pivot columns.
pub fn rref<F: Field>(rows: Vec<SparseRow<F>>, ncols: usize) -> Vec<(usize, SparseRow<F>)> {
    let mut pending: Vec<SparseRow<F>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut pivots: Vec<(usize, SparseRow<F>)> = Vec::new();
    for col in 0..ncols {
        if pending.is_empty() {
            break;
        }
        let mut best: Option<(usize, usize)> = None;
        for (idx, r) in pending.iter().enumerate() {
            if r[0].0 == col {
                let w = r.len() * 4 + r[0].1.weight();
                if best.is_none_or(|(_, bw)| w < bw) {
                    best = Some((idx, w));
                }
            }
        }
        let Some((pi, _)) = best else { continue };
        let prow = pending.swap_remove(pi);
        let inv = prow[0].1.inv();
        let prow: SparseRow<F> = prow.into_iter().map(|(c, v)| (c, v.mul(&inv))).collect();
        let mut next = Vec::with_capacity(pending.len());
        for r in pending.drain(..) {
            if r[0].0 == col {
                let c = r[0].1.neg();
                let nr = axpy(&r, &c, &prow);
                if !nr.is_empty() {
                    next.push(nr);
                }
            } else {
                next.push(r);
            }
        }
        pending = next;
        pivots.push((col, prow));
    }
    // back substitution
    for k in (0..pivots.len()).rev() {
        let (col, prow) = (pivots[k].0, pivots[k].1.clone());
        for row in pivots.iter_mut().take(k) {
            if let Some(v) = entry(&row.1, col) {
                let c = v.neg();
                row.1 = axpy(&row.1, &c, &prow);
            }
        }
    }
    pivots
}

/// Rank of a dense matrix given as rows.
pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    rref(rows.iter().map(|r| to_sparse(r)).collect(), ncols).len()
}

pub fn to_sparse<F: Field>(r: &[F]) -> SparseRow<F> {
    r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()
}

/// Basis of the right null space `{x : M x = 0}` of a dense matrix.
pub fn nullspace<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let piv = rref(rows.iter().map(|r| to_sparse(r)).collect(), ncols);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for (c, _) in &piv {
            v[*c] = true;
        }
        v
    };
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![F::zero(); ncols];
        x[free] = F::one();
        for (c, row) in &piv {
            if let Some(v) = entry(row, free) {
                x[*c] = v.neg();
            }
        }
        out.push(x);
    }
    out
}

/// Solves `M x = b`, returning one solution if consistent.
pub fn solve<F: Field>(rows: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let aug: Vec<SparseRow<F>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut s = to_sparse(r);
            if !bi.is_zero() {
                s.push((ncols, bi.clone()));
            }
            s
        })
        .collect();
    let piv = rref(aug, ncols + 1);
    let mut x = vec![F::zero(); ncols];
    for (c, row) in &piv {
        if *c == ncols {
            return None;
        }
        if let Some(v) = entry(row, ncols) {
            x[*c] = v.clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn nullspace_annihilates() {
        let m = vec![vec![q(1), q(2), q(3), q(4)], vec![q(2), q(4), q(7), q(1)]];
        let ns = nullspace(&m, 4);
        assert_eq!(ns.len(), 2);
        for x in ns {
            for r in &m {
                let s = r.iter().zip(&x).fold(q(0), |a, (u, v)| a + u * v);
                assert_eq!(s, q(0));
            }
        }
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(solve(&m, &[q(3), q(1)]), Some(vec![q(2), q(1)]));
        let s = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert_eq!(solve(&s, &[q(1), q(3)]), None);
    }
}
