//! Integer matrices with Smith and Hermite normal forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        IntMatrix { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let v: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        IntMatrix::from_rows(&v)
    }

    pub fn diag(d: &[i64]) -> Self {
        let mut m = IntMatrix::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x.into());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut p = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = p.get(i, j) + a * o.get(k, j);
                    p.set(i, j, v);
                }
            }
        }
        p
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows).map(|i| (0..self.cols).fold(BigInt::zero(), |acc, j| acc + self.get(i, j) * &v[j])).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c·row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) + c * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += c·col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) + c * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    /// Rank over ℚ.
    pub fn rank(&self) -> usize {
        let (_, s, _) = smith_normal_form(self);
        (0..self.rows.min(self.cols)).filter(|&i| !s.get(i, i).is_zero()).count()
    }

    /// Nonzero diagonal entries of the Smith form.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let (_, s, _) = smith_normal_form(self);
        (0..self.rows.min(self.cols)).map(|i| s.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
    }

    /// Row-style Hermite normal form `H = U·self`: echelon, positive pivots,
    /// entries above each pivot reduced into `[0, pivot)`. Zero rows dropped.
    pub fn hermite_rows(&self) -> IntMatrix {
        let mut a = self.clone();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            loop {
                let piv = (r..a.rows).filter(|&i| !a.get(i, c).is_zero()).min_by_key(|&i| a.get(i, c).abs());
                let Some(p) = piv else { break };
                a.swap_rows(p, r);
                let mut done = true;
                for i in r + 1..a.rows {
                    if !a.get(i, c).is_zero() {
                        let qq = a.get(i, c).div_floor(a.get(r, c));
                        a.add_row(i, r, &-qq);
                        if !a.get(i, c).is_zero() {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if a.get(r, c).is_zero() {
                continue;
            }
            if a.get(r, c).is_negative() {
                a.negate_row(r);
            }
            for i in 0..r {
                let qq = a.get(i, c).div_floor(a.get(r, c));
                a.add_row(i, r, &-qq);
            }
            r += 1;
        }
        let rows: Vec<Vec<BigInt>> = (0..r).map(|i| a.row(i)).collect();
        if rows.is_empty() {
            return IntMatrix::zeros(0, self.cols);
        }
        IntMatrix::from_rows(&rows)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form: returns `(U, S, V)` with `U·m·V = S`, `U` and `V`
/// unimodular, `S` diagonal with nonnegative entries and `s_i | s_{i+1}`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (r, c) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let n = r.min(c);
    let mut t = 0;
    while t < n {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = s.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut again = false;
            for i in t + 1..r {
                if !s.get(i, t).is_zero() {
                    let qq = s.get(i, t).div_floor(s.get(t, t));
                    s.add_row(i, t, &-&qq);
                    u.add_row(i, t, &-&qq);
                    if !s.get(i, t).is_zero() {
                        again = true;
                    }
                }
            }
            for j in t + 1..c {
                if !s.get(t, j).is_zero() {
                    let qq = s.get(t, j).div_floor(s.get(t, t));
                    s.add_col(j, t, &-&qq);
                    v.add_col(j, t, &-&qq);
                    if !s.get(t, j).is_zero() {
                        again = true;
                    }
                }
            }
            if !again {
                // divisibility of the remaining block
                let bad = (t + 1..r)
                    .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                    .find(|&(i, j)| !(s.get(i, j) % s.get(t, t)).is_zero());
                match bad {
                    Some((i, _)) => {
                        s.add_row(t, i, &BigInt::one());
                        u.add_row(t, i, &BigInt::one());
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..r {
                let x = s.get(i, t);
                if !x.is_zero() && x.abs() < s.get(best.0, best.1).abs() {
                    best = (i, t);
                }
            }
            for j in t..c {
                let x = s.get(t, j);
                if !x.is_zero() && x.abs() < s.get(best.0, best.1).abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                s.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
            }
            if best.1 != t {
                s.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    (u, s, v)
}

/// Basis of the saturated lattice `{x ∈ ℤ^l : v·x = 0}`, in Hermite form.
pub fn kernel_basis(v: &[i64]) -> Result<Vec<Vec<BigInt>>> {
    if v.iter().all(|&x| x == 0) {
        return Err(Error::InvalidArgument("kernel of the zero vector".into()));
    }
    let m = IntMatrix::from_i64(&[v.to_vec()]);
    let (_, _, vv) = smith_normal_form(&m);
    let cols: Vec<Vec<BigInt>> = (1..v.len()).map(|j| vv.col(j)).collect();
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    Ok(IntMatrix::from_rows(&cols).hermite_rows().to_rows())
}

/// Integer solution `c` of `c·K = b` (K given by rows), if one exists.
pub fn solve_left_integer(k: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    // c K = b  <=>  K^T c^T = b^T
    let kt = k.transpose();
    let (u, s, v) = smith_normal_form(&kt);
    // U K^T V = S, so S (V^{-1} c) = U b
    let ub = u.mul_vec(b);
    let n = k.rows;
    let mut y = vec![BigInt::zero(); n];
    for (i, ubi) in ub.iter().enumerate() {
        let d = if i < n { s.get(i, i).clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ubi.is_zero() {
                return None;
            }
        } else {
            if !(ubi % &d).is_zero() {
                return None;
            }
            y[i] = ubi / &d;
        }
    }
    Some(v.mul_vec(&y))
}

/// A unimodular matrix whose first row is the primitive vector `c`.
pub fn complete_to_unimodular(c: &[BigInt]) -> Option<IntMatrix> {
    let m = IntMatrix::from_rows(&[c.to_vec()]);
    let (u, s, v) = smith_normal_form(&m);
    if !s.get(0, 0).is_one() {
        return None;
    }
    // u·c·V = e1, so c = u^{-1}·e1·V^{-1}; u = ±1.
    let w = inverse_unimodular(&v)?;
    let mut w = w;
    if u.get(0, 0).is_negative() {
        w.negate_row(0);
    }
    Some(w)
}

/// Exact inverse of a unimodular matrix.
pub fn inverse_unimodular(m: &IntMatrix) -> Option<IntMatrix> {
    let n = m.rows;
    let (u, s, v) = smith_normal_form(m);
    if !(0..n).all(|i| s.get(i, i).is_one()) {
        return None;
    }
    // U M V = I  =>  M^{-1} = V U
    Some(v.mul(&u))
}
