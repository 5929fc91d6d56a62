//! Dense square or rectangular matrices over ℚ.

use num_traits::{One, Zero};

use super::linalg;
use super::{fmt_rational, Poly, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    /// Row-major `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.to_rows().iter().map(|r| r.iter().map(fmt_rational).collect()).collect()
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut p = QMatrix::zeros(self.rows, o.cols);
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

    pub fn sub(&self, o: &QMatrix) -> QMatrix {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, o: &QMatrix) -> QMatrix {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows).fold(Rational::zero(), |a, i| a + self.get(i, i))
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.to_rows())
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.rows;
        assert_eq!(n, self.cols, "inverse of non-square matrix");
        let mut rows = self.to_rows();
        for (i, r) in rows.iter_mut().enumerate() {
            for j in 0..n {
                r.push(if i == j { Rational::one() } else { Rational::zero() });
            }
        }
        let sparse = rows.iter().map(|r| linalg::to_sparse(r)).collect();
        let piv = linalg::rref(sparse, 2 * n);
        if piv.len() < n || piv.iter().take(n).enumerate().any(|(i, (c, _))| *c != i) {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        for (i, (_, row)) in piv.iter().take(n).enumerate() {
            for (c, v) in row {
                if *c >= n {
                    inv.set(i, c - n, v.clone());
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Rational {
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = Rational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return Rational::zero() };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            let piv = a[k][k].clone();
            det *= &piv;
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &piv;
                let pivot_row = a[k].clone();
                for (x, p) in a[i][k..n].iter_mut().zip(&pivot_row[k..n]) {
                    *x -= p * &f;
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(T·I − M)` via a Hessenberg form.
    pub fn charpoly(&self) -> Poly {
        let n = self.rows;
        assert_eq!(n, self.cols, "charpoly of non-square matrix");
        let mut h = self.to_rows();
        for k in 0..n.saturating_sub(2) {
            let Some(p) = (k + 1..n).find(|&i| !h[i][k].is_zero()) else { continue };
            if p != k + 1 {
                h.swap(p, k + 1);
                for r in h.iter_mut() {
                    r.swap(p, k + 1);
                }
            }
            let piv = h[k + 1][k].clone();
            for i in k + 2..n {
                if h[i][k].is_zero() {
                    continue;
                }
                let f = &h[i][k] / &piv;
                let pivot_row = h[k + 1].clone();
                for (x, p) in h[i].iter_mut().zip(&pivot_row) {
                    *x -= p * &f;
                }
                for r in h.iter_mut() {
                    let v = &r[i] * &f;
                    r[k + 1] += v;
                }
            }
        }
        // p_m = (T − h_mm) p_{m−1} − Σ_{i<m} h_im (∏_{j=i+1}^{m} h_{j,j−1}) p_{i−1}
        let mut p: Vec<Poly> = vec![Poly::one()];
        for m in 0..n {
            let mut next = &Poly::new(vec![-h[m][m].clone(), Rational::one()]) * &p[m];
            let mut prod = Rational::one();
            for i in (0..m).rev() {
                prod *= &h[i + 1][i];
                if prod.is_zero() {
                    break;
                }
                let c = &h[i][m] * &prod;
                if !c.is_zero() {
                    next = &next - &p[i].scale(&c);
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn inverse_and_charpoly() {
        let m = QMatrix::from_rows(vec![vec![q(2), q(1)], vec![q(7), q(4)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
        assert_eq!(m.charpoly(), Poly::from_i64(&[1, -6, 1]));
        assert_eq!(m.det(), q(1));
    }
}
