//! Lattice polytopes spanned by the exponent vectors: facets, the face
//! lattice, minimal faces, and the face systems of quasi-regularity.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::ToricModel;
use crate::algebra::intmatrix::smith_normal_form;
use crate::algebra::IntMatrix;

/// Supporting inequality `normal·x ≤ offset` that is tight on `points`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
    pub points: Vec<usize>,
}

/// A face, given by the generating points it contains.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Face {
    pub points: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticePolytope {
    pub points: Vec<Vec<i64>>,
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub facets: Vec<Facet>,
    /// Every nonempty face, the polytope itself included, sorted by
    /// dimension then point list.
    pub faces: Vec<Face>,
}

fn affine_dim(points: &[Vec<i64>], idx: &[usize]) -> usize {
    if idx.len() <= 1 {
        return 0;
    }
    let base = &points[idx[0]];
    let rows: Vec<Vec<i64>> =
        idx[1..].iter().map(|&j| points[j].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    IntMatrix::from_i64(&rows).rank()
}

fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    }
    let m = IntMatrix::from_i64(rows);
    let (_, s, v) = smith_normal_form(&m);
    let r = (0..rows.len().min(n)).filter(|&i| !s.get(i, i).is_zero()).count();
    (r..n).map(|j| v.col(j).iter().map(|x| x.to_i64().expect("small normal")).collect()).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl LatticePolytope {
    /// Convex hull of full-dimensional point configuration.
    pub fn from_points(points: Vec<Vec<i64>>) -> LatticePolytope {
        let d = points[0].len();
        let all: Vec<usize> = (0..points.len()).collect();
        let dim = affine_dim(&points, &all);
        assert_eq!(dim, d, "polytope must be full-dimensional");
        let mut facets: Vec<Facet> = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in subsets(points.len(), d) {
            let base = &points[s[0]];
            let diffs: Vec<Vec<i64>> =
                s[1..].iter().map(|&j| points[j].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
            let ker = integer_kernel(&diffs, d);
            if ker.len() != 1 {
                continue;
            }
            let mut normal = ker[0].clone();
            let mut offset = dot(&normal, base);
            let vals: Vec<i64> = points.iter().map(|p| dot(&normal, p)).collect();
            if vals.iter().all(|&v| v <= offset) {
            } else if vals.iter().all(|&v| v >= offset) {
                normal.iter_mut().for_each(|x| *x = -*x);
                offset = -offset;
            } else {
                continue;
            }
            let tight: Vec<usize> = (0..points.len()).filter(|&j| dot(&normal, &points[j]) == offset).collect();
            if seen.insert(tight.clone()) {
                facets.push(Facet { normal, offset, points: tight });
            }
        }
        facets.sort_by(|a, b| a.points.cmp(&b.points));
        let mut face_sets: BTreeSet<Vec<usize>> = facets.iter().map(|f| f.points.clone()).collect();
        loop {
            let cur: Vec<Vec<usize>> = face_sets.iter().cloned().collect();
            let mut added = false;
            for i in 0..cur.len() {
                for j in i + 1..cur.len() {
                    let inter: Vec<usize> = cur[i].iter().filter(|x| cur[j].contains(x)).copied().collect();
                    if !inter.is_empty() && face_sets.insert(inter) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        face_sets.insert(all.clone());
        let mut faces: Vec<Face> =
            face_sets.into_iter().map(|p| Face { dim: affine_dim(&points, &p), points: p }).collect();
        faces.sort_by(|a, b| (a.dim, &a.points).cmp(&(b.dim, &b.points)));
        let vertices: Vec<usize> = faces.iter().filter(|f| f.dim == 0).map(|f| f.points[0]).collect();
        LatticePolytope { points, dim, vertices, facets, faces }
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim + 1
    }

    /// Generating points that are not vertices.
    pub fn non_vertex_points(&self) -> Vec<usize> {
        (0..self.points.len()).filter(|j| !self.vertices.contains(j)).collect()
    }

    /// Whether `m/k` lies in the polytope.
    pub fn contains_scaled(&self, m: &[i64], k: i64) -> bool {
        self.facets.iter().all(|f| dot(&f.normal, m) <= f.offset * k)
    }

    /// Minimal face containing `m/k`, or `None` when outside.
    pub fn minimal_face(&self, m: &[i64], k: i64) -> Option<Face> {
        let mut pts: Option<Vec<usize>> = None;
        for f in &self.facets {
            let v = dot(&f.normal, m);
            if v > f.offset * k {
                return None;
            }
            if v == f.offset * k {
                pts = Some(match pts {
                    None => f.points.clone(),
                    Some(p) => p.into_iter().filter(|x| f.points.contains(x)).collect(),
                });
            }
        }
        let points = pts.unwrap_or_else(|| (0..self.points.len()).collect());
        let dim = affine_dim(&self.points, &points);
        Some(Face { points, dim })
    }

    /// Lattice points of `kΔ`, lexicographically sorted.
    pub fn lattice_points(&self, k: i64) -> Vec<Vec<i64>> {
        let d = self.dim;
        let lo: Vec<i64> = (0..d).map(|i| self.points.iter().map(|p| p[i]).min().unwrap() * k).collect();
        let hi: Vec<i64> = (0..d).map(|i| self.points.iter().map(|p| p[i]).max().unwrap() * k).collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.contains_scaled(&cur, k) {
                out.push(cur.clone());
            }
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    for (c, l) in cur.iter_mut().zip(&lo).skip(i + 1) {
                        *c = *l;
                    }
                    break;
                }
            }
        }
    }

    /// Normalised volume `d!·vol`, from a pulling triangulation.
    pub fn normalized_volume(&self) -> BigInt {
        let top = self.faces.len() - 1;
        self.simplices(top).iter().map(|s| self.simplex_volume(s)).sum()
    }

    fn simplex_volume(&self, s: &[usize]) -> BigInt {
        let base = &self.points[s[0]];
        let rows: Vec<Vec<i64>> =
            s[1..].iter().map(|&j| self.points[j].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
        IntMatrix::from_i64(&rows).det().abs()
    }

    fn simplices(&self, face: usize) -> Vec<Vec<usize>> {
        let f = &self.faces[face];
        let verts: Vec<usize> = f.points.iter().copied().filter(|j| self.vertices.contains(j)).collect();
        if f.dim == 0 {
            return vec![vec![f.points[0]]];
        }
        let apex = verts[0];
        let mut out = Vec::new();
        for (i, g) in self.faces.iter().enumerate() {
            if g.dim + 1 == f.dim && g.points.iter().all(|p| f.points.contains(p)) && !g.points.contains(&apex) {
                for mut s in self.simplices(i) {
                    s.insert(0, apex);
                    out.push(s);
                }
            }
        }
        out
    }
}

pub fn newton_polytope(model: &ToricModel) -> LatticePolytope {
    LatticePolytope::from_points(model.m().to_vec())
}

/// Verdict for one proper face of positive dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaceVerdict {
    pub points: Vec<usize>,
    pub dim: usize,
    /// The face system `Σ_{j∈F} c_j (1, m_j) = 0` has only the trivial solution.
    pub full_column_rank: bool,
}

/// Face systems of every proper positive-dimensional face of `conv(points)`.
pub fn quasi_regularity_points(points: &[Vec<i64>]) -> Vec<FaceVerdict> {
    let p = LatticePolytope::from_points(points.to_vec());
    let n = points.len();
    p.faces
        .iter()
        .filter(|f| f.dim >= 1 && f.points.len() < n && f.dim < p.dim)
        .map(|f| {
            let mut rows = vec![vec![1i64; f.points.len()]];
            rows.extend((0..p.dim).map(|i| f.points.iter().map(|&j| points[j][i]).collect()));
            let r = IntMatrix::from_i64(&rows).rank();
            FaceVerdict { points: f.points.clone(), dim: f.dim, full_column_rank: r == f.points.len() }
        })
        .collect()
}

pub fn quasi_regularity_check(model: &ToricModel) -> Vec<FaceVerdict> {
    quasi_regularity_points(model.m())
}
