//! Lattice points of the cone over `Δ` with their Hodge and weight data.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::toric::{newton_polytope, LatticePolytope, ToricModel};

/// Monomial `x_0^k x^m` with `m/k ∈ Δ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConePoint {
    pub k: i64,
    pub m: Vec<i64>,
}

impl ConePoint {
    pub fn new(k: i64, m: Vec<i64>) -> Self {
        ConePoint { k, m }
    }
}

/// Generator-level filtration data of a cone point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiltrationTag {
    /// Pole order; the point lies in `E^{−ℓ}` iff `ℓ ≥ hodge_level`.
    pub hodge_level: i64,
    /// Dimension of the smallest face of `Δ` containing `m/k`.
    pub minimal_face_dim: usize,
    /// Generating points `m_j` on that face.
    pub face_points: Vec<usize>,
    /// Fibre dimension `d`.
    pub d: usize,
}

impl FiltrationTag {
    pub fn is_interior(&self) -> bool {
        self.minimal_face_dim == self.d
    }

    /// Codimension of the minimal face.
    pub fn codim(&self) -> usize {
        self.d - self.minimal_face_dim
    }

    /// Membership in `I^ℓ`.
    pub fn in_weight_ideal(&self, l: usize) -> bool {
        self.codim() < l
    }

    /// Membership in `E^{−ℓ}`.
    pub fn in_hodge(&self, l: i64) -> bool {
        self.hodge_level <= l
    }
}

/// Cached polytope of a model.
#[derive(Clone, Debug)]
pub struct Cone {
    pub polytope: LatticePolytope,
    pub d: usize,
}

impl Cone {
    pub fn new(model: &ToricModel) -> Self {
        Cone { polytope: newton_polytope(model), d: model.d() }
    }

    pub fn level(&self, k: i64) -> Vec<ConePoint> {
        self.polytope.lattice_points(k).into_iter().map(|m| ConePoint { k, m }).collect()
    }

    pub fn enumerate(&self, max_pole: i64) -> Vec<ConePoint> {
        (1..=max_pole).flat_map(|k| self.level(k)).collect()
    }

    pub fn classify(&self, p: &ConePoint) -> Result<FiltrationTag> {
        if p.k < 1 || p.m.len() != self.d {
            return Err(Error::PointOutsideCone);
        }
        let face = self.polytope.minimal_face(&p.m, p.k).ok_or(Error::PointOutsideCone)?;
        Ok(FiltrationTag { hodge_level: p.k, minimal_face_dim: face.dim, face_points: face.points, d: self.d })
    }

    pub fn contains(&self, p: &ConePoint) -> bool {
        p.k >= 1 && p.m.len() == self.d && self.polytope.contains_scaled(&p.m, p.k)
    }
}

/// All `(k, m)` with `1 ≤ k ≤ max_pole` and `m ∈ kΔ`, ordered by `k` then `m`.
pub fn enumerate_cone(model: &ToricModel, max_pole: i64) -> Vec<ConePoint> {
    Cone::new(model).enumerate(max_pole)
}

pub fn classify(model: &ToricModel, p: &ConePoint) -> Result<FiltrationTag> {
    Cone::new(model).classify(p)
}

/// Counts of cone points with `k ≤ d`, keyed by `(k, minimal face dimension)`.
pub fn graded_generator_counts(model: &ToricModel) -> BTreeMap<(i64, usize), usize> {
    let cone = Cone::new(model);
    let mut out = BTreeMap::new();
    for p in cone.enumerate(model.d() as i64) {
        let tag = cone.classify(&p).expect("enumerated points lie in the cone");
        *out.entry((p.k, tag.minimal_face_dim)).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::tests::{chebyshev_model, curve_model};
    use proptest::prelude::*;

    fn interior(model: &ToricModel, k: i64) -> Vec<ConePoint> {
        let cone = Cone::new(model);
        cone.level(k).into_iter().filter(|p| cone.classify(p).unwrap().is_interior()).collect()
    }

    #[test]
    fn curve_level_one() {
        let c = curve_model();
        let pts = enumerate_cone(&c, 1);
        // four vertices, (2,1) on an edge, two interior points
        assert_eq!(pts.len(), 7);
        assert!(pts.contains(&ConePoint::new(1, vec![2, 1])));
        assert_eq!(interior(&c, 1), vec![ConePoint::new(1, vec![1, 1]), ConePoint::new(1, vec![1, 2])]);
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
    }

    #[test]
    fn chebyshev_interior_counts() {
        let ch = chebyshev_model();
        assert_eq!(interior(&ch, 1).len(), 0);
        assert_eq!(interior(&ch, 2).len(), 15);
        let counts = graded_generator_counts(&ch);
        assert_eq!(counts.get(&(1, 3)).copied().unwrap_or(0), 0);
        assert_eq!(counts[&(2, 3)], 15);
        assert_eq!(graded_generator_counts(&curve_model())[&(1, 2)], 2);
    }

    #[test]
    fn classification_examples() {
        let c = curve_model();
        let t = classify(&c, &ConePoint::new(1, vec![1, 1])).unwrap();
        assert!(t.is_interior() && t.in_weight_ideal(1) && t.in_hodge(1));
        let v = classify(&c, &ConePoint::new(1, vec![2, 0])).unwrap();
        assert_eq!(v.minimal_face_dim, 0);
        assert!(!v.in_weight_ideal(1) && !v.in_weight_ideal(2));
        assert_eq!(classify(&c, &ConePoint::new(1, vec![5, 5])), Err(Error::PointOutsideCone));
        let ch = chebyshev_model();
        assert!(classify(&ch, &ConePoint::new(2, vec![2, 1, 1])).unwrap().is_interior());
        assert!(classify(&ch, &ConePoint::new(2, vec![2, 1, 2])).unwrap().is_interior());
    }

    proptest! {
        #[test]
        fn ray_invariance(i in 0usize..64, c in 1i64..4) {
            let model = curve_model();
            let cone = Cone::new(&model);
            let pts = cone.enumerate(3);
            let p = &pts[i % pts.len()];
            let scaled = ConePoint::new(p.k * c, p.m.iter().map(|x| x * c).collect());
            let a = cone.classify(p).unwrap();
            let b = cone.classify(&scaled).unwrap();
            prop_assert_eq!(a.minimal_face_dim, b.minimal_face_dim);
            prop_assert!((p.k..p.k + 5).all(|l| a.in_hodge(l)));
        }
    }
}
