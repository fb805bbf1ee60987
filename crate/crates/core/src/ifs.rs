//! Iterated function systems of similarities: the Φ operator, attractor
//! sampling, and attractors of systems with condensation.

use serde::{Deserialize, Serialize};

use crate::geometry::{Region, Similarity, Tolerance, Vec2};

/// Resource caps shared by the iteration routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest power of Φ that may be requested.
    pub max_depth: usize,
    /// Largest number of convex cells an intermediate region may hold.
    pub max_cells: usize,
    /// Largest attractor point cloud.
    pub max_points: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_depth: 64,
            max_cells: 1_000_000,
            max_points: 1 << 22,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IfsError {
    #[error("a family needs at least one map")]
    EmptyFamily,
    #[error("requested depth {requested} exceeds the cap {cap}")]
    DepthCap {
        requested: usize,
        cap: usize,
        /// Best result computed within the cap, when one exists.
        partial: Option<Box<Region>>,
    },
    #[error("{what} would need {needed} items, cap is {cap}")]
    SizeCap {
        what: &'static str,
        needed: usize,
        cap: usize,
        partial: Option<Box<Region>>,
    },
    #[error("sum of squared ratios is {0} ≥ 1; the condensation series does not converge (pass an explicit depth)")]
    Divergent(f64),
    #[error("the condensation set must be non-empty")]
    EmptyCondensation,
}

/// An ordered family of contracting similarities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Family {
    maps: Vec<Similarity>,
    pub label: String,
}

/// Sample of an IFS attractor: images of a seed under all words of fixed length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorApprox {
    pub points: Vec<Vec2>,
    pub depth: usize,
    /// Upper bound on the Hausdorff distance between `points` and the attractor.
    pub diameter_bound: f64,
}

impl Family {
    pub fn new(maps: Vec<Similarity>, label: impl Into<String>) -> Result<Self, IfsError> {
        if maps.is_empty() {
            return Err(IfsError::EmptyFamily);
        }
        Ok(Family { maps, label: label.into() })
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `Σ rᵢ²`, the area scaling of Φ on sets whose images do not overlap.
    pub fn area_scaling(&self) -> f64 {
        self.maps.iter().map(|f| f.ratio() * f.ratio()).sum()
    }

    pub fn max_ratio(&self) -> f64 {
        self.maps.iter().map(Similarity::ratio).fold(0.0, f64::max)
    }

    /// The images `fᵢ(R)` in family order.
    pub fn images(&self, region: &Region) -> Vec<Region> {
        self.maps.iter().map(|f| region.transform(f)).collect()
    }

    /// `Φ(R) = ⋃ fᵢ(R)`, unioned in family order.
    pub fn phi(&self, region: &Region) -> Region {
        if region.is_empty() {
            return Region::empty();
        }
        let mut it = self.images(region).into_iter();
        let first = it.next().expect("family is non-empty");
        it.fold(first, |acc, img| acc.union(&img))
    }

    /// `Φⁿ(R)`; `Φ⁰(R) = R`.
    pub fn phi_pow(&self, region: &Region, n: usize) -> Result<Region, IfsError> {
        self.phi_pow_with(region, n, &Limits::default())
    }

    pub fn phi_pow_with(
        &self,
        region: &Region,
        n: usize,
        limits: &Limits,
    ) -> Result<Region, IfsError> {
        if n > limits.max_depth {
            return Err(IfsError::DepthCap {
                requested: n,
                cap: limits.max_depth,
                partial: None,
            });
        }
        let mut cur = region.clone();
        for _ in 0..n {
            let needed = cur.cell_count().saturating_mul(self.len());
            if needed > limits.max_cells {
                return Err(IfsError::SizeCap {
                    what: "Φ iterate",
                    needed,
                    cap: limits.max_cells,
                    partial: Some(Box::new(cur)),
                });
            }
            cur = self.phi(&cur);
        }
        Ok(cur)
    }

    /// The family `{f ∘ g : f, g ∈ F}` in lexicographic order.
    pub fn composed_pairs(&self) -> Family {
        let maps = self
            .maps
            .iter()
            .flat_map(|f| self.maps.iter().map(move |g| f.compose(g)))
            .collect();
        Family {
            maps,
            label: format!("{}∘{}", self.label, self.label),
        }
    }

    /// Ball `B(c, R)` mapped into itself by every map; contains the attractor.
    fn invariant_ball(&self) -> (Vec2, f64) {
        let c = self.maps[0].fixed_point();
        let radius = self
            .maps
            .iter()
            .map(|f| f.apply(c).dist(c) / (1.0 - f.ratio()))
            .fold(0.0, f64::max);
        (c, radius)
    }

    /// Images of `seed` under every composition of `depth` maps.
    pub fn attractor_points(&self, depth: usize, seed: Vec2) -> Result<AttractorApprox, IfsError> {
        self.attractor_points_with(depth, seed, &Limits::default())
    }

    pub fn attractor_points_with(
        &self,
        depth: usize,
        seed: Vec2,
        limits: &Limits,
    ) -> Result<AttractorApprox, IfsError> {
        let needed = u32::try_from(depth)
            .ok()
            .and_then(|d| self.len().checked_pow(d))
            .unwrap_or(usize::MAX);
        if needed > limits.max_points {
            return Err(IfsError::SizeCap {
                what: "attractor sample",
                needed,
                cap: limits.max_points,
                partial: None,
            });
        }
        let mut points = vec![seed];
        for _ in 0..depth {
            points = self
                .maps
                .iter()
                .flat_map(|f| points.iter().map(move |&p| f.apply(p)))
                .collect();
        }
        let (c, radius) = self.invariant_ball();
        let seed_bound = seed.dist(c) + radius;
        Ok(AttractorApprox {
            points,
            depth,
            diameter_bound: self.max_ratio().powi(depth as i32) * seed_bound,
        })
    }

    /// Whether the attractor is a null set, decided by `Σ rᵢ² < 1`.
    pub fn attractor_null_test(&self) -> bool {
        self.area_scaling() < 1.0
    }

    /// Least `N` with `sᴺ·area(A)/(1−s) ≤ area_eps` and `r_maxᴺ·diam(A) ≤ hausdorff_eps`,
    /// where `s = Σ rᵢ²`. `None` when `s ≥ 1`.
    pub fn condensation_depth(&self, condensation: &Region, eps: &Tolerance) -> Option<usize> {
        let s = self.area_scaling();
        if s >= 1.0 {
            return None;
        }
        let area = condensation.area();
        let diam = condensation.diameter();
        let rmax = self.max_ratio();
        let mut n = 0usize;
        let (mut sp, mut rp) = (1.0f64, 1.0f64);
        while sp * area / (1.0 - s) > eps.area_eps || rp * diam > eps.hausdorff_eps {
            n += 1;
            sp *= s;
            rp *= rmax;
            if n > 10_000 {
                return None;
            }
        }
        Some(n)
    }

    /// `A ∪ Φ(A) ∪ … ∪ Φᴺ(A)`, truncating the attractor of the IFS with
    /// condensation `A` where the geometric tail drops below `eps`.
    pub fn condensation_attractor(
        &self,
        condensation: &Region,
        eps: &Tolerance,
    ) -> Result<Region, IfsError> {
        self.condensation_attractor_with(condensation, eps, None, &Limits::default())
    }

    /// As [`Family::condensation_attractor`] with an explicit depth (required
    /// when `Σ rᵢ² ≥ 1`) and custom limits.
    pub fn condensation_attractor_with(
        &self,
        condensation: &Region,
        eps: &Tolerance,
        depth_override: Option<usize>,
        limits: &Limits,
    ) -> Result<Region, IfsError> {
        if condensation.is_empty() {
            return Err(IfsError::EmptyCondensation);
        }
        let depth = match depth_override {
            Some(n) => n,
            None => self
                .condensation_depth(condensation, eps)
                .ok_or(IfsError::Divergent(self.area_scaling()))?,
        };
        let reachable = depth.min(limits.max_depth);
        let mut acc = condensation.clone();
        let mut layer = condensation.clone();
        for _ in 0..reachable {
            let needed = layer.cell_count().saturating_mul(self.len()) + acc.cell_count();
            if needed > limits.max_cells {
                return Err(IfsError::SizeCap {
                    what: "condensation attractor",
                    needed,
                    cap: limits.max_cells,
                    partial: Some(Box::new(acc)),
                });
            }
            layer = self.phi(&layer);
            acc = acc.union(&layer);
        }
        if depth > limits.max_depth {
            return Err(IfsError::DepthCap {
                requested: depth,
                cap: limits.max_depth,
                partial: Some(Box::new(acc)),
            });
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn halving() -> Family {
        Family::new(
            vec![Similarity::scaling(0.5, Vec2::ZERO).unwrap()],
            "halving",
        )
        .unwrap()
    }

    #[test]
    fn phi_of_empty_is_empty() {
        assert!(halving().phi(&Region::empty()).is_empty());
    }

    #[test]
    fn phi_pow_zero_is_identity() {
        let s = Region::rect(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(halving().phi_pow(&s, 0).unwrap(), s);
    }

    #[test]
    fn phi_pow_depth_cap() {
        let s = Region::rect(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            halving().phi_pow(&s, 65),
            Err(IfsError::DepthCap { requested: 65, cap: 64, .. })
        ));
    }

    #[test]
    fn single_map_attractor_is_its_fixed_point() {
        let seed = Vec2::new(0.6, -0.8);
        for depth in 1..8 {
            let a = halving().attractor_points(depth, seed).unwrap();
            assert_eq!(a.points.len(), 1);
            let bound = 0.5f64.powi(depth as i32) * seed.norm();
            assert!((a.diameter_bound - bound).abs() < 1e-15);
            assert!(a.points[0].norm() <= bound + 1e-15);
        }
    }

    #[test]
    fn attractor_point_cap() {
        let f = Similarity::scaling(0.5, Vec2::ZERO).unwrap();
        let fam = Family::new(vec![f; 2], "two").unwrap();
        let limits = Limits { max_points: 1000, ..Limits::default() };
        assert!(fam.attractor_points_with(10, Vec2::ZERO, &limits).is_err());
        assert!(fam.attractor_points_with(9, Vec2::ZERO, &limits).is_ok());
    }

    #[test]
    fn null_test_arithmetic() {
        let two_halves = Family::new(
            vec![Similarity::scaling(0.5, Vec2::ZERO).unwrap(); 2],
            "",
        )
        .unwrap();
        assert!(two_halves.attractor_null_test());
        let big = Family::new(vec![Similarity::scaling(0.8, Vec2::ZERO).unwrap(); 2], "").unwrap();
        assert!((big.area_scaling() - 1.28).abs() < 1e-15);
        assert!(!big.attractor_null_test());
    }

    #[test]
    fn condensation_nested_disk_bound() {
        // A 32-gon around (0.3, 0.2), shrunk towards that point.
        let c = Vec2::new(0.3, 0.2);
        let ring: Vec<Vec2> = (0..32)
            .map(|k| {
                let t = k as f64 * std::f64::consts::TAU / 32.0;
                c + Vec2::new(t.cos(), t.sin()) * 0.1
            })
            .collect();
        let a = Region::polygon(&ring).unwrap();
        let f = Similarity::scaling(0.5, c * 0.5).unwrap();
        assert!(f.fixed_point().dist(c) < 1e-15);
        let fam = Family::new(vec![f], "shrink").unwrap();
        let eps = Tolerance::new(1e-9, 1e-6);
        let k = fam.condensation_attractor(&a, &eps).unwrap();
        // nested images: the union is A itself
        assert!((k.area() - a.area()).abs() <= eps.area_eps);
        assert!(k.area() <= a.area() / (1.0 - 0.25) + eps.area_eps);
    }

    #[test]
    fn condensation_refusals() {
        let eps = Tolerance::new(1e-9, 1e-9);
        assert!(matches!(
            halving().condensation_attractor(&Region::empty(), &eps),
            Err(IfsError::EmptyCondensation)
        ));
        let s = Region::rect(0.0, 0.0, 1.0, 1.0).unwrap();
        let quarter = |tx: f64, ty: f64| Similarity::scaling(0.75, Vec2::new(tx, ty)).unwrap();
        let fam = Family::new(vec![quarter(0.0, 0.0), quarter(0.25, 0.25)], "").unwrap();
        assert!(matches!(
            fam.condensation_attractor(&s, &eps),
            Err(IfsError::Divergent(_))
        ));
        let k = fam
            .condensation_attractor_with(&s, &eps, Some(2), &Limits::default())
            .unwrap();
        assert!((k.area() - 1.0).abs() < 1e-12);
    }
}
