//! Regularized polygon regions, similarity maps, and measure predicates.
//!
//! A [`Region`] is a finite union of convex cells with disjoint interiors.
//! Boolean operations are exact up to floating-point rounding; vertices
//! within [`SNAP`] of a clipping line are treated as lying on it, and cells
//! thinner than [`SNAP`] are discarded. "Null set" statements are evaluated
//! against a [`Tolerance`].

mod boundary;
pub mod cell;
mod hausdorff;
mod region;
mod similarity;
pub mod triangulate;
mod vec2;

use serde::{Deserialize, Serialize};

pub use cell::Cell;
pub use hausdorff::{directed_hausdorff, hausdorff_distance};
pub use region::{BoolOp, Region};
pub(crate) use region::CellIndex;
pub use similarity::{exact_cos_sin, Similarity};
pub use vec2::{point_segment_distance, Aabb, Vec2};

/// Absolute snapping distance: vertices closer than this merge, and cells
/// thinner than this are dropped.
pub const SNAP: f64 = 1e-12;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid similarity: {0}")]
    InvalidSimilarity(String),
    #[error("distance to an empty region is undefined")]
    EmptyRegion,
}

/// Numerical thresholds for measure-theoretic predicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Sets with area at most this are null.
    pub area_eps: f64,
    /// Hausdorff-distance convergence criterion.
    pub hausdorff_eps: f64,
}

impl Tolerance {
    /// Default relative area tolerance for hypothesis checks.
    pub const DEFAULT_AREA_REL: f64 = 1e-9;

    pub fn new(area_eps: f64, hausdorff_eps: f64) -> Self {
        Tolerance { area_eps, hausdorff_eps }
    }

    /// `area_eps = rel · area(domain)`, `hausdorff_eps = rel · diam(domain)`.
    pub fn relative(domain: &Region, rel: f64) -> Self {
        Tolerance {
            area_eps: rel * domain.area(),
            hausdorff_eps: rel * domain.diameter(),
        }
    }

    /// The standard check tolerance: `1e-9 × area(domain)`.
    pub fn for_domain(domain: &Region) -> Self {
        Tolerance::relative(domain, Self::DEFAULT_AREA_REL)
    }

    pub fn is_valid(&self) -> bool {
        self.area_eps > 0.0 && self.hausdorff_eps > 0.0
    }
}

/// `a ⊆ b` up to a null set.
pub fn contains_in_measure(a: &Region, b: &Region, tol: &Tolerance) -> bool {
    a.difference(b).area() <= tol.area_eps
}

/// `a ∩ b` is a null set.
pub fn disjoint_in_measure(a: &Region, b: &Region, tol: &Tolerance) -> bool {
    a.intersection(b).area() <= tol.area_eps
}
