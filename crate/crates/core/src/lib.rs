//! Dissections of planar polygonal sets into similar copies of a generator.
//!
//! Given a domain `D` and contracting similarities `f₁, …, f_k`, the crate
//! builds a generator `X` with `D = X ∪ f₁(X) ∪ … ∪ f_k(X)` and pairwise
//! overlaps of zero area, checks the hypotheses that make such an `X` exist,
//! and verifies candidate dissections.
//!
//! ```
//! use selfsim::presets::{build, PresetName};
//! use selfsim::dissection::{dissect, DissectOptions};
//!
//! let p = build(PresetName::Exa4, Some(0.45)).unwrap();
//! assert!(p.check(&p.tolerance()).overall);
//! let res = dissect(&p.family, &p.domain, &p.dissection_y(&p.tolerance()),
//!                   &DissectOptions::for_domain(&p.domain)).unwrap();
//! assert!(res.uncovered_area < 1e-6 * p.domain.area());
//! ```

pub mod dissection;
pub mod geometry;
pub mod ifs;
pub mod presets;
pub mod roots;
pub mod svg;
pub mod sweep;

pub use dissection::{CheckReport, DissectionResult};
pub use geometry::{Region, Similarity, Tolerance, Vec2};
pub use ifs::Family;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/regions.md")]
    mod regions {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/checking.md")]
    mod checking {}
    #[doc = include_str!("../../../book/src/dissecting.md")]
    mod dissecting {}
    #[doc = include_str!("../../../book/src/presets.md")]
    mod presets {}
    #[doc = include_str!("../../../book/src/rendering.md")]
    mod rendering {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
