use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::{GeometryError, Vec2};

/// A contracting planar similarity `p ↦ ratio · R(angle) · M · p + translation`,
/// where `M` is the reflection `(x, y) ↦ (x, −y)` when `reflect` is set and the
/// identity otherwise. The reflection is applied before the rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SimilarityFields", into = "SimilarityFields")]
pub struct Similarity {
    ratio: f64,
    angle: f64,
    reflect: bool,
    translation: Vec2,
    // ratio·cos(angle), ratio·sin(angle)
    a: f64,
    b: f64,
}

#[derive(Serialize, Deserialize)]
struct SimilarityFields {
    ratio: f64,
    angle: f64,
    reflect: bool,
    translation: Vec2,
}

impl TryFrom<SimilarityFields> for Similarity {
    type Error = GeometryError;
    fn try_from(f: SimilarityFields) -> Result<Self, Self::Error> {
        Similarity::new(f.ratio, f.angle, f.reflect, f.translation)
    }
}

impl From<Similarity> for SimilarityFields {
    fn from(s: Similarity) -> Self {
        SimilarityFields {
            ratio: s.ratio,
            angle: s.angle,
            reflect: s.reflect,
            translation: s.translation,
        }
    }
}

/// `(cos θ, sin θ)` with exact table values when θ is a multiple of π/6 or π/4.
///
/// Keeps images of the preset domains edge-aligned: `cos(2π/3)` evaluated by
/// libm is not exactly `-0.5`, which would leave slivers between pieces that
/// are meant to share an edge.
pub fn exact_cos_sin(angle: f64) -> (f64, f64) {
    const H: f64 = 0.5;
    // √3/2 correctly rounded
    const S3: f64 = 0.866_025_403_784_438_6;
    let theta = angle.rem_euclid(TAU);
    let k6 = theta / (PI / 6.0);
    if (k6 - k6.round()).abs() < 1e-12 {
        let table = [
            (1.0, 0.0),
            (S3, H),
            (H, S3),
            (0.0, 1.0),
            (-H, S3),
            (-S3, H),
            (-1.0, 0.0),
            (-S3, -H),
            (-H, -S3),
            (0.0, -1.0),
            (H, -S3),
            (S3, -H),
        ];
        return table[(k6.round() as usize) % 12];
    }
    let k4 = theta / (PI / 4.0);
    if (k4 - k4.round()).abs() < 1e-12 {
        let r = FRAC_1_SQRT_2;
        let table = [(r, r), (-r, r), (-r, -r), (r, -r)];
        // odd multiples only; even ones were caught by the π/6 table
        return table[((k4.round() as usize) % 8) / 2];
    }
    (theta.cos(), theta.sin())
}

impl Similarity {
    /// Builds a similarity; the ratio must lie in (0, 1) and all fields be finite.
    pub fn new(
        ratio: f64,
        angle: f64,
        reflect: bool,
        translation: Vec2,
    ) -> Result<Self, GeometryError> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(GeometryError::InvalidSimilarity(format!(
                "contraction ratio must lie in (0, 1), got {ratio}"
            )));
        }
        if !angle.is_finite() || !translation.is_finite() {
            return Err(GeometryError::InvalidSimilarity(
                "angle and translation must be finite".into(),
            ));
        }
        let angle = angle.rem_euclid(TAU);
        let (c, s) = exact_cos_sin(angle);
        Ok(Similarity {
            ratio,
            angle,
            reflect,
            translation,
            a: ratio * c,
            b: ratio * s,
        })
    }

    /// Pure scaling about the origin followed by a translation.
    pub fn scaling(ratio: f64, translation: Vec2) -> Result<Self, GeometryError> {
        Similarity::new(ratio, 0.0, false, translation)
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Rotation angle in radians, normalized to `[0, 2π)`.
    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn reflect(&self) -> bool {
        self.reflect
    }

    pub fn translation(&self) -> Vec2 {
        self.translation
    }

    /// Determinant sign of the linear part: orientation reversing maps flip ring order.
    pub fn preserves_orientation(&self) -> bool {
        !self.reflect
    }

    #[inline]
    pub fn apply(&self, p: Vec2) -> Vec2 {
        let y = if self.reflect { -p.y } else { p.y };
        Vec2::new(
            self.a * p.x - self.b * y + self.translation.x,
            self.b * p.x + self.a * y + self.translation.y,
        )
    }

    /// `self ∘ other`, i.e. the map `p ↦ self(other(p))`.
    pub fn compose(&self, other: &Similarity) -> Similarity {
        // R(α)M R(β) = R(α−β)M, and M·M = I.
        let angle = if self.reflect {
            self.angle - other.angle
        } else {
            self.angle + other.angle
        };
        Similarity::new(
            self.ratio * other.ratio,
            angle,
            self.reflect ^ other.reflect,
            self.apply(other.translation),
        )
        .expect("product of contractions is a contraction")
    }

    /// The unique fixed point of the contraction.
    pub fn fixed_point(&self) -> Vec2 {
        // Solve (I − L) p = t for the 2×2 linear part L.
        let (l00, l01, l10, l11) = if self.reflect {
            (self.a, self.b, self.b, -self.a)
        } else {
            (self.a, -self.b, self.b, self.a)
        };
        let (m00, m01, m10, m11) = (1.0 - l00, -l01, -l10, 1.0 - l11);
        let det = m00 * m11 - m01 * m10;
        let t = self.translation;
        Vec2::new(
            (m11 * t.x - m01 * t.y) / det,
            (m00 * t.y - m10 * t.x) / det,
        )
    }
}
