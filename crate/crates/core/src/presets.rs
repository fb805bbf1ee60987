//! Catalog of worked examples: domains, families, seed sets and thresholds.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dissection::{check_inside_nonoverlapping, check_main, check_outside, verify, CheckReport};
use crate::geometry::{GeometryError, Region, Similarity, Tolerance, Vec2};
use crate::ifs::Family;
use crate::roots::solve_high_phi;

const S3: f64 = 0.866_025_403_784_438_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    Exa4,
    Exagold,
    Exaflip,
    Exasquare,
    Exaoutside,
    Exanodis,
    Scherer,
    Rectangle,
    StarSingle,
}

impl PresetName {
    pub const ALL: [PresetName; 9] = [
        PresetName::Exa4,
        PresetName::Exagold,
        PresetName::Exaflip,
        PresetName::Exasquare,
        PresetName::Exaoutside,
        PresetName::Exanodis,
        PresetName::Scherer,
        PresetName::Rectangle,
        PresetName::StarSingle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Exa4 => "exa4",
            PresetName::Exagold => "exagold",
            PresetName::Exaflip => "exaflip",
            PresetName::Exasquare => "exasquare",
            PresetName::Exaoutside => "exaoutside",
            PresetName::Exanodis => "exanodis",
            PresetName::Scherer => "scherer",
            PresetName::Rectangle => "rectangle",
            PresetName::StarSingle => "star_single",
        }
    }

    /// Whether the preset depends on `r`.
    pub fn is_parametric(self) -> bool {
        !matches!(self, PresetName::Scherer | PresetName::StarSingle)
    }

    /// `r` used when none is given.
    pub fn default_r(self) -> Option<f64> {
        let c = AlgebraicConstants::get();
        match self {
            PresetName::Exa4 => Some(0.5),
            PresetName::Exagold => Some(c.golden_threshold),
            PresetName::Exaflip | PresetName::Exaoutside => Some(c.inv_high_phi),
            PresetName::Exasquare => Some(0.5),
            PresetName::Exanodis => Some(0.55),
            PresetName::Rectangle => Some(0.7),
            PresetName::Scherer | PresetName::StarSingle => None,
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = PresetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PresetName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| PresetError::Unknown(s.to_string()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PresetError {
    #[error("unknown preset `{0}`")]
    Unknown(String),
    #[error("parameter r must lie in (0, 1), got {0}")]
    BadParameter(f64),
    #[error("preset `{0}` has no threshold")]
    NoThreshold(PresetName),
    #[error("star body: {0}")]
    NotStarShaped(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Which hypotheses certify the preset's dissection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Checker {
    InsideNonOverlapping,
    Main,
    Outside { n: usize },
    /// The generator is known; check the tiling directly.
    Verify,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: PresetName,
    pub r: Option<f64>,
    pub domain: Region,
    pub family: Family,
    pub seed_y: Option<Region>,
    /// Known generator, for presets checked with [`Checker::Verify`].
    pub generator: Option<Region>,
    /// `(lo, hi]`.
    pub valid_range: Option<(f64, f64)>,
    pub checker: Checker,
}

/// Closed-form constants behind the thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicConstants {
    /// `(√5 − 1)/2`.
    pub golden_threshold: f64,
    /// Positive root of `x³ − 2x² + x − 1`.
    pub high_phi: f64,
    pub inv_high_phi: f64,
}

impl AlgebraicConstants {
    pub fn get() -> Self {
        let high_phi = solve_high_phi();
        AlgebraicConstants {
            golden_threshold: (5f64.sqrt() - 1.0) / 2.0,
            high_phi,
            inv_high_phi: 1.0 / high_phi,
        }
    }
}

/// Critical `r` above which the preset's checker fails.
pub fn threshold(name: PresetName) -> Result<f64, PresetError> {
    let c = AlgebraicConstants::get();
    match name {
        PresetName::Exa4 => Ok(0.5),
        PresetName::Exagold => Ok(c.golden_threshold),
        PresetName::Exaflip | PresetName::Exasquare | PresetName::Exaoutside => Ok(c.inv_high_phi),
        other => Err(PresetError::NoThreshold(other)),
    }
}

fn sim(r: f64, angle: f64, reflect: bool, tx: f64, ty: f64) -> Similarity {
    Similarity::new(r, angle, reflect, Vec2::new(tx, ty)).expect("preset maps are contractions")
}

fn triangle(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Region {
    Region::convex(vec![a.into(), b.into(), c.into()]).expect("preset triangles are valid")
}

/// `△((0,0), (1,0), (1/2, √3/2))`.
pub fn unit_triangle() -> Region {
    triangle((0.0, 0.0), (1.0, 0.0), (0.5, S3))
}

pub fn unit_square() -> Region {
    Region::rect(0.0, 0.0, 1.0, 1.0).expect("unit square")
}

/// The two corner maps shared by several triangle examples.
fn corner_maps(r: f64) -> [Similarity; 2] {
    [
        sim(r, 2.0 * PI / 3.0, false, r, 0.0),
        sim(r, 4.0 * PI / 3.0, false, 1.0 - r / 2.0, r * S3),
    ]
}

/// Instantiates a preset. `r` is ignored by the non-parametric presets and
/// defaults to [`PresetName::default_r`].
pub fn build(name: PresetName, r: Option<f64>) -> Result<Preset, PresetError> {
    let r = if name.is_parametric() {
        let r = r.or(name.default_r()).expect("parametric presets have defaults");
        if !(r > 0.0 && r < 1.0) {
            return Err(PresetError::BadParameter(r));
        }
        Some(r)
    } else {
        None
    };
    let rv = r.unwrap_or(0.5);
    let c = AlgebraicConstants::get();
    let tri = unit_triangle();
    let fam = |maps: Vec<Similarity>| Family::new(maps, name.as_str()).expect("non-empty");

    let mut preset = Preset {
        name,
        r,
        domain: tri.clone(),
        family: fam(corner_maps(rv).to_vec()),
        seed_y: None,
        generator: None,
        valid_range: None,
        checker: Checker::Main,
    };
    match name {
        PresetName::Exa4 => {
            preset.valid_range = Some((0.0, 0.5));
            preset.checker = Checker::InsideNonOverlapping;
        }
        PresetName::Exagold => {
            let a = rv / (2.0 * (1.0 + rv));
            preset.seed_y = Some(triangle((a, 2.0 * S3 * a), (1.0 - a, 2.0 * S3 * a), (0.5, S3)));
            preset.valid_range = Some((0.0, c.golden_threshold));
        }
        PresetName::Exaflip => {
            preset.family = fam(vec![
                sim(rv, PI / 3.0, true, 0.0, 0.0),
                corner_maps(rv)[1],
            ]);
            let h = rv * S3;
            preset.seed_y = Some(triangle((rv / 2.0, h), (1.0 - rv / 2.0, h), (0.5, S3)));
            preset.valid_range = Some((0.0, c.inv_high_phi));
        }
        PresetName::Exasquare => {
            preset.domain = unit_square();
            preset.family = fam(vec![
                sim(rv, 0.0, false, 0.0, 0.0),
                sim(rv, 3.0 * PI / 2.0, false, 1.0 - rv, 1.0),
            ]);
            preset.valid_range = Some((0.0, c.inv_high_phi));
        }
        PresetName::Exaoutside => {
            preset.family = fam(vec![
                sim(rv, 4.0 * PI / 3.0, false, rv / 2.0, rv * S3),
                sim(rv, PI, false, 1.5 * rv, rv * S3),
            ]);
            preset.valid_range = Some((0.0, c.inv_high_phi));
            preset.checker = Checker::Outside { n: 1 };
        }
        PresetName::Exanodis => {
            preset.family = fam(vec![
                sim(rv, 4.0 * PI / 3.0, false, rv / 2.0, rv * S3),
                sim(rv, 2.0 * PI / 3.0, false, 1.0, 0.0),
            ]);
            preset.valid_range = Some((0.0, 0.5));
        }
        PresetName::Scherer => {
            preset.family = fam(vec![
                sim(0.5, 0.0, true, 1.0 / 12.0, S3 / 2.0),
                sim(0.5, PI, true, 0.5, 0.0),
            ]);
            let ring: Vec<Vec2> = [
                (1.0 / 3.0, 0.0),
                (1.0, 0.0),
                (0.5, S3),
                (0.25, S3 / 2.0),
                (7.0 / 12.0, S3 / 2.0),
            ]
            .into_iter()
            .map(Vec2::from)
            .collect();
            preset.generator = Some(Region::polygon(&ring)?);
            preset.checker = Checker::Verify;
        }
        PresetName::Rectangle => {
            let w = 1.0 + 2.0 * rv * rv;
            preset.domain = Region::rect(0.0, 0.0, w, rv)?;
            preset.family = fam(vec![
                // (x, y) ↦ (t + r·y, r·x): X stood on its end in each slot
                sim(rv, PI / 2.0, true, 1.0, 0.0),
                sim(rv, PI / 2.0, true, 1.0 + rv * rv, 0.0),
            ]);
            preset.generator = Some(Region::rect(0.0, 0.0, 1.0, rv)?);
            preset.valid_range = Some((0.0, 1.0));
            preset.checker = Checker::Verify;
        }
        PresetName::StarSingle => {
            preset.family = fam(vec![sim(0.5f64.sqrt(), 5.0 * PI / 8.0, false, 0.8, 0.0)]);
            preset.checker = Checker::InsideNonOverlapping;
        }
    }
    if matches!(name, PresetName::Exasquare | PresetName::Exanodis) {
        preset.seed_y = Some(crate::dissection::compute_seed_y(&preset.family, &preset.domain));
    }
    Ok(preset)
}

impl Preset {
    /// Default check tolerance: `1e-9·area(D)`.
    pub fn tolerance(&self) -> Tolerance {
        Tolerance::for_domain(&self.domain)
    }

    /// Runs the preset's designated checker.
    pub fn check(&self, tol: &Tolerance) -> CheckReport {
        match self.checker {
            Checker::InsideNonOverlapping => {
                check_inside_nonoverlapping(&self.family, &self.domain, tol)
            }
            Checker::Main => check_main(
                &self.family,
                &self.domain,
                self.seed_y.as_ref().unwrap_or(&Region::empty()),
                tol,
            ),
            Checker::Outside { n } => check_outside(&self.family, &self.domain, n, tol),
            Checker::Verify => verify(
                &self.domain,
                &self.family,
                self.generator.as_ref().expect("verify presets carry a generator"),
                tol,
            ),
        }
    }

    /// The `Y` handed to the generator construction.
    pub fn dissection_y(&self, tol: &Tolerance) -> Region {
        match self.checker {
            Checker::Outside { n } => check_outside(&self.family, &self.domain, n, tol)
                .constructed_y
                .unwrap_or_default(),
            _ => self.seed_y.clone().unwrap_or_default(),
        }
    }
}

/// Dissection of a star body with ratio `1 : a` by `f(x) = x/√a`.
///
/// `polygon` must be star-shaped with respect to the origin; this is checked
/// by casting rays from the origin to every vertex and edge midpoint.
pub fn star_body(a: f64, polygon: &[Vec2]) -> Result<Preset, PresetError> {
    if !(a > 1.0 && a.is_finite()) {
        return Err(PresetError::BadParameter(1.0 / a.sqrt()));
    }
    let domain = Region::polygon(polygon)?;
    let n = polygon.len();
    let probes = (0..n).flat_map(|i| {
        let (p, q) = (polygon[i], polygon[(i + 1) % n]);
        [p, p.lerp(q, 0.5)]
    });
    for p in probes {
        for k in 1..64 {
            let t = k as f64 / 64.0;
            if domain.distance_to_point(p * t) > 1e-9 {
                return Err(PresetError::NotStarShaped(format!(
                    "segment from the origin to ({}, {}) leaves the polygon",
                    p.x, p.y
                )));
            }
        }
    }
    let ratio = 1.0 / a.sqrt();
    Ok(Preset {
        name: PresetName::StarSingle,
        r: Some(ratio),
        domain,
        family: Family::new(vec![Similarity::scaling(ratio, Vec2::ZERO)?], "star body")
            .expect("non-empty"),
        seed_y: None,
        generator: None,
        valid_range: None,
        checker: Checker::InsideNonOverlapping,
    })
}
