//! TOML run configuration and the inline family format.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use selfsim::svg::RenderOptions;
use selfsim::{Family, Region, Similarity, Vec2};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub preset: Option<String>,
    pub r: Option<f64>,
    /// Inline domain: one outer ring.
    pub domain: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub maps: Vec<MapSpec>,
    pub y: Option<Vec<[f64; 2]>>,
    /// Depth of the outside-family check; selects that checker for inline families.
    pub outside_n: Option<usize>,
    #[serde(default)]
    pub tolerance: ToleranceSection,
    #[serde(default)]
    pub limits: LimitsSection,
    #[serde(default)]
    pub render: RenderOptions,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    /// Check tolerance relative to `area(D)`.
    pub area_rel: Option<f64>,
    /// Dissection truncation target relative to `area(D)`.
    pub truncation_rel: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsSection {
    pub depth_cap: Option<usize>,
    pub max_cells: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub step: Option<f64>,
    pub rel_eps: Option<f64>,
}

/// One inline map `p ↦ ratio·R(angle)·M·p + (tx, ty)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub ratio: f64,
    #[serde(default)]
    pub angle: Angle,
    #[serde(default)]
    pub reflect: bool,
    #[serde(default)]
    pub tx: f64,
    #[serde(default)]
    pub ty: f64,
}

/// Degrees as a number, or a multiple of π as a string: `"2pi/3"`, `"-pi/4"`, `"1.5pi"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Degrees(f64),
    Expr(String),
}

impl Default for Angle {
    fn default() -> Self {
        Angle::Degrees(0.0)
    }
}

impl Angle {
    pub fn radians(&self) -> Result<f64> {
        match self {
            Angle::Degrees(d) => Ok(d.to_radians()),
            Angle::Expr(s) => parse_pi_fraction(s),
        }
    }
}

/// Parses `[coef][*]pi[/den]`, or a bare number of degrees.
pub fn parse_pi_fraction(s: &str) -> Result<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.replace('π', "pi");
    let Some((coef, rest)) = t.split_once("pi") else {
        let deg: f64 = t.parse().with_context(|| format!("bad angle `{s}`"))?;
        return Ok(deg.to_radians());
    };
    let coef = coef.trim_end_matches('*');
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().with_context(|| format!("bad angle `{s}`"))?,
    };
    let den = match rest {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .with_context(|| format!("bad angle `{s}`"))?,
    };
    if den == 0.0 {
        bail!("bad angle `{s}`: zero denominator");
    }
    Ok(c * PI / den)
}

impl MapSpec {
    pub fn similarity(&self) -> Result<Similarity> {
        Ok(Similarity::new(
            self.ratio,
            self.angle.radians()?,
            self.reflect,
            Vec2::new(self.tx, self.ty),
        )?)
    }
}

pub fn load(path: &Path) -> Result<ConfigFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn ring(points: &[[f64; 2]]) -> Vec<Vec2> {
    points.iter().map(|&p| Vec2::from(p)).collect()
}

pub fn polygon(points: &[[f64; 2]]) -> Result<Region> {
    Ok(Region::polygon(&ring(points))?)
}

/// Inline polygon from the command line: `"x,y x,y …"` or `"x,y; x,y; …"`.
pub fn parse_polygon_arg(s: &str) -> Result<Region> {
    let pts = s
        .split(|c: char| c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|pair| {
            let (x, y) = pair
                .split_once(',')
                .with_context(|| format!("expected x,y but got `{pair}`"))?;
            Ok([x.trim().parse::<f64>()?, y.trim().parse::<f64>()?])
        })
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("bad polygon `{s}`"))?;
    if pts.len() < 3 {
        bail!("a polygon needs at least three points");
    }
    polygon(&pts)
}

pub fn family(maps: &[MapSpec], label: &str) -> Result<Family> {
    let maps = maps
        .iter()
        .map(MapSpec::similarity)
        .collect::<Result<Vec<_>>>()?;
    Ok(Family::new(maps, label)?)
}
