//! Parameter sweeps: evaluate a preset's checker over a grid of `r` and
//! refine the pass/fail boundary by bisection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::Tolerance;
use crate::presets::{build, Checker, PresetError, PresetName};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub from: f64,
    pub to: f64,
    pub step: f64,
    /// Check tolerance relative to `area(D)`.
    ///
    /// Much tighter than the default check tolerance: near a threshold where
    /// the witness area grows quadratically, `1e-9` would blur the boundary
    /// by about `1e-5`.
    pub rel_eps: f64,
    /// Width of the final bisection bracket.
    pub bisection_tol: f64,
    /// Overrides the depth of outside-corollary checks.
    pub outside_n: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            from: 0.3,
            to: 0.7,
            step: 0.01,
            rel_eps: 1e-13,
            bisection_tol: 1e-8,
            outside_n: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub r: f64,
    pub overall: bool,
    /// Names of the failed conditions.
    pub failed: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub preset: PresetName,
    /// Sorted by `r`.
    pub grid: Vec<SweepPoint>,
    /// Last passing grid point before the first failing one, and that failing point.
    pub bracket: Option<(f64, f64)>,
    /// Bisection estimate of the pass/fail boundary.
    pub threshold: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("preset `{0}` has no parameter to sweep")]
    NotParametric(PresetName),
    #[error("bad sweep range: from={from}, to={to}, step={step}")]
    BadRange { from: f64, to: f64, step: f64 },
    #[error(transparent)]
    Preset(#[from] PresetError),
}

/// Designated checker verdict at `r`.
pub fn evaluate(name: PresetName, r: f64, opts: &SweepOptions) -> Result<SweepPoint, PresetError> {
    let mut p = build(name, Some(r))?;
    if let (Checker::Outside { .. }, Some(n)) = (p.checker, opts.outside_n) {
        p.checker = Checker::Outside { n };
    }
    let tol = Tolerance::relative(&p.domain, opts.rel_eps);
    let report = p.check(&tol);
    Ok(SweepPoint {
        r,
        overall: report.overall,
        failed: report.failures().map(|c| c.name.clone()).collect(),
    })
}

pub fn sweep(name: PresetName, opts: &SweepOptions) -> Result<SweepResult, SweepError> {
    if !name.is_parametric() {
        return Err(SweepError::NotParametric(name));
    }
    let (from, to, step) = (opts.from, opts.to, opts.step);
    if !(from > 0.0 && to < 1.0 && from <= to && step > 0.0) {
        return Err(SweepError::BadRange { from, to, step });
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    let rs: Vec<f64> = (0..count).map(|i| from + i as f64 * step).collect();
    let mut grid = rs
        .par_iter()
        .map(|&r| evaluate(name, r, opts))
        .collect::<Result<Vec<_>, _>>()?;
    grid.sort_by(|a, b| a.r.total_cmp(&b.r));

    let bracket = grid
        .iter()
        .position(|p| !p.overall)
        .filter(|&i| i > 0)
        .map(|i| (grid[i - 1].r, grid[i].r));
    let threshold = match bracket {
        Some((mut lo, mut hi)) => {
            while hi - lo > opts.bisection_tol {
                let mid = 0.5 * (lo + hi);
                if evaluate(name, mid, opts)?.overall {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Some(0.5 * (lo + hi))
        }
        None => None,
    };
    Ok(SweepResult {
        preset: name,
        grid,
        bracket,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_scherer_and_bad_ranges() {
        let o = SweepOptions::default();
        assert!(matches!(
            sweep(PresetName::Scherer, &o),
            Err(SweepError::NotParametric(_))
        ));
        let bad = SweepOptions { from: 0.6, to: 0.5, ..o };
        assert!(matches!(
            sweep(PresetName::Exa4, &bad),
            Err(SweepError::BadRange { .. })
        ));
    }
}
