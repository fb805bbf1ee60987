//! Hypothesis checkers, the generator construction, and the dissection verifier.
//!
//! Every containment or disjointness hypothesis is evaluated in measure: the
//! area of the offending set difference or intersection is compared against
//! [`Tolerance::area_eps`] and reported alongside the verdict.

use serde::{Deserialize, Serialize};

use crate::geometry::{Region, Tolerance};
use crate::ifs::{Family, Limits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Inside, non-overlapping family with `Y = closure(D \ Φ(D))`.
    InsideNonOverlapping,
    /// A user-supplied `Y` with the complement `C` behaving like an inside family.
    MainWithY,
    /// Outside family with the `Y` built from iterates of `D \ Φ(D)`.
    OutsideCorollary,
    /// Direct check that `X, f₁(X), …, f_k(X)` tile `D`.
    Dissection,
}

/// One hypothesis: passes iff `measured ≤ threshold` (`<` when `strict`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub strict: bool,
}

/// A region exhibiting why a condition failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub condition: String,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem: Theorem,
    pub conditions: Vec<Condition>,
    pub overall: bool,
    pub witnesses: Vec<Witness>,
    /// `C = closure(D \ (Y ∪ Φ(Y)))` for [`check_main`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<Region>,
    /// The `Y` assembled by [`check_outside`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constructed_y: Option<Region>,
    /// Piece areas over the largest piece, from [`verify`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area_ratios: Option<Vec<f64>>,
}

impl CheckReport {
    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.passed)
    }

    pub fn witness(&self, condition: &str) -> Option<&Region> {
        self.witnesses
            .iter()
            .find(|w| w.condition == condition)
            .map(|w| &w.region)
    }

    /// One line per condition, for terminals.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{:?}: {}\n",
            self.theorem,
            if self.overall { "PASS" } else { "FAIL" }
        );
        for c in &self.conditions {
            s.push_str(&format!(
                "  [{}] {}  measured={:.6e} threshold={:.6e}\n",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.measured,
                c.threshold
            ));
        }
        s
    }
}

struct Builder {
    theorem: Theorem,
    tol: Tolerance,
    conditions: Vec<Condition>,
    witnesses: Vec<Witness>,
}

impl Builder {
    fn new(theorem: Theorem, tol: &Tolerance) -> Self {
        Builder {
            theorem,
            tol: *tol,
            conditions: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    fn push(&mut self, name: String, measured: f64, threshold: f64, strict: bool) -> bool {
        let passed = if strict {
            measured < threshold
        } else {
            measured <= threshold
        };
        self.conditions.push(Condition {
            name,
            passed,
            measured,
            threshold,
            strict,
        });
        passed
    }

    fn push_witness(&mut self, name: String, measured_set: Region) {
        let m = measured_set.area();
        let t = self.tol.area_eps;
        if !self.push(name.clone(), m, t, false) {
            self.witnesses.push(Witness {
                condition: name,
                region: measured_set,
            });
        }
    }

    fn inside(&mut self, name: String, a: &Region, b: &Region) {
        self.push_witness(name, a.difference(b));
    }

    fn disjoint(&mut self, name: String, a: &Region, b: &Region) {
        self.push_witness(name, a.intersection(b));
    }

    fn null_attractor(&mut self, fam: &Family) {
        self.push("Σr² < 1".into(), fam.area_scaling(), 1.0, true);
    }

    fn regular(&mut self, label: &str, r: &Region) {
        let drift = (r.area() - r.regularized().area()).abs();
        let t = self.tol.area_eps;
        self.push(format!("{label} = closure({label}°)"), drift, t, false);
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            theorem: self.theorem,
            overall: self.conditions.iter().all(|c| c.passed),
            conditions: self.conditions,
            witnesses: self.witnesses,
            complement: None,
            constructed_y: None,
            area_ratios: None,
        }
    }
}

fn image_name(i: usize, set: &str) -> String {
    format!("f{}({set})", i + 1)
}

/// `closure(D \ Φ(D))`.
pub fn compute_seed_y(fam: &Family, d: &Region) -> Region {
    d.difference(&fam.phi(d))
}

/// Inside and pairwise-disjoint images of `D`, null attractor, and `Φ(D) ≠ D`.
pub fn check_inside_nonoverlapping(fam: &Family, d: &Region, tol: &Tolerance) -> CheckReport {
    let mut b = Builder::new(Theorem::InsideNonOverlapping, tol);
    let imgs = fam.images(d);
    for (i, img) in imgs.iter().enumerate() {
        b.inside(format!("{} ⊆ D", image_name(i, "D")), img, d);
    }
    pairwise_disjoint(&mut b, &imgs, "D", "");
    b.null_attractor(fam);
    // Φ(D) ≠ D in measure, phrased as area(D ∩ Φ(D)) ≤ area(D) − ε
    let covered = d.area() - compute_seed_y(fam, d).area();
    b.push("Φ(D) ≠ D".into(), covered, d.area() - tol.area_eps, false);
    b.finish()
}

fn pairwise_disjoint(b: &mut Builder, imgs: &[Region], set: &str, prefix: &str) {
    for i in 0..imgs.len() {
        for j in i + 1..imgs.len() {
            let name = format!("{prefix}{} ∩ {} null", image_name(i, set), image_name(j, set));
            b.disjoint(name, &imgs[i], &imgs[j]);
        }
    }
}

/// Regularity of `Y`; `Y, f₁(Y), …, f_k(Y)` inside `D` and mutually disjoint;
/// `f₁(C), …, f_k(C)` inside `C` and mutually disjoint, where
/// `C = closure(D \ (Y ∪ Φ(Y)))`.
pub fn check_main(fam: &Family, d: &Region, y: &Region, tol: &Tolerance) -> CheckReport {
    let mut b = Builder::new(Theorem::MainWithY, tol);
    b.regular("Y", y);

    let mut sets = vec![("Y".to_string(), y.clone())];
    sets.extend(
        fam.images(y)
            .into_iter()
            .enumerate()
            .map(|(i, r)| (image_name(i, "Y"), r)),
    );
    for (name, s) in &sets {
        b.inside(format!("(2) {name} ⊆ D"), s, d);
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let name = format!("(2) {} ∩ {} null", sets[i].0, sets[j].0);
            b.disjoint(name, &sets[i].1, &sets[j].1);
        }
    }

    let c = d.difference(&y.union(&fam.phi(y))).compacted();
    let imgs = fam.images(&c);
    for (i, img) in imgs.iter().enumerate() {
        b.inside(format!("(3') {} ⊆ C", image_name(i, "C")), img, &c);
    }
    pairwise_disjoint(&mut b, &imgs, "C", "(3') ");

    let mut report = b.finish();
    report.complement = Some(c);
    report
}

/// Non-overlap on `D` plus the escape conditions
/// `Φ(D ∩ Φ^{2k}(D \ Φ(D))) ⊆ D` for `k < n` and `Φ(D ∩ Φ^{2n}(D)) ⊆ D`.
/// Also assembles `Y = closure(D ∩ ⋃_{k<n} Φ^{2k}(D \ Φ(D)))`.
pub fn check_outside(fam: &Family, d: &Region, n: usize, tol: &Tolerance) -> CheckReport {
    let n = n.max(1);
    let mut b = Builder::new(Theorem::OutsideCorollary, tol);
    let imgs = fam.images(d);
    pairwise_disjoint(&mut b, &imgs, "D", "");

    let seed = compute_seed_y(fam, d);
    let mut iterate = seed;
    let mut y = Region::empty();
    for k in 0..n {
        if k > 0 {
            iterate = fam.phi(&fam.phi(&iterate));
        }
        let part = d.intersection(&iterate);
        b.inside(format!("(i) k={k}: Φ(D ∩ Φ^{}(D∖Φ(D))) ⊆ D", 2 * k), &fam.phi(&part), d);
        y = y.union(&part);
    }
    let deep = d.intersection(&(0..2 * n).fold(d.clone(), |acc, _| fam.phi(&acc)));
    b.inside(format!("(ii) n={n}: Φ(D ∩ Φ^{}(D)) ⊆ D", 2 * n), &fam.phi(&deep), d);

    let y = y.compacted();
    pairwise_disjoint(&mut b, &fam.images(&y), "Y", "");

    let mut report = b.finish();
    report.constructed_y = Some(y);
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissectOptions {
    /// Tolerance for the precondition checks.
    pub tolerance: Tolerance,
    /// Target for the uncovered-area tail bound.
    pub truncation_eps: f64,
    pub limits: Limits,
    /// Proceed even when the precondition check fails.
    pub force: bool,
    /// Use `Z_N` with this `N` instead of deriving it from the tail bound.
    pub fixed_depth: Option<usize>,
}

impl DissectOptions {
    /// Checks at `1e-9·area(D)`, truncation at `1e-6·area(D)`.
    pub fn for_domain(d: &Region) -> Self {
        DissectOptions {
            tolerance: Tolerance::for_domain(d),
            truncation_eps: 1e-6 * d.area(),
            limits: Limits::default(),
            force: false,
            fixed_depth: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissectionResult {
    /// `Z_N ∪ Y`.
    pub generator: Region,
    /// `[X, f₁(X), …, f_k(X)]`.
    pub pieces: Vec<Region>,
    /// `area(D) − area(D ∩ ⋃ pieces)`.
    pub uncovered_area: f64,
    /// Largest pairwise intersection area among the pieces.
    pub overlap_area: f64,
    /// `area(⋃ pieces \ D)`.
    pub escape_area: f64,
    /// Piece areas divided by the largest piece area.
    pub area_ratios: Vec<f64>,
    /// Highest power of Φ applied, `2N`.
    pub depth_used: usize,
    /// Bound on the area still missing from the generator.
    pub tail_bound: f64,
    /// Acceptance slack: the run succeeded when uncovered, overlap and escape
    /// areas are all at most this.
    pub slack: f64,
    /// `C`, the part of `D` generated by the inside family.
    pub complement: Region,
    /// `Z_N`, the generator of `C`.
    pub complement_generator: Region,
    /// The precondition report.
    pub report: CheckReport,
}

impl DissectionResult {
    pub fn succeeded(&self) -> bool {
        self.uncovered_area <= self.slack
            && self.overlap_area <= self.slack
            && self.escape_area <= self.slack
    }

    /// Piece areas sorted ascending and divided by the smallest.
    pub fn ratio_profile(&self) -> Vec<f64> {
        let mut a: Vec<f64> = self.pieces.iter().map(Region::area).collect();
        a.sort_by(f64::total_cmp);
        let min = a.first().copied().unwrap_or(0.0);
        a.iter().map(|x| x / min).collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DissectError {
    #[error("preconditions failed:\n{}", .0.summary())]
    Refused(Box<CheckReport>),
    #[error("{reason}; returning a partial result")]
    Resource {
        reason: String,
        partial: Box<DissectionResult>,
    },
}

/// `(uncovered, max pairwise overlap, escape)` for pieces meant to tile `d`.
///
/// Uncovered and escape areas are upper bounds from the pairwise overlaps
/// (Bonferroni), exact when the pieces are disjoint in measure. This avoids
/// forming the union of the pieces, which dominates the cost on deep
/// generators.
pub fn cover_metrics(d: &Region, pieces: &[Region]) -> (f64, f64, f64) {
    let mut overlap = 0.0f64;
    let mut overlap_sum = 0.0f64;
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let a = pieces[i].intersection(&pieces[j]).area();
            overlap = overlap.max(a);
            overlap_sum += a;
        }
    }
    let mut inside = 0.0;
    let mut escape = 0.0;
    for p in pieces {
        let a = p.intersection(d).area();
        inside += a;
        escape += (p.area() - a).max(0.0);
    }
    let uncovered = (d.area() - inside + overlap_sum).max(0.0);
    (uncovered, overlap, escape)
}

fn area_ratios(pieces: &[Region]) -> Vec<f64> {
    let areas: Vec<f64> = pieces.iter().map(Region::area).collect();
    let max = areas.iter().copied().fold(0.0, f64::max);
    areas
        .iter()
        .map(|a| if max > 0.0 { a / max } else { 0.0 })
        .collect()
}

/// Pieces and tiling metrics for a given generator, with no truncation
/// bookkeeping (`depth_used = 0`, empty complement).
pub fn assemble(
    fam: &Family,
    d: &Region,
    generator: Region,
    slack: f64,
    report: CheckReport,
) -> DissectionResult {
    let mut pieces = vec![generator.clone()];
    pieces.extend(fam.images(&generator));
    let (uncovered, overlap, escape) = cover_metrics(d, &pieces);
    DissectionResult {
        area_ratios: area_ratios(&pieces),
        generator,
        pieces,
        uncovered_area: uncovered,
        overlap_area: overlap,
        escape_area: escape,
        depth_used: 0,
        tail_bound: 0.0,
        slack,
        complement: Region::empty(),
        complement_generator: Region::empty(),
        report,
    }
}

/// Builds the generator `X = Z_N ∪ Y` of a dissection of `D`.
///
/// With `Y` empty the family must be inside and non-overlapping on `D`;
/// otherwise [`check_main`] must pass. `Z_N = Y_C ∪ Φ²(Y_C) ∪ … ∪ Φ^{2N}(Y_C)`
/// with `Y_C = closure(C \ Φ(C))`, and `N` is the least depth whose tail bound
/// `s^{2N+2}·area(C)` (`s = Σ rᵢ²`) is below `opts.truncation_eps`.
pub fn dissect(
    fam: &Family,
    d: &Region,
    y: &Region,
    opts: &DissectOptions,
) -> Result<DissectionResult, DissectError> {
    let report = if y.is_empty() {
        check_inside_nonoverlapping(fam, d, &opts.tolerance)
    } else {
        check_main(fam, d, y, &opts.tolerance)
    };
    if !report.overall && !opts.force {
        return Err(DissectError::Refused(Box::new(report)));
    }
    let c = match &report.complement {
        Some(c) => c.clone(),
        None => d.clone(),
    };
    let y_c = compute_seed_y(fam, &c).compacted();
    let certified = report.overall;

    let s = fam.area_scaling();
    let tail = |n: usize| s.powi(2 * n as i32 + 2) * c.area();
    let cap_n = opts.limits.max_depth / 2;
    let mut problem = None;
    let wanted = match opts.fixed_depth {
        Some(n) => n,
        None if s < 1.0 => (0..).find(|&n| tail(n) <= opts.truncation_eps).unwrap(),
        None => {
            problem = Some(format!("Σr² = {s} ≥ 1: the tail bound does not shrink"));
            cap_n
        }
    };
    if wanted > cap_n {
        problem = Some(format!(
            "depth {} needed, cap is {}",
            2 * wanted,
            opts.limits.max_depth
        ));
    }

    let mut z = y_c.clone();
    let mut layer = y_c;
    let mut reached = 0;
    for _ in 0..wanted.min(cap_n) {
        let needed = layer.cell_count() * fam.len() * fam.len() + z.cell_count();
        if needed > opts.limits.max_cells {
            problem = Some(format!(
                "depth {} would need about {needed} cells, cap is {}",
                2 * reached + 2,
                opts.limits.max_cells
            ));
            break;
        }
        if certified {
            // images of subsets of C are disjoint once the check passed, and
            // so are the even iterates of Y_C
            layer = Region::concat(fam.images(&Region::concat(fam.images(&layer))));
        } else {
            layer = fam.phi(&fam.phi(&layer));
        }
        if layer.is_empty() {
            reached = wanted.min(cap_n);
            break;
        }
        z = if certified {
            Region::concat([z, layer.clone()])
        } else {
            z.union(&layer)
        };
        reached += 1;
    }

    let generator = z.union(y);
    // a tail bound at the target leaves uncovered area up to the target,
    // plus check-level noise
    let slack = opts.truncation_eps + opts.tolerance.area_eps;
    let mut result = assemble(fam, d, generator, slack, report);
    result.depth_used = 2 * reached;
    result.tail_bound = if s < 1.0 { tail(reached) } else { f64::INFINITY };
    result.complement = c;
    result.complement_generator = z;
    match problem {
        Some(reason) => Err(DissectError::Resource {
            reason,
            partial: Box::new(result),
        }),
        None => Ok(result),
    }
}

/// Checks that `X, f₁(X), …, f_k(X)` cover `D`, stay inside it, and overlap
/// only in null sets.
pub fn verify(d: &Region, fam: &Family, x: &Region, tol: &Tolerance) -> CheckReport {
    let mut b = Builder::new(Theorem::Dissection, tol);
    b.regular("X", x);
    let mut pieces = vec![x.clone()];
    pieces.extend(fam.images(x));
    let (uncovered, _, escape) = cover_metrics(d, &pieces);
    b.push("D ⊆ X ∪ Φ(X)".into(), uncovered, tol.area_eps, false);
    b.push("X ∪ Φ(X) ⊆ D".into(), escape, tol.area_eps, false);
    let names: Vec<String> = std::iter::once("X".to_string())
        .chain((0..fam.len()).map(|i| image_name(i, "X")))
        .collect();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            b.disjoint(
                format!("{} ∩ {} null", names[i], names[j]),
                &pieces[i],
                &pieces[j],
            );
        }
    }
    let mut report = b.finish();
    report.area_ratios = Some(area_ratios(&pieces));
    report
}
