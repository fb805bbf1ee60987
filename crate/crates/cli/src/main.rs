mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use selfsim::dissection::{assemble, dissect, verify, DissectError, DissectOptions, DissectionResult};
use selfsim::ifs::Limits;
use selfsim::presets::{build, Checker, PresetName};
use selfsim::svg::{render_panels, render_pieces, write_svg, Panel, RenderOptions};
use selfsim::sweep::{sweep, SweepOptions};
use selfsim::{CheckReport, Family, Region, Tolerance};

use config::ConfigFile;

#[derive(Parser)]
#[command(name = "selfsim", version, about = "Check, build and draw self-similar dissections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the hypothesis checker (or verify a saved dissection with --from).
    Check(CheckArgs),
    /// Build a generator and report the tiling metrics.
    Dissect(DissectArgs),
    /// Draw a dissection, or the iteration stages with --stages.
    Render(RenderArgs),
    /// Locate the pass/fail threshold of a parametric preset.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct Source {
    /// Preset name: exa4, exagold, exaflip, exasquare, exaoutside, exanodis,
    /// scherer, rectangle, star_single.
    #[arg(long)]
    preset: Option<String>,
    /// Preset parameter.
    #[arg(long)]
    r: Option<f64>,
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inline Y polygon, "x,y x,y ...".
    #[arg(long)]
    y: Option<String>,
    /// Check tolerance relative to area(D).
    #[arg(long)]
    eps: Option<f64>,
    /// Depth n of the outside-family check.
    #[arg(long)]
    n: Option<usize>,
    /// Largest power of Φ the construction may apply.
    #[arg(long)]
    depth_cap: Option<usize>,
    /// Print JSON instead of the text summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    src: Source,
    /// Verify the generator stored in a file written by `dissect --out`.
    #[arg(long)]
    from: Option<PathBuf>,
    /// Write the full JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DissectArgs {
    #[command(flatten)]
    src: Source,
    /// Truncation target for the uncovered area, relative to area(D).
    #[arg(long)]
    trunc: Option<f64>,
    /// Build even when the checker fails.
    #[arg(long = "override")]
    force: bool,
    /// Write domain, family and result as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write an SVG of the pieces.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    src: Source,
    /// Render a file written by `dissect --out` instead of rebuilding.
    #[arg(long)]
    from: Option<PathBuf>,
    /// Truncation target for the uncovered area, relative to area(D).
    #[arg(long)]
    trunc: Option<f64>,
    /// Build even when the checker fails.
    #[arg(long = "override")]
    force: bool,
    /// Panels Y, Φ(Y), ..., Φ⁴(Y) and the attractor.
    #[arg(long)]
    stages: bool,
    /// Overlay attractor sample points.
    #[arg(long)]
    attractor: bool,
    /// Output SVG path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    src: Source,
    /// First grid value of r.
    #[arg(long)]
    from: Option<f64>,
    /// Last grid value of r.
    #[arg(long)]
    to: Option<f64>,
    /// Grid spacing.
    #[arg(long)]
    step: Option<f64>,
    /// Write the sweep as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error carrying the process exit code.
#[derive(Debug)]
struct Exit(u8, anyhow::Error);

fn usage(e: anyhow::Error) -> Exit {
    Exit(2, e)
}

/// What a command operates on, from a preset or an inline config.
struct Problem {
    label: String,
    preset: Option<PresetName>,
    domain: Region,
    family: Family,
    y: Option<Region>,
    generator: Option<Region>,
    checker: Checker,
    tol: Tolerance,
    limits: Limits,
    truncation_rel: f64,
    render: RenderOptions,
    cfg: ConfigFile,
}

#[derive(Serialize, Deserialize)]
struct SavedDissection {
    label: String,
    domain: Region,
    family: Family,
    result: DissectionResult,
}

fn load_problem(src: &Source) -> Result<Problem> {
    let cfg = match &src.config {
        Some(p) => config::load(p)?,
        None => ConfigFile::default(),
    };
    let preset_name = src.preset.clone().or(cfg.preset.clone());
    let inline = cfg.domain.is_some() || !cfg.maps.is_empty();
    let (label, preset, domain, family, mut y, generator, mut checker) = match (preset_name, inline) {
        (Some(_), true) => bail!("give either a preset or an inline domain and maps, not both"),
        (None, false) => bail!("no problem given: use --preset NAME or --config FILE"),
        (Some(name), false) => {
            let name: PresetName = name.parse()?;
            let p = build(name, src.r.or(cfg.r))?;
            let label = match p.r {
                Some(r) => format!("{name} r={r}"),
                None => name.to_string(),
            };
            (label, Some(name), p.domain, p.family, p.seed_y, p.generator, p.checker)
        }
        (None, true) => {
            let d = cfg.domain.as_deref().context("inline config needs `domain`")?;
            if cfg.maps.is_empty() {
                bail!("inline config needs at least one [[maps]] entry");
            }
            let y = cfg.y.as_deref().map(config::polygon).transpose()?;
            let checker = if y.is_some() {
                Checker::Main
            } else {
                Checker::InsideNonOverlapping
            };
            let fam = config::family(&cfg.maps, "inline")?;
            ("inline".to_string(), None, config::polygon(d)?, fam, y, None, checker)
        }
    };
    if let Some(s) = &src.y {
        y = Some(config::parse_polygon_arg(s)?);
        checker = Checker::Main;
    }
    if let Some(n) = src.n.or(cfg.outside_n) {
        if n == 0 {
            bail!("--n must be at least 1");
        }
        checker = Checker::Outside { n };
    }
    let rel = src.eps.or(cfg.tolerance.area_rel).unwrap_or(Tolerance::DEFAULT_AREA_REL);
    if !(rel > 0.0) {
        bail!("tolerance must be positive");
    }
    let mut limits = Limits::default();
    if let Some(c) = src.depth_cap.or(cfg.limits.depth_cap) {
        limits.max_depth = c;
    }
    if let Some(c) = cfg.limits.max_cells {
        limits.max_cells = c;
    }
    Ok(Problem {
        label,
        preset,
        tol: Tolerance::relative(&domain, rel),
        domain,
        family,
        y,
        generator,
        checker,
        limits,
        truncation_rel: cfg.tolerance.truncation_rel.unwrap_or(1e-6),
        render: cfg.render.clone(),
        cfg,
    })
}

impl Problem {
    fn check(&self) -> CheckReport {
        use selfsim::dissection::{check_inside_nonoverlapping, check_main, check_outside};
        let empty = Region::empty();
        match self.checker {
            Checker::InsideNonOverlapping => {
                check_inside_nonoverlapping(&self.family, &self.domain, &self.tol)
            }
            Checker::Main => check_main(
                &self.family,
                &self.domain,
                self.y.as_ref().unwrap_or(&empty),
                &self.tol,
            ),
            Checker::Outside { n } => check_outside(&self.family, &self.domain, n, &self.tol),
            Checker::Verify => verify(
                &self.domain,
                &self.family,
                self.generator.as_ref().unwrap_or(&empty),
                &self.tol,
            ),
        }
    }

    /// Runs the construction; the flag marks a partial result after a resource stop.
    fn dissect(&self, trunc: Option<f64>, force: bool) -> Result<(DissectionResult, bool), Exit> {
        if let (Checker::Verify, Some(x)) = (self.checker, &self.generator) {
            let report = self.check();
            let res = assemble(&self.family, &self.domain, x.clone(), self.tol.area_eps, report);
            return Ok((res, false));
        }
        let y = match self.checker {
            Checker::Outside { .. } => {
                let report = self.check();
                if !report.overall && !force {
                    return Err(Exit(1, anyhow::anyhow!("{}", report.summary())));
                }
                report.constructed_y.unwrap_or_default()
            }
            _ => self.y.clone().unwrap_or_default(),
        };
        let rel = trunc.unwrap_or(self.truncation_rel);
        if !(rel > 0.0) {
            return Err(usage(anyhow::anyhow!("--trunc must be positive")));
        }
        let opts = DissectOptions {
            tolerance: self.tol,
            truncation_eps: rel * self.domain.area(),
            limits: self.limits,
            force,
            fixed_depth: None,
        };
        match dissect(&self.family, &self.domain, &y, &opts) {
            Ok(r) => Ok((r, false)),
            Err(DissectError::Refused(report)) => Err(Exit(
                1,
                anyhow::anyhow!("refusing to build (use --override):\n{}", report.summary()),
            )),
            Err(DissectError::Resource { reason, partial }) => {
                eprintln!("resource cap: {reason}");
                Ok((*partial, true))
            }
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn write_text(path: &Path, text: &str) -> Result<(), Exit> {
    std::fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(usage)
}

fn read_saved(path: &Path) -> Result<SavedDissection, Exit> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(usage)?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(usage)
}

#[derive(Serialize)]
struct Metrics<'a> {
    label: &'a str,
    uncovered_area: f64,
    overlap_area: f64,
    escape_area: f64,
    area_ratios: &'a [f64],
    depth_used: usize,
    tail_bound: f64,
    generator_cells: usize,
    /// Connected components of the truncated generator, a diagnostic only.
    generator_components: usize,
    generator_area: f64,
    domain_area: f64,
    partial: bool,
}

fn metrics<'a>(label: &'a str, d: &Region, r: &'a DissectionResult, partial: bool) -> Metrics<'a> {
    Metrics {
        label,
        uncovered_area: r.uncovered_area,
        overlap_area: r.overlap_area,
        escape_area: r.escape_area,
        area_ratios: &r.area_ratios,
        depth_used: r.depth_used,
        tail_bound: r.tail_bound,
        generator_cells: r.generator.cell_count(),
        generator_components: r.generator.component_count(),
        generator_area: r.generator.area(),
        domain_area: d.area(),
        partial,
    }
}

fn print_metrics(m: &Metrics, json: bool) {
    if json {
        println!("{}", to_json(m));
    } else {
        println!("{}{}", m.label, if m.partial { " (partial)" } else { "" });
        println!("  depth used      {}", m.depth_used);
        println!("  generator cells {}", m.generator_cells);
        println!("  components      {}", m.generator_components);
        println!("  uncovered area  {:.6e}", m.uncovered_area);
        println!("  overlap area    {:.6e}", m.overlap_area);
        println!("  escape area     {:.6e}", m.escape_area);
        println!("  tail bound      {:.6e}", m.tail_bound);
        let ratios: Vec<String> = m.area_ratios.iter().map(|x| format!("{x:.9}")).collect();
        println!("  area ratios     {}", ratios.join(" : "));
    }
}

fn run_check(a: &CheckArgs) -> Result<u8, Exit> {
    let report = match &a.from {
        Some(path) => {
            let saved = read_saved(path)?;
            // default to the slack the dissection was built with
            let tol = match a.src.eps {
                Some(rel) => Tolerance::relative(&saved.domain, rel),
                None => Tolerance::new(saved.result.slack, saved.result.slack),
            };
            verify(&saved.domain, &saved.family, &saved.result.generator, &tol)
        }
        None => load_problem(&a.src).map_err(usage)?.check(),
    };
    if a.src.json {
        println!("{}", to_json(&report));
    } else {
        print!("{}", report.summary());
    }
    if let Some(out) = &a.out {
        write_text(out, &to_json(&report))?;
    }
    Ok(if report.overall { 0 } else { 1 })
}

fn run_dissect(a: &DissectArgs) -> Result<u8, Exit> {
    let p = load_problem(&a.src).map_err(usage)?;
    let (mut result, partial) = p.dissect(a.trunc, a.force)?;
    print_metrics(&metrics(&p.label, &p.domain, &result, partial), a.src.json);
    if let Some(svg) = &a.svg {
        let doc = render_pieces(&p.domain, &result.pieces, &[], &p.render).map_err(|e| usage(e.into()))?;
        write_svg(svg, &doc).map_err(|e| usage(e.into()))?;
    }
    if let Some(out) = &a.out {
        let saved = SavedDissection {
            label: p.label.clone(),
            domain: p.domain.clone(),
            family: p.family.clone(),
            result,
        };
        write_text(out, &serde_json::to_string(&saved).expect("serializes"))?;
        result = saved.result;
    }
    Ok(if partial {
        3
    } else if !result.report.overall || !result.succeeded() {
        // an overridden run still writes its output
        1
    } else {
        0
    })
}

fn attractor(fam: &Family, d: &Region) -> Vec<selfsim::Vec2> {
    // about 2^16 points whatever the number of maps
    let k = fam.len().max(2) as f64;
    let depth = (16.0 / k.log2()).floor().max(1.0) as usize;
    let seed = d.vertices().next().unwrap_or_default();
    fam.attractor_points(depth, seed)
        .map(|a| a.points)
        .unwrap_or_default()
}

fn run_render(a: &RenderArgs) -> Result<u8, Exit> {
    let (doc, code) = if let Some(path) = &a.from {
        let saved = read_saved(path)?;
        let pts = if a.attractor {
            attractor(&saved.family, &saved.domain)
        } else {
            Vec::new()
        };
        let doc = render_pieces(&saved.domain, &saved.result.pieces, &pts, &RenderOptions::default())
            .map_err(|e| usage(e.into()))?;
        (doc, 0)
    } else {
        let p = load_problem(&a.src).map_err(usage)?;
        let pts = if a.attractor || a.stages {
            attractor(&p.family, &p.domain)
        } else {
            Vec::new()
        };
        if a.stages {
            let y = match (&p.y, p.checker) {
                (Some(y), _) => y.clone(),
                (None, Checker::Outside { n }) => {
                    selfsim::dissection::check_outside(&p.family, &p.domain, n, &p.tol)
                        .constructed_y
                        .unwrap_or_default()
                }
                _ => selfsim::dissection::compute_seed_y(&p.family, &p.domain),
            };
            let mut stages = vec![y];
            for _ in 0..4 {
                let next = p.family.phi(stages.last().unwrap());
                stages.push(next);
            }
            let titles = ["Y", "Φ(Y)", "Φ²(Y)", "Φ³(Y)", "Φ⁴(Y)"];
            let mut panels: Vec<Panel> = stages
                .iter()
                .zip(titles)
                .map(|(s, t)| Panel {
                    title: t.to_string(),
                    outline: Some(&p.domain),
                    regions: vec![s],
                    points: &[],
                })
                .collect();
            panels.push(Panel {
                title: "E".into(),
                outline: Some(&p.domain),
                regions: vec![],
                points: &pts,
            });
            let doc = render_panels(&panels, &p.render).map_err(|e| usage(e.into()))?;
            (doc, 0)
        } else {
            let (result, partial) = p.dissect(a.trunc, a.force)?;
            let pts = if a.attractor { pts } else { Vec::new() };
            let doc = render_pieces(&p.domain, &result.pieces, &pts, &p.render)
                .map_err(|e| usage(e.into()))?;
            (doc, if partial { 3 } else { 0 })
        }
    };
    match &a.out {
        Some(out) => write_svg(out, &doc).map_err(|e| usage(e.into()))?,
        None => print!("{doc}"),
    }
    Ok(code)
}

fn run_sweep(a: &SweepArgs) -> Result<u8, Exit> {
    let p = load_problem(&a.src).map_err(usage)?;
    let Some(name) = p.preset else {
        return Err(usage(anyhow::anyhow!("sweep needs a parametric preset")));
    };
    let defaults = SweepOptions::default();
    let s = &p.cfg.sweep;
    let opts = SweepOptions {
        from: a.from.or(s.from).unwrap_or(defaults.from),
        to: a.to.or(s.to).unwrap_or(defaults.to),
        step: a.step.or(s.step).unwrap_or(defaults.step),
        rel_eps: a.src.eps.or(s.rel_eps).unwrap_or(defaults.rel_eps),
        outside_n: a.src.n,
        ..defaults
    };
    let res = sweep(name, &opts).map_err(|e| usage(e.into()))?;
    if a.src.json {
        println!("{}", to_json(&res));
    } else {
        for pt in &res.grid {
            println!(
                "r={:.6}  {}{}",
                pt.r,
                if pt.overall { "pass" } else { "FAIL" },
                if pt.failed.is_empty() {
                    String::new()
                } else {
                    format!("  ({})", pt.failed.join("; "))
                }
            );
        }
        match res.threshold {
            Some(t) => println!("threshold ≈ {t:.9}"),
            None => println!("no pass-to-fail transition in range"),
        }
    }
    if let Some(out) = &a.out {
        write_text(out, &to_json(&res))?;
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Check(a) => run_check(a),
        Command::Dissect(a) => run_dissect(a),
        Command::Render(a) => run_render(a),
        Command::Sweep(a) => run_sweep(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
