//! Acceptance criteria 1 to 9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use common::{star_polygon, Op, Raster};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use selfsim::dissection::{
    check_inside_nonoverlapping, check_outside, compute_seed_y, dissect, verify, DissectOptions,
};
use selfsim::presets::{build, AlgebraicConstants, PresetName};
use selfsim::roots::{smallest_pisot, solve_high_phi};
use selfsim::sweep::{sweep, SweepOptions};
use selfsim::{Region, Similarity, Tolerance, Vec2};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    for r in [9.0 / 20.0, 0.5] {
        let start = Instant::now();
        let p = build(PresetName::Exa4, Some(r)).unwrap();
        let a = p.domain.area();
        let check = check_inside_nonoverlapping(&p.family, &p.domain, &p.tolerance());
        ensure(check.overall, format!("r={r}: checker failed\n{}", check.summary()))?;
        let res = dissect(&p.family, &p.domain, &Region::empty(), &DissectOptions::for_domain(&p.domain))
            .map_err(|e| format!("r={r}: {e}"))?;
        let profile = res.ratio_profile();
        let want = [1.0, 1.0, 1.0 / (r * r)];
        let ratio_err = profile
            .iter()
            .zip(want)
            .map(|(g, w)| ((g - w) / w).abs())
            .fold(0.0, f64::max);
        let secs = start.elapsed().as_secs_f64();
        ensure(res.uncovered_area <= 1e-6 * a, format!("r={r}: uncovered {:e}", res.uncovered_area / a))?;
        ensure(res.overlap_area <= 1e-6 * a, format!("r={r}: overlap {:e}", res.overlap_area / a))?;
        ensure(res.depth_used <= 30, format!("r={r}: depth {}", res.depth_used))?;
        ensure(ratio_err <= 1e-6, format!("r={r}: ratio error {ratio_err:e}"))?;
        ensure(secs <= 10.0, format!("r={r}: took {secs:.1}s"))?;
        notes.push(format!(
            "r={r}: depth {} uncovered {:.1e}·A ratios 1:1:{:.6} in {secs:.2}s",
            res.depth_used,
            res.uncovered_area / a,
            profile[2]
        ));
    }
    Ok(notes.join("; "))
}

fn criterion_2() -> Outcome {
    let g = AlgebraicConstants::get().golden_threshold;
    for r in [g, 0.598] {
        let p = build(PresetName::Exagold, Some(r)).unwrap();
        let rep = p.check(&p.tolerance());
        ensure(rep.overall, format!("r={r} should pass\n{}", rep.summary()))?;
    }
    let p = build(PresetName::Exagold, Some(0.638)).unwrap();
    let rep = p.check(&p.tolerance());
    let name = "(3') f1(C) ∩ f2(C) null";
    let w = rep.witness(name).map(Region::area).unwrap_or(0.0);
    ensure(!rep.overall && w > 0.0, "r=0.638 should fail with an f1(C) ∩ f2(C) witness")?;

    let start = Instant::now();
    let opts = SweepOptions { from: 0.5, to: 0.7, step: 0.01, ..SweepOptions::default() };
    let s = sweep(PresetName::Exagold, &opts).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let t = s.threshold.ok_or("sweep found no threshold")?;
    ensure((t - g).abs() <= 1e-6, format!("sweep threshold {t} vs {g}"))?;
    ensure(secs <= 60.0, format!("sweep took {secs:.1}s"))?;
    Ok(format!("witness at 0.638 has area {w:.3e}; sweep {t:.9} (error {:.1e}) in {secs:.2}s", (t - g).abs()))
}

fn criterion_3() -> Outcome {
    let phi = solve_high_phi();
    let residual = (phi.powi(3) - 2.0 * phi * phi + phi - 1.0).abs();
    ensure(residual <= 1e-12, format!("cubic residual {residual:e}"))?;
    let pisot = (phi - smallest_pisot().powi(2)).abs();
    ensure(pisot <= 1e-10, format!("|φ − ρ²| = {pisot:e}"))?;
    let mut notes = vec![format!("φ={phi:.12}")];
    for name in [PresetName::Exaflip, PresetName::Exasquare, PresetName::Exaoutside] {
        let opts = SweepOptions { from: 0.5, to: 0.65, step: 0.01, ..SweepOptions::default() };
        let s = sweep(name, &opts).map_err(|e| e.to_string())?;
        let t = s.threshold.ok_or(format!("{name}: no threshold"))?;
        let err = (t - 1.0 / phi).abs();
        ensure(err <= 1e-5, format!("{name}: threshold {t} vs {}", 1.0 / phi))?;
        notes.push(format!("{name} {t:.9} (error {err:.1e})"));
    }
    Ok(notes.join(", "))
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    for r in [0.55, 0.6] {
        let p = build(PresetName::Exanodis, Some(r)).unwrap();
        let tol = p.tolerance();
        let y = p.seed_y.as_ref().unwrap();
        let images = p.family.images(y);
        let overlap = images[0].intersection(&images[1]).area();
        ensure(overlap > 10.0 * tol.area_eps, format!("r={r}: overlap {overlap:e}"))?;
        let status = Command::new(env!("CARGO_BIN_EXE_selfsim"))
            .args(["check", "--preset", "exanodis", "--r", &r.to_string()])
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.code() == Some(1), format!("r={r}: exit {status}"))?;
        notes.push(format!("r={r}: overlap {:.3e}·A, exit 1", overlap / p.domain.area()));
    }
    Ok(notes.join("; "))
}

fn criterion_5() -> Outcome {
    let p = build(PresetName::Scherer, None).unwrap();
    let tol = Tolerance::relative(&p.domain, 1e-9);
    let x = p.generator.as_ref().unwrap();
    let rep = verify(&p.domain, &p.family, x, &tol);
    ensure(rep.overall, format!("verify failed\n{}", rep.summary()))?;
    let worst = rep.conditions.iter().map(|c| c.measured).fold(0.0, f64::max);
    let ratios = rep.area_ratios.clone().unwrap_or_default();
    let err = ratios
        .iter()
        .zip([1.0, 0.25, 0.25])
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max);
    ensure(ratios.len() == 3 && err <= 1e-9, format!("ratios {ratios:?}"))?;
    Ok(format!("largest slack {:.1e}·A, ratio error {err:.1e}", worst / p.domain.area()))
}

fn criterion_6() -> Outcome {
    let r = 9.0 / 20.0;
    let p = build(PresetName::Exa4, Some(r)).unwrap();
    let a = p.domain.area();
    let s = 2.0 * r * r;
    let y = compute_seed_y(&p.family, &p.domain);
    let (mut acc, mut layer) = (y.clone(), y);
    let mut worst: f64 = 0.0;
    for n in 0..=6 {
        if n > 0 {
            layer = p.family.phi(&layer);
            acc = acc.union(&layer);
        }
        let err = (acc.area() - a * (1.0 - s.powi(n + 1))).abs();
        ensure(err <= 1e-7 * a, format!("n={n}: error {err:e}"))?;
        worst = worst.max(err);
    }
    Ok(format!("n=0..6, largest error {:.1e}·A", worst / a))
}

fn criterion_7() -> Outcome {
    let p = build(PresetName::Exa4, Some(9.0 / 20.0)).unwrap();
    let a = p.domain.area();
    let res = dissect(&p.family, &p.domain, &Region::empty(), &DissectOptions::for_domain(&p.domain))
        .map_err(|e| e.to_string())?;
    let y = compute_seed_y(&p.family, &res.complement);
    let composed = p.family.composed_pairs();
    let k = composed
        .condensation_attractor(&y, &Tolerance::new(1e-6 * a, 1e-2))
        .map_err(|e| e.to_string())?;
    let diff = (k.area() - res.complement_generator.area()).abs();
    ensure(diff <= 1e-6 * a, format!("area difference {:e}·A", diff / a))?;
    Ok(format!("area difference {:.1e}·A", diff / a))
}

/// Random polygon pairs against the scanline oracle at 2048².
fn criterion_8() -> Outcome {
    const N: usize = 2048;
    const PAIRS: usize = 500;
    let eps = 1e-9;
    let start = Instant::now();
    let mut runner = TestRunner::deterministic();
    let sim = (0.05..0.95f64, -PI..PI, proptest::bool::ANY, -2.0..2.0f64, -2.0..2.0f64);
    let (mut worst_xor, mut worst_count, mut worst_ie, mut worst_law) = (0u64, 0i64, 0f64, 0f64);
    for pair in 0..PAIRS {
        let ra = star_polygon().new_tree(&mut runner).unwrap().current();
        let rb = star_polygon().new_tree(&mut runner).unwrap().current();
        let (a, b) = (Region::polygon(&ra).unwrap(), Region::polygon(&rb).unwrap());
        let oa = Raster::rings(&[ra], N, 0.0, 0.0, 1.0);
        let ob = Raster::rings(&[rb], N, 0.0, 0.0, 1.0);
        let ops = [
            (Op::And, a.intersection(&b)),
            (Op::Or, a.union(&b)),
            (Op::AndNot, a.difference(&b)),
        ];
        for (op, got) in &ops {
            let want = oa.combine(&ob, *op);
            let (mine, doubled) = Raster::cells(got, N, 0.0, 0.0, 1.0);
            let xor = mine.combine(&want, Op::Xor).count();
            let count = mine.count() as i64 - want.count() as i64;
            worst_xor = worst_xor.max(xor + doubled);
            worst_count = worst_count.max(count.abs());
            ensure(
                xor + doubled <= 3 && count.abs() <= 3,
                format!("pair {pair} {op:?}: xor {xor}, doubled {doubled}, count diff {count}"),
            )?;
        }
        let ie = (ops[1].1.area() + ops[0].1.area() - a.area() - b.area()).abs();
        worst_ie = worst_ie.max(ie);
        ensure(ie <= 4.0 * eps, format!("pair {pair}: inclusion-exclusion off by {ie:e}"))?;
        let (r, t, m, x, y) = sim.new_tree(&mut runner).unwrap().current();
        let f = Similarity::new(r, t, m, Vec2::new(x, y)).unwrap();
        let law = (a.transform(&f).area() - r * r * a.area()).abs();
        worst_law = worst_law.max(law);
        ensure(law <= eps, format!("pair {pair}: area law off by {law:e}"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 300.0, format!("took {secs:.0}s"))?;
    Ok(format!(
        "{PAIRS} pairs × 3 ops, worst pixel xor {worst_xor}, count diff {worst_count}; \
         inclusion-exclusion {worst_ie:.1e}, area law {worst_law:.1e} in {secs:.1}s"
    ))
}

fn criterion_9() -> Outcome {
    let inside = build(PresetName::Exa4, Some(0.45)).unwrap();
    let rep = check_outside(&inside.family, &inside.domain, 2, &inside.tolerance());
    ensure(rep.overall, format!("n=2 fails on exa4\n{}", rep.summary()))?;
    let mut compared = 0;
    for name in PresetName::ALL {
        let mut rs = vec![None];
        if let Ok(t) = selfsim::presets::threshold(name) {
            rs.extend([Some(t - 0.02), Some(t + 0.02)]);
        }
        for r in rs {
            let p = build(name, r).unwrap();
            let tol = p.tolerance();
            let one = check_outside(&p.family, &p.domain, 1, &tol).overall;
            let two = check_outside(&p.family, &p.domain, 2, &tol).overall;
            ensure(one == two, format!("{name} r={:?}: n=1 {one}, n=2 {two}", p.r))?;
            compared += 1;
        }
    }
    Ok(format!("n=2 passes on exa4; n=1 and n=2 agree on {compared} preset instances"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("exa4 reproduction", criterion_1),
        ("golden threshold", criterion_2),
        ("high-phi thresholds", criterion_3),
        ("negative instance", criterion_4),
        ("Scherer verification", criterion_5),
        ("partial-sum identity", criterion_6),
        ("condensation equivalence", criterion_7),
        ("geometry oracle suite", criterion_8),
        ("outside depth generalization", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.into_iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        match outcome {
            Ok(note) => println!("criterion {}: PASS {title}: {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {title}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
