//! Acceptance criteria, one test each. Tolerances are the ones the criteria state.

use std::time::{Duration, Instant};

use lplab::functions::{alpha_mean, scale_fn, GridFunction, MeanSpec, SParam};
use lplab::harness::{
    check_lemma31, check_lemma32, mean_envelope, thm15_sweep, verify_bbl, verify_lift_volume, verify_lp_bm,
    verify_lp_minkowski, verify_pl, verify_thm15, Condition, MixedConfig, Thm15Config, TolerancePolicy,
};
use lplab::numerics::{is_nondecreasing, Bounds, Grid, RandomSource};
use lplab::sets::{CoefficientSet, DiscreteSet};
use lplab_cli::config::{Format, Params};
use lplab_cli::presets::PRESETS;
use lplab_cli::run::{execute, render_report};
use rand::Rng;

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n}: {detail}");
}

fn line(lo: f64, hi: f64, nodes: usize, f: impl Fn(f64) -> f64) -> GridFunction {
    GridFunction::from_fn(Grid::uniform(Bounds::interval(lo, hi).unwrap(), nodes).unwrap(), |x| f(x[0])).unwrap()
}

fn indicator(lo: f64, hi: f64, nodes: usize) -> GridFunction {
    line(lo, hi, nodes, |_| 1.0)
}

fn s_param(s: f64) -> SParam {
    SParam::new(s).unwrap()
}

/// A random s-concave (s = 1) profile on R whose support contains the origin.
fn random_concave(rng: &mut impl Rng, nodes: usize) -> GridFunction {
    let w = rng.random_range(0.6..1.5);
    let c = rng.random_range(-0.5..0.5);
    let height = rng.random_range(0.5..2.0);
    match rng.random_range(0..3) {
        0 => line(c - w, c + w, nodes, |x| height * (1.0 - ((x - c) / w).abs()).max(0.0)),
        1 => line(c - w, c + w, nodes, |x| height * (1.0 - ((x - c) / w).powi(2)).max(0.0)),
        _ => line(c - w, c + w, nodes, |_| height),
    }
}

#[test]
fn criterion_01_lift_volume_identity() {
    let policy = TolerancePolicy::default();
    let f = indicator(0.0, 1.0, 65);
    for (s, want) in [(1.0, 2.0), (2.0, std::f64::consts::PI)] {
        let start = Instant::now();
        let r = verify_lift_volume(&f, s_param(s), 1_000_000, RandomSource::new(2024), &policy).unwrap();
        let elapsed = start.elapsed();
        let stderr = r.metadata["stderr"].as_f64().unwrap();
        let ok = (r.lhs - want).abs() <= 3.0 * stderr && (r.rhs - want).abs() < 1e-12 && elapsed < Duration::from_secs(10);
        report(1, ok, format!("s = {s}: volume {} vs {want}, stderr {stderr}, {elapsed:?}", r.lhs));
    }
}

#[test]
fn criterion_02_thm15_equality_refinement() {
    let cfg = Thm15Config {
        p: 2.0,
        s: s_param(1.0),
        mu: 1.0,
        omega: 1.0,
        f: indicator(0.0, 1.0, 65),
        g: indicator(0.0, 1.0, 65),
        lambda_resolution: 129,
        out_nodes: 65,
    };
    let start = Instant::now();
    let reps = thm15_sweep(&cfg, &[65, 129, 257], &TolerancePolicy::default()).unwrap();
    let elapsed = start.elapsed();
    let margins: Vec<f64> = reps.iter().map(|r| r.margin).collect();
    let lambdas: Vec<u64> = reps.iter().map(|r| r.metadata["lambda_resolution"].as_u64().unwrap()).collect();
    let last = reps.last().unwrap();
    let ok = is_nondecreasing(&margins, 1e-12)
        && lambdas == [129, 257, 513]
        && last.margin.abs() <= 5e-3
        && (last.lhs - 2.0).abs() <= 5e-3
        && elapsed < Duration::from_secs(30);
    report(2, ok, format!("margins {margins:?}, final lhs {}, {elapsed:?}", last.lhs));
}

#[test]
fn criterion_03_segment_lp_bm() {
    let k = DiscreteSet::interval(0.0, 1.0, 2).unwrap();
    let l = DiscreteSet::interval(0.0, 2.0, 2).unwrap();
    for p in [1.0, 1.5, 2.0, 3.0] {
        let r = verify_lp_bm(&k, &l, p, 1000, 0, RandomSource::new(0), &TolerancePolicy::default()).unwrap();
        let want = 1.0 + 2f64.powf(p);
        let ok = if p == 1.0 {
            r.lhs == want && r.rhs == want
        } else {
            (r.lhs - want).abs() <= 1e-3 && (r.rhs - want).abs() <= 1e-3
        };
        report(3, ok, format!("p = {p}: lhs {} rhs {} target {want}", r.lhs, r.rhs));
    }
}

#[test]
fn criterion_04_indicator_reduction() {
    let policy = TolerancePolicy::default();
    let k = DiscreteSet::interval(0.0, 1.0, 2).unwrap();
    let l = DiscreteSet::interval(0.0, 2.0, 2).unwrap();
    let set_lhs = verify_lp_bm(&k, &l, 2.0, 1000, 0, RandomSource::new(0), &policy).unwrap().lhs;
    let lhs: Vec<f64> = [1.0, 0.5, 0.25]
        .iter()
        .map(|&s| {
            let cfg = Thm15Config {
                p: 2.0,
                s: s_param(s),
                mu: 1.0,
                omega: 1.0,
                f: indicator(0.0, 1.0, 129),
                g: indicator(0.0, 2.0, 129),
                lambda_resolution: 513,
                out_nodes: 257,
            };
            verify_thm15(&cfg, &policy).unwrap().0.lhs
        })
        .collect();
    let gaps: Vec<f64> = lhs.iter().map(|v| (set_lhs - v).abs()).collect();
    let approaching = gaps.windows(2).all(|w| w[1] < w[0]);
    let ok = approaching && gaps[2] <= 1e-2;
    report(4, ok, format!("set lhs {set_lhs}; functional lhs {lhs:?}; gaps {gaps:?}"));
}

#[test]
fn criterion_05_bbl_at_zero_is_pl() {
    let mut rng = RandomSource::new(55).rng();
    let policy = TolerancePolicy::default();
    let geometric = MeanSpec::from_alpha(0.0).unwrap();
    for i in 0..20 {
        let f = random_concave(&mut rng, 33);
        let g = random_concave(&mut rng, 33);
        let lambda = rng.random_range(0.1..0.9);
        let h = if i % 2 == 0 {
            let lo = (1.0 - lambda) * f.grid().bounds().lo()[0] + lambda * g.grid().bounds().lo()[0];
            let hi = (1.0 - lambda) * f.grid().bounds().hi()[0] + lambda * g.grid().bounds().hi()[0];
            let out = Grid::uniform(Bounds::interval(lo, hi).unwrap(), 65).unwrap();
            mean_envelope(&f, &g, lambda, geometric, &out).unwrap()
        } else {
            random_concave(&mut rng, 65)
        };
        let pl = verify_pl(&f, &g, &h, lambda, &policy).unwrap();
        let bbl = verify_bbl(&f, &g, &h, lambda, geometric, &policy).unwrap();
        let ok = (pl.lhs - bbl.lhs).abs() <= 1e-12 && (pl.rhs - bbl.rhs).abs() <= 1e-12 && pl.verdict == bbl.verdict;
        report(5, ok, format!("triple {i}: pl {} / {} {}, bbl {} / {} {}", pl.lhs, pl.rhs, pl.verdict, bbl.lhs, bbl.rhs, bbl.verdict));
    }
}

#[test]
fn criterion_06_lift_inclusion() {
    let f = indicator(0.0, 1.0, 65);
    let m = CoefficientSet::lp_curve(2.0, 257).unwrap();
    let (r, _) = check_lemma32(&f, &f, &m, s_param(1.0), 129, 100_000, &RandomSource::new(6), &TolerancePolicy::default()).unwrap();
    let failures = r.metadata["failures"].as_u64().unwrap();
    report(6, failures == 0 && r.metadata["samples"] == 100_000, format!("{failures} failures in 100000 samples"));
}

#[test]
fn criterion_07_concavity_suite() {
    let policy = TolerancePolicy::default();
    let mut rng = RandomSource::new(77).rng();
    let hull = CoefficientSet::lp_curve(2.0, 33).unwrap().filled_hull(1.0 / 64.0).unwrap();
    let two_point = CoefficientSet::explicit(vec![(1.0, 0.0), (0.0, 1.0)]).unwrap();
    let mut lines = Vec::new();
    let mut all_ok = true;
    for i in 0..10 {
        let f = random_concave(&mut rng, 33);
        let g = random_concave(&mut rng, 33);
        for (label, m, condition) in [("hull", &hull, Condition::ConvexM), ("two-point", &two_point, Condition::OriginSupports)] {
            let (r, _) = check_lemma31(&f, &g, m, s_param(1.0), condition, 65, &policy).unwrap();
            let spacing = r.metadata["out_spacing"].as_f64().unwrap();
            let worst = -r.lhs;
            let ok = r.verdict.passes() && worst <= 2.0 * spacing;
            all_ok &= ok;
            lines.push(format!("pair {i} {label}: worst {worst:.3e} (limit {:.3e}) {}", 2.0 * spacing, r.verdict));
        }
    }
    report(7, all_ok, lines.join("; "));
}

#[test]
fn criterion_08_corollary_equality() {
    let g = indicator(0.0, 1.0, 129);
    for (lambda, p, s) in [(1.0, 2.0, 1.0), (2.0, 2.0, 1.0), (0.5, 3.0, 1.0)] {
        let sp = s_param(s);
        let f = scale_fn(&g, lambda, p, sp).unwrap();
        let cfg = MixedConfig {
            p,
            s: sp,
            epsilons: vec![0.1, 0.05, 0.025, 0.0125],
            out_nodes: 513,
            lambda_resolution: 513,
        };
        let (r, st) = verify_lp_minkowski(&f, &g, &cfg, &TolerancePolicy::default()).unwrap();
        let want = lambda.powf((1.0 + s) / p - 1.0) * g.integral();
        let ok = (st.estimate - want).abs() <= 1e-2 && r.margin.abs() <= 1e-2 && r.metadata["equality_case"] == true;
        report(8, ok, format!("({lambda}, {p}, {s}): estimate {} target {want}, margin {}", st.estimate, r.margin));
    }
}

#[test]
fn criterion_09_power_mean_monotone() {
    let mut rng = RandomSource::new(9).rng();
    let alphas = [f64::NEG_INFINITY, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, f64::INFINITY];
    let specs: Vec<MeanSpec> = alphas.iter().map(|&a| MeanSpec::from_alpha(a).unwrap()).collect();
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let (a, b) = (rng.random_range(1e-6..1.0), rng.random_range(1e-6..1.0));
        let lambda = rng.random_range(1e-6..1.0 - 1e-6);
        let values: Vec<f64> = specs.iter().map(|&s| alpha_mean(a, b, lambda, s).unwrap()).collect();
        for w in values.windows(2) {
            worst = worst.max(w[0] - w[1]);
        }
    }
    report(9, worst <= 1e-12, format!("largest decrease {worst:e}"));
}

#[test]
fn criterion_10_determinism() {
    for preset in PRESETS {
        let mut params = Params::default();
        for (k, v) in preset.params {
            params.set(k, v);
        }
        let run = || render_report(&execute(preset.target, &params, RandomSource::new(31)).unwrap().report, Format::Json);
        let (a, b) = (run(), run());
        report(10, a == b, format!("preset {}", preset.name));
    }
}
