use lplab::functions::{m_sum_bounds, scale_fn, GridFunction, MeanSpec, SParam};
use lplab::harness::{
    check_lemma31, check_lemma32, mean_envelope, verify_bbl, verify_bm, verify_lift_volume, verify_lp_bm,
    verify_lp_minkowski, verify_pl, verify_thm15, Condition, MixedConfig, Thm15Config, TolerancePolicy,
    VerificationReport,
};
use lplab::numerics::{Grid, RandomSource};
use lplab::sets::CoefficientSet;
use rayon::prelude::*;

use crate::config::{Format, Params};
use crate::error::{config, Result};
use crate::inputs;
use crate::presets::Target;

/// A report, plus the function the verifier constructed, if any.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: VerificationReport,
    pub profile: Option<GridFunction>,
}

fn s_param(params: &Params) -> Result<SParam> {
    Ok(SParam::new(params.f64("s")?)?)
}

fn pair(params: &Params, nodes: usize) -> Result<(GridFunction, GridFunction)> {
    Ok((
        inputs::function(params.require("f")?, nodes)?,
        inputs::function(params.require("g")?, nodes)?,
    ))
}

/// `h` from the file given, or the envelope of `f` and `g` for the `alpha`-mean.
fn envelope(params: &Params, f: &GridFunction, g: &GridFunction, lambda: f64, alpha: MeanSpec, nodes: usize) -> Result<GridFunction> {
    if let Some(spec) = params.get("h") {
        return inputs::function(spec, nodes);
    }
    let bounds = m_sum_bounds(f, g, &CoefficientSet::minkowski(lambda)?)?;
    let out = Grid::uniform(bounds, params.usize_or("out_nodes", 2 * nodes - 1)?)?;
    Ok(mean_envelope(f, g, lambda, alpha, &out)?)
}

/// Runs one verifier.
pub fn execute(target: Target, params: &Params, rng: RandomSource) -> Result<Outcome> {
    target.check_keys(params.keys())?;
    let policy = TolerancePolicy::default();
    let nodes = params.usize_or("nodes", 65)?;
    let plain = |report| Outcome { report, profile: None };
    Ok(match target {
        Target::LiftVolume => {
            let f = inputs::function(params.require("f")?, nodes)?;
            let samples = params.usize_or("samples", 100_000)?;
            plain(verify_lift_volume(&f, s_param(params)?, samples, rng, &policy)?)
        }
        Target::Bm => {
            let (k, l) = (inputs::set(params.require("k")?)?, inputs::set(params.require("l")?)?);
            let samples = params.usize_or("samples", 100_000)?;
            plain(verify_bm(&k, &l, params.f64("lambda")?, samples, rng, &policy)?)
        }
        Target::LpBm => {
            let (k, l) = (inputs::set(params.require("k")?)?, inputs::set(params.require("l")?)?);
            let res = params.usize_or("lambda_resolution", 1000)?;
            let samples = params.usize_or("samples", 100_000)?;
            plain(verify_lp_bm(&k, &l, params.f64("p")?, res, samples, rng, &policy)?)
        }
        Target::Pl => {
            let (f, g) = pair(params, nodes)?;
            let lambda = params.f64("lambda")?;
            let h = envelope(params, &f, &g, lambda, MeanSpec::Geometric, nodes)?;
            let report = verify_pl(&f, &g, &h, lambda, &policy)?;
            Outcome { report, profile: Some(h) }
        }
        Target::Bbl => {
            let (f, g) = pair(params, nodes)?;
            let lambda = params.f64("lambda")?;
            let alpha = MeanSpec::from_alpha(params.f64("alpha")?)?;
            let h = envelope(params, &f, &g, lambda, alpha, nodes)?;
            let report = verify_bbl(&f, &g, &h, lambda, alpha, &policy)?;
            Outcome { report, profile: Some(h) }
        }
        Target::Thm15 => {
            let (f, g) = pair(params, nodes)?;
            let r = params.usize_or("resolution", 65)?;
            let cfg = Thm15Config {
                p: params.f64("p")?,
                s: s_param(params)?,
                mu: params.f64_or("mu", 1.0)?,
                omega: params.f64_or("omega", 1.0)?,
                f,
                g,
                lambda_resolution: params.usize_or("lambda_resolution", 2 * r - 1)?,
                out_nodes: r,
            };
            let (report, h) = verify_thm15(&cfg, &policy)?;
            Outcome { report, profile: Some(h) }
        }
        Target::Lemma31 => {
            let (f, g) = pair(params, nodes)?;
            let m = inputs::coefficients(params.require("m")?)?;
            let condition: Condition = params.require("condition")?.parse()?;
            let out = params.usize_or("out_nodes", 2 * nodes - 1)?;
            let (report, h) = check_lemma31(&f, &g, &m, s_param(params)?, condition, out, &policy)?;
            Outcome { report, profile: Some(h) }
        }
        Target::Lemma32 => {
            let (f, g) = pair(params, nodes)?;
            let m = inputs::coefficients(params.require("m")?)?;
            let out = params.usize_or("out_nodes", 2 * nodes - 1)?;
            let samples = params.usize_or("samples", 100_000)?;
            let (report, h) = check_lemma32(&f, &g, &m, s_param(params)?, out, samples, &rng, &policy)?;
            Outcome { report, profile: Some(h) }
        }
        Target::LpMinkowski => {
            let g = inputs::function(params.require("g")?, nodes)?;
            let (p, s) = (params.f64("p")?, s_param(params)?);
            let f = match (params.get("f"), params.f64_opt("f_scale")?) {
                (Some(_), Some(_)) => return Err(config("give either f or f_scale, not both")),
                (Some(spec), None) => inputs::function(spec, nodes)?,
                (None, Some(c)) => scale_fn(&g, c, p, s)?,
                (None, None) => return Err(config("missing parameter f (or f_scale)")),
            };
            let cfg = MixedConfig {
                p,
                s,
                epsilons: params.f64_list("epsilons")?,
                out_nodes: params.usize_or("out_nodes", 513)?,
                lambda_resolution: params.usize_or("lambda_resolution", 513)?,
            };
            plain(verify_lp_minkowski(&f, &g, &cfg, &policy)?.0)
        }
    })
}

/// One sweep row: the swept values, in axis order, and the report.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub values: Vec<String>,
    pub report: VerificationReport,
}

/// Runs the cross product of `axes` over `base`. Rows run in parallel, each with
/// the RNG substream of its index, and come back in lexicographic axis order.
pub fn sweep(target: Target, base: &Params, axes: &[(String, Vec<String>)], rng: RandomSource) -> Result<Vec<SweepRow>> {
    if axes.is_empty() {
        return Err(config("a sweep needs at least one --range"));
    }
    for (i, (key, values)) in axes.iter().enumerate() {
        if values.is_empty() {
            return Err(config(format!("range for {key} is empty")));
        }
        if axes[..i].iter().any(|(k, _)| k == key) {
            return Err(config(format!("{key} is swept twice")));
        }
    }
    target.check_keys(axes.iter().map(|(k, _)| k.as_str()))?;
    let total: usize = axes.iter().map(|(_, v)| v.len()).product();
    let tuples: Vec<Vec<String>> = (0..total)
        .map(|mut i| {
            let mut t = vec![String::new(); axes.len()];
            for (slot, (_, values)) in t.iter_mut().zip(axes).rev() {
                *slot = values[i % values.len()].clone();
                i /= values.len();
            }
            t
        })
        .collect();
    tuples
        .into_par_iter()
        .enumerate()
        .map(|(i, values)| {
            let mut params = base.clone();
            for ((key, _), v) in axes.iter().zip(&values) {
                params.set(key, v);
            }
            let report = execute(target, &params, rng.substream(i as u64))?.report;
            Ok(SweepRow { values, report })
        })
        .collect()
}

pub fn render_report(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", report.to_json()),
        Format::Csv => format!("{}\n{}\n", VerificationReport::CSV_HEADER, report.csv_row()),
    }
}

pub fn render_sweep(axes: &[(String, Vec<String>)], rows: &[SweepRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (k, _) in axes {
                out.push_str(k);
                out.push(',');
            }
            out.push_str(VerificationReport::CSV_HEADER);
            out.push('\n');
            for row in rows {
                for v in &row.values {
                    out.push_str(v);
                    out.push(',');
                }
                out.push_str(&row.report.csv_row());
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let reports: Vec<&VerificationReport> = rows.iter().map(|r| &r.report).collect();
            format!("{}\n", serde_json::to_string_pretty(&reports).expect("reports serialize"))
        }
    }
}

/// 0 when every verdict passes, 2 otherwise.
pub fn exit_code<'a>(reports: impl IntoIterator<Item = &'a VerificationReport>) -> u8 {
    if reports.into_iter().all(|r| r.verdict.passes()) {
        0
    } else {
        2
    }
}
