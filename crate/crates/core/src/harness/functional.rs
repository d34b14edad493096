//! Prekopa-Leindler and Borell-Brascamp-Lieb checks on grid functions.

use rand::Rng;
use rayon::prelude::*;

use super::digest::DigestExt;
use super::report::{InputsDigest, Verdict, VerificationReport};
use super::tolerance::TolerancePolicy;
use crate::error::{Error, Result};
use crate::functions::{alpha_mean, m_sum_bounds, GridFunction, MeanSpec};
use crate::numerics::{Grid, RandomSource};
use crate::sets::CoefficientSet;

/// Node pairs sampled for the hypothesis in two or more dimensions.
pub const HYPOTHESIS_PAIRS: usize = 100_000;
const HYPOTHESIS_SEED: u64 = 0x9e11_d0e5;

/// Largest jump of `h` between neighbouring nodes: how far the interpolant can
/// fall below a node value inside one cell.
fn interpolation_slack(h: &GridFunction) -> f64 {
    let g = h.grid();
    let mut idx = vec![0; g.dim()];
    let mut worst: f64 = 0.0;
    for flat in 0..g.len() {
        g.unravel(flat, &mut idx);
        for axis in 0..g.dim() {
            if idx[axis] + 1 < g.shape()[axis] {
                idx[axis] += 1;
                worst = worst.max((h.values()[g.ravel(&idx)] - h.values()[flat]).abs());
                idx[axis] -= 1;
            }
        }
    }
    worst
}

struct Hypothesis {
    worst: f64,
    pairs: usize,
    slack: f64,
}

/// Largest `need(f(x), g(y)) - h((1-lambda) x + lambda y)` over positive nodes.
fn check_hypothesis(
    f: &GridFunction,
    g: &GridFunction,
    h: &GridFunction,
    lambda: f64,
    need: impl Fn(f64, f64) -> f64 + Sync,
) -> Hypothesis {
    let pf: Vec<usize> = (0..f.grid().len()).filter(|&i| f.values()[i] > 0.0).collect();
    let pg: Vec<usize> = (0..g.grid().len()).filter(|&j| g.values()[j] > 0.0).collect();
    let dim = f.dim();
    let eval = |i: usize, j: usize| {
        let (x, y) = (f.grid().node(i), g.grid().node(j));
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| (1.0 - lambda) * a + lambda * b).collect();
        need(f.values()[i], g.values()[j]) - h.eval(&z)
    };
    let (worst, pairs) = if dim == 1 {
        let worst = pf
            .par_iter()
            .map(|&i| pg.iter().map(|&j| eval(i, j)).fold(f64::NEG_INFINITY, f64::max))
            .reduce(|| f64::NEG_INFINITY, f64::max);
        (worst, pf.len() * pg.len())
    } else {
        // Stratified over the nodes of f, uniform over the nodes of g.
        let mut rng = RandomSource::new(HYPOTHESIS_SEED).rng();
        let pairs: Vec<(usize, usize)> = (0..HYPOTHESIS_PAIRS)
            .map(|k| (pf[k % pf.len()], pg[rng.random_range(0..pg.len())]))
            .collect();
        let worst = pairs
            .par_iter()
            .map(|&(i, j)| eval(i, j))
            .reduce(|| f64::NEG_INFINITY, f64::max);
        (worst, pairs.len())
    };
    let slack = interpolation_slack(h) + 1e-12 * h.max_value().max(1.0);
    Hypothesis { worst, pairs, slack }
}

fn require_inputs(f: &GridFunction, g: &GridFunction, h: &GridFunction, lambda: f64) -> Result<()> {
    if f.dim() != g.dim() || f.dim() != h.dim() {
        return Err(Error::domain("f, g and h must live in the same dimension"));
    }
    f.require_support("f")?;
    g.require_support("g")?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    Ok(())
}

fn finish(
    report: VerificationReport,
    hyp: &Hypothesis,
    f: &GridFunction,
    g: &GridFunction,
    h: &GridFunction,
    policy: &TolerancePolicy,
) -> VerificationReport {
    let failed = hyp.worst > hyp.slack;
    let mut r = report
        .with_meta("hypothesis_worst_violation", hyp.worst)
        .with_meta("hypothesis_slack", hyp.slack)
        .with_meta("hypothesis_pairs", hyp.pairs)
        .with_meta("hypothesis_exhaustive", f.dim() == 1)
        .with_meta("shape_f", f.grid().shape().to_vec())
        .with_meta("shape_g", g.grid().shape().to_vec())
        .with_meta("shape_h", h.grid().shape().to_vec())
        .with_meta("lhs_provenance", "trapezoidal integral of h")
        .with_meta("tolerance_policy", policy.to_json());
    if failed {
        r = r.with_verdict(Verdict::HypothesisFailed);
    }
    r
}

/// `int h >= (int f)^{1-lambda} (int g)^lambda` given
/// `h((1-lambda) x + lambda y) >= f(x)^{1-lambda} g(y)^lambda`.
pub fn verify_pl(
    f: &GridFunction,
    g: &GridFunction,
    h: &GridFunction,
    lambda: f64,
    policy: &TolerancePolicy,
) -> Result<VerificationReport> {
    require_inputs(f, g, h, lambda)?;
    let hyp = check_hypothesis(f, g, h, lambda, |a, b| a.powf(1.0 - lambda) * b.powf(lambda));
    let lhs = h.integral();
    let rhs = f.integral().powf(1.0 - lambda) * g.integral().powf(lambda);
    let tol = policy.tolerance(h.grid().max_spacing(), 0.0, 0.0, lhs.max(rhs));
    let mut d = InputsDigest::new("pl");
    d.function("f", f).function("g", g).function("h", h).float("lambda", lambda);
    let r = VerificationReport::inequality("pl", lhs, rhs, tol, d)
        .with_meta("lambda", lambda)
        .with_meta("rhs_provenance", "weighted geometric mean of the integrals of f and g");
    Ok(finish(r, &hyp, f, g, h, policy))
}

/// Order of the mean in the conclusion: `alpha / (n alpha + 1)`, with `0 -> 0`,
/// `+inf -> 1/n` and `-1/n -> -inf`.
pub fn bbl_index(alpha: MeanSpec, n: usize) -> Result<MeanSpec> {
    let nf = n as f64;
    match alpha {
        MeanSpec::Geometric => Ok(MeanSpec::Geometric),
        MeanSpec::Max => Ok(MeanSpec::Power(1.0 / nf)),
        MeanSpec::Min => Err(Error::domain(format!("alpha = -inf is below -1/{n}"))),
        MeanSpec::Power(a) => {
            let floor = -1.0 / nf;
            if a < floor && (a - floor).abs() > 1e-15 {
                Err(Error::domain(format!("alpha = {a} is below -1/n = {floor}")))
            } else if (a - floor).abs() <= 1e-15 {
                Ok(MeanSpec::Min)
            } else {
                MeanSpec::from_alpha(a / (nf * a + 1.0))
            }
        }
    }
}

/// `int h >= M_{alpha/(n alpha + 1)}(int f, int g, lambda)` given
/// `h((1-lambda) x + lambda y) >= M_alpha(f(x), g(y), lambda)`.
pub fn verify_bbl(
    f: &GridFunction,
    g: &GridFunction,
    h: &GridFunction,
    lambda: f64,
    alpha: MeanSpec,
    policy: &TolerancePolicy,
) -> Result<VerificationReport> {
    require_inputs(f, g, h, lambda)?;
    let index = bbl_index(alpha, f.dim())?;
    let hyp = check_hypothesis(f, g, h, lambda, |a, b| {
        alpha_mean(a, b, lambda, alpha).expect("arguments validated")
    });
    let lhs = h.integral();
    let rhs = alpha_mean(f.integral(), g.integral(), lambda, index)?;
    let tol = policy.tolerance(h.grid().max_spacing(), 0.0, 0.0, lhs.max(rhs));
    let mut d = InputsDigest::new("bbl");
    d.function("f", f)
        .function("g", g)
        .function("h", h)
        .float("lambda", lambda)
        .float("alpha", alpha.alpha());
    let r = VerificationReport::inequality("bbl", lhs, rhs, tol, d)
        .with_meta("lambda", lambda)
        .with_meta("alpha", alpha.to_string())
        .with_meta("conclusion_index", index.to_string())
        .with_meta(
            "rhs_provenance",
            "power mean of the integrals of f and g of order alpha/(n alpha + 1) (limit convention at the endpoints)",
        );
    Ok(finish(r, &hyp, f, g, h, policy))
}

/// The smallest `h` satisfying the BBL hypothesis at the nodes of `out`:
/// `h(z) = sup M_alpha(f(x), g(y), lambda)` over `z = (1-lambda) x + lambda y`, with
/// `x` a support node of `f` and `y` solved exactly (and symmetrically).
pub fn mean_envelope(
    f: &GridFunction,
    g: &GridFunction,
    lambda: f64,
    alpha: MeanSpec,
    out: &Grid,
) -> Result<GridFunction> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    let need = m_sum_bounds(f, g, &CoefficientSet::minkowski(lambda)?)?;
    if !out.bounds().covers(&need, 1e-9) {
        return Err(Error::config("output grid does not cover (1-lambda) supp f + lambda supp g"));
    }
    let (mf, mg) = (f.closure_mask(), g.closure_mask());
    let dim = f.dim();
    let values: Vec<f64> = (0..out.len())
        .into_par_iter()
        .map(|node| {
            let z = out.node(node);
            let mut best: f64 = 0.0;
            let mut other = vec![0.0; dim];
            for (i, _) in mf.iter().enumerate().filter(|(_, &m)| m) {
                let x = f.grid().node(i);
                for k in 0..dim {
                    other[k] = (z[k] - (1.0 - lambda) * x[k]) / lambda;
                }
                if g.in_support(&other) {
                    best = best.max(alpha_mean(f.values()[i], g.eval(&other), lambda, alpha).unwrap_or(0.0));
                }
            }
            for (j, _) in mg.iter().enumerate().filter(|(_, &m)| m) {
                let y = g.grid().node(j);
                for k in 0..dim {
                    other[k] = (z[k] - lambda * y[k]) / (1.0 - lambda);
                }
                if f.in_support(&other) {
                    best = best.max(alpha_mean(f.eval(&other), g.values()[j], lambda, alpha).unwrap_or(0.0));
                }
            }
            best
        })
        .collect();
    GridFunction::new(out.clone(), values)
}
