//! Concavity of sup-convolutions and the lift inclusion `K_f (+)_M K_g ⊂ K_h`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::digest::DigestExt;
use super::report::{InputsDigest, Verdict, VerificationReport};
use super::tolerance::TolerancePolicy;
use crate::error::{Error, Result};
use crate::functions::{
    fit_out_grid, is_s_concave, sup_conv_m, sup_conv_m_brute, GridFunction, LiftedBody, SParam,
};
use crate::numerics::{Bounds, RandomSource};
use crate::sets::CoefficientSet;

/// Tolerance used when confirming that the inputs are s-concave.
const INPUT_CONCAVITY_TOL: f64 = 1e-9;
/// Rejection-sampling attempts per lift point before giving up.
const MAX_ATTEMPTS: usize = 100_000;

/// Which sufficient condition for concavity of the sup-convolution is claimed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    ConvexM,
    OriginSupports,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::ConvexM => "convex_m",
            Condition::OriginSupports => "origin_supports",
        })
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex_m" => Ok(Condition::ConvexM),
            "origin_supports" => Ok(Condition::OriginSupports),
            _ => Err(Error::config(format!(
                "unknown condition {s:?}; expected convex_m or origin_supports"
            ))),
        }
    }
}

/// Runs [`is_s_concave`] on `f (+)_{M,s} g` sampled with `out_nodes` nodes per axis.
///
/// The inputs must be s-concave and satisfy `condition`; otherwise the verdict is
/// `precondition_failed`. The report has `lhs = -worst_violation`, `rhs = 0` and a
/// tolerance of two output spacings; a nonconvex support is `violated`.
pub fn check_lemma31(
    f: &GridFunction,
    g: &GridFunction,
    m: &CoefficientSet,
    s: SParam,
    condition: Condition,
    out_nodes: usize,
    policy: &TolerancePolicy,
) -> Result<(VerificationReport, GridFunction)> {
    let out = fit_out_grid(f, g, m, out_nodes)?;
    let tol = 2.0 * out.max_spacing();
    let mut d = InputsDigest::new("lemma31");
    d.function("f", f)
        .function("g", g)
        .coefficients("m", m)
        .float("s", s.value())
        .label(&condition.to_string())
        .int("out_nodes", out_nodes as u64);

    let cf = is_s_concave(f, s, INPUT_CONCAVITY_TOL)?;
    let cg = is_s_concave(g, s, INPUT_CONCAVITY_TOL)?;
    let defect = m.convexity_defect();
    let origin = vec![0.0; f.dim()];
    let (origin_f, origin_g) = (f.in_support(&origin), g.in_support(&origin));
    let mut failed = Vec::new();
    if !cf.concave {
        failed.push("f is not s-concave");
    }
    if !cg.concave {
        failed.push("g is not s-concave");
    }
    match condition {
        Condition::ConvexM if defect > policy.hull_defect => failed.push("M is not convex"),
        Condition::OriginSupports if !(origin_f && origin_g) => {
            failed.push("a support misses the origin")
        }
        _ => {}
    }

    let meta = |r: VerificationReport| {
        r.with_meta("s", s.value())
            .with_meta("condition", condition.to_string())
            .with_meta("m_pairs", m.len())
            .with_meta("m_convexity_defect", defect)
            .with_meta("origin_in_supports", json!([origin_f, origin_g]))
            .with_meta("out_nodes", out_nodes)
            .with_meta("out_spacing", out.max_spacing())
            .with_meta("tolerance_policy", policy.to_json())
    };
    if !failed.is_empty() {
        let h = GridFunction::new(out.clone(), vec![0.0; out.len()])?;
        let r = VerificationReport::inequality("lemma31", f64::NAN, 0.0, tol, d)
            .with_verdict(Verdict::PreconditionFailed)
            .with_meta("precondition_failures", failed);
        return Ok((meta(r), h));
    }

    let h = sup_conv_m(f, g, m, s, &out)?;
    let check = is_s_concave(&h, s, tol)?;
    let mut r = VerificationReport::inequality("lemma31", 0.0 - check.worst_violation, 0.0, tol, d);
    if !check.support_convex {
        r = r.with_verdict(Verdict::Violated);
    }
    let r = r
        .with_meta("support_convex", check.support_convex)
        .with_meta("pairs_checked", check.pairs_checked);
    Ok((meta(r), h))
}

/// A uniform point of `lift`, by rejection from its bounding box.
fn sample_lift(lift: &LiftedBody, bounds: &Bounds, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let mut p = vec![0.0; lift.dim()];
    for _ in 0..MAX_ATTEMPTS {
        for (k, c) in p.iter_mut().enumerate() {
            *c = rng.random_range(bounds.lo()[k]..=bounds.hi()[k]);
        }
        if lift.contains(&p)? {
            return Ok(p);
        }
    }
    Err(Error::domain("lift too thin to sample by rejection"))
}

/// Membership allowing the base point to move by `d` along one axis and the
/// radius to grow by `d`.
fn near_member(lift: &LiftedBody, point: &[f64], d: f64) -> bool {
    let n = lift.function().dim();
    let (x, y) = point.split_at(n);
    let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut probe = x.to_vec();
    let hit = |probe: &[f64]| lift.radius(probe) + d >= norm;
    if hit(&probe) {
        return true;
    }
    for k in 0..n {
        for step in [-d, d] {
            probe[k] = x[k] + step;
            if hit(&probe) {
                return true;
            }
        }
        probe[k] = x[k];
    }
    false
}

/// A function whose positive set is a single node: a discrete point mass.
fn is_spike(f: &GridFunction) -> bool {
    f.values().iter().filter(|&&v| v > 0.0).count() < 2
}

/// Samples `n_samples` combinations `a (x, x') + b (y, y')` of lift points and
/// `(a, b)` in `M`, and counts how many lie in the lift of `f (+)_{M,s} g` with one
/// output spacing of slack. The report has `lhs` = fraction of members, `rhs = 1`.
///
/// The reverse check samples points well inside the lift of `h` and asks whether
/// a combination of grid nodes reaches them (via [`sup_conv_m_brute`]). It is
/// skipped when either input is a single-node spike.
#[allow(clippy::too_many_arguments)]
pub fn check_lemma32(
    f: &GridFunction,
    g: &GridFunction,
    m: &CoefficientSet,
    s: SParam,
    out_nodes: usize,
    n_samples: usize,
    rng: &RandomSource,
    policy: &TolerancePolicy,
) -> Result<(VerificationReport, GridFunction)> {
    if n_samples == 0 {
        return Err(Error::config("lemma32 needs at least one sample"));
    }
    let (kf, kg) = (LiftedBody::new(f.clone(), s)?, LiftedBody::new(g.clone(), s)?);
    let out = fit_out_grid(f, g, m, out_nodes)?;
    let h = sup_conv_m(f, g, m, s, &out)?;
    let kh = LiftedBody::new(h.clone(), s)?;
    let d = out.max_spacing();
    let (bf, bg) = (kf.bounding_box()?, kg.bounding_box()?);
    let n = f.dim();

    let forward: Vec<bool> = (0..n_samples)
        .into_par_iter()
        .map(|i| -> Result<bool> {
            let mut r = rng.substream(i as u64).rng();
            let (u, v) = (sample_lift(&kf, &bf, &mut r)?, sample_lift(&kg, &bg, &mut r)?);
            let (a, b) = m.pairs()[r.random_range(0..m.len())];
            let z: Vec<f64> = u.iter().zip(&v).map(|(u, v)| a * u + b * v).collect();
            Ok(near_member(&kh, &z, d))
        })
        .collect::<Result<_>>()?;
    let failures = forward.iter().filter(|&&ok| !ok).count();

    let reverse = if is_spike(f) || is_spike(g) {
        None
    } else {
        let brute = LiftedBody::new(sup_conv_m_brute(f, g, m, s, &out)?, s)?;
        let count = (n_samples / 10).max(1);
        let bh = kh.bounding_box()?;
        let offset = n_samples as u64;
        let misses: Vec<bool> = (0..count)
            .into_par_iter()
            .map(|i| -> Result<bool> {
                let mut r = rng.substream(offset + i as u64).rng();
                // Shrink the radius so the point is interior up to discretization.
                let mut p = sample_lift(&kh, &bh, &mut r)?;
                let (x, y) = p.split_at_mut(n);
                let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                let target = (kh.radius(x) - d).max(0.0);
                if norm > target && norm > 0.0 {
                    y.iter_mut().for_each(|v| *v *= target / norm);
                }
                Ok(!near_member(&brute, &p, d))
            })
            .collect::<Result<_>>()?;
        Some((count, misses.iter().filter(|&&m| m).count()))
    };

    let mut dg = InputsDigest::new("lemma32");
    dg.function("f", f)
        .function("g", g)
        .coefficients("m", m)
        .float("s", s.value())
        .int("out_nodes", out_nodes as u64)
        .int("samples", n_samples as u64)
        .int("seed", rng.seed())
        .int("stream", rng.stream());
    let fraction = (n_samples - failures) as f64 / n_samples as f64;
    let report = VerificationReport::inequality("lemma32", fraction, 1.0, 0.0, dg)
        .with_meta("s", s.value())
        .with_meta("m_pairs", m.len())
        .with_meta("samples", n_samples)
        .with_meta("failures", failures)
        .with_meta("membership_slack", d)
        .with_meta("seed", rng.seed())
        .with_meta(
            "reverse",
            match reverse {
                Some((count, miss)) => json!({
                    "samples": count,
                    "failures": miss,
                    "failure_fraction": miss as f64 / count as f64,
                }),
                None => json!({"skipped": "an input is a single-node spike"}),
            },
        )
        .with_meta("tolerance_policy", policy.to_json());
    Ok((report, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Grid;

    fn line(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_fn(Grid::uniform(Bounds::interval(lo, hi).unwrap(), n).unwrap(), |x| f(x[0])).unwrap()
    }

    fn s1() -> SParam {
        SParam::new(1.0).unwrap()
    }

    #[test]
    fn convex_hull_of_lp_curve_keeps_tents_concave() {
        let tent = line(-1.0, 1.0, 33, |x| (1.0 - x.abs()).max(0.0));
        let m = CoefficientSet::lp_curve(2.0, 33).unwrap().filled_hull(1.0 / 64.0).unwrap();
        let (r, _) = check_lemma31(&tent, &tent, &m, s1(), Condition::ConvexM, 65, &TolerancePolicy::default()).unwrap();
        assert!(r.verdict.passes(), "{r:?}");
    }

    #[test]
    fn two_point_m_on_indicators_gives_the_max() {
        let ind = line(0.0, 1.0, 17, |_| 1.0);
        let m = CoefficientSet::explicit(vec![(1.0, 0.0), (0.0, 1.0)]).unwrap();
        let (r, h) = check_lemma31(&ind, &ind, &m, s1(), Condition::OriginSupports, 17, &TolerancePolicy::default()).unwrap();
        assert!(r.verdict.passes(), "{r:?}");
        assert!(h.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn disconnected_support_fails_the_precondition() {
        let gap = line(0.0, 3.0, 31, |x| if x <= 1.0 || x >= 2.0 { 1.0 } else { 0.0 });
        let ind = line(0.0, 1.0, 11, |_| 1.0);
        let m = CoefficientSet::classical();
        let (r, _) = check_lemma31(&gap, &ind, &m, s1(), Condition::ConvexM, 41, &TolerancePolicy::default()).unwrap();
        assert_eq!(r.verdict, Verdict::PreconditionFailed);
        let off = line(1.0, 2.0, 11, |_| 1.0);
        let two = CoefficientSet::explicit(vec![(1.0, 0.0), (0.0, 1.0)]).unwrap();
        let (r, _) = check_lemma31(&off, &ind, &two, s1(), Condition::OriginSupports, 41, &TolerancePolicy::default()).unwrap();
        assert_eq!(r.verdict, Verdict::PreconditionFailed);
    }

    #[test]
    fn forward_inclusion_for_indicators() {
        let ind = line(0.0, 1.0, 33, |_| 1.0);
        let m = CoefficientSet::lp_curve(2.0, 65).unwrap();
        let (r, _) = check_lemma32(&ind, &ind, &m, s1(), 65, 2000, &RandomSource::new(3), &TolerancePolicy::default()).unwrap();
        assert_eq!(r.metadata["failures"], 0, "{r:?}");
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.metadata["reverse"]["failures"], 0, "{r:?}");
    }

    #[test]
    fn projection_m_and_spikes() {
        let ind = line(0.0, 1.0, 17, |_| 1.0);
        let spike = line(0.0, 1.0, 17, |x| if x == 0.5 { 1.0 } else { 0.0 });
        let m = CoefficientSet::explicit(vec![(1.0, 0.0)]).unwrap();
        let (r, _) = check_lemma32(&ind, &spike, &m, s1(), 17, 500, &RandomSource::new(1), &TolerancePolicy::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.metadata["reverse"]["skipped"].is_string());
        let half = SParam::new(0.5).unwrap();
        assert!(check_lemma32(&ind, &ind, &m, half, 17, 10, &RandomSource::new(1), &TolerancePolicy::default()).is_err());
    }
}
