//! Set-level Brunn-Minkowski checks and the lift volume identity.

use serde_json::json;

use super::digest::DigestExt;
use super::report::{InputsDigest, VerificationReport};
use super::tolerance::TolerancePolicy;
use crate::error::{Error, Result};
use crate::functions::{lift_volume, GridFunction, LiftedBody, SParam};
use crate::numerics::{kappa, MonteCarloEstimate, RandomSource};
use crate::sets::{check_p, lp_pointwise_sum, m_add, volume_hull, CoefficientSet, DiscreteSet};

/// `v^e` with its propagated standard error. At `v = 0` the derivative blows up
/// for `e < 1`, so the error is bounded by `stderr^e` instead.
fn powered(v: &MonteCarloEstimate, e: f64) -> (f64, f64) {
    let value = v.estimate.max(0.0).powf(e);
    let err = if v.stderr == 0.0 {
        0.0
    } else if v.estimate > 0.0 {
        (e * v.estimate.powf(e - 1.0) * v.stderr).abs().min(v.stderr.powf(e))
    } else {
        v.stderr.powf(e)
    };
    (value, err)
}

fn check_same_dim(k: &DiscreteSet, l: &DiscreteSet) -> Result<usize> {
    if k.dim() != l.dim() {
        return Err(Error::domain(format!(
            "sets have dimensions {} and {}",
            k.dim(),
            l.dim()
        )));
    }
    Ok(k.dim())
}

/// `V((1-lambda) K + lambda L)^{1/n} >= (1-lambda) V(K)^{1/n} + lambda V(L)^{1/n}`,
/// with volumes of convex hulls.
pub fn verify_bm(
    k: &DiscreteSet,
    l: &DiscreteSet,
    lambda: f64,
    samples: usize,
    rng: RandomSource,
    policy: &TolerancePolicy,
) -> Result<VerificationReport> {
    let n = check_same_dim(k, l)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    let combo = m_add(k, l, &CoefficientSet::minkowski(lambda)?)?;
    let e = 1.0 / n as f64;
    let vs = volume_hull(&combo, samples, &rng.substream(0))?;
    let vk = volume_hull(k, samples, &rng.substream(1))?;
    let vl = volume_hull(l, samples, &rng.substream(2))?;
    let (lhs, el) = powered(&vs, e);
    let (pk, ek) = powered(&vk, e);
    let (pl, epl) = powered(&vl, e);
    let rhs = (1.0 - lambda) * pk + lambda * pl;
    let stderr = (el * el + ((1.0 - lambda) * ek).powi(2) + (lambda * epl).powi(2)).sqrt();
    let tol = policy.tolerance(0.0, 0.0, stderr, lhs.max(rhs));
    let mut d = InputsDigest::new("bm");
    d.set("K", k).set("L", l).float("lambda", lambda);
    Ok(VerificationReport::inequality("bm", lhs, rhs, tol, d)
        .with_meta("dim", n)
        .with_meta("lambda", lambda)
        .with_meta("samples", samples)
        .with_meta("seed", rng.seed())
        .with_meta("stream", rng.stream())
        .with_meta("volumes", json!({"combination": vs, "K": vk, "L": vl}))
        .with_meta("lhs_provenance", "hull volume of the Minkowski combination, raised to 1/n")
        .with_meta("rhs_provenance", "hull volumes of K and L")
        .with_meta("tolerance_policy", policy.to_json()))
}

/// `V(K +_p L)^{p/n} >= V(K)^{p/n} + V(L)^{p/n}` with the pointwise `L_p` sum over
/// a `lambda_resolution`-point coefficient grid.
pub fn verify_lp_bm(
    k: &DiscreteSet,
    l: &DiscreteSet,
    p: f64,
    lambda_resolution: usize,
    samples: usize,
    rng: RandomSource,
    policy: &TolerancePolicy,
) -> Result<VerificationReport> {
    check_p(p)?;
    let n = check_same_dim(k, l)?;
    let sum = lp_pointwise_sum(k, l, p, lambda_resolution)?;
    let e = p / n as f64;
    let vs = volume_hull(&sum, samples, &rng.substream(0))?;
    let vk = volume_hull(k, samples, &rng.substream(1))?;
    let vl = volume_hull(l, samples, &rng.substream(2))?;
    let (lhs, el) = powered(&vs, e);
    let (pk, ek) = powered(&vk, e);
    let (pl, epl) = powered(&vl, e);
    let rhs = pk + pl;
    let stderr = (el * el + ek * ek + epl * epl).sqrt();
    let dlambda = if p == 1.0 { 0.0 } else { 1.0 / (lambda_resolution - 1) as f64 };
    let tol = policy.tolerance(0.0, dlambda, stderr, lhs.max(rhs));
    let mut d = InputsDigest::new("lp_bm");
    d.set("K", k).set("L", l).float("p", p).int("lambda_resolution", lambda_resolution as u64);
    Ok(VerificationReport::inequality("lp_bm", lhs, rhs, tol, d)
        .with_meta("dim", n)
        .with_meta("p", p)
        .with_meta("lambda_resolution", lambda_resolution)
        .with_meta("samples", samples)
        .with_meta("seed", rng.seed())
        .with_meta("stream", rng.stream())
        .with_meta("volumes", json!({"sum": vs, "K": vk, "L": vl}))
        .with_meta(
            "lhs_provenance",
            "hull upper bound: volume of the convex hull of the sampled pointwise L_p sum, raised to p/n",
        )
        .with_meta("rhs_provenance", "hull volumes of K and L")
        .with_meta("tolerance_policy", policy.to_json()))
}

/// Monte Carlo `V_{n+s}(K_f)` against `kappa_s * int f`.
pub fn verify_lift_volume(
    f: &GridFunction,
    s: SParam,
    samples: usize,
    rng: RandomSource,
    policy: &TolerancePolicy,
) -> Result<VerificationReport> {
    let lift = LiftedBody::new(f.clone(), s)?;
    let est = lift_volume(&lift, samples, rng)?;
    let rhs = kappa(s.value())? * f.integral();
    let tol = policy.tolerance(0.0, 0.0, est.stderr, rhs);
    let mut d = InputsDigest::new("lift_volume");
    d.function("f", f).float("s", s.value());
    Ok(VerificationReport::identity("lift_volume", est.estimate, rhs, tol, d)
        .with_meta("s", s.value())
        .with_meta("samples", samples)
        .with_meta("seed", rng.seed())
        .with_meta("stream", rng.stream())
        .with_meta("stderr", est.stderr)
        .with_meta("hits", est.hits)
        .with_meta("lhs_provenance", "Monte Carlo volume of the lift in its bounding box")
        .with_meta("rhs_provenance", "kappa_s times the trapezoidal integral of f")
        .with_meta("tolerance_policy", policy.to_json()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Verdict;

    fn seg(lo: f64, hi: f64) -> DiscreteSet {
        DiscreteSet::new(1, vec![lo, hi]).unwrap()
    }

    #[test]
    fn segments_are_equality_cases() {
        let pol = TolerancePolicy::default();
        let r = verify_bm(&seg(0.0, 1.0), &seg(0.0, 3.0), 0.5, 10, RandomSource::new(0), &pol).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (2.0, 2.0, Verdict::Holds));
        let r = verify_lp_bm(&seg(0.0, 1.0), &seg(0.0, 2.0), 3.0, 1000, 10, RandomSource::new(0), &pol).unwrap();
        assert!((r.lhs - 9.0).abs() < 1e-3 && (r.rhs - 9.0).abs() < 1e-12, "{r:?}");
        assert!(r.verdict.passes());
    }
}
