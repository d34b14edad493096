use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, nine coefficients (Numerical Recipes / Boost set).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function. Integer and half-integer arguments up to 171 use the exact
/// recurrence from `Gamma(1) = 1` / `Gamma(1/2) = sqrt(pi)`; everything else goes
/// through the Lanczos series (about 15 significant digits), with reflection
/// below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x.fract() == 0.0 {
        return f64::NAN;
    }
    let twice = 2.0 * x;
    if x > 0.0 && x <= 171.0 && twice.fract() == 0.0 {
        let (mut acc, mut t) = if x.fract() == 0.0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
        while t < x {
            acc *= t;
            t += 1.0;
        }
        return acc;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * sum
}

/// Volume of the unit ball in `R^s`, `pi^{s/2} / Gamma(s/2 + 1)`, for any real `s > 0`.
pub fn kappa(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("unit-ball dimension must be positive, got {s}")));
    }
    Ok(PI.powf(0.5 * s) / gamma(0.5 * s + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(1.0).unwrap(), 2.0);
        assert!(rel(kappa(2.0).unwrap(), PI) < 1e-15);
        // Gamma(3) = 2, so kappa_4 = pi^2 / 2.
        assert!(rel(kappa(4.0).unwrap(), PI * PI / 2.0) < 1e-15);
        assert!(rel(kappa(3.0).unwrap(), 4.0 * PI / 3.0) < 1e-15);
    }

    #[test]
    fn kappa_rejects_nonpositive() {
        assert!(kappa(0.0).is_err());
        assert!(kappa(-1.0).is_err());
        assert!(kappa(f64::NAN).is_err());
    }

    #[test]
    fn kappa_recurrence() {
        for s in 3..40 {
            let s = s as f64;
            let lhs = kappa(s).unwrap();
            let rhs = kappa(s - 2.0).unwrap() * 2.0 * PI / s;
            assert!(rel(lhs, rhs) < 1e-10, "s = {s}");
        }
    }

    #[test]
    fn lanczos_agrees_with_exact_path_nearby() {
        // Just off the integer lattice the series takes over; continuity check.
        for k in 1..20 {
            let x = k as f64;
            let near = gamma(x + 1e-9);
            assert!(rel(near, gamma(x)) < 1e-7, "x = {x}");
        }
    }

    #[test]
    fn reflection() {
        // Gamma(-1/2) = -2 sqrt(pi)
        assert!(rel(gamma(-0.5), -2.0 * PI.sqrt()) < 1e-13);
        assert!(gamma(-2.0).is_nan());
    }
}
