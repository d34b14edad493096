use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order `alpha` of a weighted power mean. The limits `0` and `+-inf` are distinct
/// variants so they are represented exactly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanSpec {
    Power(f64),
    Geometric,
    Max,
    Min,
}

impl MeanSpec {
    /// Maps `0`, `+inf` and `-inf` to their sentinels.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if alpha.is_nan() {
            return Err(Error::domain("mean order is NaN"));
        }
        Ok(if alpha == 0.0 {
            MeanSpec::Geometric
        } else if alpha == f64::INFINITY {
            MeanSpec::Max
        } else if alpha == f64::NEG_INFINITY {
            MeanSpec::Min
        } else {
            MeanSpec::Power(alpha)
        })
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            MeanSpec::Power(a) => a,
            MeanSpec::Geometric => 0.0,
            MeanSpec::Max => f64::INFINITY,
            MeanSpec::Min => f64::NEG_INFINITY,
        }
    }
}

impl fmt::Display for MeanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanSpec::Max => write!(f, "inf"),
            MeanSpec::Min => write!(f, "-inf"),
            other => write!(f, "{}", other.alpha()),
        }
    }
}

/// `M_alpha(a, b, lambda)`; zero whenever `a b = 0`.
pub fn alpha_mean(a: f64, b: f64, lambda: f64, spec: MeanSpec) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("mean weight must lie in (0, 1), got {lambda}")));
    }
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::domain(format!("mean arguments must be nonnegative, got {a}, {b}")));
    }
    if a == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    Ok(match spec {
        MeanSpec::Max => a.max(b),
        MeanSpec::Min => a.min(b),
        MeanSpec::Geometric => a.powf(1.0 - lambda) * b.powf(lambda),
        MeanSpec::Power(alpha) => {
            // Normalizing by the larger argument keeps a^alpha in range.
            let m = a.max(b);
            let (x, y) = (a / m, b / m);
            m * ((1.0 - lambda) * x.powf(alpha) + lambda * y.powf(alpha)).powf(1.0 / alpha)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_means() {
        assert_eq!(alpha_mean(4.0, 9.0, 0.5, MeanSpec::Power(1.0)).unwrap(), 6.5);
        assert!((alpha_mean(4.0, 9.0, 0.5, MeanSpec::Geometric).unwrap() - 6.0).abs() < 1e-14);
        assert_eq!(alpha_mean(4.0, 9.0, 0.5, MeanSpec::Max).unwrap(), 9.0);
        assert_eq!(alpha_mean(4.0, 9.0, 0.5, MeanSpec::Min).unwrap(), 4.0);
    }

    #[test]
    fn zero_rule() {
        for spec in [MeanSpec::Power(-2.0), MeanSpec::Power(3.0), MeanSpec::Geometric, MeanSpec::Max] {
            assert_eq!(alpha_mean(5.0, 0.0, 0.3, spec).unwrap(), 0.0);
        }
    }

    #[test]
    fn weight_must_be_interior() {
        assert!(alpha_mean(1.0, 1.0, 0.0, MeanSpec::Max).is_err());
        assert!(alpha_mean(1.0, 1.0, 1.0, MeanSpec::Max).is_err());
    }

    #[test]
    fn sentinels_round_trip() {
        for a in [0.0, f64::INFINITY, f64::NEG_INFINITY, -0.5] {
            assert_eq!(MeanSpec::from_alpha(a).unwrap().alpha(), a);
        }
    }
}
