use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The concavity exponent `s > 0`. Lifts to `R^{n+s}` need an integer `s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SParam {
    s: f64,
    integer: bool,
}

impl SParam {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain(format!("s must be a positive real, got {s}")));
        }
        Ok(SParam {
            s,
            integer: s.fract() == 0.0,
        })
    }

    pub fn value(&self) -> f64 {
        self.s
    }

    pub fn is_integer(&self) -> bool {
        self.integer
    }

    pub fn as_integer(&self) -> Result<usize> {
        if self.integer {
            Ok(self.s as usize)
        } else {
            Err(Error::domain(format!("s = {} is not an integer", self.s)))
        }
    }
}
