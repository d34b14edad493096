use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Slack attributed to discretization and sampling:
/// `grid_coef * h + lambda_coef * dlambda` (both relative to the magnitude of the
/// compared quantities), plus `mc_sigmas` standard errors, plus round-off.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub grid_coef: f64,
    pub lambda_coef: f64,
    pub mc_sigmas: f64,
    pub roundoff: f64,
    /// Largest relative gap between a coefficient set and its hull still accepted as
    /// convex.
    pub hull_defect: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            grid_coef: 1.0,
            lambda_coef: 1.0,
            mc_sigmas: 3.0,
            roundoff: 1e-12,
            hull_defect: 0.02,
        }
    }
}

impl TolerancePolicy {
    pub fn tolerance(&self, grid_spacing: f64, lambda_spacing: f64, stderr: f64, scale: f64) -> f64 {
        let scale = scale.abs().max(1.0);
        (self.grid_coef * grid_spacing + self.lambda_coef * lambda_spacing + self.roundoff) * scale
            + self.mc_sigmas * stderr
    }

    pub fn to_json(&self) -> Value {
        json!({
            "grid_coef": self.grid_coef,
            "lambda_coef": self.lambda_coef,
            "mc_sigmas": self.mc_sigmas,
            "roundoff": self.roundoff,
            "hull_defect": self.hull_defect,
        })
    }
}
