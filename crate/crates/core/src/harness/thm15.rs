//! The functional L_p Brunn-Minkowski inequality for s-concave-type functions.

use serde_json::json;

use super::digest::DigestExt;
use super::report::{InputsDigest, VerificationReport};
use super::tolerance::TolerancePolicy;
use crate::error::{Error, Result};
use crate::functions::{fit_lp_out_grid, scale_fn, sup_conv_p, GridFunction, SParam};
use crate::numerics::{refinement_sweep, Grid, Nesting};
use crate::sets::check_p;

#[derive(Clone, Debug)]
pub struct Thm15Config {
    pub p: f64,
    pub s: SParam,
    pub mu: f64,
    pub omega: f64,
    pub f: GridFunction,
    pub g: GridFunction,
    /// Points of the coefficient grid on `[0, 1]`.
    pub lambda_resolution: usize,
    /// Output grid nodes per axis.
    pub out_nodes: usize,
}

impl Thm15Config {
    pub fn validate(&self) -> Result<()> {
        check_p(self.p)?;
        for (name, v) in [("mu", self.mu), ("omega", self.omega)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if self.f.dim() != self.g.dim() {
            return Err(Error::domain("f and g live in different dimensions"));
        }
        self.f.require_support("f")?;
        self.g.require_support("g")
    }

    /// `p / (n + s)`.
    pub fn exponent(&self) -> f64 {
        self.p / (self.f.dim() as f64 + self.s.value())
    }

    fn scaled(&self) -> Result<(GridFunction, GridFunction)> {
        Ok((
            scale_fn(&self.f, self.mu, self.p, self.s)?,
            scale_fn(&self.g, self.omega, self.p, self.s)?,
        ))
    }

    /// Output grid over the `L_p` sum of the scaled supports.
    pub fn out_grid(&self) -> Result<Grid> {
        let (fs, gs) = self.scaled()?;
        fit_lp_out_grid(&fs, &gs, self.p, self.out_nodes)
    }
}

/// `[mu x_{p,s} f] (+)_{p,s} [omega x_{p,s} g]`: the smallest `h` meeting the
/// hypothesis, sampled on `out`. It never exceeds the true extremal `h`.
pub fn construct_h_thm15(cfg: &Thm15Config, out: &Grid) -> Result<GridFunction> {
    cfg.validate()?;
    let (fs, gs) = cfg.scaled()?;
    sup_conv_p(&fs, &gs, cfg.p, cfg.s, cfg.lambda_resolution, out)
}

/// `(int h)^{p/(n+s)} >= mu (int f)^{p/(n+s)} + omega (int g)^{p/(n+s)}` with `h`
/// from [`construct_h_thm15`]. Returns the report and `h`.
pub fn verify_thm15(cfg: &Thm15Config, policy: &TolerancePolicy) -> Result<(VerificationReport, GridFunction)> {
    let out = cfg.out_grid()?;
    let h = construct_h_thm15(cfg, &out)?;
    let e = cfg.exponent();
    let (ih, i_f, i_g) = (h.integral(), cfg.f.integral(), cfg.g.integral());
    let lhs = ih.powf(e);
    let rhs = cfg.mu * i_f.powf(e) + cfg.omega * i_g.powf(e);
    let dlambda = if cfg.p == 1.0 { 0.0 } else { 1.0 / (cfg.lambda_resolution - 1) as f64 };
    let tol = policy.tolerance(out.max_spacing(), dlambda, 0.0, lhs.max(rhs));
    let mut d = InputsDigest::new("thm15");
    d.function("f", &cfg.f)
        .function("g", &cfg.g)
        .float("p", cfg.p)
        .float("s", cfg.s.value())
        .float("mu", cfg.mu)
        .float("omega", cfg.omega)
        .int("lambda_resolution", cfg.lambda_resolution as u64)
        .int("out_nodes", cfg.out_nodes as u64);
    let report = VerificationReport::inequality("thm15", lhs, rhs, tol, d)
        .with_meta("p", cfg.p)
        .with_meta("s", cfg.s.value())
        .with_meta("mu", cfg.mu)
        .with_meta("omega", cfg.omega)
        .with_meta("exponent", e)
        .with_meta("lambda_resolution", cfg.lambda_resolution)
        .with_meta("out_nodes", cfg.out_nodes)
        .with_meta("out_box", json!({"lo": out.bounds().lo(), "hi": out.bounds().hi()}))
        .with_meta("integrals", json!({"h": ih, "f": i_f, "g": i_g}))
        .with_meta(
            "lhs_provenance",
            "discrete sup-convolution of the scaled inputs, a pointwise lower bound of the extremal h",
        )
        .with_meta("rhs_provenance", "trapezoidal integrals of f and g")
        .with_meta("tolerance_policy", policy.to_json());
    Ok((report, h))
}

/// Runs [`verify_thm15`] at nested output resolutions `r`, with `2 r - 1` points on
/// the coefficient grid (so both grids are nested from one step to the next).
pub fn thm15_sweep(
    cfg: &Thm15Config,
    resolutions: &[usize],
    policy: &TolerancePolicy,
) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::with_capacity(resolutions.len());
    let cell = std::cell::RefCell::new(&mut reports);
    refinement_sweep(
        |r| {
            let mut c = cfg.clone();
            c.out_nodes = r;
            c.lambda_resolution = 2 * r - 1;
            let (rep, _) = verify_thm15(&c, policy)?;
            let m = rep.margin;
            cell.borrow_mut().push(rep);
            Ok(m)
        },
        resolutions,
        Nesting::GridNodes,
    )?;
    Ok(reports)
}
