use super::grid_fn::GridFunction;
use super::param::SParam;
use crate::error::{Error, Result};
use crate::numerics::{mc_volume, Bounds, MonteCarloEstimate, RandomSource};

/// `K_f = {(x, y) in R^n x R^s : x in supp f, |y| <= f(x)^{1/s}}` for integer `s`.
#[derive(Clone, Debug)]
pub struct LiftedBody {
    f: GridFunction,
    s: usize,
    roots: Vec<f64>,
}

impl LiftedBody {
    pub fn new(f: GridFunction, s: SParam) -> Result<Self> {
        let s_int = s.as_integer().map_err(|_| {
            Error::domain(format!("the lift needs an integer s, got {}", s.value()))
        })?;
        let roots = f.roots(s.value());
        Ok(LiftedBody { f, s: s_int, roots })
    }

    pub fn function(&self) -> &GridFunction {
        &self.f
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Ambient dimension `n + s`.
    pub fn dim(&self) -> usize {
        self.f.dim() + self.s
    }

    /// `f(x)^{1/s}` with node roots interpolated; zero outside the support.
    pub fn radius(&self, x: &[f64]) -> f64 {
        if self.f.in_support(x) {
            self.f.grid().interpolate(&self.roots, x).unwrap_or(0.0)
        } else {
            f64::NEG_INFINITY
        }
    }

    pub fn contains(&self, point: &[f64]) -> Result<bool> {
        self.contains_with_tol(point, 0.0)
    }

    /// Membership with the radius enlarged by `tol`.
    pub fn contains_with_tol(&self, point: &[f64], tol: f64) -> Result<bool> {
        if point.len() != self.dim() {
            return Err(Error::domain(format!(
                "point has dimension {} but the lift lives in R^{}",
                point.len(),
                self.dim()
            )));
        }
        let (x, y) = point.split_at(self.f.dim());
        let r = self.radius(x);
        Ok(r.is_finite() && y.iter().map(|v| v * v).sum::<f64>().sqrt() <= r + tol)
    }

    /// `box(supp f) x [-r, r]^s` with `r` the largest node root.
    pub fn bounding_box(&self) -> Result<Bounds> {
        let support = self
            .f
            .support_bounds()
            .ok_or_else(|| Error::domain("lift of a function with empty support"))?;
        let r = self.roots.iter().cloned().fold(0.0, f64::max);
        Ok(support.product(&Bounds::new(vec![-r; self.s], vec![r; self.s])?))
    }
}

pub fn lift_membership(lift: &LiftedBody, point: &[f64]) -> Result<bool> {
    lift.contains(point)
}

/// Monte Carlo `(n + s)`-volume of the lift.
pub fn lift_volume(lift: &LiftedBody, samples: usize, rng: RandomSource) -> Result<MonteCarloEstimate> {
    let n = lift.f.dim();
    mc_volume(
        |p| {
            let (x, y) = p.split_at(n);
            y.iter().map(|v| v * v).sum::<f64>().sqrt() <= lift.radius(x)
        },
        &lift.bounding_box()?,
        samples,
        rng,
    )
}
