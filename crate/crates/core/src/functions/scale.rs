use super::grid_fn::GridFunction;
use super::param::SParam;
use crate::error::{Error, Result};
use crate::sets::inverse_conjugate;

/// `lambda x_{p,s} f`, i.e. `x -> lambda^{s/p} f(lambda^{-1/p} x)`.
///
/// The box is dilated by `lambda^{1/p}` and node values are multiplied by
/// `lambda^{s/p}`, so node `i` of the result corresponds to node `i` of `f` and no
/// interpolation takes place.
pub fn scale_fn(f: &GridFunction, lambda: f64, p: f64, s: SParam) -> Result<GridFunction> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("scaling factor must be positive, got {lambda}")));
    }
    inverse_conjugate(p)?;
    if lambda == 1.0 {
        return Ok(f.clone());
    }
    let bounds = f.grid().bounds().scaled(lambda.powf(1.0 / p))?;
    let grid = f.grid().with_bounds(bounds)?;
    let c = lambda.powf(s.value() / p);
    GridFunction::new(grid, f.values().iter().map(|v| v * c).collect())
}
