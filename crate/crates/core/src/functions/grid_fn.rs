use crate::error::{Error, Result};
use crate::numerics::{integrate_grid, Bounds, Grid, EDGE_SLACK};

/// A nonnegative function sampled on a uniform grid. Between nodes it is the
/// multilinear interpolant of the node values; outside the box it is zero.
///
/// The support is the closure of the interpolant's positive set: the union of the
/// closed grid cells that have a positive corner. A point belongs to it exactly when
/// some positive node is within one spacing of it along every axis.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::domain(format!(
                "value at node {i} is {}; grid functions are finite and nonnegative",
                values[i]
            )));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let mut x = vec![0.0; grid.dim()];
        let values = (0..grid.len())
            .map(|i| {
                grid.node_into(i, &mut x);
                f(&x)
            })
            .collect();
        Self::new(grid, values)
    }

    /// `height` times the indicator of `bounds`, on a grid spanning exactly `bounds`.
    pub fn indicator(bounds: Bounds, nodes_per_axis: usize, height: f64) -> Result<Self> {
        let grid = Grid::uniform(bounds, nodes_per_axis)?;
        let n = grid.len();
        Self::new(grid, vec![height; n])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn integral(&self) -> f64 {
        integrate_grid(&self.grid, &self.values)
    }

    pub fn has_support(&self) -> bool {
        self.values.iter().any(|&v| v > 0.0)
    }

    pub(crate) fn require_support(&self, what: &str) -> Result<()> {
        if self.has_support() {
            Ok(())
        } else {
            Err(Error::domain(format!("{what} has empty support")))
        }
    }

    /// Interpolated value; zero outside the box.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.grid.interpolate(&self.values, x).unwrap_or(0.0)
    }

    /// Node values raised to `1/s`.
    pub fn roots(&self, s: f64) -> Vec<f64> {
        if s == 1.0 {
            return self.values.clone();
        }
        self.values.iter().map(|v| v.powf(1.0 / s)).collect()
    }

    /// Whether `x` lies in the support (see the type docs).
    pub fn in_support(&self, x: &[f64]) -> bool {
        let g = &self.grid;
        if g.dim() == 1 {
            let t = match g.locate(0, x[0]) {
                Some(t) => t,
                None => return false,
            };
            let lo = (t - 1.0 - EDGE_SLACK).ceil().max(0.0) as usize;
            let hi = ((t + 1.0 + EDGE_SLACK).floor() as usize).min(g.shape()[0] - 1);
            return self.values[lo..=hi].iter().any(|&v| v > 0.0);
        }
        let mut lo = vec![0; g.dim()];
        let mut hi = vec![0; g.dim()];
        for axis in 0..g.dim() {
            let t = match g.locate(axis, x[axis]) {
                Some(t) => t,
                None => return false,
            };
            lo[axis] = (t - 1.0 - EDGE_SLACK).ceil().max(0.0) as usize;
            hi[axis] = ((t + 1.0 + EDGE_SLACK).floor() as usize).min(g.shape()[axis] - 1);
        }
        self.any_positive_in(&lo, &hi)
    }

    fn any_positive_in(&self, lo: &[usize], hi: &[usize]) -> bool {
        let mut idx = lo.to_vec();
        loop {
            if self.values[self.grid.ravel(&idx)] > 0.0 {
                return true;
            }
            let mut axis = idx.len();
            loop {
                if axis == 0 {
                    return false;
                }
                axis -= 1;
                if idx[axis] < hi[axis] {
                    idx[axis] += 1;
                    break;
                }
                idx[axis] = lo[axis];
            }
        }
    }

    /// Nodes lying in the support: positive nodes and their grid neighbours.
    pub fn closure_mask(&self) -> Vec<bool> {
        let g = &self.grid;
        let mut mask = vec![false; g.len()];
        let mut idx = vec![0; g.dim()];
        let mut lo = vec![0; g.dim()];
        let mut hi = vec![0; g.dim()];
        for (flat, m) in mask.iter_mut().enumerate() {
            g.unravel(flat, &mut idx);
            for axis in 0..g.dim() {
                lo[axis] = idx[axis].saturating_sub(1);
                hi[axis] = (idx[axis] + 1).min(g.shape()[axis] - 1);
            }
            *m = self.any_positive_in(&lo, &hi);
        }
        mask
    }

    /// Bounding box of the support, or `None` for the zero function.
    pub fn support_bounds(&self) -> Option<Bounds> {
        let g = &self.grid;
        let dim = g.dim();
        let mut lo = vec![usize::MAX; dim];
        let mut hi = vec![0; dim];
        let mut idx = vec![0; dim];
        for (flat, &v) in self.values.iter().enumerate() {
            if v > 0.0 {
                g.unravel(flat, &mut idx);
                for axis in 0..dim {
                    lo[axis] = lo[axis].min(idx[axis]);
                    hi[axis] = hi[axis].max(idx[axis]);
                }
            }
        }
        if lo[0] == usize::MAX {
            return None;
        }
        let lo: Vec<f64> = (0..dim).map(|a| g.coord(a, lo[a].saturating_sub(1))).collect();
        let hi: Vec<f64> = (0..dim)
            .map(|a| g.coord(a, (hi[a] + 1).min(g.shape()[a] - 1)))
            .collect();
        Bounds::new(lo, hi).ok()
    }

    /// Values of `self` at the nodes of `grid`.
    pub fn resample(&self, grid: &Grid) -> GridFunction {
        let mut x = vec![0.0; grid.dim()];
        let values = (0..grid.len())
            .map(|i| {
                grid.node_into(i, &mut x);
                self.eval(&x)
            })
            .collect();
        GridFunction {
            grid: grid.clone(),
            values,
        }
    }

    /// `c * self`.
    pub fn scaled_values(&self, c: f64) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(|v| v * c).collect())
    }

    /// Pointwise maximum, sampled on `grid`.
    pub fn max_with(&self, other: &GridFunction, grid: &Grid) -> GridFunction {
        let a = self.resample(grid);
        let b = other.resample(grid);
        let values = a.values.iter().zip(&b.values).map(|(x, y)| x.max(*y)).collect();
        GridFunction {
            grid: grid.clone(),
            values,
        }
    }

    /// One row per node: coordinates, then the value.
    pub fn to_profile_csv(&self) -> String {
        let mut out = String::new();
        for a in 0..self.dim() {
            out.push_str(&format!("x{a},"));
        }
        out.push_str("value\n");
        let mut x = vec![0.0; self.dim()];
        for (i, v) in self.values.iter().enumerate() {
            self.grid.node_into(i, &mut x);
            for c in &x {
                out.push_str(&format!("{c},"));
            }
            out.push_str(&format!("{v}\n"));
        }
        out
    }
}
