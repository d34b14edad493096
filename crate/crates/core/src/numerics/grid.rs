use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points this close to a box face (relative to the grid spacing) count as inside.
pub(crate) const EDGE_SLACK: f64 = 1e-9;

/// Axis-aligned box `[lo_0, hi_0] x ... x [lo_{n-1}, hi_{n-1}]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Bounds {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::domain("box must have dimension >= 1"));
        }
        if lo.len() != hi.len() {
            return Err(Error::domain(format!(
                "box corners have different dimensions ({} vs {})",
                lo.len(),
                hi.len()
            )));
        }
        for (i, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            if !l.is_finite() || !h.is_finite() {
                return Err(Error::domain(format!("box axis {i} has a non-finite bound")));
            }
            if l >= h {
                return Err(Error::domain(format!(
                    "box axis {i} is degenerate: lo = {l} is not below hi = {h}"
                )));
            }
        }
        Ok(Bounds { lo, hi })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim], vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn width(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.width(i)).product()
    }

    /// Membership with an absolute per-axis slack.
    pub fn contains(&self, x: &[f64], slack: f64) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(&v, (&l, &h))| v >= l - slack && v <= h + slack)
    }

    /// Whether `other` lies inside `self`, allowing a slack proportional to each axis width.
    pub fn covers(&self, other: &Bounds, rel_slack: f64) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|i| {
                let slack = rel_slack * self.width(i).max(other.width(i));
                other.lo[i] >= self.lo[i] - slack && other.hi[i] <= self.hi[i] + slack
            })
    }

    /// The image of the box under `x -> factor * x` (a dilation about the origin).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::domain(format!("box scale factor must be positive, got {factor}")));
        }
        Self::new(
            self.lo.iter().map(|v| v * factor).collect(),
            self.hi.iter().map(|v| v * factor).collect(),
        )
    }

    /// Cartesian product `self x other`.
    pub fn product(&self, other: &Bounds) -> Bounds {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo.extend_from_slice(&other.lo);
        hi.extend_from_slice(&other.hi);
        Bounds { lo, hi }
    }
}

/// Uniform tensor grid over a [`Bounds`]. Nodes include the box corners and are
/// addressed in row-major order (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    bounds: Bounds,
    shape: Vec<usize>,
    spacing: Vec<f64>,
    strides: Vec<usize>,
}

impl Grid {
    pub fn new(bounds: Bounds, shape: Vec<usize>) -> Result<Self> {
        if shape.len() != bounds.dim() {
            return Err(Error::domain(format!(
                "grid shape has {} axes but the box has {}",
                shape.len(),
                bounds.dim()
            )));
        }
        if let Some(axis) = shape.iter().position(|&k| k < 2) {
            return Err(Error::domain(format!(
                "grid axis {axis} needs at least 2 nodes, got {}",
                shape[axis]
            )));
        }
        let mut total: usize = 1;
        for &k in &shape {
            total = total
                .checked_mul(k)
                .ok_or_else(|| Error::domain("grid node count overflows"))?;
        }
        let spacing = (0..shape.len())
            .map(|i| bounds.width(i) / (shape[i] - 1) as f64)
            .collect();
        let mut strides = vec![1; shape.len()];
        for i in (0..shape.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * shape[i + 1];
        }
        Ok(Grid {
            bounds,
            shape,
            spacing,
            strides,
        })
    }

    /// Same node count along every axis.
    pub fn uniform(bounds: Bounds, nodes_per_axis: usize) -> Result<Self> {
        let dim = bounds.dim();
        Self::new(bounds, vec![nodes_per_axis; dim])
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn max_spacing(&self) -> f64 {
        self.spacing.iter().cloned().fold(0.0, f64::max)
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of node `i` along `axis`; the last node is exactly `hi`.
    #[inline]
    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        if i + 1 == self.shape[axis] {
            self.bounds.hi[axis]
        } else {
            self.bounds.lo[axis] + i as f64 * self.spacing[axis]
        }
    }

    pub fn unravel(&self, mut flat: usize, index: &mut [usize]) {
        for (axis, stride) in self.strides.iter().enumerate() {
            index[axis] = flat / stride;
            flat %= stride;
        }
    }

    pub fn ravel(&self, index: &[usize]) -> usize {
        index.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn node(&self, flat: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.node_into(flat, &mut out);
        out
    }

    pub fn node_into(&self, mut flat: usize, out: &mut [f64]) {
        for (axis, stride) in self.strides.iter().enumerate() {
            let i = flat / stride;
            flat %= stride;
            out[axis] = self.coord(axis, i);
        }
    }

    /// Fractional node position of `x` along `axis`, or `None` outside the box
    /// (beyond the edge slack).
    #[inline]
    pub(crate) fn locate(&self, axis: usize, x: f64) -> Option<f64> {
        let t = (x - self.bounds.lo[axis]) / self.spacing[axis];
        let last = (self.shape[axis] - 1) as f64;
        if t < -EDGE_SLACK || t > last + EDGE_SLACK || t.is_nan() {
            None
        } else {
            Some(t.clamp(0.0, last))
        }
    }

    /// Multilinear interpolation of node data at `x`; `None` outside the box.
    pub fn interpolate(&self, data: &[f64], x: &[f64]) -> Option<f64> {
        debug_assert_eq!(data.len(), self.len());
        if self.dim() == 1 {
            let t = self.locate(0, x[0])?;
            let i0 = (t.floor() as usize).min(self.shape[0] - 2);
            let w = t - i0 as f64;
            return Some(data[i0] * (1.0 - w) + data[i0 + 1] * w);
        }
        let dim = self.dim();
        let mut base = [0usize; 8];
        let mut frac = [0f64; 8];
        let (mut base_v, mut frac_v);
        let (base, frac): (&mut [usize], &mut [f64]) = if dim <= 8 {
            (&mut base[..dim], &mut frac[..dim])
        } else {
            base_v = vec![0; dim];
            frac_v = vec![0.0; dim];
            (&mut base_v[..], &mut frac_v[..])
        };
        for axis in 0..dim {
            let t = self.locate(axis, x[axis])?;
            let i0 = (t.floor() as usize).min(self.shape[axis] - 2);
            base[axis] = i0;
            frac[axis] = t - i0 as f64;
        }
        let origin = self.ravel(base);
        let mut acc = 0.0;
        for corner in 0..(1usize << dim) {
            let mut w = 1.0;
            let mut offset = 0;
            for axis in 0..dim {
                if corner >> axis & 1 == 1 {
                    w *= frac[axis];
                    offset += self.strides[axis];
                } else {
                    w *= 1.0 - frac[axis];
                }
            }
            if w != 0.0 {
                acc += w * data[origin + offset];
            }
        }
        Some(acc)
    }

    /// True when every node of `coarser` is also a node of `self`.
    pub fn refines(&self, coarser: &Grid) -> bool {
        self.bounds == coarser.bounds
            && self
                .shape
                .iter()
                .zip(&coarser.shape)
                .all(|(&fine, &coarse)| (fine - 1) % (coarse - 1) == 0)
    }

    /// The same node layout on a different box.
    pub fn with_bounds(&self, bounds: Bounds) -> Result<Grid> {
        Grid::new(bounds, self.shape.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_boxes() {
        assert!(Bounds::new(vec![], vec![]).is_err());
        assert!(Bounds::new(vec![1.0], vec![1.0]).is_err());
        assert!(Bounds::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(Bounds::new(vec![0.0], vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn grid_nodes_hit_the_corners() {
        let g = Grid::new(Bounds::new(vec![-1.0, 0.3], vec![2.0, 0.7]).unwrap(), vec![4, 3]).unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!(g.node(0), vec![-1.0, 0.3]);
        assert_eq!(g.node(11), vec![2.0, 0.7]);
        assert_eq!(g.spacing()[0], 1.0);
        let mut idx = [0; 2];
        g.unravel(7, &mut idx);
        assert_eq!(idx, [2, 1]);
        assert_eq!(g.ravel(&idx), 7);
    }

    #[test]
    fn grid_needs_two_nodes_per_axis() {
        assert!(Grid::uniform(Bounds::unit(1).unwrap(), 1).is_err());
    }

    #[test]
    fn bilinear_interpolation_reproduces_bilinear_data() {
        let g = Grid::uniform(Bounds::unit(2).unwrap(), 5).unwrap();
        let f = |x: &[f64]| 1.0 + 2.0 * x[0] - x[1] + 3.0 * x[0] * x[1];
        let data: Vec<f64> = (0..g.len()).map(|i| f(&g.node(i))).collect();
        for x in [[0.13, 0.77], [0.5, 0.5], [1.0, 0.0], [0.999, 0.001]] {
            let v = g.interpolate(&data, &x).unwrap();
            assert!((v - f(&x)).abs() < 1e-12);
        }
        assert!(g.interpolate(&data, &[1.1, 0.5]).is_none());
    }

    #[test]
    fn nested_refinement() {
        let b = Bounds::unit(1).unwrap();
        let g65 = Grid::uniform(b.clone(), 65).unwrap();
        let g129 = Grid::uniform(b.clone(), 129).unwrap();
        let g100 = Grid::uniform(b, 100).unwrap();
        assert!(g129.refines(&g65));
        assert!(!g100.refines(&g65));
    }
}
