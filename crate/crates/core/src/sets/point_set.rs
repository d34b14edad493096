use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Tolerance used when collapsing near-duplicate points.
pub const DEDUP_TOL: f64 = 1e-12;

/// A finite, nonempty point cloud in `R^n`, stored flat (row per point).
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteSet {
    dim: usize,
    coords: Vec<f64>,
}

impl DiscreteSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("point set dimension must be >= 1"));
        }
        if coords.is_empty() {
            return Err(Error::domain("point set must be nonempty"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::domain(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::domain(format!("point {} has a non-finite coordinate", i / dim)));
        }
        Ok(DiscreteSet { dim, coords })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = points
            .first()
            .map(|p| p.as_ref().len())
            .ok_or_else(|| Error::domain("point set must be nonempty"))?;
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::domain(format!(
                    "point {i} has dimension {} but point 0 has {dim}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, coords)
    }

    pub fn singleton(point: &[f64]) -> Result<Self> {
        Self::new(point.len(), point.to_vec())
    }

    /// `count` evenly spaced points of `[lo, hi]`, endpoints included.
    pub fn interval(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 || !(lo <= hi) {
            return Err(Error::domain("interval sample needs count >= 2 and lo <= hi"));
        }
        let coords = (0..count)
            .map(|i| {
                if i + 1 == count {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect();
        Self::new(1, coords)
    }

    /// The `2^n` corners of the box `[lo, hi]`.
    pub fn box_corners(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::domain("box corners need matching nonempty bounds"));
        }
        let n = lo.len();
        let mut coords = Vec::with_capacity(n << n);
        for mask in 0..(1usize << n) {
            for axis in 0..n {
                coords.push(if mask >> (n - 1 - axis) & 1 == 1 { hi[axis] } else { lo[axis] });
            }
        }
        Self::new(n, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.point(0).to_vec();
        let mut hi = lo.clone();
        for p in self.iter() {
            for axis in 0..self.dim {
                lo[axis] = lo[axis].min(p[axis]);
                hi[axis] = hi[axis].max(p[axis]);
            }
        }
        (lo, hi)
    }

    pub fn translated(&self, offset: &[f64]) -> Result<Self> {
        if offset.len() != self.dim {
            return Err(Error::domain("translation has the wrong dimension"));
        }
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| c + offset[i % self.dim])
            .collect();
        Self::new(self.dim, coords)
    }

    /// Sorts lexicographically and drops points within `tol` (max-norm) of the
    /// previously kept point.
    pub fn dedup(self, tol: f64) -> Self {
        let dim = self.dim;
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by(|&a, &b| lex_cmp(self.point(a), self.point(b)));
        let mut coords: Vec<f64> = Vec::with_capacity(self.coords.len());
        for &i in &order {
            let p = self.point(i);
            let keep = match coords.len().checked_sub(dim) {
                Some(start) => coords[start..].iter().zip(p).any(|(a, b)| (a - b).abs() > tol),
                None => true,
            };
            if keep {
                coords.extend_from_slice(p);
            }
        }
        DiscreteSet { dim, coords }
    }

    /// Whether some point of the set is within `tol` (max-norm) of `x`.
    pub fn contains_point(&self, x: &[f64], tol: f64) -> bool {
        self.iter()
            .any(|p| p.iter().zip(x).all(|(a, b)| (a - b).abs() <= tol))
    }

    /// Point-set inclusion up to `tol`. `other` is sorted once, then each point is
    /// looked up by its first coordinate.
    pub fn is_subset_of(&self, other: &DiscreteSet, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let mut sorted: Vec<&[f64]> = other.iter().collect();
        sorted.sort_unstable_by(|a, b| lex_cmp(a, b));
        self.iter().all(|p| {
            let start = sorted.partition_point(|q| q[0] < p[0] - tol);
            sorted[start..]
                .iter()
                .take_while(|q| q[0] <= p[0] + tol)
                .any(|q| q.iter().zip(p).all(|(a, b)| (a - b).abs() <= tol))
        })
    }

    pub fn union(&self, other: &DiscreteSet) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::domain("union of point sets with different dimensions"));
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(DiscreteSet { dim: self.dim, coords })
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(DiscreteSet::new(1, vec![]).is_err());
        assert!(DiscreteSet::new(2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(DiscreteSet::new(1, vec![f64::NAN]).is_err());
        assert!(DiscreteSet::from_points(&[vec![0.0], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn dedup_collapses_near_duplicates() {
        let s = DiscreteSet::new(1, vec![1.0, 0.0, 1.0 + 1e-14, 0.5, 0.0]).unwrap();
        let d = s.dedup(DEDUP_TOL);
        assert_eq!(d.coords(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn corners_of_unit_square() {
        let c = DiscreteSet::box_corners(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.contains_point(&[1.0, 0.0], 0.0));
        assert!(c.contains_point(&[0.0, 1.0], 0.0));
    }

    #[test]
    fn subset_with_tolerance() {
        let a = DiscreteSet::interval(0.0, 1.0, 5).unwrap();
        let b = DiscreteSet::interval(0.0, 1.0, 9).unwrap();
        assert!(a.is_subset_of(&b, 1e-12));
        assert!(!b.is_subset_of(&a, 1e-12));
    }
}
