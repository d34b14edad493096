use serde::{Deserialize, Serialize};

use super::hull::{convex_hull_2d, point_in_polygon};
use crate::error::{Error, Result};

/// How a [`CoefficientSet`] was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CoefficientKind {
    Explicit,
    /// `{((1-t)^{1/q}, t^{1/q}) : t in grid}` with `q` the Holder conjugate of `p`.
    LpCurve { p: f64, resolution: usize },
    /// The single pair `(1 - lambda, lambda)`.
    Minkowski { lambda: f64 },
    /// The single pair `(1, 1)`.
    Classical,
}

/// Finite sample of a coefficient set `M` in the closed positive quadrant.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    pairs: Vec<(f64, f64)>,
    kind: CoefficientKind,
}

/// `1/q = 1 - 1/p`; zero for `p = 1`.
pub fn inverse_conjugate(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(1.0 - 1.0 / p)
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain(format!("p must be >= 1, got {p}")));
    }
    Ok(())
}

/// `resolution` uniform points of `[0, 1]`, with `1/2` inserted when the uniform grid
/// misses it. Endpoints are exact.
pub fn lambda_grid(resolution: usize) -> Result<Vec<f64>> {
    if resolution < 2 {
        return Err(Error::domain(format!("lambda resolution must be >= 2, got {resolution}")));
    }
    let last = (resolution - 1) as f64;
    let mut grid: Vec<f64> = (0..resolution)
        .map(|i| if i + 1 == resolution { 1.0 } else { i as f64 / last })
        .collect();
    if resolution.is_multiple_of(2) {
        let at = grid.partition_point(|&t| t < 0.5);
        grid.insert(at, 0.5);
    }
    Ok(grid)
}

impl CoefficientSet {
    pub fn explicit(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::domain("coefficient set must be nonempty"));
        }
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
                return Err(Error::domain(format!(
                    "coefficient pair {i} = ({a}, {b}) is not in the closed positive quadrant"
                )));
            }
        }
        if pairs.iter().all(|&(a, b)| a == 0.0 && b == 0.0) {
            return Err(Error::domain("coefficient set {(0,0)} is not allowed"));
        }
        Ok(CoefficientSet {
            pairs,
            kind: CoefficientKind::Explicit,
        })
    }

    pub fn classical() -> Self {
        CoefficientSet {
            pairs: vec![(1.0, 1.0)],
            kind: CoefficientKind::Classical,
        }
    }

    pub fn minkowski(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain(format!("Minkowski weight must lie in [0, 1], got {lambda}")));
        }
        Ok(CoefficientSet {
            pairs: vec![(1.0 - lambda, lambda)],
            kind: CoefficientKind::Minkowski { lambda },
        })
    }

    /// Sample of `{(a, b) : a^q + b^q = 1, a, b >= 0}`. For `p = 1` this is `{(1, 1)}`,
    /// so the `0^0` corner cases of the parametrization never arise.
    pub fn lp_curve(p: f64, resolution: usize) -> Result<Self> {
        let inv_q = inverse_conjugate(p)?;
        let ts = lambda_grid(resolution)?;
        let kind = CoefficientKind::LpCurve { p, resolution };
        if inv_q == 0.0 {
            return Ok(CoefficientSet {
                pairs: vec![(1.0, 1.0)],
                kind,
            });
        }
        let q = 1.0 / inv_q;
        let mut pairs = Vec::with_capacity(ts.len());
        for t in ts {
            let (a, b) = ((1.0 - t).powf(inv_q), t.powf(inv_q));
            let residual = a.powf(q) + b.powf(q) - 1.0;
            if residual.abs() > 1e-12 {
                return Err(Error::domain(format!(
                    "L_p curve point at t = {t} is off the curve by {residual:e}"
                )));
            }
            pairs.push((a, b));
        }
        Ok(CoefficientSet { pairs, kind })
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn kind(&self) -> &CoefficientKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Largest parameter gap of an L_p curve sample (zero for single-pair sets).
    pub fn parameter_spacing(&self) -> f64 {
        match self.kind {
            CoefficientKind::LpCurve { resolution, .. } if self.pairs.len() > 1 => 1.0 / (resolution - 1) as f64,
            _ => 0.0,
        }
    }

    pub fn swapped(&self) -> Self {
        CoefficientSet {
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
            kind: CoefficientKind::Explicit,
        }
    }

    /// Closed under `(a, b) -> (b, a)` up to `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.pairs.iter().all(|&(a, b)| {
            self.pairs
                .iter()
                .any(|&(c, d)| (c - b).abs() <= tol && (d - a).abs() <= tol)
        })
    }

    pub fn max_sum(&self) -> f64 {
        self.pairs.iter().map(|(a, b)| a + b).fold(0.0, f64::max)
    }

    fn hull_polygon(&self) -> Vec<[f64; 2]> {
        let pts: Vec<[f64; 2]> = self.pairs.iter().map(|&(a, b)| [a, b]).collect();
        convex_hull_2d(&pts)
    }

    /// A sample of the convex hull of `self`: the original pairs plus every point of
    /// the square lattice of step `spacing` lying inside the hull polygon.
    pub fn filled_hull(&self, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::domain("hull sampling step must be positive"));
        }
        let poly = self.hull_polygon();
        let mut pairs = self.pairs.clone();
        if poly.len() >= 3 {
            let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for v in &poly {
                for k in 0..2 {
                    lo[k] = lo[k].min(v[k]);
                    hi[k] = hi[k].max(v[k]);
                }
            }
            let na = ((hi[0] - lo[0]) / spacing).floor() as usize;
            let nb = ((hi[1] - lo[1]) / spacing).floor() as usize;
            for i in 0..=na {
                for j in 0..=nb {
                    let p = [lo[0] + i as f64 * spacing, lo[1] + j as f64 * spacing];
                    if point_in_polygon(&poly, p, 1e-12) {
                        pairs.push((p[0].max(0.0), p[1].max(0.0)));
                    }
                }
            }
        }
        Self::explicit(pairs)
    }

    /// Relative distance from the hull of `self` to `self`: the largest gap between a
    /// point of the hull polygon (probed on a 64 x 64 lattice and along its edges) and
    /// the nearest pair, divided by the hull diameter. Zero for a single point.
    pub fn convexity_defect(&self) -> f64 {
        let poly = self.hull_polygon();
        let diam = poly
            .iter()
            .flat_map(|a| poly.iter().map(move |b| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()))
            .fold(0.0, f64::max);
        if diam == 0.0 {
            return 0.0;
        }
        let mut probes: Vec<[f64; 2]> = Vec::new();
        for (i, a) in poly.iter().enumerate() {
            let b = poly[(i + 1) % poly.len()];
            for k in 0..=64 {
                let t = k as f64 / 64.0;
                probes.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        if poly.len() >= 3 {
            let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for v in &poly {
                for k in 0..2 {
                    lo[k] = lo[k].min(v[k]);
                    hi[k] = hi[k].max(v[k]);
                }
            }
            for i in 0..=64 {
                for j in 0..=64 {
                    let p = [
                        lo[0] + (hi[0] - lo[0]) * i as f64 / 64.0,
                        lo[1] + (hi[1] - lo[1]) * j as f64 / 64.0,
                    ];
                    if point_in_polygon(&poly, p, 1e-12) {
                        probes.push(p);
                    }
                }
            }
        }
        let gap = probes
            .iter()
            .map(|p| {
                self.pairs
                    .iter()
                    .map(|&(a, b)| ((a - p[0]).powi(2) + (b - p[1]).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        gap / diam
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_grid_contains_landmarks() {
        for r in [2, 3, 4, 10, 1000, 1001] {
            let g = lambda_grid(r).unwrap();
            assert_eq!(g[0], 0.0);
            assert_eq!(*g.last().unwrap(), 1.0);
            assert!(g.contains(&0.5), "r = {r}");
            assert!(g.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(lambda_grid(1).is_err());
    }

    #[test]
    fn lp_curve_lies_on_the_curve_and_is_symmetric() {
        let m = CoefficientSet::lp_curve(2.0, 1001).unwrap();
        assert_eq!(m.len(), 1001);
        assert!(m.pairs().iter().all(|&(a, b)| (a * a + b * b - 1.0).abs() < 1e-12));
        assert!(m.is_symmetric(1e-12));
        assert!(m.pairs().contains(&(1.0, 0.0)));
        assert!(m.pairs().contains(&(0.0, 1.0)));
        assert_eq!(CoefficientSet::lp_curve(1.0, 10).unwrap().pairs(), &[(1.0, 1.0)]);
        assert!(CoefficientSet::lp_curve(0.5, 10).is_err());
    }

    #[test]
    fn explicit_validation() {
        assert!(CoefficientSet::explicit(vec![]).is_err());
        assert!(CoefficientSet::explicit(vec![(0.0, 0.0)]).is_err());
        assert!(CoefficientSet::explicit(vec![(-1.0, 1.0)]).is_err());
        assert!(CoefficientSet::explicit(vec![(0.0, 0.0), (1.0, 0.0)]).is_ok());
    }

    #[test]
    fn convexity_defect_separates_curves_from_filled_hulls() {
        let two = CoefficientSet::explicit(vec![(1.0, 0.0), (0.0, 1.0)]).unwrap();
        assert!(two.convexity_defect() > 0.4);
        let curve = CoefficientSet::lp_curve(2.0, 129).unwrap();
        assert!(curve.convexity_defect() > 0.1);
        let filled = curve.filled_hull(0.01).unwrap();
        assert!(filled.convexity_defect() < 0.02, "{}", filled.convexity_defect());
        assert_eq!(CoefficientSet::classical().convexity_defect(), 0.0);
    }
}
