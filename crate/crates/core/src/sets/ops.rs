use rayon::prelude::*;

use super::coefficients::CoefficientSet;
use super::hull::{dot, ConvexPolytope};
use super::point_set::{DiscreteSet, DEDUP_TOL};
use crate::error::{Error, Result};
use crate::numerics::{mc_volume, Bounds, MonteCarloEstimate, RandomSource};

pub fn support_function(k: &ConvexPolytope, u: &[f64]) -> f64 {
    k.support(u)
}

/// `{a x + b y : (a, b) in M, x in A, y in B}`, sorted and deduplicated.
pub fn m_add(a: &DiscreteSet, b: &DiscreteSet, m: &CoefficientSet) -> Result<DiscreteSet> {
    if a.dim() != b.dim() {
        return Err(Error::domain(format!(
            "M-addition of sets with dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let dim = a.dim();
    let chunks: Vec<Vec<f64>> = m
        .pairs()
        .par_iter()
        .map(|&(ca, cb)| {
            let mut coords = Vec::with_capacity(a.len() * b.len() * dim);
            // Zero coefficients collapse one factor to a single point.
            let xs: Vec<&[f64]> = if ca == 0.0 { vec![a.point(0)] } else { a.iter().collect() };
            let ys: Vec<&[f64]> = if cb == 0.0 { vec![b.point(0)] } else { b.iter().collect() };
            for x in &xs {
                for y in &ys {
                    coords.extend(x.iter().zip(y.iter()).map(|(u, v)| ca * u + cb * v));
                }
            }
            DiscreteSet::new(dim, coords)
                .map(|s| s.dedup(DEDUP_TOL).coords().to_vec())
                .unwrap_or_default()
        })
        .collect();
    let coords: Vec<f64> = chunks.into_iter().flatten().collect();
    Ok(DiscreteSet::new(dim, coords)?.dedup(DEDUP_TOL))
}

/// Pointwise `L_p` sum over a `lambda_resolution`-point grid of `[0, 1]`.
pub fn lp_pointwise_sum(
    a: &DiscreteSet,
    b: &DiscreteSet,
    p: f64,
    lambda_resolution: usize,
) -> Result<DiscreteSet> {
    m_add(a, b, &CoefficientSet::lp_curve(p, lambda_resolution)?)
}

/// Per-direction support values of an `L_p` sum.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportTable {
    pub directions: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl SupportTable {
    /// Membership in the halfspace intersection `{x : x . u <= h(u)}`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.directions
            .iter()
            .zip(&self.values)
            .all(|(u, h)| dot(u, x) <= h + tol)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (u, h) in self.directions.iter().zip(&self.values) {
            for c in u {
                out.push_str(&format!("{c},"));
            }
            out.push_str(&format!("{h}\n"));
        }
        out
    }
}

/// Supports below this are treated as zero rather than as the origin lying outside.
const SUPPORT_ROUNDOFF: f64 = 1e-12;

pub fn lp_support_sum(
    k: &ConvexPolytope,
    l: &ConvexPolytope,
    p: f64,
    directions: &[Vec<f64>],
) -> Result<SupportTable> {
    super::coefficients::check_p(p)?;
    if k.dim() != l.dim() {
        return Err(Error::domain("L_p sum of bodies with different dimensions"));
    }
    let mut values = Vec::with_capacity(directions.len());
    for (i, u) in directions.iter().enumerate() {
        if u.len() != k.dim() {
            return Err(Error::domain(format!("direction {i} has the wrong dimension")));
        }
        let (hk, hl) = (k.support(u), l.support(u));
        for (name, h) in [("first", hk), ("second", hl)] {
            if h < -SUPPORT_ROUNDOFF {
                return Err(Error::domain(format!(
                    "{name} body does not contain the origin: support {h} < 0 in direction {i} = {u:?}"
                )));
            }
        }
        let (hk, hl) = (hk.max(0.0), hl.max(0.0));
        values.push((hk.powf(p) + hl.powf(p)).powf(1.0 / p));
    }
    Ok(SupportTable {
        directions: directions.to_vec(),
        values,
    })
}

/// `count` unit vectors evenly spaced on the circle.
pub fn circle_directions(count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / count as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// Volume of `conv(A)`: exact in one and two dimensions, Monte Carlo otherwise.
pub fn volume_hull(a: &DiscreteSet, samples: usize, rng: &RandomSource) -> Result<MonteCarloEstimate> {
    let hull = ConvexPolytope::from_points(a)?;
    if let Some(v) = hull.exact_volume() {
        return Ok(MonteCarloEstimate::exact(v));
    }
    let (lo, hi) = hull.vertices().bounding_box();
    let tol = hull.membership_tol();
    mc_volume(|x| hull.contains(x, tol), &Bounds::new(lo, hi)?, samples, *rng)
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &DiscreteSet, b: &DiscreteSet) -> f64 {
    let one_way = |a: &DiscreteSet, b: &DiscreteSet| {
        a.iter()
            .map(|x| {
                b.iter()
                    .map(|y| x.iter().zip(y).map(|(u, v)| (u - v).powi(2)).sum::<f64>())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
            .sqrt()
    };
    one_way(a, b).max(one_way(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[f64]) -> DiscreteSet {
        DiscreteSet::new(1, v.to_vec()).unwrap()
    }

    #[test]
    fn classical_sum_of_singletons() {
        let s = m_add(&pts(&[0.0]), &pts(&[3.0]), &CoefficientSet::classical()).unwrap();
        assert_eq!(s.coords(), &[3.0]);
    }

    #[test]
    fn projection_pairs_give_union() {
        let m = CoefficientSet::explicit(vec![(1.0, 0.0), (0.0, 1.0)]).unwrap();
        let s = m_add(&pts(&[0.0, 1.0]), &pts(&[5.0, 7.0]), &m).unwrap();
        assert_eq!(s.coords(), &[0.0, 1.0, 5.0, 7.0]);
    }

    #[test]
    fn lp_sum_with_p1_is_minkowski() {
        let s = lp_pointwise_sum(&pts(&[2.0]), &pts(&[-0.5]), 1.0, 10).unwrap();
        assert_eq!(s.coords(), &[1.5]);
    }

    #[test]
    fn support_examples() {
        let sq = ConvexPolytope::from_points(&DiscreteSet::box_corners(&[0.0, 0.0], &[1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(support_function(&sq, &[1.0, 0.0]), 1.0);
        let seg = ConvexPolytope::from_points(&pts(&[-1.0, 1.0])).unwrap();
        assert_eq!(support_function(&seg, &[3.0]), 3.0);
    }

    #[test]
    fn lp_support_sum_segments() {
        let k = ConvexPolytope::from_points(&pts(&[0.0, 1.0])).unwrap();
        let l = ConvexPolytope::from_points(&pts(&[0.0, 2.0])).unwrap();
        let t = lp_support_sum(&k, &l, 2.0, &[vec![1.0], vec![-1.0]]).unwrap();
        assert!((t.values[0] - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(t.values[1], 0.0);

        let off = ConvexPolytope::from_points(&pts(&[1.0, 2.0])).unwrap();
        let err = lp_support_sum(&off, &l, 2.0, &[vec![1.0], vec![-1.0]]).unwrap_err();
        assert!(err.to_string().contains("direction 1"), "{err}");
    }

    #[test]
    fn exact_hull_volumes() {
        let r = RandomSource::new(0);
        let sq = DiscreteSet::box_corners(&[0.0, 0.0], &[2.0, 1.0]).unwrap();
        let v = volume_hull(&sq, 10, &r).unwrap();
        assert_eq!((v.estimate, v.stderr), (2.0, 0.0));
    }
}
