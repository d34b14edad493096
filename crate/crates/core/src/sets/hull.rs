//! Convex hulls of point clouds.
//!
//! The hull is computed in the affine span of the points: rank 0 and 1 are trivial,
//! rank 2 uses Andrew's monotone chain, and rank >= 3 enumerates candidate facets
//! through every `k`-subset of points. The last one is `O(m^{k+1})`, which is fine for
//! the small vertex sets this crate handles in three or more dimensions.

use nalgebra::DMatrix;

use super::point_set::{DiscreteSet, DEDUP_TOL};
use crate::error::{Error, Result};

/// Upper limit on candidate facet subsets for the brute-force hull.
const MAX_FACET_CANDIDATES: u128 = 5_000_000;

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Indices of the hull vertices of `pts`, counter-clockwise, collinear points dropped.
pub(crate) fn hull_2d_indices(pts: &[[f64; 2]]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| {
        pts[a][0]
            .total_cmp(&pts[b][0])
            .then(pts[a][1].total_cmp(&pts[b][1]))
    });
    order.dedup_by(|a, b| pts[*a] == pts[*b]);
    if order.len() < 3 {
        return order;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(order.iter())
        } else {
            Box::new(order.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && cross(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

pub fn convex_hull_2d(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    hull_2d_indices(pts).into_iter().map(|i| pts[i]).collect()
}

/// Signed area of a simple polygon (positive when counter-clockwise).
pub fn shoelace(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

/// Membership in a counter-clockwise convex polygon, `tol` in distance units.
pub(crate) fn point_in_polygon(poly: &[[f64; 2]], p: [f64; 2], tol: f64) -> bool {
    let n = poly.len();
    match n {
        0 => false,
        1 => (poly[0][0] - p[0]).abs() <= tol && (poly[0][1] - p[1]).abs() <= tol,
        2 => segment_distance(poly[0], poly[1], p) <= tol,
        _ => (0..n).all(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            cross(a, b, p) >= -tol * len
        }),
    }
}

fn segment_distance(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    ((a[0] + t * d[0] - p[0]).powi(2) + (a[1] + t * d[1] - p[1]).powi(2)).sqrt()
}

/// `normal . x <= offset`, with a unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal frame of the affine span of a point set.
#[derive(Clone, Debug)]
pub(crate) struct AffineFrame {
    pub origin: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

impl AffineFrame {
    pub fn of(points: &DiscreteSet) -> Self {
        let origin = points.point(0).to_vec();
        let scale = points
            .iter()
            .map(|p| p.iter().zip(&origin).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        let tol = 1e-10 * scale.max(f64::MIN_POSITIVE);
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for p in points.iter() {
            if basis.len() == points.dim() {
                break;
            }
            let mut v: Vec<f64> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
            // Two Gram-Schmidt sweeps keep the basis orthogonal to working precision.
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&v, b);
                    v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let norm = dot(&v, &v).sqrt();
            if norm > tol {
                basis.push(v.into_iter().map(|x| x / norm).collect());
            }
        }
        AffineFrame { origin, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let d: Vec<f64> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        self.basis.iter().map(|b| dot(&d, b)).collect()
    }

    /// Distance from `x` to the affine span.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let local = self.project(x);
        let mut back = self.origin.clone();
        for (c, b) in local.iter().zip(&self.basis) {
            back.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
        }
        back.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k.min(n) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    if k > n {
        0
    } else {
        acc
    }
}

/// Facets of the hull of full-dimensional points in `R^k`, `k >= 2`.
pub(crate) fn facets(points: &[Vec<f64>], k: usize, tol: f64) -> Result<Vec<Halfspace>> {
    let m = points.len();
    if binomial(m, k) > MAX_FACET_CANDIDATES {
        return Err(Error::domain(format!(
            "hull of {m} points in dimension {k} is too large for facet enumeration"
        )));
    }
    let mut out: Vec<Halfspace> = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    let mut minor = DMatrix::<f64>::zeros(k - 1, k - 1);
    loop {
        let base = &points[combo[0]];
        let diffs: Vec<Vec<f64>> = combo[1..]
            .iter()
            .map(|&j| points[j].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        // Generalized cross product of the k-1 edge vectors.
        let mut normal = vec![0.0; k];
        for (skip, nc) in normal.iter_mut().enumerate() {
            for (r, d) in diffs.iter().enumerate() {
                let mut c = 0;
                for (col, &v) in d.iter().enumerate() {
                    if col != skip {
                        minor[(r, c)] = v;
                        c += 1;
                    }
                }
            }
            let det = minor.clone().determinant();
            *nc = if skip % 2 == 0 { det } else { -det };
        }
        let norm = dot(&normal, &normal).sqrt();
        if norm > 1e-14 {
            normal.iter_mut().for_each(|v| *v /= norm);
            let offset = dot(&normal, base);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for p in points {
                let v = dot(&normal, p) - offset;
                lo = lo.min(v);
                hi = hi.max(v);
            }
            let candidate = if hi <= tol {
                Some(Halfspace { normal, offset })
            } else if lo >= -tol {
                Some(Halfspace {
                    normal: normal.iter().map(|v| -v).collect(),
                    offset: -offset,
                })
            } else {
                None
            };
            if let Some(h) = candidate {
                let dup = out.iter().any(|g| {
                    (g.offset - h.offset).abs() <= tol
                        && g.normal.iter().zip(&h.normal).all(|(a, b)| (a - b).abs() <= 1e-9)
                });
                if !dup {
                    out.push(h);
                }
            }
        }
        // next k-combination of 0..m
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if combo[i] < m - k + i {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[derive(Clone, Debug)]
enum LocalShape {
    Point,
    Segment { lo: f64, hi: f64 },
    Polygon(Vec<[f64; 2]>),
    Facets(Vec<Halfspace>),
}

/// Vertex-represented convex body. Stored vertices are exactly the extreme points of
/// the input cloud (after collapsing near-duplicates).
#[derive(Clone, Debug)]
pub struct ConvexPolytope {
    vertices: DiscreteSet,
    frame: AffineFrame,
    shape: LocalShape,
    scale: f64,
}

impl ConvexPolytope {
    pub fn from_points(points: &DiscreteSet) -> Result<Self> {
        let points = points.clone().dedup(DEDUP_TOL);
        let frame = AffineFrame::of(&points);
        let local: Vec<Vec<f64>> = points.iter().map(|p| frame.project(p)).collect();
        let scale = local
            .iter()
            .flat_map(|p| p.iter().map(|v| v.abs()))
            .fold(0.0, f64::max)
            .max(1.0);
        let tol = 1e-10 * scale;
        let (keep, shape): (Vec<usize>, LocalShape) = match frame.rank() {
            0 => (vec![0], LocalShape::Point),
            1 => {
                let (mut imin, mut imax) = (0, 0);
                for (i, p) in local.iter().enumerate() {
                    if p[0] < local[imin][0] {
                        imin = i;
                    }
                    if p[0] > local[imax][0] {
                        imax = i;
                    }
                }
                (
                    vec![imin, imax],
                    LocalShape::Segment {
                        lo: local[imin][0],
                        hi: local[imax][0],
                    },
                )
            }
            2 => {
                let pts: Vec<[f64; 2]> = local.iter().map(|p| [p[0], p[1]]).collect();
                let idx = hull_2d_indices(&pts);
                let poly = idx.iter().map(|&i| pts[i]).collect();
                (idx, LocalShape::Polygon(poly))
            }
            k => {
                let fs = facets(&local, k, tol)?;
                let idx = (0..local.len())
                    .filter(|&i| {
                        let active: Vec<&Halfspace> =
                            fs.iter().filter(|h| h.slack(&local[i]).abs() <= tol).collect();
                        if active.len() < k {
                            return false;
                        }
                        let normals = DMatrix::from_fn(active.len(), k, |r, c| active[r].normal[c]);
                        normals.rank(1e-9) == k
                    })
                    .collect();
                (idx, LocalShape::Facets(fs))
            }
        };
        let mut keep = keep;
        keep.sort_unstable();
        keep.dedup();
        let verts: Vec<&[f64]> = keep.iter().map(|&i| points.point(i)).collect();
        Ok(ConvexPolytope {
            vertices: DiscreteSet::from_points(&verts)?,
            frame,
            shape,
            scale,
        })
    }

    pub fn vertices(&self) -> &DiscreteSet {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.dim()
    }

    /// Dimension of the affine span.
    pub fn affine_dim(&self) -> usize {
        self.frame.rank()
    }

    /// `h_K(u) = max_v u . v`.
    pub fn support(&self, u: &[f64]) -> f64 {
        support_of(&self.vertices, u)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() || self.frame.residual(x) > tol {
            return false;
        }
        let p = self.frame.project(x);
        match &self.shape {
            LocalShape::Point => true,
            LocalShape::Segment { lo, hi } => p[0] >= lo - tol && p[0] <= hi + tol,
            LocalShape::Polygon(poly) => point_in_polygon(poly, [p[0], p[1]], tol),
            LocalShape::Facets(fs) => fs.iter().all(|h| h.slack(&p) >= -tol),
        }
    }

    /// Exact volume when available: zero for lower-dimensional bodies, length in
    /// `R^1`, shoelace area in `R^2`. `None` in three or more dimensions.
    pub fn exact_volume(&self) -> Option<f64> {
        if self.affine_dim() < self.dim() {
            return Some(0.0);
        }
        match &self.shape {
            LocalShape::Segment { lo, hi } => Some(hi - lo),
            LocalShape::Polygon(poly) => Some(shoelace(poly).abs()),
            LocalShape::Point => Some(0.0),
            LocalShape::Facets(_) => None,
        }
    }

    pub(crate) fn membership_tol(&self) -> f64 {
        1e-10 * self.scale
    }
}

pub(crate) fn support_of(points: &DiscreteSet, u: &[f64]) -> f64 {
    points.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max)
}
