//! Discrete sup-convolution `f (+)_{M,s} g`.
//!
//! For an output node `z` and a pair `(a, b)`, every support node `x` of `f` is paired
//! with the exact solution `y = (z - a x) / b`, and symmetrically every support node
//! `y` of `g` with `x = (z - b y) / a`. The off-node factor is interpolated. In one
//! dimension this is the exact maximum over `x` for the interpolated `f^{1/s}` and
//! `g^{1/s}`: the objective is piecewise linear in `x`, so it peaks at a node of one
//! of the two grids. The result is never above the true sup-convolution of the
//! interpolants.

use rayon::prelude::*;

use super::grid_fn::GridFunction;
use super::param::SParam;
use crate::error::{Error, Result};
use crate::numerics::{Bounds, Grid, EDGE_SLACK};
use crate::sets::CoefficientSet;

/// Relative slack when checking that an output grid covers the M-sum of supports.
const COVER_SLACK: f64 = 1e-9;

/// Bounding box of `supp f (+)_M supp g`, computed from the support boxes.
pub fn m_sum_bounds(f: &GridFunction, g: &GridFunction, m: &CoefficientSet) -> Result<Bounds> {
    check_dims(f, g)?;
    let sf = f.support_bounds().ok_or_else(|| Error::domain("first function has empty support"))?;
    let sg = g.support_bounds().ok_or_else(|| Error::domain("second function has empty support"))?;
    let dim = f.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for &(a, b) in m.pairs() {
        if a == 0.0 && b == 0.0 {
            continue;
        }
        for k in 0..dim {
            lo[k] = lo[k].min(a * sf.lo()[k] + b * sg.lo()[k]);
            hi[k] = hi[k].max(a * sf.hi()[k] + b * sg.hi()[k]);
        }
    }
    Bounds::new(lo, hi)
}

/// A uniform grid over [`m_sum_bounds`] with `nodes_per_axis` nodes per axis.
pub fn fit_out_grid(
    f: &GridFunction,
    g: &GridFunction,
    m: &CoefficientSet,
    nodes_per_axis: usize,
) -> Result<Grid> {
    Grid::uniform(m_sum_bounds(f, g, m)?, nodes_per_axis)
}

/// `max {a u + b v : a^q + b^q = 1, a, b >= 0}`; `u + v` when `p = 1`.
fn lp_reach(u: f64, v: f64, p: f64) -> f64 {
    if p == 1.0 {
        u + v
    } else if u <= 0.0 || v <= 0.0 {
        // One endpoint pair, (1, 0) or (0, 1), is optimal.
        u.max(v)
    } else {
        (u.powf(p) + v.powf(p)).powf(1.0 / p)
    }
}

/// Bounding box of `supp f +_p supp g` over the whole coefficient curve, not just
/// a sample of it. Grids fitted to it do not move when the coefficient grid is
/// refined.
pub fn lp_sum_bounds(f: &GridFunction, g: &GridFunction, p: f64) -> Result<Bounds> {
    check_dims(f, g)?;
    crate::sets::check_p(p)?;
    let sf = f.support_bounds().expect("support checked");
    let sg = g.support_bounds().expect("support checked");
    let dim = f.dim();
    let hi = (0..dim).map(|k| lp_reach(sf.hi()[k], sg.hi()[k], p)).collect();
    let lo = (0..dim).map(|k| -lp_reach(-sf.lo()[k], -sg.lo()[k], p)).collect();
    Bounds::new(lo, hi)
}

/// A uniform grid over [`lp_sum_bounds`].
pub fn fit_lp_out_grid(f: &GridFunction, g: &GridFunction, p: f64, nodes_per_axis: usize) -> Result<Grid> {
    Grid::uniform(lp_sum_bounds(f, g, p)?, nodes_per_axis)
}

fn check_dims(f: &GridFunction, g: &GridFunction) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::domain(format!(
            "sup-convolution of functions on R^{} and R^{}",
            f.dim(),
            g.dim()
        )));
    }
    f.require_support("first function")?;
    g.require_support("second function")
}

fn check_out(f: &GridFunction, g: &GridFunction, m: &CoefficientSet, out: &Grid) -> Result<()> {
    check_dims(f, g)?;
    if out.dim() != f.dim() {
        return Err(Error::domain("output grid has the wrong dimension"));
    }
    let need = m_sum_bounds(f, g, m)?;
    if !out.bounds().covers(&need, COVER_SLACK) {
        return Err(Error::config(format!(
            "output box {:?}..{:?} does not cover the M-sum of supports {:?}..{:?}",
            out.bounds().lo(),
            out.bounds().hi(),
            need.lo(),
            need.hi()
        )));
    }
    Ok(())
}

struct Factor<'a> {
    f: &'a GridFunction,
    roots: Vec<f64>,
    mask: Vec<bool>,
    support: Bounds,
}

impl<'a> Factor<'a> {
    fn new(f: &'a GridFunction, s: f64) -> Self {
        Factor {
            f,
            roots: f.roots(s),
            mask: f.closure_mask(),
            support: f.support_bounds().expect("support checked"),
        }
    }

    /// `f^{1/s}` at an arbitrary point, or `None` outside the support.
    fn root_at(&self, x: &[f64]) -> Option<f64> {
        if self.f.in_support(x) {
            self.f.grid().interpolate(&self.roots, x)
        } else {
            None
        }
    }

    /// Node index range along `axis` covering `[lo, hi]` intersected with the support.
    fn node_range(&self, axis: usize, lo: f64, hi: f64) -> Option<(usize, usize)> {
        let g = self.f.grid();
        let lo = lo.max(self.support.lo()[axis]);
        let hi = hi.min(self.support.hi()[axis]);
        let h = g.spacing()[axis];
        let first = ((lo - g.bounds().lo()[axis]) / h - EDGE_SLACK).ceil().max(0.0);
        let last = ((hi - g.bounds().lo()[axis]) / h + EDGE_SLACK).floor();
        let max = (g.shape()[axis] - 1) as f64;
        if first > last || last < 0.0 || first > max {
            return None;
        }
        Some((first as usize, last.min(max) as usize))
    }
}

/// Best `a u(x)^{1/s} + b v(y)^{1/s}` over `z = a x + b y` with `x` a support node of
/// `u` and `y` solved exactly (`b > 0`, `a > 0`).
fn solve_pass(u: &Factor, v: &Factor, a: f64, b: f64, z: &[f64], idx: &mut [usize], x: &mut [f64], y: &mut [f64]) -> f64 {
    let grid = u.f.grid();
    let dim = grid.dim();
    let mut lo = [0usize; 8];
    let mut hi = [0usize; 8];
    let (mut lo_v, mut hi_v);
    let (lo, hi): (&mut [usize], &mut [usize]) = if dim <= 8 {
        (&mut lo[..dim], &mut hi[..dim])
    } else {
        lo_v = vec![0; dim];
        hi_v = vec![0; dim];
        (&mut lo_v[..], &mut hi_v[..])
    };
    for k in 0..dim {
        // y_k in [v.lo, v.hi]  <=>  x_k in [(z_k - b v.hi) / a, (z_k - b v.lo) / a]
        let xlo = (z[k] - b * v.support.hi()[k]) / a;
        let xhi = (z[k] - b * v.support.lo()[k]) / a;
        match u.node_range(k, xlo, xhi) {
            Some((l, h)) => {
                lo[k] = l;
                hi[k] = h;
            }
            None => return f64::NEG_INFINITY,
        }
    }
    let mut best = f64::NEG_INFINITY;
    idx.copy_from_slice(lo);
    loop {
        let flat = grid.ravel(idx);
        if u.mask[flat] {
            for k in 0..dim {
                x[k] = grid.coord(k, idx[k]);
                y[k] = (z[k] - a * x[k]) / b;
            }
            if let Some(r) = v.root_at(y) {
                best = best.max(a * u.roots[flat] + b * r);
            }
        }
        let mut k = dim;
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            if idx[k] < hi[k] {
                idx[k] += 1;
                break;
            }
            idx[k] = lo[k];
        }
    }
}

/// `[f (+)_{M,s} g]` sampled on the nodes of `out`.
pub fn sup_conv_m(
    f: &GridFunction,
    g: &GridFunction,
    m: &CoefficientSet,
    s: SParam,
    out: &Grid,
) -> Result<GridFunction> {
    check_out(f, g, m, out)?;
    let sv = s.value();
    let (ff, gg) = (Factor::new(f, sv), Factor::new(g, sv));
    let dim = out.dim();
    let values: Vec<f64> = (0..out.len())
        .into_par_iter()
        .map_init(
            || (vec![0.0; dim], vec![0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]),
            |(z, idx, x, y, w), node| {
                out.node_into(node, z);
                let mut best = f64::NEG_INFINITY;
                for &(a, b) in m.pairs() {
                    let v = if a == 0.0 && b == 0.0 {
                        continue;
                    } else if a == 0.0 {
                        w.iter_mut().zip(z.iter()).for_each(|(w, z)| *w = z / b);
                        gg.root_at(w).map_or(f64::NEG_INFINITY, |r| b * r)
                    } else if b == 0.0 {
                        w.iter_mut().zip(z.iter()).for_each(|(w, z)| *w = z / a);
                        ff.root_at(w).map_or(f64::NEG_INFINITY, |r| a * r)
                    } else {
                        solve_pass(&ff, &gg, a, b, z, idx, x, y).max(solve_pass(&gg, &ff, b, a, z, idx, y, x))
                    };
                    best = best.max(v);
                }
                if best > 0.0 {
                    if sv == 1.0 {
                        best
                    } else {
                        best.powf(sv)
                    }
                } else {
                    0.0
                }
            },
        )
        .collect();
    GridFunction::new(out.clone(), values)
}

/// `f (+)_{p,s} g`: [`sup_conv_m`] over the sampled `L_p` coefficient curve.
pub fn sup_conv_p(
    f: &GridFunction,
    g: &GridFunction,
    p: f64,
    s: SParam,
    lambda_resolution: usize,
    out: &Grid,
) -> Result<GridFunction> {
    sup_conv_m(f, g, &CoefficientSet::lp_curve(p, lambda_resolution)?, s, out)
}

/// Reference implementation: every pair of support nodes, each result credited to
/// the output node nearest to `a x + b y`. Quadratic in the support sizes; meant for
/// cross-checking [`sup_conv_m`] on small inputs.
pub fn sup_conv_m_brute(
    f: &GridFunction,
    g: &GridFunction,
    m: &CoefficientSet,
    s: SParam,
    out: &Grid,
) -> Result<GridFunction> {
    check_out(f, g, m, out)?;
    let sv = s.value();
    let (rf, rg) = (f.roots(sv), g.roots(sv));
    let (mf, mg) = (f.closure_mask(), g.closure_mask());
    let dim = out.dim();
    let mut best = vec![0.0f64; out.len()];
    let (mut x, mut y, mut z) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut idx = vec![0usize; dim];
    for &(a, b) in m.pairs() {
        for i in (0..f.grid().len()).filter(|&i| mf[i]) {
            f.grid().node_into(i, &mut x);
            for j in (0..g.grid().len()).filter(|&j| mg[j]) {
                g.grid().node_into(j, &mut y);
                for k in 0..dim {
                    z[k] = a * x[k] + b * y[k];
                }
                let inside = (0..dim).all(|k| match out.locate(k, z[k]) {
                    Some(t) => {
                        idx[k] = t.round() as usize;
                        true
                    }
                    None => false,
                });
                if inside {
                    let node = out.ravel(&idx);
                    best[node] = best[node].max(a * rf[i] + b * rg[j]);
                }
            }
        }
    }
    GridFunction::new(out.clone(), best.into_iter().map(|r| r.powf(sv)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_fn(Grid::uniform(Bounds::interval(lo, hi).unwrap(), n).unwrap(), |x| f(x[0])).unwrap()
    }

    fn tent(n: usize) -> GridFunction {
        line(-1.0, 1.0, n, |x| (1.0 - x.abs()).max(0.0))
    }

    #[test]
    fn projection_pair_resamples_f() {
        let f = tent(21);
        let g = line(5.0, 6.0, 5, |_| 3.0);
        let m = CoefficientSet::explicit(vec![(1.0, 0.0)]).unwrap();
        let out = Grid::uniform(Bounds::interval(-2.0, 2.0).unwrap(), 41).unwrap();
        let h = sup_conv_m(&f, &g, &m, SParam::new(1.0).unwrap(), &out).unwrap();
        assert_eq!(h, f.resample(&out));
    }

    #[test]
    fn classical_sup_convolution_of_tents() {
        let f = tent(21);
        let m = CoefficientSet::classical();
        let out = fit_out_grid(&f, &f, &m, 41).unwrap();
        let s = SParam::new(1.0).unwrap();
        let h = sup_conv_m(&f, &f, &m, s, &out).unwrap();
        assert!((h.eval(&[0.0]) - 2.0).abs() < 1e-12);
        // h(z) = 2 - |z| on [-2, 2]; the double loop agrees node for node here
        // because every a x + b y lands on an output node.
        let brute = sup_conv_m_brute(&f, &f, &m, s, &out).unwrap();
        for (i, (u, v)) in h.values().iter().zip(brute.values()).enumerate() {
            let z = out.node(i)[0];
            assert!((u - (2.0 - z.abs())).abs() < 1e-12 && (u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn lp_sum_of_unit_indicators_is_flat() {
        let f = line(0.0, 1.0, 33, |_| 1.0);
        let s = SParam::new(1.0).unwrap();
        let m = CoefficientSet::lp_curve(2.0, 129).unwrap();
        let out = fit_out_grid(&f, &f, &m, 65).unwrap();
        assert!((out.bounds().hi()[0] - 2f64.sqrt()).abs() < 1e-12);
        let h = sup_conv_m(&f, &f, &m, s, &out).unwrap();
        assert!(h.values().iter().all(|v| (v - 2f64.sqrt()).abs() < 1e-12));
        assert!((h.integral() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_uncovered_output() {
        let f = tent(11);
        let out = Grid::uniform(Bounds::interval(-1.0, 1.0).unwrap(), 11).unwrap();
        let err = sup_conv_m(&f, &f, &CoefficientSet::classical(), SParam::new(1.0).unwrap(), &out).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        let zero = line(0.0, 1.0, 3, |_| 0.0);
        assert!(matches!(
            sup_conv_m(&f, &zero, &CoefficientSet::classical(), SParam::new(1.0).unwrap(), &out),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn two_dimensional_boxes() {
        let b = Bounds::unit(2).unwrap();
        let f = GridFunction::indicator(b.clone(), 9, 1.0).unwrap();
        let g = GridFunction::indicator(b.scaled(2.0).unwrap(), 9, 1.0).unwrap();
        let m = CoefficientSet::minkowski(0.5).unwrap();
        let out = fit_out_grid(&f, &g, &m, 13).unwrap();
        assert_eq!(out.bounds(), &Bounds::new(vec![0.0; 2], vec![1.5; 2]).unwrap());
        let h = sup_conv_m(&f, &g, &m, SParam::new(1.0).unwrap(), &out).unwrap();
        assert!(h.values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }
}
