use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid_fn::GridFunction;
use super::param::SParam;
use crate::error::Result;
use crate::numerics::RandomSource;

/// Weights tried on every sampled segment.
const LAMBDAS: [f64; 7] = [0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875];
/// Node pairs sampled in two or more dimensions.
const SAMPLED_PAIRS: usize = 100_000;
const SAMPLING_SEED: u64 = 0x5eed_c0ca;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcavityCheck {
    pub concave: bool,
    pub support_convex: bool,
    /// Largest `chord - value` over the sampled points, in units of `f^{1/s}`.
    /// Negative when every sample lies strictly above its chord.
    pub worst_violation: f64,
    pub pairs_checked: usize,
}

/// Tests whether `f^{1/s}` is concave on a convex support.
///
/// Support convexity is checked along every grid line and, in two or more
/// dimensions, along sampled segments between positive nodes. Concavity compares
/// the interpolated `f^{1/s}` at `(1-t) x + t y` with the chord for every pair of
/// positive nodes in one dimension and for sampled pairs otherwise.
pub fn is_s_concave(f: &GridFunction, s: SParam, tol: f64) -> Result<ConcavityCheck> {
    f.require_support("function under concavity test")?;
    let grid = f.grid();
    let roots = f.roots(s.value());
    let positive: Vec<usize> = (0..grid.len()).filter(|&i| f.values()[i] > 0.0).collect();
    let mut support_convex = lines_are_contiguous(f);

    let pairs: Vec<(usize, usize)> = if grid.dim() == 1 {
        (0..positive.len())
            .flat_map(|i| (i + 1..positive.len()).map(move |j| (i, j)))
            .map(|(i, j)| (positive[i], positive[j]))
            .collect()
    } else {
        let mut rng = RandomSource::new(SAMPLING_SEED).rng();
        (0..SAMPLED_PAIRS)
            .map(|_| {
                (
                    positive[rng.random_range(0..positive.len())],
                    positive[rng.random_range(0..positive.len())],
                )
            })
            .collect()
    };

    let dim = grid.dim();
    let (worst, segments_ok) = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (grid.node(i), grid.node(j));
            let mut z = vec![0.0; dim];
            let mut worst = f64::NEG_INFINITY;
            let mut inside = true;
            for t in LAMBDAS {
                for k in 0..dim {
                    z[k] = (1.0 - t) * x[k] + t * y[k];
                }
                if dim > 1 && !f.in_support(&z) {
                    inside = false;
                }
                let chord = (1.0 - t) * roots[i] + t * roots[j];
                let value = grid.interpolate(&roots, &z).unwrap_or(0.0);
                worst = worst.max(chord - value);
            }
            (worst, inside)
        })
        .reduce(|| (f64::NEG_INFINITY, true), |a, b| (a.0.max(b.0), a.1 && b.1));
    support_convex &= segments_ok;
    // A single positive node has no pairs; it is trivially concave.
    let worst = if pairs.is_empty() { 0.0 } else { worst };
    Ok(ConcavityCheck {
        concave: support_convex && worst <= tol,
        support_convex,
        worst_violation: worst,
        pairs_checked: pairs.len(),
    })
}

/// Along every grid line the positive nodes form one contiguous run.
fn lines_are_contiguous(f: &GridFunction) -> bool {
    let grid = f.grid();
    let dim = grid.dim();
    let mut idx = vec![0; dim];
    for axis in 0..dim {
        let len = grid.shape()[axis];
        for flat in 0..grid.len() {
            grid.unravel(flat, &mut idx);
            if idx[axis] != 0 {
                continue;
            }
            let mut runs = 0;
            let mut prev = false;
            for i in 0..len {
                idx[axis] = i;
                let pos = f.values()[grid.ravel(&idx)] > 0.0;
                if pos && !prev {
                    runs += 1;
                }
                prev = pos;
            }
            if runs > 1 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Bounds, Grid};

    fn on_line(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_fn(Grid::uniform(Bounds::interval(lo, hi).unwrap(), n).unwrap(), |x| f(x[0])).unwrap()
    }

    #[test]
    fn indicator_and_tent_are_concave() {
        let s1 = SParam::new(1.0).unwrap();
        let ind = on_line(0.0, 1.0, 33, |_| 1.0);
        assert!(is_s_concave(&ind, SParam::new(0.3).unwrap(), 1e-12).unwrap().concave);
        let tent = on_line(-1.0, 1.0, 65, |x| (1.0 - x.abs()).max(0.0));
        let r = is_s_concave(&tent, s1, 1e-12).unwrap();
        assert!(r.concave, "{r:?}");
    }

    #[test]
    fn gap_breaks_support_convexity() {
        let f = on_line(0.0, 3.0, 61, |x| if x <= 1.0 || x >= 2.0 { 1.0 } else { 0.0 });
        let r = is_s_concave(&f, SParam::new(1.0).unwrap(), 1e-9).unwrap();
        assert!(!r.support_convex && !r.concave);
    }

    #[test]
    fn convex_bump_is_rejected() {
        let f = on_line(-1.0, 1.0, 41, |x| x * x + 0.1);
        let r = is_s_concave(&f, SParam::new(1.0).unwrap(), 1e-9).unwrap();
        assert!(r.support_convex && !r.concave && r.worst_violation > 0.1);
    }

    #[test]
    fn squared_parabola_is_2_concave() {
        // The square root of (1 - x^2)^2 is 1 - x^2.
        let f = on_line(-1.0, 1.0, 81, |x| (1.0 - x * x).powi(2));
        assert!(is_s_concave(&f, SParam::new(2.0).unwrap(), 1e-9).unwrap().concave);
        let bump = on_line(-1.0, 1.0, 81, |x| (-4.0 * x * x).exp());
        assert!(!is_s_concave(&bump, SParam::new(1.0).unwrap(), 1e-9).unwrap().concave);
    }

    #[test]
    fn two_dimensional_disk_indicator() {
        let g = Grid::uniform(Bounds::new(vec![-1.0; 2], vec![1.0; 2]).unwrap(), 41).unwrap();
        let disk = GridFunction::from_fn(g.clone(), |x| if x[0] * x[0] + x[1] * x[1] <= 1.0 { 1.0 } else { 0.0 }).unwrap();
        let r = is_s_concave(&disk, SParam::new(1.0).unwrap(), 1e-9).unwrap();
        assert!(r.support_convex);
        let annulus = GridFunction::from_fn(g, |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            if (0.25..=1.0).contains(&r2) { 1.0 } else { 0.0 }
        })
        .unwrap();
        assert!(!is_s_concave(&annulus, SParam::new(1.0).unwrap(), 1e-9).unwrap().support_convex);
    }
}
