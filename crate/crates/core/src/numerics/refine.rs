use crate::error::{Error, Result};

/// How successive resolutions of a sweep must relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nesting {
    /// Node counts per axis; each grid's nodes must contain the previous grid's
    /// (`(next - 1)` a multiple of `(prev - 1)`), e.g. `2^k + 1`.
    GridNodes,
    /// Sample counts; only required to increase.
    SampleCounts,
}

/// Evaluates `task` at each resolution, in order. The caller judges monotone or
/// Cauchy behaviour of the returned values.
pub fn refinement_sweep<F>(task: F, resolutions: &[usize], nesting: Nesting) -> Result<Vec<(usize, f64)>>
where
    F: Fn(usize) -> Result<f64>,
{
    if resolutions.is_empty() {
        return Err(Error::config("refinement sweep needs at least one resolution"));
    }
    for w in resolutions.windows(2) {
        let (prev, next) = (w[0], w[1]);
        if next <= prev {
            return Err(Error::config(format!(
                "resolutions must increase strictly, got {prev} then {next}"
            )));
        }
        if nesting == Nesting::GridNodes && (prev < 2 || (next - 1) % (prev - 1) != 0) {
            return Err(Error::config(format!(
                "grid with {next} nodes does not contain the nodes of a grid with {prev}"
            )));
        }
    }
    if nesting == Nesting::GridNodes && resolutions[0] < 2 {
        return Err(Error::config("grid resolutions need at least 2 nodes"));
    }
    resolutions.iter().map(|&r| Ok((r, task(r)?))).collect()
}

/// `values[i+1] >= values[i] - slack` for every consecutive pair.
pub fn is_nondecreasing(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] >= w[0] - slack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_grid, mc_volume, Bounds, Grid, RandomSource};

    #[test]
    fn constant_task() {
        let out = refinement_sweep(|_| Ok(4.0), &[3, 5, 9], Nesting::GridNodes).unwrap();
        assert_eq!(out, vec![(3, 4.0), (5, 4.0), (9, 4.0)]);
    }

    #[test]
    fn rejects_non_nested_grids_and_empty_lists() {
        assert!(refinement_sweep(|_| Ok(0.0), &[65, 100], Nesting::GridNodes).is_err());
        assert!(refinement_sweep(|_| Ok(0.0), &[65, 65], Nesting::GridNodes).is_err());
        assert!(refinement_sweep(|_| Ok(0.0), &[], Nesting::SampleCounts).is_err());
        assert!(refinement_sweep(|_| Ok(0.0), &[10, 100], Nesting::SampleCounts).is_ok());
    }

    #[test]
    fn trapezoid_sweep_is_cauchy() {
        let task = |n: usize| {
            let g = Grid::uniform(Bounds::unit(1).unwrap(), n)?;
            let v: Vec<f64> = (0..n).map(|i| (-g.coord(0, i).powi(2)).exp()).collect();
            Ok(integrate_grid(&g, &v))
        };
        let out = refinement_sweep(task, &[5, 9, 17, 33, 65], Nesting::GridNodes).unwrap();
        let diffs: Vec<f64> = out.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
        assert!(diffs.windows(2).all(|d| d[1] < d[0]));
    }

    #[test]
    fn mc_stderr_shrinks_like_inverse_sqrt() {
        let b = Bounds::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let task = |n: usize| {
            Ok(mc_volume(|x| x[0] * x[0] + x[1] * x[1] <= 1.0, &b, n, RandomSource::new(2))?.stderr)
        };
        let out = refinement_sweep(task, &[10_000, 100_000, 1_000_000], Nesting::SampleCounts).unwrap();
        for w in out.windows(2) {
            let ratio = w[0].1 / w[1].1;
            assert!((ratio - 10f64.sqrt()).abs() < 0.1, "ratio {ratio}");
        }
    }
}
