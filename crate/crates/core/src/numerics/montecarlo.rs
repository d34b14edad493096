use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::Bounds;
use crate::error::{Error, Result};

/// Samples per parallel block. Each block seeks the generator to its own word offset,
/// so the hit count is identical to a single sequential pass.
const BLOCK: usize = 1 << 15;

/// Seed plus stream selector for a ChaCha8 generator (rand_chacha). ChaCha output is
/// fixed by its specification, so a given `(seed, stream)` yields the same draws on
/// every platform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource { seed, stream: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Independent substream for task `task`; depends only on `(seed, stream, task)`.
    pub fn substream(&self, task: u64) -> Self {
        RandomSource {
            seed: self.seed,
            stream: splitmix64(self.stream ^ splitmix64(task.wrapping_add(0x9e37_79b9_7f4a_7c15))),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
}

impl MonteCarloEstimate {
    pub fn exact(value: f64) -> Self {
        MonteCarloEstimate {
            estimate: value,
            stderr: 0.0,
            hits: 0,
            samples: 0,
        }
    }
}

/// Hit-or-miss volume of `{x in bounds : member(x)}` from `samples` uniform draws.
///
/// Each sample consumes `dim` consecutive `f64` draws from `rng`'s stream.
/// Reported stderr is `vol(bounds) * sqrt(p (1 - p) / samples)`.
pub fn mc_volume<F>(member: F, bounds: &Bounds, samples: usize, rng: RandomSource) -> Result<MonteCarloEstimate>
where
    F: Fn(&[f64]) -> bool + Sync,
{
    if samples == 0 {
        return Err(Error::domain("Monte Carlo needs at least one sample"));
    }
    let dim = bounds.dim();
    let box_volume = bounds.volume();
    if !(box_volume > 0.0) || !box_volume.is_finite() {
        return Err(Error::domain("Monte Carlo box has no volume"));
    }
    let blocks = samples.div_ceil(BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut gen = rng.rng();
            // f64 draws take one u64, i.e. two 32-bit ChaCha words.
            gen.set_word_pos((b * BLOCK * dim * 2) as u128);
            let count = BLOCK.min(samples - b * BLOCK);
            let mut x = vec![0.0; dim];
            let mut hits = 0u64;
            for _ in 0..count {
                for (axis, xi) in x.iter_mut().enumerate() {
                    let u: f64 = gen.random();
                    *xi = bounds.lo()[axis] + u * bounds.width(axis);
                }
                if member(&x) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let n = samples as f64;
    let frac = hits as f64 / n;
    Ok(MonteCarloEstimate {
        estimate: frac * box_volume,
        stderr: box_volume * (frac * (1.0 - frac) / n).sqrt(),
        hits,
        samples: samples as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn square() -> Bounds {
        Bounds::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn full_box_and_empty_set() {
        let b = Bounds::unit(2).unwrap();
        let full = mc_volume(|_| true, &b, 1000, RandomSource::new(3)).unwrap();
        assert_eq!((full.estimate, full.stderr), (1.0, 0.0));
        let empty = mc_volume(|_| false, &b, 1000, RandomSource::new(3)).unwrap();
        assert_eq!((empty.estimate, empty.stderr), (0.0, 0.0));
    }

    #[test]
    fn zero_samples_is_an_error() {
        assert!(mc_volume(|_| true, &square(), 0, RandomSource::new(1)).is_err());
    }

    #[test]
    fn disk_area_within_three_sigma() {
        let est = mc_volume(|x| x[0] * x[0] + x[1] * x[1] <= 1.0, &square(), 1_000_000, RandomSource::new(11)).unwrap();
        assert!((est.estimate - PI).abs() <= 3.0 * est.stderr, "{est:?}");
    }

    #[test]
    fn blocked_run_matches_a_sequential_pass() {
        let samples = 3 * BLOCK + 17;
        let src = RandomSource::new(99).substream(4);
        let member = |x: &[f64]| x[0] * x[0] + x[1] * x[1] <= 1.0;
        let par = mc_volume(member, &square(), samples, src).unwrap();
        let mut gen = src.rng();
        let mut hits = 0;
        for _ in 0..samples {
            let a: f64 = gen.random();
            let b: f64 = gen.random();
            if member(&[-1.0 + 2.0 * a, -1.0 + 2.0 * b]) {
                hits += 1;
            }
        }
        assert_eq!(par.hits, hits);
    }

    #[test]
    fn fixed_seed_is_reproducible_and_streams_differ() {
        let member = |x: &[f64]| x[0] + x[1] < 0.3;
        let a = mc_volume(member, &square(), 50_000, RandomSource::new(5)).unwrap();
        let b = mc_volume(member, &square(), 50_000, RandomSource::new(5)).unwrap();
        assert_eq!(a, b);
        let c = mc_volume(member, &square(), 50_000, RandomSource::new(5).substream(1)).unwrap();
        assert_ne!(a.hits, c.hits);
    }
}
