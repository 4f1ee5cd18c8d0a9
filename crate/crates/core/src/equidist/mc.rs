//! Seeded Monte-Carlo plumbing. Samples are drawn in fixed-size chunks and
//! chunk `c` uses ChaCha stream `c` of the master seed, so estimates do not
//! depend on how rayon schedules the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const CHUNK: u64 = 1 << 16;

pub(crate) struct UniformSampler(ChaCha8Rng);

impl UniformSampler {
    pub(crate) fn substream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        UniformSampler(rng)
    }

    pub(crate) fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.0
    }

    fn fill(&mut self, u: &mut [f64]) {
        for x in u.iter_mut() {
            *x = self.0.random::<f64>();
        }
    }
}

/// Number of uniform samples in `[0,1]^dim` for which `hit` holds.
pub(crate) fn count_hits<F>(dim: usize, samples: u64, seed: u64, hit: F) -> u64
where
    F: Fn(&[f64], &mut UniformSampler) -> bool + Sync,
{
    count_classified(dim, samples, seed, |u, s| [hit(u, s), false])[0]
}

/// Like [`count_hits`] for two disjoint-or-not events at once.
pub(crate) fn count_classified<F>(dim: usize, samples: u64, seed: u64, classify: F) -> [u64; 2]
where
    F: Fn(&[f64], &mut UniformSampler) -> [bool; 2] + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sampler = UniformSampler::substream(seed, c);
            let len = CHUNK.min(samples - c * CHUNK);
            let mut u = vec![0.0; dim];
            let mut hits = [0u64; 2];
            for _ in 0..len {
                sampler.fill(&mut u);
                let [a, b] = classify(&u, &mut sampler);
                hits[0] += u64::from(a);
                hits[1] += u64::from(b);
            }
            hits
        })
        .reduce(|| [0, 0], |a, b| [a[0] + b[0], a[1] + b[1]])
}

/// Sample proportion and its binomial standard error.
pub(crate) fn proportion(hits: u64, samples: u64) -> (f64, f64) {
    let n = samples as f64;
    let p = hits as f64 / n;
    (p, (p * (1.0 - p) / n).sqrt())
}
