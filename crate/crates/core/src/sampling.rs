//! Uniform sampling of the moment space.
//!
//! Under the normalized Lebesgue measure on `M_n` the canonical moments are
//! independent with `p_i ~ Beta(n−i+1, n−i+1)`, so a uniform point is drawn
//! coordinate by coordinate and mapped to moments.
//!
//! Every trial owns a counter-based stream `(seed, trial index)`, so a batch
//! is a pure function of its seed however the trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::moments::{canonical_to_moments, CanonicalVector, MomentVector};

/// Random stream identified by a seed and a stream index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeededStream {
    pub seed: u64,
    pub stream: u64,
}

impl SeededStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        SeededStream { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// One draw from `Beta(a, b)` as `G_a / (G_a + G_b)` with independent
/// unit-scale gamma variables. Never returns exactly 0 or 1.
pub fn beta_sample<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    let ga = Gamma::new(a, 1.0).expect("positive shape");
    let gb = Gamma::new(b, 1.0).expect("positive shape");
    loop {
        let x = ga.sample(rng);
        let y = gb.sample(rng);
        let p = x / (x + y);
        if p > 0.0 && p < 1.0 {
            return p;
        }
    }
}

/// `p_1, …, p_k` of a uniform point of `M_n`, drawn in order.
pub fn sample_canonical_prefix<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<f64> {
    assert!(k <= n, "prefix length {k} exceeds dimension {n}");
    (1..=k)
        .map(|i| {
            let shape = (n - i + 1) as f64;
            beta_sample(shape, shape, rng)
        })
        .collect()
}

/// A uniform point of `M_n` in both coordinate systems.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformMomentSample {
    pub n: usize,
    pub canonical: CanonicalVector<f64>,
    pub moments: MomentVector<f64>,
}

pub fn sample_uniform_moment_body(n: usize, stream: SeededStream) -> UniformMomentSample {
    assert!(n >= 1, "dimension must be positive");
    let p = sample_canonical_prefix(n, n, &mut stream.rng());
    let canonical = CanonicalVector::new(p).expect("beta draws lie in (0,1)");
    let moments = canonical_to_moments(&canonical);
    UniformMomentSample { n, canonical, moments }
}

/// Canonical `k`-prefixes of `count` independent uniform points of `M_n`;
/// trial `t` uses stream `t`.
pub fn sample_batch_canonical(n: usize, count: usize, seed: u64, k: usize) -> Vec<CanonicalVector<f64>> {
    (0..count as u64)
        .into_par_iter()
        .map(|t| {
            let p = sample_canonical_prefix(n, k, &mut SeededStream::new(seed, t).rng());
            CanonicalVector::new(p).expect("beta draws lie in (0,1)")
        })
        .collect()
}

/// Moment `k`-prefixes of `count` independent uniform points of `M_n`.
pub fn sample_batch(n: usize, count: usize, seed: u64, k: usize) -> Vec<MomentVector<f64>> {
    sample_batch_canonical(n, count, seed, k)
        .into_par_iter()
        .map(|p| canonical_to_moments(&p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::classify;

    #[test]
    fn streams_are_independent_of_each_other_and_reproducible() {
        let a: u64 = SeededStream::new(7, 0).rng().random();
        let b: u64 = SeededStream::new(7, 1).rng().random();
        let a2: u64 = SeededStream::new(7, 0).rng().random();
        assert_ne!(a, b);
        assert_eq!(a, a2);
    }

    #[test]
    fn uniform_beta_mean() {
        let mut rng = SeededStream::new(11, 0).rng();
        let n = 100_000;
        let mean = (0..n).map(|_| beta_sample(1.0, 1.0, &mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.005, "{mean}");
    }

    #[test]
    fn symmetric_beta_variance() {
        // Var Beta(5,5) = 25 / (100 · 11) = 1/44
        let mut rng = SeededStream::new(12, 0).rng();
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| beta_sample(5.0, 5.0, &mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 0.5).abs() < 0.003);
        assert!((var / (1.0 / 44.0) - 1.0).abs() < 0.05, "{var}");
    }

    #[test]
    fn batch_is_deterministic() {
        assert_eq!(sample_batch(3, 2, 7, 3), sample_batch(3, 2, 7, 3));
        assert_ne!(sample_batch(3, 2, 7, 3), sample_batch(3, 2, 8, 3));
    }

    #[test]
    fn prefix_matches_full_sample() {
        let full = sample_uniform_moment_body(6, SeededStream::new(3, 4));
        let prefix = &sample_batch(6, 5, 3, 2)[4];
        assert_eq!(prefix.entries(), &full.moments.entries()[..2]);
    }

    #[test]
    fn samples_are_interior() {
        for m in sample_batch(12, 200, 5, 12) {
            assert!(classify(&m).is_interior());
        }
    }
}
