use alloc::vec::Vec;
use rand_core::RngCore;

use crate::erasure_stats::{ChannelSpec, NbTable};

/// Uniform on `[0, 1)` with 53 random bits.
pub(crate) fn uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Draws the symbol position at which the `k`-th un-erased symbol arrives.
#[derive(Debug, Clone)]
pub struct DelaySampler {
    spec: ChannelSpec,
    /// `F_k(k + i)`; the last entry is exactly 1.
    cdf: Vec<f64>,
}

impl DelaySampler {
    /// Tabulates the law of `X_k` far enough to resolve `P[X_k <= upto]`.
    pub fn new(spec: ChannelSpec, upto: u64) -> Self {
        let table = NbTable::new(spec, upto);
        Self {
            spec,
            cdf: table.cdf_slice().to_vec(),
        }
    }

    /// `X_k` by inversion: the smallest `x` with `F_k(x) > u`.
    pub fn invert(&self, u: f64) -> u64 {
        self.spec.k() + self.cdf.partition_point(|&c| c <= u) as u64
    }

    /// `X_k` by inversion of one uniform.
    pub fn sample<R: RngCore>(&self, rng: &mut R) -> u64 {
        self.invert(uniform(rng))
    }

    /// `X_k` if it is at most `n`, from one uniform.
    pub fn sample_within<R: RngCore>(&self, rng: &mut R, n: u64) -> Option<u64> {
        let x = self.sample(rng);
        (x <= n).then_some(x)
    }

    /// `X_k` by transmitting symbols one at a time.
    pub fn sample_symbols<R: RngCore>(&self, rng: &mut R) -> u64 {
        let (k, delta) = (self.spec.k(), self.spec.delta());
        let mut received = 0;
        let mut sent = 0;
        while received < k {
            sent += 1;
            if uniform(rng) >= delta {
                received += 1;
            }
        }
        sent
    }

    /// Position of the `k`-th un-erased symbol among `n` transmitted, if any.
    pub fn sample_symbols_within<R: RngCore>(&self, rng: &mut R, n: u64) -> Option<u64> {
        let (k, delta) = (self.spec.k(), self.spec.delta());
        let mut received = 0;
        for pos in 1..=n {
            if uniform(rng) >= delta {
                received += 1;
                if received == k {
                    return Some(pos);
                }
            }
        }
        None
    }
}
