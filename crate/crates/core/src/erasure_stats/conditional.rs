use super::ChannelSpec;
use crate::numeric::{scaled_to_f64, CompensatedSum, RatioWalk};
use crate::{Error, Result};

/// Rescale the running sums when they pass 2^512.
const RESCALE_AT: f64 = 1.340_780_792_994_259_7e154;
const RESCALE_BY: i32 = -512;

/// Successive values of `mu~_n = E[X_k | X_k <= n]` for `n = k, k+1, ...`.
///
/// Uses `q_n = q_{n-1} + gamma_n` and `q^_n = q^_{n-1} + (n/k) gamma_n` with
/// `q_k = q^_k = 1`, `gamma_n = C(n-1, k-1) delta^(n-k)`, and
/// `mu~_n = k q^_n / q_n`. The sums live in a moving power-of-two frame so
/// `gamma_n` (which can exceed `f64::MAX`) never has to be materialized.
#[derive(Debug, Clone)]
pub struct ConditionalMeans {
    k: f64,
    gamma: RatioWalk,
    /// Power-of-two exponent of the frame the sums are expressed in.
    frame: i64,
    q: CompensatedSum,
    q_hat: CompensatedSum,
    last: f64,
    mean: f64,
}

impl ConditionalMeans {
    /// Starts at `n = k`.
    pub fn new(spec: ChannelSpec) -> Self {
        Self {
            k: spec.k() as f64,
            gamma: RatioWalk::with_log2_seed(spec, 0.0),
            frame: 0,
            q: CompensatedSum::default(),
            q_hat: CompensatedSum::default(),
            last: 0.0,
            mean: spec.mean(),
        }
    }

    /// The `n` whose value the next call to `next` returns.
    pub fn position(&self) -> u64 {
        self.gamma.x()
    }
}

impl Iterator for ConditionalMeans {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let n = self.gamma.x();
        let g = scaled_to_f64(self.gamma.mantissa(), self.gamma.exponent() - self.frame);
        self.q.add(g);
        self.q_hat.add(n as f64 / self.k * g);
        if self.q.value() > RESCALE_AT {
            self.q.scale_pow2(RESCALE_BY);
            self.q_hat.scale_pow2(RESCALE_BY);
            self.frame -= i64::from(RESCALE_BY);
        }
        // The exact sequence is nondecreasing and stays below k/(1-delta);
        // keep rounding from stepping back or overshooting the limit.
        let mu = (self.k * self.q_hat.value() / self.q.value())
            .max(self.last)
            .min(self.mean);
        self.last = mu;
        self.gamma.advance();
        Some(mu)
    }
}

/// `E[X_k | X_k <= n]` for `n >= k`.
pub fn conditional_mean(spec: ChannelSpec, n: u64) -> Result<f64> {
    if n < spec.k() {
        return Err(Error::BelowUpdateSize { n, k: spec.k() });
    }
    let steps = (n - spec.k()) as usize;
    Ok(ConditionalMeans::new(spec)
        .nth(steps)
        .expect("iterator is unbounded"))
}
