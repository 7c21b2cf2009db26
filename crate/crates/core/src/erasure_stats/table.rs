use alloc::vec::Vec;

use super::ChannelSpec;
use crate::numeric::{scaled_to_f64, CompensatedSum, RatioWalk};

/// Remaining mass beyond the table end that we accept as negligible (2^-70).
const TAIL_CUTOFF: f64 = 8.470_329_472_543_003e-22;

/// Tabulated law of `X_k` on `x = k ..= last`.
///
/// The weights come from the ratio recurrence in a floating power-of-two frame
/// and are normalized by their own total, so the seed `(1-delta)^k` only fixes
/// the frame and never limits accuracy. Lower and upper tails are accumulated
/// separately with compensated sums, so `sf(n)` keeps full relative precision
/// deep in the tail where `1 - cdf(n)` would cancel.
///
/// Beyond `last` the remaining mass is below `2^-70` of both the mode and
/// `P[X_k = upto + 1]`; there `cdf` returns 1 and `sf` returns 0.
#[derive(Debug, Clone)]
pub struct NbTable {
    spec: ChannelSpec,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
    sf: Vec<f64>,
}

impl NbTable {
    /// Builds the table far enough to cover `upto` and the certified tail.
    pub fn new(spec: ChannelSpec, upto: u64) -> Self {
        let k = spec.k();
        let mut walk = RatioWalk::pmf(spec);
        let mut raw: Vec<(f64, i64)> = Vec::new();
        let mut mode = (walk.mantissa(), walk.exponent());
        // Stopping is judged relative to the smaller of the mode and the
        // first term past `upto`, so `sf(upto)` keeps its relative precision.
        let mut reference = mode;
        loop {
            let cur = (walk.mantissa(), walk.exponent());
            raw.push(cur);
            if cur.0 != 0.0 && scaled_to_f64(cur.0 / mode.0, cur.1 - mode.1) > 1.0 {
                mode = cur;
            }
            if walk.x() <= upto.saturating_add(1) {
                reference = if cur.0 != 0.0 && walk.x() > upto {
                    cur
                } else {
                    mode
                };
            }
            let r = walk.next_ratio();
            if walk.x() > upto && r < 1.0 {
                // Ratios decrease in x, so the rest is dominated by a geometric series.
                let rel = if cur.0 == 0.0 {
                    0.0
                } else {
                    scaled_to_f64(cur.0 / reference.0, cur.1 - reference.1)
                };
                if rel * r / (1.0 - r) <= TAIL_CUTOFF {
                    break;
                }
            }
            walk.advance();
        }
        debug_assert_eq!(raw.len() as u64, walk.x() - k + 1);

        let frame = mode.1;
        let weights: Vec<f64> = raw.iter().map(|&(m, e)| scaled_to_f64(m, e - frame)).collect();

        let mut lower = CompensatedSum::default();
        let mut prefix = Vec::with_capacity(weights.len());
        for &w in &weights {
            lower.add(w);
            prefix.push(lower.value());
        }
        let total = *prefix.last().expect("table holds x = k");

        let mut upper = CompensatedSum::default();
        let mut sf = alloc::vec![0.0; weights.len()];
        for i in (0..weights.len()).rev() {
            sf[i] = upper.value() / total;
            upper.add(weights[i]);
        }

        let pmf = weights.iter().map(|w| w / total).collect();
        let cdf = prefix.iter().map(|p| (p / total).min(1.0)).collect();
        Self { spec, pmf, cdf, sf }
    }

    /// Channel the table was built for.
    pub fn spec(&self) -> ChannelSpec {
        self.spec
    }

    /// Largest tabulated `x`.
    pub fn last(&self) -> u64 {
        self.spec.k() + self.pmf.len() as u64 - 1
    }

    fn index(&self, x: u64) -> Option<usize> {
        x.checked_sub(self.spec.k()).map(|i| i as usize)
    }

    /// `P[X_k = x]`.
    pub fn pmf(&self, x: u64) -> f64 {
        match self.index(x) {
            Some(i) => self.pmf.get(i).copied().unwrap_or(0.0),
            None => 0.0,
        }
    }

    /// `F_k(n) = P[X_k <= n]`.
    pub fn cdf(&self, n: u64) -> f64 {
        match self.index(n) {
            Some(i) => self.cdf.get(i).copied().unwrap_or(1.0),
            None => 0.0,
        }
    }

    /// `P[X_k > n] = 1 - F_k(n)`, summed from the upper tail.
    pub fn sf(&self, n: u64) -> f64 {
        match self.index(n) {
            Some(i) => self.sf.get(i).copied().unwrap_or(0.0),
            None => 1.0,
        }
    }

    /// Cumulative probabilities for `x = k ..= last()`; the final entry is 1.
    pub fn cdf_slice(&self) -> &[f64] {
        &self.cdf
    }
}

/// `P[X_k = x]` by walking the ratio recurrence from the log-space seed `(1-delta)^k`.
pub fn nb_pmf(spec: ChannelSpec, x: u64) -> f64 {
    if x < spec.k() {
        return 0.0;
    }
    let mut walk = RatioWalk::pmf(spec);
    while walk.x() < x {
        walk.advance();
        if walk.mantissa() == 0.0 {
            return 0.0;
        }
    }
    walk.value()
}

/// `F_k(n) = P[X_k <= n]`; zero for `n < k`.
pub fn nb_cdf(spec: ChannelSpec, n: u64) -> f64 {
    if n < spec.k() {
        return 0.0;
    }
    NbTable::new(spec, n).cdf(n)
}

/// `P[X_k > n] = 1 - F_k(n)`, accurate for tiny tails.
pub fn nb_sf(spec: ChannelSpec, n: u64) -> f64 {
    if n < spec.k() {
        return 1.0;
    }
    NbTable::new(spec, n).sf(n)
}
