use super::super::erasure_stats::{ChannelSpec, ConditionalMeans, NbTable};
use crate::{Error, Result};

/// One packet length on the FR age curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrCurvePoint {
    /// Packet length in symbols.
    pub n: u64,
    /// `n/(1-eps_n) - n/2 + mu~_n`, slots.
    pub age: f64,
    /// `n/(1-eps_n) - n/2 + k/(1-delta)`, slots.
    pub upper_bound: f64,
    /// Probability a packet carries fewer than `k` un-erased symbols.
    pub epsilon_n: f64,
    /// Mean decoding position of a successful packet, `E[X_k | X_k <= n]`.
    pub mu_tilde_n: f64,
}

/// FR age points for `n = k, k+1, ...`.
///
/// Keeps one distribution table and one running conditional mean so a whole
/// sweep costs a single pass.
#[derive(Debug, Clone)]
pub struct FrCurve {
    table: NbTable,
    means: ConditionalMeans,
    mean: f64,
}

impl FrCurve {
    /// Curve starting at `n = k`; `upto` is the largest `n` whose failure
    /// probability must be resolved beyond the table's default tail cutoff.
    pub fn new(spec: ChannelSpec, upto: u64) -> Self {
        Self {
            table: NbTable::new(spec, upto),
            means: ConditionalMeans::new(spec),
            mean: spec.mean(),
        }
    }
}

impl Iterator for FrCurve {
    type Item = FrCurvePoint;

    fn next(&mut self) -> Option<FrCurvePoint> {
        let n = self.means.position();
        let mu_tilde_n = self.means.next()?;
        let delivered = self.table.cdf(n);
        let nf = n as f64;
        // Renewal-reward: n E[M^2] / (2 E[M]) with M geometric(1 - eps_n).
        let base = nf / delivered - nf / 2.0;
        Some(FrCurvePoint {
            n,
            age: base + mu_tilde_n,
            upper_bound: base + self.mean,
            epsilon_n: self.table.sf(n),
            mu_tilde_n,
        })
    }
}

/// FR age at packet length `n`.
pub fn fr_age(spec: ChannelSpec, n: u64) -> Result<FrCurvePoint> {
    if n < spec.k() {
        return Err(Error::BelowUpdateSize { n, k: spec.k() });
    }
    let point = FrCurve::new(spec, n)
        .nth((n - spec.k()) as usize)
        .expect("curve is unbounded");
    if !point.age.is_finite() {
        return Err(Error::ZeroDeliveryProbability { n });
    }
    Ok(point)
}
