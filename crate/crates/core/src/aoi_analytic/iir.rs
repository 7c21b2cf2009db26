use crate::erasure_stats::{max_nb_moments, ChannelSpec};
use crate::Result;

/// Single-monitor IIR age.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IirAge {
    /// Time-average age, slots.
    pub age: f64,
    /// Whether sending the next update immediately is age-optimal
    /// (`delta <= k/(2k+1)`).
    pub zero_wait_optimal: bool,
}

/// `E[X] + E[X^2]/(2E[X])` with the negative binomial moments substituted:
/// `(k/(1-delta)) (3/2 + delta/(2k)) = (3k/2 + delta/2) / (1-delta)`.
pub fn iir_age(spec: ChannelSpec) -> IirAge {
    let k = spec.k() as f64;
    let d = spec.delta();
    IirAge {
        age: (1.5 * k + 0.5 * d) / (1.0 - d),
        zero_wait_optimal: d <= k / (2.0 * k + 1.0),
    }
}

/// Age seen by one of `m` monitors when the source keeps sending until all
/// `m` have decoded: `E[X] + E[Y^2]/(2E[Y])` with `Y` the max of `m` copies.
pub fn iir_age_multi(spec: ChannelSpec, m: u64, tol: f64) -> Result<f64> {
    let mm = max_nb_moments(spec, m, tol)?;
    Ok(spec.mean() + mm.ey2 / (2.0 * mm.ey))
}
