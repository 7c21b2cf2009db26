//! Average-age formulas, bounds and redundancy optimization.
//!
//! All ages are in slots (one symbol per slot). Dividing by `k/(1-delta)`
//! gives the normalized ages that approach 1.5 for large `k`.

mod fr;
mod iir;
mod optimize;

pub use fr::{fr_age, FrCurve, FrCurvePoint};
pub use iir::{iir_age, iir_age_multi, IirAge};
pub use optimize::{
    clt_threshold, fr_opt_age_bound, fr_optimize, fr_optimize_with, CltEstimate, CltThreshold, OptResult,
    DEFAULT_ETA0,
};
