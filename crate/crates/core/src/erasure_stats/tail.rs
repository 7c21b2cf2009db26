use super::ChannelSpec;
use crate::{Error, Result};

/// Exponential tilt minimizing `e^(-s n) E[e^(s X_k)]` for a threshold
/// `n > mu_k`: the first-order condition `k / (1 - delta e^s) = n` gives
/// `e^s = (n - k) / (n delta)`.
///
/// Returns `None` when `n <= mu_k` (the minimizer over `s >= 0` is `s = 0`)
/// or when `delta = 0` (the minimizer runs off to infinity).
pub fn chernoff_minimizer(spec: ChannelSpec, n: f64) -> Option<f64> {
    let k = spec.k() as f64;
    if spec.is_noiseless() || n <= spec.mean() {
        return None;
    }
    Some(libm::log((n - k) / (n * spec.delta())))
}

/// `ln E[e^(s X_k)] = k [ln(1-delta) + s - ln(1 - delta e^s)]` for `0 <= s < -ln delta`.
pub(crate) fn log_mgf(spec: ChannelSpec, s: f64) -> f64 {
    let d = spec.delta();
    spec.k() as f64 * (libm::log1p(-d) + s - libm::log1p(-d * libm::exp(s)))
}

/// Chernoff upper bound on `P[X_k >= n]` at a fixed tilt `s`.
pub fn chernoff_tail_at(spec: ChannelSpec, n: f64, s: f64) -> f64 {
    libm::exp(-s * n + log_mgf(spec, s)).min(1.0)
}

/// Optimized Chernoff upper bound on `P[X_k >= n]`.
///
/// Returns the trivial bound 1 for `n <= mu_k`. With the minimizer
/// substituted the exponent is
/// `-(n-k) s* + k ln(1-delta) + k ln(n/k)`.
pub fn chernoff_tail(spec: ChannelSpec, n: u64) -> f64 {
    let nf = n as f64;
    if nf <= spec.mean() {
        return 1.0;
    }
    if spec.is_noiseless() {
        // n > k and X_k = k surely.
        return 0.0;
    }
    let k = spec.k() as f64;
    let s = libm::log((nf - k) / (nf * spec.delta()));
    let exponent = -(nf - k) * s + k * libm::log1p(-spec.delta()) + k * libm::log(nf / k);
    libm::exp(exponent).min(1.0)
}

/// `beta_k = e^(eta0/(1-delta)) sqrt(pi delta / (2k))`, the tail level the
/// CLT threshold is compared against.
pub fn beta_k(spec: ChannelSpec, eta0: f64) -> Result<f64> {
    if !(eta0 > 0.0 && eta0.is_finite()) {
        return Err(Error::InvalidEta0(eta0));
    }
    if spec.is_noiseless() {
        return Err(Error::ZeroErasure);
    }
    let d = spec.delta();
    Ok(libm::exp(eta0 / (1.0 - d)) * libm::sqrt(core::f64::consts::PI * d / (2.0 * spec.k() as f64)))
}
