use super::fr::{fr_age, FrCurve};
use crate::erasure_stats::{beta_k, ChannelSpec};
use crate::{Error, Result};

/// Default `eta0` used for `beta_k` and the optimized-age bound.
pub const DEFAULT_ETA0: f64 = 0.1;

/// CLT approximation of the age-minimizing packet length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltThreshold {
    /// `z*_k = sqrt(ln(2k/(pi delta)))`.
    pub z_star: f64,
    /// `w_k = sqrt((delta/k) ln(2k/(pi delta)))`, so `n^ = mu_k (1 + w_k)`.
    pub w_k: f64,
    /// `mu_k + sigma_k z*_k` before rounding.
    pub n_hat_real: f64,
    /// `n_hat_real` rounded half-up to whole symbols.
    pub n_hat: u64,
}

/// `n^*_k = mu_k + sigma_k z*_k` from minimizing the upper bound with
/// `1 - eps_n ~ Phi(z)`.
pub fn clt_threshold(spec: ChannelSpec) -> Result<CltThreshold> {
    if spec.delta() == 0.0 {
        return Err(Error::ZeroErasure);
    }
    let k = spec.k() as f64;
    let d = spec.delta();
    let ratio = 2.0 * k / (core::f64::consts::PI * d);
    if ratio <= 1.0 {
        return Err(Error::CltUnavailable { ratio });
    }
    let l = libm::log(ratio);
    let z_star = libm::sqrt(l);
    let n_hat_real = spec.mean() + spec.std_dev() * z_star;
    Ok(CltThreshold {
        z_star,
        w_k: libm::sqrt(d / k * l),
        n_hat_real,
        n_hat: libm::floor(n_hat_real + 0.5) as u64,
    })
}

/// `(k/(1-delta)) [3/2 + (beta_k + w_k (1 + beta_k)/2) / (1 - beta_k)]`, the
/// value of the upper bound at `n^*_k` once `P[X_k > n^*_k] <= beta_k`.
pub fn fr_opt_age_bound(spec: ChannelSpec, eta0: f64) -> Result<f64> {
    let beta = beta_k(spec, eta0)?;
    if beta >= 1.0 {
        return Err(Error::VacuousBound { beta });
    }
    let w = clt_threshold(spec)?.w_k;
    Ok(spec.mean() * (1.5 + (beta + 0.5 * w * (1.0 + beta)) / (1.0 - beta)))
}

/// Values at the rounded CLT threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltEstimate {
    /// Threshold and its ingredients.
    pub threshold: CltThreshold,
    /// `Delta_FR(n^)`.
    pub age_at_n_hat: f64,
    /// Upper bound at `n^`.
    pub bound_at_n_hat: f64,
    /// `eta0` used for `beta_k`.
    pub eta0: f64,
    /// `beta_k(eta0)`.
    pub beta_k: f64,
    /// Optimized-age bound; `None` when `beta_k >= 1` makes it vacuous.
    pub fr_opt_bound: Option<f64>,
}

/// Exact and CLT-approximate optimal FR packet length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptResult {
    /// Smallest `n` attaining the scanned minimum of `Delta_FR(n)`.
    pub n_star_exact: u64,
    /// `Delta_FR(n_star_exact)`.
    pub age_star_exact: f64,
    /// Last `n` examined by the scan.
    pub scan_end: u64,
    /// CLT estimate; `None` for `delta = 0` or when `2k/(pi delta) <= 1`.
    pub clt: Option<CltEstimate>,
}

/// [`fr_optimize_with`] at [`DEFAULT_ETA0`].
pub fn fr_optimize(spec: ChannelSpec) -> Result<OptResult> {
    fr_optimize_with(spec, DEFAULT_ETA0)
}

/// Scans `Delta_FR(n)` upward from `n = k` and stops once the age has stayed
/// above the running minimum for `3 ceil(sigma_k) + 10` consecutive lengths.
///
/// For large `n`, `eps_n -> 0` and `mu~_n -> k/(1-delta)`, so the curve grows
/// with slope 1/2 and a sustained rise marks the minimum. Ties go to the
/// smallest `n`.
pub fn fr_optimize_with(spec: ChannelSpec, eta0: f64) -> Result<OptResult> {
    if !(eta0 > 0.0 && eta0.is_finite()) {
        return Err(Error::InvalidEta0(eta0));
    }
    let k = spec.k();
    if spec.delta() == 0.0 {
        return Ok(OptResult {
            n_star_exact: k,
            age_star_exact: 1.5 * k as f64,
            scan_end: k,
            clt: None,
        });
    }

    let window = 3 * libm::ceil(spec.std_dev()) as u64 + 10;
    let mut best: Option<(u64, f64)> = None;
    let mut scan_end = k;
    for p in FrCurve::new(spec, k) {
        scan_end = p.n;
        if !p.age.is_finite() {
            continue;
        }
        match best {
            Some((_, age)) if p.age >= age => {}
            _ => best = Some((p.n, p.age)),
        }
        let (n_best, _) = best.expect("set above");
        if p.n - n_best >= window {
            break;
        }
    }
    let (n_star_exact, age_star_exact) = best.expect("scan reaches finite ages");

    let clt = match clt_threshold(spec) {
        Ok(threshold) => {
            let at = fr_age(spec, threshold.n_hat)?;
            let beta = beta_k(spec, eta0)?;
            Some(CltEstimate {
                threshold,
                age_at_n_hat: at.age,
                bound_at_n_hat: at.upper_bound,
                eta0,
                beta_k: beta,
                fr_opt_bound: fr_opt_age_bound(spec, eta0).ok(),
            })
        }
        Err(_) => None,
    };

    Ok(OptResult {
        n_star_exact,
        age_star_exact,
        scan_end,
        clt,
    })
}
