use super::{chernoff_minimizer, log_mgf, ChannelSpec, NbTable};
use crate::numeric::CompensatedSum;
use crate::{Error, Result};

/// Moments of `Y = max(X_1, ..., X_m)` for iid copies of `X_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxMoments {
    /// Number of monitors.
    pub m: u64,
    /// `E[Y]`, slots.
    pub ey: f64,
    /// `E[Y^2]`, slots squared.
    pub ey2: f64,
    /// Largest `y` included in the sums.
    pub truncation_point: u64,
    /// Certified bound on the omitted part of the `E[Y]` sum.
    pub tail_bound: f64,
    /// Certified bound on the omitted part of the `E[Y^2]` sum.
    pub tail_bound_sq: f64,
}

/// `1 - F^m` where `F = 1 - sf`, without cancellation when `sf` is small.
fn max_tail(cdf: f64, sf: f64, m: f64) -> f64 {
    if sf < 0.5 {
        -libm::expm1(m * libm::log1p(-sf))
    } else {
        1.0 - libm::pow(cdf, m)
    }
}

/// Remainder bounds for `sum_{y > last} (1 - F(y)^m)` and the same sum weighted by `2y+1`.
///
/// Each term is at most `m P[X_k >= y+1] <= m e^{-s(y+1)} E[e^{s X_k}]` for one
/// fixed tilt `s`, so both remainders are dominated by (arithmetico-)geometric
/// series with ratio `e^{-s}`.
fn remainder_bounds(spec: ChannelSpec, m: f64, last: u64) -> Option<(f64, f64)> {
    let a = (last + 1) as f64;
    let s = chernoff_minimizer(spec, a + 1.0)?;
    let r = libm::exp(-s);
    let lead = libm::exp(libm::log(m) + log_mgf(spec, s) - s * (a + 1.0));
    let one_minus_r = -libm::expm1(-s);
    let s0 = lead / one_minus_r;
    let s1 = lead * (a / one_minus_r + r / (one_minus_r * one_minus_r));
    Some((s0, 2.0 * s1 + s0))
}

/// `E[Y]` and `E[Y^2]` for the maximum of `m` iid copies of `X_k`, using
/// `P[Y <= y] = F_k(y)^m`:
///
/// `E[Y] = sum_{y>=0} (1 - F_k(y)^m)`, `E[Y^2] = sum_{y>=0} (2y+1)(1 - F_k(y)^m)`.
///
/// The sums stop at the first `y` where a Chernoff-based remainder bound
/// (union-bounded over the `m` copies) is below `tol` times the partial sum.
pub fn max_nb_moments(spec: ChannelSpec, m: u64, tol: f64) -> Result<MaxMoments> {
    if m == 0 {
        return Err(Error::InvalidMonitors);
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let k = spec.k();
    let kf = k as f64;
    if spec.is_noiseless() {
        return Ok(MaxMoments {
            m,
            ey: kf,
            ey2: kf * kf,
            truncation_point: k,
            tail_bound: 0.0,
            tail_bound_sq: 0.0,
        });
    }

    let mf = m as f64;
    // Partial sums are at least k and k^2 (the y < k terms are all 1).
    let mut last = k.max(libm::ceil(spec.mean()) as u64);
    let (tail_bound, tail_bound_sq) = loop {
        if let Some((r1, r2)) = remainder_bounds(spec, mf, last) {
            if r1 <= tol * kf && r2 <= tol * kf * kf {
                break (r1, r2);
            }
        }
        last += 1;
    };

    let table = NbTable::new(spec, last);
    let mut ey = CompensatedSum::default();
    let mut ey2 = CompensatedSum::default();
    ey.add(kf);
    ey2.add(kf * kf);
    for y in k..=last {
        let t = max_tail(table.cdf(y), table.sf(y), mf);
        ey.add(t);
        ey2.add((2 * y + 1) as f64 * t);
    }
    Ok(MaxMoments {
        m,
        ey: ey.value(),
        ey2: ey2.value(),
        truncation_point: last,
        tail_bound,
        tail_bound_sq,
    })
}
