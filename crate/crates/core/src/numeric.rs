//! Floating-point helpers shared by the distribution code.

use crate::erasure_stats::ChannelSpec;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Multiply by a power of two, which is exact.
    pub(crate) fn scale_pow2(&mut self, exp: i32) {
        self.sum = libm::scalbn(self.sum, exp);
        self.comp = libm::scalbn(self.comp, exp);
    }
}

const RENORM_HI: f64 = 1.157_920_892_373_162e77; // 2^256
const RENORM_LO: f64 = 8.636_168_555_094_445e-78; // 2^-256

/// `mantissa * 2^exponent` with an unbounded exponent.
pub(crate) fn scaled_to_f64(mantissa: f64, exponent: i64) -> f64 {
    if mantissa == 0.0 {
        return 0.0;
    }
    let e = exponent.clamp(-4000, 4000) as i32;
    libm::scalbn(mantissa, e)
}

/// Walks the negative binomial weights `x = k, k+1, ...` with the ratio
/// recurrence `w(x+1) = w(x) * delta * x / (x - k + 1)`.
///
/// The current weight is `mantissa * 2^exponent`, so seeds such as
/// `(1-delta)^k` for `k = 10^6` stay representable.
#[derive(Debug, Clone)]
pub(crate) struct RatioWalk {
    k: u64,
    delta: f64,
    x: u64,
    mantissa: f64,
    exponent: i64,
}

impl RatioWalk {
    /// Seeded at `x = k` with weight `2^log2_seed`.
    pub(crate) fn with_log2_seed(spec: ChannelSpec, log2_seed: f64) -> Self {
        let whole = libm::floor(log2_seed);
        let mut walk = Self {
            k: spec.k(),
            delta: spec.delta(),
            x: spec.k(),
            mantissa: libm::exp2(log2_seed - whole),
            exponent: whole as i64,
        };
        walk.renormalize();
        walk
    }

    /// Seeded at `x = k` with the probability `(1-delta)^k`.
    pub(crate) fn pmf(spec: ChannelSpec) -> Self {
        let log2_seed = spec.k() as f64 * libm::log1p(-spec.delta()) / core::f64::consts::LN_2;
        Self::with_log2_seed(spec, log2_seed)
    }

    pub(crate) fn x(&self) -> u64 {
        self.x
    }

    pub(crate) fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub(crate) fn exponent(&self) -> i64 {
        self.exponent
    }

    pub(crate) fn value(&self) -> f64 {
        scaled_to_f64(self.mantissa, self.exponent)
    }

    /// `w(x+1) / w(x)` at the current position.
    pub(crate) fn next_ratio(&self) -> f64 {
        self.delta * self.x as f64 / (self.x - self.k + 1) as f64
    }

    pub(crate) fn advance(&mut self) {
        self.mantissa *= self.next_ratio();
        self.x += 1;
        self.renormalize();
    }

    fn renormalize(&mut self) {
        if self.mantissa != 0.0 && !(RENORM_LO..=RENORM_HI).contains(&self.mantissa) {
            let (m, e) = libm::frexp(self.mantissa);
            self.mantissa = m;
            self.exponent += i64::from(e);
        }
    }
}
