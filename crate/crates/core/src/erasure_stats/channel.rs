use crate::{Error, Result};

/// Update size and symbol erasure probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    k: u64,
    delta: f64,
}

impl ChannelSpec {
    /// `k >= 1` information symbols per update, erasure probability `0 <= delta < 1`.
    pub fn new(k: u64, delta: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidK);
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidDelta(delta));
        }
        Ok(Self { k, delta })
    }

    /// Information symbols per update.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Symbol erasure probability.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `E[X_k] = k / (1 - delta)`.
    pub fn mean(&self) -> f64 {
        self.k as f64 / (1.0 - self.delta)
    }

    /// `Var[X_k] = k delta / (1 - delta)^2`.
    pub fn variance(&self) -> f64 {
        let q = 1.0 - self.delta;
        self.k as f64 * self.delta / (q * q)
    }

    /// Standard deviation of `X_k`.
    pub fn std_dev(&self) -> f64 {
        libm::sqrt(self.variance())
    }

    pub(crate) fn is_noiseless(&self) -> bool {
        self.delta == 0.0
    }
}

/// Mean and variance of `X_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbSummary {
    /// `E[X_k]`, in slots.
    pub mu_k: f64,
    /// `Var[X_k]`, in slots squared.
    pub sigma2_k: f64,
}

/// Closed-form moments of `X_k`.
pub fn nb_moments(spec: ChannelSpec) -> NbSummary {
    NbSummary {
        mu_k: spec.mean(),
        sigma2_k: spec.variance(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(ChannelSpec::new(0, 0.1), Err(Error::InvalidK));
        assert_eq!(ChannelSpec::new(3, 1.0), Err(Error::InvalidDelta(1.0)));
        assert!(ChannelSpec::new(3, -0.1).is_err());
        assert!(ChannelSpec::new(3, f64::NAN).is_err());
    }

    #[test]
    fn moments_closed_form() {
        let s = nb_moments(ChannelSpec::new(1000, 0.0).unwrap());
        assert_eq!((s.mu_k, s.sigma2_k), (1000.0, 0.0));

        let s = nb_moments(ChannelSpec::new(1, 0.5).unwrap());
        assert_eq!((s.mu_k, s.sigma2_k), (2.0, 2.0));

        let s = nb_moments(ChannelSpec::new(1000, 0.1).unwrap());
        assert!((s.mu_k - 1_111.111_111_111_111).abs() < 1e-9);
        assert!((s.sigma2_k - 123.456_790_123_456_8).abs() < 1e-9);
    }
}
