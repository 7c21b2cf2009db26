use crate::erasure_stats::ChannelSpec;
use crate::{Error, Result};

/// Transmission strategy being simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Rateless coding, one monitor.
    Iir,
    /// Rateless coding until all `m` monitors decode; monitor 1's age is tracked.
    IirMulti { m: u64 },
    /// Fixed `n`-symbol packets without feedback.
    Fr { n: u64 },
}

/// How delivery times are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VariateMode {
    /// One uniform per delivery time, inverted through the tabulated CDF.
    #[default]
    Inversion,
    /// One Bernoulli erasure draw per transmitted symbol.
    SymbolLevel,
}

/// Everything that determines a simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub spec: ChannelSpec,
    pub scheme: Scheme,
    /// Updates per replication for IIR schemes, packets (n slots each) for FR.
    pub horizon: u64,
    pub seed: u64,
    pub replications: u32,
    pub mode: VariateMode,
}

impl SimConfig {
    /// Fast-mode configuration.
    pub fn new(
        spec: ChannelSpec,
        scheme: Scheme,
        horizon: u64,
        seed: u64,
        replications: u32,
    ) -> Result<Self> {
        let config = Self {
            spec,
            scheme,
            horizon,
            seed,
            replications,
            mode: VariateMode::Inversion,
        };
        config.validate()?;
        Ok(config)
    }

    /// Same configuration with a different variate mode.
    pub fn with_mode(mut self, mode: VariateMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidHorizon);
        }
        if self.replications == 0 {
            return Err(Error::InvalidReplications);
        }
        match self.scheme {
            Scheme::IirMulti { m: 0 } => Err(Error::InvalidMonitors),
            Scheme::Fr { n } if n < self.spec.k() => Err(Error::BelowUpdateSize { n, k: self.spec.k() }),
            _ => Ok(()),
        }
    }
}
