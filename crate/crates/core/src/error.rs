use thiserror::Error;

/// Errors reported by the analytic and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("delta must lie in [0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("n = {n} is below the update size k = {k}")]
    BelowUpdateSize { n: u64, k: u64 },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("number of monitors must be at least 1")]
    InvalidMonitors,
    #[error("eta0 must be positive and finite, got {0}")]
    InvalidEta0(f64),
    #[error("this quantity requires a positive erasure probability")]
    ZeroErasure,
    #[error("CLT threshold unavailable: ln(2k/(pi*delta)) needs 2k/(pi*delta) > 1, got {ratio}")]
    CltUnavailable { ratio: f64 },
    #[error("optimized-age bound is vacuous: beta_k = {beta} >= 1")]
    VacuousBound { beta: f64 },
    #[error("delivery probability F_k({n}) underflows to zero")]
    ZeroDeliveryProbability { n: u64 },
    #[error("horizon must be positive")]
    InvalidHorizon,
    #[error("replications must be positive")]
    InvalidReplications,
    #[error("replication {replication} delivered no update within the horizon")]
    NoDeliveries { replication: u32 },
    #[error("sweep values must be nonempty and apply to an FR or multi-monitor IIR scheme")]
    InvalidSweep,
}

/// Crate result alias.
pub type Result<T> = core::result::Result<T, Error>;
