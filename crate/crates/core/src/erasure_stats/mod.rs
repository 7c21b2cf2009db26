//! Negative binomial delivery-time statistics for the symbol-erasure channel.
//!
//! `X_k` is the number of symbols sent until the `k`-th un-erased symbol
//! arrives, with `P[X_k = x] = C(x-1, k-1) (1-delta)^k delta^(x-k)`.
//! Everything here is evaluated through the ratio recurrence between
//! consecutive probabilities, never through explicit binomial coefficients.

mod channel;
mod conditional;
mod max;
mod table;
mod tail;

pub use channel::{nb_moments, ChannelSpec, NbSummary};
pub use conditional::{conditional_mean, ConditionalMeans};
pub use max::{max_nb_moments, MaxMoments};
pub use table::{nb_cdf, nb_pmf, nb_sf, NbTable};
pub(crate) use tail::log_mgf;
pub use tail::{beta_k, chernoff_minimizer, chernoff_tail, chernoff_tail_at};
