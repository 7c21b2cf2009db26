use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use super::config::{Scheme, SimConfig, VariateMode};
use super::sampler::DelaySampler;
use super::sawtooth::{Delivery, SawtoothIntegrator};
use super::stats::SampleStats;
use crate::{Error, Result};

/// Statistics of one independent replication.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationOutcome {
    /// Time-average age over the replication.
    pub avg_age: f64,
    /// Twice the integrated age, exact.
    pub twice_area: u128,
    pub elapsed_slots: u64,
    pub delivered: u64,
    pub discarded: u64,
    /// `X_i` (IIR), `Y_i` (multi-monitor IIR) or the decoding position of
    /// delivered FR packets.
    pub delivery_time: SampleStats,
    /// FR only: slots per renewal period, ending with a successful slot.
    pub renewal_slots: SampleStats,
}

/// Aggregate over replications.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Mean of the per-replication time-average ages.
    pub avg_age: f64,
    /// Standard error of `avg_age` across replications (NaN for one replication).
    pub avg_age_stderr: f64,
    pub replication_ages: Vec<f64>,
    pub updates_delivered: u64,
    pub updates_discarded: u64,
    pub elapsed_slots: u64,
    pub delivery_time: SampleStats,
    pub renewal_slots: SampleStats,
}

impl SimResult {
    /// Reduces outcomes in the given order.
    pub fn from_outcomes(outcomes: &[ReplicationOutcome]) -> Self {
        let reps = outcomes.len() as f64;
        let replication_ages: Vec<f64> = outcomes.iter().map(|o| o.avg_age).collect();
        let avg_age = replication_ages.iter().sum::<f64>() / reps;
        let avg_age_stderr = if outcomes.len() < 2 {
            f64::NAN
        } else {
            let ss: f64 = replication_ages
                .iter()
                .map(|a| (a - avg_age) * (a - avg_age))
                .sum();
            libm::sqrt(ss / (reps - 1.0) / reps)
        };
        let mut delivery_time = SampleStats::default();
        let mut renewal_slots = SampleStats::default();
        for o in outcomes {
            delivery_time.merge(&o.delivery_time);
            renewal_slots.merge(&o.renewal_slots);
        }
        Self {
            avg_age,
            avg_age_stderr,
            replication_ages,
            updates_delivered: outcomes.iter().map(|o| o.delivered).sum(),
            updates_discarded: outcomes.iter().map(|o| o.discarded).sum(),
            elapsed_slots: outcomes.iter().map(|o| o.elapsed_slots).sum(),
            delivery_time,
            renewal_slots,
        }
    }

    /// Fraction of transmitted FR packets that were discarded.
    pub fn discard_fraction(&self) -> f64 {
        self.updates_discarded as f64 / (self.updates_delivered + self.updates_discarded) as f64
    }

    /// Binomial standard error of [`Self::discard_fraction`].
    pub fn discard_fraction_stderr(&self) -> f64 {
        let p = self.discard_fraction();
        let total = (self.updates_delivered + self.updates_discarded) as f64;
        libm::sqrt(p * (1.0 - p) / total)
    }
}

/// SplitMix64 finalizer applied to `base + golden * (index + 1)`, giving
/// decorrelated seeds for sweep entries.
pub fn stream_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A validated configuration with its delay table, ready to run replications.
///
/// Replication `i` draws from ChaCha8 stream `i` of the configured seed, so
/// replications can run in any order or in parallel and reduce to the same
/// result.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SimConfig,
    sampler: DelaySampler,
}

impl Simulator {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let upto = match config.scheme {
            Scheme::Fr { n } => n,
            _ => config.spec.k(),
        };
        Ok(Self {
            config,
            sampler: DelaySampler::new(config.spec, upto),
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    fn rng(&self, replication: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(u64::from(replication));
        rng
    }

    fn delay(&self, rng: &mut ChaCha8Rng) -> u64 {
        match self.config.mode {
            VariateMode::Inversion => self.sampler.sample(rng),
            VariateMode::SymbolLevel => self.sampler.sample_symbols(rng),
        }
    }

    fn delay_within(&self, rng: &mut ChaCha8Rng, n: u64) -> Option<u64> {
        match self.config.mode {
            VariateMode::Inversion => self.sampler.sample_within(rng, n),
            VariateMode::SymbolLevel => self.sampler.sample_symbols_within(rng, n),
        }
    }

    /// Runs replication `index`.
    pub fn replication(&self, index: u32) -> Result<ReplicationOutcome> {
        self.run(index, None, &mut 0)
    }

    /// Runs replication `index` and records monitor 1's deliveries. The
    /// initial age is returned alongside the outcome.
    pub fn replication_traced(
        &self,
        index: u32,
        trace: &mut Vec<Delivery>,
    ) -> Result<(u64, ReplicationOutcome)> {
        let mut initial = 0;
        let outcome = self.run(index, Some(trace), &mut initial)?;
        Ok((initial, outcome))
    }

    fn run(
        &self,
        index: u32,
        mut trace: Option<&mut Vec<Delivery>>,
        initial_age: &mut u64,
    ) -> Result<ReplicationOutcome> {
        let mut rng = self.rng(index);
        let horizon = self.config.horizon;
        let mut delivery_time = SampleStats::default();
        let mut renewal_slots = SampleStats::default();
        let mut record = |d: Delivery| {
            if let Some(t) = trace.as_deref_mut() {
                t.push(d);
            }
        };

        let (twice_area, elapsed, delivered, discarded) = match self.config.scheme {
            Scheme::Iir => {
                // Area of cycle i: X_{i-1} X_i + X_i^2 / 2. X_0 is drawn so the
                // process starts in steady state with Delta(0) = X_0.
                let (mut prev, mut t, mut area2) = (self.delay(&mut rng), 0u64, 0u128);
                *initial_age = prev;
                for _ in 0..horizon {
                    let x = self.delay(&mut rng);
                    area2 += 2 * u128::from(prev) * u128::from(x) + u128::from(x) * u128::from(x);
                    record(Delivery {
                        time: t + x,
                        generated: t,
                    });
                    t += x;
                    prev = x;
                    delivery_time.push(x);
                }
                (area2, t, horizon, 0)
            }
            Scheme::IirMulti { m } => {
                // Area of cycle i for monitor 1: Y_{i-1} X_{i1} + Y_i^2 / 2, with
                // Delta(0) = Y_0 drawn like every other cycle.
                let draw_max =
                    |rng: &mut ChaCha8Rng, first: u64| (1..m).fold(first, |y, _| y.max(self.delay(rng)));
                let first = self.delay(&mut rng);
                let (mut prev, mut t, mut area2) = (draw_max(&mut rng, first), 0u64, 0u128);
                *initial_age = prev;
                for _ in 0..horizon {
                    let x1 = self.delay(&mut rng);
                    let y = draw_max(&mut rng, x1);
                    area2 += 2 * u128::from(prev) * u128::from(x1) + u128::from(y) * u128::from(y);
                    record(Delivery {
                        time: t + x1,
                        generated: t,
                    });
                    t += y;
                    prev = y;
                    delivery_time.push(y);
                }
                (area2, t, horizon, 0)
            }
            Scheme::Fr { n } => {
                // t = 0 is treated as a renewal point: Delta(0) = n.
                let mut saw = SawtoothIntegrator::with_initial_age(n);
                *initial_age = n;
                let (mut delivered, mut discarded, mut since_renewal) = (0u64, 0u64, 0u64);
                for slot in 0..horizon {
                    let start = slot * n;
                    since_renewal += 1;
                    match self.delay_within(&mut rng, n) {
                        Some(x) => {
                            let d = Delivery {
                                time: start + x,
                                generated: start,
                            };
                            saw.deliver(d);
                            record(d);
                            delivered += 1;
                            delivery_time.push(x);
                            renewal_slots.push(since_renewal);
                            since_renewal = 0;
                        }
                        None => discarded += 1,
                    }
                }
                let end = horizon * n;
                (saw.finish(end), end, delivered, discarded)
            }
        };

        if delivered == 0 {
            return Err(Error::NoDeliveries { replication: index });
        }
        Ok(ReplicationOutcome {
            avg_age: twice_area as f64 / (2.0 * elapsed as f64),
            twice_area,
            elapsed_slots: elapsed,
            delivered,
            discarded,
            delivery_time,
            renewal_slots,
        })
    }

    /// All replications in index order.
    pub fn run_all(&self) -> Result<SimResult> {
        let outcomes = (0..self.config.replications)
            .map(|i| self.replication(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(SimResult::from_outcomes(&outcomes))
    }
}

/// Runs every replication of `config` sequentially.
pub fn simulate(config: SimConfig) -> Result<SimResult> {
    Simulator::new(config)?.run_all()
}

/// Simulates `base` once per value (packet length `n` for FR, monitor count
/// `m` for multi-monitor IIR), with entry `i` seeded by `stream_seed(base.seed, i)`.
pub fn simulate_sweep(base: SimConfig, values: &[u64]) -> Result<Vec<(u64, SimResult)>> {
    if values.is_empty() || matches!(base.scheme, Scheme::Iir) {
        return Err(Error::InvalidSweep);
    }
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let scheme = match base.scheme {
                Scheme::Fr { .. } => Scheme::Fr { n: v },
                Scheme::IirMulti { .. } => Scheme::IirMulti { m: v },
                Scheme::Iir => unreachable!(),
            };
            let config = SimConfig {
                scheme,
                seed: stream_seed(base.seed, i as u64),
                ..base
            };
            simulate(config).map(|r| (v, r))
        })
        .collect()
}
