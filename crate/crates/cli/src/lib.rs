//! Command-line front end for `aoi-core`.
//!
//! Every command builds an [`OutputRecord`] from direct library calls; `main`
//! only parses flags, renders the record and picks the exit code.

pub mod output;

use std::path::PathBuf;

use aoi_core::aoi_analytic::{
    clt_threshold, fr_age, fr_optimize_with, iir_age, iir_age_multi, FrCurve, DEFAULT_ETA0,
};
use aoi_core::aoi_sim::{Scheme, SimConfig, SimResult, Simulator, VariateMode};
use aoi_core::erasure_stats::nb_moments;
use aoi_core::ChannelSpec;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

pub use output::{Cell, Format, OutputRecord};

/// Largest |z| a verification run may show and still pass.
pub const Z_GATE: f64 = 4.0;

/// Exit code for invalid flags, invalid parameters and IO failures.
pub const EXIT_USAGE: u8 = 2;
/// Exit code for a verification run outside the z gate.
pub const EXIT_STATISTICAL: u8 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] aoi_core::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Parser)]
#[command(
    name = "aoi",
    version,
    about = "Age of information over symbol erasure channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Average age under rateless (IIR) coding, optionally with m monitors.
    Iir(IirArgs),
    /// FR age as a function of the packet length n.
    FrCurve(FrCurveArgs),
    /// Age-optimal FR packet length, exact and CLT estimate.
    FrOpt(FrOptArgs),
    /// Normalized multi-monitor IIR age against the optimized FR age.
    IirMultiSweep(SweepArgs),
    /// Compare an analytic age with simulation.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Symbols per update.
    #[arg(long)]
    pub k: u64,
    /// Symbol erasure probability.
    #[arg(long)]
    pub delta: f64,
}

impl ChannelArgs {
    fn spec(&self) -> Result<ChannelSpec, CliError> {
        Ok(ChannelSpec::new(self.k, self.delta)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct IirArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Number of monitors.
    #[arg(long)]
    pub m: Option<u64>,
    /// Relative truncation tolerance for the moments of the maximum.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FrCurveArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// First packet length (default k).
    #[arg(long)]
    pub n_min: Option<u64>,
    /// Last packet length (default ceil(2k/(1-delta))).
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub step: u64,
    /// Add columns divided by k/(1-delta).
    #[arg(long)]
    pub normalize: bool,
    /// Add the upper bound with the conditional mean replaced by k/(1-delta).
    #[arg(long)]
    pub bound: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FrOptArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Tail parameter of the optimized-age bound.
    #[arg(long, default_value_t = DEFAULT_ETA0)]
    pub eta0: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Symbols per update.
    #[arg(long)]
    pub k: u64,
    /// Comma-separated erasure probabilities.
    #[arg(long, value_delimiter = ',', required = true)]
    pub delta: Vec<f64>,
    /// Largest number of monitors.
    #[arg(long, default_value_t = 64)]
    pub m_max: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_ETA0)]
    pub eta0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Iir,
    IirMulti,
    Fr,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    /// Monitors (iir-multi).
    #[arg(long)]
    pub m: Option<u64>,
    /// Packet length (fr).
    #[arg(long)]
    pub n: Option<u64>,
    /// Updates per replication (IIR) or packets per replication (FR).
    #[arg(long, default_value_t = 100_000)]
    pub horizon: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub reps: u32,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Draw every symbol instead of inverting the delivery-time CDF.
    #[arg(long)]
    pub symbol_level: bool,
}

/// The record for one invocation, plus whether a verification gate failed.
pub struct Outcome {
    pub record: OutputRecord,
    pub passed: bool,
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    let record = match command {
        Command::Iir(a) => cmd_iir(a)?,
        Command::FrCurve(a) => cmd_fr_curve(a)?,
        Command::FrOpt(a) => cmd_fr_opt(a)?,
        Command::IirMultiSweep(a) => cmd_iir_multi_sweep(a)?,
        Command::Verify(a) => return cmd_verify(a),
    };
    Ok(Outcome { record, passed: true })
}

fn channel_params(record: &mut OutputRecord, c: &ChannelArgs) {
    record.param("k", c.k).param("delta", c.delta);
}

pub fn cmd_iir(a: &IirArgs) -> Result<OutputRecord, CliError> {
    let spec = a.channel.spec()?;
    let nb = nb_moments(spec);
    let single = iir_age(spec);
    let mut columns = vec!["k", "delta", "mu_k", "sigma2_k", "age", "zero_wait_optimal"];
    if a.m.is_some() {
        columns.extend(["m", "age_multi"]);
    }
    let mut record = OutputRecord::new("iir", &columns);
    channel_params(&mut record, &a.channel);
    let mut row = vec![
        Cell::from(a.channel.k),
        Cell::from(a.channel.delta),
        Cell::from(nb.mu_k),
        Cell::from(nb.sigma2_k),
        Cell::from(single.age),
        Cell::from(single.zero_wait_optimal),
    ];
    if let Some(m) = a.m {
        record.param("m", m).param("tol", a.tol);
        row.extend([Cell::from(m), Cell::from(iir_age_multi(spec, m, a.tol)?)]);
    }
    record.push(row);
    Ok(record)
}

pub fn cmd_fr_curve(a: &FrCurveArgs) -> Result<OutputRecord, CliError> {
    let spec = a.channel.spec()?;
    let k = spec.k();
    let mean = spec.mean();
    let n_min = a.n_min.unwrap_or(k);
    let n_max = a.n_max.unwrap_or_else(|| (2.0 * mean).ceil() as u64);
    if n_min < k {
        return Err(CliError::Usage(format!(
            "--n-min {n_min} must be at least k = {k}"
        )));
    }
    if n_max < n_min {
        return Err(CliError::Usage(format!(
            "--n-max {n_max} must be at least --n-min {n_min}"
        )));
    }
    if a.step == 0 {
        return Err(CliError::Usage("--step must be at least 1".into()));
    }
    let n_hat = clt_threshold(spec).ok().map(|t| t.n_hat);
    // Row whose n is closest to n^, only when n^ lies inside the range.
    let marked = n_hat.filter(|h| (n_min..=n_max).contains(h)).map(|h| {
        let below = n_min + (h - n_min) / a.step * a.step;
        let above = below + a.step;
        if above <= n_max && above - h < h - below {
            above
        } else {
            below
        }
    });

    let mut columns = vec!["n", "age"];
    if a.bound {
        columns.push("upper_bound");
    }
    columns.extend(["epsilon_n", "mu_tilde_n"]);
    if a.normalize {
        columns.extend(["n_normalized", "age_normalized"]);
        if a.bound {
            columns.push("upper_bound_normalized");
        }
    }
    columns.push("nearest_n_hat");

    let mut record = OutputRecord::new("fr-curve", &columns);
    channel_params(&mut record, &a.channel);
    record
        .param("n_min", n_min)
        .param("n_max", n_max)
        .param("step", a.step)
        .param("normalize", a.normalize)
        .param("bound", a.bound)
        .param("n_hat", n_hat.map_or(Cell::Null, Cell::from));

    let points = FrCurve::new(spec, n_max)
        .skip((n_min - k) as usize)
        .step_by(a.step as usize)
        .take_while(|p| p.n <= n_max);
    for p in points {
        let mut row = vec![Cell::from(p.n), Cell::from(p.age)];
        if a.bound {
            row.push(Cell::from(p.upper_bound));
        }
        row.extend([Cell::from(p.epsilon_n), Cell::from(p.mu_tilde_n)]);
        if a.normalize {
            row.extend([Cell::from(p.n as f64 / mean), Cell::from(p.age / mean)]);
            if a.bound {
                row.push(Cell::from(p.upper_bound / mean));
            }
        }
        row.push(Cell::from(marked == Some(p.n)));
        record.push(row);
    }
    Ok(record)
}

pub fn cmd_fr_opt(a: &FrOptArgs) -> Result<OutputRecord, CliError> {
    let spec = a.channel.spec()?;
    let opt = fr_optimize_with(spec, a.eta0)?;
    let status = if spec.delta() == 0.0 {
        "noiseless"
    } else if opt.clt.is_some() {
        "ok"
    } else {
        "unavailable"
    };
    let mut record = OutputRecord::new(
        "fr-opt",
        &[
            "k",
            "delta",
            "n_star_exact",
            "age_star_exact",
            "scan_end",
            "clt_status",
            "z_star",
            "w_k",
            "n_hat_real",
            "n_hat",
            "age_at_n_hat",
            "bound_at_n_hat",
            "beta_k",
            "fr_opt_bound",
        ],
    );
    channel_params(&mut record, &a.channel);
    record.param("eta0", a.eta0);
    let c = opt.clt.as_ref();
    record.push(vec![
        Cell::from(a.channel.k),
        Cell::from(a.channel.delta),
        Cell::from(opt.n_star_exact),
        Cell::from(opt.age_star_exact),
        Cell::from(opt.scan_end),
        Cell::from(status),
        Cell::from(c.map(|c| c.threshold.z_star)),
        Cell::from(c.map(|c| c.threshold.w_k)),
        Cell::from(c.map(|c| c.threshold.n_hat_real)),
        c.map_or(Cell::Null, |c| Cell::from(c.threshold.n_hat)),
        Cell::from(c.map(|c| c.age_at_n_hat)),
        Cell::from(c.map(|c| c.bound_at_n_hat)),
        Cell::from(c.map(|c| c.beta_k)),
        Cell::from(c.and_then(|c| c.fr_opt_bound)),
    ]);
    Ok(record)
}

pub fn cmd_iir_multi_sweep(a: &SweepArgs) -> Result<OutputRecord, CliError> {
    if a.m_max == 0 {
        return Err(CliError::Usage("--m-max must be at least 1".into()));
    }
    let mut record = OutputRecord::new(
        "iir-multi-sweep",
        &[
            "delta",
            "m",
            "iir_age_normalized",
            "fr_age_normalized",
            "fr_bound_normalized",
            "iir_above_fr_bound",
            "first_crossover_m",
        ],
    );
    record
        .param("k", a.k)
        .param(
            "delta",
            Cell::Text(a.delta.iter().map(f64::to_string).collect::<Vec<_>>().join(",")),
        )
        .param("m_max", a.m_max)
        .param("tol", a.tol)
        .param("eta0", a.eta0);

    for &delta in &a.delta {
        let spec = ChannelSpec::new(a.k, delta)?;
        let mean = spec.mean();
        let fr = fr_optimize_with(spec, a.eta0)?.clt;
        let fr_age = fr.as_ref().map(|c| c.age_at_n_hat / mean);
        let fr_bound = fr.as_ref().map(|c| c.bound_at_n_hat / mean);
        let ages = (1..=a.m_max)
            .map(|m| iir_age_multi(spec, m, a.tol).map(|age| age / mean))
            .collect::<Result<Vec<_>, _>>()?;
        let above: Vec<Option<bool>> = ages.iter().map(|&x| fr_bound.map(|b| x > b)).collect();
        let first = above.iter().position(|&a| a == Some(true)).map(|i| i as u64 + 1);
        for (i, (&age, &over)) in ages.iter().zip(&above).enumerate() {
            record.push(vec![
                Cell::from(delta),
                Cell::from(i as u64 + 1),
                Cell::from(age),
                Cell::from(fr_age),
                Cell::from(fr_bound),
                over.map_or(Cell::Null, Cell::Bool),
                first.map_or(Cell::Null, Cell::from),
            ]);
        }
    }
    Ok(record)
}

/// Runs the replications of `config` on the rayon pool and reduces them in
/// index order, so the result equals the sequential one.
pub fn simulate_parallel(config: SimConfig) -> Result<SimResult, aoi_core::Error> {
    let sim = Simulator::new(config)?;
    let outcomes = (0..config.replications)
        .into_par_iter()
        .map(|i| sim.replication(i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SimResult::from_outcomes(&outcomes))
}

/// `(observed - expected) / stderr`, with zero spread giving 0 on an exact
/// match and an infinite score otherwise.
pub fn z_score(observed: f64, expected: f64, stderr: f64) -> f64 {
    let diff = observed - expected;
    if diff == 0.0 {
        0.0
    } else {
        diff / stderr
    }
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let spec = a.channel.spec()?;
    if a.reps < 2 {
        return Err(CliError::Usage(
            "--reps must be at least 2 to estimate a standard error".into(),
        ));
    }
    let (scheme, analytic, epsilon) = match a.scheme {
        SchemeArg::Iir => (Scheme::Iir, iir_age(spec).age, None),
        SchemeArg::IirMulti => {
            let m =
                a.m.ok_or_else(|| CliError::Usage("--m is required for --scheme iir-multi".into()))?;
            (Scheme::IirMulti { m }, iir_age_multi(spec, m, a.tol)?, None)
        }
        SchemeArg::Fr => {
            let n =
                a.n.ok_or_else(|| CliError::Usage("--n is required for --scheme fr".into()))?;
            let p = fr_age(spec, n)?;
            (Scheme::Fr { n }, p.age, Some(p.epsilon_n))
        }
    };
    let mode = if a.symbol_level {
        VariateMode::SymbolLevel
    } else {
        VariateMode::Inversion
    };
    let config = SimConfig::new(spec, scheme, a.horizon, a.seed, a.reps)?.with_mode(mode);
    let sim = simulate_parallel(config)?;
    let z = z_score(sim.avg_age, analytic, sim.avg_age_stderr);
    let mut passed = z.abs() <= Z_GATE;

    let mut columns = vec!["scheme", "analytic", "simulated", "stderr", "z"];
    if epsilon.is_some() {
        columns.extend(["epsilon_n", "discard_fraction", "discard_stderr", "discard_z"]);
    }
    columns.push("passed");
    let mut record = OutputRecord::new("verify", &columns);
    channel_params(&mut record, &a.channel);
    record.param(
        "scheme",
        match a.scheme {
            SchemeArg::Iir => "iir",
            SchemeArg::IirMulti => "iir-multi",
            SchemeArg::Fr => "fr",
        },
    );
    if let Some(m) = a.m.filter(|_| a.scheme == SchemeArg::IirMulti) {
        record.param("m", m).param("tol", a.tol);
    }
    if let Some(n) = a.n.filter(|_| a.scheme == SchemeArg::Fr) {
        record.param("n", n);
    }
    record
        .param("horizon", a.horizon)
        .param("seed", Cell::uint(a.seed))
        .param("reps", u64::from(a.reps))
        .param("symbol_level", a.symbol_level);

    let name = record
        .params
        .iter()
        .find(|(k, _)| k == "scheme")
        .map(|(_, v)| v.clone())
        .unwrap();
    let mut row = vec![
        name,
        Cell::from(analytic),
        Cell::from(sim.avg_age),
        Cell::from(sim.avg_age_stderr),
        Cell::from(z),
    ];
    if let Some(eps) = epsilon {
        let frac = sim.discard_fraction();
        let se = sim.discard_fraction_stderr();
        let dz = z_score(frac, eps, se);
        passed &= dz.abs() <= Z_GATE;
        row.extend([Cell::from(eps), Cell::from(frac), Cell::from(se), Cell::from(dz)]);
    }
    row.push(Cell::from(passed));
    record.push(row);
    Ok(Outcome { record, passed })
}
