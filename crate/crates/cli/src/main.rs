use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use qae_core::harness::{self, ExperimentConfig, SweepRow};
use qae_core::integrator::{exact_reference, riemann_sum, true_amplitude, Reference};
use qae_core::sampler::exact_probability;
use qae_core::{Algorithm, NoiseSpec, OracleSpec, QaeError};

const EXIT_USAGE: u8 = 1;
const EXIT_UNCONVERGED: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "qae",
    version,
    about = "Amplitude estimation for Riemann-sum integration of sin^2 on [0, pi/4]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one estimation and print the estimate, interval and oracle calls.
    Estimate(EstimateArgs),
    /// Repeat estimations over a list of shot counts and write one CSV row per trial.
    Sweep(SweepArgs),
    /// Print reference values for an n-qubit domain.
    Exact {
        #[arg(long, default_value_t = 2)]
        qubits: u32,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value = "mlqae", value_parser = parse_algorithm)]
    algorithm: Algorithm,
    /// Domain qubits.
    #[arg(long, default_value_t = 2)]
    qubits: u32,
    /// MLQAE schedule depth.
    #[arg(long, default_value_t = 3)]
    m: u32,
    /// IQAE target half-width on the amplitude.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// IQAE total failure probability.
    #[arg(long = "alpha-conf", default_value_t = 0.05)]
    alpha_conf: f64,
    /// Depolarizing probability per oracle application.
    #[arg(long = "noise-depol", default_value_t = 0.0)]
    noise_depol: f64,
    /// Readout bit-flip probability.
    #[arg(long = "noise-readout", default_value_t = 0.0)]
    noise_readout: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output path (stdout when omitted for sweeps).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    common: Common,
    /// Shots per circuit (MLQAE) or per round (IQAE).
    #[arg(long, default_value_t = 1024)]
    shots: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated shot counts; IQAE reads each as shots per round.
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256,512,1024")]
    shots: Vec<u64>,
    #[arg(long, default_value_t = 30)]
    trials: u32,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: QaeError| e.to_string())
}

impl Common {
    fn experiment(&self, shots_list: Vec<u64>, trials: u32, workers: usize) -> ExperimentConfig {
        ExperimentConfig {
            algorithm: self.algorithm,
            n: self.qubits,
            shots_list,
            trials,
            m: self.m,
            epsilon: self.epsilon,
            alpha_conf: self.alpha_conf,
            noise: NoiseSpec {
                p_depol: self.noise_depol,
                p_readout: self.noise_readout,
            },
            seed: self.seed,
            workers,
        }
    }
}

fn write_rows(rows: &[SweepRow], out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            harness::write_csv(rows, BufWriter::new(file))?;
        }
        None => harness::write_csv(rows, io::stdout().lock())?,
    }
    Ok(())
}

fn estimate(args: EstimateArgs) -> Result<u8> {
    let cfg = args.common.experiment(vec![args.shots], 1, 1);
    cfg.validate()?;
    let spec = OracleSpec::sin2_quarter_pi(cfg.n)?;
    let seed = cfg.row_seed(args.shots, 0);
    let est = harness::run_single(cfg.algorithm, &spec, &cfg, args.shots, seed)?;
    let truth = true_amplitude(cfg.n);
    let rel_error = (est.a_hat - truth).abs() / truth;

    let mut stdout = io::stdout().lock();
    writeln!(stdout, "algorithm    {}", cfg.algorithm)?;
    writeln!(stdout, "a_hat        {}", est.a_hat)?;
    writeln!(stdout, "theta_hat    {}", est.theta_hat)?;
    match est.a_interval {
        Some((lo, hi)) => writeln!(stdout, "interval     [{lo}, {hi}]")?,
        None => writeln!(stdout, "interval     -")?,
    }
    writeln!(stdout, "oracle_calls {}", est.oracle_calls)?;
    writeln!(stdout, "true_a       {truth}")?;
    writeln!(stdout, "rel_error    {rel_error}")?;
    writeln!(stdout, "converged    {}", est.converged)?;

    if let Some(path) = &args.common.out {
        let row = SweepRow {
            algorithm: cfg.algorithm,
            n: cfg.n,
            shots: args.shots,
            trial: 0,
            a_hat: est.a_hat,
            rel_error,
            oracle_calls: est.oracle_calls,
            converged: est.converged,
            seed,
        };
        write_rows(&[row], Some(path))?;
    }
    Ok(if est.converged { 0 } else { EXIT_UNCONVERGED })
}

fn sweep(args: SweepArgs) -> Result<u8> {
    let cfg = args.common.experiment(args.shots, args.trials, args.workers);
    let rows = harness::run_sweep(&cfg)?;
    write_rows(&rows, args.common.out.as_ref())?;

    let mut err = io::stderr().lock();
    writeln!(
        err,
        "{:<6} {:>3} {:>6} {:>13} {:>13} {:>14}",
        "alg", "n", "shots", "mean_rel_err", "max_rel_err", "mean_oracle"
    )?;
    for s in harness::summarize(&rows)? {
        writeln!(
            err,
            "{:<6} {:>3} {:>6} {:>13.6} {:>13.6} {:>14.1}",
            s.algorithm, s.n, s.shots, s.mean_rel_error, s.max_rel_error, s.mean_oracle_calls
        )?;
    }
    let unconverged = rows.iter().filter(|r| !r.converged).count();
    if unconverged > 0 {
        writeln!(err, "{unconverged} of {} rows did not converge", rows.len())?;
        return Ok(EXIT_UNCONVERGED);
    }
    Ok(0)
}

fn exact(qubits: u32) -> Result<u8> {
    let spec = OracleSpec::sin2_quarter_pi(qubits)?;
    let integral = spec.integral_spec();
    let sum = riemann_sum(&integral);
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "qubits               {qubits}")?;
    writeln!(stdout, "subintervals         {}", integral.n_sub)?;
    writeln!(stdout, "riemann_sum          {sum}")?;
    writeln!(stdout, "riemann_amplitude    {}", sum / integral.width())?;
    writeln!(stdout, "simulated_amplitude  {}", exact_probability(&spec, 0)?)?;
    writeln!(
        stdout,
        "exact_integral       {}",
        exact_reference(Reference::Sin2Integral)
    )?;
    writeln!(
        stdout,
        "exact_amplitude      {}",
        exact_reference(Reference::Sin2Amplitude)
    )?;
    writeln!(stdout, "true_a               {}", true_amplitude(qubits))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Estimate(args) => estimate(args),
        Command::Sweep(args) => sweep(args),
        Command::Exact { qubits } => exact(qubits),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
