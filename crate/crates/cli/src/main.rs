use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use scfdma_cyclo::caf_theory::{caf_support, CafQuery, CafTheory};
use scfdma_cyclo::config_file::RunConfig;
use scfdma_cyclo::detector::detect;
use scfdma_cyclo::harness::{
    caf_profile, calibrate_pfa, sweep, trial_record, write_profile_csv, write_sweep_csv, ProfileMode,
    SweepAxis, SweepSpec, DEFAULT_TRIALS,
};
use scfdma_cyclo::iq::{read_iq, write_iq};
use scfdma_cyclo::seed::derive_seed;
use scfdma_cyclo::waveform::generate_frame;
use scfdma_cyclo::Error;

#[derive(Parser)]
#[command(name = "scfdma", version, about = "SC-FDMA cyclostationary detection experiments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Flat key = value run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo trials per point.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Output file (stdout when omitted, except for `generate`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (all cores when omitted).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write an SC-FDMA record as interleaved f32 I/Q.
    Generate {
        /// Record length in seconds (defaults to observation_s).
        #[arg(long)]
        duration: Option<f64>,
        /// Pass the record through the configured channel (trial 0).
        #[arg(long)]
        impaired: bool,
    },
    /// Closed-form CAF over a delay/cycle-frequency grid as CSV.
    CafTheory {
        /// Delays in samples: `a:b:step` or a comma list.
        #[arg(long, default_value = "-640:640:1", allow_hyphen_values = true)]
        tau: String,
        /// Normalized cycle frequencies; defaults to the symbol-rate grid.
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
    },
    /// Estimated and theoretical |CAF| along one slice of a noise-free record.
    CafProfile {
        /// `delay` (scan delay at fixed CF) or `cf` (scan CF at fixed delay).
        #[arg(long, default_value = "delay")]
        mode: String,
        /// The fixed coordinate.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        fixed: f64,
        /// Scanned points: `a:b:step` or a comma list.
        #[arg(long, default_value = "0:640:1", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 20e-3)]
        duration: f64,
    },
    /// Run the presence test on an I/Q file, or on a simulated trial.
    Detect {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Trial index used when simulating.
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
    /// Empirical false-alarm rate and KS fit of the statistic under H0.
    CalibratePfa,
    /// Detection probability along one scenario axis as CSV.
    Sweep {
        /// snr, pfa, observation, sir, rho or bits.
        #[arg(long)]
        axis: String,
        /// `a:b:step` or a comma list.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
}

fn parse_points(spec: &str) -> Result<Vec<f64>, Error> {
    let bad = || Error::Config(format!("cannot parse value list '{spec}'"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        let v: Vec<f64> = parts.iter().map(|p| p.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let (a, b, step) = (v[0], v[1], v[2]);
        if !(step > 0.0) || b < a {
            return Err(bad());
        }
        let count = ((b - a) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| a + i as f64 * step).collect());
    }
    spec.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Error> {
    match path {
        Some(p) => RunConfig::from_file(p),
        None => Ok(RunConfig::default()),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let g = &cli.global;
    if let Some(n) = g.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let cfg = load_config(g.config.as_deref())?;
    match cli.command {
        Command::Generate { duration, impaired } => {
            let path = g.out.as_ref().ok_or_else(|| Error::Config("generate needs --out".into()))?;
            let mut cfg = cfg;
            if let Some(d) = duration {
                cfg.scenario.observation_s = d;
            }
            let r = if impaired {
                trial_record(&cfg, 0, g.seed)?
            } else {
                generate_frame(&cfg.signal, cfg.scenario.observation_s, derive_seed(g.seed, "waveform", 0))?
            };
            write_iq(path, &r)?;
            eprintln!("wrote {} samples at {} Hz to {}", r.len(), r.sample_rate_hz(), path.display());
        }
        Command::CafTheory { tau, beta } => {
            let theory = CafTheory::new(&cfg.signal)?;
            let taus = parse_points(&tau)?;
            let betas = match beta {
                Some(b) => parse_points(&b)?,
                None => caf_support(&cfg.signal)?.symbol_grid(),
            };
            let mut w = output(&g.out)?;
            writeln!(w, "beta_norm,tau_samples,re,im,magnitude")?;
            for &b in &betas {
                for &t in &taus {
                    let v = theory.evaluate(&CafQuery::new(b, t)?).value;
                    writeln!(w, "{b},{t},{},{},{}", v.re, v.im, v.norm())?;
                }
            }
        }
        Command::CafProfile { mode, fixed, range, duration } => {
            let mode: ProfileMode = mode.parse()?;
            let rows = caf_profile(&cfg.signal, mode, fixed, &parse_points(&range)?, duration, g.seed)?;
            write_profile_csv(output(&g.out)?, &rows)?;
        }
        Command::Detect { input, trial } => {
            let r = match input {
                Some(p) => read_iq(p)?,
                None => trial_record(&cfg, trial, g.seed)?,
            };
            let result = detect(&r, &cfg.signal, &cfg.detector_settings())?;
            write!(output(&g.out)?, "{}", result.to_record())?;
        }
        Command::CalibratePfa => {
            let c = calibrate_pfa(&cfg, g.trials, g.seed)?;
            println!(
                "p_fa_target={}\nfalse_alarm_rate={}\nci_lo={}\nci_hi={}\ntrials={}\nks_statistic={}\nks_p_value={}",
                cfg.scenario.p_fa, c.false_alarm_rate, c.ci95.0, c.ci95.1, c.trials, c.ks_statistic, c.ks_p_value
            );
            if let Some(p) = &g.out {
                let mut w = File::create(p)?;
                writeln!(w, "trial,upsilon")?;
                for (i, u) in c.upsilon.iter().enumerate() {
                    writeln!(w, "{i},{u}")?;
                }
            }
        }
        Command::Sweep { axis, values } => {
            let spec = SweepSpec {
                axis: axis.parse::<SweepAxis>()?,
                values: parse_points(&values)?,
                base: cfg,
                trials: g.trials,
                seed: g.seed,
            };
            write_sweep_csv(output(&g.out)?, &sweep(&spec)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) | Error::InvalidArgument(_) => 2,
                Error::Numerical(_) => 3,
                _ => 1,
            })
        }
    }
}
