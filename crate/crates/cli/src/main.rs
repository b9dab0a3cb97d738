use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tavis_cli::angle::parse_angle;
use tavis_cli::config::{DEFAULT_STEPS, DEFAULT_T_MAX};
use tavis_cli::output::run_metadata;
use tavis_cli::{
    figure_preset, run_sweep, run_trajectory, verify, write_blocks, Battery, Block, CliError, RunConfig, Sweep,
    VerifyOptions,
};
use tavis_core::ModelParams;

const EXIT_INVALID: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "tavis",
    version,
    about = "Two dipole-coupled atoms in a cavity under phase decoherence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one trajectory.
    Trajectory {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// One trajectory per point of the Cartesian product of all sweeps.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: RunArgs,
        /// `name=v1,v2,...` or `name=start:stop:count`; name is one of
        /// theta, big_omega, gamma, n. Repeat for a grid.
        #[arg(long = "sweep", required = true, value_parser = parse_sweep)]
        sweeps: Vec<Sweep>,
    },
    /// Data behind one of the published figures.
    Figure {
        /// fig1 … fig8
        id: String,
        /// Replace every curve's θ.
        #[arg(long, value_parser = parse_theta, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check the closed form against the numerical oracle and all invariants.
    Verify {
        /// Add n = 3 and γ ∈ {0.01, 10} to the battery.
        #[arg(long)]
        extended: bool,
        /// Samples per trajectory.
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        /// Shift Δ in the closed form under test (sensitivity probe).
        #[arg(long, hide = true, default_value_t = 0.0, allow_hyphen_values = true)]
        perturb_delta: f64,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Atom-field coupling g.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    coupling: f64,
    /// Atomic and field frequency ω.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    omega: f64,
    /// Dipole-dipole coupling Ω.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    dipole: f64,
    /// Phase decoherence rate γ.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    gamma: f64,
    /// Initial photon number n.
    #[arg(long, default_value_t = 0)]
    photons: u32,
    /// Initial-state angle θ in radians; accepts `pi/4`, `3pi/4`, ...
    #[arg(long, default_value = "0", value_parser = parse_theta, allow_hyphen_values = true)]
    theta: f64,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams::new(
            self.coupling,
            self.omega,
            self.dipole,
            self.gamma,
            self.photons,
            self.theta,
        )?)
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = DEFAULT_T_MAX)]
    t_max: f64,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Add negativity and Bell value from the numerical oracle.
    #[arg(long)]
    with_oracle: bool,
    /// Photon cutoff for the oracle (default n + 2).
    #[arg(long)]
    n_max: Option<usize>,
    /// Output file (default stdout).
    #[arg(long)]
    output: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self, params: ModelParams) -> RunConfig {
        RunConfig {
            params,
            t_max: self.t_max,
            steps: self.steps,
            with_oracle: self.with_oracle,
            n_max: self.n_max,
            sweep: Vec::new(),
        }
    }

    fn emit(&self, blocks: &[Block]) -> Result<(), CliError> {
        match &self.output {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                write_blocks(&mut w, blocks)?;
                w.flush()?;
            }
            None => {
                let mut w = BufWriter::new(io::stdout().lock());
                write_blocks(&mut w, blocks)?;
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn parse_theta(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Trajectory { model, run } => {
            let cfg = run.config(model.params()?);
            let records = run_trajectory(&cfg)?;
            run.emit(&[Block {
                metadata: run_metadata(&cfg),
                records,
            }])?;
        }
        Command::Sweep { model, run, sweeps } => {
            let cfg = RunConfig {
                sweep: sweeps,
                ..run.config(model.params()?)
            };
            let names: Vec<&str> = cfg.sweep.iter().map(|s| s.parameter.name()).collect();
            let blocks: Vec<Block> = run_sweep(&cfg)?
                .into_iter()
                .enumerate()
                .map(|(i, (c, records))| {
                    let mut metadata = run_metadata(&c);
                    metadata.push(("sweep".into(), names.join(",")));
                    metadata.push(("sweep_index".into(), i.to_string()));
                    Block { metadata, records }
                })
                .collect();
            run.emit(&blocks)?;
        }
        Command::Figure { id, theta, run } => {
            let mut blocks = Vec::new();
            for curve in figure_preset(&id)? {
                let mut params = curve.config.params;
                let mut metadata_extra = curve.metadata();
                if let Some(theta) = theta {
                    params.theta = theta;
                    for (k, v) in metadata_extra.iter_mut() {
                        if k == "theta_label" {
                            *v = "user".into();
                        }
                    }
                }
                let cfg = run.config(params);
                let mut metadata = run_metadata(&cfg);
                metadata.extend(metadata_extra);
                blocks.push(Block {
                    metadata,
                    records: run_trajectory(&cfg)?,
                });
            }
            run.emit(&blocks)?;
        }
        Command::Verify {
            extended,
            steps,
            perturb_delta,
        } => {
            let opts = VerifyOptions {
                battery: if extended { Battery::Extended } else { Battery::Standard },
                steps,
                delta_shift: perturb_delta,
                ..VerifyOptions::default()
            };
            if steps < 2 {
                return Err(CliError::InvalidArgument(format!(
                    "steps must be at least 2, got {steps}"
                )));
            }
            let report = verify(&opts)?;
            println!("{report}");
            if !report.passed() {
                return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
