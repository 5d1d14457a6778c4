use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use mgt_fourier::SystemParams;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "mgtf",
    version,
    about = "Stability scans for the MGT-Fourier thermoelastic system"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, global = true, default_value_t = 3.0)]
    pub gamma: f64,
    #[arg(long, global = true, default_value_t = 2.0)]
    pub kappa: f64,
    #[arg(long, global = true, default_value_t = 3.0, allow_hyphen_values = true)]
    pub eta: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub lambda1: f64,

    /// Number of modes λ_k = λ1·k² (default 10 for certify, 1 otherwise)
    #[arg(long, global = true)]
    pub modes: Option<usize>,

    #[arg(long, global = true)]
    pub grid_min: Option<f64>,
    #[arg(long, global = true)]
    pub grid_max: Option<f64>,
    #[arg(long, global = true)]
    pub grid_steps: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub grid_scale: Option<GridScale>,

    /// Time step (default: 1e-3, or less if the stability limit requires)
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true, default_value_t = 10.0)]
    pub t_end: f64,

    /// Initial data, applied to every mode
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true)]
    pub u0: f64,
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub v0: f64,
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub w0: f64,
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta0: f64,

    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for grid scans (default: number of processors)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Regime, thresholds and stability verdict
    Classify,
    /// τ(κ) against τ⋆(κ) over a κ grid
    Threshold,
    /// True and certified decay rates over an η grid
    Decay,
    /// Integrate the modes and report the measured rate
    Simulate,
    /// Decay certificate with per-mode Lyapunov margins
    Certify,
    /// Large-η and large-κ probes
    Asymptotics,
    /// The damped oscillator example
    Oscillator,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Threshold => "threshold",
            Command::Decay => "decay",
            Command::Simulate => "simulate",
            Command::Certify => "certify",
            Command::Asymptotics => "asymptotics",
            Command::Oscillator => "oscillator",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridScale {
    Lin,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub scale: GridScale,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        mgt_fourier::optimize::grid(self.min, self.max, self.steps, self.scale == GridScale::Log)
    }
}

/// Validated settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: SystemParams,
    pub modes: usize,
    pub grid: GridSpec,
    pub dt: f64,
    pub t_end: f64,
    pub x0: [f64; 4],
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let params = SystemParams::new(
            cli.alpha,
            cli.beta,
            cli.gamma,
            cli.kappa,
            cli.eta,
            cli.lambda1,
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        let modes = cli.modes.unwrap_or(if cli.command == Command::Certify {
            10
        } else {
            1
        });
        if modes == 0 {
            return Err(CliError::Usage("--modes must be at least 1".into()));
        }
        let default_grid = match cli.command {
            Command::Threshold => GridSpec {
                min: 0.1,
                max: 10.0,
                steps: 100,
                scale: GridScale::Log,
            },
            _ => GridSpec {
                min: 0.5,
                max: 5.0,
                steps: 451,
                scale: GridScale::Lin,
            },
        };
        let grid = GridSpec {
            min: cli.grid_min.unwrap_or(default_grid.min),
            max: cli.grid_max.unwrap_or(default_grid.max),
            steps: cli.grid_steps.unwrap_or(default_grid.steps),
            scale: cli.grid_scale.unwrap_or(default_grid.scale),
        };
        if !(grid.min.is_finite() && grid.max.is_finite() && grid.min <= grid.max) {
            return Err(CliError::Usage(format!(
                "grid needs finite --grid-min <= --grid-max, got {} and {}",
                grid.min, grid.max
            )));
        }
        if grid.steps == 0 {
            return Err(CliError::Usage("--grid-steps must be at least 1".into()));
        }
        if grid.scale == GridScale::Log && grid.min <= 0.0 {
            return Err(CliError::Usage("a log grid needs --grid-min > 0".into()));
        }
        if cli.command == Command::Threshold && grid.min <= 0.0 {
            return Err(CliError::Usage("kappa grid must be positive".into()));
        }

        let lmax = params.lambda1 * (modes * modes) as f64;
        let dt_limit = 0.1 / (params.kappa * lmax + params.eta * params.eta * lmax + 1.0);
        let dt = match cli.dt {
            Some(dt) if !(dt > 0.0 && dt.is_finite()) => {
                return Err(CliError::Usage(format!("--dt must be > 0, got {dt}")));
            }
            Some(dt) if cli.command == Command::Simulate && dt > dt_limit => {
                return Err(CliError::Usage(format!(
                    "--dt {dt} exceeds the stability limit {dt_limit:e} for the largest mode"
                )));
            }
            Some(dt) => dt,
            None => dt_limit.min(1e-3),
        };
        if !(cli.t_end >= dt && cli.t_end.is_finite()) {
            return Err(CliError::Usage(format!(
                "--t-end must be >= dt, got {}",
                cli.t_end
            )));
        }
        let x0 = [cli.u0, cli.v0, cli.w0, cli.theta0];
        if x0.iter().any(|c| !c.is_finite()) {
            return Err(CliError::Usage("initial data must be finite".into()));
        }
        if cli.workers == Some(0) {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        Ok(Self {
            command: cli.command,
            params,
            modes,
            grid,
            dt,
            t_end: cli.t_end,
            x0,
            out: cli.out.clone(),
            workers: cli.workers,
        })
    }

    pub fn spectrum(&self) -> Vec<f64> {
        (1..=self.modes)
            .map(|k| self.params.lambda1 * (k * k) as f64)
            .collect()
    }

    /// Resolved flag set, recorded in every output header.
    pub fn flag_line(&self) -> String {
        let p = &self.params;
        let g = &self.grid;
        let scale = match g.scale {
            GridScale::Lin => "lin",
            GridScale::Log => "log",
        };
        format!(
            "--alpha {} --beta {} --gamma {} --kappa {} --eta {} --lambda1 {} --modes {} \
             --grid-min {} --grid-max {} --grid-steps {} --grid-scale {scale} --dt {} --t-end {} \
             --u0 {} --v0 {} --w0 {} --theta0 {}",
            p.alpha,
            p.beta,
            p.gamma,
            p.kappa,
            p.eta,
            p.lambda1,
            self.modes,
            g.min,
            g.max,
            g.steps,
            self.dt,
            self.t_end,
            self.x0[0],
            self.x0[1],
            self.x0[2],
            self.x0[3],
        )
    }
}
