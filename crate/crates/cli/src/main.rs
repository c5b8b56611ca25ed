//! Scenario runner: configures a simulation from defaults, an optional
//! config file, and command-line flags (which win), executes it, and emits
//! a CSV plus a JSON sidecar that reproduces the run exactly.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical validation
//! failure during propagation.

mod config;
mod output;
mod scenarios;

use clap::{Args, Parser, Subcommand};
use config::*;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "squill",
    version,
    about = "Noisy-qubit dynamics: entangled-pair, teleportation, and CNOT error scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Config file: flat `key = value` lines or a JSON sidecar from a
    /// previous run. Flags override file values.
    #[arg(long, global = false)]
    config: Option<PathBuf>,
    /// Output CSV path (a `<out>.json` sidecar is written next to it).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed for stochastic scenarios; recorded in the sidecar.
    #[arg(long)]
    seed: Option<u64>,
}

/// Lossless value-to-string for feeding typed flags through the same
/// key/value assignment path the config files take.
trait OverrideValue {
    fn render(&self) -> String;
}

impl OverrideValue for f64 {
    fn render(&self) -> String {
        format!("{self:?}") // shortest round-trip form
    }
}

impl OverrideValue for usize {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl OverrideValue for String {
    fn render(&self) -> String {
        self.clone()
    }
}

/// Scenario flags mirror config-file keys one-to-one; every flag here is a
/// `key = value` line in a config file (without the leading dashes).
macro_rules! override_args {
    ($name:ident { $($(#[$meta:meta])* $field:ident : $ty:ty => $key:literal),+ $(,)? }) => {
        #[derive(Args, Debug, Default)]
        struct $name {
            #[command(flatten)]
            common: CommonArgs,
            $(
                $(#[$meta])*
                #[arg(long = $key, allow_negative_numbers = true)]
                $field: Option<$ty>,
            )+
        }

        impl $name {
            fn overrides(&self) -> Vec<(&'static str, String)> {
                let mut out: Vec<(&'static str, String)> = Vec::new();
                $(
                    if let Some(v) = &self.$field {
                        out.push(($key, OverrideValue::render(v)));
                    }
                )+
                out
            }
        }
    };
}

override_args!(TeleportFidelityArgs {
    /// Total dephasing rate Γ₀
    gamma0: f64 => "gamma0",
    /// Total bit-flip rate Γ₁
    gamma1: f64 => "gamma1",
    t_max: f64 => "t-max",
    steps: usize => "steps",
});

override_args!(BellTraceArgs {
    eps_a: f64 => "eps-a",
    eps_b: f64 => "eps-b",
    j_a: f64 => "j-a",
    j_b: f64 => "j-b",
    /// independent | collective
    bath: String => "bath",
    gamma0a: f64 => "gamma0a",
    gamma0b: f64 => "gamma0b",
    gamma1a: f64 => "gamma1a",
    gamma1b: f64 => "gamma1b",
    gamma0: f64 => "gamma0",
    gamma1: f64 => "gamma1",
    t_max: f64 => "t-max",
    steps: usize => "steps",
});

override_args!(CollectiveBathArgs {
    gamma0: f64 => "gamma0",
    gamma1: f64 => "gamma1",
    /// Initial Bell state 1..=4
    bell_state: usize => "bell-state",
    t_max: f64 => "t-max",
    steps: usize => "steps",
});

override_args!(CnotTimeResolvedArgs {
    gamma0: f64 => "gamma0",
    gamma1: f64 => "gamma1",
    gamma2: f64 => "gamma2",
    eps0: f64 => "eps0",
    j0: f64 => "j0",
    g0: f64 => "g0",
    /// Input basis state: 00 | 01 | 10 | 11
    input: String => "input",
    samples_per_segment: usize => "samples-per-segment",
});

override_args!(CnotNoiseSweepArgs {
    /// gamma0 | gamma1 | gamma2 | all
    axis: String => "axis",
    gamma_min: f64 => "gamma-min",
    gamma_max: f64 => "gamma-max",
    points: usize => "points",
    eps0: f64 => "eps0",
    j0: f64 => "j0",
    g0: f64 => "g0",
});

override_args!(CnotAdditivityArgs {
    /// g0g1 | g1g2 | g0g2 | all
    combo: String => "combo",
    gamma_min: f64 => "gamma-min",
    gamma_max: f64 => "gamma-max",
    points: usize => "points",
    eps0: f64 => "eps0",
    j0: f64 => "j0",
    g0: f64 => "g0",
});

override_args!(CnotG0SweepArgs {
    /// constant | linear | quadratic
    g0_model: String => "g0-model",
    g0_min: f64 => "g0-min",
    g0_max: f64 => "g0-max",
    points: usize => "points",
    gamma0: f64 => "gamma0",
    gamma1: f64 => "gamma1",
    gamma2_coeff: f64 => "gamma2-coeff",
    eps0: f64 => "eps0",
    j0: f64 => "j0",
});

override_args!(McValidateArgs {
    /// epr | flipflop
    benchmark: String => "benchmark",
    gamma0: f64 => "gamma0",
    gamma1: f64 => "gamma1",
    gamma2: f64 => "gamma2",
    trajectories: usize => "trajectories",
    dt: f64 => "dt",
    t_max: f64 => "t-max",
    stride: usize => "stride",
});

#[derive(Subcommand)]
enum Command {
    /// Teleportation-channel fidelity of the four Bell states over time
    TeleportFidelity(TeleportFidelityArgs),
    /// Bell-state fidelity traces for arbitrary pair fields and bath
    BellTrace(BellTraceArgs),
    /// Bell populations under a common bath (invariant states included)
    CollectiveBath(CollectiveBathArgs),
    /// Time-resolved populations across the seven-segment CNOT
    CnotTimeResolved(CnotTimeResolvedArgs),
    /// Gate fidelity/purity/error along a noise-strength axis
    CnotNoiseSweep(CnotNoiseSweepArgs),
    /// Joint versus summed errors when noise types coexist
    CnotAdditivity(CnotAdditivityArgs),
    /// Gate error against inter-qubit coupling strength
    CnotG0Sweep(CnotG0SweepArgs),
    /// Monte Carlo trajectory average versus the master equation
    McValidate(McValidateArgs),
}

enum AppError {
    Config(String),
    Numerical(String),
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<squill_core::Error> for AppError {
    fn from(e: squill_core::Error) -> Self {
        AppError::Numerical(e.to_string())
    }
}

fn resolve(
    mut params: ScenarioParams,
    common: &CommonArgs,
    overrides: Vec<(&'static str, String)>,
) -> Result<RunConfig, AppError> {
    let mut seed = 0u64;
    if let Some(path) = &common.config {
        apply_config_file(&mut params, &mut seed, path)?;
    }
    for (key, value) in overrides {
        params.set(key, &value)?;
    }
    if let Some(s) = common.seed {
        seed = s;
    }
    params.validate()?;
    let out = common
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", params.name())));
    Ok(RunConfig { params, seed, out })
}

fn dispatch(command: Command) -> Result<RunConfig, AppError> {
    match command {
        Command::TeleportFidelity(a) => resolve(
            ScenarioParams::TeleportFidelity(Default::default()),
            &a.common,
            a.overrides(),
        ),
        Command::BellTrace(a) => resolve(
            ScenarioParams::BellTrace(Default::default()),
            &a.common,
            a.overrides(),
        ),
        Command::CollectiveBath(a) => resolve(
            ScenarioParams::CollectiveBath(Default::default()),
            &a.common,
            a.overrides(),
        ),
        Command::CnotTimeResolved(a) => resolve(
            ScenarioParams::CnotTimeResolved(Default::default()),
            &a.common,
            a.overrides(),
        ),
        Command::CnotNoiseSweep(a) => resolve(
            ScenarioParams::CnotNoiseSweep(Default::default()),
            &a.common,
            a.overrides(),
        ),
        Command::CnotAdditivity(a) => resolve(
            ScenarioParams::CnotAdditivity(Default::default()),
            &a.common,
            a.overrides(),
        ),
        Command::CnotG0Sweep(a) => resolve(
            ScenarioParams::CnotG0Sweep(Default::default()),
            &a.common,
            a.overrides(),
        ),
        Command::McValidate(a) => resolve(
            ScenarioParams::McValidate(Default::default()),
            &a.common,
            a.overrides(),
        ),
    }
}

fn run(command: Command) -> Result<(), AppError> {
    let config = dispatch(command)?;
    let table = scenarios::run(&config)?;
    table.check().map_err(AppError::Numerical)?;

    output::write_csv(&config.out, &table)
        .map_err(|e| AppError::Config(format!("writing {}: {e}", config.out.display())))?;
    let sidecar = Sidecar {
        artifact: "squill".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: config.seed,
        params: config.params.clone(),
    };
    output::write_sidecar(&config.out, &sidecar)
        .map_err(|e| AppError::Config(format!("writing sidecar: {e}")))?;
    println!(
        "wrote {} ({} rows) and {}",
        config.out.display(),
        table.rows.len(),
        output::sidecar_path(&config.out).display()
    );
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Config(message)) => {
            eprintln!("config error: {message}");
            ExitCode::from(2)
        }
        Err(AppError::Numerical(message)) => {
            eprintln!("numerical failure: {message}");
            ExitCode::from(3)
        }
    }
}
