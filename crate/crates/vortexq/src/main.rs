//! Command-line entry point.
//!
//! Configuration is layered: built-in defaults, then an optional
//! `--config` key=value file, then individual flags. The effective
//! configuration is echoed in every output header, and a fixed numeric
//! rendering makes identical configurations produce byte-identical files.
//! Exit codes: 0 success, 1 failed validation checks, 2 configuration or
//! selection-rule rejection, 3 numerical or I/O failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use vortexq::cli::{
    cmd_channels, cmd_matrix_elements, cmd_rabi, cmd_rate, cmd_validate, CliError, OutputFormat,
};
use vortexq::config::{
    parse_convention, parse_f64, parse_int, ConfigError, PartialConfig, QSetting, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "vortexq",
    version,
    about = "Quadrupole Rabi frequencies and absorption rates of atoms in twisted light"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the per-case quadrupole tensors and polarization-contracted moments
    MatrixElements(RunArgs),
    /// Emit the radial profile of the channel Rabi frequency
    Rabi(RunArgs),
    /// Emit the radial profile of the golden-rule absorption rate
    Rate(RunArgs),
    /// List the angular-momentum transfer channels the beam opens
    Channels(RunArgs),
    /// Run the self-check suite, one JSON report per line
    Validate(RunArgs),
}

impl Command {
    fn args(&self) -> &RunArgs {
        match self {
            Command::MatrixElements(a)
            | Command::Rabi(a)
            | Command::Rate(a)
            | Command::Channels(a)
            | Command::Validate(a) => a,
        }
    }
}

/// Flags shared by every subcommand. Value flags mirror the config-file
/// keys; they are parsed by the same routines so both layers accept the
/// same spellings.
#[derive(Args)]
struct RunArgs {
    /// Key=value config file applied between defaults and flags
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output destination: a path, or '-' for standard output
    #[arg(long, default_value = "-")]
    out: String,

    /// Output serialization
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Vacuum wavelength in nm
    #[arg(long, allow_negative_numbers = true)]
    wavelength_nm: Option<String>,

    /// Beam intensity in W/m^2
    #[arg(long, allow_negative_numbers = true)]
    intensity_w_per_m2: Option<String>,

    /// Upper-level linewidth in 1/s
    #[arg(long, allow_negative_numbers = true)]
    gamma_s_per_s: Option<String>,

    /// |Q_xx| in e*a0^2, or "compute" for the wavefunction model
    #[arg(long, allow_negative_numbers = true)]
    q_xx_ea02: Option<String>,

    /// |Q_xz| in e*a0^2, or "compute" for the wavefunction model
    #[arg(long, allow_negative_numbers = true)]
    q_xz_ea02: Option<String>,

    /// Effective nuclear charge of the wavefunction model
    #[arg(long, allow_negative_numbers = true)]
    z_eff: Option<String>,

    /// Vortex winding number; defaults to delta_m - sigma_z
    #[arg(long, allow_negative_numbers = true)]
    ell: Option<String>,

    /// Radial mode number
    #[arg(long, allow_negative_numbers = true)]
    p: Option<String>,

    /// Magnetic quantum number change of the transition
    #[arg(long, allow_negative_numbers = true)]
    delta_m: Option<String>,

    /// Photon spin: +1 right circular, -1 left circular
    #[arg(long, allow_negative_numbers = true)]
    sigma_z: Option<String>,

    /// Beam waist in wavelengths
    #[arg(long, allow_negative_numbers = true)]
    waist_over_lambda: Option<String>,

    /// Drive detuning from resonance in linewidths
    #[arg(long, allow_negative_numbers = true)]
    detuning_over_gamma: Option<String>,

    /// Radial grid extent in waist units
    #[arg(long, allow_negative_numbers = true)]
    rho_max_over_waist: Option<String>,

    /// Number of radial grid points
    #[arg(long, allow_negative_numbers = true)]
    samples: Option<String>,

    /// Rabi sign/weight convention: paper-eq12 or hamiltonian-eq5p
    #[arg(long)]
    convention: Option<String>,
}

impl RunArgs {
    fn to_partial(&self) -> Result<PartialConfig, ConfigError> {
        let mut partial = PartialConfig::default();
        if let Some(v) = &self.wavelength_nm {
            partial.wavelength_nm = Some(parse_f64("wavelength_nm", v)?);
        }
        if let Some(v) = &self.intensity_w_per_m2 {
            partial.intensity_w_per_m2 = Some(parse_f64("intensity_W_per_m2", v)?);
        }
        if let Some(v) = &self.gamma_s_per_s {
            partial.gamma_s_per_s = Some(parse_f64("gamma_s_per_s", v)?);
        }
        if let Some(v) = &self.q_xx_ea02 {
            partial.q_xx_ea02 = Some(QSetting::parse("q_xx_ea02", v)?);
        }
        if let Some(v) = &self.q_xz_ea02 {
            partial.q_xz_ea02 = Some(QSetting::parse("q_xz_ea02", v)?);
        }
        if let Some(v) = &self.z_eff {
            partial.z_eff = Some(parse_f64("z_eff", v)?);
        }
        if let Some(v) = &self.ell {
            partial.ell = Some(parse_int("ell", v)?);
        }
        if let Some(v) = &self.p {
            partial.p = Some(parse_int("p", v)?);
        }
        if let Some(v) = &self.delta_m {
            partial.delta_m = Some(parse_int("delta_m", v)?);
        }
        if let Some(v) = &self.sigma_z {
            partial.sigma_z = Some(parse_int("sigma_z", v)?);
        }
        if let Some(v) = &self.waist_over_lambda {
            partial.waist_over_lambda = Some(parse_f64("waist_over_lambda", v)?);
        }
        if let Some(v) = &self.detuning_over_gamma {
            partial.detuning_over_gamma = Some(parse_f64("detuning_over_gamma", v)?);
        }
        if let Some(v) = &self.rho_max_over_waist {
            partial.rho_max_over_waist = Some(parse_f64("rho_max_over_waist", v)?);
        }
        if let Some(v) = &self.samples {
            partial.samples = Some(parse_int("samples", v)?);
        }
        if let Some(v) = &self.convention {
            partial.convention = Some(parse_convention("convention", v)?);
        }
        Ok(partial)
    }
}

fn load_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Some(PartialConfig::parse(&text)?)
        }
        None => None,
    };
    let flags = args.to_partial()?;
    Ok(RunConfig::resolve(file.as_ref(), &flags)?)
}

/// Writes the buffered output in one shot, so a file target receives
/// exactly the bytes stdout would, and failed runs leave no partial file.
fn write_output(target: &str, bytes: &[u8]) -> std::io::Result<()> {
    if target == "-" {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        lock.write_all(bytes)?;
        lock.flush()
    } else {
        fs::write(target, bytes)
    }
}

fn run() -> i32 {
    let cli = Cli::parse();
    let args = cli.command.args();
    let cfg = match load_config(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let mut buffer: Vec<u8> = Vec::new();
    let outcome = match &cli.command {
        Command::MatrixElements(_) => {
            cmd_matrix_elements(&cfg, args.format, &mut buffer).map(|()| true)
        }
        Command::Rabi(_) => cmd_rabi(&cfg, args.format, &mut buffer).map(|()| true),
        Command::Rate(_) => cmd_rate(&cfg, args.format, &mut buffer).map(|()| true),
        Command::Channels(_) => cmd_channels(&cfg, args.format, &mut buffer).map(|()| true),
        Command::Validate(_) => cmd_validate(&cfg, &mut buffer),
    };
    let all_passed = match outcome {
        Ok(flag) => flag,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = write_output(&args.out, &buffer) {
        eprintln!("error: cannot write {}: {e}", args.out);
        return 3;
    }
    if all_passed {
        0
    } else {
        1
    }
}

fn main() {
    std::process::exit(run());
}
