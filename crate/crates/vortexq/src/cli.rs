//! Subcommand implementations behind the `vortexq` binary.
//!
//! Every command produces a [`Table`] and serializes it through [`emit`],
//! which prefixes the effective configuration so an output file alone
//! suffices to reproduce its run. Numeric cells are rendered with nine
//! significant digits in scientific notation; together with the fixed
//! column order this makes identical configurations yield byte-identical
//! output.

use std::io::Write;

use thiserror::Error;

use crate::absorption::{rate_profile, AbsorptionError};
use crate::atomic::{channel_moment_tensor, modified_moments, AtomicError, Axis};
use crate::beam::{BeamError, Position};
use crate::config::{ConfigError, RunConfig};
use crate::coupling::{
    allowed_channels, polarization_gate, rabi_channel, scaling_factors, ChannelKind, CouplingError,
};
use crate::oracle::run_suite;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Beam(#[from] BeamError),
    #[error(transparent)]
    Atomic(#[from] AtomicError),
    #[error(transparent)]
    Absorption(#[from] AbsorptionError),
    #[error("output failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit status: 2 for configuration or selection-rule
    /// rejections, 3 for numerical or I/O failures past a valid config.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Coupling(_) | CliError::Beam(_) => 2,
            CliError::Atomic(_) | CliError::Absorption(_) | CliError::Io(_) | CliError::Json(_) => {
                3
            }
        }
    }
}

/// Output serialization chosen by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// One table value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    /// CSV rendering: nine significant digits for floats, en-locale decimal
    /// point always.
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => format!("{v}"),
            Cell::Num(v) => format!("{v:.8e}"),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Num(v) => serde_json::Value::from(*v),
            Cell::Text(v) => serde_json::Value::from(v.clone()),
        }
    }
}

/// A column-labeled result table, the common shape of every subcommand.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// Writes the table with the effective configuration attached: as CSV with
/// `# key=value` header lines, or as one JSON object with `config`,
/// `columns`, and `rows` members.
pub fn emit(
    out: &mut dyn Write,
    cfg: &RunConfig,
    table: &Table,
    format: OutputFormat,
) -> Result<(), CliError> {
    debug_assert!(table.rows.iter().all(|r| r.len() == table.columns.len()));
    match format {
        OutputFormat::Csv => {
            for (key, value) in cfg.echo_pairs() {
                writeln!(out, "# {key}={value}")?;
            }
            writeln!(out, "{}", table.columns.join(","))?;
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        OutputFormat::Json => {
            let config: serde_json::Map<String, serde_json::Value> = cfg
                .echo_pairs()
                .into_iter()
                .map(|(k, v)| (k.to_string(), serde_json::Value::from(v)))
                .collect();
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| serde_json::Value::from(row.iter().map(Cell::json).collect::<Vec<_>>()))
                .collect();
            let value = serde_json::json!({
                "config": config,
                "columns": table.columns,
                "rows": rows,
            });
            writeln!(out, "{}", serde_json::to_string(&value)?)?;
        }
    }
    Ok(())
}

/// The effective quadrupole tensor of each transfer case, its polarization
/// gate, and the polarization-contracted moments.
///
/// Magnitudes are resolved per case (numeric overrides pass through,
/// computed values use the case's own magnetic quantum number) so every row
/// shows the tensor the channel formulas would actually use.
pub fn cmd_matrix_elements(
    cfg: &RunConfig,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let pol = cfg.polarization();
    let mut table = Table {
        columns: vec![
            "delta_m", "q_xx_re", "q_xx_im", "q_xy_re", "q_xy_im", "q_yy_re", "q_yy_im", "q_zx_re",
            "q_zx_im", "q_zy_re", "q_zy_im", "gate_abs", "mq1_re", "mq1_im", "mq2_re", "mq2_im",
            "mq3_re", "mq3_im",
        ],
        rows: Vec::new(),
    };
    for delta_m in -2..=2 {
        let case = RunConfig {
            delta_m,
            ..cfg.clone()
        };
        let (q_xx, q_xz) = case.resolve_magnitudes()?;
        let tensor = channel_moment_tensor(delta_m, q_xx, q_xz);
        let moments = modified_moments(&tensor, &pol);
        let mut row = vec![Cell::Int(delta_m as i64)];
        for (a, b) in [
            (Axis::X, Axis::X),
            (Axis::X, Axis::Y),
            (Axis::Y, Axis::Y),
            (Axis::Z, Axis::X),
            (Axis::Z, Axis::Y),
        ] {
            let q = tensor.component(a, b);
            row.push(Cell::Num(q.re));
            row.push(Cell::Num(q.im));
        }
        row.push(Cell::Num(polarization_gate(delta_m, &pol).norm()));
        for m in [moments.q1, moments.q2, moments.q3] {
            row.push(Cell::Num(m.re));
            row.push(Cell::Num(m.im));
        }
        table.rows.push(row);
    }
    emit(out, cfg, &table, format)
}

/// Radial profile of |Omega|/Omega_0 against rho/lambda for the configured
/// channel, sampled along the +x cut (the modulus is azimuthally
/// invariant).
pub fn cmd_rabi(
    cfg: &RunConfig,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let channel = cfg.channel()?;
    let mode = cfg.mode()?;
    let (q_xx, q_xz) = cfg.resolve_magnitudes()?;
    let scaling = scaling_factors(&mode, q_xx, q_xz);
    let mut table = Table {
        columns: vec!["rho_over_wavelength", "omega_over_omega0"],
        rows: Vec::new(),
    };
    for rho_bar in cfg.grid() {
        let pos = Position::new(rho_bar * mode.waist(), 0.0, 0.0);
        let rabi = rabi_channel(&mode, &scaling, &pos, &channel, cfg.convention)?;
        table.rows.push(vec![
            Cell::Num(rho_bar * scaling.xi),
            Cell::Num(rabi.norm() / scaling.omega_0),
        ]);
    }
    emit(out, cfg, &table, format)
}

/// Radial profile of the golden-rule absorption rate in linewidth units,
/// with the validity flag of each sample.
pub fn cmd_rate(
    cfg: &RunConfig,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let channel = cfg.channel()?;
    let mode = cfg.mode()?;
    let line = cfg.line()?;
    let (q_xx, q_xz) = cfg.resolve_magnitudes()?;
    let scaling = scaling_factors(&mode, q_xx, q_xz);
    let samples = rate_profile(
        &mode,
        &channel,
        &line,
        &scaling,
        &cfg.grid(),
        cfg.detuning(),
        cfg.convention,
    )?;
    let mut table = Table {
        columns: vec!["rho_over_wavelength", "rate_over_gammaS", "validity_flag"],
        rows: Vec::new(),
    };
    for sample in samples {
        table.rows.push(vec![
            Cell::Num(sample.rho_bar * scaling.xi),
            Cell::Num(sample.rate_over_gamma),
            Cell::Text(sample.validity.label().to_string()),
        ]);
    }
    emit(out, cfg, &table, format)
}

/// Enumerates the transfer channels the configured circulation opens on
/// the transition, marking the dominant single-unit transfer.
pub fn cmd_channels(
    cfg: &RunConfig,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let line = cfg.line()?;
    let channels = allowed_channels(&line, cfg.sigma_z)?;
    let mut table = Table {
        columns: vec![
            "delta_m",
            "ell",
            "sigma_z",
            "kind",
            "gating_polarization",
            "dominant",
        ],
        rows: Vec::new(),
    };
    for channel in channels {
        let dominant = if channel.kind() == ChannelKind::OamTransfer {
            "yes"
        } else {
            "no"
        };
        table.rows.push(vec![
            Cell::Int(channel.delta_m() as i64),
            Cell::Int(channel.ell() as i64),
            Cell::Int(channel.sigma_z() as i64),
            Cell::Text(channel.kind().label().to_string()),
            Cell::Text(channel.gate_label().to_string()),
            Cell::Text(dominant.to_string()),
        ]);
    }
    emit(out, cfg, &table, format)
}

/// Runs the self-check suite, one JSON report per line, and returns whether
/// every check passed so the caller can set the exit status.
pub fn cmd_validate(cfg: &RunConfig, out: &mut dyn Write) -> Result<bool, CliError> {
    let mut all_passed = true;
    for report in run_suite(cfg.convention) {
        writeln!(out, "{}", serde_json::to_string(&report)?)?;
        all_passed &= report.pass;
    }
    Ok(all_passed)
}
