//! Golden-rule absorption out of a quasi-monochromatic drive.
//!
//! The upper level is broadened into a Lorentzian density of states of
//! width gamma. Fermi's golden rule with the interaction matrix element
//! hbar Omega then gives the angular-momentum absorption rate
//!
//!   Gamma_if = gamma |Omega|^2 / ((omega - omega_a)^2 + (gamma/2)^2)
//!            = 2 pi |Omega|^2 F(omega),
//!
//! which collapses to 4 |Omega|^2 / gamma on resonance. The result is
//! trustworthy while |Omega| stays below gamma; above that the
//! perturbative picture degrades and results are flagged rather than
//! suppressed.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::atomic::TransitionLine;
use crate::beam::{LGMode, Position};
use crate::constants::HBAR;
use crate::coupling::{rabi_channel, Channel, Convention, CouplingError, RabiScaling};

#[derive(Debug, Error, PartialEq)]
pub enum AbsorptionError {
    #[error("the radial grid is empty")]
    EmptyGrid,
    #[error(transparent)]
    Coupling(#[from] CouplingError),
}

/// How the drive frequency is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetuningSpec {
    /// Absolute drive frequency in rad/s.
    DriveFrequency(f64),
    /// Offset from resonance in units of the linewidth:
    /// omega = omega_a + x gamma.
    DetuningOverGamma(f64),
}

impl DetuningSpec {
    pub fn drive_frequency(&self, line: &TransitionLine) -> f64 {
        match *self {
            DetuningSpec::DriveFrequency(omega) => omega,
            DetuningSpec::DetuningOverGamma(x) => line.omega_a() + x * line.gamma(),
        }
    }

    /// omega - omega_a in rad/s.
    pub fn offset(&self, line: &TransitionLine) -> f64 {
        match *self {
            DetuningSpec::DriveFrequency(omega) => omega - line.omega_a(),
            DetuningSpec::DetuningOverGamma(x) => x * line.gamma(),
        }
    }
}

/// Whether the golden-rule treatment is self-consistent at this drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    GoldenRuleOk,
    StrongCouplingWarning,
}

impl Validity {
    pub fn label(self) -> &'static str {
        match self {
            Validity::GoldenRuleOk => "golden-rule-ok",
            Validity::StrongCouplingWarning => "strong-coupling-warning",
        }
    }

    fn for_rabi(rabi_magnitude: f64, line: &TransitionLine) -> Self {
        if rabi_magnitude > line.gamma() {
            Validity::StrongCouplingWarning
        } else {
            Validity::GoldenRuleOk
        }
    }
}

/// Lorentzian density of final states F(omega), normalized to unit area,
/// in seconds: F = (1/pi)(gamma/2) / ((omega - omega_a)^2 + (gamma/2)^2).
pub fn lorentzian_dos(omega: f64, line: &TransitionLine) -> f64 {
    let half = line.gamma() / 2.0;
    let delta = omega - line.omega_a();
    half / (std::f64::consts::PI * (delta * delta + half * half))
}

/// Interaction matrix element hbar Omega e^{i theta} in joules, theta
/// being the local beam phase.
pub fn transition_matrix_element(rabi: C64, theta: f64) -> C64 {
    HBAR * rabi * C64::from_polar(1.0, theta)
}

/// Absorption rate in 1/s for a given local Rabi frequency, plus the
/// validity of the golden-rule assumption behind it.
pub fn absorption_rate(
    rabi: C64,
    line: &TransitionLine,
    detuning: DetuningSpec,
) -> (f64, Validity) {
    let delta = detuning.offset(line);
    let half = line.gamma() / 2.0;
    let rate = line.gamma() * rabi.norm_sqr() / (delta * delta + half * half);
    (rate, Validity::for_rabi(rabi.norm(), line))
}

/// One radial sample of the absorption profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorptionSample {
    /// Radius in waist units.
    pub rho_bar: f64,
    /// |Omega| in 1/s.
    pub rabi_magnitude: f64,
    /// Gamma_if in 1/s.
    pub rate: f64,
    /// Gamma_if / gamma, the natural dimensionless rate.
    pub rate_over_gamma: f64,
    pub validity: Validity,
}

/// Absorption rate along a radial cut for one channel. The grid holds
/// radii in waist units; |Omega| is azimuthally invariant, so the cut is
/// taken along +x without loss of generality.
pub fn rate_profile(
    mode: &LGMode,
    channel: &Channel,
    line: &TransitionLine,
    scaling: &RabiScaling,
    grid: &[f64],
    detuning: DetuningSpec,
    convention: Convention,
) -> Result<Vec<AbsorptionSample>, AbsorptionError> {
    if grid.is_empty() {
        return Err(AbsorptionError::EmptyGrid);
    }
    let mut samples = Vec::with_capacity(grid.len());
    for &rho_bar in grid {
        let pos = Position::new(rho_bar * mode.waist(), 0.0, 0.0);
        let rabi = rabi_channel(mode, scaling, &pos, channel, convention)?;
        let (rate, validity) = absorption_rate(rabi, line, detuning);
        samples.push(AbsorptionSample {
            rho_bar,
            rabi_magnitude: rabi.norm(),
            rate,
            rate_over_gamma: rate / line.gamma(),
            validity,
        });
    }
    Ok(samples)
}
