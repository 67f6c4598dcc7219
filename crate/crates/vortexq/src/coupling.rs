//! Transfer channels, selection rules, and the quadrupole Rabi frequency.
//!
//! In the quadrupole interaction the field enters through its gradient, so
//! the Rabi frequency at a point combines two transverse logarithmic
//! derivative factors G and H of the beam profile with the longitudinal
//! factor i k, each weighted by a polarization-contracted moment:
//!
//!   Omega = pref * (u / hbar) * (G Q1 + H Q2 + i k Q3)
//!
//! On circular polarization the moments collapse onto single transfer
//! channels labelled by delta_m, and the general form reduces to closed
//! expressions per channel. Total angular momentum fixes the vortex charge
//! a channel can absorb from, ell = delta_m - sigma_z, and the rank-2
//! operator caps |delta_m| at 2.
//!
//! Closed forms are evaluated in a node-safe arrangement: wherever the
//! ratio L'/L of a Laguerre polynomial and its derivative appears, it is
//! multiplied back through the profile as envelope * L' so radial nodes of
//! L never divide by zero. The raw factors [`gradient_g`] and
//! [`gradient_h`] keep the literal pole structure and are singular on
//! those nodes and on the axis.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::atomic::{ModifiedMoments, TransitionLine};
use crate::beam::{LGMode, Polarization, Position};
use crate::constants::{BOHR_RADIUS, ELEMENTARY_CHARGE, HBAR};
use crate::specfun::{assoc_laguerre, assoc_laguerre_deriv};

/// Gate factors below this modulus count as a closed channel.
const GATE_EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum CouplingError {
    #[error("sigma_z must be +1 or -1 for a circularly polarized beam, got {0}")]
    SigmaOutOfScope(i32),
    #[error("|delta_m| = {} exceeds the rank-2 limit of 2", .delta_m.abs())]
    MultipolarityExceeded { delta_m: i32 },
    #[error(
        "angular momentum balance requires ell = delta_m - sigma_z; \
         got ell={ell} with delta_m={delta_m}, sigma_z={sigma_z}"
    )]
    TamViolation {
        delta_m: i32,
        ell: i32,
        sigma_z: i32,
    },
    #[error(
        "the (alpha {sign} i beta) gate closes the delta_m={delta_m} channel \
         for this polarization"
    )]
    GatedPolarization { delta_m: i32, sign: char },
    #[error("the transverse gradient factors are singular on the beam axis")]
    OnAxis,
    #[error("delta_m={0} is not a quadrupole transfer case")]
    UnsupportedDeltaM(i32),
}

/// What a channel transfers to the internal state beyond the photon spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    /// delta_m = 0: spin and orbital contributions cancel.
    NoOamTransfer,
    /// |delta_m| = 1: one unit of orbital angular momentum is absorbed.
    OamTransfer,
    /// |delta_m| = 2: the full two units of total angular momentum land on
    /// the electron.
    TamTransfer,
}

impl ChannelKind {
    fn from_delta_m(delta_m: i32) -> Self {
        match delta_m.abs() {
            0 => ChannelKind::NoOamTransfer,
            1 => ChannelKind::OamTransfer,
            _ => ChannelKind::TamTransfer,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ChannelKind::NoOamTransfer => "no-oam-transfer",
            ChannelKind::OamTransfer => "oam-transfer",
            ChannelKind::TamTransfer => "tam-transfer",
        }
    }
}

/// One allowed transfer channel: the magnetic quantum number change, the
/// vortex charge feeding it, and the photon spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Channel {
    delta_m: i32,
    ell: i32,
    sigma_z: i32,
    kind: ChannelKind,
}

impl Channel {
    /// Checks the angular momentum balance and the rank-2 cap, but not the
    /// polarization gate; see [`validate_channel`] for the full rule set.
    pub fn new(delta_m: i32, ell: i32, sigma_z: i32) -> Result<Self, CouplingError> {
        if sigma_z != 1 && sigma_z != -1 {
            return Err(CouplingError::SigmaOutOfScope(sigma_z));
        }
        if delta_m.abs() > 2 {
            return Err(CouplingError::MultipolarityExceeded { delta_m });
        }
        if ell != delta_m - sigma_z {
            return Err(CouplingError::TamViolation {
                delta_m,
                ell,
                sigma_z,
            });
        }
        Ok(Self {
            delta_m,
            ell,
            sigma_z,
            kind: ChannelKind::from_delta_m(delta_m),
        })
    }

    pub fn delta_m(&self) -> i32 {
        self.delta_m
    }

    pub fn ell(&self) -> i32 {
        self.ell
    }

    pub fn sigma_z(&self) -> i32 {
        self.sigma_z
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    /// Human-readable name of the gate factor selecting this channel.
    pub fn gate_label(&self) -> &'static str {
        match self.delta_m.signum() {
            1 => "alpha+i*beta",
            -1 => "alpha-i*beta",
            _ => "none",
        }
    }
}

/// The complex factor multiplying channels with delta_m != 0; channels
/// with delta_m = 0 are ungated (factor 1).
pub fn polarization_gate(delta_m: i32, pol: &Polarization) -> C64 {
    match delta_m.signum() {
        1 => pol.alpha() + C64::i() * pol.beta(),
        -1 => pol.alpha() - C64::i() * pol.beta(),
        _ => C64::new(1.0, 0.0),
    }
}

/// Applies every selection rule, including the polarization gate, and
/// returns the channel if it survives.
pub fn validate_channel(
    delta_m: i32,
    ell: i32,
    sigma_z: i32,
    pol: &Polarization,
) -> Result<Channel, CouplingError> {
    let channel = Channel::new(delta_m, ell, sigma_z)?;
    if delta_m != 0 && polarization_gate(delta_m, pol).norm() < GATE_EPS {
        return Err(CouplingError::GatedPolarization {
            delta_m,
            sign: if delta_m > 0 { '+' } else { '-' },
        });
    }
    Ok(channel)
}

/// All channels a circularly polarized vortex opens on a line of the given
/// multipolarity, sorted by rising delta_m. For sigma_z = -1 these are
/// (delta_m, ell) = (0, 1), (1, 2), (2, 3); sigma_z = +1 mirrors them.
pub fn allowed_channels(
    line: &TransitionLine,
    sigma_z: i32,
) -> Result<Vec<Channel>, CouplingError> {
    if sigma_z != 1 && sigma_z != -1 {
        return Err(CouplingError::SigmaOutOfScope(sigma_z));
    }
    let pol = Polarization::circular(sigma_z);
    let reach = line.multipolarity_l().min(2) as i32;
    let mut channels = Vec::new();
    for delta_m in -reach..=reach {
        let ell = delta_m - sigma_z;
        if let Ok(channel) = validate_channel(delta_m, ell, sigma_z, &pol) {
            channels.push(channel);
        }
    }
    Ok(channels)
}

/// Overall sign and weight of the interaction term in the Rabi frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Prefactor +1: the bare interaction matrix element over hbar.
    #[default]
    Full,
    /// Prefactor -1/2: the rotating-frame coupling coefficient.
    NegativeHalf,
}

impl Convention {
    pub fn prefactor(self) -> f64 {
        match self {
            Convention::Full => 1.0,
            Convention::NegativeHalf => -0.5,
        }
    }
}

/// Natural Rabi scales of a beam/transition pairing, in 1/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiScaling {
    /// E_k00 |Q_xx| e a0^2 / (hbar w0), the transverse-gradient scale.
    pub omega_01: f64,
    /// E_k00 |Q_xz| e a0^2 / (hbar w0), the longitudinal scale.
    pub omega_02: f64,
    /// omega_01 * xi, the headline scale quoted against the linewidth.
    pub omega_0: f64,
    /// Waist in wavelengths, w0 / lambda.
    pub xi: f64,
}

/// Builds the Rabi scales from the beam and the two element magnitudes (in
/// e a0^2) that feed the transverse and longitudinal couplings.
pub fn scaling_factors(mode: &LGMode, q_xx_abs: f64, q_xz_abs: f64) -> RabiScaling {
    let per_moment =
        mode.peak_field() * ELEMENTARY_CHARGE * BOHR_RADIUS * BOHR_RADIUS / (HBAR * mode.waist());
    let omega_01 = per_moment * q_xx_abs;
    RabiScaling {
        omega_01,
        omega_02: per_moment * q_xz_abs,
        omega_0: omega_01 * mode.xi(),
        xi: mode.xi(),
    }
}

/// Transverse factor G = (1/u) du/dX + i dtheta/dX at a point, in 1/m.
///
/// Singular on the beam axis and at radial nodes of the Laguerre factor;
/// the closed channel forms avoid both.
pub fn gradient_g(mode: &LGMode, pos: &Position) -> Result<C64, CouplingError> {
    gradient_factors(mode, pos).map(|(g, _)| g)
}

/// Transverse factor H, the Y-counterpart of [`gradient_g`], in 1/m.
pub fn gradient_h(mode: &LGMode, pos: &Position) -> Result<C64, CouplingError> {
    gradient_factors(mode, pos).map(|(_, h)| h)
}

fn gradient_factors(mode: &LGMode, pos: &Position) -> Result<(C64, C64), CouplingError> {
    let rho2 = pos.x * pos.x + pos.y * pos.y;
    if rho2 == 0.0 {
        return Err(CouplingError::OnAxis);
    }
    let w0 = mode.waist();
    let ell = mode.ell() as f64;
    let ell_abs = mode.ell().unsigned_abs() as f64;
    let params = mode.laguerre_params();
    let t = 2.0 * rho2 / (w0 * w0);
    let log_deriv = 4.0 / (w0 * w0) * assoc_laguerre_deriv(params, t) / assoc_laguerre(params, t);
    let radial = ell_abs / rho2 - 2.0 / (w0 * w0) + log_deriv;
    let g = C64::new(radial * pos.x, -ell * pos.y / rho2);
    let h = C64::new(radial * pos.y, ell * pos.x / rho2);
    Ok((g, h))
}

/// The general-form Rabi frequency in 1/s: pref (u/hbar)(G Q1 + H Q2 + i k Q3)
/// with the moments in e a0^2. Shares the singularities of [`gradient_g`].
pub fn rabi_general(
    mode: &LGMode,
    moments: &ModifiedMoments,
    pos: &Position,
    convention: Convention,
) -> Result<C64, CouplingError> {
    let (g, h) = gradient_factors(mode, pos)?;
    let u = mode.field_amplitude(pos.rho_bar(mode));
    let moment_scale = ELEMENTARY_CHARGE * BOHR_RADIUS * BOHR_RADIUS / HBAR;
    let k = mode.wavenumber();
    Ok(convention.prefactor()
        * u
        * moment_scale
        * (g * moments.q1 + h * moments.q2 + C64::i() * k * moments.q3))
}

/// Closed form for the delta_m = 0 channel, in 1/s. Node-safe; errors only
/// exactly on the axis.
pub fn rabi_channel_dm0(
    mode: &LGMode,
    scaling: &RabiScaling,
    pos: &Position,
    convention: Convention,
) -> Result<C64, CouplingError> {
    let w0 = mode.waist();
    let xb = pos.x / w0;
    let yb = pos.y / w0;
    let rb2 = xb * xb + yb * yb;
    if rb2 == 0.0 {
        return Err(CouplingError::OnAxis);
    }
    let rb = rb2.sqrt();
    let pol = mode.polarization();
    let along = pol.alpha() * xb + pol.beta() * yb;
    let across = pol.beta() * xb - pol.alpha() * yb;
    let ell = mode.ell() as f64;
    let ell_abs = mode.ell().unsigned_abs() as f64;
    let g = mode.g_profile(rb);
    let env = mode.g_envelope(rb);
    let lder = assoc_laguerre_deriv(mode.laguerre_params(), 2.0 * rb2);
    let inner = along * (ell_abs / rb2 - 2.0) + C64::i() * (ell / rb2) * across;
    Ok(convention.prefactor() * scaling.omega_01 * (g * inner + env * 4.0 * lder * along))
}

/// Closed form for the |delta_m| = 1 channels, in 1/s: the longitudinal
/// coupling -pref omega_02 (alpha +- i beta) k w0 g(rho_bar). Regular
/// everywhere, axis included.
pub fn rabi_channel_dm1(
    mode: &LGMode,
    scaling: &RabiScaling,
    pos: &Position,
    delta_m: i32,
    convention: Convention,
) -> Result<C64, CouplingError> {
    if delta_m.abs() != 1 {
        return Err(CouplingError::UnsupportedDeltaM(delta_m));
    }
    let gate = polarization_gate(delta_m, mode.polarization());
    let g = mode.g_profile(pos.rho_bar(mode));
    Ok(-convention.prefactor() * scaling.omega_02 * gate * (mode.wavenumber() * mode.waist()) * g)
}

/// Closed form for the |delta_m| = 2 channels, in 1/s:
///
///   pref omega_01 (alpha +- i beta)(Xb +- i Yb)
///        { g [ (|ell| -+ ell)/rho_bar^2 - 2 ] + envelope 4 L' }
///
/// with upper signs for delta_m = +2. When the vortex charge matches the
/// channel the 1/rho_bar^2 coefficient vanishes identically. Node-safe;
/// errors only exactly on the axis.
pub fn rabi_channel_dm2(
    mode: &LGMode,
    scaling: &RabiScaling,
    pos: &Position,
    delta_m: i32,
    convention: Convention,
) -> Result<C64, CouplingError> {
    if delta_m.abs() != 2 {
        return Err(CouplingError::UnsupportedDeltaM(delta_m));
    }
    let sign = delta_m.signum() as f64;
    let w0 = mode.waist();
    let xb = pos.x / w0;
    let yb = pos.y / w0;
    let rb2 = xb * xb + yb * yb;
    if rb2 == 0.0 {
        return Err(CouplingError::OnAxis);
    }
    let rb = rb2.sqrt();
    let gate = polarization_gate(delta_m, mode.polarization());
    let zeta = C64::new(xb, sign * yb);
    let ell = mode.ell() as f64;
    let coeff = mode.ell().unsigned_abs() as f64 - sign * ell;
    let g = mode.g_profile(rb);
    let env = mode.g_envelope(rb);
    let lder = assoc_laguerre_deriv(mode.laguerre_params(), 2.0 * rb2);
    let bracket = g * (coeff / rb2 - 2.0) + env * 4.0 * lder;
    Ok(convention.prefactor() * scaling.omega_01 * gate * zeta * bracket)
}

/// Dispatches to the closed form matching the channel's delta_m. The mode
/// must carry the channel's vortex charge.
pub fn rabi_channel(
    mode: &LGMode,
    scaling: &RabiScaling,
    pos: &Position,
    channel: &Channel,
    convention: Convention,
) -> Result<C64, CouplingError> {
    if mode.ell() != channel.ell() {
        return Err(CouplingError::TamViolation {
            delta_m: channel.delta_m(),
            ell: mode.ell(),
            sigma_z: channel.sigma_z(),
        });
    }
    match channel.delta_m() {
        0 => rabi_channel_dm0(mode, scaling, pos, convention),
        dm if dm.abs() == 1 => rabi_channel_dm1(mode, scaling, pos, dm, convention),
        dm => rabi_channel_dm2(mode, scaling, pos, dm, convention),
    }
}
