//! Laguerre-Gaussian beam model near the waist.
//!
//! The mode is described by the dimensionless profile
//!
//!   g_{l,p}(rho_bar) = sqrt(p!/((|l|+p)!)) (sqrt(2) rho_bar)^{|l|}
//!                      L_p^{|l|}(2 rho_bar^2) exp(-rho_bar^2),
//!
//! with rho_bar = rho/w0, a field amplitude u = E_k00 g built from the
//! intensity through I = eps0 c E_k00^2 / 2, and the paraxial near-waist
//! phase theta = k Z + l phi - omega t. The winding number l makes the
//! phase helical and gives each photon l*hbar of orbital angular momentum;
//! the transverse polarization (alpha, beta) carries the spin part.
//!
//! Z-dependent beam spreading, Gouy phase, and wavefront curvature are
//! deliberately outside the model: the phase above is the near-waist
//! approximation, which is the regime every result in this crate lives in.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::constants::{SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::quad::{adaptive_simpson, QuadratureError};
use crate::specfun::{assoc_laguerre, log_factorial_ratio, LaguerreParams};

#[derive(Debug, Error)]
pub enum BeamError {
    #[error("polarization vector must be nonzero")]
    ZeroPolarization,
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("intensity must be non-negative, got {0}")]
    NegativeIntensity(f64),
}

/// Transverse polarization (alpha, beta) in the Cartesian x-y basis,
/// renormalized at construction so |alpha|^2 + |beta|^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polarization {
    alpha: C64,
    beta: C64,
}

impl Polarization {
    pub fn new(alpha: C64, beta: C64) -> Result<Self, BeamError> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(BeamError::ZeroPolarization);
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    /// Linear polarization along x: (1, 0).
    pub fn linear_x() -> Self {
        Self {
            alpha: C64::new(1.0, 0.0),
            beta: C64::new(0.0, 0.0),
        }
    }

    /// Circular polarization with spin +1 (right, (1, i)/sqrt(2)) or
    /// spin -1 (left, (1, -i)/sqrt(2)).
    pub fn circular(sigma_z: i32) -> Self {
        assert!(
            sigma_z == 1 || sigma_z == -1,
            "circular polarization needs sigma_z = +1 or -1"
        );
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            alpha: C64::new(inv_sqrt2, 0.0),
            beta: C64::new(0.0, sigma_z as f64 * inv_sqrt2),
        }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    /// Spin angular momentum per photon, i(alpha beta* - beta alpha*).
    /// +1 for right circular, 0 for linear, -1 for left circular.
    pub fn spin(&self) -> f64 {
        (C64::i() * (self.alpha * self.beta.conj() - self.beta * self.alpha.conj())).re
    }
}

/// A position relative to the beam axis (Z along propagation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_cylindrical(rho: f64, phi: f64, z: f64) -> Self {
        assert!(rho >= 0.0);
        Self {
            x: rho * phi.cos(),
            y: rho * phi.sin(),
            z,
        }
    }

    pub fn rho(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Azimuthal angle in (-pi, pi].
    pub fn phi(&self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Radius in units of the mode waist.
    pub fn rho_bar(&self, mode: &LGMode) -> f64 {
        self.rho() / mode.waist()
    }
}

/// A Laguerre-Gaussian mode at its waist plane.
#[derive(Debug, Clone, PartialEq)]
pub struct LGMode {
    wavelength: f64,
    waist: f64,
    ell: i32,
    p: u32,
    intensity: f64,
    polarization: Polarization,
}

impl LGMode {
    pub fn new(
        wavelength: f64,
        waist: f64,
        ell: i32,
        p: u32,
        intensity: f64,
        polarization: Polarization,
    ) -> Result<Self, BeamError> {
        if wavelength <= 0.0 {
            return Err(BeamError::NonPositive {
                name: "wavelength",
                value: wavelength,
            });
        }
        if waist <= 0.0 {
            return Err(BeamError::NonPositive {
                name: "waist",
                value: waist,
            });
        }
        if intensity < 0.0 {
            return Err(BeamError::NegativeIntensity(intensity));
        }
        Ok(Self {
            wavelength,
            waist,
            ell,
            p,
            intensity,
            polarization,
        })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn ell(&self) -> i32 {
        self.ell
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn polarization(&self) -> &Polarization {
        &self.polarization
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    pub fn omega(&self) -> f64 {
        SPEED_OF_LIGHT * self.wavenumber()
    }

    /// Waist in wavelengths, xi = w0 / lambda.
    pub fn xi(&self) -> f64 {
        self.waist / self.wavelength
    }

    /// Peak field E_k00 = sqrt(2 I / (eps0 c)) of the underlying Gaussian,
    /// V/m.
    pub fn peak_field(&self) -> f64 {
        (2.0 * self.intensity / (VACUUM_PERMITTIVITY * SPEED_OF_LIGHT)).sqrt()
    }

    /// Laguerre indices of the radial profile: degree p, superscript |l|.
    pub fn laguerre_params(&self) -> LaguerreParams {
        LaguerreParams {
            p: self.p,
            a: self.ell.unsigned_abs(),
        }
    }

    /// Dimensionless mode profile g_{l,p}(rho_bar).
    pub fn g_profile(&self, rho_bar: f64) -> f64 {
        self.g_envelope(rho_bar) * assoc_laguerre(self.laguerre_params(), 2.0 * rho_bar * rho_bar)
    }

    /// The profile with its Laguerre factor divided out:
    /// g = g_envelope * L_p^{|l|}(2 rho_bar^2). Useful where closed forms
    /// cancel the Laguerre polynomial against its own logarithmic
    /// derivative, removing the spurious singularity at the polynomial's
    /// nodes.
    pub fn g_envelope(&self, rho_bar: f64) -> f64 {
        debug_assert!(rho_bar >= 0.0);
        let ell_abs = self.ell.unsigned_abs();
        let norm = (0.5 * log_factorial_ratio(self.p, ell_abs)).exp();
        norm * (std::f64::consts::SQRT_2 * rho_bar).powi(ell_abs as i32)
            * (-rho_bar * rho_bar).exp()
    }

    /// Field amplitude u(rho_bar) = E_k00 g(rho_bar), V/m.
    pub fn field_amplitude(&self, rho_bar: f64) -> f64 {
        self.peak_field() * self.g_profile(rho_bar)
    }

    /// Helical phase theta = k Z + l phi - omega t.
    pub fn phase(&self, pos: &Position, t: f64) -> f64 {
        self.wavenumber() * pos.z + self.ell as f64 * pos.phi() - self.omega() * t
    }

    /// Transverse power integral of the profile,
    /// integral of g^2 2 pi rho d rho over [0, inf), m^2.
    ///
    /// Equals pi w0^2 / 2 for every (l, p) because the profiles are
    /// orthonormal under the same weight; this is the invariant the tests
    /// check the profile normalization against.
    pub fn mode_power_integral(&self) -> Result<f64, QuadratureError> {
        // In rho_bar the integrand has decayed below 1e-100 by rho_bar = 12.
        let f = |rho_bar: f64| {
            let g = self.g_profile(rho_bar);
            g * g * 2.0 * std::f64::consts::PI * rho_bar
        };
        let (value, _) = adaptive_simpson(&f, 0.0, 12.0, 1e-13, 1_000_000)?;
        Ok(value * self.waist * self.waist)
    }
}
