//! Run configuration: defaults, config-file parsing, flag overlay, and the
//! builders that turn a validated configuration into beam, line, channel,
//! and grid objects.
//!
//! Precedence is defaults, then the config file, then command-line flags.
//! Files hold one `key = value` pair per line with `#` comments; keys are
//! matched case-insensitively but echoed back in their canonical spelling.

use thiserror::Error;

use crate::atomic::{transition_tensor, AtomicError, AtomicLevel, Axis, TransitionLine};
use crate::beam::{BeamError, LGMode, Polarization};
use crate::constants::SPEED_OF_LIGHT;
use crate::coupling::{validate_channel, Channel, Convention, CouplingError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("config line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("invalid value for {key}: {value:?} ({reason})")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("samples must be at least 2, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Beam(#[from] BeamError),
    #[error(transparent)]
    Atomic(#[from] AtomicError),
}

/// A matrix-element magnitude: computed from the wavefunction model or
/// pinned to a fixed value in e a0^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QSetting {
    Compute,
    Fixed(f64),
}

impl QSetting {
    pub fn parse(key: &str, value: &str) -> Result<Self, ConfigError> {
        if value.eq_ignore_ascii_case("compute") {
            return Ok(QSetting::Compute);
        }
        let v = parse_f64(key, value)?;
        Ok(QSetting::Fixed(v))
    }

    fn echo(&self) -> String {
        match self {
            QSetting::Compute => "compute".to_string(),
            QSetting::Fixed(v) => format!("{v}"),
        }
    }
}

/// Parses a float, rejecting NaN and infinities. Shared by the config-file
/// reader and the flag layer so both accept exactly the same values.
pub fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = value.parse().map_err(|_| ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: "not a number".to_string(),
    })?;
    if !v.is_finite() {
        return Err(ConfigError::InvalidValue {
            key: key.to_string(),
            value: value.to_string(),
            reason: "must be finite".to_string(),
        });
    }
    Ok(v)
}

/// Integer twin of [`parse_f64`]; the target type bounds the accepted range.
pub fn parse_int<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: "not an integer of the expected range".to_string(),
    })
}

pub fn parse_convention(key: &str, value: &str) -> Result<Convention, ConfigError> {
    // These two tokens are the stable command-line interface; they name
    // the sign/weight conventions documented for the `convention` key.
    if value.eq_ignore_ascii_case("paper-eq12") {
        Ok(Convention::Full)
    } else if value.eq_ignore_ascii_case("hamiltonian-eq5p") {
        Ok(Convention::NegativeHalf)
    } else {
        Err(ConfigError::InvalidValue {
            key: key.to_string(),
            value: value.to_string(),
            reason: "expected paper-eq12 or hamiltonian-eq5p".to_string(),
        })
    }
}

pub fn convention_token(convention: Convention) -> &'static str {
    match convention {
        Convention::Full => "paper-eq12",
        Convention::NegativeHalf => "hamiltonian-eq5p",
    }
}

/// Partial configuration: every key optional, for file and flag layers.
#[derive(Debug, Default, Clone)]
pub struct PartialConfig {
    pub wavelength_nm: Option<f64>,
    pub intensity_w_per_m2: Option<f64>,
    pub gamma_s_per_s: Option<f64>,
    pub q_xx_ea02: Option<QSetting>,
    pub q_xz_ea02: Option<QSetting>,
    pub z_eff: Option<f64>,
    pub ell: Option<i32>,
    pub p: Option<u32>,
    pub delta_m: Option<i32>,
    pub sigma_z: Option<i32>,
    pub waist_over_lambda: Option<f64>,
    pub detuning_over_gamma: Option<f64>,
    pub rho_max_over_waist: Option<f64>,
    pub samples: Option<usize>,
    pub convention: Option<Convention>,
}

impl PartialConfig {
    /// Parses config-file text. Later assignments to the same key win.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = PartialConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("");
            let trimmed = stripped.trim();
            if trimmed.is_empty() {
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    text: trimmed.to_string(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            match key.to_ascii_lowercase().as_str() {
                "wavelength_nm" => cfg.wavelength_nm = Some(parse_f64(key, value)?),
                "intensity_w_per_m2" => cfg.intensity_w_per_m2 = Some(parse_f64(key, value)?),
                "gamma_s_per_s" => cfg.gamma_s_per_s = Some(parse_f64(key, value)?),
                "q_xx_ea02" => cfg.q_xx_ea02 = Some(QSetting::parse(key, value)?),
                "q_xz_ea02" => cfg.q_xz_ea02 = Some(QSetting::parse(key, value)?),
                "z_eff" => cfg.z_eff = Some(parse_f64(key, value)?),
                "ell" => cfg.ell = Some(parse_int(key, value)?),
                "p" => cfg.p = Some(parse_int(key, value)?),
                "delta_m" => cfg.delta_m = Some(parse_int(key, value)?),
                "sigma_z" => cfg.sigma_z = Some(parse_int(key, value)?),
                "waist_over_lambda" => cfg.waist_over_lambda = Some(parse_f64(key, value)?),
                "detuning_over_gamma" => cfg.detuning_over_gamma = Some(parse_f64(key, value)?),
                "rho_max_over_waist" => cfg.rho_max_over_waist = Some(parse_f64(key, value)?),
                "samples" => cfg.samples = Some(parse_int(key, value)?),
                "convention" => cfg.convention = Some(parse_convention(key, value)?),
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        Ok(cfg)
    }
}

/// The complete, layered run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub wavelength_nm: f64,
    pub intensity_w_per_m2: f64,
    pub gamma_s_per_s: f64,
    pub q_xx_ea02: QSetting,
    pub q_xz_ea02: QSetting,
    pub z_eff: f64,
    /// Vortex charge; `None` defaults to the angular-momentum balance
    /// delta_m - sigma_z.
    pub ell: Option<i32>,
    pub p: u32,
    pub delta_m: i32,
    pub sigma_z: i32,
    pub waist_over_lambda: f64,
    pub detuning_over_gamma: f64,
    pub rho_max_over_waist: f64,
    pub samples: usize,
    pub convention: Convention,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            wavelength_nm: 685.0,
            intensity_w_per_m2: 4.0e5,
            gamma_s_per_s: 3.34e7,
            q_xx_ea02: QSetting::Compute,
            q_xz_ea02: QSetting::Compute,
            z_eff: 8.56,
            ell: None,
            p: 0,
            delta_m: 1,
            sigma_z: -1,
            waist_over_lambda: 5.0,
            detuning_over_gamma: 0.0,
            rho_max_over_waist: 4.0,
            samples: 1000,
            convention: Convention::Full,
        }
    }
}

impl RunConfig {
    /// Applies defaults, then the file layer, then the flag layer, and
    /// runs the scope checks every command shares. Channel-dependent
    /// commands additionally call [`RunConfig::channel`].
    pub fn resolve(
        file: Option<&PartialConfig>,
        flags: &PartialConfig,
    ) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(file) = file {
            cfg.apply(file);
        }
        cfg.apply(flags);
        cfg.validate_base()?;
        Ok(cfg)
    }

    fn apply(&mut self, partial: &PartialConfig) {
        if let Some(v) = partial.wavelength_nm {
            self.wavelength_nm = v;
        }
        if let Some(v) = partial.intensity_w_per_m2 {
            self.intensity_w_per_m2 = v;
        }
        if let Some(v) = partial.gamma_s_per_s {
            self.gamma_s_per_s = v;
        }
        if let Some(v) = partial.q_xx_ea02 {
            self.q_xx_ea02 = v;
        }
        if let Some(v) = partial.q_xz_ea02 {
            self.q_xz_ea02 = v;
        }
        if let Some(v) = partial.z_eff {
            self.z_eff = v;
        }
        if let Some(v) = partial.ell {
            self.ell = Some(v);
        }
        if let Some(v) = partial.p {
            self.p = v;
        }
        if let Some(v) = partial.delta_m {
            self.delta_m = v;
        }
        if let Some(v) = partial.sigma_z {
            self.sigma_z = v;
        }
        if let Some(v) = partial.waist_over_lambda {
            self.waist_over_lambda = v;
        }
        if let Some(v) = partial.detuning_over_gamma {
            self.detuning_over_gamma = v;
        }
        if let Some(v) = partial.rho_max_over_waist {
            self.rho_max_over_waist = v;
        }
        if let Some(v) = partial.samples {
            self.samples = v;
        }
        if let Some(v) = partial.convention {
            self.convention = v;
        }
    }

    /// Dimensional and scope checks shared by every command: positivity,
    /// sample count, fixed-magnitude sanity, and the circular-polarization
    /// scope gate on sigma_z. Does not judge the (delta_m, ell) pairing.
    pub fn validate_base(&self) -> Result<(), ConfigError> {
        let positives = [
            ("wavelength_nm", self.wavelength_nm),
            ("gamma_s_per_s", self.gamma_s_per_s),
            ("z_eff", self.z_eff),
            ("waist_over_lambda", self.waist_over_lambda),
            ("rho_max_over_waist", self.rho_max_over_waist),
        ];
        for (name, value) in positives {
            if value <= 0.0 {
                return Err(ConfigError::NonPositive { name, value });
            }
        }
        if self.intensity_w_per_m2 < 0.0 {
            return Err(ConfigError::Negative {
                name: "intensity_W_per_m2",
                value: self.intensity_w_per_m2,
            });
        }
        if self.samples < 2 {
            return Err(ConfigError::TooFewSamples(self.samples));
        }
        for (name, setting) in [("q_xx_ea02", self.q_xx_ea02), ("q_xz_ea02", self.q_xz_ea02)] {
            if let QSetting::Fixed(v) = setting {
                if v <= 0.0 {
                    return Err(ConfigError::NonPositive { name, value: v });
                }
            }
        }
        if self.sigma_z != 1 && self.sigma_z != -1 {
            return Err(CouplingError::SigmaOutOfScope(self.sigma_z).into());
        }
        Ok(())
    }

    /// Full validation: the base checks plus every channel selection rule
    /// (the rank-2 cap, the angular momentum balance, the gate).
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.validate_base()?;
        self.channel()?;
        Ok(())
    }

    pub fn wavelength_m(&self) -> f64 {
        self.wavelength_nm * 1e-9
    }

    pub fn waist_m(&self) -> f64 {
        self.waist_over_lambda * self.wavelength_m()
    }

    pub fn resolved_ell(&self) -> i32 {
        self.ell.unwrap_or(self.delta_m - self.sigma_z)
    }

    pub fn polarization(&self) -> Polarization {
        Polarization::circular(self.sigma_z)
    }

    pub fn channel(&self) -> Result<Channel, CouplingError> {
        if self.sigma_z != 1 && self.sigma_z != -1 {
            return Err(CouplingError::SigmaOutOfScope(self.sigma_z));
        }
        validate_channel(
            self.delta_m,
            self.resolved_ell(),
            self.sigma_z,
            &self.polarization(),
        )
    }

    pub fn mode(&self) -> Result<LGMode, BeamError> {
        LGMode::new(
            self.wavelength_m(),
            self.waist_m(),
            self.resolved_ell(),
            self.p,
            self.intensity_w_per_m2,
            self.polarization(),
        )
    }

    /// The transition the beam drives. The drive sits at 2 pi c / lambda;
    /// the resonance is placed so that the requested detuning holds.
    pub fn line(&self) -> Result<TransitionLine, ConfigError> {
        if self.delta_m.abs() > 2 {
            return Err(CouplingError::MultipolarityExceeded {
                delta_m: self.delta_m,
            }
            .into());
        }
        let omega_drive = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.wavelength_m();
        let omega_a = omega_drive - self.detuning_over_gamma * self.gamma_s_per_s;
        let lower = AtomicLevel::new(6, 0, 0).expect("ground level is valid");
        let upper = AtomicLevel::new(5, 2, self.delta_m).expect("|delta_m| <= 2 checked above");
        Ok(TransitionLine::new(
            omega_a,
            self.gamma_s_per_s,
            2,
            lower,
            upper,
        )?)
    }

    pub fn detuning(&self) -> crate::absorption::DetuningSpec {
        crate::absorption::DetuningSpec::DetuningOverGamma(self.detuning_over_gamma)
    }

    /// Resolves the two element magnitudes (in e a0^2) per their policy.
    /// Computed values use the channel's own transfer case: |Q_xx| from
    /// m_f = 0 (or m_f = delta_m when |delta_m| = 2) and |Q_xz| from the
    /// m_f = delta_m case when |delta_m| = 1 (m_f = 1 otherwise; the
    /// magnitudes of the two circulations coincide).
    pub fn resolve_magnitudes(&self) -> Result<(f64, f64), AtomicError> {
        let lower = AtomicLevel::new(6, 0, 0).expect("ground level is valid");
        let q_xx = match self.q_xx_ea02 {
            QSetting::Fixed(v) => v,
            QSetting::Compute => {
                let m_f = if self.delta_m.abs() == 2 {
                    self.delta_m
                } else {
                    0
                };
                let upper = AtomicLevel::new(5, 2, m_f).expect("valid excited level");
                transition_tensor(&lower, &upper, self.z_eff)?
                    .component(Axis::X, Axis::X)
                    .norm()
            }
        };
        let q_xz = match self.q_xz_ea02 {
            QSetting::Fixed(v) => v,
            QSetting::Compute => {
                let m_f = if self.delta_m.abs() == 1 {
                    self.delta_m
                } else {
                    1
                };
                let upper = AtomicLevel::new(5, 2, m_f).expect("valid excited level");
                transition_tensor(&lower, &upper, self.z_eff)?
                    .component(Axis::Z, Axis::X)
                    .norm()
            }
        };
        Ok((q_xx, q_xz))
    }

    /// The radial grid in waist units: `samples` points from just off the
    /// axis out to rho_max_over_waist, endpoint included.
    pub fn grid(&self) -> Vec<f64> {
        let lo = 1e-6;
        let hi = self.rho_max_over_waist;
        let n = self.samples;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    /// Canonical key/value pairs of the effective configuration, in a
    /// fixed order, for output headers.
    pub fn echo_pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("wavelength_nm", format!("{}", self.wavelength_nm)),
            ("intensity_W_per_m2", format!("{}", self.intensity_w_per_m2)),
            ("gamma_s_per_s", format!("{}", self.gamma_s_per_s)),
            ("q_xx_ea02", self.q_xx_ea02.echo()),
            ("q_xz_ea02", self.q_xz_ea02.echo()),
            ("z_eff", format!("{}", self.z_eff)),
            ("ell", format!("{}", self.resolved_ell())),
            ("p", format!("{}", self.p)),
            ("delta_m", format!("{}", self.delta_m)),
            ("sigma_z", format!("{}", self.sigma_z)),
            ("waist_over_lambda", format!("{}", self.waist_over_lambda)),
            (
                "detuning_over_gamma",
                format!("{}", self.detuning_over_gamma),
            ),
            ("rho_max_over_waist", format!("{}", self.rho_max_over_waist)),
            ("samples", format!("{}", self.samples)),
            ("convention", convention_token(self.convention).to_string()),
        ]
    }
}
