//! Physical constants in SI units.
//!
//! Values are pinned (2018 CODATA) rather than pulled from a dependency so
//! that every number this crate emits is reproducible bit for bit.

/// Speed of light in vacuum, m/s. Exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Elementary charge, C. Exact.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109e-11;
