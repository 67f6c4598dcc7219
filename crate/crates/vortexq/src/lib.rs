//! Quadrupole coupling of a two-level atom to a focused optical vortex.
//!
//! A circularly polarized Laguerre-Gaussian beam carries spin angular
//! momentum `sigma_z` per photon in its polarization and orbital angular
//! momentum `ell` per photon in its helical phase front. A quadrupole
//! (multipolarity 2) atomic transition couples to the *gradient* of such a
//! field, which opens absorption channels that change the atomic magnetic
//! quantum number by `delta_m = ell + sigma_z` up to two units.
//!
//! The crate computes, for the Cs 6s -> 5d quadrupole line:
//!
//! * the beam mode functions and their gradients ([`beam`], [`coupling`]),
//! * the quadrupole matrix elements of the transition by numerical
//!   quadrature over hydrogen-like wavefunctions ([`atomic`]),
//! * the position-resolved Rabi frequency of every allowed channel
//!   ([`coupling`]),
//! * the golden-rule absorption rate with a Lorentzian linewidth
//!   ([`absorption`]),
//! * and independent brute-force validators for all of the closed forms
//!   ([`oracle`]).
//!
//! The [`cli`] module exposes the same calculations as a command-line tool
//! emitting CSV or JSON profiles.

pub mod absorption;
pub mod atomic;
pub mod beam;
pub mod cli;
pub mod config;
pub mod constants;
pub mod coupling;
pub mod oracle;
pub mod quad;
pub mod specfun;
