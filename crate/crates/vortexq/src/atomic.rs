//! Quadrupole matrix elements between hydrogen-like states and the
//! polarization-contracted moments that enter the Rabi frequency.
//!
//! The element Q_ab = e <psi_f| x_a x_b |psi_i> factorizes into a radial
//! integral of R_f R_i r^4 and an angular integral of Y*_f n_a n_b Y_i over
//! the unit sphere. Both are evaluated numerically, each with two
//! independent schemes whose disagreement is reported as the error
//! estimate: Gauss-Legendre panels against adaptive Simpson radially, and
//! a Gauss-Legendre x trapezoid product rule at two resolutions angularly.
//! Angular integrals use the Condon-Shortley phase convention for the
//! spherical harmonics, so the signs of individual components are
//! reproducible.
//!
//! Downstream channel formulas consume only the element magnitudes |Q_xx|
//! and |Q_xz| together with phases fixed by the circular-basis selection
//! rules; [`channel_moment_tensor`] rebuilds the effective tensor for each
//! transfer case from those magnitudes.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::beam::Polarization;
use crate::quad::{
    adaptive_simpson, composite_gauss_legendre, gauss_legendre_nodes, QuadratureError,
};
use crate::specfun::{hydrogenic_radial, log_factorial_ratio, HydrogenicState, SpecFunError};

/// Relative disagreement tolerated between the two quadrature schemes.
pub const SCHEME_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum AtomicError {
    #[error(transparent)]
    State(#[from] SpecFunError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(
        "independent quadrature schemes disagree: relative discrepancy \
         {discrepancy:e} exceeds {tolerance:e}"
    )]
    SchemeDisagreement { discrepancy: f64, tolerance: f64 },
    #[error("magnetic quantum number m={m} must satisfy |m| <= l={l}")]
    MagneticOutOfRange { l: u32, m: i32 },
    #[error("linewidth must be positive, got {0}")]
    NonPositiveLinewidth(f64),
    #[error("transition frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
}

/// One bound level (n, l, m).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AtomicLevel {
    n: u32,
    l: u32,
    m: i32,
}

impl AtomicLevel {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self, AtomicError> {
        // Radial validity (l <= n-1, n >= 1) is checked by the state type.
        HydrogenicState::new(n, l, 1.0)?;
        if m.unsigned_abs() > l {
            return Err(AtomicError::MagneticOutOfRange { l, m });
        }
        Ok(Self { n, l, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    fn radial_state(&self, z: f64) -> Result<HydrogenicState, SpecFunError> {
        HydrogenicState::new(self.n, self.l, z)
    }
}

/// Cartesian axis label for tensor components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Symmetric 3x3 tensor of quadrupole matrix elements, entries in units of
/// e a0^2. Symmetry holds by construction because x_a x_b commute.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadrupoleTensor {
    q: [[C64; 3]; 3],
}

impl QuadrupoleTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn component(&self, a: Axis, b: Axis) -> C64 {
        self.q[a.index()][b.index()]
    }

    /// Sets Q_ab and its mirror Q_ba.
    pub fn set_component(&mut self, a: Axis, b: Axis, value: C64) {
        self.q[a.index()][b.index()] = value;
        self.q[b.index()][a.index()] = value;
    }

    pub fn trace(&self) -> C64 {
        self.q[0][0] + self.q[1][1] + self.q[2][2]
    }

    /// Largest component magnitude, the natural scale for "zero" checks.
    pub fn max_abs(&self) -> f64 {
        self.q
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}

/// Polarization-contracted moments Q_j = alpha Q_jx + beta Q_jy
/// for j = x -> 1, y -> 2, z -> 3, in units of e a0^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedMoments {
    pub q1: C64,
    pub q2: C64,
    pub q3: C64,
}

impl ModifiedMoments {
    pub fn zero() -> Self {
        Self {
            q1: C64::new(0.0, 0.0),
            q2: C64::new(0.0, 0.0),
            q3: C64::new(0.0, 0.0),
        }
    }
}

/// Contracts a tensor with a polarization: Q_j = alpha Q_jx + beta Q_jy.
pub fn modified_moments(tensor: &QuadrupoleTensor, pol: &Polarization) -> ModifiedMoments {
    let contract = |row: Axis| {
        pol.alpha() * tensor.component(row, Axis::X) + pol.beta() * tensor.component(row, Axis::Y)
    };
    ModifiedMoments {
        q1: contract(Axis::X),
        q2: contract(Axis::Y),
        q3: contract(Axis::Z),
    }
}

/// The two-level transition: frequency, linewidth, multipolarity, and the
/// states it connects. The linewidth doubles as the width of the upper
/// level's Lorentzian density of states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionLine {
    omega_a: f64,
    gamma: f64,
    multipolarity_l: u32,
    lower: AtomicLevel,
    upper: AtomicLevel,
}

impl TransitionLine {
    pub fn new(
        omega_a: f64,
        gamma: f64,
        multipolarity_l: u32,
        lower: AtomicLevel,
        upper: AtomicLevel,
    ) -> Result<Self, AtomicError> {
        if omega_a <= 0.0 {
            return Err(AtomicError::NonPositiveFrequency(omega_a));
        }
        if gamma <= 0.0 {
            return Err(AtomicError::NonPositiveLinewidth(gamma));
        }
        Ok(Self {
            omega_a,
            gamma,
            multipolarity_l,
            lower,
            upper,
        })
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn multipolarity_l(&self) -> u32 {
        self.multipolarity_l
    }

    pub fn lower(&self) -> AtomicLevel {
        self.lower
    }

    pub fn upper(&self) -> AtomicLevel {
        self.upper
    }

    /// True when gamma << omega_a (ratio below 1e-3); the lineshape
    /// treatment assumes this.
    pub fn is_quasi_monochromatic(&self) -> bool {
        self.gamma <= 1e-3 * self.omega_a
    }
}

/// Spherical harmonic Y_lm with the Condon-Shortley phase.
fn spherical_harmonic(l: u32, m: i32, cos_theta: f64, phi: f64) -> C64 {
    let m_abs = m.unsigned_abs();
    debug_assert!(m_abs <= l);
    let plm = assoc_legendre(l, m_abs, cos_theta);
    let norm = ((2.0 * l as f64 + 1.0) / (4.0 * std::f64::consts::PI)
        * log_factorial_ratio(l - m_abs, 2 * m_abs).exp())
    .sqrt();
    let cs_phase = if m_abs.is_multiple_of(2) { 1.0 } else { -1.0 };
    let positive = cs_phase * norm * plm * C64::from_polar(1.0, m_abs as f64 * phi);
    if m >= 0 {
        positive
    } else {
        // Y_{l,-m} = (-1)^m conj(Y_{l,m})
        cs_phase * positive.conj()
    }
}

/// Unnormalized associated Legendre P_l^m (no Condon-Shortley factor), by
/// the stable upward recurrence in l.
fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    let sin_theta = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        pmm *= odd * sin_theta;
        odd += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2.0 * m as f64 + 1.0) * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = ((2.0 * ll as f64 - 1.0) * x * pm1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pm1;
        pm1 = pll;
    }
    pll
}

/// Radial overlap integral of R_f R_i r^4 dr in a0^2, by both schemes.
fn radial_overlap_dual(
    lower: &AtomicLevel,
    upper: &AtomicLevel,
    z: f64,
) -> Result<(f64, f64), AtomicError> {
    let si = lower.radial_state(z)?;
    let sf = upper.radial_state(z)?;
    let r_max = si.r_max().max(sf.r_max());
    let f = |r: f64| hydrogenic_radial(sf, r) * hydrogenic_radial(si, r) * r.powi(4);
    let gl = composite_gauss_legendre(&f, 0.0, r_max, 32, 32);
    let (simpson, _) = adaptive_simpson(&f, 0.0, r_max, 1e-11, 1_000_000)?;
    Ok((gl, simpson))
}

/// Angular overlap of Y*_f (n_a n_b) Y_i over the sphere, by an n_cos-point
/// Gauss-Legendre rule in cos(theta) times an n_phi-point periodic
/// trapezoid in phi. The integrand is a trigonometric polynomial, so both
/// factors are exact once the rule resolves the highest harmonic.
fn angular_overlap(
    lower: &AtomicLevel,
    upper: &AtomicLevel,
    component: (Axis, Axis),
    n_cos: usize,
    n_phi: usize,
) -> C64 {
    let (nodes, weights) = gauss_legendre_nodes(n_cos);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut acc = C64::new(0.0, 0.0);
    for (&c, &wc) in nodes.iter().zip(&weights) {
        let s = (1.0 - c * c).max(0.0).sqrt();
        let mut phi_acc = C64::new(0.0, 0.0);
        for j in 0..n_phi {
            let phi = j as f64 * dphi;
            let n = [s * phi.cos(), s * phi.sin(), c];
            let weight_ab = n[component.0.index()] * n[component.1.index()];
            let yf = spherical_harmonic(upper.l, upper.m, c, phi);
            let yi = spherical_harmonic(lower.l, lower.m, c, phi);
            phi_acc += yf.conj() * weight_ab * yi;
        }
        acc += wc * phi_acc * dphi;
    }
    acc
}

/// A matrix element with the residual disagreement of its two independent
/// evaluations.
#[derive(Debug, Clone, Copy)]
pub struct ElementEstimate {
    /// Value in units of e a0^2.
    pub value: C64,
    /// Relative cross-scheme discrepancy (absolute below 1e-6 e a0^2).
    pub discrepancy: f64,
}

/// Elements of interest are O(0.1..10) e a0^2; below the 1e-6 floor the
/// spread is counted absolutely, so components that vanish by a selection
/// rule (pure roundoff ~1e-16) do not masquerade as scheme disagreement.
fn relative_spread(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-6)
}

/// e <psi_f| x_a x_b |psi_i> for hydrogen-like states sharing one effective
/// charge, in units of e a0^2, with the cross-scheme discrepancy attached.
pub fn quadrupole_matrix_element_checked(
    lower: &AtomicLevel,
    upper: &AtomicLevel,
    component: (Axis, Axis),
    z: f64,
) -> Result<ElementEstimate, AtomicError> {
    let (radial_a, radial_b) = radial_overlap_dual(lower, upper, z)?;
    let angular_a = angular_overlap(lower, upper, component, 64, 128);
    let angular_b = angular_overlap(lower, upper, component, 96, 192);
    let value_a = radial_a * angular_a;
    let value_b = radial_b * angular_b;
    Ok(ElementEstimate {
        value: value_a,
        discrepancy: relative_spread(value_a, value_b),
    })
}

/// As [`quadrupole_matrix_element_checked`], erroring out if the two
/// schemes disagree beyond [`SCHEME_TOLERANCE`].
pub fn quadrupole_matrix_element(
    lower: &AtomicLevel,
    upper: &AtomicLevel,
    component: (Axis, Axis),
    z: f64,
) -> Result<C64, AtomicError> {
    let estimate = quadrupole_matrix_element_checked(lower, upper, component, z)?;
    if estimate.discrepancy > SCHEME_TOLERANCE {
        return Err(AtomicError::SchemeDisagreement {
            discrepancy: estimate.discrepancy,
            tolerance: SCHEME_TOLERANCE,
        });
    }
    Ok(estimate.value)
}

/// A full tensor with the worst per-component discrepancy attached.
#[derive(Debug, Clone, Copy)]
pub struct TensorEstimate {
    pub tensor: QuadrupoleTensor,
    pub max_discrepancy: f64,
}

/// All independent components of Q_ab between two levels, sharing one
/// radial integral evaluation.
pub fn transition_tensor_checked(
    lower: &AtomicLevel,
    upper: &AtomicLevel,
    z: f64,
) -> Result<TensorEstimate, AtomicError> {
    let (radial_a, radial_b) = radial_overlap_dual(lower, upper, z)?;
    let mut tensor = QuadrupoleTensor::zero();
    let mut max_disc: f64 = 0.0;
    for &(a, b) in &[
        (Axis::X, Axis::X),
        (Axis::X, Axis::Y),
        (Axis::Y, Axis::Y),
        (Axis::Z, Axis::X),
        (Axis::Z, Axis::Y),
        (Axis::Z, Axis::Z),
    ] {
        let angular_a = angular_overlap(lower, upper, (a, b), 64, 128);
        let angular_b = angular_overlap(lower, upper, (a, b), 96, 192);
        let value_a = radial_a * angular_a;
        let value_b = radial_b * angular_b;
        max_disc = max_disc.max(relative_spread(value_a, value_b));
        tensor.set_component(a, b, value_a);
    }
    Ok(TensorEstimate {
        tensor,
        max_discrepancy: max_disc,
    })
}

pub fn transition_tensor(
    lower: &AtomicLevel,
    upper: &AtomicLevel,
    z: f64,
) -> Result<QuadrupoleTensor, AtomicError> {
    let estimate = transition_tensor_checked(lower, upper, z)?;
    if estimate.max_discrepancy > SCHEME_TOLERANCE {
        return Err(AtomicError::SchemeDisagreement {
            discrepancy: estimate.max_discrepancy,
            tolerance: SCHEME_TOLERANCE,
        });
    }
    Ok(estimate.tensor)
}

/// Effective tensor for one transfer case delta_m in {0, +-1, +-2}, built
/// from the element magnitudes |Q_xx| and |Q_xz| (units e a0^2).
///
/// The phases between components are fixed by the circular-basis selection
/// rules as follows, so that the polarization gates (alpha + i beta) for
/// delta_m > 0 and (alpha - i beta) for delta_m < 0 emerge directly from
/// the contraction with (alpha, beta):
///
/// * delta_m =  0: Q_xx = Q_yy = |Q_xx|
/// * delta_m = +1: Q_zx = i |Q_xz|, Q_zy = -|Q_xz|
/// * delta_m = -1: Q_zx = i |Q_xz|, Q_zy = +|Q_xz|
/// * delta_m = +2: Q_xx = |Q_xx|, Q_xy = i |Q_xx|, Q_yy = -|Q_xx|
/// * delta_m = -2: Q_xx = |Q_xx|, Q_xy = -i |Q_xx|, Q_yy = -|Q_xx|
///
/// The overall phase of each raw matrix element is dropped here: only the
/// modulus of the Rabi frequency is observable downstream.
pub fn channel_moment_tensor(delta_m: i32, q_xx_abs: f64, q_xz_abs: f64) -> QuadrupoleTensor {
    assert!(
        delta_m.abs() <= 2,
        "quadrupole transfer is limited to |delta_m| <= 2"
    );
    let mut t = QuadrupoleTensor::zero();
    let re = |v: f64| C64::new(v, 0.0);
    let im = |v: f64| C64::new(0.0, v);
    match delta_m {
        0 => {
            t.set_component(Axis::X, Axis::X, re(q_xx_abs));
            t.set_component(Axis::Y, Axis::Y, re(q_xx_abs));
        }
        1 => {
            t.set_component(Axis::Z, Axis::X, im(q_xz_abs));
            t.set_component(Axis::Z, Axis::Y, re(-q_xz_abs));
        }
        -1 => {
            t.set_component(Axis::Z, Axis::X, im(q_xz_abs));
            t.set_component(Axis::Z, Axis::Y, re(q_xz_abs));
        }
        2 => {
            t.set_component(Axis::X, Axis::X, re(q_xx_abs));
            t.set_component(Axis::X, Axis::Y, im(q_xx_abs));
            t.set_component(Axis::Y, Axis::Y, re(-q_xx_abs));
        }
        -2 => {
            t.set_component(Axis::X, Axis::X, re(q_xx_abs));
            t.set_component(Axis::X, Axis::Y, im(-q_xx_abs));
            t.set_component(Axis::Y, Axis::Y, re(-q_xx_abs));
        }
        _ => unreachable!(),
    }
    t
}

/// Moments of one transfer case for a given polarization.
pub fn channel_moments(
    delta_m: i32,
    q_xx_abs: f64,
    q_xz_abs: f64,
    pol: &Polarization,
) -> ModifiedMoments {
    modified_moments(&channel_moment_tensor(delta_m, q_xx_abs, q_xz_abs), pol)
}
