//! Associated Laguerre polynomials, stable factorial ratios, and
//! hydrogen-like radial wavefunctions.
//!
//! The Laguerre polynomial L_p^a appears twice in this crate with very
//! different arguments: as the radial envelope of a Laguerre-Gaussian beam
//! (argument 2 rho^2 / w0^2) and inside the bound-state radial function
//! R_nL (argument 2 Z r / n). Both consumers need the polynomial itself and
//! its derivative, and both need normalization constants built from
//! factorial ratios that would overflow if evaluated literally.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpecFunError {
    #[error("orbital quantum number l={l} must satisfy l <= n-1 (n={n})")]
    OrbitalOutOfRange { n: u32, l: u32 },
    #[error("principal quantum number must be at least 1")]
    ZeroPrincipal,
    #[error("effective nuclear charge must be positive, got {0}")]
    NonPositiveCharge(f64),
}

/// Index pair of an associated Laguerre polynomial L_p^a.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LaguerreParams {
    /// Degree (number of real positive roots).
    pub p: u32,
    /// Superscript: |ell| for beam profiles, 2l+1 for radial functions.
    pub a: u32,
}

/// L_p^a(x) by the ascending three-term recurrence in the degree,
///
///   (k+1) L_{k+1}^a = (2k+1+a-x) L_k^a - (k+a) L_{k-1}^a,
///
/// which is numerically stable for the small degrees used here.
pub fn assoc_laguerre(params: LaguerreParams, x: f64) -> f64 {
    debug_assert!(x >= 0.0, "Laguerre argument must be non-negative");
    let a = params.a as f64;
    let mut prev = 1.0;
    if params.p == 0 {
        return prev;
    }
    let mut curr = 1.0 + a - x;
    for k in 1..params.p {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * curr - (kf + a) * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// d/dx L_p^a(x), via the identity d/dx L_p^a = -L_{p-1}^{a+1}.
pub fn assoc_laguerre_deriv(params: LaguerreParams, x: f64) -> f64 {
    if params.p == 0 {
        return 0.0;
    }
    -assoc_laguerre(
        LaguerreParams {
            p: params.p - 1,
            a: params.a + 1,
        },
        x,
    )
}

/// ln(p!) - ln((p + ell_abs)!), evaluated as a sum of logarithms.
///
/// Finite for any inputs a normalization constant can ask for; the
/// corresponding factorials themselves overflow f64 near 171!.
pub fn log_factorial_ratio(p: u32, ell_abs: u32) -> f64 {
    -((p + 1)..=(p + ell_abs))
        .map(|k| (k as f64).ln())
        .sum::<f64>()
}

/// A bound hydrogen-like state (n, l) with effective nuclear charge Z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydrogenicState {
    n: u32,
    l: u32,
    z: f64,
}

impl HydrogenicState {
    pub fn new(n: u32, l: u32, z: f64) -> Result<Self, SpecFunError> {
        if n == 0 {
            return Err(SpecFunError::ZeroPrincipal);
        }
        if l > n - 1 {
            return Err(SpecFunError::OrbitalOutOfRange { n, l });
        }
        if z <= 0.0 {
            return Err(SpecFunError::NonPositiveCharge(z));
        }
        Ok(Self { n, l, z })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Radius (Bohr radii) beyond which the radial density is below 1e-16
    /// of its peak; quadrature domains truncate here.
    pub fn r_max(&self) -> f64 {
        40.0 * (self.n as f64).powi(2) / self.z
    }
}

/// Normalized radial wavefunction R_nl(r; Z) in units a0^(-3/2), with r in
/// Bohr radii:
///
///   R = N (2Zr/n)^l exp(-Zr/n) L_{n-l-1}^{2l+1}(2Zr/n),
///
/// N chosen so that the integral of R^2 r^2 dr over [0, inf) is 1.
pub fn hydrogenic_radial(state: HydrogenicState, r: f64) -> f64 {
    assert!(r >= 0.0, "radius must be non-negative");
    let n = state.n as f64;
    let scale = 2.0 * state.z / n;
    let x = scale * r;
    let p = state.n - state.l - 1;
    // N = sqrt(scale^3 (n-l-1)! / (2n (n+l)!)), assembled in log space.
    let ln_norm =
        1.5 * scale.ln() + 0.5 * (log_factorial_ratio(p, 2 * state.l + 1) - (2.0 * n).ln());
    let poly = assoc_laguerre(
        LaguerreParams {
            p,
            a: 2 * state.l + 1,
        },
        x,
    );
    ln_norm.exp() * x.powi(state.l as i32) * (-0.5 * x).exp() * poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::composite_gauss_legendre;
    use proptest::prelude::*;

    /// Independent evaluator: the explicit series
    /// L_p^a(x) = sum_k (-1)^k C(p+a, p-k) x^k / k!.
    ///
    /// The terms alternate and can dwarf the result, so the sum alone is
    /// only accurate to eps times the term pile. Returns (sum, sum of
    /// |term|); comparisons must scale by the latter.
    fn laguerre_series(p: u32, a: u32, x: f64) -> (f64, f64) {
        let binom = |top: u64, k: u64| -> f64 {
            let mut value = 1.0f64;
            for j in 0..k {
                value *= (top - j) as f64 / (j + 1) as f64;
            }
            value
        };
        let mut sum = 0.0;
        let mut sum_abs = 0.0;
        let mut x_pow_over_fact = 1.0;
        for k in 0..=p {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = binom((p + a) as u64, (p - k) as u64) * x_pow_over_fact;
            sum += sign * term;
            sum_abs += term;
            x_pow_over_fact *= x / (k + 1) as f64;
        }
        (sum, sum_abs)
    }

    #[test]
    fn degree_zero_is_one() {
        assert_eq!(assoc_laguerre(LaguerreParams { p: 0, a: 3 }, 7.2), 1.0);
    }

    #[test]
    fn degree_one_closed_form() {
        // L_1^a(x) = 1 + a - x, zero at x = 1 + a.
        assert_eq!(assoc_laguerre(LaguerreParams { p: 1, a: 2 }, 3.0), 0.0);
        assert!((assoc_laguerre(LaguerreParams { p: 1, a: 4 }, 1.5) - 3.5).abs() < 1e-15);
    }

    #[test]
    fn degree_two_matches_series() {
        let value = assoc_laguerre(LaguerreParams { p: 2, a: 1 }, 2.0);
        assert!((value - laguerre_series(2, 1, 2.0).0).abs() < 1e-14);
        assert!((value + 1.0).abs() < 1e-14);
    }

    #[test]
    fn recurrence_agrees_with_series_on_fixed_grid() {
        for p in 0..=15u32 {
            for a in 0..=10u32 {
                for &x in &[0.1, 1.0, 10.0] {
                    let rec = assoc_laguerre(LaguerreParams { p, a }, x);
                    let (ser, condition) = laguerre_series(p, a, x);
                    let scale = condition.max(1.0);
                    assert!(
                        (rec - ser).abs() / scale < 1e-12,
                        "p={p} a={a} x={x}: {rec} vs {ser}"
                    );
                }
            }
        }
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        assert_eq!(
            assoc_laguerre_deriv(LaguerreParams { p: 0, a: 5 }, 1.3),
            0.0
        );
    }

    #[test]
    fn derivative_of_degree_one_is_minus_one() {
        assert_eq!(
            assoc_laguerre_deriv(LaguerreParams { p: 1, a: 2 }, 0.4),
            -1.0
        );
    }

    #[test]
    fn derivative_identity_matches_central_difference() {
        for p in 1..=10u32 {
            for &(a, x) in &[(1u32, 2.0f64), (3, 0.7), (5, 9.3)] {
                let params = LaguerreParams { p, a };
                let h = 1e-6;
                let fd =
                    (assoc_laguerre(params, x + h) - assoc_laguerre(params, x - h)) / (2.0 * h);
                let exact = assoc_laguerre_deriv(params, x);
                let scale = exact.abs().max(1.0);
                assert!(
                    (fd - exact).abs() / scale < 1e-7,
                    "p={p} a={a} x={x}: fd {fd} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn factorial_ratio_exact_small_cases() {
        assert_eq!(log_factorial_ratio(0, 0), 0.0);
        assert!((log_factorial_ratio(0, 3) + 6.0f64.ln()).abs() < 1e-15);
        assert!((log_factorial_ratio(2, 2) - (1.0f64 / 12.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn factorial_ratio_finite_for_large_indices() {
        let value = log_factorial_ratio(5000, 5000);
        assert!(value.is_finite());
        // Ratio of factorials is < 1, so the log is strictly negative.
        assert!(value < 0.0);
    }

    #[test]
    fn ground_state_value_at_origin() {
        let state = HydrogenicState::new(1, 0, 1.0).unwrap();
        assert!((hydrogenic_radial(state, 0.0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn radial_functions_are_normalized() {
        for &z in &[1.0, 8.56] {
            for n in 1..=7u32 {
                for l in 0..n {
                    let state = HydrogenicState::new(n, l, z).unwrap();
                    let f = |r: f64| {
                        let v = hydrogenic_radial(state, r);
                        v * v * r * r
                    };
                    let norm = composite_gauss_legendre(&f, 0.0, state.r_max(), 40, 32);
                    assert!((norm - 1.0).abs() < 1e-10, "n={n} l={l} Z={z}: norm {norm}");
                }
            }
        }
    }

    #[test]
    fn radial_node_count_is_n_minus_l_minus_1() {
        for &(n, l, z) in &[(6u32, 0u32, 8.56), (5, 2, 8.56), (3, 1, 1.0), (7, 0, 1.0)] {
            let state = HydrogenicState::new(n, l, z).unwrap();
            let samples = 20_000;
            let r_max = state.r_max();
            let mut nodes = 0;
            let mut prev = hydrogenic_radial(state, r_max * 1e-4);
            for i in 1..samples {
                let r = r_max * (1e-4 + (1.0 - 1e-4) * i as f64 / (samples - 1) as f64);
                let curr = hydrogenic_radial(state, r);
                if prev * curr < 0.0 {
                    nodes += 1;
                }
                if curr != 0.0 {
                    prev = curr;
                }
            }
            assert_eq!(nodes, (n - l - 1) as usize, "n={n} l={l}");
        }
    }

    #[test]
    fn state_constructor_rejects_bad_input() {
        assert_eq!(
            HydrogenicState::new(3, 3, 1.0),
            Err(SpecFunError::OrbitalOutOfRange { n: 3, l: 3 })
        );
        assert_eq!(
            HydrogenicState::new(0, 0, 1.0),
            Err(SpecFunError::ZeroPrincipal)
        );
        assert!(matches!(
            HydrogenicState::new(2, 0, -1.0),
            Err(SpecFunError::NonPositiveCharge(_))
        ));
    }

    proptest! {
        #[test]
        fn recurrence_agrees_with_series_on_random_input(
            p in 0u32..=15,
            a in 0u32..=10,
            x in 0.0f64..30.0,
        ) {
            let rec = assoc_laguerre(LaguerreParams { p, a }, x);
            let (ser, condition) = laguerre_series(p, a, x);
            let scale = condition.max(1.0);
            prop_assert!((rec - ser).abs() / scale < 1e-12);
        }
    }
}
