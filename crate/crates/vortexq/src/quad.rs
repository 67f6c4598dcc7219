//! One-dimensional quadrature primitives.
//!
//! Two deliberately independent schemes are provided: composite
//! Gauss-Legendre panels and adaptive Simpson. Higher-level code integrates
//! the same quantity with both and treats their disagreement as an error
//! estimate, so a bug in either scheme surfaces as a failed cross-check
//! instead of a silently wrong number.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error(
        "adaptive quadrature spent {used} evaluations without reaching \
         tolerance {tolerance:e} (budget {budget})"
    )]
    NonConvergent {
        used: usize,
        budget: usize,
        tolerance: f64,
    },
}

/// Legendre polynomial P_n and its derivative at `x`, by the three-term
/// recurrence. Stable for all n used here.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    // (x^2 - 1) P_n' = n (x P_n - P_{n-1})
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Roots of P_n found by Newton iteration from the Chebyshev-like initial
/// guess; machine precision in a handful of steps for n <= 128.
pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_deriv(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_deriv(n, z);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrates `f` over [a, b] with `panels` equal subdivisions and an
/// `n`-point Gauss-Legendre rule on each.
pub fn composite_gauss_legendre<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    n: usize,
) -> f64 {
    assert!(panels >= 1 && b >= a);
    let (nodes, weights) = gauss_legendre_nodes(n);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for panel in 0..panels {
        let lo = a + panel as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

/// Adaptive Simpson integration of `f` over [a, b] to absolute tolerance
/// `tol`, with a hard budget on integrand evaluations.
///
/// The interval is seeded with a uniform subdivision before the adaptive
/// recursion starts. Pure bisection from [a, b] alone can terminate on a
/// spuriously small error estimate when the integrand's support is much
/// narrower than the interval (all initial probes land on ~0); the seed
/// panels guarantee the support of any reasonably scaled integrand is
/// probed.
///
/// Returns the estimate and the number of evaluations spent. Exceeding the
/// budget is reported as an error: for the smooth integrands in this crate
/// it signals an implementation bug, not a hard integral.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_evals: usize,
) -> Result<(f64, usize), QuadratureError> {
    assert!(b >= a);
    const SEED_PANELS: usize = 16;
    let width = (b - a) / SEED_PANELS as f64;
    let panel_tol = tol / SEED_PANELS as f64;
    let mut used = 0usize;
    let mut total = 0.0;
    for k in 0..SEED_PANELS {
        let lo = a + k as f64 * width;
        let hi = if k == SEED_PANELS - 1 { b } else { lo + width };
        let flo = f(lo);
        let fhi = f(hi);
        let m = 0.5 * (lo + hi);
        let fm = f(m);
        used += 3;
        if used > max_evals {
            return Err(QuadratureError::NonConvergent {
                used,
                budget: max_evals,
                tolerance: tol,
            });
        }
        let whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
        total += simpson_step(
            f, lo, flo, hi, fhi, m, fm, whole, panel_tol, 0, &mut used, max_evals,
        )?;
    }
    Ok((total, used))
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    used: &mut usize,
    max_evals: usize,
) -> Result<f64, QuadratureError> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    *used += 2;
    if *used > max_evals {
        return Err(QuadratureError::NonConvergent {
            used: *used,
            budget: max_evals,
            tolerance: tol,
        });
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // Richardson: the refined estimate left+right+delta/15 has error ~delta/15.
    if delta.abs() <= 15.0 * tol || depth >= 52 {
        return Ok(left + right + delta / 15.0);
    }
    let lv = simpson_step(
        f,
        a,
        fa,
        m,
        fm,
        lm,
        flm,
        left,
        0.5 * tol,
        depth + 1,
        used,
        max_evals,
    )?;
    let rv = simpson_step(
        f,
        m,
        fm,
        b,
        fb,
        rm,
        frm,
        right,
        0.5 * tol,
        depth + 1,
        used,
        max_evals,
    )?;
    Ok(lv + rv)
}

/// Uniform trapezoid sum of a periodic function over one full period
/// [0, 2*pi). Spectrally accurate for trigonometric polynomials.
pub fn periodic_trapezoid<F: Fn(f64) -> f64>(f: &F, n: usize) -> f64 {
    assert!(n >= 1);
    let step = 2.0 * std::f64::consts::PI / n as f64;
    (0..n).map(|j| f(j as f64 * step)).sum::<f64>() * step
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        // n-point rule is exact through degree 2n-1.
        let (nodes, weights) = gauss_legendre_nodes(5);
        let moment =
            |k: i32| -> f64 { nodes.iter().zip(&weights).map(|(x, w)| w * x.powi(k)).sum() };
        assert!((moment(0) - 2.0).abs() < 1e-14);
        assert!(moment(1).abs() < 1e-14);
        assert!((moment(2) - 2.0 / 3.0).abs() < 1e-14);
        assert!((moment(8) - 2.0 / 9.0).abs() < 1e-13);
        assert!(moment(9).abs() < 1e-14);
    }

    #[test]
    fn nodes_sum_to_interval_length_for_large_rules() {
        for n in [16, 32, 64, 96] {
            let (_, weights) = gauss_legendre_nodes(n);
            let total: f64 = weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n} sum={total}");
        }
    }

    #[test]
    fn composite_rule_matches_analytic_exponential() {
        let f = |x: f64| (-x).exp();
        let value = composite_gauss_legendre(&f, 0.0, 60.0, 16, 16);
        assert!((value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_simpson_matches_analytic_results() {
        let f = |x: f64| x.sin();
        let (value, _) = adaptive_simpson(&f, 0.0, PI, 1e-12, 1_000_000).unwrap();
        assert!((value - 2.0).abs() < 1e-11);

        let g = |x: f64| (-x).exp();
        let (value, _) = adaptive_simpson(&g, 0.0, 60.0, 1e-12, 1_000_000).unwrap();
        assert!((value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn adaptive_simpson_reports_budget_exhaustion() {
        // A needle far too sharp for the budget.
        let f = |x: f64| 1.0 / ((x - 0.3171).powi(2) + 1e-24);
        let result = adaptive_simpson(&f, 0.0, 1.0, 1e-14, 200);
        assert!(matches!(result, Err(QuadratureError::NonConvergent { .. })));
    }

    #[test]
    fn periodic_trapezoid_is_exact_for_trig_polynomials() {
        let f = |phi: f64| 1.0 + (3.0 * phi).cos().powi(2);
        let value = periodic_trapezoid(&f, 128);
        assert!((value - 3.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn two_schemes_agree_on_a_shared_integrand() {
        let f = |x: f64| (x * x).exp().recip() * x.powi(4);
        let a = composite_gauss_legendre(&f, 0.0, 10.0, 20, 24);
        let (b, _) = adaptive_simpson(&f, 0.0, 10.0, 1e-13, 1_000_000).unwrap();
        assert!((a - b).abs() / a.abs() < 1e-10);
    }
}
