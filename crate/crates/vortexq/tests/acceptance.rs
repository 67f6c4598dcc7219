//! End-to-end acceptance checks for the vortex quadrupole toolkit.
//!
//! Each test covers one numbered criterion from the project checklist and
//! prints exactly one line of the form
//!
//!   acceptance N (name): PASS|FAIL - measured figures and tolerance
//!
//! before asserting. Run with `--nocapture` to see the lines for passing
//! criteria as well.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use vortexq::absorption::{absorption_rate, lorentzian_dos, rate_profile, DetuningSpec, Validity};
use vortexq::atomic::{channel_moments, quadrupole_matrix_element_checked, AtomicLevel, Axis};
use vortexq::beam::{LGMode, Polarization, Position};
use vortexq::config::RunConfig;
use vortexq::coupling::{rabi_channel, rabi_general, scaling_factors, Channel, Convention};
use vortexq::oracle::{fd_rabi, peak_scan};
use vortexq::quad::adaptive_simpson;
use vortexq::specfun::assoc_laguerre;

const LAMBDA: f64 = 685e-9;
const INTENSITY: f64 = 4.0e5;
const GAMMA_S: f64 = 3.34e7;
const Z_EFF: f64 = 8.56;

/// Matrix-element magnitudes of the effective-charge model, frozen from
/// the dual-quadrature evaluation at Z_EFF (see the config module tests).
const Q_XX: f64 = 0.9581212313566776;
const Q_XZ: f64 = 1.1734540642754852;

fn report(number: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {number} ({name}): {verdict} - {detail}");
}

fn mode(ell: i32, p: u32, sigma_z: i32, waist_over_lambda: f64) -> LGMode {
    LGMode::new(
        LAMBDA,
        waist_over_lambda * LAMBDA,
        ell,
        p,
        INTENSITY,
        Polarization::circular(sigma_z),
    )
    .expect("valid beam parameters")
}

/// Random off-axis point staying clear of the Laguerre nodes, where both
/// sides of a comparison vanish and relative error loses meaning.
fn clear_point(rng: &mut ChaCha8Rng, m: &LGMode, min_l_abs: f64) -> Position {
    loop {
        let rho_bar = rng.random_range(0.05..2.5f64);
        let phi = rng.random_range(0.0..TAU);
        let l = assoc_laguerre(m.laguerre_params(), 2.0 * rho_bar * rho_bar);
        if l.abs() >= min_l_abs {
            return Position::from_cylindrical(rho_bar * m.waist(), phi, 0.0);
        }
    }
}

#[test]
fn criterion_1_scaling_factor_reproduction() {
    let m = mode(2, 0, -1, 5.0);
    let scaling = scaling_factors(&m, 10.0, 10.0);
    let got = scaling.omega_0 / GAMMA_S;
    let want = 3.25e-2;
    let rel = (got - want).abs() / want;
    let pass = rel <= 0.02;
    report(
        1,
        "scaling-factor reproduction",
        pass,
        &format!(
            "Omega_0/Gamma_S = {got:.5e} vs reference 3.25e-2, relative error {rel:.2e} <= 2e-2"
        ),
    );
    assert!(
        pass,
        "Omega_0/Gamma_S = {got:.6e}, off the 3.25e-2 reference by {rel:.3e}"
    );
}

#[test]
fn criterion_2_matrix_element_magnitude() {
    let lower = AtomicLevel::new(6, 0, 0).unwrap();
    let xx = quadrupole_matrix_element_checked(
        &lower,
        &AtomicLevel::new(5, 2, 0).unwrap(),
        (Axis::X, Axis::X),
        Z_EFF,
    )
    .expect("quadrature converges");
    let xz = quadrupole_matrix_element_checked(
        &lower,
        &AtomicLevel::new(5, 2, 1).unwrap(),
        (Axis::Z, Axis::X),
        Z_EFF,
    )
    .expect("quadrature converges");
    let schemes_agree = xx.discrepancy <= 1e-8 && xz.discrepancy <= 1e-8;
    let q_xx = xx.value.norm();
    let q_xz = xz.value.norm();
    let window = 5.0..=20.0;
    let magnitudes_ok = window.contains(&q_xx) && window.contains(&q_xz);
    let pass = schemes_agree && magnitudes_ok;
    report(
        2,
        "matrix-element magnitude",
        pass,
        &format!(
            "|Q_xx| = {q_xx:.4} e a0^2, |Q_xz| = {q_xz:.4} e a0^2 against target window [5, 20]; \
             dual-scheme discrepancies {:.1e} and {:.1e} <= 1e-8",
            xx.discrepancy, xz.discrepancy
        ),
    );
    assert!(
        pass,
        "single-effective-charge wavefunctions at Z = {Z_EFF} give |Q_xx| = {q_xx:.4} and \
         |Q_xz| = {q_xz:.4} e a0^2, an order of magnitude below the ~10 e a0^2 reference; \
         the quadrature itself is converged (schemes agree to {:.1e}). See README, \
         'Model fidelity'.",
        xx.discrepancy.max(xz.discrepancy)
    );
}

#[test]
fn criterion_3_coupling_form_equivalence() {
    // Every open channel for each circular polarization, with a spread of
    // radial orders so the Laguerre derivative terms are exercised too.
    let cases = [
        (0i32, -1i32, 0u32),
        (1, -1, 1),
        (2, -1, 2),
        (0, 1, 1),
        (-1, 1, 0),
        (-2, 1, 1),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0003);
    let mut worst_closed = 0.0f64;
    let mut worst_fd = 0.0f64;
    for &(dm, sigma, p) in &cases {
        let ell = dm - sigma;
        let m = mode(ell, p, sigma, 5.0);
        let channel = Channel::new(dm, ell, sigma).unwrap();
        let scaling = scaling_factors(&m, Q_XX, Q_XZ);
        let moments = channel_moments(dm, Q_XX, Q_XZ, m.polarization());
        let scale = scaling.omega_01.max(scaling.omega_02);
        for _ in 0..100 {
            let pos = clear_point(&mut rng, &m, 1e-3);
            let general = rabi_general(&m, &moments, &pos, Convention::Full).unwrap();
            let closed = rabi_channel(&m, &scaling, &pos, &channel, Convention::Full).unwrap();
            let err =
                (general - closed).norm() / general.norm().max(closed.norm()).max(1e-10 * scale);
            worst_closed = worst_closed.max(err);
        }
        for _ in 0..100 {
            let mut pos = clear_point(&mut rng, &m, 0.05);
            while pos.rho() < 0.1 * m.waist() {
                pos = clear_point(&mut rng, &m, 0.05);
            }
            let general = rabi_general(&m, &moments, &pos, Convention::Full).unwrap();
            let numeric = fd_rabi(&m, &moments, &pos, 1e-6, Convention::Full).unwrap();
            let err =
                (general - numeric).norm() / general.norm().max(numeric.norm()).max(1e-8 * scale);
            worst_fd = worst_fd.max(err);
        }
    }
    let pass = worst_closed <= 1e-10 && worst_fd <= 1e-6;
    report(
        3,
        "coupling-form equivalence",
        pass,
        &format!(
            "closed vs general worst {worst_closed:.2e} <= 1e-10, general vs finite-difference \
             worst {worst_fd:.2e} <= 1e-6, 100 random points x 6 channels each"
        ),
    );
    assert!(
        pass,
        "worst closed-form error {worst_closed:.3e}, worst fd error {worst_fd:.3e}"
    );
}

#[test]
fn criterion_4_mode_power_invariance() {
    let mut worst = 0.0f64;
    let mut worst_case = (0i32, 0u32);
    for ell in 0..=5i32 {
        for p in 0..=3u32 {
            let m = mode(ell, p, -1, 5.0);
            let power = m.mode_power_integral().expect("profile integral converges");
            let want = PI * m.waist() * m.waist() / 2.0;
            let rel = (power - want).abs() / want;
            if rel > worst {
                worst = rel;
                worst_case = (ell, p);
            }
        }
    }
    let pass = worst <= 1e-9;
    report(
        4,
        "mode-power invariance",
        pass,
        &format!(
            "integral of g^2 over the plane vs pi w0^2 / 2: worst relative error {worst:.2e} \
             <= 1e-9 at (ell, p) = {worst_case:?} over [0..5] x [0..3]"
        ),
    );
    assert!(
        pass,
        "worst mode-power error {worst:.3e} at (ell, p) = {worst_case:?}"
    );
}

#[test]
fn criterion_5_peak_laws() {
    let peak = |dm: i32, xi: f64| {
        let ell = dm + 1;
        let m = mode(ell, 0, -1, xi);
        let channel = Channel::new(dm, ell, -1).unwrap();
        let scaling = scaling_factors(&m, Q_XX, Q_XZ);
        let f = |rho_bar: f64| {
            let pos = Position::new(rho_bar * m.waist(), 0.0, 0.0);
            rabi_channel(&m, &scaling, &pos, &channel, Convention::Full)
                .expect("off axis")
                .norm()
        };
        peak_scan(&f, 0.01, 4.0, 4001)
    };

    // For the orbital-transfer channel the ring maximum keeps its height
    // while its radius tracks the waist.
    let narrow = peak(1, 5.0);
    let wide = peak(1, 8.0);
    let interior = !narrow.at_endpoint && !wide.at_endpoint;
    let ordinate_rel = (wide.value - narrow.value).abs() / narrow.value;
    let abscissa_ratio = (wide.rho_peak * 8.0) / (narrow.rho_peak * 5.0);
    let ratio_err = (abscissa_ratio / 1.6 - 1.0).abs();
    let ordinate_ok = ordinate_rel <= 1e-9;
    let abscissa_ok = ratio_err <= 1e-6;

    // The other channels lose peak height as the focus loosens.
    let dm0_decreases = peak(0, 8.0).value < peak(0, 5.0).value;
    let dm2_decreases = peak(2, 8.0).value < peak(2, 5.0).value;

    let pass = interior && ordinate_ok && abscissa_ok && dm0_decreases && dm2_decreases;
    report(
        5,
        "peak laws",
        pass,
        &format!(
            "dm=+1 peak height w0-invariant to {ordinate_rel:.2e} <= 1e-9, rho/lambda ratio \
             {abscissa_ratio:.9} vs 8/5 (error {ratio_err:.2e}); peak decreases 5->8 waists: \
             dm=0 {dm0_decreases}, dm=+2 {dm2_decreases}"
        ),
    );
    assert!(
        pass,
        "interior={interior} ordinate_rel={ordinate_rel:.3e} ratio={abscissa_ratio:.9} \
         dm0_decreases={dm0_decreases} dm2_decreases={dm2_decreases}"
    );
}

#[test]
fn criterion_6_polarization_gating() {
    let cases = [(1i32, 1i32), (-1, -1), (2, 1), (-2, -1)];
    let grid = RunConfig::default().grid();
    let mut worst = 0.0f64;
    let mut points = 0usize;
    for &(dm, sigma) in &cases {
        let ell = dm - sigma;
        let m = mode(ell, 0, sigma, 5.0);
        let channel = Channel::new(dm, ell, sigma).unwrap();
        let scaling = scaling_factors(&m, Q_XX, Q_XZ);
        for &rho_bar in &grid {
            let pos = Position::new(rho_bar * m.waist(), 0.0, 0.0);
            let rabi =
                rabi_channel(&m, &scaling, &pos, &channel, Convention::Full).expect("off axis");
            worst = worst.max(rabi.norm());
            points += 1;
        }
    }
    let pass = worst == 0.0;
    report(
        6,
        "polarization gating",
        pass,
        &format!(
            "4 gated (delta_m, sigma_z) cases x {} grid points: largest |Omega| = {worst:e} \
             (exact zero required)",
            points / 4
        ),
    );
    assert!(pass, "gated channel leaked |Omega| = {worst:e}");
}

#[test]
fn criterion_7_channel_dominance() {
    let peak_rate = |dm: i32| {
        let cfg = RunConfig {
            delta_m: dm,
            ..RunConfig::default()
        };
        let (q_xx, q_xz) = cfg.resolve_magnitudes().expect("quadrature converges");
        let channel = cfg.channel().expect("open channel");
        let m = cfg.mode().expect("valid mode");
        let line = cfg.line().expect("valid line");
        let scaling = scaling_factors(&m, q_xx, q_xz);
        let samples = rate_profile(
            &m,
            &channel,
            &line,
            &scaling,
            &cfg.grid(),
            cfg.detuning(),
            cfg.convention,
        )
        .expect("profile computes");
        samples
            .iter()
            .map(|s| s.rate_over_gamma)
            .fold(0.0, f64::max)
    };
    let r0 = peak_rate(0);
    let r1 = peak_rate(1);
    let r2 = peak_rate(2);
    let pass = r1 >= 10.0 * r0 && r1 >= 10.0 * r2;
    report(
        7,
        "channel dominance",
        pass,
        &format!(
            "peak resonant rate/gamma: dm=+1 {r1:.3e} vs dm=0 {r0:.3e} ({:.1}x) and \
             dm=+2 {r2:.3e} ({:.1}x), both >= 10x",
            r1 / r0,
            r1 / r2
        ),
    );
    assert!(
        pass,
        "dominance ratios {:.2} and {:.2} fell below 10",
        r1 / r0,
        r1 / r2
    );
}

#[test]
fn criterion_8_rate_identities() {
    let line = RunConfig::default().line().expect("valid line");
    let gamma = line.gamma();
    let rabi = C64::new(1.3e5, -7.0e4);

    let (resonant, _) = absorption_rate(rabi, &line, DetuningSpec::DetuningOverGamma(0.0));
    let closed = 4.0 * rabi.norm_sqr() / gamma;
    let resonant_rel = (resonant - closed).abs() / closed;
    let resonant_ok = resonant_rel <= 1e-14;

    let (half_detuned, _) = absorption_rate(rabi, &line, DetuningSpec::DetuningOverGamma(0.5));
    let halves_exactly = half_detuned == 0.5 * resonant;

    // Window integral of the line shape plus the analytic tails of the
    // Lorentzian beyond it.
    let window = 200.0 * gamma;
    let (window_integral, _) = adaptive_simpson(
        &|omega| lorentzian_dos(omega, &line),
        line.omega_a() - window,
        line.omega_a() + window,
        1e-10,
        2_000_000,
    )
    .expect("line-shape integral converges");
    let tails = 1.0 - 2.0 / PI * (2.0 * window / gamma).atan();
    let total = window_integral + tails;
    let norm_err = (total - 1.0).abs();
    let norm_ok = norm_err <= 1e-6;

    let pass = resonant_ok && halves_exactly && norm_ok;
    report(
        8,
        "rate identities",
        pass,
        &format!(
            "resonant rate vs 4|Omega|^2/gamma relative error {resonant_rel:.1e} <= 1e-14; \
             gamma/2 detuning halves the rate exactly: {halves_exactly}; line shape integrates \
             to 1 within {norm_err:.1e} <= 1e-6"
        ),
    );
    assert!(
        pass,
        "resonant_rel={resonant_rel:.2e} halves_exactly={halves_exactly} norm_err={norm_err:.2e}"
    );
}

#[test]
fn criterion_9_golden_rule_validity() {
    let cfg = RunConfig::default();
    let (q_xx, q_xz) = cfg.resolve_magnitudes().expect("quadrature converges");
    let channel = cfg.channel().expect("open channel");
    let m = cfg.mode().expect("valid mode");
    let line = cfg.line().expect("valid line");
    let scaling = scaling_factors(&m, q_xx, q_xz);
    let samples = rate_profile(
        &m,
        &channel,
        &line,
        &scaling,
        &cfg.grid(),
        cfg.detuning(),
        cfg.convention,
    )
    .expect("profile computes");
    let flagged = samples
        .iter()
        .filter(|s| s.validity != Validity::GoldenRuleOk)
        .count();
    let peak_ratio = samples
        .iter()
        .map(|s| s.rabi_magnitude / line.gamma())
        .fold(0.0, f64::max);
    let pass = flagged == 0;
    report(
        9,
        "golden-rule validity",
        pass,
        &format!(
            "{} of {} default-run samples flagged, peak |Omega|/gamma = {peak_ratio:.2e}",
            flagged,
            samples.len()
        ),
    );
    assert!(pass, "{flagged} samples left the golden-rule regime");
}
