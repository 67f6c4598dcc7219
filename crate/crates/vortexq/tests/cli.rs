//! End-to-end tests of the vortexq binary: argument handling, config-file
//! layering, output plumbing, and exit codes.

use std::process::{Command, Output};

fn vortexq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vortexq"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone())
        .expect("utf-8 output")
        .lines()
        .map(str::to_string)
        .collect()
}

/// CSV body rows, with the '#' header block and the column-name row
/// stripped off.
fn data_rows(lines: &[String]) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = lines
        .iter()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert!(!rows.is_empty(), "no column-name row in output");
    rows.remove(0);
    rows
}

fn column(lines: &[String], index: usize) -> Vec<f64> {
    data_rows(lines)
        .iter()
        .map(|r| r[index].parse().expect("numeric cell"))
        .collect()
}

/// One leading digit, eight fractional digits, and a bare exponent, the
/// shape of a nine-significant-digit scientific cell.
fn is_sci9(cell: &str) -> bool {
    let s = cell.strip_prefix('-').unwrap_or(cell);
    let Some((mantissa, exponent)) = s.split_once('e') else {
        return false;
    };
    let Some((head, tail)) = mantissa.split_once('.') else {
        return false;
    };
    let exp_digits = exponent.strip_prefix('-').unwrap_or(exponent);
    head.len() == 1
        && head.bytes().all(|b| b.is_ascii_digit())
        && tail.len() == 8
        && tail.bytes().all(|b| b.is_ascii_digit())
        && !exp_digits.is_empty()
        && exp_digits.bytes().all(|b| b.is_ascii_digit())
}

const CONFIG_KEYS: [&str; 15] = [
    "wavelength_nm",
    "intensity_W_per_m2",
    "gamma_s_per_s",
    "q_xx_ea02",
    "q_xz_ea02",
    "z_eff",
    "ell",
    "p",
    "delta_m",
    "sigma_z",
    "waist_over_lambda",
    "detuning_over_gamma",
    "rho_max_over_waist",
    "samples",
    "convention",
];

#[test]
fn identical_invocations_are_byte_identical_and_files_mirror_stdout() {
    let first = vortexq(&["rabi"]);
    assert!(first.status.success());
    let second = vortexq(&["rabi"]);
    assert_eq!(first.stdout, second.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let to_file = vortexq(&["rabi", "--out", path.to_str().unwrap()]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), first.stdout);
}

#[test]
fn csv_headers_echo_every_config_key_and_cells_carry_nine_digits() {
    let out = vortexq(&["rabi"]);
    assert!(out.stdout.ends_with(b"\n"));
    let lines = stdout_lines(&out);
    for key in CONFIG_KEYS {
        assert!(
            lines.iter().any(|l| l.starts_with(&format!("# {key}="))),
            "missing header for {key}"
        );
    }
    assert_eq!(lines.iter().filter(|l| l.starts_with('#')).count(), 15);
    let names = lines.iter().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(names, "rho_over_wavelength,omega_over_omega0");
    let rows = data_rows(&lines);
    assert_eq!(rows.len(), 1000);
    for row in &rows {
        assert_eq!(row.len(), 2);
        for cell in row {
            assert!(
                is_sci9(cell),
                "cell {cell:?} is not 9-significant-digit scientific"
            );
        }
    }
}

#[test]
fn flags_override_config_file_keys_which_override_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(
        &path,
        "# loose focus run\nwaist_over_lambda = 8\ndelta_m = 0\n",
    )
    .unwrap();
    let out = vortexq(&[
        "rabi",
        "--config",
        path.to_str().unwrap(),
        "--waist-over-lambda",
        "6",
    ]);
    let lines = stdout_lines(&out);
    assert!(
        lines.contains(&"# waist_over_lambda=6".to_string()),
        "flag should win"
    );
    assert!(
        lines.contains(&"# delta_m=0".to_string()),
        "file should beat the default"
    );
    assert!(
        lines.contains(&"# ell=1".to_string()),
        "ell should resolve from the file value"
    );
}

#[test]
fn rejected_configurations_exit_with_code_2_and_name_the_rule() {
    let gated = vortexq(&["rabi", "--sigma-z", "1"]);
    assert_eq!(gated.status.code(), Some(2));
    assert!(gated.stdout.is_empty());
    let message = String::from_utf8_lossy(&gated.stderr);
    assert!(message.contains("gate closes"), "stderr: {message}");

    let linear = vortexq(&["channels", "--sigma-z", "0"]);
    assert_eq!(linear.status.code(), Some(2));
    let message = String::from_utf8_lossy(&linear.stderr);
    assert!(
        message.contains("sigma_z must be +1 or -1"),
        "stderr: {message}"
    );

    let negative = vortexq(&["rate", "--q-xx-ea02", "-1"]);
    assert_eq!(negative.status.code(), Some(2));
    let message = String::from_utf8_lossy(&negative.stderr);
    assert!(message.contains("must be positive"), "stderr: {message}");

    let mismatched = vortexq(&["rabi", "--ell", "5"]);
    assert_eq!(mismatched.status.code(), Some(2));
    let message = String::from_utf8_lossy(&mismatched.stderr);
    assert!(
        message.contains("angular momentum balance"),
        "stderr: {message}"
    );
}

#[test]
fn validate_reports_every_check_passing_under_both_conventions() {
    for args in [
        vec!["validate"],
        vec!["validate", "--convention", "hamiltonian-eq5p"],
    ] {
        let out = vortexq(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let lines = stdout_lines(&out);
        assert_eq!(lines.len(), 23, "one JSON line per check");
        for line in &lines {
            let report: serde_json::Value = serde_json::from_str(line).expect("JSON line");
            assert_eq!(
                report["pass"],
                serde_json::Value::Bool(true),
                "failing check: {line}"
            );
        }
    }
}

#[test]
fn first_radial_order_profile_dips_to_zero_twice() {
    let out = vortexq(&[
        "rabi",
        "--delta-m",
        "0",
        "--ell",
        "1",
        "--p",
        "1",
        "--samples",
        "4000",
    ]);
    let values = column(&stdout_lines(&out), 1);
    let max = values.iter().fold(0.0f64, |a, &b| a.max(b));
    let mut dips = 0;
    for i in 1..values.len() - 1 {
        if values[i] < 1e-2 * max && values[i] <= values[i - 1] && values[i] < values[i + 1] {
            dips += 1;
        }
    }
    assert_eq!(
        dips, 2,
        "expected the two interior nodes of the p=1 profile"
    );
}

#[test]
fn half_linewidth_detuning_halves_every_rate_sample() {
    let resonant = vortexq(&["rate", "--samples", "200"]);
    let detuned = vortexq(&["rate", "--samples", "200", "--detuning-over-gamma", "0.5"]);
    let res = column(&stdout_lines(&resonant), 1);
    let det = column(&stdout_lines(&detuned), 1);
    assert_eq!(res.len(), 200);
    for (r, d) in res.iter().zip(&det) {
        assert!((d / r - 0.5).abs() < 1e-8, "rate {d} is not half of {r}");
    }
}

#[test]
fn grid_refinement_leaves_the_peak_height_in_place() {
    let coarse = column(&stdout_lines(&vortexq(&["rabi"])), 1);
    let fine = column(&stdout_lines(&vortexq(&["rabi", "--samples", "2000"])), 1);
    let peak = |v: &[f64]| v.iter().fold(0.0f64, |a, &b| a.max(b));
    let rel = (peak(&coarse) - peak(&fine)).abs() / peak(&fine);
    assert!(rel < 1e-3, "peak moved by {rel:.2e} under refinement");
}

#[test]
fn channels_enumerates_the_transfer_cases_for_left_circular_light() {
    let out = vortexq(&["channels"]);
    let lines = stdout_lines(&out);
    let names = lines.iter().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        names,
        "delta_m,ell,sigma_z,kind,gating_polarization,dominant"
    );
    let rows = data_rows(&lines);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0], ["0", "1", "-1", "no-oam-transfer", "none", "no"]);
    assert_eq!(
        rows[1],
        ["1", "2", "-1", "oam-transfer", "alpha+i*beta", "yes"]
    );
    assert_eq!(
        rows[2],
        ["2", "3", "-1", "tam-transfer", "alpha+i*beta", "no"]
    );
}

#[test]
fn matrix_elements_tabulates_all_five_transfer_cases() {
    let out = vortexq(&["matrix-elements"]);
    let rows = data_rows(&stdout_lines(&out));
    assert_eq!(rows.len(), 5);
    let transfers: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(transfers, ["-2", "-1", "0", "1", "2"]);
    // Left-circular light closes the negative-transfer rows: zero gate and
    // zero effective moments.
    let gate = |r: &[String]| r[11].parse::<f64>().unwrap();
    assert_eq!(gate(&rows[0]), 0.0);
    assert!(rows[0][12..]
        .iter()
        .all(|c| c.parse::<f64>().unwrap() == 0.0));
    assert!((gate(&rows[3]) - std::f64::consts::SQRT_2).abs() < 1e-8);
}

#[test]
fn json_output_carries_config_columns_and_rows() {
    let out = vortexq(&["rate", "--format", "json", "--samples", "50"]);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 1, "JSON output is a single object");
    let v: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
    assert_eq!(v["config"]["delta_m"], "1");
    assert_eq!(v["config"]["convention"], "paper-eq12");
    assert_eq!(v["columns"][0], "rho_over_wavelength");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 50);
    assert_eq!(rows[0][2], "golden-rule-ok");
}
