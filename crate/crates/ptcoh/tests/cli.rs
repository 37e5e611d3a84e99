//! End-to-end tests of the ptcoh binary: exit-code contract, CSV shape,
//! config-file layering, and agreement with direct library evaluation.

use num_complex::Complex64;
use ptcoh::model::ScarfIModel;
use std::io::Write;
use std::process::{Command, Output};

fn ptcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptcoh"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

/// Data rows: everything after the header line, skipping `#` metadata.
fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header_line(csv: &str) -> String {
    csv.lines()
        .find(|l| !l.starts_with('#'))
        .expect("csv should have a header")
        .to_string()
}

/// Numeric value of a `# key = value` metadata line.
fn header_value(csv: &str, key: &str) -> f64 {
    let prefix = format!("# {key} = ");
    csv.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("metadata line for {key} missing"))
        .parse()
        .expect("metadata value should parse")
}

#[test]
fn spectrum_shape_and_known_row() {
    let out = ptcoh(&["spectrum", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(header_line(&text), "n,energy,excitation,ln_rho");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], "0");
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 0.0);
    // Model A level 2: E = e = 10, rho = 4 * 10 = 40
    assert_eq!(rows[2][1].parse::<f64>().unwrap(), 10.0);
    assert_eq!(rows[2][2].parse::<f64>().unwrap(), 10.0);
    let ln_rho: f64 = rows[2][3].parse().unwrap();
    assert!((ln_rho - 40.0f64.ln()).abs() < 1e-12);
}

#[test]
fn wavefunction_endpoints_vanish_and_match_library() {
    let out = ptcoh(&["wavefunction", "--n", "0", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(header_line(&text), "x,re,im");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5);
    for edge in [&rows[0], &rows[4]] {
        assert_eq!(edge[1].parse::<f64>().unwrap(), 0.0);
        assert_eq!(edge[2].parse::<f64>().unwrap(), 0.0);
    }
    // center row is x = 0 exactly and must be bit-identical to the library
    let m = ScarfIModel::new(Complex64::new(1.0, 0.5), 40).unwrap();
    let v = m.eigenfunction(0, 0.0);
    assert_eq!(rows[2][0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows[2][1], format!("{:.16e}", v.re));
    assert_eq!(rows[2][2], format!("{:.16e}", v.im));
}

#[test]
fn wavefunction_single_sample_sits_on_left_edge() {
    let out = ptcoh(&["wavefunction", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = data_rows(&stdout_str(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(
        rows[0][0].parse::<f64>().unwrap(),
        -std::f64::consts::FRAC_PI_2
    );
}

#[test]
fn state_at_zero_action_reduces_to_ground_wavefunction() {
    let state = ptcoh(&["state", "gk", "--J", "0", "--samples", "7"]);
    let wf = ptcoh(&["wavefunction", "--n", "0", "--samples", "7"]);
    assert_eq!(state.status.code(), Some(0));
    let srows = data_rows(&stdout_str(&state));
    let wrows = data_rows(&stdout_str(&wf));
    assert_eq!(srows.len(), wrows.len());
    for (s, w) in srows.iter().zip(&wrows) {
        assert_eq!(&s[..3], &w[..3], "x, re, im columns must agree");
    }
    assert!(stdout_str(&state).contains("NOT a CPT probability density"));
}

#[test]
fn minimal_state_at_zero_radius_reduces_to_ground_wavefunction() {
    let state = ptcoh(&["state", "minimal", "--r", "0", "--samples", "7"]);
    let wf = ptcoh(&["wavefunction", "--n", "0", "--samples", "7"]);
    let srows = data_rows(&stdout_str(&state));
    let wrows = data_rows(&stdout_str(&wf));
    for (s, w) in srows.iter().zip(&wrows) {
        assert_eq!(&s[..3], &w[..3]);
    }
}

#[test]
fn verify_csv_shape_and_group_selection() {
    let out = ptcoh(&["verify", "pt"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(
        header_line(&text),
        "check_name,params,residual,tolerance,passed"
    );
    let names: Vec<&str> = text
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(names, ["pt_invariance", "pt_negative_control"]);
    assert!(text.lines().all(|l| !l.ends_with(",false")));
}

#[test]
fn exit_codes_follow_contract() {
    // absurd tolerance: forced verification failure
    let out = ptcoh(&["verify", "action", "--tol", "1e-20"]);
    assert_eq!(out.status.code(), Some(1));
    // parameter region violation
    let out = ptcoh(&["spectrum", "--alpha-re", "0.4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty(), "diagnostics must not go to stdout");
    // level beyond the configured basis
    let out = ptcoh(&["wavefunction", "--n", "99"]);
    assert_eq!(out.status.code(), Some(2));
    // invalid label
    let out = ptcoh(&["state", "gk", "--J", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    // degenerate grid request
    let out = ptcoh(&["wavefunction", "--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed invocation (clap)
    let out = ptcoh(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    // bad tolerance value
    let out = ptcoh(&["verify", "action", "--tol", "-3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_applies_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# model B").unwrap();
    writeln!(f, "alpha_re = 0.85").unwrap();
    writeln!(f, "alpha_im = 0.4").unwrap();
    writeln!(f, "n_max = 12").unwrap();
    drop(f);
    let cfg = path.to_str().unwrap();

    let out = ptcoh(&["spectrum", "--config", cfg]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(header_value(&text, "alpha_re"), 0.85);
    assert_eq!(data_rows(&text).len(), 13); // n_max from file caps the listing

    // flag wins over file
    let out = ptcoh(&["spectrum", "--config", cfg, "--alpha-re", "1.0"]);
    let text = stdout_str(&out);
    assert_eq!(header_value(&text, "alpha_re"), 1.0);

    // unknown key is a config error
    std::fs::write(&path, "alpha_res = 1.0\n").unwrap();
    let out = ptcoh(&["spectrum", "--config", cfg]);
    assert_eq!(out.status.code(), Some(2));

    // missing file is a config error
    let out = ptcoh(&["spectrum", "--config", "/nonexistent/run.cfg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_receives_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.csv");
    let out = ptcoh(&["spectrum", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(header_line(&text), "n,energy,excitation,ln_rho");
    assert_eq!(data_rows(&text).len(), 3);
}
