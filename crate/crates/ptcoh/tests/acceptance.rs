//! Acceptance gate: one test per shipped claim, at the stated tolerance,
//! printing one pass/fail line each. Models: A (alpha = 1 + 0.5i) and
//! B (alpha = 0.85 + 0.4i).

use num_complex::Complex64;
use ptcoh::coherent::{gk_normalization_series, GKStateSpec};
use ptcoh::model::ScarfIModel;
use ptcoh::verify::{
    check_action_identity, check_completeness, check_gk_moments, check_minimal_moments,
    check_normalization, check_orthonormality, check_overlap_consistency, check_pt_invariance,
    check_pt_negative_control, check_temporal_instability_minimal, check_temporal_stability,
    VerificationReport,
};
use std::process::Command;

const MODEL_A: (f64, f64) = (1.0, 0.5);
const MODEL_B: (f64, f64) = (0.85, 0.4);

fn model((re, im): (f64, f64)) -> ScarfIModel {
    ScarfIModel::new(Complex64::new(re, im), 40).unwrap()
}

fn conclude(number: u32, label: &str, residual: f64, passed: bool) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("criterion {number:02} {label}: {verdict} (residual {residual:.3e})");
    assert!(passed, "criterion {number:02} {label}: residual {residual:.3e}");
}

fn param<'a>(report: &'a VerificationReport, key: &str) -> &'a str {
    report
        .parameters()
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .unwrap_or_else(|| panic!("report lacks parameter {key}"))
}

#[test]
fn criterion_01_cpt_orthonormality() {
    let mut worst = 0.0f64;
    let mut passed = true;
    for m in [model(MODEL_A), model(MODEL_B)] {
        let rep = check_orthonormality(&m, 12, 1e-8).unwrap();
        worst = worst.max(rep.residual());
        passed &= rep.passed();
    }
    conclude(1, "CPT orthonormality, both models, n <= 12", worst, passed);
}

#[test]
fn criterion_02_normalization_cross_check() {
    let mut worst = 0.0f64;
    let mut passed = true;
    for m in [model(MODEL_A), model(MODEL_B)] {
        let rep = check_normalization(&m, &[0.1, 1.0, 10.0, 50.0], 1e-10).unwrap();
        worst = worst.max(rep.residual());
        passed &= rep.passed();
    }
    // published anchor, 6 significant digits
    let anchor = (gk_normalization_series(&model(MODEL_A), 1.0) - 1.27644).abs();
    passed &= anchor < 5e-6;
    conclude(
        2,
        "normalization series vs closed form, anchor N(1) ~ 1.27644",
        worst.max(anchor),
        passed,
    );
}

#[test]
fn criterion_03_action_identity() {
    let mut worst = 0.0f64;
    let mut passed = true;
    for m in [model(MODEL_A), model(MODEL_B)] {
        let rep = check_action_identity(&m, &[0.5, 2.0, 10.0], 1e-8).unwrap();
        worst = worst.max(rep.residual());
        passed &= rep.passed();
        // gamma = 0 and gamma = 3.7 must agree exactly
        for row in rep.details().iter().filter(|d| d.label.ends_with("independence")) {
            passed &= row.residual == 0.0;
        }
    }
    conclude(3, "action identity <H> = omega J, both models", worst, passed);
}

#[test]
fn criterion_04_gk_moment_problem() {
    let mut worst = 0.0f64;
    let mut passed = true;
    for m in [model(MODEL_A), model(MODEL_B)] {
        let rep = check_gk_moments(&m, 10, 1e-8).unwrap();
        worst = worst.max(rep.residual());
        passed &= rep.passed();
        // the constant relating the normalized weight to the raw
        // Bessel-product density must be recorded in the report
        passed &= param(&rep, "bessel_product_relation").contains("2*pi");
    }
    conclude(
        4,
        "action-family moments reproduce rho_n for n <= 10, both models",
        worst,
        passed,
    );
}

#[test]
fn criterion_05_minimal_moment_problem() {
    let rep = check_minimal_moments(8, 1e-8).unwrap();
    conclude(
        5,
        "minimal-family moments reproduce Gamma(2n+1) for n <= 8",
        rep.residual(),
        rep.passed(),
    );
}

#[test]
fn criterion_06_completeness() {
    let rep = check_completeness(&model(MODEL_A), 16, &[0, 1, 2, 3, 4, 5], 1e-6).unwrap();
    conclude(
        6,
        "signed-kernel reconstruction of psi_m, m <= 5, N = 16",
        rep.residual(),
        rep.passed(),
    );
}

#[test]
fn criterion_07_temporal_stability_and_instability() {
    let m = model(MODEL_A);
    let spec = GKStateSpec::new(1.0, 0.2).unwrap();
    let stable = check_temporal_stability(&m, &spec, 1.4, 1e-12).unwrap();
    let unstable = check_temporal_instability_minimal(&m, 1.0, 1.0, 0.01, 1e-15).unwrap();
    let certified: f64 = param(&unstable, "certified_lower_bound").parse().unwrap();
    let passed = stable.passed() && unstable.passed() && certified >= 0.01;
    conclude(
        7,
        "gk evolution phase-exact; minimal instability >= 0.01 at r = 1, t = 1",
        stable.residual(),
        passed,
    );
}

#[test]
fn criterion_08_overlap_formulas() {
    let rep = check_overlap_consistency(&model(MODEL_A), 1e-7).unwrap();
    conclude(
        8,
        "overlap series vs quadrature pairing, two pairs per family",
        rep.residual(),
        rep.passed(),
    );
}

#[test]
fn criterion_09_pt_invariance_with_negative_control() {
    let m = model(MODEL_A);
    let rep = check_pt_invariance(&m, 12, 41, 1e-10).unwrap();
    let ctrl = check_pt_negative_control(&m, 1e-15).unwrap();
    conclude(
        9,
        "PT invariance n <= 12; no-phase control breaks odd levels",
        rep.residual(),
        rep.passed() && ctrl.passed(),
    );
}

#[test]
fn criterion_10_determinism() {
    let exe = env!("CARGO_BIN_EXE_ptcoh");
    let mut passed = true;
    for (re, im) in [MODEL_A, MODEL_B] {
        let run = || {
            Command::new(exe)
                .args([
                    "verify",
                    "all",
                    "--alpha-re",
                    &re.to_string(),
                    "--alpha-im",
                    &im.to_string(),
                ])
                .output()
                .expect("verify all should run")
        };
        let first = run();
        let second = run();
        passed &= first.status.code() == Some(0);
        passed &= second.status.code() == Some(0);
        passed &= !first.stdout.is_empty();
        passed &= first.stdout == second.stdout;
    }
    conclude(
        10,
        "verify all twice per model: exit 0, byte-identical CSV",
        0.0,
        passed,
    );
}
