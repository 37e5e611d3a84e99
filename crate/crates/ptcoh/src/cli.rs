//! Command-line frontend. Four subcommands: `spectrum`, `wavefunction` and
//! `state` emit CSV for external plotting; `verify` runs the certification
//! suite and reports through its exit code.
//!
//! Exit codes: 0 success / all checks passed, 1 at least one check failed,
//! 2 usage or configuration error, 3 numerical non-convergence. Output is
//! deterministic: identical config and command give byte-identical CSV.
//! Diagnostics go to stderr only; no environment variables are consulted.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::PathBuf;
use thiserror::Error;

use crate::coherent::{
    evaluate_state, gk_coefficients, minimal_coefficients, GKStateSpec, MinimalStateSpec,
    DEFAULT_TAIL_EPSILON,
};
use crate::model::ScarfIModel;
use crate::verify::{run_check, VerifyError, CHECK_NAMES};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerics(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerics(_) => 3,
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Precondition(msg) => CliError::Usage(msg),
            other => CliError::Numerics(other.to_string()),
        }
    }
}

/// Resolved run configuration: built-in defaults, then the config file,
/// then command-line flags, each layer overriding the previous one.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub n_max: usize,
    /// None: every check uses its own default tolerance.
    pub tol: Option<f64>,
    pub tail_epsilon: f64,
    /// "-" writes to stdout.
    pub output_path: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha_re: 1.0,
            alpha_im: 0.5,
            n_max: 40,
            tol: None,
            tail_epsilon: DEFAULT_TAIL_EPSILON,
            output_path: "-".into(),
        }
    }
}

impl RunConfig {
    /// Apply a flat key=value config text. Lines are trimmed; empty lines
    /// and `#` comments are skipped; unknown keys are rejected rather than
    /// ignored so typos cannot silently fall back to defaults.
    pub fn apply_file(&mut self, text: &str) -> Result<(), CliError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "config line {}: expected key=value, got `{line}`",
                    idx + 1
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                CliError::Usage(format!(
                    "config line {}: cannot parse `{value}` as {what} for key `{key}`",
                    idx + 1
                ))
            };
            match key {
                "alpha_re" => self.alpha_re = value.parse().map_err(|_| bad("a real"))?,
                "alpha_im" => self.alpha_im = value.parse().map_err(|_| bad("a real"))?,
                "n_max" => self.n_max = value.parse().map_err(|_| bad("an integer"))?,
                "tol" => self.tol = Some(value.parse().map_err(|_| bad("a real"))?),
                "tail_epsilon" => {
                    self.tail_epsilon = value.parse().map_err(|_| bad("a real"))?
                }
                "output_path" => self.output_path = value.to_string(),
                other => {
                    return Err(CliError::Usage(format!(
                        "config line {}: unknown key `{other}`",
                        idx + 1
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !self.alpha_re.is_finite() || !self.alpha_im.is_finite() || self.alpha_re <= 0.5 {
            return Err(CliError::Usage(format!(
                "alpha = {} + {}i outside the admissible region (need finite, Re > 1/2)",
                self.alpha_re, self.alpha_im
            )));
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(CliError::Usage(format!("tol must be finite and > 0, got {tol}")));
            }
        }
        if !(self.tail_epsilon > 0.0) || !self.tail_epsilon.is_finite() {
            return Err(CliError::Usage(format!(
                "tail_epsilon must be finite and > 0, got {}",
                self.tail_epsilon
            )));
        }
        if self.n_max == 0 {
            return Err(CliError::Usage("n_max must be at least 1".into()));
        }
        if self.output_path.is_empty() {
            return Err(CliError::Usage("output_path must not be empty".into()));
        }
        Ok(())
    }
}

#[derive(Parser)]
#[command(
    name = "ptcoh",
    about = "Coherent states for the PT-symmetric Scarf I potential: CSV evaluation and a verification suite",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key=value config file (# comments allowed)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Real part of alpha (must be > 1/2)
    #[arg(long, value_name = "X")]
    alpha_re: Option<f64>,
    /// Imaginary part of alpha
    #[arg(long, value_name = "Y")]
    alpha_im: Option<f64>,
    /// Override every selected check's tolerance
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    /// Output file, or - for stdout
    #[arg(long, value_name = "FILE|-")]
    out: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    Gk,
    Minimal,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Which {
    All,
    Orthonormality,
    Completeness,
    Moments,
    Action,
    Temporal,
    Overlap,
    Pt,
}

#[derive(Subcommand)]
enum Command {
    /// Energies, excitations and log weights per level
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// Highest level to list (default: n_max)
        #[arg(long, value_name = "N")]
        n: Option<usize>,
    },
    /// Sample one eigenfunction on a uniform grid over (-pi/2, pi/2)
    Wavefunction {
        #[command(flatten)]
        common: CommonArgs,
        /// Level to sample
        #[arg(long, value_name = "N", default_value_t = 0)]
        n: usize,
        /// Number of sample points
        #[arg(long, value_name = "N", default_value_t = 201)]
        samples: usize,
    },
    /// Sample a coherent state on a uniform grid over (-pi/2, pi/2)
    State {
        #[command(flatten)]
        common: CommonArgs,
        /// Which coherent family to build
        #[arg(value_enum)]
        family: Family,
        /// Action label J (gk family)
        #[arg(long = "J", value_name = "X", default_value_t = 1.0)]
        j: f64,
        /// Angle label gamma (gk family)
        #[arg(long, value_name = "X", default_value_t = 0.0)]
        gamma: f64,
        /// Radial label r (minimal family)
        #[arg(long, value_name = "X", default_value_t = 1.0)]
        r: f64,
        /// Angle label theta (minimal family)
        #[arg(long, value_name = "X", default_value_t = 0.0)]
        theta: f64,
        /// Number of sample points
        #[arg(long, value_name = "N", default_value_t = 201)]
        samples: usize,
    },
    /// Run verification checks; exit 0 iff all selected checks pass
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Check group to run
        #[arg(value_enum, default_value_t = Which::All)]
        which: Which,
    },
}

/// Parse argv and execute. Returns the process exit code; clap itself
/// exits with code 2 on a malformed invocation.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ptcoh: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Spectrum { common, n } => {
            let (config, model) = setup(&common)?;
            let n_up_to = n.unwrap_or(model.n_max());
            if n_up_to > model.n_max() {
                return Err(CliError::Usage(format!(
                    "level {n_up_to} exceeds n_max {}",
                    model.n_max()
                )));
            }
            let mut out = open_output(&config.output_path)?;
            cmd_spectrum(&model, n_up_to, &mut out)?;
            finish(out, &config.output_path)?;
            Ok(0)
        }
        Command::Wavefunction { common, n, samples } => {
            let (config, model) = setup(&common)?;
            if n > model.n_max() {
                return Err(CliError::Usage(format!(
                    "level {n} exceeds n_max {}",
                    model.n_max()
                )));
            }
            check_samples(samples)?;
            let mut out = open_output(&config.output_path)?;
            cmd_wavefunction(&model, n, samples, &mut out)?;
            finish(out, &config.output_path)?;
            Ok(0)
        }
        Command::State {
            common,
            family,
            j,
            gamma,
            r,
            theta,
            samples,
        } => {
            let (config, model) = setup(&common)?;
            check_samples(samples)?;
            let mut out = open_output(&config.output_path)?;
            cmd_state(&model, &config, family, j, gamma, r, theta, samples, &mut out)?;
            finish(out, &config.output_path)?;
            Ok(0)
        }
        Command::Verify { common, which } => {
            let (config, model) = setup(&common)?;
            let mut out = open_output(&config.output_path)?;
            let all_passed = cmd_verify(&model, &config, which, &mut out)?;
            finish(out, &config.output_path)?;
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

fn setup(common: &CommonArgs) -> Result<(RunConfig, ScarfIModel), CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        config.apply_file(&text)?;
    }
    if let Some(v) = common.alpha_re {
        config.alpha_re = v;
    }
    if let Some(v) = common.alpha_im {
        config.alpha_im = v;
    }
    if let Some(v) = common.tol {
        config.tol = Some(v);
    }
    if let Some(v) = &common.out {
        config.output_path = v.clone();
    }
    config.validate()?;
    let model = ScarfIModel::new(
        Complex64::new(config.alpha_re, config.alpha_im),
        config.n_max,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((config, model))
}

fn check_samples(samples: usize) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Usage("samples must be at least 1".into()));
    }
    Ok(())
}

enum Output {
    Stdout(std::io::Stdout),
    File(std::io::BufWriter<std::fs::File>),
}

impl Write for Output {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        match self {
            Output::Stdout(s) => s.write(buf),
            Output::File(f) => f.write(buf),
        }
    }
    fn flush(&mut self) -> std::io::Result<()> {
        match self {
            Output::Stdout(s) => s.flush(),
            Output::File(f) => f.flush(),
        }
    }
}

fn open_output(path: &str) -> Result<Output, CliError> {
    if path == "-" {
        return Ok(Output::Stdout(std::io::stdout()));
    }
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Usage(format!("cannot write {path}: {e}")))?;
    Ok(Output::File(std::io::BufWriter::new(file)))
}

fn finish(mut out: Output, path: &str) -> Result<(), CliError> {
    out.flush()
        .map_err(|e| CliError::Usage(format!("cannot write {path}: {e}")))
}

/// 17 significant digits: round-trip safe for binary64.
fn float17(v: f64) -> String {
    format!("{v:.16e}")
}

/// RFC-4180 field quoting: wrap when the field contains a comma, quote or
/// newline, doubling embedded quotes.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_model_header(out: &mut dyn Write, model: &ScarfIModel) -> std::io::Result<()> {
    writeln!(out, "# alpha_re = {}", float17(model.alpha().re))?;
    writeln!(out, "# alpha_im = {}", float17(model.alpha().im))?;
    writeln!(out, "# nu = {}", float17(model.nu()))?;
    writeln!(out, "# n_max = {}", model.n_max())
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Usage(format!("output error: {e}"))
}

fn cmd_spectrum(model: &ScarfIModel, n_up_to: usize, out: &mut dyn Write) -> Result<(), CliError> {
    (|| -> std::io::Result<()> {
        writeln!(out, "# ptcoh spectrum")?;
        write_model_header(out, model)?;
        writeln!(out, "n,energy,excitation,ln_rho")?;
        for n in 0..=n_up_to {
            writeln!(
                out,
                "{n},{},{},{}",
                float17(model.energy(n)),
                float17(model.excitation(n)),
                float17(model.ln_rho(n))
            )?;
        }
        Ok(())
    })()
    .map_err(io_err)
}

fn sample_grid(count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![-FRAC_PI_2];
    }
    (0..count)
        .map(|k| -FRAC_PI_2 + std::f64::consts::PI * k as f64 / (count - 1) as f64)
        .collect()
}

fn cmd_wavefunction(
    model: &ScarfIModel,
    n: usize,
    samples: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    (|| -> std::io::Result<()> {
        writeln!(out, "# ptcoh wavefunction")?;
        write_model_header(out, model)?;
        writeln!(out, "# n = {n}")?;
        writeln!(out, "x,re,im")?;
        for x in sample_grid(samples) {
            let v = model.eigenfunction(n, x);
            writeln!(out, "{},{},{}", float17(x), float17(v.re), float17(v.im))?;
        }
        Ok(())
    })()
    .map_err(io_err)
}

#[allow(clippy::too_many_arguments)]
fn cmd_state(
    model: &ScarfIModel,
    config: &RunConfig,
    family: Family,
    j: f64,
    gamma: f64,
    r: f64,
    theta: f64,
    samples: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let usage = |e: crate::coherent::CoherentError| CliError::Usage(e.to_string());
    let (coeffs, label_line) = match family {
        Family::Gk => {
            let spec = GKStateSpec::new(j, gamma)
                .and_then(|s| s.with_tail_epsilon(config.tail_epsilon))
                .map_err(usage)?;
            (
                gk_coefficients(model, &spec),
                format!("# family = gk, J = {}, gamma = {}", float17(j), float17(gamma)),
            )
        }
        Family::Minimal => {
            let spec = MinimalStateSpec::new(r, theta)
                .and_then(|s| s.with_tail_epsilon(config.tail_epsilon))
                .map_err(usage)?;
            (
                minimal_coefficients(model, &spec),
                format!(
                    "# family = minimal, r = {}, theta = {}",
                    float17(r),
                    float17(theta)
                ),
            )
        }
    };
    (|| -> std::io::Result<()> {
        writeln!(out, "# ptcoh state")?;
        write_model_header(out, model)?;
        writeln!(out, "{label_line}")?;
        writeln!(out, "# truncation_order = {}", coeffs.truncation_order)?;
        writeln!(
            out,
            "# prob_density is pointwise |psi|^2, a plotting aid; it is NOT a CPT probability density"
        )?;
        writeln!(out, "x,re,im,prob_density")?;
        for x in sample_grid(samples) {
            let v = evaluate_state(model, &coeffs, x);
            writeln!(
                out,
                "{},{},{},{}",
                float17(x),
                float17(v.re),
                float17(v.im),
                float17(v.norm_sqr())
            )?;
        }
        Ok(())
    })()
    .map_err(io_err)
}

/// Check names selected by each `verify` group, in run (= sorted) order.
fn which_names(which: Which) -> Vec<&'static str> {
    match which {
        Which::All => CHECK_NAMES.to_vec(),
        Which::Orthonormality => vec!["orthonormality"],
        Which::Completeness => vec!["completeness"],
        Which::Moments => vec!["gk_moments", "minimal_moments"],
        Which::Action => vec!["action_identity"],
        Which::Temporal => vec!["temporal_instability_minimal", "temporal_stability"],
        Which::Overlap => vec!["overlap_consistency"],
        Which::Pt => vec!["pt_invariance", "pt_negative_control"],
    }
}

fn which_label(which: Which) -> &'static str {
    match which {
        Which::All => "all",
        Which::Orthonormality => "orthonormality",
        Which::Completeness => "completeness",
        Which::Moments => "moments",
        Which::Action => "action",
        Which::Temporal => "temporal",
        Which::Overlap => "overlap",
        Which::Pt => "pt",
    }
}

fn cmd_verify(
    model: &ScarfIModel,
    config: &RunConfig,
    which: Which,
    out: &mut dyn Write,
) -> Result<bool, CliError> {
    let mut all_passed = true;
    let mut rows = Vec::new();
    for name in which_names(which) {
        let report = run_check(model, name, config.tol)?;
        all_passed &= report.passed();
        let params = report
            .parameters()
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        rows.push(format!(
            "{},{},{},{},{}",
            csv_field(report.check_name()),
            csv_field(&params),
            float17(report.residual()),
            float17(report.tolerance()),
            report.passed()
        ));
        eprintln!(
            "{} {} (residual {:.3e}, tolerance {:.3e})",
            report.check_name(),
            if report.passed() { "passed" } else { "FAILED" },
            report.residual(),
            report.tolerance()
        );
    }
    (|| -> std::io::Result<()> {
        writeln!(out, "# ptcoh verify")?;
        write_model_header(out, model)?;
        writeln!(out, "# which = {}", which_label(which))?;
        match config.tol {
            Some(t) => writeln!(out, "# tol_override = {}", float17(t))?,
            None => writeln!(out, "# tol_override = none")?,
        }
        writeln!(out, "check_name,params,residual,tolerance,passed")?;
        for row in rows {
            writeln!(out, "{row}")?;
        }
        Ok(())
    })()
    .map_err(io_err)?;
    Ok(all_passed)
}
