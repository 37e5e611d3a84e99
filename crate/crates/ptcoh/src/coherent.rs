//! Coherent states over the Scarf I basis: the two-parameter family labeled
//! by an action J and an angle gamma, and the minimal family labeled by a
//! single complex number beta = r e^{i theta}.
//!
//! Both are normalized superpositions c_n psi_n with coefficients set by a
//! positive moment sequence rho_n: the action family uses the model's running
//! excitation product, the minimal family uses Gamma(2n+1). The series have
//! infinite convergence radius, so construction truncates where the squared
//! coefficient mass certifiably drops below a tail budget, and every sequence
//! carries that certified bound with it.
//!
//! Pairings here are always the CPT pairing expressed in coefficient space.
//! Expanding both states over the basis and using the charge signs twice
//! reduces it to the plain Hermitian sum conj(a_n) b_n, so the first argument
//! of an overlap is the conjugated side; swapping arguments conjugates the
//! result.

use num_complex::Complex64;
use thiserror::Error;

use crate::model::ScarfIModel;
use crate::specfun::{bessel_i, log_gamma_real, BesselOrder, SpecFunError};

pub const DEFAULT_TAIL_EPSILON: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CoherentError {
    #[error("invalid state label: {0}")]
    InvalidLabel(String),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// Action-angle label (J, gamma) with the truncation budget the constructed
/// sequence must respect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GKStateSpec {
    j: f64,
    gamma: f64,
    tail_epsilon: f64,
}

impl GKStateSpec {
    pub fn new(j: f64, gamma: f64) -> Result<Self, CoherentError> {
        if !j.is_finite() || j < 0.0 {
            return Err(CoherentError::InvalidLabel(format!(
                "action label J must be finite and >= 0, got {j}"
            )));
        }
        if !gamma.is_finite() {
            return Err(CoherentError::InvalidLabel(format!(
                "angle label gamma must be finite, got {gamma}"
            )));
        }
        Ok(Self {
            j,
            gamma,
            tail_epsilon: DEFAULT_TAIL_EPSILON,
        })
    }

    pub fn with_tail_epsilon(mut self, tail_epsilon: f64) -> Result<Self, CoherentError> {
        if !tail_epsilon.is_finite() || tail_epsilon <= 0.0 {
            return Err(CoherentError::InvalidLabel(format!(
                "tail_epsilon must be finite and > 0, got {tail_epsilon}"
            )));
        }
        self.tail_epsilon = tail_epsilon;
        Ok(self)
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn tail_epsilon(&self) -> f64 {
        self.tail_epsilon
    }
}

/// Polar label beta = r e^{i theta} for the minimal family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalStateSpec {
    r: f64,
    theta: f64,
    tail_epsilon: f64,
}

impl MinimalStateSpec {
    pub fn new(r: f64, theta: f64) -> Result<Self, CoherentError> {
        if !r.is_finite() || r < 0.0 {
            return Err(CoherentError::InvalidLabel(format!(
                "radial label r must be finite and >= 0, got {r}"
            )));
        }
        if !theta.is_finite() {
            return Err(CoherentError::InvalidLabel(format!(
                "angle label theta must be finite, got {theta}"
            )));
        }
        Ok(Self {
            r,
            theta,
            tail_epsilon: DEFAULT_TAIL_EPSILON,
        })
    }

    pub fn with_tail_epsilon(mut self, tail_epsilon: f64) -> Result<Self, CoherentError> {
        if !tail_epsilon.is_finite() || tail_epsilon <= 0.0 {
            return Err(CoherentError::InvalidLabel(format!(
                "tail_epsilon must be finite and > 0, got {tail_epsilon}"
            )));
        }
        self.tail_epsilon = tail_epsilon;
        Ok(self)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn tail_epsilon(&self) -> f64 {
        self.tail_epsilon
    }

    pub fn beta_label(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

/// Truncated expansion over the model basis. `tail_bound` certifies the
/// squared-norm mass the truncation dropped, so for any normalized state
/// sum |c_n|^2 + tail_bound stays within 10 tail budgets of 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    pub coefficients: Vec<Complex64>,
    pub truncation_order: usize,
    pub tail_bound: f64,
}

impl CoefficientSequence {
    /// Coefficient at index n, zero beyond the truncation.
    pub fn get(&self, n: usize) -> Complex64 {
        self.coefficients
            .get(n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn squared_norm_mass(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// CPT pairing in coefficient space: conj(self) dot other. The charge
    /// signs cancel against the indefinite basis metric, leaving the plain
    /// Hermitian sum.
    pub fn cpt_pair(&self, other: &Self) -> Complex64 {
        let n = self.len().max(other.len());
        (0..n).map(|k| self.get(k).conj() * other.get(k)).sum()
    }
}

/// Where to cut a positive series u_n and what the cut provably costs.
struct MassTruncation {
    order: usize,
    tail_mass: f64,
}

/// Walk u_n = exp(ln_term(n)) forward until the first neglected term is below
/// `tail_epsilon * 1e-2 * exp(ln_scale)` and the local term ratio has fallen
/// to 1/2 or less. Both series used here have nonincreasing term ratios
/// (ratio J/e_{n+1}, respectively r^2/((2n+1)(2n+2))), so the geometric bound
/// tail <= u_{N+1} / (1 - q) is certified once q <= 1/2 at the boundary.
/// A floor of eight retained orders keeps tiny labels from degenerating to a
/// single term; `n_cap` (the model's materialization limit) wins over
/// everything, with an honest, possibly infinite, tail bound.
fn truncate_mass_series(
    ln_term: impl Fn(usize) -> f64,
    ln_scale: f64,
    tail_epsilon: f64,
    n_cap: usize,
) -> MassTruncation {
    let ln_thresh = (tail_epsilon * 1e-2).ln() + ln_scale;
    let mut order = 8.min(n_cap);
    while order < n_cap {
        let ln_next = ln_term(order + 1);
        let ratio_ok = ln_term(order + 2) - ln_next <= -std::f64::consts::LN_2;
        if (ln_next < ln_thresh && ratio_ok) || ln_next == f64::NEG_INFINITY {
            break;
        }
        order += 1;
    }
    let ln_first_neglected = ln_term(order + 1);
    let tail_mass = if ln_first_neglected == f64::NEG_INFINITY {
        0.0
    } else {
        let q = (ln_term(order + 2) - ln_first_neglected).exp();
        if q < 1.0 {
            ln_first_neglected.exp() / (1.0 - q)
        } else {
            f64::INFINITY
        }
    };
    MassTruncation { order, tail_mass }
}

/// ln(J^n / rho_n), tolerating J = 0 (empty product at n = 0, -inf beyond).
fn ln_gk_term(model: &ScarfIModel, j: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if j == 0.0 {
        return f64::NEG_INFINITY;
    }
    n as f64 * j.ln() - model.ln_rho(n)
}

/// N(J) = sum J^n / rho_n by direct summation, remainder certified below
/// 1e-14 relative. Linear-space recurrence t_{n+1} = t_n J / e_{n+1} mirrors
/// the product definition of rho exactly.
pub fn gk_normalization_series(model: &ScarfIModel, j: f64) -> f64 {
    assert!(j.is_finite() && j >= 0.0, "action label must be >= 0");
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut n = 0usize;
    loop {
        n += 1;
        term *= j / model.excitation(n);
        sum += term;
        // once the ratio is below 1/2 the geometric remainder is < 2 * next term
        let next = term * j / model.excitation(n + 1);
        if 2.0 * model.excitation(n + 1) > j && 2.0 * next < 1e-14 * sum {
            break;
        }
    }
    sum
}

/// N(J) through the closed form J^{-nu/2} Gamma(nu+1) I_nu(2 sqrt(J)),
/// assembled in log space so neither factor under- or overflows on its own.
pub fn gk_normalization_closed(model: &ScarfIModel, j: f64) -> Result<f64, CoherentError> {
    if !j.is_finite() || j <= 0.0 {
        return Err(CoherentError::InvalidLabel(format!(
            "closed-form normalization needs J > 0, got {j}"
        )));
    }
    let nu = model.nu();
    let i_nu = bessel_i(BesselOrder::new(nu)?, 2.0 * j.sqrt())?;
    if i_nu == 0.0 {
        // 2 sqrt(J) underflowed the leading Bessel term, so J < ~1e-200 and
        // the true value 1 + J/(nu+1) + O(J^2) is 1 to full precision.
        return Ok(1.0);
    }
    let ln_value = -0.5 * nu * j.ln() + log_gamma_real(nu + 1.0)? + i_nu.ln();
    Ok(ln_value.exp())
}

/// Coefficients c_n = J^{n/2} e^{-i gamma e_n} / sqrt(rho_n N(J)).
pub fn gk_coefficients(model: &ScarfIModel, spec: &GKStateSpec) -> CoefficientSequence {
    let norm = gk_normalization_series(model, spec.j);
    let ln_norm = norm.ln();
    let cut = truncate_mass_series(
        |n| ln_gk_term(model, spec.j, n),
        ln_norm,
        spec.tail_epsilon,
        model.n_max(),
    );
    let coefficients = (0..=cut.order)
        .map(|n| {
            let magnitude = (0.5 * (ln_gk_term(model, spec.j, n) - ln_norm)).exp();
            Complex64::from_polar(magnitude, -spec.gamma * model.excitation(n))
        })
        .collect();
    CoefficientSequence {
        coefficients,
        truncation_order: cut.order,
        tail_bound: cut.tail_mass / norm,
    }
}

/// Time evolution never leaves the family: it only advances the angle label.
pub fn evolve(spec: &GKStateSpec, t: f64, omega: f64) -> GKStateSpec {
    GKStateSpec {
        j: spec.j,
        gamma: spec.gamma + omega * t,
        tail_epsilon: spec.tail_epsilon,
    }
}

/// <H> over the state, summed literally as omega sum e_n J^n/rho_n / N(J).
/// The closed identity this should reproduce (omega J) is deliberately not
/// used anywhere here, so comparing against it stays a real check.
pub fn energy_expectation(model: &ScarfIModel, spec: &GKStateSpec) -> f64 {
    let j = spec.j;
    let mut term = 1.0f64; // J^n / rho_n
    let mut weighted = 0.0f64; // e_0 term vanishes
    let mut n = 0usize;
    loop {
        n += 1;
        term *= j / model.excitation(n);
        weighted += term * model.excitation(n);
        let next = term * j / model.excitation(n + 1) * model.excitation(n + 1);
        if 2.0 * model.excitation(n + 1) > j && 2.0 * next < 1e-14 * weighted.max(1e-300) {
            break;
        }
    }
    model.omega() * weighted / gk_normalization_series(model, j)
}

/// CPT overlap of two action-angle states, conjugated side first:
/// sum conj(c_n(bra)) c_n(ket)
///   = Gamma(nu+1)/sqrt(N N') sum (J J')^{n/2} e^{-i e_n (gamma_ket - gamma_bra)} / (n! Gamma(n+nu+1)).
/// Summed from the coefficient definition rather than that closed series, so
/// the phase-sign convention is fixed by construction, not by transcription.
pub fn gk_overlap(model: &ScarfIModel, bra: &GKStateSpec, ket: &GKStateSpec) -> Complex64 {
    let a = gk_coefficients(model, bra);
    let b = gk_coefficients(model, ket);
    a.cpt_pair(&b)
}

/// ln(r^{2n} / rho_n) for the minimal family, same conventions as the action
/// family walker.
fn ln_minimal_term(ln_rho: &impl Fn(usize) -> f64, r: f64, n: usize) -> f64 {
    if n == 0 {
        return -ln_rho(0);
    }
    if r == 0.0 {
        return f64::NEG_INFINITY;
    }
    2.0 * n as f64 * r.ln() - ln_rho(n)
}

/// ln cosh r without overflow for large r.
fn ln_cosh(r: f64) -> f64 {
    r.abs() - std::f64::consts::LN_2 + (-2.0 * r.abs()).exp().ln_1p()
}

/// ln Gamma(2n+1), pinned to exactly 0 at n = 0 so the ground coefficient of
/// a zero label comes out as exactly 1.
fn ln_gamma_2n1(n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    log_gamma_real(2.0 * n as f64 + 1.0).expect("argument is positive by construction")
}

/// Minimal-family coefficients with the shipped moment sequence Gamma(2n+1),
/// for which the normalization is exactly cosh r.
pub fn minimal_coefficients(model: &ScarfIModel, spec: &MinimalStateSpec) -> CoefficientSequence {
    minimal_with_ln_norm(model, spec, &ln_gamma_2n1, ln_cosh(spec.r))
}

/// Same construction over a caller-supplied positive moment sequence,
/// normalized by summing its own series. The tail certificate assumes the
/// term ratio is nonincreasing beyond the cut, which any log-convex rho
/// satisfies; the shipped default does.
pub fn minimal_coefficients_with_rho(
    model: &ScarfIModel,
    spec: &MinimalStateSpec,
    ln_rho: impl Fn(usize) -> f64,
) -> CoefficientSequence {
    // self-normalize: partial mass plus its certified remainder
    let probe = truncate_mass_series(
        |n| ln_minimal_term(&ln_rho, spec.r, n),
        ln_minimal_term(&ln_rho, spec.r, 0),
        spec.tail_epsilon * 1e-2,
        model.n_max(),
    );
    let partial: f64 = (0..=probe.order)
        .map(|n| ln_minimal_term(&ln_rho, spec.r, n).exp())
        .sum();
    let ln_norm = (partial + probe.tail_mass).ln();
    minimal_with_ln_norm(model, spec, &ln_rho, ln_norm)
}

fn minimal_with_ln_norm(
    model: &ScarfIModel,
    spec: &MinimalStateSpec,
    ln_rho: &impl Fn(usize) -> f64,
    ln_norm: f64,
) -> CoefficientSequence {
    let cut = truncate_mass_series(
        |n| ln_minimal_term(ln_rho, spec.r, n),
        ln_norm,
        spec.tail_epsilon,
        model.n_max(),
    );
    let coefficients = (0..=cut.order)
        .map(|n| {
            let magnitude = (0.5 * (ln_minimal_term(ln_rho, spec.r, n) - ln_norm)).exp();
            Complex64::from_polar(magnitude, spec.theta * n as f64)
        })
        .collect();
    CoefficientSequence {
        coefficients,
        truncation_order: cut.order,
        tail_bound: cut.tail_mass / ln_norm.exp(),
    }
}

/// CPT overlap of two minimal states in closed form, conjugated side first:
/// cosh(sqrt(conj(beta_bra) beta_ket)) / sqrt(cosh r_bra cosh r_ket).
/// cosh is even, so the square-root branch is irrelevant.
pub fn minimal_overlap(
    _model: &ScarfIModel,
    bra: &MinimalStateSpec,
    ket: &MinimalStateSpec,
) -> Complex64 {
    let w = bra.beta_label().conj() * ket.beta_label();
    let ln_denom = 0.5 * (ln_cosh(bra.r) + ln_cosh(ket.r));
    w.sqrt().cosh() * (-ln_denom).exp()
}

/// Pointwise value sum c_n psi_n(x). Inherits the basis convention that
/// everything at and beyond the well edges is exactly 0.
pub fn evaluate_state(model: &ScarfIModel, coeffs: &CoefficientSequence, x: f64) -> Complex64 {
    coeffs
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, c)| c * model.eigenfunction(n, x))
        .sum()
}
