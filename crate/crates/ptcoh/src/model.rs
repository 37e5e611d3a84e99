//! The PT-symmetric Scarf I model: a trigonometric well on (-pi/2, pi/2)
//! whose depth parameters form a complex-conjugate pair (beta = conj(alpha)),
//! so the potential is complex but invariant under combined parity and time
//! reversal. The spectrum e_n = n(n + nu), nu = 2 Re(alpha) + 1, is real and
//! the eigenfunctions are Jacobi polynomials times a boundary envelope.
//!
//! The one genuine design choice lives in [`ScarfIModel::norm_constant`]:
//! reflection of the eigenfunction forces conj(N_n) = (-1)^n N_n, and the
//! magnitude comes from continuing the classical Jacobi orthogonality norm
//! h_n to conjugate parameter pairs, where it stays real and positive. With
//! N_n = i^n / sqrt(h_n) both PT-invariance of each eigenfunction and the
//! indefinite orthonormality int psi_m psi_n dx = (-1)^n delta_mn hold; the
//! quadrature tests below certify that numerically rather than trusting the
//! continuation argument.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, LN_2};
use thiserror::Error;

use crate::specfun::{jacobi_poly, log_gamma, log_gamma_real};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("alpha must be finite with Re(alpha) > 1/2, got {alpha}")]
    InvalidAlpha { alpha: Complex64 },
    #[error("position {x} lies outside the open interval (-pi/2, pi/2)")]
    OutOfDomain { x: f64 },
    #[error("rho({n}) exceeds the floating-point range; ln rho = {ln_rho}")]
    RhoOverflow { n: usize, ln_rho: f64 },
}

/// Everything attached to a single level: real energy, charge sign, and the
/// complex normalization that makes the PT machinery work.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenstate {
    pub n: usize,
    pub energy: f64,
    pub excitation: f64,
    pub norm_constant: Complex64,
    pub cpt_sign: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScarfIModel {
    alpha: Complex64,
    beta: Complex64,
    nu: f64,
    omega: f64,
    n_max: usize,
}

/// base^w for real base and complex exponent, on the principal branch.
/// Nonpositive base maps to 0: every call site has Re(w) > 0, and the only
/// nonpositive bases that occur are the boundary factors 1 -+ sin x at the
/// well edges, where the limit is 0.
fn pow_real(base: f64, w: Complex64) -> Complex64 {
    if base <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let ln_b = base.ln();
    let mag = (w.re * ln_b).exp();
    if mag == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(mag, w.im * ln_b)
}

/// i^n on the unit cycle, kept exact instead of going through powc.
fn unit_phase(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl ScarfIModel {
    /// `n_max` is the largest level the state constructions will materialize,
    /// not a mathematical cutoff; spectral quantities stay valid for any n.
    pub fn new(alpha: Complex64, n_max: usize) -> Result<Self, ModelError> {
        if !alpha.is_finite() || !(alpha.re > 0.5) {
            return Err(ModelError::InvalidAlpha { alpha });
        }
        Ok(Self {
            alpha,
            beta: alpha.conj(),
            nu: 2.0 * alpha.re + 1.0,
            omega: 1.0,
            n_max,
        })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn alpha_r(&self) -> f64 {
        self.alpha.re
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// V(x), complex away from the real axis of parameters but PT-symmetric:
    /// conj(V(-x)) = V(x). Diverges like 1/cos^2 at the edges, hence the open
    /// domain.
    pub fn potential(&self, x: f64) -> Result<Complex64, ModelError> {
        if !(x.abs() < FRAC_PI_2) {
            return Err(ModelError::OutOfDomain { x });
        }
        let (a, b) = (self.alpha, self.beta);
        let cos2 = x.cos() * x.cos();
        let s = x.sin();
        let centrifugal = (2.0 * (a * a + b * b) - 1.0) / (4.0 * cos2);
        let tilt = (a * a - b * b) * s / (2.0 * cos2);
        let shift = (a + b + 1.0) * (a + b + 1.0) / 4.0;
        Ok(centrifugal + tilt - shift)
    }

    /// e_n = n(n + nu). Dimensionless; energies are omega times this.
    pub fn excitation(&self, n: usize) -> f64 {
        let nf = n as f64;
        nf * (nf + self.nu)
    }

    pub fn energy(&self, n: usize) -> f64 {
        self.omega * self.excitation(n)
    }

    /// ln rho_n for rho_n = Gamma(n+1) Gamma(n+nu+1) / Gamma(nu+1), the
    /// running product e_1 e_2 ... e_n. Log space throughout: rho_n grows
    /// like (n!)^2 and leaves the f64 range near n = 100.
    pub fn ln_rho(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0; // empty product, exactly 1
        }
        let nf = n as f64;
        let lg = |x: f64| log_gamma_real(x).expect("argument is positive by construction");
        lg(nf + 1.0) + lg(nf + self.nu + 1.0) - lg(self.nu + 1.0)
    }

    /// rho_n in linear scale. Overflow is an error that still carries the
    /// log-space value, so callers can fall back without recomputing.
    pub fn rho(&self, n: usize) -> Result<f64, ModelError> {
        let ln_rho = self.ln_rho(n);
        if ln_rho >= f64::MAX.ln() {
            return Err(ModelError::RhoOverflow { n, ln_rho });
        }
        Ok(ln_rho.exp())
    }

    /// ln h_n for the analytically continued Jacobi norm
    /// h_n = 2^nu |Gamma(n+1+alpha)|^2 / ((2n+nu) Gamma(n+nu) n!),
    /// real and positive because the parameter pair is conjugate.
    fn ln_h(&self, n: usize) -> f64 {
        let nf = n as f64;
        let lg_complex = log_gamma(self.alpha + (nf + 1.0))
            .expect("Re(n + 1 + alpha) > 3/2 by construction");
        let lg = |x: f64| log_gamma_real(x).expect("argument is positive by construction");
        self.nu * LN_2 + 2.0 * lg_complex.re
            - (2.0 * nf + self.nu).ln()
            - lg(nf + self.nu)
            - lg(nf + 1.0)
    }

    /// N_n = i^n / sqrt(h_n). Real for even n, purely imaginary for odd n,
    /// which is exactly the pattern conj(N_n) = (-1)^n N_n that reflection
    /// of the eigenfunction demands.
    pub fn norm_constant(&self, n: usize) -> Complex64 {
        unit_phase(n) * (-0.5 * self.ln_h(n)).exp()
    }

    /// (-1)^n, the charge-operator eigenvalue on level n. Composed with
    /// PT-invariance this is the whole CPT action on basis states.
    pub fn cpt_sign(&self, n: usize) -> f64 {
        if n.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn eigenstate(&self, n: usize) -> Eigenstate {
        Eigenstate {
            n,
            energy: self.energy(n),
            excitation: self.excitation(n),
            norm_constant: self.norm_constant(n),
            cpt_sign: self.cpt_sign(n),
        }
    }

    /// psi_n(x) = N_n (1-sin x)^{alpha/2+1/4} (1+sin x)^{beta/2+1/4}
    /// P_n^{(alpha,beta)}(sin x), extended by 0 at and beyond the well edges
    /// (the boundary envelope vanishes there, exponent real part > 1/2).
    /// Total in x, so quadrature nodes rounding onto an endpoint are safe.
    pub fn eigenfunction(&self, n: usize, x: f64) -> Complex64 {
        if !(x.abs() < FRAC_PI_2) {
            return Complex64::new(0.0, 0.0);
        }
        let s = x.sin();
        let left = pow_real(1.0 - s, 0.5 * self.alpha + 0.25);
        let right = pow_real(1.0 + s, 0.5 * self.beta + 0.25);
        self.norm_constant(n) * left * right * jacobi_poly(n, self.alpha, self.beta, s)
    }
}
