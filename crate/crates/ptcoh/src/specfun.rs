//! Special functions needed by the model: complex log-gamma, Jacobi
//! polynomials with complex parameters, and the modified Bessel functions
//! I and K of real positive order.
//!
//! Everything here is a fixed, deterministic algorithm. Log-gamma is a
//! Lanczos approximation restricted to the right half plane, which is the
//! only region the model touches (arguments of the form n + alpha + 1 with
//! Re(alpha) > 1/2). The Jacobi polynomials use the standard three-term
//! recurrence, which continues analytically to complex parameters and is
//! forward-stable for the small degrees (<= ~60) the state constructions
//! need. I_nu is its ascending power series, whose terms are all positive,
//! so the only error is accumulation of rounding over a few hundred terms.
//! K_nu deliberately avoids the (I_{-nu} - I_nu)/sin(pi nu) route, which
//! cancels catastrophically near integer order; instead it integrates the
//! representation K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt with the
//! double-exponential engine from [`crate::quadrature`].

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::quadrature::{integrate_halfline, QuadratureError};

#[derive(Debug, Error)]
pub enum SpecFunError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("result exceeds the floating-point range")]
    Overflow,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Lanczos coefficients for g = 7, 9 terms: Godfrey's double-precision fit,
/// the same table used by Boost.Math and SciPy. Relative error stays below
/// ~1e-13 throughout Re(z) > 0.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)] // published table kept verbatim
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal branch of ln Gamma(z) for Re(z) > 0.
///
/// exp of the result reproduces Gamma(z) to at least 12 significant digits;
/// the imaginary part is continuous on the right half plane, so the
/// recurrence ln Gamma(z+1) = ln Gamma(z) + ln z holds without branch jumps
/// there.
pub fn log_gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    if !z.is_finite() || !(z.re > 0.0) {
        return Err(SpecFunError::Domain(format!(
            "log_gamma requires a finite argument with Re(z) > 0, got {z}"
        )));
    }
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += Complex64::new(c, 0.0) / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    Ok(Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (zm1 + 0.5) * t.ln() - t + acc.ln())
}

/// ln Gamma(x) for real x > 0.
pub fn log_gamma_real(x: f64) -> Result<f64, SpecFunError> {
    log_gamma(Complex64::new(x, 0.0)).map(|v| v.re)
}

/// Jacobi polynomial P_n^{(alpha,beta)}(s) by forward three-term recurrence,
/// analytically continued to complex parameters.
///
/// The recurrence divides by 2n(n+alpha+beta)(2n+alpha+beta-2); callers must
/// keep alpha+beta away from the negative integers that zero those factors.
/// For this crate alpha+beta = 2 Re(alpha) > 1 always, so every denominator
/// is bounded away from zero. Forward recurrence is stable for the dominant
/// solution, which P_n is for degrees up to ~60 on s in [-1, 1].
pub fn jacobi_poly(n: usize, alpha: Complex64, beta: Complex64, s: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if n == 0 {
        return one;
    }
    let ab = alpha + beta;
    let p1 = alpha + 1.0 + (ab + 2.0) * (0.5 * (s - 1.0));
    if n == 1 {
        return p1;
    }
    let mut pm2 = one;
    let mut pm1 = p1;
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + ab; // 2k + alpha + beta
        let denom = (c - 2.0) * (ab + kf) * (2.0 * kf);
        let main = (c - 1.0) * ((c - 2.0) * c * s + alpha * alpha - beta * beta);
        let down = (alpha + (kf - 1.0)) * (beta + (kf - 1.0)) * c * 2.0;
        let p = (main * pm1 - down * pm2) / denom;
        pm2 = pm1;
        pm1 = p;
    }
    pm1
}

/// Positive real order for the modified Bessel functions, validated once at
/// construction so the evaluation routines never see nu <= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self, SpecFunError> {
        if nu > 0.0 && nu.is_finite() {
            Ok(Self(nu))
        } else {
            Err(SpecFunError::Domain(format!(
                "Bessel order must be a positive finite real, got {nu}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Modified Bessel function of the first kind, I_nu(x), for x >= 0.
///
/// Ascending series with the term ratio taken incrementally, so no
/// intermediate power or factorial ever overflows before the sum itself
/// would. All terms are positive: the result carries only rounding
/// accumulation, below 1e-12 relative for x <= 200, nu <= 50. Overflow of
/// the sum (x beyond ~700) is reported as an error.
pub fn bessel_i(nu: BesselOrder, x: f64) -> Result<f64, SpecFunError> {
    let nu = nu.value();
    if !x.is_finite() || x < 0.0 {
        return Err(SpecFunError::Domain(format!(
            "bessel_i requires finite x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0); // nu > 0 strictly
    }
    let z2 = 0.25 * x * x;
    let ln_t0 = nu * (0.5 * x).ln() - log_gamma_real(nu + 1.0)?;
    let mut term = ln_t0.exp();
    let mut sum = term;
    let mut k = 0.0f64;
    loop {
        k += 1.0;
        term *= z2 / (k * (k + nu));
        sum += term;
        if term <= sum * 1e-17 || k > 20_000.0 {
            break;
        }
    }
    if !sum.is_finite() {
        return Err(SpecFunError::Overflow);
    }
    Ok(sum)
}

/// Modified Bessel function of the second kind, K_nu(x), for x > 0.
///
/// Computed as e^{-x} int_0^inf exp(-2x sinh^2(t/2) + ln cosh(nu t)) dt with
/// the double-exponential half-line rule run to its machine-precision floor.
/// The exponent is assembled in log space (2 sinh^2(t/2) = cosh t - 1
/// without cancellation, ln cosh(nu t) = nu t - ln 2 + ln1p(e^{-2 nu t})),
/// so the integrand underflows gracefully instead of producing 0 * inf in
/// the tail. A non-finite integrand value then only ever means the scaled
/// result itself overflows.
pub fn bessel_k(nu: BesselOrder, x: f64) -> Result<f64, SpecFunError> {
    let nu = nu.value();
    if !x.is_finite() || x <= 0.0 {
        return Err(SpecFunError::Domain(format!(
            "bessel_k requires finite x > 0, got {x}"
        )));
    }
    if x >= 746.0 {
        // e^{-x} is zero even as a subnormal; the true value lies below the
        // floating-point range entirely.
        return Ok(0.0);
    }
    if x < 2.0 {
        // Leading small-x behavior K_nu ~ (Gamma(nu)/2)(2/x)^nu; refuse the
        // call when that already overflows instead of integrating garbage.
        let ln_lead = log_gamma_real(nu)? - std::f64::consts::LN_2 + nu * (2.0 / x).ln();
        if ln_lead > 705.0 {
            return Err(SpecFunError::Overflow);
        }
    }
    let ln2 = std::f64::consts::LN_2;
    let integrand = move |t: f64| {
        let sh = (0.5 * t).sinh();
        let ln_term = -2.0 * x * sh * sh + nu * t - ln2 + (-2.0 * nu * t).exp().ln_1p();
        Complex64::new(ln_term.exp(), 0.0)
    };
    // Tolerance below anything representable: the level loop runs until the
    // machine-precision floor, i.e. full relative accuracy.
    let scaled = integrate_halfline(integrand, 1.0, f64::MIN_POSITIVE).map_err(|e| match e {
        QuadratureError::NonFiniteIntegrand { .. } => SpecFunError::Overflow,
        other => SpecFunError::Quadrature(other),
    })?;
    let value = (-x).exp() * scaled.value.re;
    if !value.is_finite() {
        return Err(SpecFunError::Overflow);
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Independent log-gamma oracle: shift the argument up by 30 with the
    // recurrence, then Stirling's series with eight Bernoulli terms. At
    // |z| >= 30 the first dropped term is below 1e-24.
    fn log_gamma_oracle(z: Complex64) -> Complex64 {
        const SHIFT: usize = 30;
        const B2J: [f64; 8] = [
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
            7.0 / 6.0,
            -3617.0 / 510.0,
        ];
        let mut correction = Complex64::new(0.0, 0.0);
        for k in 0..SHIFT {
            correction += (z + k as f64).ln();
        }
        let w = z + SHIFT as f64;
        let mut stirling = (w - 0.5) * w.ln() - w + Complex64::new(0.5 * (2.0 * PI).ln(), 0.0);
        let winv2 = Complex64::new(1.0, 0.0) / (w * w);
        let mut wpow = Complex64::new(1.0, 0.0) / w;
        for (j, &b) in B2J.iter().enumerate() {
            let tj = 2.0 * (j as f64 + 1.0);
            stirling += wpow * (b / (tj * (tj - 1.0)));
            wpow *= winv2;
        }
        stirling - correction
    }

    #[test]
    fn log_gamma_trivial_points() {
        assert!(log_gamma(Complex64::new(1.0, 0.0)).unwrap().norm() < 1e-13);
        let lg5 = log_gamma(Complex64::new(5.0, 0.0)).unwrap();
        assert_relative_eq!(lg5.re, 24f64.ln(), max_relative = 1e-13);
        assert!(lg5.im.abs() < 1e-13);
    }

    #[test]
    fn log_gamma_matches_stirling_oracle_at_complex_points() {
        for &(re, im) in &[(2.0, 1.0), (0.7, -1.3), (1.5, 0.5), (3.25, 2.0), (12.0, -7.0)] {
            let z = Complex64::new(re, im);
            let got = log_gamma(z).unwrap();
            let want = log_gamma_oracle(z);
            assert!(
                (got - want).norm() < 1e-12,
                "log_gamma({z}) = {got}, oracle {want}"
            );
        }
    }

    #[test]
    fn log_gamma_recurrence_on_a_grid() {
        for &re in &[0.25, 0.8, 1.5, 3.3, 10.0] {
            for &im in &[-2.0, -0.5, 0.0, 1.0, 2.4] {
                let z = Complex64::new(re, im);
                let lhs = log_gamma(z + 1.0).unwrap();
                let rhs = log_gamma(z).unwrap() + z.ln();
                assert!(
                    (lhs - rhs).norm() < 1e-12,
                    "recurrence residual {:.3e} at {z}",
                    (lhs - rhs).norm()
                );
            }
        }
    }

    #[test]
    fn log_gamma_rejects_left_half_plane() {
        assert!(log_gamma(Complex64::new(0.0, 0.0)).is_err());
        assert!(log_gamma(Complex64::new(-1.0, 2.0)).is_err());
    }

    #[test]
    fn log_gamma_conjugate_symmetry() {
        let z = Complex64::new(1.7, 2.3);
        let a = log_gamma(z.conj()).unwrap();
        let b = log_gamma(z).unwrap().conj();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn jacobi_degree_zero_and_one() {
        let a = Complex64::new(1.0, 0.5);
        let b = Complex64::new(1.0, -0.5);
        assert_eq!(jacobi_poly(0, a, b, 0.3), Complex64::new(1.0, 0.0));
        for &s in &[-1.0, -0.4, 0.0, 0.7, 1.0] {
            let got = jacobi_poly(1, a, b, s);
            let want = a + 1.0 + (a + b + 2.0) * (0.5 * (s - 1.0));
            assert!((got - want).norm() < 1e-14);
        }
    }

    #[test]
    fn jacobi_legendre_special_case() {
        // alpha = beta = 0 reduces to Legendre: P_2 = (3s^2-1)/2, P_3 = (5s^3-3s)/2.
        let z = Complex64::new(0.0, 0.0);
        for &s in &[-0.9, -0.2, 0.5, 1.0] {
            let p2 = jacobi_poly(2, z, z, s);
            let p3 = jacobi_poly(3, z, z, s);
            assert_relative_eq!(p2.re, 0.5 * (3.0 * s * s - 1.0), epsilon = 1e-13);
            assert_relative_eq!(p3.re, 0.5 * (5.0 * s * s * s - 3.0 * s), epsilon = 1e-13);
            assert!(p2.im == 0.0 && p3.im == 0.0);
        }
    }

    #[test]
    fn jacobi_reflection_symmetry_degree_three() {
        // P_n^{(a,b)}(-s) = (-1)^n P_n^{(b,a)}(s).
        let a = Complex64::new(1.0, 0.5);
        let b = Complex64::new(1.0, -0.5);
        for &s in &[-0.8, -0.13, 0.4, 0.95] {
            let lhs = jacobi_poly(3, a, b, -s);
            let rhs = -jacobi_poly(3, b, a, s);
            assert!((lhs - rhs).norm() < 1e-12, "reflection residual at s={s}");
        }
    }

    proptest! {
        #[test]
        fn jacobi_conjugating_parameters_conjugates_values(
            n in 0usize..12,
            s in -1.0f64..1.0,
            are in 0.6f64..3.0,
            aim in -2.0f64..2.0,
            bre in 0.6f64..3.0,
            bim in -2.0f64..2.0,
        ) {
            let a = Complex64::new(are, aim);
            let b = Complex64::new(bre, bim);
            let lhs = jacobi_poly(n, a, b, s).conj();
            let rhs = jacobi_poly(n, a.conj(), b.conj(), s);
            let scale = lhs.norm().max(1.0);
            prop_assert!((lhs - rhs).norm() <= 1e-11 * scale);
        }
    }

    // Ten-term ascending series written out independently of bessel_i's
    // incremental loop: I_nu(x) = sum (x/2)^{2k+nu} / (k! Gamma(k+nu+1)).
    fn bessel_i_series_oracle(nu: f64, x: f64) -> f64 {
        (0..10)
            .map(|k| {
                let kf = k as f64;
                let ln_term = (2.0 * kf + nu) * (0.5 * x).ln()
                    - log_gamma_real(kf + 1.0).unwrap()
                    - log_gamma_real(kf + nu + 1.0).unwrap();
                ln_term.exp()
            })
            .sum()
    }

    #[test]
    fn bessel_i_at_zero_and_small_argument() {
        let nu3 = BesselOrder::new(3.0).unwrap();
        assert_eq!(bessel_i(nu3, 0.0).unwrap(), 0.0);
        let got = bessel_i(nu3, 2.0).unwrap();
        assert_relative_eq!(got, bessel_i_series_oracle(3.0, 2.0), max_relative = 1e-13);
        assert!((got - 0.212_739_9).abs() < 1e-7);
    }

    #[test]
    fn bessel_i_half_integer_closed_forms() {
        // I_{1/2}(x) = sqrt(2/(pi x)) sinh x, I_{3/2} = sqrt(2/(pi x)) (cosh x - sinh x / x).
        let h = BesselOrder::new(0.5).unwrap();
        let th = BesselOrder::new(1.5).unwrap();
        for &x in &[0.3, 1.0, 5.0, 20.0, 100.0, 150.0] {
            let pref = (2.0 / (PI * x)).sqrt();
            assert_relative_eq!(bessel_i(h, x).unwrap(), pref * x.sinh(), max_relative = 1e-12);
            assert_relative_eq!(
                bessel_i(th, x).unwrap(),
                pref * (x.cosh() - x.sinh() / x),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn bessel_i_monotone_in_x() {
        let nu = BesselOrder::new(2.7).unwrap();
        let mut prev = 0.0;
        for k in 1..=40 {
            let v = bessel_i(nu, 5.0 * k as f64).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn bessel_i_signals_overflow() {
        let nu = BesselOrder::new(1.0).unwrap();
        assert!(matches!(bessel_i(nu, 800.0), Err(SpecFunError::Overflow)));
        assert!(bessel_i(nu, -1.0).is_err());
    }

    #[test]
    fn bessel_k_half_integer_closed_forms() {
        // K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}, K_{3/2}(x) = sqrt(pi/(2x)) e^{-x} (1 + 1/x).
        let h = BesselOrder::new(0.5).unwrap();
        let th = BesselOrder::new(1.5).unwrap();
        for &x in &[0.5, 1.0, 2.0, 10.0, 30.0] {
            let pref = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert_relative_eq!(bessel_k(h, x).unwrap(), pref, max_relative = 1e-12);
            assert_relative_eq!(bessel_k(th, x).unwrap(), pref * (1.0 + 1.0 / x), max_relative = 1e-12);
        }
        let v = bessel_k(h, 1.0).unwrap();
        assert_relative_eq!(v, (PI / 2.0).sqrt() * (-1.0f64).exp(), max_relative = 1e-13);
    }

    // Integer-order series oracle (ascending form around x = 0, with the
    // logarithmic term): for n >= 1,
    //   K_n(z) = (1/2)(z/2)^{-n} sum_{k=0}^{n-1} ((n-k-1)!/k!) (-z^2/4)^k
    //          + (-1)^{n+1} ln(z/2) I_n(z)
    //          + (-1)^n (1/2)(z/2)^n sum_k (psi(k+1)+psi(n+k+1)) (z^2/4)^k / (k!(n+k)!)
    // with psi at positive integers from harmonic numbers.
    fn bessel_k_integer_series_oracle(n: usize, z: f64) -> f64 {
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        let psi = |m: usize| -> f64 { (1..m).map(|j| 1.0 / j as f64).sum::<f64>() - EULER_GAMMA };
        let factorial = |m: usize| -> f64 { (1..=m).map(|j| j as f64).product() };
        let q = 0.25 * z * z;

        let mut finite = 0.0;
        for k in 0..n {
            finite += factorial(n - k - 1) / factorial(k) * (-q).powi(k as i32);
        }
        finite *= 0.5 * (0.5 * z).powi(-(n as i32));

        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let log_term =
            -sign * (0.5 * z).ln() * bessel_i(BesselOrder::new(n as f64).unwrap(), z).unwrap();

        let mut series = 0.0;
        let mut qpow = 1.0;
        for k in 0..25 {
            series += (psi(k + 1) + psi(n + k + 1)) * qpow / (factorial(k) * factorial(n + k));
            qpow *= q;
        }
        let tail = sign * 0.5 * (0.5 * z).powi(n as i32) * series;

        finite + log_term + tail
    }

    #[test]
    fn bessel_k_matches_integer_series_oracle() {
        let nu3 = BesselOrder::new(3.0).unwrap();
        let got = bessel_k(nu3, 4.0).unwrap();
        let want = bessel_k_integer_series_oracle(3, 4.0);
        assert_relative_eq!(got, want, max_relative = 1e-11);
        let nu2 = BesselOrder::new(2.0).unwrap();
        assert_relative_eq!(
            bessel_k(nu2, 1.5).unwrap(),
            bessel_k_integer_series_oracle(2, 1.5),
            max_relative = 1e-11
        );
    }

    #[test]
    fn bessel_k_against_two_term_asymptotic() {
        // sqrt(pi/(2x)) e^{-x} (1 + (4 nu^2 - 1)/(8x)). The dropped term is
        // (4nu^2-1)(4nu^2-9)/(2(8x)^2) * prefactor: ~8e-7 absolute at x = 10
        // for nu = 2.7, far below 1e-8 only once x reaches ~50.
        let nu = BesselOrder::new(2.7).unwrap();
        let two_term = |x: f64| {
            (PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 + (4.0 * 2.7 * 2.7 - 1.0) / (8.0 * x))
        };
        assert!((bessel_k(nu, 10.0).unwrap() - two_term(10.0)).abs() < 1e-6);
        assert!((bessel_k(nu, 50.0).unwrap() - two_term(50.0)).abs() < 1e-8);
    }

    #[test]
    fn bessel_k_domain_and_positivity() {
        let nu = BesselOrder::new(2.7).unwrap();
        assert!(bessel_k(nu, 0.0).is_err());
        assert!(bessel_k(nu, -3.0).is_err());
        for &x in &[1e-3, 0.1, 1.0, 10.0, 120.0, 200.0] {
            assert!(bessel_k(nu, x).unwrap() > 0.0);
        }
    }

    #[test]
    fn bessel_wronskian_identity() {
        // I_nu(x) K_{nu+1}(x) + I_{nu+1}(x) K_nu(x) = 1/x.
        for &nu in &[0.5, 2.7, 3.0, 5.0] {
            let lo = BesselOrder::new(nu).unwrap();
            let hi = BesselOrder::new(nu + 1.0).unwrap();
            for &x in &[0.1, 1.0, 7.3, 25.0, 50.0] {
                let w = bessel_i(lo, x).unwrap() * bessel_k(hi, x).unwrap()
                    + bessel_i(hi, x).unwrap() * bessel_k(lo, x).unwrap();
                assert!(
                    (w - 1.0 / x).abs() < 1e-10,
                    "Wronskian residual {:.3e} at nu={nu}, x={x}",
                    (w - 1.0 / x).abs()
                );
            }
        }
    }

    #[test]
    fn bessel_order_validation() {
        assert!(BesselOrder::new(0.0).is_err());
        assert!(BesselOrder::new(-1.0).is_err());
        assert!(BesselOrder::new(f64::NAN).is_err());
        assert_eq!(BesselOrder::new(2.7).unwrap().value(), 2.7);
    }
}
