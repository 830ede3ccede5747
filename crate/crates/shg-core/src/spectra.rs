//! Closed-form squeezing and antisqueezing spectra of the harmonic output,
//! the squeezed-quadrature phase, and the classical output power.
//!
//! With c = 1 + 2m and B = eta_in + m, the phase-optimized output spectra of
//! the harmonic mode are a pair of Lorentzian corrections to the vacuum
//! level,
//!
//! ```text
//! S-(w~) = 1 - 8 m B / (w~^2 + (c + B)^2)
//! S+(w~) = 1 + 8 m B / (w~^2 + (c - B)^2)
//! ```
//!
//! This split form is the computational primary: it is free of the
//! numerator cancellation that the equivalent single-fraction form
//!
//! ```text
//! S-+(w~) = 1 + 8 m B [2 B c -+ (w~^2 + B^2 + c^2)]
//!               / ([w~^2 + (c - B)^2] [w~^2 + (c + B)^2])
//! ```
//!
//! suffers at large w~. The single-fraction form is retained as a test
//! oracle; the two agree to machine precision over the stable region.
//!
//! Evaluation refuses unstable and marginal points (eta_in >= 1 + m):
//! S+(0) diverges there and the linearization is meaningless.

use crate::error::{Error, Result};
use crate::model::{normalize_angle, DriveConfig, OperatingPoint};

/// One frequency sample of the harmonic output noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSample {
    /// Scaled frequency omega/gamma.
    pub omega_tilde: f64,
    /// Phase-minimized (squeezing) spectrum, vacuum = 1.
    pub s_minus: f64,
    /// Phase-maximized (antisqueezing) spectrum.
    pub s_plus: f64,
    /// Squeezed-quadrature phase (rad), for the canonical drive phase
    /// phi = 0; rotate by the physical drive phase via [`squeezed_phase`].
    pub theta_s: f64,
    /// Antisqueezed-quadrature phase, theta_s + pi/2 normalized to (-pi, pi].
    pub theta_a: f64,
}

/// Proportionality constant of the classical output power in mW per
/// scaled-unit squared. The default anchors the pure-doubler point m = 2.5
/// to 65 mW.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCalibration {
    pub c: f64,
}

impl PowerCalibration {
    pub const DEFAULT_MW: f64 = 2.6;

    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::Parameter(format!(
                "power calibration must be finite and > 0, got {c}"
            )));
        }
        Ok(Self { c })
    }
}

impl Default for PowerCalibration {
    fn default() -> Self {
        Self {
            c: Self::DEFAULT_MW,
        }
    }
}

fn check_omega(omega_tilde: f64) -> Result<()> {
    if !omega_tilde.is_finite() {
        return Err(Error::Domain(format!(
            "omega_tilde must be finite, got {omega_tilde}"
        )));
    }
    Ok(())
}

/// Harmonic output spectra at one scaled frequency (split Lorentzian form).
pub fn spectrum(point: &OperatingPoint, omega_tilde: f64) -> Result<SpectrumSample> {
    point.require_stable()?;
    check_omega(omega_tilde)?;
    let c = 1.0 + 2.0 * point.m;
    let b = point.b();
    let w2 = omega_tilde * omega_tilde;
    let k = 8.0 * point.m * b;
    let s_minus = 1.0 - k / (w2 + (c + b) * (c + b));
    let s_plus = 1.0 + k / (w2 + (c - b) * (c - b));
    let theta_s = canonical_squeezed_phase();
    Ok(SpectrumSample {
        omega_tilde,
        s_minus,
        s_plus,
        theta_s,
        theta_a: normalize_angle(theta_s + std::f64::consts::FRAC_PI_2),
    })
}

/// Single-fraction form of the spectra. Algebraically identical to
/// [`spectrum`]; kept as an independent route for tests.
pub fn spectrum_single_fraction(point: &OperatingPoint, omega_tilde: f64) -> Result<(f64, f64)> {
    point.require_stable()?;
    check_omega(omega_tilde)?;
    let c = 1.0 + 2.0 * point.m;
    let b = point.b();
    let w2 = omega_tilde * omega_tilde;
    let den = (w2 + (c - b) * (c - b)) * (w2 + (c + b) * (c + b));
    let k = 8.0 * point.m * b;
    let even = w2 + b * b + c * c;
    let s_minus = 1.0 + k * (2.0 * b * c - even) / den;
    let s_plus = 1.0 + k * (2.0 * b * c + even) / den;
    Ok((s_minus, s_plus))
}

/// Zero-frequency extrema of the spectra: the squeezing minimum and the
/// antisqueezing maximum,
/// `S-(0) = 1 - 8mB/(c+B)^2`, `S+(0) = 1 + 8mB/(c-B)^2`.
pub fn zero_frequency_extrema(point: &OperatingPoint) -> Result<(f64, f64)> {
    let sample = spectrum(point, 0.0)?;
    Ok((sample.s_minus, sample.s_plus))
}

/// Squeezed-quadrature phase set by the harmonic drive phase,
/// `theta_s = 2 varphi - pi`, normalized to (-pi, pi]. Independent of
/// frequency and of the operating point.
pub fn squeezed_phase(drive: &DriveConfig) -> f64 {
    normalize_angle(2.0 * drive.varphi - std::f64::consts::PI)
}

/// [`squeezed_phase`] of the canonical drive (phi = 0, varphi = pi).
pub fn canonical_squeezed_phase() -> f64 {
    std::f64::consts::PI
}

/// Classical output power in mW, `P = c (2m + eta_in)^2`, evaluated in
/// scaled units with the calibration constant carrying all dimensions.
pub fn output_power(point: &OperatingPoint, cal: &PowerCalibration) -> f64 {
    let s = 2.0 * point.m + point.eta_in;
    cal.c * s * s
}
