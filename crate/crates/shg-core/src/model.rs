//! Physical parameters, drive fields, scaled coordinates and phase
//! conventions for the doubly driven singly resonant frequency doubler.
//!
//! The cavity resonates the fundamental mode only; the harmonic leaves
//! through the crystal without feedback. Everything downstream works in the
//! scaled coordinates
//!
//! ```text
//! m      = mu * n / gamma              (scaled intracavity photon number)
//! eta_in = 2 sqrt(mu) * |beta_in| / gamma   (scaled harmonic drive)
//! B      = eta_in + m
//! omega~ = omega / gamma               (scaled sideband frequency)
//! ```
//!
//! which depend only on rate ratios; physical-unit entry points convert at
//! the boundary. The global phase convention fixes the intracavity field in
//! phase with the fundamental drive, and angles are normalized to (-pi, pi].

use crate::error::{Error, Result};

/// Tolerance for the drive phase constraint varphi = 2*phi + pi (mod 2pi).
pub const PHASE_TOL: f64 = 1e-12;

/// Cavity rates and nonlinear coupling. The total damping
/// `gamma = gamma_c + gamma_s` is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Input coupling rate of the fundamental mode (s^-1, > 0).
    pub gamma_c: f64,
    /// Intracavity loss rate, absorption and scattering in the crystal (s^-1, >= 0).
    pub gamma_s: f64,
    /// Two-photon coupling rate, proportional to the chi^(2) response
    /// (s^-1 per photon, > 0).
    pub mu: f64,
}

impl PhysicalParams {
    pub fn new(gamma_c: f64, gamma_s: f64, mu: f64) -> Result<Self> {
        if !gamma_c.is_finite() || gamma_c <= 0.0 {
            return Err(Error::Parameter(format!(
                "gamma_c must be finite and > 0, got {gamma_c}"
            )));
        }
        if !gamma_s.is_finite() || gamma_s < 0.0 {
            return Err(Error::Parameter(format!(
                "gamma_s must be finite and >= 0, got {gamma_s}"
            )));
        }
        if !mu.is_finite() || mu <= 0.0 {
            return Err(Error::Parameter(format!(
                "mu must be finite and > 0, got {mu}"
            )));
        }
        Ok(Self {
            gamma_c,
            gamma_s,
            mu,
        })
    }

    /// Canonical scaled-unit parameters: lossless cavity with
    /// gamma_c = gamma = 1 and mu = 1, so that n = m and 2 sqrt(mu) beta = eta_in.
    pub fn scaled_units() -> Self {
        Self {
            gamma_c: 1.0,
            gamma_s: 0.0,
            mu: 1.0,
        }
    }

    /// Total damping rate gamma = gamma_c + gamma_s.
    pub fn gamma(&self) -> f64 {
        self.gamma_c + self.gamma_s
    }
}

/// Classical drive amplitudes and phases of both input modes.
///
/// Construction enforces the in-phase fixed-point family: the harmonic drive
/// phase must satisfy `varphi = 2*phi + pi (mod 2pi)` to within [`PHASE_TOL`].
/// Other phase combinations are rejected; the out-of-phase fixed points they
/// would select are not represented.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig {
    /// Fundamental drive modulus |alpha_in| (sqrt(photons/s), >= 0).
    pub alpha_in_amp: f64,
    /// Fundamental drive phase phi (rad).
    pub phi: f64,
    /// Harmonic drive modulus |beta_in| (sqrt(photons/s), >= 0).
    pub beta_in_amp: f64,
    /// Harmonic drive phase varphi (rad), constrained to 2*phi + pi.
    pub varphi: f64,
}

impl DriveConfig {
    pub fn new(alpha_in_amp: f64, phi: f64, beta_in_amp: f64, varphi: f64) -> Result<Self> {
        if !alpha_in_amp.is_finite() || alpha_in_amp < 0.0 {
            return Err(Error::Parameter(format!(
                "alpha_in_amp must be finite and >= 0, got {alpha_in_amp}"
            )));
        }
        if !beta_in_amp.is_finite() || beta_in_amp < 0.0 {
            return Err(Error::Parameter(format!(
                "beta_in_amp must be finite and >= 0, got {beta_in_amp}"
            )));
        }
        if !phi.is_finite() || !varphi.is_finite() {
            return Err(Error::Parameter(format!(
                "phases must be finite, got phi = {phi}, varphi = {varphi}"
            )));
        }
        let expected = normalize_angle(2.0 * phi + std::f64::consts::PI);
        let deviation = normalize_angle(varphi - expected).abs();
        if deviation > PHASE_TOL {
            return Err(Error::Phase {
                got: varphi,
                expected,
                deviation,
            });
        }
        Ok(Self {
            alpha_in_amp,
            phi,
            beta_in_amp,
            varphi,
        })
    }

    /// Convenience constructor that derives `varphi = 2*phi + pi` itself.
    pub fn in_phase(alpha_in_amp: f64, phi: f64, beta_in_amp: f64) -> Result<Self> {
        let varphi = normalize_angle(2.0 * phi + std::f64::consts::PI);
        Self::new(alpha_in_amp, phi, beta_in_amp, varphi)
    }
}

/// Operating point in scaled coordinates, the canonical internal
/// representation for spectra and stability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    /// Scaled photon number m = mu*n/gamma (dimensionless, >= 0).
    pub m: f64,
    /// Scaled harmonic drive eta_in = 2 sqrt(mu) |beta_in| / gamma (>= 0).
    pub eta_in: f64,
}

impl OperatingPoint {
    pub fn new(m: f64, eta_in: f64) -> Result<Self> {
        if !m.is_finite() || m < 0.0 {
            return Err(Error::Parameter(format!(
                "m must be finite and >= 0, got {m}"
            )));
        }
        if !eta_in.is_finite() || eta_in < 0.0 {
            return Err(Error::Parameter(format!(
                "eta_in must be finite and >= 0, got {eta_in}"
            )));
        }
        Ok(Self { m, eta_in })
    }

    /// Build a point from the instability fraction f = eta_in / (1 + m).
    pub fn from_fraction(m: f64, fraction: f64) -> Result<Self> {
        if !fraction.is_finite() || fraction < 0.0 {
            return Err(Error::Parameter(format!(
                "fraction must be finite and >= 0, got {fraction}"
            )));
        }
        Self::new(m, fraction * (1.0 + m))
    }

    /// Combined coupling B = eta_in + m entering the spectra.
    pub fn b(&self) -> f64 {
        self.eta_in + self.m
    }

    /// Fraction of the instability drive, f = eta_in / (1 + m).
    pub fn fraction(&self) -> f64 {
        self.eta_in / (1.0 + self.m)
    }

    /// Strict stability of the in-phase fixed point. The marginal point
    /// eta_in = 1 + m is classified unstable: the slow eigenvalue vanishes
    /// and the zero-frequency spectra diverge there.
    pub fn is_stable(&self) -> bool {
        self.fraction() < 1.0
    }

    /// Error unless the point is strictly stable.
    pub fn require_stable(&self) -> Result<()> {
        if self.is_stable() {
            Ok(())
        } else {
            Err(Error::Unstable {
                eta_in: self.eta_in,
                threshold: 1.0 + self.m,
            })
        }
    }
}

/// Classical intracavity fixed point of the fundamental mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    /// Field modulus |alpha| (sqrt(photons), >= 0).
    pub alpha_amp: f64,
    /// Field phase (rad); equals the fundamental drive phase for the
    /// in-phase family.
    pub alpha_phase: f64,
    /// Photon number n = alpha_amp^2.
    pub n: f64,
    /// Defect of the fixed-point equation in units of alpha_in:
    /// `alpha_in_amp - required_pump(n)`.
    pub residual: f64,
}

impl SteadyState {
    /// Assemble a steady state; `n` is always derived from `alpha_amp`.
    pub fn new(alpha_amp: f64, alpha_phase: f64, residual: f64) -> Result<Self> {
        if !alpha_amp.is_finite() || alpha_amp < 0.0 {
            return Err(Error::Parameter(format!(
                "alpha_amp must be finite and >= 0, got {alpha_amp}"
            )));
        }
        if !alpha_phase.is_finite() || !residual.is_finite() {
            return Err(Error::Parameter(
                "alpha_phase and residual must be finite".into(),
            ));
        }
        Ok(Self {
            alpha_amp,
            alpha_phase,
            n: alpha_amp * alpha_amp,
            residual,
        })
    }
}

/// Convert a physical (steady state, drive) pair to scaled coordinates:
/// `m = mu*n/gamma`, `eta_in = 2 sqrt(mu) |beta_in| / gamma`.
///
/// The drive scaling divides by the full gamma (not sqrt(gamma)): this is the
/// combination that is invariant under a global rescaling of all rates and
/// places the instability exactly at eta_in = 1 + m.
pub fn scale(
    params: &PhysicalParams,
    steady: &SteadyState,
    drive: &DriveConfig,
) -> Result<OperatingPoint> {
    let gamma = params.gamma();
    let m = params.mu * steady.n / gamma;
    let eta_in = 2.0 * params.mu.sqrt() * drive.beta_in_amp / gamma;
    OperatingPoint::new(m, eta_in)
}

/// Inverse of [`scale`]: recover the photon number and harmonic drive
/// modulus, `n = m*gamma/mu`, `beta_in_amp = eta_in*gamma/(2 sqrt(mu))`.
pub fn unscale(params: &PhysicalParams, point: &OperatingPoint) -> Result<(f64, f64)> {
    let gamma = params.gamma();
    if params.mu == 0.0 || gamma == 0.0 {
        return Err(Error::Parameter(
            "mu and gamma must be nonzero to unscale".into(),
        ));
    }
    let n = point.m * gamma / params.mu;
    let beta_in_amp = point.eta_in * gamma / (2.0 * params.mu.sqrt());
    Ok((n, beta_in_amp))
}

/// Power-spectrum dB relative to vacuum: `10*log10(s)`.
///
/// Spectrum values are strictly positive in the stable region, so `s <= 0`
/// is a domain error rather than -inf.
pub fn db_from_linear(s: f64) -> Result<f64> {
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::Domain(format!(
            "spectrum value must be finite and > 0 for dB conversion, got {s}"
        )));
    }
    Ok(10.0 * s.log10())
}

/// Noise suppression in percent of the vacuum level, `(1 - s) * 100`.
pub fn suppression_percent(s: f64) -> f64 {
    (1.0 - s) * 100.0
}

/// Normalize an angle to (-pi, pi].
pub fn normalize_angle(theta: f64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    let mut r = theta.rem_euclid(tau);
    if r > std::f64::consts::PI {
        r -= tau;
    }
    r
}

/// Distance between two quadrature angles, mod pi (quadratures are lines,
/// not directions).
pub fn quadrature_distance(a: f64, b: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let d = (a - b).rem_euclid(pi);
    d.min(pi - d)
}
