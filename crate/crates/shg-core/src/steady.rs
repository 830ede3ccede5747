//! Classical fixed points of the fundamental mode, the drift matrix of the
//! linearized fluctuations, and stability classification.
//!
//! The in-phase fixed-point family satisfies
//!
//! ```text
//! sqrt(2 gamma_c) |alpha_in| = |alpha| (gamma + mu n + 2 sqrt(mu) |beta_in|),   n = |alpha|^2
//! ```
//!
//! which read as a cubic in x = |alpha| is strictly increasing on x >= 0
//! (every non-constant coefficient is positive), so it has exactly one
//! non-negative root. The drift eigenvalues are real,
//! `lambda_-+ = -(gamma + 2 mu n) -+ (mu n + 2 sqrt(mu) |beta_in|)`, and the
//! fixed point destabilizes when the slow one reaches zero, at
//! `eta_in = 1 + m` in scaled coordinates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{
    normalize_angle, DriveConfig, OperatingPoint, PhysicalParams, SteadyState, PHASE_TOL,
};

/// Relative tolerance of the intracavity root finder.
pub const SOLVE_TOL: f64 = 1e-12;
/// Iteration cap of the root finder.
pub const SOLVE_MAX_ITER: usize = 200;
/// Residual budget of a successful solve, relative to max(1, |alpha_in|).
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Drift matrix of the linearized fluctuations over the doubled basis
/// (da, da+).
///
/// Diagonal entries are `-(gamma + 2 mu n)`; the (1,2) entry is
/// `2 sqrt(mu) beta_in - mu alpha^2` and (2,1) its complex conjugate. The
/// matrix always equals the conjugate-swap of itself: entry (2,2) is the
/// conjugate of (1,1) and (2,1) the conjugate of (1,2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix {
    pub entries: [[Complex64; 2]; 2],
}

impl DriftMatrix {
    /// Largest deviation from the conjugate-swap structure (exactly zero for
    /// matrices built by [`drift_matrix`]).
    pub fn conjugate_swap_defect(&self) -> f64 {
        let a = &self.entries;
        let d1 = (a[1][1] - a[0][0].conj()).norm();
        let d2 = (a[1][0] - a[0][1].conj()).norm();
        d1.max(d2)
    }
}

/// Stability of the in-phase fixed point at a scaled operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    /// Fast eigenvalue (s^-1).
    pub lambda_minus: f64,
    /// Slow eigenvalue (s^-1); crosses zero at the instability.
    pub lambda_plus: f64,
    /// Strict stability: lambda_plus < 0, equivalently fraction < 1.
    pub stable: bool,
    /// Instability fraction f = eta_in / (1 + m).
    pub fraction: f64,
    /// Distance to the threshold, 1 - f.
    pub margin: f64,
}

/// Fundamental drive modulus that sustains a photon number `n` against the
/// damping, the pump depletion and the harmonic back-action:
/// `|alpha_in| = |alpha| (gamma + mu n + 2 sqrt(mu) |beta_in|) / sqrt(2 gamma_c)`.
pub fn required_pump(params: &PhysicalParams, n: f64, beta_in_amp: f64) -> Result<f64> {
    if !n.is_finite() || n < 0.0 {
        return Err(Error::Parameter(format!(
            "n must be finite and >= 0, got {n}"
        )));
    }
    if !beta_in_amp.is_finite() || beta_in_amp < 0.0 {
        return Err(Error::Parameter(format!(
            "beta_in_amp must be finite and >= 0, got {beta_in_amp}"
        )));
    }
    let gamma = params.gamma();
    let x = n.sqrt();
    Ok(
        x * (gamma + params.mu * n + 2.0 * params.mu.sqrt() * beta_in_amp)
            / (2.0 * params.gamma_c).sqrt(),
    )
}

/// Solve the fixed-point cubic
/// `mu x^3 + (gamma + 2 sqrt(mu) |beta_in|) x - sqrt(2 gamma_c) |alpha_in| = 0`
/// for the unique root x = |alpha| >= 0.
///
/// Bracketed Newton: the bracket starts at
/// `[0, max(1, sqrt(2 gamma_c) |alpha_in| / gamma)]` (the linear term alone
/// already overshoots there) and is expanded geometrically until the sign
/// changes; Newton steps that leave the bracket fall back to bisection.
pub fn solve_intracavity(params: &PhysicalParams, drive: &DriveConfig) -> Result<SteadyState> {
    let gamma = params.gamma();
    let mu = params.mu;
    let pump = (2.0 * params.gamma_c).sqrt() * drive.alpha_in_amp;
    let linear = gamma + 2.0 * mu.sqrt() * drive.beta_in_amp;

    if pump == 0.0 {
        return SteadyState::new(0.0, drive.phi, 0.0);
    }

    let f = |x: f64| mu * x * x * x + linear * x - pump;
    let df = |x: f64| 3.0 * mu * x * x + linear;

    let mut lo = 0.0_f64;
    let mut hi = (pump / gamma).max(1.0);
    let mut expand = 0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        expand += 1;
        if expand > 200 {
            return Err(Error::NoConvergence { iterations: expand });
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..SOLVE_MAX_ITER {
        let fx = f(x);
        if fx == 0.0 {
            break;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let step = fx / df(x);
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= SOLVE_TOL * x.abs().max(1.0) {
            // one unguarded polish step: quadratic convergence puts the
            // result at machine precision
            x = next - f(next) / df(next);
            if !x.is_finite() {
                x = next;
            }
            break;
        }
        x = next;
    }

    let residual = drive.alpha_in_amp - required_pump(params, x * x, drive.beta_in_amp)?;
    if residual.abs() > RESIDUAL_TOL * drive.alpha_in_amp.max(1.0) {
        return Err(Error::NoConvergence {
            iterations: SOLVE_MAX_ITER,
        });
    }
    SteadyState::new(x, drive.phi, residual)
}

fn check_consistency(
    params: &PhysicalParams,
    steady: &SteadyState,
    drive: &DriveConfig,
) -> Result<()> {
    let residual = drive.alpha_in_amp - required_pump(params, steady.n, drive.beta_in_amp)?;
    let tolerance = RESIDUAL_TOL * drive.alpha_in_amp.max(1.0);
    if residual.abs() > tolerance {
        return Err(Error::Inconsistent {
            residual: residual.abs(),
            tolerance,
        });
    }
    let phase_defect = normalize_angle(steady.alpha_phase - drive.phi).abs();
    if phase_defect > PHASE_TOL {
        return Err(Error::Inconsistent {
            residual: phase_defect,
            tolerance: PHASE_TOL,
        });
    }
    Ok(())
}

/// Drift matrix of the fluctuations around `steady` for the given drive.
///
/// Errors with an inconsistency if the pair does not solve the fixed-point
/// equation (residual above [`RESIDUAL_TOL`]) or the field is out of phase
/// with the drive.
pub fn drift_matrix(
    params: &PhysicalParams,
    steady: &SteadyState,
    drive: &DriveConfig,
) -> Result<DriftMatrix> {
    check_consistency(params, steady, drive)?;
    let gamma = params.gamma();
    let mu = params.mu;
    let alpha = Complex64::from_polar(steady.alpha_amp, steady.alpha_phase);
    let beta_in = Complex64::from_polar(drive.beta_in_amp, drive.varphi);

    let diag = Complex64::new(-(gamma + 2.0 * mu * steady.n), 0.0);
    let off = 2.0 * mu.sqrt() * beta_in - mu * alpha * alpha;
    Ok(DriftMatrix {
        entries: [[diag, off], [off.conj(), diag.conj()]],
    })
}

/// Closed-form drift eigenvalues in scaled coordinates,
/// `lambda_-+ / gamma = -(1 + 2m) -+ (m + eta_in)`, together with the
/// stability classification.
pub fn eigenvalues_closed(params: &PhysicalParams, point: &OperatingPoint) -> StabilityReport {
    let gamma = params.gamma();
    let c = 1.0 + 2.0 * point.m;
    let b = point.b();
    let fraction = point.fraction();
    StabilityReport {
        lambda_minus: gamma * (-c - b),
        lambda_plus: gamma * (-c + b),
        stable: fraction < 1.0,
        fraction,
        margin: 1.0 - fraction,
    }
}

/// Eigenvalues of a 2x2 complex matrix by the quadratic formula, sorted
/// ascending by real part. Independent numeric route for checking
/// [`eigenvalues_closed`]; for the in-phase family both come out real.
pub fn eigenvalues_numeric(dm: &DriftMatrix) -> (Complex64, Complex64) {
    let a = &dm.entries;
    let tr = a[0][0] + a[1][1];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = 0.5 * (tr - disc);
    let l2 = 0.5 * (tr + disc);
    if l1.re <= l2.re {
        (l1, l2)
    } else {
        (l2, l1)
    }
}
