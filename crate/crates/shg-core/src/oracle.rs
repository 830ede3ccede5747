//! First-principles output noise spectra from the linearized intracavity
//! dynamics and the input-output relations.
//!
//! The fluctuation vector v = (da, da+) obeys dv/dt = A v + L xi over the
//! input basis xi = (da_in, da_in+, db_in, db_in+, w_in, w_in+), and the
//! measurable outputs are w = M v + N xi. With the Fourier convention
//! x(omega) = Int e^{+i omega t} x(t) dt the response is
//!
//! ```text
//! v(omega) = (-i omega I - A)^-1 L xi(omega)
//! w(omega) = [M (-i omega I - A)^-1 L + N] xi(omega) = T(omega) xi(omega)
//! ```
//!
//! and the two quadratic correlators follow by contracting T with the vacuum
//! correlator matrix C (coherent inputs: <dx dx+> = 1 per channel, all other
//! second moments zero). Any self-consistent Fourier convention yields the
//! same spectra, which are even in omega.
//!
//! The spectra are normalized so that pure reflected vacuum gives exactly 1:
//! `s-+ = 1 + 2 n_corr -+ 2 |a_corr|`, the vacuum unit plus twice the
//! normally ordered correlators.
//!
//! Everything here is dense 2x2 / 2x6 complex arithmetic with a closed-form
//! 2x2 inverse; the problem size is fixed and a solver dependency would buy
//! nothing.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{scale, DriveConfig, OperatingPoint, PhysicalParams, SteadyState};
use crate::spectra;
use crate::steady::{drift_matrix, eigenvalues_numeric, required_pump};

/// Which output port to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    /// Freely transmitted harmonic, `db_out = 2 sqrt(mu) alpha da - db_in`.
    Harmonic,
    /// Reflected fundamental, `da_out = sqrt(2 gamma_c) da - da_in`.
    Fundamental,
}

/// Matrices of the linearized input-output model around one fixed point.
#[derive(Debug, Clone)]
pub struct LinearResponseSystem {
    /// 2x2 drift matrix over (da, da+).
    pub a: [[Complex64; 2]; 2],
    /// 2x6 input matrix over the noise basis.
    pub l: [[Complex64; 6]; 2],
    /// 2x2 harmonic output matrix, diag(2 sqrt(mu) alpha, 2 sqrt(mu) alpha*).
    pub m_b: [[Complex64; 2]; 2],
    /// 2x6 harmonic feed-through selecting (-db_in, -db_in+).
    pub n_b: [[Complex64; 6]; 2],
    /// 6x6 vacuum correlator matrix: 1 at each (x, x+) slot, 0 elsewhere.
    pub c: [[f64; 6]; 6],
    /// Total damping rate, converts omega_tilde to physical frequency.
    pub gamma: f64,
    /// Input coupling, needed for the fundamental output port.
    pub gamma_c: f64,
    /// Scaled coordinates of the underlying fixed point.
    pub point: OperatingPoint,
}

/// Output noise data at one scaled frequency.
#[derive(Debug, Clone, Copy)]
pub struct OracleSpectrum {
    pub omega_tilde: f64,
    /// Normally ordered occupation correlator <d b_out+(w) d b_out(-w)>,
    /// real and non-negative.
    pub n_corr: f64,
    /// Squared-fluctuation correlator <d b_out(w) d b_out(-w)>.
    pub a_corr: Complex64,
    /// Phase-minimized spectrum, vacuum = 1.
    pub s_minus: f64,
    /// Phase-maximized spectrum.
    pub s_plus: f64,
    /// Quadrature angle of maximal noise, in [0, pi): half the argument of
    /// `a_corr`, since the correlator carries twice the quadrature angle.
    /// The squeezed quadrature sits at nu - pi/2.
    pub nu: f64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn mat2_inverse(m: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ]
}

fn mat2_mul_2x6(a: &[[Complex64; 2]; 2], b: &[[Complex64; 6]; 2]) -> [[Complex64; 6]; 2] {
    let mut out = [[ZERO; 6]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Build the response matrices from a consistent (params, steady, drive)
/// triple. Row 2 of every matrix is the conjugate-swap of row 1 by
/// construction.
pub fn build_system(
    params: &PhysicalParams,
    steady: &SteadyState,
    drive: &DriveConfig,
) -> Result<LinearResponseSystem> {
    // drift_matrix re-verifies the fixed-point residual and the field phase
    let a = drift_matrix(params, steady, drive)?.entries;
    let alpha = Complex64::from_polar(steady.alpha_amp, steady.alpha_phase);
    let sqrt_2gc = Complex64::new((2.0 * params.gamma_c).sqrt(), 0.0);
    let sqrt_2gs = Complex64::new((2.0 * params.gamma_s).sqrt(), 0.0);
    let g = 2.0 * params.mu.sqrt() * alpha;

    let l = [
        [sqrt_2gc, ZERO, g.conj(), ZERO, sqrt_2gs, ZERO],
        [ZERO, sqrt_2gc, ZERO, g, ZERO, sqrt_2gs],
    ];
    let m_b = [[g, ZERO], [ZERO, g.conj()]];
    let mut n_b = [[ZERO; 6]; 2];
    n_b[0][2] = Complex64::new(-1.0, 0.0);
    n_b[1][3] = Complex64::new(-1.0, 0.0);

    let mut c = [[0.0; 6]; 6];
    c[0][1] = 1.0;
    c[2][3] = 1.0;
    c[4][5] = 1.0;

    Ok(LinearResponseSystem {
        a,
        l,
        m_b,
        n_b,
        c,
        gamma: params.gamma(),
        gamma_c: params.gamma_c,
        point: scale(params, steady, drive)?,
    })
}

impl LinearResponseSystem {
    /// Transfer matrix T(omega) = M (-i omega I - A)^-1 L + N at a physical
    /// frequency, for the selected output port.
    fn transfer(&self, omega: f64, target: OutputMode) -> [[Complex64; 6]; 2] {
        let iw = Complex64::new(0.0, -omega);
        let resolvent = mat2_inverse(&[
            [iw - self.a[0][0], -self.a[0][1]],
            [-self.a[1][0], iw - self.a[1][1]],
        ]);
        let rl = mat2_mul_2x6(&resolvent, &self.l);
        let (m, n) = match target {
            OutputMode::Harmonic => (self.m_b, self.n_b),
            OutputMode::Fundamental => {
                let sq = Complex64::new((2.0 * self.gamma_c).sqrt(), 0.0);
                let mut n_a = [[ZERO; 6]; 2];
                n_a[0][0] = Complex64::new(-1.0, 0.0);
                n_a[1][1] = Complex64::new(-1.0, 0.0);
                ([[sq, ZERO], [ZERO, sq]], n_a)
            }
        };
        let mut t = mat2_mul_2x6(&m, &rl);
        for i in 0..2 {
            for j in 0..6 {
                t[i][j] += n[i][j];
            }
        }
        t
    }
}

/// Output noise spectra at one scaled frequency, computed from the response
/// matrices alone.
pub fn oracle_spectrum(
    sys: &LinearResponseSystem,
    omega_tilde: f64,
    target: OutputMode,
) -> Result<OracleSpectrum> {
    if !omega_tilde.is_finite() {
        return Err(Error::Domain(format!(
            "omega_tilde must be finite, got {omega_tilde}"
        )));
    }
    let (_, slow) = eigenvalues_numeric(&crate::steady::DriftMatrix { entries: sys.a });
    if slow.re >= 0.0 {
        return Err(Error::Unstable {
            eta_in: sys.point.eta_in,
            threshold: 1.0 + sys.point.m,
        });
    }

    let omega = omega_tilde * sys.gamma;
    let t_pos = sys.transfer(omega, target);
    let t_neg = sys.transfer(-omega, target);

    let mut a_corr = ZERO;
    let mut n_corr = ZERO;
    for (i, c_row) in sys.c.iter().enumerate() {
        for (j, &weight) in c_row.iter().enumerate() {
            if weight != 0.0 {
                a_corr += t_pos[0][i] * weight * t_neg[0][j];
                n_corr += t_pos[1][i] * weight * t_neg[0][j];
            }
        }
    }

    let s_minus = 1.0 + 2.0 * (n_corr.re - a_corr.norm());
    let s_plus = 1.0 + 2.0 * (n_corr.re + a_corr.norm());
    let tau = 2.0 * std::f64::consts::PI;
    let nu = a_corr.arg().rem_euclid(tau) / 2.0;

    Ok(OracleSpectrum {
        omega_tilde,
        n_corr: n_corr.re,
        a_corr,
        s_minus,
        s_plus,
        nu,
    })
}

/// Realize a scaled operating point as a physical system in canonical
/// scaled units (gamma_c = gamma = mu = 1, phi = 0). The steady state is
/// written down algebraically, |alpha| = sqrt(n), so no solver noise enters
/// the comparison against the closed forms.
pub fn canonical_system(point: &OperatingPoint) -> Result<LinearResponseSystem> {
    let params = PhysicalParams::scaled_units();
    let (n, beta) = crate::model::unscale(&params, point)?;
    let pump = required_pump(&params, n, beta)?;
    let drive = DriveConfig::in_phase(pump, 0.0, beta)?;
    let steady = SteadyState::new(n.sqrt(), 0.0, 0.0)?;
    build_system(&params, &steady, &drive)
}

/// Evaluate both the oracle and the closed-form harmonic spectra over a
/// frequency grid and return the largest relative deviation across S- and
/// S+. The central verification of the closed-form algebra.
pub fn compare_with_closed_form(point: &OperatingPoint, omega_grid: &[f64]) -> Result<f64> {
    point.require_stable()?;
    let sys = canonical_system(point)?;
    let mut max_dev: f64 = 0.0;
    for &w in omega_grid {
        let o = oracle_spectrum(&sys, w, OutputMode::Harmonic)?;
        let c = spectra::spectrum(point, w)?;
        let dev_m = (o.s_minus - c.s_minus).abs() / c.s_minus.abs();
        let dev_p = (o.s_plus - c.s_plus).abs() / c.s_plus.abs();
        max_dev = max_dev.max(dev_m).max(dev_p);
    }
    Ok(max_dev)
}
