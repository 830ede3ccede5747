//! Quantum noise of a singly resonant frequency doubler driven in both the
//! fundamental and the harmonic mode.
//!
//! The cavity resonates the fundamental only; the harmonic generated by the
//! chi^(2) crystal transmits freely. Driving the harmonic input coherently,
//! with its phase locked to twice the fundamental drive phase plus pi,
//! deepens the squeezing of the harmonic output well below the pure-doubler
//! limit while the output power grows — this crate computes all of it:
//!
//! * [`model`] — parameters, drives, scaled coordinates (m, eta_in, omega~)
//!   and unit conversions,
//! * [`steady`] — classical fixed points, the drift matrix and its
//!   eigenvalues, stability classification (instability at eta_in = 1 + m),
//! * [`spectra`] — closed-form squeezing/antisqueezing spectra of the
//!   harmonic output, squeezed-quadrature phase, classical output power,
//! * [`oracle`] — an independent first-principles route: linear response of
//!   the Langevin system contracted with vacuum input correlators, used to
//!   verify the closed forms and to reach quantities they do not cover
//!   (fundamental-mode output, correlator phases),
//! * [`sweep`] — reproducible CSV/JSON tables for figure-style sweeps.
//!
//! All types are immutable values and all operations are pure functions;
//! everything can be called concurrently without shared state.
//!
//! ```
//! use shg_core::model::OperatingPoint;
//! use shg_core::spectra::zero_frequency_extrema;
//!
//! // m = 2.5 at half the instability drive: ~80% noise suppression
//! let point = OperatingPoint::new(2.5, 1.75).unwrap();
//! let (s_minus, _) = zero_frequency_extrema(&point).unwrap();
//! assert!((s_minus - 0.190958).abs() < 1e-6);
//! ```

pub mod error;
pub mod model;
pub mod oracle;
pub mod spectra;
pub mod steady;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{
    db_from_linear, normalize_angle, quadrature_distance, scale, suppression_percent, unscale,
    DriveConfig, OperatingPoint, PhysicalParams, SteadyState,
};
pub use oracle::{
    build_system, canonical_system, compare_with_closed_form, oracle_spectrum,
    LinearResponseSystem, OracleSpectrum, OutputMode,
};
pub use spectra::{
    output_power, spectrum, squeezed_phase, zero_frequency_extrema, PowerCalibration,
    SpectrumSample,
};
pub use steady::{
    drift_matrix, eigenvalues_closed, eigenvalues_numeric, required_pump, solve_intracavity,
    DriftMatrix, StabilityReport,
};
pub use sweep::{
    fig1_dataset, fig2_dataset, spectrum_sweep, uniform_grid, ColumnSpec, SweepTable, TableFormat,
};
