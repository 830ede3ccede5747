//! Acceptance suite: one test per release criterion, each printing its
//! measured values (visible with `--nocapture`). Anchors are the published
//! operating points of the doubly driven frequency doubler at m = 2.5 and
//! m = 20; tolerances are fixed here, not tuned.
//!
//! Run with: cargo test -p shg-cli --test acceptance -- --nocapture

use std::process::Command;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use shg_core::model::{
    db_from_linear, quadrature_distance, suppression_percent, DriveConfig, OperatingPoint,
    PhysicalParams, SteadyState,
};
use shg_core::oracle::{canonical_system, compare_with_closed_form, oracle_spectrum, OutputMode};
use shg_core::spectra::{output_power, spectrum, squeezed_phase, PowerCalibration};
use shg_core::steady::{
    drift_matrix, eigenvalues_closed, eigenvalues_numeric, required_pump, solve_intracavity,
};
use shg_core::sweep::SweepTable;

const SEED: u64 = 0x5349_4e47_4c59; // fixed; all randomized criteria reuse it

fn pt(m: f64, eta: f64) -> OperatingPoint {
    OperatingPoint::new(m, eta).unwrap()
}

fn s_minus_db(m: f64, eta: f64) -> (f64, f64, f64) {
    let s = spectrum(&pt(m, eta), 0.0).unwrap();
    (
        s.s_minus,
        db_from_linear(s.s_minus).unwrap(),
        suppression_percent(s.s_minus),
    )
}

#[test]
fn c01_pure_doubler_squeezing_anchor() {
    let (linear, db, suppression) = s_minus_db(2.5, 0.0);
    println!(
        "c01: S-(0) at (m=2.5, eta=0) = {linear:.5} -> {db:.3} dB, {suppression:.1}% suppression"
    );
    assert!((linear - 0.30796).abs() <= 5e-6);
    assert!((db + 5.1).abs() <= 0.05, "got {db} dB, want -5.1 +- 0.05");
    assert!((suppression - 69.2).abs() <= 0.05);
}

#[test]
fn c02_half_instability_drive_anchor() {
    let (linear, db, suppression) = s_minus_db(2.5, 1.75);
    println!(
        "c02: S-(0) at (m=2.5, eta=1.75) = {linear:.5} -> {db:.3} dB, {suppression:.1}% suppression"
    );
    assert!((db + 7.19).abs() <= 0.005);
    assert!((db + 7.2).abs() <= 0.05, "got {db} dB, want -7.2 +- 0.05");
    assert!((suppression - 80.9).abs() <= 0.05);
}

#[test]
fn c03_three_quarter_instability_drive_anchor() {
    let (linear, db, _) = s_minus_db(2.5, 2.625);
    println!("c03: S-(0) at (m=2.5, eta=2.625) = {linear:.5} -> {db:.3} dB");
    assert!((db + 7.65).abs() <= 0.005);
    assert!((db + 7.6).abs() <= 0.1, "got {db} dB, want -7.6 +- 0.1");
}

#[test]
fn c04_high_m_antisqueezing_anchor() {
    let s = spectrum(&pt(20.0, 10.5), 0.0).unwrap();
    let db = db_from_linear(s.s_plus).unwrap();
    println!(
        "c04: S+(0) at (m=20, eta=10.5) = {:.3} -> {db:.3} dB",
        s.s_plus
    );
    assert!((db - 16.56).abs() <= 0.005);
    assert!((db - 16.5).abs() <= 0.1, "got {db} dB, want 16.5 +- 0.1");
}

#[test]
fn c05_high_m_squeezing_value() {
    // the closed form gives 13.43 dB here; 13.2 dB is the commonly quoted
    // reading, about 0.2 dB shy of the formula value. The formula value is
    // what this artifact reproduces; suppression must still clear 95%.
    let (linear, db, suppression) = s_minus_db(20.0, 10.5);
    println!(
        "c05: S-(0) at (m=20, eta=10.5) = {linear:.6} -> {db:.4} dB, {suppression:.2}% \
         (quoted 13.2 dB differs from the closed form by ~0.2 dB)"
    );
    assert!(
        (-db - 13.43).abs() <= 0.01,
        "got {db} dB, want -13.43 +- 0.01"
    );
    assert!(suppression >= 95.0);
    assert!((suppression - 95.46).abs() <= 0.01);
}

#[test]
fn c06_output_power_anchors() {
    let cal = PowerCalibration::default();
    let p0 = output_power(&pt(2.5, 0.0), &cal);
    let p50 = output_power(&pt(2.5, 1.75), &cal);
    let p75 = output_power(&pt(2.5, 2.625), &cal);
    println!("c06: P(2.5, .) = {p0} / {p50} / {p75} mW at fractions 0 / 0.5 / 0.75");
    assert_eq!(p0, 65.0, "calibration anchor must be exact");
    assert!((p50 - 118.46).abs() <= 0.5);
    assert!((p50 - 118.0).abs() <= 0.5);
    assert!((p75 - 151.17).abs() <= 0.5);
    assert!((p75 - 151.0).abs() <= 0.5);
}

#[test]
fn c07_oracle_equivalence() {
    // deterministic grid over the anchor points first
    let omega_grid: Vec<f64> = (0..=20).map(|i| 0.5 * i as f64).collect();
    let mut worst: f64 = 0.0;
    for (m, eta) in [(2.5, 0.0), (2.5, 1.75), (2.5, 2.625), (20.0, 10.5)] {
        worst = worst.max(compare_with_closed_form(&pt(m, eta), &omega_grid).unwrap());
    }

    // 1000 randomized stable points; a 5% margin from the threshold keeps
    // the correlator difference forming S- well conditioned
    let mut rng = StdRng::seed_from_u64(SEED);
    for _ in 0..1000 {
        let m: f64 = rng.gen_range(0.0..50.0);
        let f: f64 = rng.gen_range(0.0..0.95);
        let w: f64 = rng.gen_range(0.0..100.0);
        let point = OperatingPoint::from_fraction(m, f).unwrap();
        worst = worst.max(compare_with_closed_form(&point, &[w]).unwrap());
    }
    println!("c07: max relative deviation oracle vs closed form = {worst:e}");
    assert!(worst <= 1e-10, "worst deviation {worst:e}");
}

#[test]
fn c08_eigenvalue_equivalence_and_threshold_crossing() {
    let params = PhysicalParams::scaled_units();
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let m: f64 = rng.gen_range(0.0..50.0);
        let eta: f64 = rng.gen_range(0.0..2.0 * (1.0 + m));
        let point = pt(m, eta);
        let (n, beta) = shg_core::model::unscale(&params, &point).unwrap();
        let pump = required_pump(&params, n, beta).unwrap();
        let drive = DriveConfig::in_phase(pump, 0.0, beta).unwrap();
        let steady = SteadyState::new(n.sqrt(), 0.0, 0.0).unwrap();
        let dm = drift_matrix(&params, &steady, &drive).unwrap();
        let (numeric_minus, numeric_plus) = eigenvalues_numeric(&dm);
        let closed = eigenvalues_closed(&params, &point);
        // relative to the spectral scale |lambda_minus|: lambda_plus crosses
        // zero, where per-value relative error has no meaning
        let scale = closed.lambda_minus.abs().max(1.0);
        worst = worst.max((numeric_minus.re - closed.lambda_minus).abs() / scale);
        worst = worst.max((numeric_plus.re - closed.lambda_plus).abs() / scale);
    }
    println!("c08: max eigenvalue deviation (relative to spectral scale) = {worst:e}");
    assert!(worst <= 1e-12, "worst deviation {worst:e}");

    // bisect the sign change of lambda_plus in eta: it must land on 1 + m
    for m in [0.0, 0.37, 2.5, 20.0, 49.0] {
        let lambda_plus = |eta: f64| eigenvalues_closed(&params, &pt(m, eta)).lambda_plus;
        let (mut lo, mut hi) = (0.0, 2.0 * (1.0 + m));
        assert!(lambda_plus(lo) < 0.0 && lambda_plus(hi) > 0.0);
        while hi - lo > 1e-13 * (1.0 + m) {
            let mid = 0.5 * (lo + hi);
            if lambda_plus(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let threshold = 1.0 + m;
        assert!(
            (lo - threshold).abs() <= 1e-12 * threshold
                && (hi - threshold).abs() <= 1e-12 * threshold,
            "m={m}: crossing bracketed at [{lo}, {hi}], want {threshold}"
        );
    }
    println!("c08: lambda_plus sign change brackets eta = 1 + m to 1e-12 at all probed m");
}

#[test]
fn c09_property_suite_fixed_seed() {
    let params = PhysicalParams::scaled_units();
    let mut rng = StdRng::seed_from_u64(SEED);
    for _ in 0..1000 {
        let m: f64 = rng.gen_range(0.0..50.0);
        let f: f64 = rng.gen_range(0.0..0.999);
        let w: f64 = rng.gen_range(0.0..100.0);
        let point = OperatingPoint::from_fraction(m, f).unwrap();
        let s = spectrum(&point, w).unwrap();

        // Heisenberg and vacuum bounds
        assert!(s.s_minus * s.s_plus >= 1.0 - 1e-12);
        assert!(s.s_minus > 0.0 && s.s_minus <= 1.0 && s.s_plus >= 1.0);

        // evenness is exact
        let neg = spectrum(&point, -w).unwrap();
        assert_eq!(s.s_minus, neg.s_minus);
        assert_eq!(s.s_plus, neg.s_plus);

        // S-(0) strictly decreasing in eta_in on [0, 1 + m)
        if m > 0.0 && f < 0.99 {
            let deeper = OperatingPoint::from_fraction(m, f + 0.005).unwrap();
            let s0 = spectrum(&point, 0.0).unwrap().s_minus;
            let s1 = spectrum(&deeper, 0.0).unwrap().s_minus;
            assert!(s1 < s0, "m={m} f={f}: {s1} !< {s0}");
        }

        // pump <-> amplitude round trip
        let n: f64 = rng.gen_range(0.0..1e4);
        let beta: f64 = rng.gen_range(0.0..1e2);
        let pump = required_pump(&params, n, beta).unwrap();
        let drive = DriveConfig::in_phase(pump, 0.0, beta).unwrap();
        let steady = solve_intracavity(&params, &drive).unwrap();
        assert!(
            (steady.alpha_amp - n.sqrt()).abs() <= 1e-9 * n.sqrt().max(1.0),
            "round trip at n={n} beta={beta}"
        );

        // pure-doubler floor
        let doubler = pt(m, 0.0);
        assert!(spectrum(&doubler, 0.0).unwrap().s_minus > 1.0 / 9.0);
    }

    let floor = spectrum(&pt(1e6, 0.0), 0.0).unwrap().s_minus;
    println!("c09: 1000 seeded property draws pass; S-(0) at m=1e6 is {floor:.8}");
    assert!((floor - 1.0 / 9.0).abs() <= 1e-4);
}

#[test]
fn c10_squeezed_phase_frequency_independence() {
    let drive = DriveConfig::in_phase(1.0, 0.0, 0.1).unwrap();
    let theta_s = squeezed_phase(&drive);
    let points = [
        (0.5, 0.3),
        (2.5, 0.0),
        (2.5, 1.75),
        (2.5, 2.625),
        (20.0, 10.5),
    ];
    for (m, eta) in points {
        let sys = canonical_system(&pt(m, eta)).unwrap();
        let nu0 = oracle_spectrum(&sys, 0.0, OutputMode::Harmonic).unwrap().nu;
        let mut max_drift: f64 = 0.0;
        for i in 0..=100 {
            let w = i as f64;
            let nu = oracle_spectrum(&sys, w, OutputMode::Harmonic).unwrap().nu;
            max_drift = max_drift.max(quadrature_distance(nu, nu0));
        }
        let mismatch = quadrature_distance(theta_s, nu0 - std::f64::consts::FRAC_PI_2);
        println!(
            "c10: (m={m}, eta={eta}): nu = {nu0:.12}, drift over omega~ in [0,100] = {max_drift:e}, \
             theta_s vs nu - pi/2 (mod pi) = {mismatch:e}"
        );
        assert!(max_drift <= 1e-10, "nu drifts by {max_drift:e}");
        assert!(mismatch <= 1e-10, "theta_s mismatch {mismatch:e}");
    }
}

fn run_fig(cmd: &str) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_shg"))
        .arg(cmd)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{cmd} failed: {:?}", out);
    String::from_utf8(out.stdout).expect("utf8 output")
}

#[test]
fn c11_end_to_end_figure_tables() {
    // bit-identical across repeated runs
    let fig1 = run_fig("fig1");
    let fig2 = run_fig("fig2");
    assert_eq!(fig1, run_fig("fig1"), "fig1 output must be deterministic");
    assert_eq!(fig2, run_fig("fig2"), "fig2 output must be deterministic");

    let t1 = SweepTable::from_csv_str(&fig1).unwrap();
    let t2 = SweepTable::from_csv_str(&fig2).unwrap();
    assert_eq!(t1.rows.len(), 401);

    let at = |t: &SweepTable, m: f64, col: &str| -> f64 {
        let row = t.row_at(m).unwrap();
        assert_eq!(row[0], m, "default grid must contain m = {m} exactly");
        row[t.column_index(col).unwrap()]
    };

    // criteria 1-5 via the emitted fig1 table
    assert!((at(&t1, 2.5, "s_minus_db_f0") + 5.1).abs() <= 0.05);
    assert!((at(&t1, 2.5, "s_minus_db_f0.5") + 7.2).abs() <= 0.05);
    assert!((at(&t1, 2.5, "s_minus_db_f0.75") + 7.6).abs() <= 0.1);
    assert!((at(&t1, 20.0, "s_plus_db_f0.5") - 16.5).abs() <= 0.1);
    assert!((at(&t1, 20.0, "s_minus_db_f0.5") + 13.43).abs() <= 0.01);

    // criterion 6 via the emitted fig2 table
    assert_eq!(at(&t2, 2.5, "p_out_mw_f0"), 65.0);
    assert!((at(&t2, 2.5, "p_out_mw_f0.5") - 118.46).abs() <= 0.5);
    assert!((at(&t2, 2.5, "p_out_mw_f0.75") - 151.17).abs() <= 0.5);

    println!(
        "c11: fig1/fig2 default tables are deterministic and reproduce all dB and power anchors"
    );
}
