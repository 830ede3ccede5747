//! Machine-readable sweep tables and the datasets behind the two summary
//! figures: zero-frequency squeezing/antisqueezing versus m, and classical
//! output power versus m, each at a set of instability fractions.
//!
//! Emission formats:
//!
//! * CSV: leading `# key=value` metadata comments (sorted by key), a header
//!   row of column names, then rows with floats printed to 17 significant
//!   digits so parsing reproduces the values exactly.
//! * JSON: one object `{"metadata": {...}, "columns": [...], "rows": [[...]]}`.
//!
//! Both formats parse back to value-identical tables, and repeated runs with
//! the same inputs are byte-identical: every computation here is a pure
//! closed-form evaluation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{db_from_linear, OperatingPoint};
use crate::oracle::{canonical_system, oracle_spectrum, OutputMode};
use crate::spectra::{output_power, spectrum, zero_frequency_extrema, PowerCalibration};

/// Name and unit of one table column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub unit: String,
}

impl ColumnSpec {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

/// An ordered numeric table with named columns and a parameter-echo
/// metadata block. Rows are strictly increasing in the first (sweep)
/// column and every value is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<ColumnSpec>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn new(columns: Vec<ColumnSpec>) -> Self {
        Self {
            metadata: BTreeMap::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    /// Append a row, enforcing arity, finiteness and sweep ordering.
    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Format(format!(
                "row has {} values, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::Format(format!("non-finite value {bad} in row")));
        }
        if let Some(last) = self.rows.last() {
            if row[0] <= last[0] {
                return Err(Error::Format(format!(
                    "sweep variable must be strictly increasing, got {} after {}",
                    row[0], last[0]
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    /// Index of a named column.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// The row whose sweep value is closest to `value`.
    pub fn row_at(&self, value: f64) -> Option<&Vec<f64>> {
        self.rows.iter().min_by(|a, b| {
            (a[0] - value)
                .abs()
                .partial_cmp(&(b[0] - value).abs())
                .unwrap()
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}={v}");
        }
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        let _ = writeln!(out, "{}", names.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut metadata = BTreeMap::new();
        let mut columns: Option<Vec<ColumnSpec>> = None;
        let mut rows = Vec::new();
        for line in s.lines() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((k, v)) = comment.trim().split_once('=') {
                    metadata.insert(k.trim().to_string(), v.to_string());
                }
                continue;
            }
            match &columns {
                None => {
                    columns = Some(
                        line.split(',')
                            .map(|n| ColumnSpec::new(n.trim(), ""))
                            .collect(),
                    );
                }
                Some(cols) => {
                    let row: Vec<f64> = line
                        .split(',')
                        .map(|cell| {
                            cell.trim()
                                .parse::<f64>()
                                .map_err(|e| Error::Format(format!("bad float {cell:?}: {e}")))
                        })
                        .collect::<Result<_>>()?;
                    if row.len() != cols.len() {
                        return Err(Error::Format(format!(
                            "row has {} values, header has {} columns",
                            row.len(),
                            cols.len()
                        )));
                    }
                    rows.push(row);
                }
            }
        }
        let columns = columns.ok_or_else(|| Error::Format("missing CSV header".into()))?;
        Ok(Self {
            metadata,
            columns,
            rows,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(format!("bad JSON table: {e}")))
    }

    /// Render in the requested format.
    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Csv => self.to_csv(),
            TableFormat::Json => self.to_json(),
        }
    }
}

/// Output format for table emission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Uniform grid of `steps + 1` points on [min, max], strictly increasing.
pub fn uniform_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !min.is_finite() || !max.is_finite() || max <= min {
        return Err(Error::Parameter(format!(
            "grid bounds must be finite with max > min, got [{min}, {max}]"
        )));
    }
    if steps == 0 {
        return Err(Error::Parameter("grid needs at least one step".into()));
    }
    Ok((0..=steps)
        .map(|i| min + (max - min) * (i as f64) / (steps as f64))
        .collect())
}

fn fraction_label(f: f64) -> String {
    format!("{f}")
}

fn check_fractions(fractions: &[f64]) -> Result<()> {
    if fractions.is_empty() {
        return Err(Error::Parameter("at least one fraction is required".into()));
    }
    for &f in fractions {
        if !f.is_finite() || f < 0.0 {
            return Err(Error::Parameter(format!(
                "fraction must be finite and >= 0, got {f}"
            )));
        }
        if f >= 1.0 {
            return Err(Error::Unstable {
                eta_in: f,
                threshold: 1.0,
            });
        }
    }
    Ok(())
}

fn check_m_grid(m_grid: &[f64]) -> Result<()> {
    if m_grid.is_empty() {
        return Err(Error::Parameter("empty m grid".into()));
    }
    for pair in m_grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::Parameter(
                "m grid must be strictly increasing".into(),
            ));
        }
    }
    if m_grid[0] < 0.0 || !m_grid.iter().all(|m| m.is_finite()) {
        return Err(Error::Parameter("m grid must be finite and >= 0".into()));
    }
    Ok(())
}

/// Zero-frequency squeezing and antisqueezing in dB versus m, one column
/// pair per instability fraction. Default fractions are 0, 0.5 and 0.75.
pub fn fig1_dataset(m_grid: &[f64], fractions: &[f64]) -> Result<SweepTable> {
    check_m_grid(m_grid)?;
    check_fractions(fractions)?;

    let mut columns = vec![ColumnSpec::new("m", "")];
    for &f in fractions {
        let label = fraction_label(f);
        columns.push(ColumnSpec::new(format!("s_minus_db_f{label}"), "dB"));
        columns.push(ColumnSpec::new(format!("s_plus_db_f{label}"), "dB"));
    }

    let mut table = SweepTable::new(columns);
    table.set_meta("dataset", "fig1");
    annotate_grid(&mut table, m_grid, fractions);

    for &m in m_grid {
        let mut row = Vec::with_capacity(1 + 2 * fractions.len());
        row.push(m);
        for &f in fractions {
            let point = OperatingPoint::from_fraction(m, f)?;
            let (s_minus, s_plus) = zero_frequency_extrema(&point)?;
            row.push(db_from_linear(s_minus)?);
            row.push(db_from_linear(s_plus)?);
        }
        table.push_row(row)?;
    }
    Ok(table)
}

/// Classical harmonic output power in mW versus m, one column per fraction.
pub fn fig2_dataset(
    m_grid: &[f64],
    fractions: &[f64],
    cal: &PowerCalibration,
) -> Result<SweepTable> {
    check_m_grid(m_grid)?;
    check_fractions(fractions)?;

    let mut columns = vec![ColumnSpec::new("m", "")];
    for &f in fractions {
        columns.push(ColumnSpec::new(
            format!("p_out_mw_f{}", fraction_label(f)),
            "mW",
        ));
    }

    let mut table = SweepTable::new(columns);
    table.set_meta("dataset", "fig2");
    table.set_meta("power_calibration_mw", cal.c);
    annotate_grid(&mut table, m_grid, fractions);

    for &m in m_grid {
        let mut row = Vec::with_capacity(1 + fractions.len());
        row.push(m);
        for &f in fractions {
            let point = OperatingPoint::from_fraction(m, f)?;
            row.push(output_power(&point, cal));
        }
        table.push_row(row)?;
    }
    Ok(table)
}

/// Frequency-resolved spectra at one operating point. With `with_oracle`
/// set, each row also carries the independently computed linear-response
/// values and their worst relative deviation from the closed form.
pub fn spectrum_sweep(
    point: &OperatingPoint,
    omega_grid: &[f64],
    with_oracle: bool,
) -> Result<SweepTable> {
    point.require_stable()?;
    if omega_grid.is_empty() {
        return Err(Error::Parameter("empty omega grid".into()));
    }
    for pair in omega_grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::Parameter(
                "omega grid must be strictly increasing".into(),
            ));
        }
    }

    let mut columns = vec![
        ColumnSpec::new("omega_tilde", ""),
        ColumnSpec::new("s_minus", ""),
        ColumnSpec::new("s_plus", ""),
        ColumnSpec::new("theta_s", "rad"),
    ];
    if with_oracle {
        columns.push(ColumnSpec::new("s_minus_oracle", ""));
        columns.push(ColumnSpec::new("s_plus_oracle", ""));
        columns.push(ColumnSpec::new("rel_dev", ""));
    }

    let mut table = SweepTable::new(columns);
    table.set_meta("dataset", "spectrum");
    table.set_meta("m", point.m);
    table.set_meta("eta_in", point.eta_in);
    table.set_meta("fraction", point.fraction());
    table.set_meta("artifact_version", env!("CARGO_PKG_VERSION"));

    let sys = if with_oracle {
        Some(canonical_system(point)?)
    } else {
        None
    };

    for &w in omega_grid {
        let s = spectrum(point, w)?;
        let mut row = vec![w, s.s_minus, s.s_plus, s.theta_s];
        if let Some(sys) = &sys {
            let o = oracle_spectrum(sys, w, OutputMode::Harmonic)?;
            let dev = ((o.s_minus - s.s_minus).abs() / s.s_minus.abs())
                .max((o.s_plus - s.s_plus).abs() / s.s_plus.abs());
            row.push(o.s_minus);
            row.push(o.s_plus);
            row.push(dev);
        }
        table.push_row(row)?;
    }
    Ok(table)
}

fn annotate_grid(table: &mut SweepTable, m_grid: &[f64], fractions: &[f64]) {
    table.set_meta("m_min", m_grid[0]);
    table.set_meta("m_max", m_grid[m_grid.len() - 1]);
    table.set_meta("m_points", m_grid.len());
    let labels: Vec<String> = fractions.iter().map(|f| fraction_label(*f)).collect();
    table.set_meta("fractions", labels.join(","));
    table.set_meta("artifact_version", env!("CARGO_PKG_VERSION"));
}
