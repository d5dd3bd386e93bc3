//! Tabulated sweep results and pass/fail checks shared by every experiment.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// One labeled table of (parameter value -> observables) rows from a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub experiment: String,
    /// Name of the swept parameter (first CSV column).
    pub parameter: String,
    /// Observable column names, fixed per experiment.
    pub observables: Vec<String>,
    /// Rows sorted by parameter value.
    pub rows: Vec<ScanRow>,
    /// Run context: seed, grid sizes, tolerances.
    pub metadata: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub parameter: f64,
    pub values: Vec<f64>,
}

impl ScanResult {
    pub fn new(
        experiment: impl Into<String>,
        parameter: impl Into<String>,
        observables: Vec<String>,
    ) -> Self {
        Self {
            experiment: experiment.into(),
            parameter: parameter.into(),
            observables,
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn push_row(&mut self, parameter: f64, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.observables.len());
        self.rows.push(ScanRow { parameter, values });
    }

    /// Sorts rows by parameter value (total order; NaN has no place here).
    pub fn sort_rows(&mut self) {
        self.rows
            .sort_by(|a, b| a.parameter.total_cmp(&b.parameter));
    }

    pub fn insert_metadata(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    /// Column index of an observable.
    pub fn column(&self, observable: &str) -> Result<usize> {
        self.observables
            .iter()
            .position(|o| o == observable)
            .ok_or_else(|| Error::InvalidParameter(format!("no observable '{observable}'")))
    }

    /// All values of one observable, row order.
    pub fn series(&self, observable: &str) -> Result<Vec<f64>> {
        let idx = self.column(observable)?;
        Ok(self.rows.iter().map(|r| r.values[idx]).collect())
    }

    pub fn parameters(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.parameter).collect()
    }

    /// Value of an observable at the row whose parameter is closest to `at`.
    pub fn value_near(&self, at: f64, observable: &str) -> Result<f64> {
        let idx = self.column(observable)?;
        self.rows
            .iter()
            .min_by(|a, b| {
                (a.parameter - at)
                    .abs()
                    .total_cmp(&(b.parameter - at).abs())
            })
            .map(|r| r.values[idx])
            .ok_or_else(|| Error::InvalidParameter("empty scan".into()))
    }
}

/// One named comparison of an observed value against its closed-form
/// prediction.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            expected,
            actual,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        (self.expected - self.actual).abs() <= self.tolerance
    }
}

/// Centralized tolerance constants used by checks and the acceptance suite.
pub mod tol {
    /// Closed-form amplitude and probability agreement.
    pub const EXACT: f64 = 1e-12;
    /// Zero-crossing location from bisection.
    pub const ZERO_LOCATE: f64 = 1e-10;
    /// Engine-equivalence comparisons (embedded vs pure vs classical).
    pub const ENGINE_EQUIV: f64 = 1e-10;
    /// Visibility laws and fringe fits.
    pub const VISIBILITY: f64 = 1e-6;
    /// Fully-distinguishable limits against the classical baseline.
    pub const CLASSICAL_MATCH: f64 = 1e-8;
    /// Relative period recovery for fitted fringes.
    pub const PERIOD_REL: f64 = 1e-3;
}
