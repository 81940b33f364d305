//! Least-squares fitting of [`MotorParams`] to observed entry times by
//! cyclic coordinate descent with a golden-section line search.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::KeyboardLayout;
use crate::motor::{MotorParams, ParamField};
use crate::scalar::Scalar;
use crate::simulator::simulate;
use crate::transcriber::{compile_text, normalize_text, ActionSequence};

/// One observed entry: `text` typed on `layout` took `observed_ms`.
#[derive(Clone, Debug)]
pub struct Observation<'a, T> {
    pub text: String,
    pub layout: &'a KeyboardLayout<T>,
    pub observed_ms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationOptions {
    pub max_sweeps: usize,
    /// Stop once a sweep improves the residual by less than this fraction.
    pub relative_tolerance: f64,
    /// Bracket width at which a line search stops.
    pub line_tolerance: f64,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self {
            max_sweeps: 200,
            relative_tolerance: 1e-9,
            line_tolerance: 1e-7,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObservationFit {
    pub layout_name: String,
    pub observed_ms: f64,
    pub predicted_ms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationReport {
    pub params: MotorParams,
    pub free: Vec<ParamField>,
    /// Sum of squared differences in ms².
    pub initial_residual: f64,
    pub final_residual: f64,
    pub sweeps: usize,
    /// Residual after each completed sweep.
    pub residual_history: Vec<f64>,
    pub fits: Vec<ObservationFit>,
}

struct Problem<'a, T> {
    compiled: Vec<(ActionSequence, &'a KeyboardLayout<T>, f64)>,
}

impl<T: Scalar> Problem<'_, T> {
    fn predictions(&self, params: &MotorParams) -> Result<Vec<f64>> {
        self.compiled
            .iter()
            .map(|(seq, layout, _)| Ok(simulate(seq, layout, params)?.total.as_ms()))
            .collect()
    }

    fn residual(&self, params: &MotorParams) -> Result<f64> {
        let predicted = self.predictions(params)?;
        Ok(predicted
            .iter()
            .zip(&self.compiled)
            .map(|(p, (_, _, observed))| (p - observed).powi(2))
            .sum())
    }
}

/// Golden-section search for the minimum of `f` on `[lo, hi]`.
fn golden_section(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    tolerance: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tolerance {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    // The bracket endpoints matter when the minimum sits on a bound.
    let candidates = [(x1, f1), (x2, f2), (lo, f(lo)?), (hi, f(hi)?)];
    Ok(candidates
        .into_iter()
        .fold((x1, f1), |best, c| if c.1 < best.1 { c } else { best }))
}

/// Fits the `free` fields of `seed` so that predicted totals match the
/// observations in the least-squares sense.
///
/// Fields are visited in a fixed order each sweep. A line-search result
/// is only adopted when it strictly lowers the residual, so the residual
/// never increases and a seed that already fits exactly is returned as is.
pub fn calibrate<T: Scalar>(
    observations: &[Observation<'_, T>],
    free: &[ParamField],
    seed: &MotorParams,
    options: &CalibrationOptions,
) -> Result<CalibrationReport> {
    if observations.is_empty() {
        return Err(Error::NoObservations);
    }
    let mut free = free.to_vec();
    free.sort();
    free.dedup();
    if free.is_empty() {
        return Err(Error::NoFreeFields);
    }
    seed.validate()?;

    let compiled = observations
        .iter()
        .map(|o| {
            let text = normalize_text(&o.text)?;
            Ok((compile_text(&text, o.layout, seed)?, o.layout, o.observed_ms))
        })
        .collect::<Result<Vec<_>>>()?;
    let problem = Problem { compiled };

    let mut params = seed.clone();
    let initial_residual = problem.residual(&params)?;
    let mut current = initial_residual;
    let mut history = Vec::new();
    let mut sweeps = 0;

    while sweeps < options.max_sweeps && current > 0.0 {
        let before = current;
        for &field in &free {
            let (lo, hi) = field.bounds();
            let mut trial = params.clone();
            let (x, fx) = golden_section(
                |x| {
                    trial.set(field, x);
                    problem.residual(&trial)
                },
                lo,
                hi,
                options.line_tolerance,
            )?;
            if fx < current {
                params.set(field, x);
                current = fx;
            }
        }
        sweeps += 1;
        history.push(current);
        if (before - current) / before < options.relative_tolerance {
            break;
        }
    }

    let fits = problem
        .predictions(&params)?
        .into_iter()
        .zip(&problem.compiled)
        .map(|(predicted_ms, (_, layout, observed_ms))| ObservationFit {
            layout_name: layout.name.clone(),
            observed_ms: *observed_ms,
            predicted_ms,
        })
        .collect();

    Ok(CalibrationReport {
        params,
        free,
        initial_residual,
        final_residual: current,
        sweeps,
        residual_history: history,
        fits,
    })
}

/// A row of an observations CSV (`layout,text_file,observed_seconds`).
/// Relative text paths are resolved against the CSV's directory.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct ObservationRecord {
    pub layout: String,
    pub text_file: PathBuf,
    pub observed_seconds: f64,
}

pub fn read_observations_csv(path: impl AsRef<Path>) -> Result<Vec<ObservationRecord>> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = reader.headers()?.clone();
    for expected in ["layout", "text_file", "observed_seconds"] {
        if !headers.iter().any(|h| h == expected) {
            return Err(Error::Format(format!("observations file lacks column '{expected}'")));
        }
    }
    reader
        .deserialize::<ObservationRecord>()
        .map(|row| {
            let mut row = row?;
            if !(row.observed_seconds.is_finite() && row.observed_seconds >= 0.0) {
                return Err(Error::Format(format!(
                    "observed_seconds must be a non-negative number, got {}",
                    row.observed_seconds
                )));
            }
            if row.text_file.is_relative() {
                row.text_file = base.join(&row.text_file);
            }
            Ok(row)
        })
        .collect()
}
