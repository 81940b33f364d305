//! Timing of action sequences and cross-layout comparison.

use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::{KeyboardLayout, PrimitiveAction};
use crate::motor::{action_time, ActionTimeBreakdown, MotorParams};
use crate::scalar::Scalar;
use crate::time::Micros;
use crate::transcriber::{compile_text, normalize_text, ActionSequence};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimelineStep {
    pub index: usize,
    pub action: PrimitiveAction,
    /// Key the thumb rests on when a pointing action begins.
    pub from_key: Option<String>,
    pub breakdown: ActionTimeBreakdown,
    pub start: Micros,
    pub end: Micros,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Timeline {
    pub layout_name: String,
    pub steps: Vec<TimelineStep>,
    pub total: Micros,
    pub symbol_count: usize,
    /// Five characters per word; infinite for a zero-length timeline.
    pub predicted_wpm: f64,
}

pub fn wpm(symbols: usize, total: Micros) -> f64 {
    if total.0 <= 0 {
        return f64::INFINITY;
    }
    symbols as f64 / total.as_secs() * 60.0 / 5.0
}

/// Times every action of `seq`, starting with the thumb on the home key.
///
/// Pointing actions (including slide-ups) leave the thumb on their target;
/// Think steps do not move it.
pub fn simulate<T: Scalar>(
    seq: &ActionSequence,
    layout: &KeyboardLayout<T>,
    params: &MotorParams,
) -> Result<Timeline> {
    if seq.layout_name != layout.name {
        return Err(Error::LayoutMismatch {
            sequence: seq.layout_name.clone(),
            layout: layout.name.clone(),
        });
    }
    let mut thumb = layout.home()?.id.clone();
    let mut clock = Micros::ZERO;
    let mut steps = Vec::with_capacity(seq.actions.len());

    for (index, action) in seq.actions.iter().enumerate() {
        let from_key = action.is_pointing().then(|| thumb.clone());
        let breakdown = action_time(action, from_key.as_deref(), layout, params)?;
        let start = clock;
        clock += breakdown.total();
        if let Some(target) = action.target() {
            thumb = target.to_owned();
        }
        steps.push(TimelineStep {
            index,
            action: action.clone(),
            from_key,
            breakdown,
            start,
            end: clock,
        });
    }

    let symbol_count = seq.source_text.chars().count();
    Ok(Timeline {
        layout_name: layout.name.clone(),
        steps,
        total: clock,
        symbol_count,
        predicted_wpm: wpm(symbol_count, clock),
    })
}

/// Normalizes, compiles and simulates raw text.
pub fn predict_text<T: Scalar>(
    text: &str,
    layout: &KeyboardLayout<T>,
    params: &MotorParams,
) -> Result<Timeline> {
    let normalized = normalize_text(text)?;
    let seq = compile_text(&normalized, layout, params)?;
    simulate(&seq, layout, params)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub layout_name: String,
    pub total: Micros,
    pub predicted_wpm: f64,
}

/// Predicts `text` on each layout and ranks them fastest first; equal
/// totals are ordered by layout name.
pub fn compare<T: Scalar>(
    text: &str,
    layouts: &[KeyboardLayout<T>],
    params: &MotorParams,
) -> Result<Vec<ComparisonRow>> {
    let mut rows = layouts
        .iter()
        .map(|layout| {
            let timeline = predict_text(text, layout, params)?;
            Ok(ComparisonRow {
                layout_name: layout.name.clone(),
                total: timeline.total,
                predicted_wpm: timeline.predicted_wpm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.total.cmp(&b.total).then_with(|| a.layout_name.cmp(&b.layout_name)));
    Ok(rows)
}

pub const TRACE_HEADER: [&str; 11] = [
    "index",
    "action",
    "from_key",
    "target",
    "think_ms",
    "eye_ms",
    "movement_ms",
    "execution_ms",
    "total_ms",
    "start_ms",
    "end_ms",
];

/// Writes the per-step trace as CSV with millisecond columns at three decimals.
pub fn write_trace<W: Write>(timeline: &Timeline, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(TRACE_HEADER)?;
    for step in &timeline.steps {
        let b = &step.breakdown;
        writer.write_record([
            step.index.to_string(),
            step.action.label().to_owned(),
            step.from_key.clone().unwrap_or_default(),
            step.action.target().unwrap_or_default().to_owned(),
            b.think.ms_string(),
            b.eye.ms_string(),
            b.movement.ms_string(),
            b.execution.ms_string(),
            b.total().ms_string(),
            step.start.ms_string(),
            step.end.ms_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
