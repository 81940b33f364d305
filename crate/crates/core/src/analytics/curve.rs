use std::collections::BTreeMap;
use std::io::Write;

use crate::analytics::session::{SessionLog, SessionResult};
use crate::error::Result;

/// Mean speed of one layout at one session index across subjects.
#[derive(Clone, Debug, PartialEq)]
pub struct LearningCurvePoint {
    pub layout_name: String,
    pub session_index: u32,
    pub mean_wpm: f64,
    /// Population standard deviation.
    pub stddev_wpm: f64,
    pub n: usize,
}

/// Groups results by (layout, session index). Output is sorted by layout
/// name, then session index.
pub fn aggregate_sessions<'a, T: 'a>(
    results: impl IntoIterator<Item = (&'a SessionLog<T>, &'a SessionResult)>,
) -> Vec<LearningCurvePoint> {
    let mut groups: BTreeMap<(String, u32), Vec<f64>> = BTreeMap::new();
    for (log, result) in results {
        groups
            .entry((log.layout_name.clone(), log.session_index))
            .or_default()
            .push(result.wpm);
    }
    groups
        .into_iter()
        .map(|((layout_name, session_index), speeds)| {
            let n = speeds.len();
            let mean = speeds.iter().sum::<f64>() / n as f64;
            let variance = speeds.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / n as f64;
            LearningCurvePoint {
                layout_name,
                session_index,
                mean_wpm: mean,
                stddev_wpm: variance.sqrt(),
                n,
            }
        })
        .collect()
}

/// `layout,session_index,mean_wpm,stddev_wpm,n`
pub fn write_curve_csv<W: Write>(points: &[LearningCurvePoint], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["layout", "session_index", "mean_wpm", "stddev_wpm", "n"])?;
    for p in points {
        writer.write_record([
            p.layout_name.clone(),
            p.session_index.to_string(),
            format!("{:.3}", p.mean_wpm),
            format!("{:.3}", p.stddev_wpm),
            p.n.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
