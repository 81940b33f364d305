//! Session logs recorded by the typing harness and their transcription.
//!
//! Log file (version 1):
//!
//! ```json
//! {"version": 1, "layout": "QWERT", "stimulus": "hey",
//!  "started_at": "2026-03-01T10:00:00Z", "px_per_mm": 10.0,
//!  "subject_id": "s01", "session_index": 1,
//!  "events": [{"t_ms": 0.0, "phase": "down", "x_px": 56.0, "y_px": 647.3}]}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{KeyboardLayout, PointMm, PrimitiveAction};
use crate::scalar::Scalar;
use crate::simulator::Timeline;
use crate::time::Micros;

pub const LOG_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Down,
    Up,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointerEvent<T> {
    /// Time since the first event of the session.
    pub t: Micros,
    pub phase: Phase,
    pub pos: PointMm<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionLog<T> {
    pub layout_name: String,
    pub stimulus: String,
    /// ISO-8601 / RFC 3339 timestamp.
    pub started_at: String,
    pub px_per_mm: f64,
    pub events: Vec<PointerEvent<T>>,
    pub subject_id: String,
    /// 1-based.
    pub session_index: u32,
}

/// Gesture classification thresholds.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticsConfig {
    /// Minimum upward travel (mm) for a slide-up.
    pub slide_threshold_mm: f64,
    /// A slide-up must stay within this horizontal drift (mm).
    pub horizontal_tolerance_mm: f64,
    /// Repeated taps on a multi-tap key closer than this cycle the group.
    pub multitap_timeout_ms: f64,
}

impl Default for AnalyticsConfig {
    fn default() -> Self {
        Self {
            slide_threshold_mm: 4.0,
            horizontal_tolerance_mm: 6.0,
            multitap_timeout_ms: 1000.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionResult {
    pub transcribed: String,
    pub wpm: f64,
    /// Levenshtein distance between transcription and stimulus.
    pub error_distance: usize,
    /// Milliseconds between consecutive touch-downs.
    pub keystroke_intervals: Vec<f64>,
}

/// Words per minute for `char_count` characters typed over `duration_ms`.
pub fn session_wpm(char_count: usize, duration_ms: f64) -> Result<f64> {
    if !(duration_ms > 0.0) || !duration_ms.is_finite() {
        return Err(Error::InvalidDuration(duration_ms));
    }
    Ok(char_count as f64 / (duration_ms / 1000.0) * 60.0 / 5.0)
}

impl<T: Scalar> SessionLog<T> {
    /// Checks the scale factor and the down/up alternation of the events.
    pub fn check(&self) -> Result<()> {
        if !(self.px_per_mm > 0.0) || !self.px_per_mm.is_finite() {
            return Err(Error::InvalidSession(format!(
                "px_per_mm must be positive, got {}",
                self.px_per_mm
            )));
        }
        if self.session_index == 0 {
            return Err(Error::InvalidSession("session_index is 1-based".into()));
        }
        if self.events.is_empty() {
            return Err(Error::NoEvents);
        }
        let mut expected = Phase::Down;
        let mut last_t = Micros(i64::MIN);
        for (i, event) in self.events.iter().enumerate() {
            if event.t < last_t {
                return Err(Error::InvalidSession(format!("event {i} goes back in time")));
            }
            if event.phase != expected {
                return Err(Error::InvalidSession(format!(
                    "unmatched {:?} at event {i}",
                    event.phase
                )));
            }
            last_t = event.t;
            expected = match expected {
                Phase::Down => Phase::Up,
                Phase::Up => Phase::Down,
            };
        }
        if expected == Phase::Up {
            return Err(Error::InvalidSession("unmatched Down at end of log".into()));
        }
        Ok(())
    }
}

/// Replays the pointer events against `layout` and scores the result.
///
/// Each down/up pair is one touch on the key under the down position. A
/// touch that travels at least `slide_threshold_mm` upward with less than
/// `horizontal_tolerance_mm` sideways drift is a slide-up; a slide on a key
/// without a slide symbol types the tap symbol. On multi-tap keys, a touch
/// that starts within the timeout of the previous touch on the same key
/// advances the letter (wrapping around the group) instead of adding one.
pub fn transcribe_session<T: Scalar>(
    log: &SessionLog<T>,
    layout: &KeyboardLayout<T>,
    config: &AnalyticsConfig,
) -> Result<SessionResult> {
    if log.layout_name != layout.name {
        return Err(Error::LayoutMismatch {
            sequence: log.layout_name.clone(),
            layout: layout.name.clone(),
        });
    }
    log.check()?;

    let timeout = Micros::from_ms(config.multitap_timeout_ms);
    let mut out: Vec<char> = Vec::new();
    // (key id, index within group, release time of the last touch)
    let mut group: Option<(&str, usize, Micros)> = None;

    for pair in log.events.chunks_exact(2) {
        let (down, up) = (&pair[0], &pair[1]);
        let Some(key) = layout.hit_test(down.pos) else {
            group = None;
            continue;
        };

        if key.is_multitap() {
            let cycled = match group {
                Some((id, index, released)) if id == key.id && down.t - released <= timeout => {
                    let next = (index + 1) % key.multitap_symbols.len();
                    *out.last_mut().expect("group has a symbol") = key.multitap_symbols[next];
                    next
                }
                _ => {
                    out.push(key.multitap_symbols[0]);
                    0
                }
            };
            group = Some((&key.id, cycled, up.t));
            continue;
        }

        group = None;
        let rise = (down.pos.y - up.pos.y).as_f64();
        let drift = (up.pos.x - down.pos.x).abs().as_f64();
        let slide = rise >= config.slide_threshold_mm && drift < config.horizontal_tolerance_mm;
        let symbol = if slide {
            key.slide_symbol.or(key.tap_symbol)
        } else {
            key.tap_symbol
        };
        out.extend(symbol);
    }

    let transcribed: String = out.into_iter().collect();
    let first_down = log.events[0].t;
    let last_up = log.events[log.events.len() - 1].t;
    let span_ms = (last_up - first_down).as_ms();
    let wpm = if span_ms > 0.0 {
        session_wpm(transcribed.chars().count(), span_ms)?
    } else {
        0.0
    };
    let downs: Vec<Micros> = log
        .events
        .iter()
        .filter(|e| e.phase == Phase::Down)
        .map(|e| e.t)
        .collect();
    let keystroke_intervals = downs.windows(2).map(|w| (w[1] - w[0]).as_ms()).collect();

    Ok(SessionResult {
        error_distance: strsim::levenshtein(&transcribed, &log.stimulus),
        transcribed,
        wpm,
        keystroke_intervals,
    })
}

/// Metadata for a synthesized log.
#[derive(Clone, Debug)]
pub struct SessionMeta {
    pub stimulus: String,
    pub started_at: String,
    pub px_per_mm: f64,
    pub subject_id: String,
    pub session_index: u32,
}

impl SessionMeta {
    pub fn for_stimulus(stimulus: impl Into<String>) -> Self {
        Self {
            stimulus: stimulus.into(),
            started_at: "1970-01-01T00:00:00Z".into(),
            px_per_mm: 10.0,
            subject_id: "synthetic".into(),
            session_index: 1,
        }
    }
}

/// Generates the pointer events an ideal typist following `timeline` would
/// produce.
///
/// Each pointing step touches down at the key center once its think, eye
/// and movement parts are over and lifts at the end of the step; slide-ups
/// lift above the center, past the slide threshold. Timing follows the
/// timeline except where the multi-tap timeout would merge or split bursts:
/// a new letter on the same multi-tap key is delayed past the timeout and a
/// continuation tap is pulled in to touch down right after the previous
/// release.
pub fn synthesize_log<T: Scalar>(
    timeline: &Timeline,
    layout: &KeyboardLayout<T>,
    config: &AnalyticsConfig,
    meta: SessionMeta,
) -> Result<SessionLog<T>> {
    let timeout = Micros::from_ms(config.multitap_timeout_ms);
    let lift = T::lit(config.slide_threshold_mm + 2.0);
    let mut events = Vec::new();
    let mut shift = Micros::ZERO;
    // (key id, release time, whether that touch finished a symbol)
    let mut previous: Option<(&str, Micros, bool)> = None;

    for step in &timeline.steps {
        let Some(target) = step.action.target() else { continue };
        let key = layout
            .key(target)
            .ok_or_else(|| Error::UnknownKey(target.to_owned()))?;
        let mut down_t = step.end - step.breakdown.execution + shift;
        if let Some((prev_key, released, finished)) = previous {
            if key.is_multitap() && prev_key == key.id {
                let gap = down_t - released;
                if finished && gap <= timeout {
                    let delay = timeout - gap + Micros(1_000);
                    shift += delay;
                    down_t += delay;
                } else if !finished && gap > timeout {
                    shift = shift - gap;
                    down_t = released;
                }
            }
        }
        let up_t = step.end + shift;

        let center = key.bounds.center();
        let release = match step.action {
            PrimitiveAction::PointSlideUp { .. } => PointMm::new(center.x, center.y - lift),
            _ => center,
        };
        events.push(PointerEvent {
            t: down_t,
            phase: Phase::Down,
            pos: center,
        });
        events.push(PointerEvent {
            t: up_t,
            phase: Phase::Up,
            pos: release,
        });
        previous = Some((&key.id, up_t, step.action.produced_symbol().is_some()));
    }

    // Times are relative to the first event.
    if let Some(origin) = events.first().map(|e| e.t) {
        for event in &mut events {
            event.t = event.t - origin;
        }
    }
    Ok(SessionLog {
        layout_name: layout.name.clone(),
        stimulus: meta.stimulus,
        started_at: meta.started_at,
        px_per_mm: meta.px_per_mm,
        events,
        subject_id: meta.subject_id,
        session_index: meta.session_index,
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogFile {
    version: u32,
    layout: String,
    stimulus: String,
    started_at: String,
    px_per_mm: f64,
    subject_id: String,
    session_index: u32,
    events: Vec<EventFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventFile {
    t_ms: f64,
    phase: Phase,
    x_px: f64,
    y_px: f64,
}

pub fn parse_session_log<T: Scalar>(json: &str) -> Result<SessionLog<T>> {
    let file: LogFile = serde_json::from_str(json)?;
    if file.version != LOG_VERSION {
        return Err(Error::Format(format!(
            "unsupported session log version {}",
            file.version
        )));
    }
    chrono::DateTime::parse_from_rfc3339(&file.started_at)
        .map_err(|e| Error::Format(format!("started_at '{}': {e}", file.started_at)))?;
    if !(file.px_per_mm > 0.0) {
        return Err(Error::InvalidSession(format!(
            "px_per_mm must be positive, got {}",
            file.px_per_mm
        )));
    }
    let scale = file.px_per_mm;
    let events = file
        .events
        .iter()
        .map(|e| {
            if !(e.t_ms.is_finite() && e.x_px.is_finite() && e.y_px.is_finite()) {
                return Err(Error::Format("non-finite event field".into()));
            }
            Ok(PointerEvent {
                t: Micros::from_ms(e.t_ms),
                phase: e.phase,
                pos: PointMm::new(T::lit(e.x_px / scale), T::lit(e.y_px / scale)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SessionLog {
        layout_name: file.layout,
        stimulus: file.stimulus,
        started_at: file.started_at,
        px_per_mm: file.px_per_mm,
        events,
        subject_id: file.subject_id,
        session_index: file.session_index,
    })
}

pub fn export_session_log<T: Scalar>(log: &SessionLog<T>) -> String {
    let file = LogFile {
        version: LOG_VERSION,
        layout: log.layout_name.clone(),
        stimulus: log.stimulus.clone(),
        started_at: log.started_at.clone(),
        px_per_mm: log.px_per_mm,
        subject_id: log.subject_id.clone(),
        session_index: log.session_index,
        events: log
            .events
            .iter()
            .map(|e| EventFile {
                t_ms: e.t.as_ms(),
                phase: e.phase,
                x_px: e.pos.x.as_f64() * log.px_per_mm,
                y_px: e.pos.y.as_f64() * log.px_per_mm,
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("session log serializes");
    out.push('\n');
    out
}

pub fn load_session_log<T: Scalar>(path: impl AsRef<Path>) -> Result<SessionLog<T>> {
    parse_session_log(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin_layout;
    use crate::geometry::LayoutKind;
    use crate::motor::MotorParams;
    use crate::simulator::predict_text;
    use approx::assert_relative_eq;

    fn layout(kind: LayoutKind) -> KeyboardLayout<f64> {
        builtin_layout(kind).unwrap()
    }

    fn touch(t0: i64, t1: i64, from: PointMm<f64>, to: PointMm<f64>) -> [PointerEvent<f64>; 2] {
        [
            PointerEvent {
                t: Micros(t0 * 1000),
                phase: Phase::Down,
                pos: from,
            },
            PointerEvent {
                t: Micros(t1 * 1000),
                phase: Phase::Up,
                pos: to,
            },
        ]
    }

    fn log_of(layout: &KeyboardLayout<f64>, stimulus: &str, events: Vec<PointerEvent<f64>>) -> SessionLog<f64> {
        SessionLog {
            layout_name: layout.name.clone(),
            stimulus: stimulus.into(),
            started_at: "2026-01-01T00:00:00Z".into(),
            px_per_mm: 10.0,
            events,
            subject_id: "s".into(),
            session_index: 1,
        }
    }

    #[test]
    fn wpm_formula() {
        assert_eq!(session_wpm(300, 60_000.0).unwrap(), 60.0);
        assert_eq!(session_wpm(25, 60_000.0).unwrap(), 5.0);
        assert_relative_eq!(session_wpm(339, 60_000.0).unwrap(), 67.8, max_relative = 1e-12);
        assert!(matches!(session_wpm(1, 0.0), Err(Error::InvalidDuration(_))));
        assert!(session_wpm(1, -5.0).is_err());
    }

    #[test]
    fn tap_and_slide_on_q() {
        let l = layout(LayoutKind::Qwert);
        let c = l.key("q").unwrap().bounds.center();
        let r = transcribe_session(&log_of(&l, "q", touch(0, 100, c, c).to_vec()), &l, &AnalyticsConfig::default())
            .unwrap();
        assert_eq!(r.transcribed, "q");
        assert_eq!(r.error_distance, 0);

        let up = PointMm::new(c.x, c.y - 6.0);
        let r = transcribe_session(&log_of(&l, "y", touch(0, 100, c, up).to_vec()), &l, &AnalyticsConfig::default())
            .unwrap();
        assert_eq!(r.transcribed, "y");

        let short = PointMm::new(c.x, c.y - 2.0);
        let r = transcribe_session(&log_of(&l, "y", touch(0, 100, c, short).to_vec()), &l, &AnalyticsConfig::default())
            .unwrap();
        assert_eq!(r.transcribed, "q");
        assert_eq!(r.error_distance, 1);

        let diagonal = PointMm::new(c.x + 7.0, c.y - 6.0);
        let r = transcribe_session(&log_of(&l, "y", touch(0, 100, c, diagonal).to_vec()), &l, &AnalyticsConfig::default())
            .unwrap();
        assert_eq!(r.transcribed, "q");
    }

    #[test]
    fn multitap_cycles_within_timeout() {
        let l = layout(LayoutKind::ThreeByFour);
        let c = l.key("7").unwrap().bounds.center();
        let mut events = Vec::new();
        for i in 0..4 {
            events.extend(touch(i * 200, i * 200 + 100, c, c));
        }
        // Fifth tap after the timeout starts a new letter.
        events.extend(touch(2000, 2100, c, c));
        let r = transcribe_session(&log_of(&l, "sp", events.clone()), &l, &AnalyticsConfig::default()).unwrap();
        assert_eq!(r.transcribed, "sp");
        assert_eq!(r.keystroke_intervals, vec![200.0, 200.0, 200.0, 1400.0]);
        assert_relative_eq!(r.wpm, 12.0 * 2.0 / 2.1, max_relative = 1e-12);

        // Wrap-around: five quick taps on "2" (abc) land on 'b'.
        let two = l.key("2").unwrap().bounds.center();
        let quick: Vec<_> = (0..5).flat_map(|i| touch(i * 150, i * 150 + 50, two, two)).collect();
        let r = transcribe_session(&log_of(&l, "b", quick), &l, &AnalyticsConfig::default()).unwrap();
        assert_eq!(r.transcribed, "b");
    }

    #[test]
    fn malformed_logs_are_rejected() {
        let l = layout(LayoutKind::Qwert);
        let c = l.key("q").unwrap().bounds.center();
        let cfg = AnalyticsConfig::default();
        assert!(matches!(
            transcribe_session(&log_of(&l, "", vec![]), &l, &cfg),
            Err(Error::NoEvents)
        ));
        let mut unmatched = touch(0, 10, c, c).to_vec();
        unmatched.pop();
        assert!(matches!(
            transcribe_session(&log_of(&l, "q", unmatched), &l, &cfg),
            Err(Error::InvalidSession(_))
        ));
        let mut backwards = touch(100, 110, c, c).to_vec();
        backwards.extend(touch(50, 60, c, c));
        assert!(transcribe_session(&log_of(&l, "qq", backwards), &l, &cfg).is_err());
        let mut two_downs = touch(0, 10, c, c).to_vec();
        two_downs.swap(0, 1);
        assert!(transcribe_session(&log_of(&l, "q", two_downs), &l, &cfg).is_err());
        let other = layout(LayoutKind::Qwerty);
        assert!(transcribe_session(&log_of(&other, "q", touch(0, 1, c, c).to_vec()), &l, &cfg).is_err());
    }

    #[test]
    fn touches_off_keys_type_nothing() {
        let l = layout(LayoutKind::Qwert);
        let off = PointMm::new(1.0, 1.0);
        let r = transcribe_session(&log_of(&l, "", touch(0, 10, off, off).to_vec()), &l, &AnalyticsConfig::default())
            .unwrap();
        assert_eq!(r.transcribed, "");
    }

    #[test]
    fn synthetic_hey_round_trip() {
        let l = layout(LayoutKind::Qwert);
        let timeline = predict_text("hey", &l, &MotorParams::default()).unwrap();
        let log = synthesize_log(&timeline, &l, &AnalyticsConfig::default(), SessionMeta::for_stimulus("hey")).unwrap();
        assert_eq!(log.events.len(), 6);
        assert_eq!(log.events[0].t, Micros::ZERO);
        let r = transcribe_session(&log, &l, &AnalyticsConfig::default()).unwrap();
        assert_eq!(r.transcribed, "hey");
        assert_eq!(r.error_distance, 0);
    }

    #[test]
    fn synthetic_same_key_letters_are_separated() {
        let l = layout(LayoutKind::ThreeByFour);
        for text in ["on", "nn", "abc", "ss..,,"] {
            let timeline = predict_text(text, &l, &MotorParams::default()).unwrap();
            let log = synthesize_log(&timeline, &l, &AnalyticsConfig::default(), SessionMeta::for_stimulus(text)).unwrap();
            let r = transcribe_session(&log, &l, &AnalyticsConfig::default()).unwrap();
            assert_eq!(r.transcribed, text);
        }
    }

    #[test]
    fn file_round_trip() {
        let l = layout(LayoutKind::Qwert);
        let timeline = predict_text("take care.", &l, &MotorParams::default()).unwrap();
        let log = synthesize_log(&timeline, &l, &AnalyticsConfig::default(), SessionMeta::for_stimulus("take care."))
            .unwrap();
        let json = export_session_log(&log);
        let parsed: SessionLog<f64> = parse_session_log(&json).unwrap();
        assert_eq!(parsed.events.len(), log.events.len());
        for (a, b) in parsed.events.iter().zip(&log.events) {
            assert_eq!(a.t, b.t);
            assert_eq!(a.phase, b.phase);
            assert!((a.pos.x - b.pos.x).abs() < 1e-9 && (a.pos.y - b.pos.y).abs() < 1e-9);
        }
        let cfg = AnalyticsConfig::default();
        assert_eq!(
            transcribe_session(&parsed, &l, &cfg).unwrap(),
            transcribe_session(&log, &l, &cfg).unwrap()
        );
    }

    #[test]
    fn file_format_errors() {
        let base = r#"{"version":1,"layout":"QWERT","stimulus":"q","started_at":"2026-01-01T00:00:00Z",
            "px_per_mm":10,"subject_id":"s","session_index":1,"events":[]}"#;
        assert!(parse_session_log::<f64>(base).is_ok());
        let v2 = base.replace("\"version\":1", "\"version\":2");
        assert!(parse_session_log::<f64>(&v2).unwrap_err().to_string().contains("version"));
        let bad_time = base.replace("2026-01-01T00:00:00Z", "yesterday");
        assert!(parse_session_log::<f64>(&bad_time).is_err());
        let bad_scale = base.replace("\"px_per_mm\":10", "\"px_per_mm\":0");
        assert!(parse_session_log::<f64>(&bad_scale).is_err());
        let extra = base.replace("\"events\":[]", "\"events\":[],\"device\":\"x\"");
        assert!(parse_session_log::<f64>(&extra).unwrap_err().to_string().contains("device"));
        let bad_phase = base.replace(
            "\"events\":[]",
            r#""events":[{"t_ms":0,"phase":"hover","x_px":0,"y_px":0}]"#,
        );
        assert!(parse_session_log::<f64>(&bad_phase).is_err());
    }
}
