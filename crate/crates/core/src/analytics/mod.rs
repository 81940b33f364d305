//! Scoring of recorded typing sessions, learning curves, and fitting of
//! motor parameters to observed entry times.

pub mod calibrate;
pub mod curve;
pub mod session;

pub use calibrate::{
    calibrate, read_observations_csv, CalibrationOptions, CalibrationReport, Observation, ObservationFit,
    ObservationRecord,
};
pub use curve::{aggregate_sessions, write_curve_csv, LearningCurvePoint};
pub use session::{
    export_session_log, load_session_log, parse_session_log, session_wpm, synthesize_log, transcribe_session,
    AnalyticsConfig, Phase, PointerEvent, SessionLog, SessionMeta, SessionResult,
};
