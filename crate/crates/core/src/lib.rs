//! Text-entry performance modeling for soft keyboards.
//!
//! Layouts are physical key maps with tap, slide-up and multi-tap
//! bindings. Text is compiled into Think and pointing actions, each timed
//! with a Fitts' law movement term plus fixed execution costs, giving a
//! predicted entry time for an experienced user. Recorded typing sessions
//! can be transcribed, scored and used to calibrate the timing constants.
//!
//! Geometry is generic over the float type ([`Scalar`]); the aliases at the
//! crate root fix it to `f64` (or `f32` for the `*F32` variants).

pub mod analytics;
pub mod builtin;
pub mod error;
pub mod geometry;
pub mod layout_file;
pub mod motor;
pub mod scalar;
pub mod simulator;
pub mod time;
pub mod transcriber;

pub use analytics::{
    aggregate_sessions, calibrate, session_wpm, synthesize_log, transcribe_session, AnalyticsConfig,
    CalibrationOptions, CalibrationReport, LearningCurvePoint, Observation, SessionMeta, SessionResult,
};
pub use builtin::{builtin_by_name, builtin_layout};
pub use error::{Error, Result};
pub use geometry::{LayoutKind, PrimitiveAction, Severity, ValidationReport, SUPPORTED_SYMBOLS};
pub use layout_file::{export_layout, load_layout, parse_layout};
pub use motor::{action_time, fitts_mt, index_of_difficulty, ActionTimeBreakdown, Formulation, MotorParams, ParamField};
pub use scalar::Scalar;
pub use simulator::{compare, predict_text, simulate, write_trace, ComparisonRow, Timeline, TimelineStep};
pub use time::Micros;
pub use transcriber::{compile_text, normalize_text, ActionSequence};

pub type PointMm = geometry::PointMm<f64>;
pub type RectMm = geometry::RectMm<f64>;
pub type KeyDef = geometry::KeyDef<f64>;
pub type KeyboardLayout = geometry::KeyboardLayout<f64>;
pub type SessionLog = analytics::SessionLog<f64>;
pub type PointerEvent = analytics::PointerEvent<f64>;

pub type PointMmF32 = geometry::PointMm<f32>;
pub type RectMmF32 = geometry::RectMm<f32>;
pub type KeyDefF32 = geometry::KeyDef<f32>;
pub type KeyboardLayoutF32 = geometry::KeyboardLayout<f32>;
pub type SessionLogF32 = analytics::SessionLog<f32>;
