//! Movement-time model: a Fitts' law pointing term plus fixed costs for
//! tapping, sliding, eye movement and the per-symbol Think pause.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{KeyboardLayout, LayoutKind, PrimitiveAction};
use crate::scalar::Scalar;
use crate::time::Micros;

/// Which additive constant goes inside the logarithm of the index of difficulty.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Formulation {
    /// `log2(A/W + 0.5)`, clamped at zero.
    #[default]
    WelfordHalf,
    /// `log2(A/W + 1)`.
    ShannonOne,
}

impl FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "welford" | "welford_half" => Ok(Formulation::WelfordHalf),
            "shannon" | "shannon_one" => Ok(Formulation::ShannonOne),
            _ => Err(Error::InvalidParams(format!("unknown formulation '{s}'"))),
        }
    }
}

/// Timing constants, all in milliseconds except `i_m` (ms per bit).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotorParams {
    /// Fitts slope; nominally 100 ms/bit, plausible range 70..=120.
    pub i_m: f64,
    pub formulation: Formulation,
    pub intercept_a: f64,
    pub tap_cost: f64,
    pub slide_extra: f64,
    pub think_qwerty: f64,
    pub think_qwert: f64,
    pub think_3x4: f64,
    pub eye_prep: f64,
    pub eye_exec: f64,
    /// Insert an extra Think between consecutive symbols on the same
    /// multi-tap key (the pause that commits the first one).
    pub multitap_commit_pause: bool,
}

impl Default for MotorParams {
    fn default() -> Self {
        Self {
            i_m: 100.0,
            formulation: Formulation::WelfordHalf,
            intercept_a: 0.0,
            tap_cost: 100.0,
            slide_extra: 150.0,
            think_qwerty: 500.0,
            think_qwert: 500.0,
            think_3x4: 200.0,
            eye_prep: 0.0,
            eye_exec: 0.0,
            multitap_commit_pause: true,
        }
    }
}

impl MotorParams {
    pub fn validate(&self) -> Result<()> {
        for field in ParamField::ALL {
            let v = self.get(field);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParams(format!("{field} must be finite and >= 0, got {v}")));
            }
        }
        if self.i_m <= 0.0 {
            return Err(Error::InvalidParams(format!("i_m must be > 0, got {}", self.i_m)));
        }
        Ok(())
    }

    /// Think duration for a layout. Custom layouts use the QWERT value.
    pub fn think_for(&self, kind: LayoutKind) -> f64 {
        match kind {
            LayoutKind::Qwert | LayoutKind::Custom => self.think_qwert,
            LayoutKind::Qwerty => self.think_qwerty,
            LayoutKind::ThreeByFour => self.think_3x4,
        }
    }

    pub fn get(&self, field: ParamField) -> f64 {
        match field {
            ParamField::Im => self.i_m,
            ParamField::InterceptA => self.intercept_a,
            ParamField::TapCost => self.tap_cost,
            ParamField::SlideExtra => self.slide_extra,
            ParamField::ThinkQwerty => self.think_qwerty,
            ParamField::ThinkQwert => self.think_qwert,
            ParamField::Think3x4 => self.think_3x4,
            ParamField::EyePrep => self.eye_prep,
            ParamField::EyeExec => self.eye_exec,
        }
    }

    pub fn set(&mut self, field: ParamField, value: f64) {
        let slot = match field {
            ParamField::Im => &mut self.i_m,
            ParamField::InterceptA => &mut self.intercept_a,
            ParamField::TapCost => &mut self.tap_cost,
            ParamField::SlideExtra => &mut self.slide_extra,
            ParamField::ThinkQwerty => &mut self.think_qwerty,
            ParamField::ThinkQwert => &mut self.think_qwert,
            ParamField::Think3x4 => &mut self.think_3x4,
            ParamField::EyePrep => &mut self.eye_prep,
            ParamField::EyeExec => &mut self.eye_exec,
        };
        *slot = value;
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let params: MotorParams = serde_json::from_str(json)?;
        params.validate()?;
        Ok(params)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("params serialize");
        out.push('\n');
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// The numeric fields of [`MotorParams`], named as in the parameters file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamField {
    Im,
    InterceptA,
    TapCost,
    SlideExtra,
    ThinkQwerty,
    ThinkQwert,
    Think3x4,
    EyePrep,
    EyeExec,
}

impl ParamField {
    pub const ALL: [ParamField; 9] = [
        ParamField::Im,
        ParamField::InterceptA,
        ParamField::TapCost,
        ParamField::SlideExtra,
        ParamField::ThinkQwerty,
        ParamField::ThinkQwert,
        ParamField::Think3x4,
        ParamField::EyePrep,
        ParamField::EyeExec,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParamField::Im => "i_m",
            ParamField::InterceptA => "intercept_a",
            ParamField::TapCost => "tap_cost",
            ParamField::SlideExtra => "slide_extra",
            ParamField::ThinkQwerty => "think_qwerty",
            ParamField::ThinkQwert => "think_qwert",
            ParamField::Think3x4 => "think_3x4",
            ParamField::EyePrep => "eye_prep",
            ParamField::EyeExec => "eye_exec",
        }
    }

    /// Search interval used by calibration.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            ParamField::Im => (10.0, 500.0),
            _ => (0.0, 5000.0),
        }
    }
}

impl fmt::Display for ParamField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamField::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown parameter '{s}'")))
    }
}

/// Index of difficulty in bits for amplitude `a` and target width `w`.
///
/// The Welford-style form goes negative for `a < w/2` (e.g. tapping the key
/// the thumb already rests on); it is clamped to zero.
pub fn index_of_difficulty<T: Scalar>(a: T, w: T, formulation: Formulation) -> Result<T> {
    if !(w > T::zero()) || !w.is_finite() {
        return Err(Error::DegenerateTarget(w.as_f64()));
    }
    if a < T::zero() || !a.is_finite() {
        return Err(Error::NegativeAmplitude(a.as_f64()));
    }
    let ratio = a / w;
    Ok(match formulation {
        Formulation::WelfordHalf => (ratio + T::lit(0.5)).log2().max(T::zero()),
        Formulation::ShannonOne => (ratio + T::one()).log2(),
    })
}

/// Movement time in milliseconds: `intercept_a + i_m * ID`.
pub fn fitts_mt<T: Scalar>(a: T, w: T, params: &MotorParams) -> Result<T> {
    let id = index_of_difficulty(a, w, params.formulation)?;
    Ok(T::lit(params.intercept_a) + T::lit(params.i_m) * id)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ActionTimeBreakdown {
    pub think: Micros,
    pub eye: Micros,
    pub movement: Micros,
    pub execution: Micros,
}

impl ActionTimeBreakdown {
    pub fn total(&self) -> Micros {
        self.think + self.eye + self.movement + self.execution
    }
}

/// Duration of one action.
///
/// Pointing actions move from `from_key` (the layout's home key when
/// `None`) to the target; the target width is the smaller of its two
/// dimensions. Each part is rounded to whole microseconds independently.
pub fn action_time<T: Scalar>(
    action: &PrimitiveAction,
    from_key: Option<&str>,
    layout: &KeyboardLayout<T>,
    params: &MotorParams,
) -> Result<ActionTimeBreakdown> {
    let (target, slide) = match action {
        PrimitiveAction::Think => {
            return Ok(ActionTimeBreakdown {
                think: Micros::from_ms(params.think_for(layout.kind)),
                ..Default::default()
            });
        }
        PrimitiveAction::PointTap { target, .. } => (target, false),
        PrimitiveAction::PointSlideUp { target, .. } => (target, true),
    };
    let to = layout
        .key(target)
        .ok_or_else(|| Error::UnknownKey(target.clone()))?;
    let from = from_key.unwrap_or(&layout.home_key);
    let amplitude = layout.key_distance(from, target)?;
    let movement = fitts_mt(amplitude, to.bounds.min_dimension(), params)?;

    let mut execution = Micros::from_ms(params.tap_cost);
    if slide {
        execution += Micros::from_ms(params.slide_extra);
    }
    Ok(ActionTimeBreakdown {
        think: Micros::ZERO,
        eye: Micros::from_ms(params.eye_prep) + Micros::from_ms(params.eye_exec),
        movement: Micros::from_ms(movement.as_f64()),
        execution,
    })
}
