//! Keyboard geometry: keys placed on a millimeter grid, their gesture
//! bindings, and the lookups built on them (symbol resolution, distances,
//! hit testing, validation).
//!
//! Coordinates have their origin at the top-left of the screen with `y`
//! growing downward.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Symbols every complete layout must be able to produce.
pub const SUPPORTED_SYMBOLS: &str = "abcdefghijklmnopqrstuvwxyz .,";

pub fn is_supported(symbol: char) -> bool {
    SUPPORTED_SYMBOLS.contains(symbol)
}

// Slack for comparing edges that were computed by different float paths.
const EDGE_EPS_MM: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PointMm<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> PointMm<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: PointMm<T>) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RectMm<T> {
    pub origin: PointMm<T>,
    pub width: T,
    pub height: T,
}

impl<T: Scalar> RectMm<T> {
    pub fn new(x: T, y: T, width: T, height: T) -> Self {
        Self {
            origin: PointMm::new(x, y),
            width,
            height,
        }
    }

    pub fn right(&self) -> T {
        self.origin.x + self.width
    }

    pub fn bottom(&self) -> T {
        self.origin.y + self.height
    }

    pub fn center(&self) -> PointMm<T> {
        let two = T::lit(2.0);
        PointMm::new(
            self.origin.x + self.width / two,
            self.origin.y + self.height / two,
        )
    }

    /// Closed containment: points on the boundary are inside.
    pub fn contains(&self, p: PointMm<T>) -> bool {
        p.x >= self.origin.x && p.x <= self.right() && p.y >= self.origin.y && p.y <= self.bottom()
    }

    /// True when the open interiors intersect (shared edges do not count).
    pub fn overlaps(&self, other: &RectMm<T>) -> bool {
        let eps = T::lit(EDGE_EPS_MM);
        self.origin.x + eps < other.right()
            && other.origin.x + eps < self.right()
            && self.origin.y + eps < other.bottom()
            && other.origin.y + eps < self.bottom()
    }

    pub fn encloses(&self, inner: &RectMm<T>) -> bool {
        let eps = T::lit(EDGE_EPS_MM);
        inner.origin.x + eps >= self.origin.x
            && inner.origin.y + eps >= self.origin.y
            && inner.right() <= self.right() + eps
            && inner.bottom() <= self.bottom() + eps
    }

    /// The smaller of width and height: the target width used for pointing.
    pub fn min_dimension(&self) -> T {
        self.width.min(self.height)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LayoutKind {
    Qwert,
    Qwerty,
    ThreeByFour,
    Custom,
}

impl LayoutKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LayoutKind::Qwert => "QWERT",
            LayoutKind::Qwerty => "QWERTY",
            LayoutKind::ThreeByFour => "THREE_BY_FOUR",
            LayoutKind::Custom => "CUSTOM",
        }
    }
}

impl fmt::Display for LayoutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One physical key and the symbols it produces.
///
/// A key is either tap/slide-typed or multi-tap-typed. Keys without any
/// binding (enter, delete, ...) are allowed; they occupy space but type nothing.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyDef<T> {
    pub id: String,
    pub bounds: RectMm<T>,
    pub tap_symbol: Option<char>,
    pub slide_symbol: Option<char>,
    pub multitap_symbols: Vec<char>,
}

impl<T: Scalar> KeyDef<T> {
    pub fn new(id: impl Into<String>, bounds: RectMm<T>) -> Self {
        Self {
            id: id.into(),
            bounds,
            tap_symbol: None,
            slide_symbol: None,
            multitap_symbols: Vec::new(),
        }
    }

    pub fn with_tap(mut self, symbol: char) -> Self {
        self.tap_symbol = Some(symbol);
        self
    }

    pub fn with_slide(mut self, symbol: char) -> Self {
        self.slide_symbol = Some(symbol);
        self
    }

    pub fn with_multitap(mut self, symbols: impl IntoIterator<Item = char>) -> Self {
        self.multitap_symbols = symbols.into_iter().collect();
        self
    }

    pub fn is_multitap(&self) -> bool {
        !self.multitap_symbols.is_empty()
    }

    pub fn has_binding(&self) -> bool {
        self.tap_symbol.is_some() || self.slide_symbol.is_some() || self.is_multitap()
    }

    /// Every (gesture, symbol) slot of this key, in resolution order.
    fn bindings(&self) -> impl Iterator<Item = char> + '_ {
        self.tap_symbol
            .into_iter()
            .chain(self.slide_symbol)
            .chain(self.multitap_symbols.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KeyboardLayout<T> {
    pub name: String,
    pub kind: LayoutKind,
    pub screen: RectMm<T>,
    pub keys: Vec<KeyDef<T>>,
    /// Key under the thumb before the first action.
    pub home_key: String,
}

/// One motor act. Pointing actions carry the key they aim at and, for the
/// action that completes a symbol, the symbol produced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrimitiveAction {
    Think,
    PointTap {
        target: String,
        produced: Option<char>,
    },
    PointSlideUp {
        target: String,
        produced: Option<char>,
    },
}

impl PrimitiveAction {
    pub fn target(&self) -> Option<&str> {
        match self {
            PrimitiveAction::Think => None,
            PrimitiveAction::PointTap { target, .. } | PrimitiveAction::PointSlideUp { target, .. } => {
                Some(target)
            }
        }
    }

    pub fn produced_symbol(&self) -> Option<char> {
        match self {
            PrimitiveAction::Think => None,
            PrimitiveAction::PointTap { produced, .. } | PrimitiveAction::PointSlideUp { produced, .. } => {
                *produced
            }
        }
    }

    pub fn is_pointing(&self) -> bool {
        !matches!(self, PrimitiveAction::Think)
    }

    pub fn label(&self) -> &'static str {
        match self {
            PrimitiveAction::Think => "think",
            PrimitiveAction::PointTap { .. } => "tap",
            PrimitiveAction::PointSlideUp { .. } => "slide_up",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Issue {
    pub severity: Severity,
    pub message: String,
    pub key: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.issues.iter().all(|i| i.severity != Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    fn push(&mut self, severity: Severity, message: String, key: Option<&str>) {
        self.issues.push(Issue {
            severity,
            message,
            key: key.map(str::to_owned),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return writeln!(f, "ok");
        }
        for issue in &self.issues {
            let level = match issue.severity {
                Severity::Warning => "warning",
                Severity::Error => "error",
            };
            match &issue.key {
                Some(key) => writeln!(f, "{level} [{key}]: {}", issue.message)?,
                None => writeln!(f, "{level}: {}", issue.message)?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> KeyboardLayout<T> {
    pub fn key(&self, id: &str) -> Option<&KeyDef<T>> {
        self.keys.iter().find(|k| k.id == id)
    }

    fn require_key(&self, id: &str) -> Result<&KeyDef<T>> {
        self.key(id).ok_or_else(|| Error::UnknownKey(id.to_owned()))
    }

    pub fn home(&self) -> Result<&KeyDef<T>> {
        self.require_key(&self.home_key)
    }

    /// Center-to-center Euclidean distance between two keys.
    pub fn key_distance(&self, a: &str, b: &str) -> Result<T> {
        let a = self.require_key(a)?;
        let b = self.require_key(b)?;
        Ok(a.bounds.center().distance(b.bounds.center()))
    }

    /// Key whose bounds contain `p`.
    ///
    /// A point on a shared edge belongs to the key whose origin is nearest
    /// to it; equal distances go to the lexicographically lowest id.
    pub fn hit_test(&self, p: PointMm<T>) -> Option<&KeyDef<T>> {
        self.keys
            .iter()
            .filter(|k| k.bounds.contains(p))
            .min_by(|a, b| {
                let da = a.bounds.origin.distance(p);
                let db = b.bounds.origin.distance(p);
                da.partial_cmp(&db)
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| a.id.cmp(&b.id))
            })
    }

    /// Pointing actions that produce `symbol`.
    ///
    /// A tap binding yields one tap, a slide binding one slide-up, and the
    /// i-th (0-based) entry of a multi-tap group yields i+1 taps on the same
    /// key. Only the final action of the burst carries the produced symbol.
    pub fn resolve_symbol(&self, symbol: char) -> Result<Vec<PrimitiveAction>> {
        for key in &self.keys {
            if key.tap_symbol == Some(symbol) {
                return Ok(vec![PrimitiveAction::PointTap {
                    target: key.id.clone(),
                    produced: Some(symbol),
                }]);
            }
            if key.slide_symbol == Some(symbol) {
                return Ok(vec![PrimitiveAction::PointSlideUp {
                    target: key.id.clone(),
                    produced: Some(symbol),
                }]);
            }
            if let Some(index) = key.multitap_symbols.iter().position(|&s| s == symbol) {
                let taps = (0..=index)
                    .map(|i| PrimitiveAction::PointTap {
                        target: key.id.clone(),
                        produced: (i == index).then_some(symbol),
                    })
                    .collect();
                return Ok(taps);
            }
        }
        Err(Error::NoBinding(symbol, self.name.clone()))
    }

    /// Checks the structural invariants of the layout.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let zero = T::zero();

        if !(self.screen.width > zero && self.screen.height > zero) {
            report.push(Severity::Error, "screen has non-positive size".into(), None);
        }

        let mut seen_ids = HashSet::new();
        for key in &self.keys {
            let id = Some(key.id.as_str());
            if !seen_ids.insert(key.id.as_str()) {
                report.push(Severity::Error, format!("duplicate key id '{}'", key.id), id);
            }
            let b = &key.bounds;
            let finite = [b.origin.x, b.origin.y, b.width, b.height]
                .iter()
                .all(|v| v.is_finite());
            if !finite || !(b.width > zero && b.height > zero) {
                report.push(
                    Severity::Error,
                    format!("key '{}' has non-positive or non-finite size", key.id),
                    id,
                );
            } else if !self.screen.encloses(b) {
                report.push(
                    Severity::Error,
                    format!("key '{}' lies outside the screen", key.id),
                    id,
                );
            }
            if key.is_multitap() && (key.tap_symbol.is_some() || key.slide_symbol.is_some()) {
                report.push(
                    Severity::Error,
                    format!("key '{}' mixes multi-tap and tap/slide bindings", key.id),
                    id,
                );
            }
            if !key.has_binding() {
                report.push(Severity::Warning, format!("key '{}' has no binding", key.id), id);
            }
            for symbol in key.bindings().filter(|s| !is_supported(*s)) {
                report.push(
                    Severity::Warning,
                    format!("key '{}' binds unsupported symbol {symbol:?}", key.id),
                    id,
                );
            }
        }

        for (i, a) in self.keys.iter().enumerate() {
            for b in &self.keys[i + 1..] {
                if a.bounds.overlaps(&b.bounds) {
                    report.push(
                        Severity::Error,
                        format!("keys '{}' and '{}' overlap", a.id, b.id),
                        Some(&a.id),
                    );
                }
            }
        }

        let mut owners: BTreeMap<char, Vec<&str>> = BTreeMap::new();
        for key in &self.keys {
            for symbol in key.bindings() {
                owners.entry(symbol).or_default().push(&key.id);
            }
        }
        for (symbol, keys) in &owners {
            if keys.len() > 1 {
                report.push(
                    Severity::Error,
                    format!("duplicate binding '{symbol}' on keys {}", keys.join(", ")),
                    Some(keys[0]),
                );
            }
        }
        for symbol in SUPPORTED_SYMBOLS.chars() {
            if !owners.contains_key(&symbol) {
                report.push(Severity::Error, format!("unreachable symbol '{symbol}'"), None);
            }
        }

        if self.key(&self.home_key).is_none() {
            report.push(
                Severity::Error,
                format!("home key '{}' not found", self.home_key),
                None,
            );
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(x: f64, y: f64, w: f64, h: f64) -> RectMm<f64> {
        RectMm::new(x, y, w, h)
    }

    /// Minimal complete layout: one key per supported symbol in a single row.
    fn strip() -> KeyboardLayout<f64> {
        let keys = SUPPORTED_SYMBOLS
            .chars()
            .enumerate()
            .map(|(i, c)| {
                let id = if c == ' ' { "space".to_owned() } else { c.to_string() };
                KeyDef::new(id, rect(i as f64 * 10.0, 0.0, 10.0, 10.0)).with_tap(c)
            })
            .collect();
        KeyboardLayout {
            name: "strip".into(),
            kind: LayoutKind::Custom,
            screen: rect(0.0, 0.0, 300.0, 10.0),
            keys,
            home_key: "space".into(),
        }
    }

    #[test]
    fn strip_is_valid() {
        let report = strip().validate();
        assert!(report.ok(), "{report}");
        assert!(report.issues.is_empty());
    }

    #[test]
    fn duplicate_binding_is_reported() {
        let mut layout = strip();
        layout.keys[1].tap_symbol = Some('a');
        let report = layout.validate();
        assert!(!report.ok());
        assert!(report
            .errors()
            .any(|i| i.message.starts_with("duplicate binding 'a'")));
    }

    #[test]
    fn unreachable_symbol_is_reported() {
        let mut layout = strip();
        layout.keys.retain(|k| k.tap_symbol != Some(','));
        let report = layout.validate();
        assert!(report.errors().any(|i| i.message == "unreachable symbol ','"));
    }

    #[test]
    fn overlap_and_out_of_screen_are_reported() {
        let mut layout = strip();
        layout.keys[1].bounds = rect(5.0, 0.0, 10.0, 10.0);
        layout.keys[2].bounds = rect(295.0, 0.0, 10.0, 10.0);
        let report = layout.validate();
        let messages: Vec<_> = report.errors().map(|i| i.message.clone()).collect();
        assert!(messages.iter().any(|m| m == "keys 'a' and 'b' overlap"));
        assert!(messages.iter().any(|m| m == "key 'c' lies outside the screen"));
    }

    #[test]
    fn missing_home_and_mixed_bindings_are_errors() {
        let mut layout = strip();
        layout.home_key = "nope".into();
        layout.keys[0].multitap_symbols = vec!['x'];
        let report = layout.validate();
        let messages: Vec<_> = report.errors().map(|i| i.message.clone()).collect();
        assert!(messages.contains(&"home key 'nope' not found".to_owned()));
        assert!(messages.contains(&"key 'a' mixes multi-tap and tap/slide bindings".to_owned()));
    }

    #[test]
    fn unbound_key_is_only_a_warning() {
        let mut layout = strip();
        layout.screen.height = 20.0;
        layout.keys.push(KeyDef::new("enter", rect(0.0, 10.0, 10.0, 10.0)));
        let report = layout.validate();
        assert!(report.ok());
        assert_eq!(report.issues.len(), 1);
        assert_eq!(report.issues[0].severity, Severity::Warning);
    }

    #[test]
    fn resolve_unknown_symbol_fails() {
        let err = strip().resolve_symbol('!').unwrap_err();
        assert!(matches!(err, Error::NoBinding('!', _)));
    }

    #[test]
    fn shared_edge_goes_to_nearest_origin() {
        let layout = strip();
        // x = 10 is the edge between 'a' [0,10] and 'b' [10,20]; b's origin is nearer.
        let hit = layout.hit_test(PointMm::new(10.0, 5.0)).unwrap();
        assert_eq!(hit.id, "b");
        assert!(layout.hit_test(PointMm::new(10.0, 50.0)).is_none());
    }

    #[test]
    fn unknown_key_distance_fails() {
        assert!(matches!(
            strip().key_distance("a", "zz"),
            Err(Error::UnknownKey(id)) if id == "zz"
        ));
    }
}
