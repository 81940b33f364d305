//! JSON layout files.
//!
//! ```json
//! {"name": "...", "kind": "QWERT", "screen": {"w_mm": 56.0, "h_mm": 93.98},
//!  "home_key": "space",
//!  "keys": [{"id": "q", "x_mm": 0.5, "y_mm": 47.68, "w_mm": 10.2, "h_mm": 10.7,
//!            "tap": "q", "slide": "y"}]}
//! ```
//!
//! Unknown fields are rejected. Millimeter values carry at most three
//! fractional digits.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{KeyDef, KeyboardLayout, LayoutKind, RectMm};
use crate::scalar::{round_mm, Scalar};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutFile {
    name: String,
    kind: LayoutKind,
    screen: ScreenFile,
    home_key: String,
    keys: Vec<KeyFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScreenFile {
    w_mm: f64,
    h_mm: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KeyFile {
    id: String,
    x_mm: f64,
    y_mm: f64,
    w_mm: f64,
    h_mm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tap: Option<char>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slide: Option<char>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    multitap: Vec<char>,
}

fn check_mm(value: f64, field: &str, owner: &str) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::Format(format!("{field} of {owner} is not a finite number")));
    }
    if ((value * 1000.0).round() / 1000.0 - value).abs() > 1e-9 {
        return Err(Error::Format(format!(
            "{field} of {owner} has more than 3 fractional digits: {value}"
        )));
    }
    Ok(value)
}

pub fn parse_layout<T: Scalar>(json: &str) -> Result<KeyboardLayout<T>> {
    let file: LayoutFile = serde_json::from_str(json)?;
    let screen = RectMm::new(
        T::zero(),
        T::zero(),
        T::lit(check_mm(file.screen.w_mm, "w_mm", "screen")?),
        T::lit(check_mm(file.screen.h_mm, "h_mm", "screen")?),
    );
    let keys = file
        .keys
        .into_iter()
        .map(|k| {
            let owner = format!("key '{}'", k.id);
            let bounds = RectMm::new(
                T::lit(check_mm(k.x_mm, "x_mm", &owner)?),
                T::lit(check_mm(k.y_mm, "y_mm", &owner)?),
                T::lit(check_mm(k.w_mm, "w_mm", &owner)?),
                T::lit(check_mm(k.h_mm, "h_mm", &owner)?),
            );
            Ok(KeyDef {
                id: k.id,
                bounds,
                tap_symbol: k.tap,
                slide_symbol: k.slide,
                multitap_symbols: k.multitap,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KeyboardLayout {
        name: file.name,
        kind: file.kind,
        screen,
        keys,
        home_key: file.home_key,
    })
}

pub fn export_layout<T: Scalar>(layout: &KeyboardLayout<T>) -> String {
    let mm = |v: T| round_mm(v).as_f64();
    let file = LayoutFile {
        name: layout.name.clone(),
        kind: layout.kind,
        screen: ScreenFile {
            w_mm: mm(layout.screen.width),
            h_mm: mm(layout.screen.height),
        },
        home_key: layout.home_key.clone(),
        keys: layout
            .keys
            .iter()
            .map(|k| KeyFile {
                id: k.id.clone(),
                x_mm: mm(k.bounds.origin.x),
                y_mm: mm(k.bounds.origin.y),
                w_mm: mm(k.bounds.width),
                h_mm: mm(k.bounds.height),
                tap: k.tap_symbol,
                slide: k.slide_symbol,
                multitap: k.multitap_symbols.clone(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("layout serializes");
    out.push('\n');
    out
}

pub fn load_layout<T: Scalar>(path: impl AsRef<Path>) -> Result<KeyboardLayout<T>> {
    parse_layout(&std::fs::read_to_string(path)?)
}
