//! Text normalization and compilation of text into primitive actions.

use crate::error::{Error, Result};
use crate::geometry::{is_supported, KeyboardLayout, PrimitiveAction};
use crate::motor::MotorParams;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSequence {
    pub layout_name: String,
    pub actions: Vec<PrimitiveAction>,
    pub source_text: String,
}

impl ActionSequence {
    pub fn think_count(&self) -> usize {
        self.actions.iter().filter(|a| !a.is_pointing()).count()
    }

    /// Symbols produced by the pointing actions, in order.
    pub fn produced_text(&self) -> String {
        self.actions.iter().filter_map(PrimitiveAction::produced_symbol).collect()
    }
}

/// Lowercases, drops everything outside `[a-z .,]`, and collapses
/// whitespace runs into one space. Leading and trailing whitespace is dropped.
pub fn normalize_text(raw: &str) -> Result<String> {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for c in raw.chars() {
        if c.is_whitespace() {
            pending_space = true;
            continue;
        }
        for lower in c.to_lowercase() {
            if lower != ' ' && is_supported(lower) {
                if pending_space && !out.is_empty() {
                    out.push(' ');
                }
                pending_space = false;
                out.push(lower);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoSupportedContent);
    }
    Ok(out)
}

/// Compiles normalized text into Think and pointing actions.
///
/// Each symbol is preceded by one Think. When two consecutive symbols are
/// both typed on the same multi-tap key, an extra Think separates the two
/// tap bursts (the pause that commits the first letter), unless disabled in
/// `params`.
pub fn compile_text<T: Scalar>(
    text: &str,
    layout: &KeyboardLayout<T>,
    params: &MotorParams,
) -> Result<ActionSequence> {
    if text.is_empty() {
        return Err(Error::NoSupportedContent);
    }
    let mut actions = Vec::with_capacity(text.len() * 3);
    let mut previous_multitap_key: Option<String> = None;

    for symbol in text.chars() {
        let burst = layout.resolve_symbol(symbol)?;
        let target = burst[0].target().expect("resolved actions point at a key");
        let multitap = layout.key(target).is_some_and(|k| k.is_multitap());

        if params.multitap_commit_pause && multitap && previous_multitap_key.as_deref() == Some(target) {
            actions.push(PrimitiveAction::Think);
        }
        actions.push(PrimitiveAction::Think);
        previous_multitap_key = multitap.then(|| target.to_owned());
        actions.extend(burst);
    }

    Ok(ActionSequence {
        layout_name: layout.name.clone(),
        actions,
        source_text: text.to_owned(),
    })
}
