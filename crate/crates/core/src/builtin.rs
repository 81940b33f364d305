//! The three reference layouts: QWERT, a phone QWERTY and the 3×4 keypad.
//!
//! All three are laid out for a 4.3" portrait phone screen (3.7 × 2.13 in)
//! with the keyboard flush against the bottom edge.

use crate::error::{Error, Result};
use crate::geometry::{KeyDef, KeyboardLayout, LayoutKind, RectMm};
use crate::scalar::{round_mm, Scalar};

pub const SCREEN_HEIGHT_MM: f64 = 93.98;
pub const SCREEN_WIDTH_MM: f64 = 54.102;

pub const QWERT_KEY_W: f64 = 10.2;
pub const QWERT_KEY_H: f64 = 10.7;
pub const QWERT_GAP: f64 = 1.0;
/// Five keys plus four gaps plus half a gap on either side.
pub const QWERT_SCREEN_WIDTH_MM: f64 = 5.0 * (QWERT_KEY_W + QWERT_GAP);

pub const QWERTY_KEY_W: f64 = 5.1;
pub const QWERTY_KEY_H: f64 = 7.9;
pub const QWERTY_GAP: f64 = 0.3;

pub const KEYPAD_KEY_W: f64 = 18.0;
pub const KEYPAD_KEY_H: f64 = 15.0;

/// E.161 letter groups for keys 2..=9.
pub const E161_GROUPS: [(&str, &str); 8] = [
    ("2", "abc"),
    ("3", "def"),
    ("4", "ghi"),
    ("5", "jkl"),
    ("6", "mno"),
    ("7", "pqrs"),
    ("8", "tuv"),
    ("9", "wxyz"),
];

/// (tap, slide) pairs of QWERT, row by row. The left half of QWERTY is
/// tapped, the matching right-half letter is reached by sliding up.
const QWERT_ROWS: [[(char, Option<char>); 5]; 3] = [
    [('q', Some('y')), ('w', Some('u')), ('e', Some('i')), ('r', Some('o')), ('t', Some('p'))],
    [('a', Some('h')), ('s', Some('j')), ('d', Some('k')), ('f', Some('l')), ('g', None)],
    [('z', Some('n')), ('x', Some('m')), ('c', Some(',')), ('v', Some('.')), ('b', None)],
];

/// Resolves a builtin by name: `qwert`, `qwerty`, `3x4` (case-insensitive;
/// `three_by_four` is accepted too).
pub fn builtin_by_name<T: Scalar>(name: &str) -> Result<KeyboardLayout<T>> {
    let kind = match name.to_ascii_lowercase().as_str() {
        "qwert" => LayoutKind::Qwert,
        "qwerty" => LayoutKind::Qwerty,
        "3x4" | "three_by_four" => LayoutKind::ThreeByFour,
        _ => return Err(Error::UnsupportedBuiltin(name.to_owned())),
    };
    builtin_layout(kind)
}

pub fn builtin_layout<T: Scalar>(kind: LayoutKind) -> Result<KeyboardLayout<T>> {
    match kind {
        LayoutKind::Qwert => Ok(qwert()),
        LayoutKind::Qwerty => Ok(qwerty()),
        LayoutKind::ThreeByFour => Ok(three_by_four()),
        LayoutKind::Custom => Err(Error::UnsupportedBuiltin(kind.to_string())),
    }
}

fn rect<T: Scalar>(x: f64, y: f64, w: f64, h: f64) -> RectMm<T> {
    RectMm::new(
        round_mm(T::lit(x)),
        round_mm(T::lit(y)),
        round_mm(T::lit(w)),
        round_mm(T::lit(h)),
    )
}

fn qwert<T: Scalar>() -> KeyboardLayout<T> {
    let pitch_x = QWERT_KEY_W + QWERT_GAP;
    let pitch_y = QWERT_KEY_H + QWERT_GAP;
    let top = SCREEN_HEIGHT_MM - 4.0 * pitch_y + QWERT_GAP / 2.0;
    let slot = |col: usize, row: usize| {
        rect(
            QWERT_GAP / 2.0 + col as f64 * pitch_x,
            top + row as f64 * pitch_y,
            QWERT_KEY_W,
            QWERT_KEY_H,
        )
    };

    let mut keys = Vec::with_capacity(19);
    for (row, pairs) in QWERT_ROWS.iter().enumerate() {
        for (col, &(tap, slide)) in pairs.iter().enumerate() {
            let mut key = KeyDef::new(tap.to_string(), slot(col, row)).with_tap(tap);
            key.slide_symbol = slide;
            keys.push(key);
        }
    }
    keys.push(KeyDef::new("enter", slot(0, 3)));
    keys.push(KeyDef::new("number", slot(1, 3)));
    keys.push(KeyDef::new("space", slot(2, 3)).with_tap(' '));
    keys.push(KeyDef::new("delete", slot(3, 3)));

    KeyboardLayout {
        name: "QWERT".into(),
        kind: LayoutKind::Qwert,
        screen: rect(0.0, 0.0, QWERT_SCREEN_WIDTH_MM, SCREEN_HEIGHT_MM),
        keys,
        home_key: "space".into(),
    }
}

fn qwerty<T: Scalar>() -> KeyboardLayout<T> {
    let pitch_x = QWERTY_KEY_W + QWERTY_GAP;
    let pitch_y = QWERTY_KEY_H + QWERTY_GAP;
    let left = (SCREEN_WIDTH_MM - 10.0 * pitch_x) / 2.0 + QWERTY_GAP / 2.0;
    let top = SCREEN_HEIGHT_MM - 4.0 * pitch_y + QWERTY_GAP / 2.0;
    // Span of `cols` pitches starting at fractional column `col`.
    let span = |col: f64, cols: f64, row: usize| {
        rect(
            left + col * pitch_x,
            top + row as f64 * pitch_y,
            cols * pitch_x - QWERTY_GAP,
            QWERTY_KEY_H,
        )
    };

    let mut keys = Vec::with_capacity(35);
    for (row, (letters, offset)) in [("qwertyuiop", 0.0), ("asdfghjkl", 0.5), ("zxcvbnm", 1.5)]
        .into_iter()
        .enumerate()
    {
        for (col, c) in letters.chars().enumerate() {
            keys.push(KeyDef::new(c.to_string(), span(offset + col as f64, 1.0, row)).with_tap(c));
        }
    }
    keys.push(KeyDef::new("shift", span(0.0, 1.5, 2)));
    keys.push(KeyDef::new("delete", span(8.5, 1.5, 2)));
    keys.push(KeyDef::new("number", span(0.0, 2.0, 3)));
    keys.push(KeyDef::new("comma", span(2.0, 1.0, 3)).with_tap(','));
    keys.push(KeyDef::new("space", span(3.0, 4.0, 3)).with_tap(' '));
    keys.push(KeyDef::new("period", span(7.0, 1.0, 3)).with_tap('.'));
    keys.push(KeyDef::new("enter", span(8.0, 2.0, 3)));

    KeyboardLayout {
        name: "QWERTY".into(),
        kind: LayoutKind::Qwerty,
        screen: rect(0.0, 0.0, SCREEN_WIDTH_MM, SCREEN_HEIGHT_MM),
        keys,
        home_key: "space".into(),
    }
}

fn three_by_four<T: Scalar>() -> KeyboardLayout<T> {
    let left = (SCREEN_WIDTH_MM - 3.0 * KEYPAD_KEY_W) / 2.0;
    let top = SCREEN_HEIGHT_MM - 4.0 * KEYPAD_KEY_H;
    let ids = ["1", "2", "3", "4", "5", "6", "7", "8", "9", "*", "0", "#"];

    let keys = ids
        .iter()
        .enumerate()
        .map(|(i, &id)| {
            let bounds = rect(
                left + (i % 3) as f64 * KEYPAD_KEY_W,
                top + (i / 3) as f64 * KEYPAD_KEY_H,
                KEYPAD_KEY_W,
                KEYPAD_KEY_H,
            );
            let key = KeyDef::new(id, bounds);
            match id {
                "1" => key.with_multitap(['.', ',']),
                "0" => key.with_tap(' '),
                _ => match E161_GROUPS.iter().find(|(k, _)| *k == id) {
                    Some((_, letters)) => key.with_multitap(letters.chars()),
                    None => key,
                },
            }
        })
        .collect();

    KeyboardLayout {
        name: "3x4".into(),
        kind: LayoutKind::ThreeByFour,
        screen: rect(0.0, 0.0, SCREEN_WIDTH_MM, SCREEN_HEIGHT_MM),
        keys,
        home_key: "0".into(),
    }
}
