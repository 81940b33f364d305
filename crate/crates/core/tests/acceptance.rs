//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p keysim --test acceptance -- --nocapture --test-threads=1`
//! to see them all.

use std::time::{Duration, Instant};

use keysim::analytics::{synthesize_log, transcribe_session, AnalyticsConfig, SessionMeta};
use keysim::{
    builtin_layout, calibrate, compare, fitts_mt, index_of_difficulty, predict_text, session_wpm, write_trace,
    CalibrationOptions, Formulation, KeyboardLayout, LayoutKind, MotorParams, Observation, ParamField,
    PrimitiveAction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STIMULUS: &str = "thanks for your dinner. take care.";

/// Predicted totals in seconds reported for the stimulus.
const REPORTED_QWERTY_S: f64 = 16.628;
const REPORTED_KEYPAD_S: f64 = 19.318;
const REPORTED_QWERT_S: f64 = 10.061;

fn report(name: &str, pass: bool, detail: impl std::fmt::Display) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] {name}: {detail}");
}

fn builtins() -> [KeyboardLayout; 3] {
    [
        builtin_layout(LayoutKind::Qwert).unwrap(),
        builtin_layout(LayoutKind::Qwerty).unwrap(),
        builtin_layout(LayoutKind::ThreeByFour).unwrap(),
    ]
}

#[test]
fn ordering_with_default_params() {
    let start = Instant::now();
    let [qwert, qwerty, keypad] = builtins();
    let p = MotorParams::default();
    let t_qwert = predict_text(STIMULUS, &qwert, &p).unwrap().total;
    let t_qwerty = predict_text(STIMULUS, &qwerty, &p).unwrap().total;
    let t_keypad = predict_text(STIMULUS, &keypad, &p).unwrap().total;
    let elapsed = start.elapsed();

    let ordered = t_qwert < t_qwerty && t_qwerty < t_keypad;
    let fast = elapsed < Duration::from_secs(1);
    report(
        "ordering QWERT < QWERTY < 3x4 (defaults)",
        ordered && fast,
        format!(
            "QWERT {} s, QWERTY {} s, 3x4 {} s in {elapsed:?}",
            t_qwert.secs_string(),
            t_qwerty.secs_string(),
            t_keypad.secs_string()
        ),
    );
    assert!(fast, "prediction took {elapsed:?}");
    assert!(
        ordered,
        "expected QWERT < QWERTY < 3x4, got {} / {} / {}",
        t_qwert.secs_string(),
        t_qwerty.secs_string(),
        t_keypad.secs_string()
    );
}

#[test]
fn calibrated_reproduction_within_five_percent() {
    let start = Instant::now();
    let layouts = builtins();
    let reported = [REPORTED_QWERT_S, REPORTED_QWERTY_S, REPORTED_KEYPAD_S];
    let obs: Vec<_> = layouts
        .iter()
        .zip(reported)
        .map(|(layout, secs)| Observation {
            text: STIMULUS.into(),
            layout,
            observed_ms: secs * 1000.0,
        })
        .collect();
    let free = [
        ParamField::ThinkQwerty,
        ParamField::ThinkQwert,
        ParamField::Think3x4,
        ParamField::TapCost,
        ParamField::SlideExtra,
    ];
    let fitted = calibrate(&obs, &free, &MotorParams::default(), &CalibrationOptions::default()).unwrap();
    let elapsed = start.elapsed();

    let mut worst = 0.0f64;
    for (layout, secs) in layouts.iter().zip(reported) {
        let predicted = predict_text(STIMULUS, layout, &fitted.params).unwrap().total.as_secs();
        worst = worst.max((predicted - secs).abs() / secs);
    }
    let pass = worst <= 0.05 && elapsed < Duration::from_secs(10);
    report(
        "calibrated reproduction of reported totals (±5%)",
        pass,
        format!(
            "worst relative error {:.4}% after {} sweeps in {elapsed:?}",
            worst * 100.0,
            fitted.sweeps
        ),
    );
    assert!(worst <= 0.05, "worst relative error {worst}");
    assert!(elapsed < Duration::from_secs(10), "calibration took {elapsed:?}");
}

#[test]
fn fitts_unit_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0f17_75);
    let mut failures = Vec::new();

    for w in [0.5, 5.1, 10.2, 18.0, 33.3] {
        if index_of_difficulty(1.5 * w, w, Formulation::WelfordHalf).unwrap() != 1.0 {
            failures.push(format!("ID(1.5W, W={w}) != 1"));
        }
        if index_of_difficulty(0.0, w, Formulation::WelfordHalf).unwrap() != 0.0 {
            failures.push(format!("ID(0, W={w}) != 0"));
        }
        if index_of_difficulty(w, w, Formulation::ShannonOne).unwrap() != 1.0 {
            failures.push(format!("Shannon ID(W, W={w}) != 1"));
        }
    }

    let samples = 2000;
    let mut violations = 0;
    for _ in 0..samples {
        let a: f64 = rng.gen_range(0.0..150.0);
        let w: f64 = rng.gen_range(0.1..40.0);
        let da: f64 = rng.gen_range(0.0..30.0);
        let dw: f64 = rng.gen_range(0.0..30.0);
        for formulation in [Formulation::WelfordHalf, Formulation::ShannonOne] {
            let p = MotorParams {
                formulation,
                ..Default::default()
            };
            let base = fitts_mt(a, w, &p).unwrap();
            if fitts_mt(a + da, w, &p).unwrap() < base || fitts_mt(a, w + dw, &p).unwrap() > base {
                violations += 1;
            }
        }
    }
    if violations > 0 {
        failures.push(format!("{violations} monotonicity violations"));
    }

    report(
        "Fitts unit suite",
        failures.is_empty(),
        format!("{samples} random (A, W) pairs, {violations} violations; {failures:?}"),
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn multitap_matches_e161() {
    // Independent copy of the ITU E.161 letter assignment.
    const E161: [(char, &str); 26] = [
        ('a', "2"), ('b', "2"), ('c', "2"), ('d', "3"), ('e', "3"), ('f', "3"),
        ('g', "4"), ('h', "4"), ('i', "4"), ('j', "5"), ('k', "5"), ('l', "5"),
        ('m', "6"), ('n', "6"), ('o', "6"), ('p', "7"), ('q', "7"), ('r', "7"),
        ('s', "7"), ('t', "8"), ('u', "8"), ('v', "8"), ('w', "9"), ('x', "9"),
        ('y', "9"), ('z', "9"),
    ];
    let keypad: KeyboardLayout = builtin_layout(LayoutKind::ThreeByFour).unwrap();
    let mut mismatches = Vec::new();
    for (letter, key) in E161 {
        // Position within the group = number of earlier letters on the same key.
        let position = E161.iter().take_while(|(l, _)| *l != letter).filter(|(_, k)| *k == key).count();
        let actions = keypad.resolve_symbol(letter).unwrap();
        let all_taps_on_key = actions
            .iter()
            .all(|a| matches!(a, PrimitiveAction::PointTap { target, .. } if target == key));
        if actions.len() != position + 1 || !all_taps_on_key {
            mismatches.push(letter);
        }
    }
    let s_taps = keypad.resolve_symbol('s').unwrap();
    let s_ok = s_taps.len() == 4 && s_taps.iter().all(|a| a.target() == Some("7"));

    let pass = mismatches.is_empty() && s_ok;
    report(
        "multi-tap resolution matches E.161",
        pass,
        format!("26 letters checked, mismatches {mismatches:?}; 's' -> {} taps on 7", s_taps.len()),
    );
    assert!(pass);
}

#[test]
fn wpm_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let exact = session_wpm(300, 60_000.0).unwrap() == 60.0;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let chars: usize = rng.gen_range(1..5000);
        let ms: f64 = rng.gen_range(1.0..3_600_000.0);
        let expected = 12.0 * chars as f64 / (ms / 1000.0);
        let got = session_wpm(chars, ms).unwrap();
        worst = worst.max(((got - expected) / expected).abs());
    }
    let pass = exact && worst <= 1e-9;
    report(
        "wpm = 12 c / seconds",
        pass,
        format!("wpm(300, 60 s) exact: {exact}; worst relative deviation {worst:e} over 100 pairs"),
    );
    assert!(pass);
}

fn random_text(rng: &mut ChaCha8Rng) -> String {
    const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz .,";
    loop {
        let len = rng.gen_range(1..=40);
        let raw: String = (0..len)
            .map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())] as char)
            .collect();
        if let Ok(text) = keysim::normalize_text(&raw) {
            return text;
        }
    }
}

#[test]
fn session_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let config = AnalyticsConfig::default();
    let params = MotorParams::default();
    let layouts = builtins();
    let mut failures = Vec::new();
    let cases = 200;
    for _ in 0..cases {
        let text = random_text(&mut rng);
        for layout in &layouts {
            let timeline = predict_text(&text, layout, &params).unwrap();
            let log = synthesize_log(&timeline, layout, &config, SessionMeta::for_stimulus(text.clone())).unwrap();
            let result = transcribe_session(&log, layout, &config).unwrap();
            if result.transcribed != text || result.error_distance != 0 {
                failures.push((layout.name.clone(), text.clone(), result.transcribed));
            }
        }
    }
    report(
        "simulate -> synthesize log -> transcribe round trip",
        failures.is_empty(),
        format!("{cases} strings x 3 layouts, {} mismatches", failures.len()),
    );
    assert!(failures.is_empty(), "{:?}", &failures[..failures.len().min(5)]);
}

/// Everything the predict, compare and calibrate paths emit, rendered to text.
fn render_all() -> String {
    let layouts = builtins();
    let params = MotorParams::default();
    let mut out = String::new();
    for layout in &layouts {
        let timeline = predict_text(STIMULUS, layout, &params).unwrap();
        let mut trace = Vec::new();
        write_trace(&timeline, &mut trace).unwrap();
        out.push_str(&String::from_utf8(trace).unwrap());
        out.push_str(&format!("{} {:.6}\n", timeline.total.ms_string(), timeline.predicted_wpm));
    }
    for row in compare(STIMULUS, &layouts, &params).unwrap() {
        out.push_str(&format!("{} {} {:.6}\n", row.layout_name, row.total.ms_string(), row.predicted_wpm));
    }
    let obs: Vec<_> = layouts
        .iter()
        .zip([REPORTED_QWERT_S, REPORTED_QWERTY_S, REPORTED_KEYPAD_S])
        .map(|(layout, s)| Observation {
            text: STIMULUS.into(),
            layout,
            observed_ms: s * 1000.0,
        })
        .collect();
    let fitted = calibrate(
        &obs,
        &[ParamField::Im, ParamField::TapCost, ParamField::Think3x4],
        &params,
        &CalibrationOptions::default(),
    )
    .unwrap();
    out.push_str(&fitted.params.to_json());
    out.push_str(&format!("{:?}\n", fitted.residual_history));
    out
}

#[test]
fn determinism() {
    let first = render_all();
    let second = render_all();
    let pass = first == second;
    report(
        "predict/compare/calibrate byte-identical across runs",
        pass,
        format!("{} bytes compared", first.len()),
    );
    assert!(pass);
}
