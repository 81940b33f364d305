use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, Context};
use keysim::analytics::{
    aggregate_sessions, load_session_log, read_observations_csv, transcribe_session, write_curve_csv,
};
use keysim::{
    builtin_by_name, calibrate, compare, export_layout, load_layout, normalize_text, predict_text, write_trace,
    AnalyticsConfig, CalibrationOptions, Formulation, KeyboardLayout, MotorParams, Observation, ParamField,
    SessionLog,
};

use crate::args::{Cli, Command, Format, FormulationArg, LayoutAction, ParamArgs, TextSource};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    fn input(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_INPUT,
            error: error.into(),
        }
    }

    fn invalid(message: impl fmt::Display) -> Self {
        Self {
            code: EXIT_INVALID,
            error: anyhow!("{message}"),
        }
    }
}

impl From<keysim::Error> for Failure {
    fn from(e: keysim::Error) -> Self {
        Failure::input(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e)
    }
}

type CmdResult = Result<(), Failure>;

pub fn execute(cli: Cli, out: &mut dyn Write) -> CmdResult {
    match cli.command {
        Command::Predict {
            layout,
            text,
            trace,
            format,
            params,
        } => predict(&layout, &text, trace.as_deref(), format, &params, out),
        Command::Compare {
            layouts,
            text,
            format,
            params,
        } => compare_cmd(&layouts, &text, format, &params, out),
        Command::Layout { action } => layout_cmd(action, out),
        Command::Analyze {
            logs,
            layout_files,
            curve,
            slide_threshold,
            horizontal_tolerance,
            multitap_timeout,
            format,
        } => {
            let config = AnalyticsConfig {
                slide_threshold_mm: slide_threshold,
                horizontal_tolerance_mm: horizontal_tolerance,
                multitap_timeout_ms: multitap_timeout,
            };
            analyze(&logs, &layout_files, curve.as_deref(), &config, format, out)
        }
        Command::Calibrate {
            observations,
            free,
            output,
            max_sweeps,
            params,
        } => calibrate_cmd(&observations, &free, output.as_deref(), max_sweeps, &params, out),
    }
}

/// A builtin name or a layout file; files must validate.
fn resolve_layout(spec: &str) -> Result<KeyboardLayout, Failure> {
    if let Ok(layout) = builtin_by_name(spec) {
        return Ok(layout);
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(Failure::input(anyhow!(
            "unknown layout '{spec}': not a builtin (qwert, qwerty, 3x4) or a file"
        )));
    }
    let layout: KeyboardLayout = load_layout(path).with_context(|| format!("reading layout {spec}"))?;
    let report = layout.validate();
    if !report.ok() {
        return Err(Failure::invalid(format!("layout {spec} is invalid:\n{report}")));
    }
    Ok(layout)
}

fn read_text(source: &TextSource) -> Result<String, Failure> {
    match (&source.text, &source.text_file) {
        (Some(text), _) => Ok(text.clone()),
        (None, Some(path)) => {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::input)
        }
        (None, None) => Err(Failure {
            code: EXIT_USAGE,
            error: anyhow!("one of --text or --text-file is required"),
        }),
    }
}

fn motor_params(args: &ParamArgs) -> Result<MotorParams, Failure> {
    let mut params = match &args.file {
        Some(path) => MotorParams::load(path).with_context(|| format!("reading params {}", path.display()))?,
        None => MotorParams::default(),
    };
    let overrides = [
        (ParamField::Im, args.im),
        (ParamField::TapCost, args.tap_cost),
        (ParamField::SlideExtra, args.slide_extra),
        (ParamField::ThinkQwert, args.think_qwert),
        (ParamField::ThinkQwerty, args.think_qwerty),
        (ParamField::Think3x4, args.think_3x4),
    ];
    for (field, value) in overrides {
        if let Some(v) = value {
            params.set(field, v);
        }
    }
    if let Some(f) = args.formulation {
        params.formulation = match f {
            FormulationArg::Welford => Formulation::WelfordHalf,
            FormulationArg::Shannon => Formulation::ShannonOne,
        };
    }
    if args.no_commit_pause {
        params.multitap_commit_pause = false;
    }
    params.validate()?;
    Ok(params)
}

fn predict(
    layout: &str,
    text: &TextSource,
    trace: Option<&Path>,
    format: Format,
    params: &ParamArgs,
    out: &mut dyn Write,
) -> CmdResult {
    let layout = resolve_layout(layout)?;
    let params = motor_params(params)?;
    let timeline = predict_text(&read_text(text)?, &layout, &params)?;

    if let Some(path) = trace {
        let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_trace(&timeline, file)?;
    }
    match format {
        Format::Text => {
            writeln!(out, "layout: {}", timeline.layout_name)?;
            writeln!(out, "symbols: {}", timeline.symbol_count)?;
            writeln!(out, "total: {} s", timeline.total.secs_string())?;
            writeln!(out, "total_ms: {}", timeline.total.ms_string())?;
            writeln!(out, "predicted wpm: {:.3}", timeline.predicted_wpm)?;
        }
        Format::Csv => {
            writeln!(out, "layout,symbols,total_s,total_ms,predicted_wpm")?;
            writeln!(
                out,
                "{},{},{},{},{:.3}",
                timeline.layout_name,
                timeline.symbol_count,
                timeline.total.secs_string(),
                timeline.total.ms_string(),
                timeline.predicted_wpm
            )?;
        }
    }
    Ok(())
}

fn compare_cmd(
    layouts: &[String],
    text: &TextSource,
    format: Format,
    params: &ParamArgs,
    out: &mut dyn Write,
) -> CmdResult {
    let layouts = layouts
        .iter()
        .map(|spec| resolve_layout(spec.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let params = motor_params(params)?;
    let rows = compare(&read_text(text)?, &layouts, &params)?;
    match format {
        Format::Text => {
            let width = rows.iter().map(|r| r.layout_name.len()).max().unwrap_or(6).max(6);
            writeln!(out, "rank  {:<width$}  {:>9}  {:>13}", "layout", "total_s", "predicted_wpm")?;
            for (i, row) in rows.iter().enumerate() {
                writeln!(
                    out,
                    "{:<4}  {:<width$}  {:>9}  {:>13.3}",
                    i + 1,
                    row.layout_name,
                    row.total.secs_string(),
                    row.predicted_wpm
                )?;
            }
        }
        Format::Csv => {
            writeln!(out, "rank,layout,total_s,predicted_wpm")?;
            for (i, row) in rows.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{},{:.3}",
                    i + 1,
                    row.layout_name,
                    row.total.secs_string(),
                    row.predicted_wpm
                )?;
            }
        }
    }
    Ok(())
}

fn layout_cmd(action: LayoutAction, out: &mut dyn Write) -> CmdResult {
    match action {
        LayoutAction::Show { layout } => {
            let layout = resolve_layout(&layout)?;
            writeln!(out, "name: {}", layout.name)?;
            writeln!(out, "kind: {}", layout.kind)?;
            writeln!(out, "screen: {} x {} mm", layout.screen.width, layout.screen.height)?;
            writeln!(out, "home: {}", layout.home_key)?;
            writeln!(out, "{:<8} {:>8} {:>8} {:>7} {:>7}  bindings", "key", "x_mm", "y_mm", "w_mm", "h_mm")?;
            for key in &layout.keys {
                let mut bindings = Vec::new();
                if let Some(c) = key.tap_symbol {
                    bindings.push(format!("tap {c:?}"));
                }
                if let Some(c) = key.slide_symbol {
                    bindings.push(format!("slide {c:?}"));
                }
                if key.is_multitap() {
                    bindings.push(format!("multitap {:?}", key.multitap_symbols.iter().collect::<String>()));
                }
                let b = key.bounds;
                writeln!(
                    out,
                    "{:<8} {:>8.3} {:>8.3} {:>7.3} {:>7.3}  {}",
                    key.id,
                    b.origin.x,
                    b.origin.y,
                    b.width,
                    b.height,
                    bindings.join(", ")
                )?;
            }
            Ok(())
        }
        LayoutAction::Validate { layout } => {
            let layout: KeyboardLayout = match builtin_by_name(&layout) {
                Ok(l) => l,
                Err(_) => load_layout(&layout).with_context(|| format!("reading layout {layout}"))?,
            };
            let report = layout.validate();
            write!(out, "{report}")?;
            if report.ok() {
                Ok(())
            } else {
                let errors = report.errors().count();
                Err(Failure::invalid(format!("layout '{}' has {errors} error(s)", layout.name)))
            }
        }
        LayoutAction::Export { layout, output } => {
            let json = export_layout(&resolve_layout(&layout)?);
            match output {
                Some(path) => fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?,
                None => out.write_all(json.as_bytes())?,
            }
            Ok(())
        }
    }
}

fn analyze(
    logs: &[std::path::PathBuf],
    layout_files: &[std::path::PathBuf],
    curve: Option<&Path>,
    config: &AnalyticsConfig,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let extra = layout_files
        .iter()
        .map(|p| resolve_layout(&p.to_string_lossy()))
        .collect::<Result<Vec<_>, _>>()?;
    let find_layout = |name: &str| -> Result<KeyboardLayout, Failure> {
        if let Some(l) = extra.iter().find(|l| l.name == name) {
            return Ok(l.clone());
        }
        builtin_by_name(name)
            .map_err(|_| Failure::input(anyhow!("no layout named '{name}'; pass it with --layout-file")))
    };

    let mut scored = Vec::with_capacity(logs.len());
    for path in logs {
        let log: SessionLog = load_session_log(path).with_context(|| format!("reading {}", path.display()))?;
        let layout = find_layout(&log.layout_name)?;
        let result =
            transcribe_session(&log, &layout, config).with_context(|| format!("analyzing {}", path.display()))?;
        scored.push((path, log, result));
    }

    match format {
        Format::Text => {
            for (path, log, r) in &scored {
                writeln!(
                    out,
                    "{}: layout={} subject={} session={} wpm={:.3} errors={} transcribed={:?}",
                    path.display(),
                    log.layout_name,
                    log.subject_id,
                    log.session_index,
                    r.wpm,
                    r.error_distance,
                    r.transcribed
                )?;
            }
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            writer
                .write_record(["file", "layout", "subject_id", "session_index", "wpm", "error_distance", "transcribed"])
                .context("writing CSV")?;
            for (path, log, r) in &scored {
                writer
                    .write_record([
                        path.display().to_string(),
                        log.layout_name.clone(),
                        log.subject_id.clone(),
                        log.session_index.to_string(),
                        format!("{:.3}", r.wpm),
                        r.error_distance.to_string(),
                        r.transcribed.clone(),
                    ])
                    .context("writing CSV")?;
            }
            writer.flush()?;
        }
    }

    if let Some(path) = curve {
        let points = aggregate_sessions(scored.iter().map(|(_, log, r)| (log, r)));
        let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_curve_csv(&points, file)?;
    }
    Ok(())
}

fn calibrate_cmd(
    observations: &Path,
    free: &[String],
    output: Option<&Path>,
    max_sweeps: usize,
    params: &ParamArgs,
    out: &mut dyn Write,
) -> CmdResult {
    let free = free
        .iter()
        .map(|name| name.trim().parse::<ParamField>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure {
            code: EXIT_USAGE,
            error: e.into(),
        })?;
    let seed = motor_params(params)?;
    let records = read_observations_csv(observations)
        .with_context(|| format!("reading observations {}", observations.display()))?;

    let mut layouts = Vec::with_capacity(records.len());
    let mut texts = Vec::with_capacity(records.len());
    for record in &records {
        layouts.push(resolve_layout(&record.layout)?);
        let raw = fs::read_to_string(&record.text_file)
            .with_context(|| format!("reading {}", record.text_file.display()))?;
        texts.push(normalize_text(&raw)?);
    }
    let obs: Vec<Observation<'_, f64>> = records
        .iter()
        .zip(&layouts)
        .zip(texts)
        .map(|((record, layout), text)| Observation {
            text,
            layout,
            observed_ms: record.observed_seconds * 1000.0,
        })
        .collect();

    let options = CalibrationOptions {
        max_sweeps,
        ..Default::default()
    };
    let report = calibrate(&obs, &free, &seed, &options)?;

    match output {
        Some(path) => {
            fs::write(path, report.params.to_json()).with_context(|| format!("writing {}", path.display()))?;
            writeln!(
                out,
                "sweeps: {}  residual: {:.6} -> {:.6} ms^2",
                report.sweeps, report.initial_residual, report.final_residual
            )?;
            for field in &report.free {
                writeln!(out, "{field} = {:.6}", report.params.get(*field))?;
            }
            writeln!(out, "{:<10} {:>12} {:>12} {:>8}", "layout", "observed_s", "predicted_s", "error_%")?;
            for fit in &report.fits {
                let error = if fit.observed_ms != 0.0 {
                    format!("{:.3}", (fit.predicted_ms - fit.observed_ms) / fit.observed_ms * 100.0)
                } else {
                    "-".to_owned()
                };
                writeln!(
                    out,
                    "{:<10} {:>12.3} {:>12.3} {:>8}",
                    fit.layout_name,
                    fit.observed_ms / 1000.0,
                    fit.predicted_ms / 1000.0,
                    error
                )?;
            }
        }
        None => out.write_all(report.params.to_json().as_bytes())?,
    }
    Ok(())
}
