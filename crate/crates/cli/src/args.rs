use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "keysim", version, about = "Soft-keyboard entry-time prediction and typing-session analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Predict entry time for a text on one layout.
    Predict {
        /// Builtin layout (qwert, qwerty, 3x4) or path to a layout file.
        #[arg(long)]
        layout: String,
        #[command(flatten)]
        text: TextSource,
        /// Write the per-step trace as CSV.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Rank several layouts by predicted entry time.
    Compare {
        /// Comma-separated builtin names or layout file paths.
        #[arg(long, value_delimiter = ',', required = true)]
        layouts: Vec<String>,
        #[command(flatten)]
        text: TextSource,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Inspect, validate or export layouts.
    Layout {
        #[command(subcommand)]
        action: LayoutAction,
    },
    /// Transcribe and score session logs; optionally write learning curves.
    Analyze {
        /// Session log files (version 1).
        #[arg(required = true)]
        logs: Vec<PathBuf>,
        /// Extra layout files, matched to logs by layout name.
        #[arg(long = "layout-file", value_name = "FILE")]
        layout_files: Vec<PathBuf>,
        /// Write the learning-curve CSV here.
        #[arg(long, value_name = "FILE")]
        curve: Option<PathBuf>,
        #[arg(long, default_value_t = 4.0)]
        slide_threshold: f64,
        #[arg(long, default_value_t = 6.0)]
        horizontal_tolerance: f64,
        #[arg(long, default_value_t = 1000.0)]
        multitap_timeout: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Fit motor parameters to observed entry times.
    Calibrate {
        /// CSV with columns layout,text_file,observed_seconds.
        observations: PathBuf,
        /// Comma-separated parameter names to fit.
        #[arg(long, value_delimiter = ',', required = true)]
        free: Vec<String>,
        /// Write fitted parameters here; without it they go to standard output.
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        max_sweeps: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum LayoutAction {
    Show { layout: String },
    Validate { layout: String },
    Export {
        layout: String,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct TextSource {
    #[arg(long)]
    pub text: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub text_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Base parameters file (JSON); flags below override its fields.
    #[arg(long = "params", value_name = "FILE")]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub im: Option<f64>,
    #[arg(long)]
    pub tap_cost: Option<f64>,
    #[arg(long)]
    pub slide_extra: Option<f64>,
    #[arg(long)]
    pub think_qwert: Option<f64>,
    #[arg(long)]
    pub think_qwerty: Option<f64>,
    #[arg(long = "think-3x4")]
    pub think_3x4: Option<f64>,
    #[arg(long, value_enum)]
    pub formulation: Option<FormulationArg>,
    /// Disable the extra Think between same-key multi-tap letters.
    #[arg(long)]
    pub no_commit_pause: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormulationArg {
    Welford,
    Shannon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}
