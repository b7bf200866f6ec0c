//! Command-line front end.
//!
//! Every subcommand is a thin wrapper over library calls; `run` takes its
//! streams as arguments so tests can drive it in-process.

use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use nerkit_core::harness::MatrixOptions;
use nerkit_core::{
    dataset_stats, evaluate, lowercase_dataset, train, Mode, Split, TrainConfig,
};
use serde_json::json;

use crate::annotate::annotate;
use crate::dataset_io::load_dataset;
use crate::harness::{run_matrix, MatrixSpec};
use crate::model_file::{load_model, save_model};
use crate::report::{render_eval_report, render_matrix, Format};
use crate::server::{router, serve, Registry};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nerkit", version, about = "Train, evaluate and serve IOB sequence taggers")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a tagger on one or more dataset directories.
    Train(TrainArgs),
    /// Score a model on a dataset split.
    Evaluate(EvaluateArgs),
    /// Tag raw text (from --text, or one sentence per stdin line).
    Predict(PredictArgs),
    /// Print sentence counts and entity-type count of a dataset.
    Stats(StatsArgs),
    /// Run a cross-domain train × test matrix.
    Matrix(MatrixArgs),
    /// Serve predictions over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct TrainFlags {
    #[arg(long, default_value_t = TrainConfig::DEFAULT_EPOCHS,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub epochs: u32,
    /// Shuffle seed. Falls back to $NERKIT_SEED, then 42.
    #[arg(long, env = "NERKIT_SEED", default_value_t = TrainConfig::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Comma-separated dataset directories; train splits are concatenated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub data: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub flags: TrainFlags,
    #[arg(long)]
    pub lowercase: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = "test")]
    pub split: Split,
    #[arg(long)]
    pub type_ignored: bool,
    #[arg(long, default_value = "json", value_parser = ["json", "tsv"])]
    pub format: String,
    /// Lowercase the evaluation data (ignored for models that lowercase).
    #[arg(long)]
    pub lowercase: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub text: Option<String>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub data: PathBuf,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long, required = true, value_delimiter = ',')]
    pub data: Vec<PathBuf>,
    #[arg(long)]
    pub include_all: bool,
    #[arg(long)]
    pub type_ignored: bool,
    #[arg(long)]
    pub lowercase: bool,
    #[arg(long)]
    pub out: PathBuf,
    /// markdown, tsv or json; inferred from the --out extension by default.
    #[arg(long)]
    pub format: Option<Format>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Run manifest path; defaults to <out>.manifest.json.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[command(flatten)]
    pub flags: TrainFlags,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Comma-separated name=path pairs; the first is the default model.
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_model_spec)]
    pub model: Vec<(String, PathBuf)>,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    /// Directory with the web demo bundle, served at /.
    #[arg(long = "static")]
    pub static_dir: Option<PathBuf>,
}

fn parse_model_spec(s: &str) -> std::result::Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => {
            Ok((name.to_string(), PathBuf::from(path)))
        }
        _ => Err(format!("expected name=path, got {s:?}")),
    }
}

fn mode(type_ignored: bool) -> Mode {
    if type_ignored {
        Mode::TypeIgnored
    } else {
        Mode::TypeAware
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn format_for(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("tsv") => Format::Tsv,
        _ => Format::Markdown,
    }
}

fn cmd_train(args: &TrainArgs, err: &mut dyn Write) -> Result<()> {
    let datasets = args
        .data
        .iter()
        .map(load_dataset)
        .collect::<Result<Vec<_>>>()?;
    let config = TrainConfig {
        epochs: args.flags.epochs,
        seed: args.flags.seed,
        lowercase: args.lowercase,
        ..TrainConfig::default()
    };
    let mut model = train(&datasets, &config)?;
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        model.meta_mut().created_at = Some(epoch);
    }
    save_model(&model, &args.out)?;
    let _ = writeln!(
        err,
        "trained on {} ({} labels, {} features) -> {}",
        model.meta().trained_on.join(","),
        model.labels().len(),
        model.weights().len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let model = load_model(&args.model)?;
    let mut dataset = load_dataset(&args.data)?;
    if args.lowercase {
        if model.config().lowercase {
            let _ = writeln!(
                err,
                "warning: model already lowercases its input; ignoring --lowercase"
            );
        } else {
            dataset = lowercase_dataset(&dataset);
        }
    }
    let sentences = dataset.split(args.split).ok_or_else(|| Error::NoSuchSplit {
        path: args.data.clone(),
        split: args.split,
    })?;
    let report = evaluate(&model, sentences, mode(args.type_ignored))?;
    let format = if args.format == "tsv" { Format::Tsv } else { Format::Json };
    let text = render_eval_report(&report, format);
    match &args.out {
        Some(path) => write_file(path, text.as_bytes()),
        None => out.write_all(text.as_bytes()).map_err(stdout_err),
    }
}

fn cmd_predict(
    args: &PredictArgs,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let model = load_model(&args.model)?;
    let mut emit = |text: &str| -> Result<()> {
        if text.trim().is_empty() {
            return Ok(());
        }
        let annotation = annotate(text, &model)?;
        let line = serde_json::to_string(&annotation)?;
        writeln!(out, "{line}").map_err(stdout_err)
    };
    match &args.text {
        Some(text) => emit(text),
        None => {
            for (n, line) in input.lines().enumerate() {
                let line = line.map_err(|e| Error::io("<stdin>", e))?;
                if let Err(e) = emit(&line) {
                    let _ = writeln!(err, "line {}: {e}", n + 1);
                    return Err(e);
                }
            }
            Ok(())
        }
    }
}

fn cmd_stats(args: &StatsArgs, out: &mut dyn Write) -> Result<()> {
    let dataset = load_dataset(&args.data)?;
    let stats = dataset_stats(&dataset);
    let doc = json!({
        "name": dataset.name(),
        "sentences": stats.sentences,
        "entity_types": stats.entity_types,
        "labels": dataset.labels(),
    });
    let text = serde_json::to_string_pretty(&doc)?;
    writeln!(out, "{text}").map_err(stdout_err)
}

fn cmd_matrix(args: &MatrixArgs, err: &mut dyn Write) -> Result<()> {
    let spec = MatrixSpec {
        dataset_dirs: args.data.clone(),
        options: MatrixOptions {
            mode: mode(args.type_ignored),
            lowercase: args.lowercase,
            include_all_row: args.include_all,
            train: TrainConfig {
                epochs: args.flags.epochs,
                seed: args.flags.seed,
                ..TrainConfig::default()
            },
        },
    };
    let run = run_matrix(&spec, args.jobs)?;
    let format = args.format.unwrap_or_else(|| format_for(&args.out));
    write_file(&args.out, render_matrix(&run.matrix, format).as_bytes())?;
    let manifest_path = args.manifest.clone().unwrap_or_else(|| {
        let mut p = args.out.clone().into_os_string();
        p.push(".manifest.json");
        PathBuf::from(p)
    });
    let manifest = serde_json::to_string_pretty(&run.manifest)?;
    write_file(&manifest_path, manifest.as_bytes())?;
    let _ = writeln!(
        err,
        "{}x{} matrix -> {} (manifest {})",
        run.matrix.rows.len(),
        run.matrix.cols.len(),
        args.out.display(),
        manifest_path.display()
    );
    Ok(())
}

fn cmd_serve(args: &ServeArgs) -> Result<()> {
    let registry = Arc::new(Registry::load(&args.model)?);
    let app = router(registry, args.static_dir.clone());
    let addr = SocketAddr::new(args.host, args.port);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Error::io("<runtime>", e))?;
    runtime.block_on(serve(addr, app))
}

/// Parses `argv` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(argv: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Train(a) => cmd_train(a, err),
        Command::Evaluate(a) => cmd_evaluate(a, out, err),
        Command::Predict(a) => cmd_predict(a, input, out, err),
        Command::Stats(a) => cmd_stats(a, out),
        Command::Matrix(a) => cmd_matrix(a, err),
        Command::Serve(a) => cmd_serve(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Error::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}
