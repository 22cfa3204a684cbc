//! `isol` command implementation, kept out of `main.rs` so tests can drive
//! it with in-memory streams.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use isol_core::misa::{self, BUILTIN_REF};
use isol_core::{
    bind_assessment, evaluate, export_schema, gap_report, parse_schema, parse_scores, render_chart_data, render_result,
    render_sensitivities, sensitivities, sensitivity, validate_schema, Assessment, Format, FrameworkSchema,
    RenderOptions, ScoresFormat,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "isol", version, about = "Six-layer security readiness assessment")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an assessment and render node, layer and overall scores.
    Assess(ScoredArgs),
    /// Check a schema, and optionally a score file against it.
    Validate(ValidateArgs),
    /// Export a schema document.
    Schema(SchemaArgs),
    /// Print how much one point on each leaf moves the overall score.
    Sensitivity(SensitivityArgs),
    /// Emit ideal/achievement/priority rows per layer, highest priority first.
    Chart(ScoredArgs),
}

#[derive(Debug, Args)]
pub struct SchemaArgs {
    /// `builtin:misa` or a path to a schema JSON file.
    #[arg(long, default_value = BUILTIN_REF)]
    pub schema: String,
    /// Write the document here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long, default_value_t = Format::Table)]
    pub format: Format,
    /// Decimal places for displayed values (0-6).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=6))]
    pub precision: u8,
}

impl RenderArgs {
    fn options(&self) -> RenderOptions {
        RenderOptions::new(self.format, self.precision.into()).expect("clap bounds precision")
    }
}

#[derive(Debug, Args)]
pub struct ScoredArgs {
    #[command(flatten)]
    pub schema: SchemaArgs,
    /// Score file: CSV with a `node_id,score` header, or JSON.
    #[arg(long)]
    pub scores: PathBuf,
    #[command(flatten)]
    pub render: RenderArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub schema: SchemaArgs,
    #[arg(long)]
    pub scores: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub schema: SchemaArgs,
    /// Optional score file; when given it must bind to the schema.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Report a single leaf instead of all of them.
    #[arg(long)]
    pub leaf: Option<String>,
    #[command(flatten)]
    pub render: RenderArgs,
}

/// A failed command: the exit status and one diagnostic line per problem.
#[derive(Debug)]
struct Failure {
    status: u8,
    lines: Vec<String>,
}

impl Failure {
    fn invalid<T: Display>(items: impl IntoIterator<Item = T>) -> Self {
        Failure { status: EXIT_INVALID, lines: items.into_iter().map(|v| v.to_string()).collect() }
    }

    fn input(path: &Path, err: impl Display) -> Self {
        Failure { status: EXIT_INPUT, lines: vec![format!("{}: {err}", path.display())] }
    }
}

/// Runs one command, writing the requested document to `out` (or the
/// `--output` file) and diagnostics to `err`. Returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let (document, output) = match execute(&cli.command) {
        Ok(done) => done,
        Err(failure) => {
            for line in &failure.lines {
                let _ = writeln!(err, "error: {line}");
            }
            return failure.status;
        }
    };
    let written = match output {
        Some(path) => std::fs::write(path, document.as_bytes()).map_err(|e| Failure::input(path, format!("E_IO {e}"))),
        None => {
            out.write_all(document.as_bytes()).map_err(|e| Failure::input(Path::new("<stdout>"), format!("E_IO {e}")))
        }
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.lines.join("; "));
            failure.status
        }
    }
}

fn execute(command: &Command) -> Result<(String, Option<&Path>), Failure> {
    match command {
        Command::Assess(args) => {
            let schema = load_schema(&args.schema.schema)?;
            let assessment = load_assessment(&schema, &args.scores)?;
            let result = evaluate(&schema, &assessment);
            let text = render_result(&result, &schema, &args.render.options());
            Ok((text, args.schema.output.as_deref()))
        }
        Command::Chart(args) => {
            let schema = load_schema(&args.schema.schema)?;
            let assessment = load_assessment(&schema, &args.scores)?;
            let gaps = gap_report(&evaluate(&schema, &assessment));
            Ok((render_chart_data(&gaps, &args.render.options()), args.schema.output.as_deref()))
        }
        Command::Validate(args) => {
            let schema = load_schema(&args.schema.schema)?;
            let mut text = format!(
                "schema {:?}: ok ({} layers, {} nodes, {} leaves)\n",
                schema.name(),
                schema.layer_count(),
                schema.node_count(),
                schema.leaf_count()
            );
            if let Some(path) = &args.scores {
                let assessment = load_assessment(&schema, path)?;
                text.push_str(&format!("scores {:?}: ok ({} scores)\n", assessment.name(), assessment.len()));
            }
            Ok((text, args.schema.output.as_deref()))
        }
        Command::Schema(args) => {
            let schema = load_schema(&args.schema)?;
            Ok((export_schema(&schema), args.output.as_deref()))
        }
        Command::Sensitivity(args) => {
            let schema = load_schema(&args.schema.schema)?;
            if let Some(path) = &args.scores {
                load_assessment(&schema, path)?;
            }
            let opts = args.render.options();
            let text = match &args.leaf {
                Some(leaf) => {
                    let value = sensitivity(&schema, leaf).map_err(|v| Failure::invalid([v]))?;
                    match opts.format() {
                        Format::Json => format!("{{\"id\": {leaf:?}, \"sensitivity\": {value}}}\n"),
                        Format::Table | Format::Csv => format!("{value}\n"),
                    }
                }
                None => render_sensitivities(&schema, &sensitivities(&schema), &opts),
            };
            Ok((text, args.schema.output.as_deref()))
        }
    }
}

fn load_schema(reference: &str) -> Result<FrameworkSchema, Failure> {
    if let Some(name) = reference.strip_prefix("builtin:") {
        return match name {
            "misa" => Ok(misa::misa_framework()),
            other => Err(Failure::input(
                Path::new(reference),
                format!("E_UNKNOWN_BUILTIN {other}: the only built-in schema is {BUILTIN_REF}"),
            )),
        };
    }
    let path = Path::new(reference);
    let text = read(path)?;
    let raw = parse_schema(&text).map_err(|e| Failure::input(path, e))?;
    validate_schema(&raw).map_err(|v| Failure::invalid(&v))
}

fn load_assessment(schema: &FrameworkSchema, path: &Path) -> Result<Assessment, Failure> {
    let text = read(path)?;
    let format = scores_format(path, &text);
    let mut raw = parse_scores(&text, format).map_err(|e| Failure::input(path, e))?;
    if format == ScoresFormat::Csv {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        raw = raw.with_name(stem);
    }
    bind_assessment(schema, &raw).map_err(|v| Failure::invalid(&v))
}

/// `.json` / `.csv` by extension, otherwise JSON if the text opens with `{`.
fn scores_format(path: &Path, text: &str) -> ScoresFormat {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("json") => ScoresFormat::Json,
        Some("csv") => ScoresFormat::Csv,
        _ if text.trim_start().starts_with('{') => ScoresFormat::Json,
        _ => ScoresFormat::Csv,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(path, format!("E_IO {e}")))
}
