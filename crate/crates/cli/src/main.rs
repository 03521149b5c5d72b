use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bwrk_core::harness::{
    baseline_report, emit_to, run_experiment, scaling, verify, AggregateReport, ExperimentConfig, Format,
};
use bwrk_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bwrk", version, about = "Primal-dual bandits with replenishable knapsacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (T, replication) pair of an experiment and write the report.
    Run(RunArgs),
    /// Print the offline benchmarks (OPT_LP or OPT_gamma) for each horizon.
    Baseline(BaselineArgs),
    /// Run the property checks.
    Verify(VerifyArgs),
    /// Run an experiment and report how the mean gaps grow along the T grid.
    Sweep(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Output file; stdout when absent and the config names no outputs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the --out extension, else json.
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
}

impl Output {
    fn format(&self) -> Format {
        match (self.format, &self.out) {
            (Some(f), _) => f.into(),
            (None, Some(p)) if p.extension().is_some_and(|e| e == "csv") => Format::Csv,
            _ => Format::Json,
        }
    }

    fn sink(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        })
    }
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    #[command(flatten)]
    output: Output,
    /// Worker threads; 1 runs serially.
    #[arg(long)]
    jobs: Option<usize>,
    /// Keep per-run aggregates only.
    #[arg(long)]
    slim: bool,
}

#[derive(Args)]
struct BaselineArgs {
    config: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run the checks at full acceptance size instead of the quick size.
    #[arg(long)]
    full: bool,
    #[command(flatten)]
    output: Output,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    kind: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    replication: Option<usize>,
}

fn error_record(e: &Error) -> String {
    let (horizon, replication) = match e {
        Error::Run { horizon, replication, .. } => (Some(*horizon), Some(*replication)),
        _ => (None, None),
    };
    let record = ErrorRecord { kind: e.kind(), message: e.to_string(), horizon, replication };
    serde_json::json!({ "error": record }).to_string()
}

fn load(path: &Path, slim: bool) -> bwrk_core::Result<ExperimentConfig> {
    let mut config = ExperimentConfig::load(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })?;
    config.slim |= slim;
    Ok(config)
}

fn write_json<T: Serialize>(value: &T, output: &Output) -> bwrk_core::Result<()> {
    let mut sink = output.sink()?;
    serde_json::to_writer_pretty(&mut sink, value)?;
    sink.write_all(b"\n")?;
    sink.flush()?;
    Ok(())
}

/// Rows must serialize to flat objects; array cells are joined with ';'.
fn write_csv<T: Serialize>(rows: &[T], output: &Output) -> bwrk_core::Result<()> {
    let values: Vec<serde_json::Value> = rows.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
    let header: Vec<String> = match values.first() {
        Some(serde_json::Value::Object(map)) => map.keys().cloned().collect(),
        _ => Vec::new(),
    };
    let mut w = csv::Writer::from_writer(output.sink()?);
    w.write_record(&header).map_err(csv_error)?;
    for v in &values {
        let cells = header.iter().map(|k| match &v[k] {
            serde_json::Value::Null => String::new(),
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Array(items) => items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"),
            other => other.to_string(),
        });
        w.write_record(cells).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidParameter(format!("csv: {e}"))
}

/// Writes the report to `--out`, or to the config's outputs, or to stdout.
fn write_report(report: &AggregateReport, output: &Output) -> bwrk_core::Result<()> {
    let configured = &report.config.output;
    if output.out.is_none() && (configured.csv.is_some() || configured.json.is_some()) {
        if let Some(p) = &configured.csv {
            bwrk_core::harness::emit(report, Format::Csv, p)?;
        }
        if let Some(p) = &configured.json {
            bwrk_core::harness::emit(report, Format::Json, p)?;
        }
        return Ok(());
    }
    emit_to(report, output.format(), output.sink()?)
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> bwrk_core::Result<T> {
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}"))),
        None => Ok(f()),
    }
}

fn execute(command: Command) -> bwrk_core::Result<bool> {
    match command {
        Command::Run(args) => {
            let config = load(&args.config, args.slim)?;
            let report = run_experiment(&config, args.jobs)?;
            write_report(&report, &args.output)?;
            Ok(true)
        }
        Command::Sweep(args) => {
            let config = load(&args.config, args.slim)?;
            if config.horizons.len() < 2 {
                return Err(Error::InvalidParameter("a sweep needs at least two horizons".into()));
            }
            let report = run_experiment(&config, args.jobs)?;
            let rows = scaling(&report.summaries);
            // Full report still goes wherever the config points it.
            if config.output.csv.is_some() || config.output.json.is_some() {
                write_report(&report, &Output { out: None, format: None })?;
            }
            match args.output.format() {
                Format::Csv => write_csv(&rows, &args.output)?,
                Format::Json => write_json(&rows, &args.output)?,
            }
            Ok(true)
        }
        Command::Baseline(args) => {
            let rows = baseline_report(&load(&args.config, false)?)?;
            match args.output.format() {
                Format::Csv => write_csv(&rows, &args.output)?,
                Format::Json => write_json(&rows, &args.output)?,
            }
            Ok(true)
        }
        Command::Verify(args) => {
            let checks = with_pool(args.jobs, || verify::suite(!args.full))??;
            match args.output.format {
                Some(OutFormat::Json) => write_json(&checks, &args.output)?,
                Some(OutFormat::Csv) => write_csv(&checks, &args.output)?,
                None => {
                    let mut sink = args.output.sink()?;
                    for c in &checks {
                        writeln!(sink, "{c}")?;
                    }
                }
            }
            Ok(checks.iter().all(|c| c.passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", error_record(&e));
            ExitCode::from(1)
        }
    }
}
