//! `galois`: classify polynomials, build census databases, train and
//! evaluate the neurosymbolic classifier, and run verification suites.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use galois_core::database::{
    build_record, generate_database, load_records, summarize, summary_path, write_summary, CensusOptions, Convention,
    RecordOptions,
};
use galois_core::galois::{analyze, ClassifyOptions};
use galois_core::nsn::{evaluate_model, stratified_split, train_model, Model, TrainConfig};
use galois_core::par::Execution;
use galois_core::verify::{run_suite, VerifyOptions, SUITES};
use galois_core::{canonicalize, poly_from_key, Error};

#[derive(Parser)]
#[command(
    name = "galois",
    version,
    about = "Galois groups of integer polynomials of degree 3 to 5"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one polynomial and print its record.
    Classify(ClassifyArgs),
    /// Enumerate a bounded-height family and write its records.
    Generate(GenerateArgs),
    /// Summarize a record file.
    Summarize(SummarizeArgs),
    /// Train the classifier on a record file.
    Train(TrainArgs),
    /// Evaluate a trained model on a record file.
    Evaluate(EvaluateArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct ClassifyFlags {
    /// Usable primes sampled for cycle types.
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u64).range(1..=6000))]
    prime_budget: u64,
    /// Starting precision of the numeric resolvent, in bits.
    #[arg(long, default_value_t = 212, value_parser = clap::value_parser!(u32).range(64..=65536))]
    precision_bits: u32,
    /// Sample many more primes before accepting a sampled verdict.
    #[arg(long)]
    exhaustive: bool,
    /// Count real roots the way the published listing does.
    #[arg(long)]
    listing_compatible: bool,
}

impl ClassifyFlags {
    fn record_options(&self) -> RecordOptions {
        RecordOptions {
            classify: ClassifyOptions {
                prime_budget: self.prime_budget as usize,
                precision_bits: self.precision_bits,
                exhaustive: self.exhaustive,
            },
            listing_compatible: self.listing_compatible,
        }
    }
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..=5))]
    degree: u64,
    /// Coefficients a0 first, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    coeffs: Vec<i64>,
    #[command(flatten)]
    flags: ClassifyFlags,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// The convention of the published census for the degree.
    Published,
    Projective,
    Monic,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..=5))]
    degree: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1000))]
    height: u64,
    /// Record file; defaults to `deg<n>_h<h>.jsonl` in `GALOIS_DATA_DIR`
    /// or `data`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
    workers: Option<u64>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Published)]
    convention: ConventionArg,
    #[command(flatten)]
    flags: ClassifyFlags,
}

#[derive(Args)]
struct SummarizeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Also write the summary here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Model file to write.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    epochs: usize,
    /// Records kept per class; 0 keeps every record.
    #[arg(long, default_value_t = 2000)]
    max_per_class: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Split {
    /// The held-out split the model was trained against.
    Validation,
    All,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// Write the metrics as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Split::Validation)]
    split: Split,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "list")]
    suite: Option<String>,
    /// List the available suites.
    #[arg(long)]
    list: bool,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
    workers: Option<u64>,
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn execution(workers: Option<u64>) -> Execution {
    Execution::from_workers(workers.map(|w| w as usize))
}

fn data_dir() -> PathBuf {
    std::env::var_os("GALOIS_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

/// Writes to standard output, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json(v: &Value) {
    emit(&(serde_json::to_string_pretty(v).expect("json values serialize") + "\n"));
}

fn classify(a: ClassifyArgs) -> Outcome {
    let n = a.degree as usize;
    if a.coeffs.len() != n + 1 {
        return Err(Failure::Usage(format!(
            "degree {n} needs {} coefficients, got {}",
            n + 1,
            a.coeffs.len()
        )));
    }
    if a.coeffs[n] == 0 {
        return Err(Failure::Usage("leading coefficient is zero".into()));
    }
    if a.coeffs[0] == 0 {
        return Err(Failure::Domain("reducible: x divides the polynomial".into()));
    }
    let key = canonicalize(&a.coeffs)?;
    let opts = a.flags.record_options();
    let Some(record) = build_record(&key, &opts)? else {
        return Err(Failure::Domain("reducible polynomial".into()));
    };
    let analysis = analyze(&poly_from_key(&key), &opts.classify)?;
    let mut out = serde_json::to_value(&record).map_err(Error::from)?;
    out["certainty"] = serde_json::to_value(&analysis.verdict.certainty).map_err(Error::from)?;
    out["evidence"] = serde_json::to_value(&analysis.verdict.evidence).map_err(Error::from)?;
    print_json(&out);
    Ok(())
}

fn generate(a: GenerateArgs) -> Outcome {
    let n = a.degree as usize;
    let convention = match a.convention {
        ConventionArg::Published => Convention::published(n),
        ConventionArg::Projective => Convention::Projective,
        ConventionArg::Monic => Convention::Monic,
    };
    let path = match a.out {
        Some(p) => p,
        None => {
            let dir = data_dir();
            std::fs::create_dir_all(&dir).map_err(Error::from)?;
            dir.join(format!("deg{n}_h{}.jsonl", a.height))
        }
    };
    check_parent(&path)?;
    let opts = CensusOptions {
        record: a.flags.record_options(),
        convention,
        execution: execution(a.workers),
        batch: 0,
    };
    let summary = generate_database(n, a.height, &path, &opts)?;
    eprintln!("wrote {} records to {}", summary.records, path.display());
    eprintln!("summary in {}", summary_path(&path).display());
    print_json(&json!({
        "degree": summary.degree,
        "enumeration": summary.enumeration,
        "records": summary.records,
        "group_counts": summary.group_counts,
        "non_symmetric_classes": summary.non_symmetric_classes,
    }));
    Ok(())
}

fn check_parent(path: &Path) -> Outcome {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() && !p.is_dir() => {
            Err(Failure::Usage(format!("directory {} does not exist", p.display())))
        }
        _ => Ok(()),
    }
}

fn check_input(path: &Path) -> Outcome {
    if !path.is_file() {
        return Err(Failure::Usage(format!("input file {} not found", path.display())));
    }
    Ok(())
}

fn summarize_cmd(a: SummarizeArgs) -> Outcome {
    check_input(&a.input)?;
    if let Some(out) = &a.out {
        check_parent(out)?;
    }
    let records = load_records(&a.input)?;
    let summary = summarize(&records)?;
    if let Some(out) = &a.out {
        write_summary(&summary, out)?;
    }
    print_json(&serde_json::to_value(&summary).map_err(Error::from)?);
    Ok(())
}

fn train(a: TrainArgs) -> Outcome {
    check_input(&a.input)?;
    check_parent(&a.out)?;
    let records = load_records(&a.input)?;
    let cfg = TrainConfig {
        epochs: a.epochs,
        seed: a.seed,
        max_per_class: (a.max_per_class > 0).then_some(a.max_per_class),
        ..Default::default()
    };
    let trained = train_model(&records, &cfg)?;
    trained.model.save(&a.out)?;
    let h = &trained.model.loss_history;
    eprintln!(
        "trained on {} records, validated on {}; loss {:.6} -> {:.6}",
        trained.train.len(),
        trained.validation.len(),
        h[0],
        h[h.len() - 1]
    );
    Ok(())
}

fn evaluate(a: EvaluateArgs) -> Outcome {
    check_input(&a.input)?;
    check_input(&a.model)?;
    if let Some(out) = &a.out {
        check_parent(out)?;
    }
    let model = Model::load(&a.model)?;
    let records = load_records(&a.input)?;
    let subset = match a.split {
        Split::All => records,
        Split::Validation => {
            let (_, val) = stratified_split(&records, &model.config);
            val.into_iter().map(|i| records[i].clone()).collect()
        }
    };
    let e = evaluate_model(&model, &subset)?;
    emit(&e.table());
    if let Some(out) = &a.out {
        let text = serde_json::to_string_pretty(&e).map_err(Error::from)?;
        std::fs::write(out, text + "\n").map_err(Error::from)?;
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Outcome {
    if a.list {
        for (name, about) in SUITES {
            emit(&format!("{name:<20} {about}\n"));
        }
        return Ok(());
    }
    let name = a.suite.expect("required unless listing");
    let opts = VerifyOptions {
        execution: execution(a.workers),
        ..Default::default()
    };
    let report = run_suite(&name, &opts)?;
    emit(&report.render());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Domain(format!("suite {name} failed")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify(a) => classify(a),
        Command::Generate(a) => generate(a),
        Command::Summarize(a) => summarize_cmd(a),
        Command::Train(a) => train(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            let _ = Cli::command()
                .error(clap::error::ErrorKind::ValueValidation, msg)
                .print();
            ExitCode::from(2)
        }
    }
}
