use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use anuvad::pipeline::{
    self, build, load_bundle, load_testset, translate, translate_lines, PipelineConfig,
};

/// Hybrid Hindi-to-English translator.
#[derive(Parser)]
#[command(name = "anuvad", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// key=value config file; command-line flags win over it
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// directory holding the input data files
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,

    /// directory for the persisted model bundle
    #[arg(long, global = true)]
    bundle_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Load data files, train models, persist the bundle
    Build {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        lm_order: Option<usize>,
        #[arg(long)]
        lm_k: Option<f64>,
        #[arg(long)]
        em_iters: Option<usize>,
    },
    /// Translate a sentence, a file, or standard input (one sentence per line)
    Translate {
        #[command(flatten)]
        common: CommonArgs,
        /// sentence to translate; reads --file or stdin when absent
        sentence: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_parser = ["text", "json"], default_value = "text")]
        format: String,
    },
    /// Score a testset and write JSON + text reports
    Evaluate {
        #[command(flatten)]
        common: CommonArgs,
        /// hindi<TAB>reference<TAB>category testset file
        #[arg(long)]
        testset: PathBuf,
        #[arg(long, value_parser = ["text", "json"], default_value = "text")]
        format: String,
    },
    /// Pretty-print the stage trace for one sentence
    Inspect {
        #[command(flatten)]
        common: CommonArgs,
        sentence: String,
    },
}

struct Settings {
    data_dir: PathBuf,
    bundle_dir: PathBuf,
    lm_order: Option<usize>,
    lm_k: Option<f64>,
    em_iters: Option<usize>,
}

fn load_config_file(path: &PathBuf) -> Result<BTreeMap<String, String>, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {} is not key=value", i + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Merges config file values with flag overrides; flags win.
fn settings(common: &CommonArgs) -> Result<Settings, String> {
    let file = match &common.config {
        Some(path) => load_config_file(path)?,
        None => BTreeMap::new(),
    };
    let parse_num = |key: &str| -> Result<Option<usize>, String> {
        file.get(key)
            .map(|v| v.parse().map_err(|_| format!("config {key} must be a count")))
            .transpose()
    };
    let data_dir = common
        .data_dir
        .clone()
        .or_else(|| file.get("data_dir").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("data"));
    let bundle_dir = common
        .bundle_dir
        .clone()
        .or_else(|| file.get("bundle_dir").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("bundle"));
    Ok(Settings {
        data_dir,
        bundle_dir,
        lm_order: parse_num("lm_order")?,
        lm_k: file
            .get("lm_k")
            .map(|v| v.parse().map_err(|_| "config lm_k must be a number".to_string()))
            .transpose()?,
        em_iters: parse_num("em_iters")?,
    })
}

const EXIT_WARNINGS: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_CONFIG)
}

fn run_build(
    common: &CommonArgs,
    lm_order: Option<usize>,
    lm_k: Option<f64>,
    em_iters: Option<usize>,
) -> ExitCode {
    let settings = match settings(common) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let mut config = PipelineConfig::from_data_dir(&settings.data_dir);
    if let Some(order) = lm_order.or(settings.lm_order) {
        config.lm_order = order;
    }
    if let Some(k) = lm_k.or(settings.lm_k) {
        config.lm_k = k;
    }
    if let Some(iters) = em_iters.or(settings.em_iters) {
        config.em_iters = iters;
    }
    match build(&config, &settings.bundle_dir) {
        Ok((_, report)) => {
            println!(
                "built bundle at {}: {} dictionary entries, {} examples, {} parallel pairs, {} rejected lines",
                settings.bundle_dir.display(),
                report.dictionary_entries,
                report.example_entries,
                report.parallel_pairs,
                report.rejected_lines
            );
            if report.rejected_lines > 0 {
                ExitCode::from(EXIT_WARNINGS)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(e),
    }
}

fn print_result(result: &anuvad::pipeline::TranslationResult, format: &str) {
    if format == "json" {
        println!(
            "{}",
            serde_json::to_string(result).expect("result serializes")
        );
        return;
    }
    println!("{}", result.output);
    for stage in &result.trace {
        eprintln!("[{}]", stage.stage);
        for item in &stage.items {
            eprintln!("  {item}");
        }
    }
    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }
}

fn run_translate(
    common: &CommonArgs,
    sentence: Option<String>,
    file: Option<PathBuf>,
    trace: bool,
    format: &str,
) -> ExitCode {
    let settings = match settings(common) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let bundle = match load_bundle(&settings.bundle_dir) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    let lines: Vec<String> = if let Some(sentence) = sentence {
        vec![sentence]
    } else if let Some(file) = file {
        match fs::read_to_string(&file) {
            Ok(text) => text.lines().map(String::from).collect(),
            Err(e) => return fail(format!("cannot read {}: {e}", file.display())),
        }
    } else {
        let mut text = String::new();
        if let Err(e) = std::io::stdin().read_to_string(&mut text) {
            return fail(format!("cannot read stdin: {e}"));
        }
        text.lines().map(String::from).collect()
    };
    let results = translate_lines(&bundle, &lines, trace);
    let mut warned = false;
    for result in &results {
        print_result(result, format);
        warned |= !result.warnings.is_empty();
    }
    if warned {
        ExitCode::from(EXIT_WARNINGS)
    } else {
        ExitCode::SUCCESS
    }
}

fn run_evaluate(common: &CommonArgs, testset: &Path, format: &str) -> ExitCode {
    let settings = match settings(common) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let bundle = match load_bundle(&settings.bundle_dir) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    let outcome = match load_testset(testset) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    for reject in &outcome.rejects {
        eprintln!(
            "warning: testset line {} skipped: {}",
            reject.line, reject.reason
        );
    }
    let report = pipeline::evaluate(&bundle, &outcome.items);
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    let table = if report.records.is_empty() {
        "no records: accuracy n/a\n".to_string()
    } else {
        report.to_table()
    };
    for (name, body) in [("eval_report.json", &json), ("eval_report.txt", &table)] {
        let path = settings.bundle_dir.join(name);
        if let Err(e) = fs::write(&path, body) {
            return fail(format!("cannot write {}: {e}", path.display()));
        }
    }
    if format == "json" {
        println!("{json}");
    } else {
        print!("{table}");
    }
    ExitCode::SUCCESS
}

fn run_inspect(common: &CommonArgs, sentence: &str) -> ExitCode {
    let settings = match settings(common) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let bundle = match load_bundle(&settings.bundle_dir) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    let result = translate(&bundle, sentence, true);
    println!(
        "{}",
        serde_json::to_string_pretty(&result.trace).expect("trace serializes")
    );
    if result.warnings.is_empty() {
        ExitCode::SUCCESS
    } else {
        for warning in &result.warnings {
            eprintln!("warning: {warning}");
        }
        ExitCode::from(EXIT_WARNINGS)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Build {
            common,
            lm_order,
            lm_k,
            em_iters,
        } => run_build(common, *lm_order, *lm_k, *em_iters),
        Command::Translate {
            common,
            sentence,
            file,
            trace,
            format,
        } => run_translate(common, sentence.clone(), file.clone(), *trace, format),
        Command::Evaluate {
            common,
            testset,
            format,
        } => run_evaluate(common, testset, format),
        Command::Inspect { common, sentence } => run_inspect(common, sentence),
    }
}
