use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maxplus_csr::cli::{run, Command, RunConfig};

#[derive(Parser)]
#[command(name = "maxplus-csr", version, about = "CSR analysis of max-plus matrix products")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Input {
    /// Ensemble JSON: {"generators": [{"rows", "cols", "entries"}, ...]}.
    #[arg(long, short)]
    input: PathBuf,
}

#[derive(Args)]
struct WordArg {
    /// Comma-separated 1-based generator indices.
    #[arg(long, short)]
    word: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Critical structure, assumption checks and path weights.
    Analyze {
        #[command(flatten)]
        input: Input,
    },
    /// Ambient and weak transient bounds, optionally checked on random words.
    Bounds {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1000)]
        k_max: usize,
    },
    /// Product of a word with its first-passage weights.
    Product {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        word: WordArg,
    },
    /// Compare a product with its CSR product.
    CsrCheck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        word: WordArg,
        /// Include C', S^(k mod γ) and R'.
        #[arg(long)]
        emit_factors: bool,
    },
    /// Evaluate one built-in non-CSR family at a given t.
    Counterexample {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 10)]
        t: usize,
    },
    /// Recompute the built-in reference example and families.
    Repro,
}

fn config(cli: Cli) -> RunConfig {
    let mut c;
    match cli.command {
        Cmd::Analyze { input } => {
            c = RunConfig::new(Command::Analyze);
            c.input_path = Some(input.input);
        }
        Cmd::Bounds { input, seed, samples, k_max } => {
            c = RunConfig::new(Command::Bounds);
            c.input_path = Some(input.input);
            c.seed = seed;
            c.samples = samples;
            c.k_max = k_max;
        }
        Cmd::Product { input, word } => {
            c = RunConfig::new(Command::Product);
            c.input_path = Some(input.input);
            c.word = Some(word.word);
        }
        Cmd::CsrCheck { input, word, emit_factors } => {
            c = RunConfig::new(Command::CsrCheck);
            c.input_path = Some(input.input);
            c.word = Some(word.word);
            c.emit_factors = emit_factors;
        }
        Cmd::Counterexample { family, t } => {
            c = RunConfig::new(Command::Counterexample);
            c.family = Some(family);
            c.t = Some(t);
        }
        Cmd::Repro => c = RunConfig::new(Command::Repro),
    }
    c.output_path = cli.output;
    c
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = config(cli);
    let outcome = run(&config);
    let text = outcome.render();
    match &config.output_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if let Some(msg) = outcome.report.get("error").and_then(|v| v.as_str()) {
        eprintln!("error: {msg}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
