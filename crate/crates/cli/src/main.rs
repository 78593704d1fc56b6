//! `ilm`: command-line front end for the GL / IL / ILM workbench.
//!
//! Exit codes: 0 positive answer, 1 negative answer, 2 unknown (budget),
//! 3 parse or usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ilm::decide::{Budget, Logic};

use commands::{CliError, Outcome};

pub const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "ilm", version, about = "Decision procedures and classifiers for GL, IL and ILM")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Logic to decide in.
    #[arg(long, global = true, default_value = "ilm", value_parser = parse_logic)]
    pub logic: Logic,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the certificate (a model file) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub cert: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = Budget::default().max_worlds)]
    pub max_worlds: usize,
    #[arg(long, global = true, default_value_t = Budget::default().max_steps)]
    pub max_steps: usize,
    #[arg(long, global = true, default_value_t = Budget::default().max_backtracks)]
    pub max_backtracks: usize,
    /// Work cap for the viability pruning; past it pruning is switched off.
    #[arg(long, global = true, default_value_t = Budget::default().max_viability)]
    pub max_viability: usize,
    /// Worker threads for `--corpus` runs.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

impl Global {
    pub fn budget(&self) -> Budget {
        Budget {
            max_worlds: self.max_worlds,
            max_steps: self.max_steps,
            max_backtracks: self.max_backtracks,
            max_viability: self.max_viability,
        }
    }
}

fn parse_logic(s: &str) -> Result<Logic, String> {
    s.parse()
}

/// A formula given inline, or a corpus file with one formula per line.
#[derive(Args, Debug, Clone)]
pub struct Input {
    /// The formula, e.g. "p |> q -> (p & []r) |> (q & []r)".
    pub formula: Option<String>,
    /// Run on every non-empty, non-`#` line of this file.
    #[arg(long, value_name = "FILE", conflicts_with = "formula")]
    pub corpus: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide derivability; exit 0 derivable, 1 refuted.
    Prove {
        #[command(flatten)]
        input: Input,
        /// Check a Hilbert-style proof file instead of searching.
        #[arg(long, value_name = "FILE", conflicts_with = "corpus")]
        check_proof: Option<PathBuf>,
    },
    /// Decide satisfiability; exit 0 satisfiable, 1 unsatisfiable.
    Sat {
        #[command(flatten)]
        input: Input,
    },
    /// Find a countermodel; exit 0 found, 1 the formula is derivable.
    Countermodel {
        #[command(flatten)]
        input: Input,
    },
    /// Validate a model file and optionally evaluate a formula in it.
    Modelcheck {
        model: PathBuf,
        formula: Option<String>,
        /// World to evaluate at; defaults to the file's `root`.
        #[arg(long)]
        world: Option<String>,
    },
    /// Close a quasi-frame under the frame conditions of the logic.
    Close {
        model: PathBuf,
        /// List the repaired imperfections.
        #[arg(long)]
        steps: bool,
    },
    /// Classify a formula.
    Classify {
        kind: Kind,
        #[command(flatten)]
        input: Input,
    },
    /// Check an admissible rule (i..vii) on an instance.
    Rules {
        rule: String,
        #[arg(required = true)]
        formulas: Vec<String>,
    },
    /// Render a model file as Graphviz DOT.
    ExportDot { model: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Sigma1,
    Delta1,
    Tsg,
    Selfprover,
    Almostloeb,
    Dagger,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let g = &cli.global;
    let result = match &cli.command {
        Command::Prove { input, check_proof: Some(path) } => {
            commands::check_proof_file(g, input.formula.as_deref(), path)
        }
        Command::Prove { input, .. } => on_input(g, input, commands::prove),
        Command::Sat { input } => on_input(g, input, commands::sat),
        Command::Countermodel { input } => on_input(g, input, commands::countermodel),
        Command::Classify { kind, input } => {
            let kind = *kind;
            on_input(g, input, move |g, f| commands::classify(g, kind, f))
        }
        Command::Modelcheck { model, formula, world } => {
            commands::modelcheck(g, model, formula.as_deref(), world.as_deref())
        }
        Command::Close { model, steps } => commands::close(g, model, *steps),
        Command::Rules { rule, formulas } => commands::rules(g, rule, formulas),
        Command::ExportDot { model } => commands::export_dot(g, model),
    };
    match result {
        Ok(out) => {
            out.print(g.json);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn on_input<F>(g: &Global, input: &Input, run: F) -> Result<Outcome, CliError>
where
    F: Fn(&Global, &str) -> Result<Outcome, CliError> + Sync,
{
    match (&input.formula, &input.corpus) {
        (Some(f), _) => run(g, f),
        (None, Some(path)) => commands::corpus(g, path, run),
        (None, None) => Err(CliError::Usage("a formula or --corpus is required".into())),
    }
}
