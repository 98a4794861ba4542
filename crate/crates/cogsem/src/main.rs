use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cogsem::cli::{cmd_eval, cmd_interpret, cmd_validate, OutputFormat, RunConfig, EXIT_INPUT};
use cogsem::lexicon::Theta;
use cogsem::truth::LogicKind;

#[derive(Parser)]
#[command(name = "cogsem", about = "Observation stores, compositional interpretation, and four-valued truth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run result-uniqueness and observer-consistency checks on a model
    Validate {
        model: PathBuf,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Interpret trees and list per-node meanings
    Interpret {
        #[arg(short, long)]
        model: PathBuf,
        #[arg(short, long)]
        lexicon: PathBuf,
        #[arg(short, long)]
        context: PathBuf,
        #[arg(short, long)]
        tree: PathBuf,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Evaluate trees as sentences and print verdicts with traces
    Eval {
        #[arg(short, long)]
        model: PathBuf,
        #[arg(short, long)]
        lexicon: PathBuf,
        #[arg(short, long)]
        context: PathBuf,
        #[arg(short, long)]
        tree: PathBuf,
        #[arg(long, default_value = "kleene")]
        logic: String,
        #[arg(long)]
        most: Option<f64>,
        #[arg(long, default_value = "text")]
        format: String,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "text" => Ok(OutputFormat::Text),
        "structured" => Ok(OutputFormat::Structured),
        other => Err(format!("unknown format {other} (expected text|structured)")),
    }
}

fn parse_logic(s: &str) -> Result<LogicKind, String> {
    match s {
        "kleene" => Ok(LogicKind::Kleene),
        "lukasiewicz" => Ok(LogicKind::Lukasiewicz),
        other => Err(format!("unknown logic {other} (expected kleene|lukasiewicz)")),
    }
}

fn run() -> Result<cogsem::cli::CmdOutput, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { model, format } => Ok(cmd_validate(&model, parse_format(&format)?)),
        Command::Interpret { model, lexicon, context, tree, format } => {
            let config = RunConfig {
                model_path: model,
                lexicon_path: lexicon,
                context_path: context,
                tree_path: tree,
                logic: LogicKind::Kleene,
                most_threshold: None,
                format: parse_format(&format)?,
            };
            Ok(cmd_interpret(&config))
        }
        Command::Eval { model, lexicon, context, tree, logic, most, format } => {
            let most_threshold = most
                .map(|t| Theta::from_fraction(t).map_err(|e| e.to_string()))
                .transpose()?;
            let config = RunConfig {
                model_path: model,
                lexicon_path: lexicon,
                context_path: context,
                tree_path: tree,
                logic: parse_logic(&logic)?,
                most_threshold,
                format: parse_format(&format)?,
            };
            Ok(cmd_eval(&config))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
