//! `stylodetect`: split, extract, train, evaluate, predict, inspect.

mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use failure::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "stylodetect",
    version,
    about = "Stylometric detector for machine-generated text"
)]
struct Cli {
    /// Seed for splitting, bootstrap sampling, initialization and shuffling.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker threads for extraction and tree building. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Suppress informational output on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Forest,
    Convnet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Tokenize, segment and tag the raw text internally.
    Raw,
    /// Take sentences, tags and dependencies from a CoNLL-U file.
    Conllu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Columns {
    /// Name of the text column.
    #[arg(long, default_value = stylodetect::corpus::DEFAULT_TEXT_COLUMN)]
    text_column: String,
    /// Name of the 0/1 label column (1 = generated).
    #[arg(long, default_value = stylodetect::corpus::DEFAULT_LABEL_COLUMN)]
    label_column: String,
}

#[derive(Debug, Args)]
pub struct LexiconOverrides {
    /// Replacement closed-class lexicon, one `word<TAB>UPOS` per line.
    #[arg(long)]
    closed_class: Option<PathBuf>,
    /// Replacement abbreviation list, one entry per line.
    #[arg(long)]
    abbreviations: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stratified train/validation/test split of a labeled CSV.
    Split {
        input: PathBuf,
        /// Directory for `<stem>.train.csv`, `<stem>.val.csv`, `<stem>.test.csv`
        /// (defaults to the input's directory).
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Train, validation and test fractions.
        #[arg(
            long,
            default_value = "0.8,0.1,0.1",
            value_delimiter = ',',
            num_args = 3
        )]
        fractions: Vec<f64>,
        #[command(flatten)]
        columns: Columns,
    },
    /// Compute the feature matrix of a labeled CSV.
    Extract {
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Raw)]
        mode: Mode,
        /// CoNLL-U annotations; documents are matched to rows by `# newdoc id`.
        #[arg(long, required_if_eq("mode", "conllu"))]
        conllu: Option<PathBuf>,
        #[command(flatten)]
        columns: Columns,
        #[command(flatten)]
        lexicons: LexiconOverrides,
    },
    /// Fit a classifier on a feature matrix.
    Train(commands::train::TrainArgs),
    /// Score a model on a labeled feature matrix.
    Evaluate {
        #[arg(long, short)]
        model: PathBuf,
        /// Feature matrix with labels.
        #[arg(long)]
        features: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write the report here.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Override the decision threshold stored in the model.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Classify raw text files, or standard input when no file is given.
    Predict {
        #[arg(long, short)]
        model: PathBuf,
        /// Text files; `-` reads standard input.
        inputs: Vec<PathBuf>,
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        lexicons: LexiconOverrides,
    },
    /// Summarize a model file.
    Inspect {
        #[arg(required_unless_present = "fresh_convnet")]
        model: Option<PathBuf>,
        /// Describe a newly initialized network instead of a file.
        #[arg(long, conflicts_with = "model")]
        fresh_convnet: bool,
    },
    /// Print the feature schema and its hash.
    Schema,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = commands::Context {
        seed: cli.seed,
        jobs: cli.jobs.max(1),
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Split {
            input,
            out_dir,
            fractions,
            columns,
        } => commands::split::run(&ctx, &input, out_dir.as_deref(), &fractions, &columns),
        Command::Extract {
            input,
            output,
            mode,
            conllu,
            columns,
            lexicons,
        } => commands::extract::run(
            &ctx,
            &input,
            &output,
            mode,
            conllu.as_deref(),
            &columns,
            &lexicons,
        ),
        Command::Train(args) => commands::train::run(&ctx, &args),
        Command::Evaluate {
            model,
            features,
            format,
            output,
            threshold,
        } => commands::evaluate::run(
            &ctx,
            &model,
            &features,
            format,
            output.as_deref(),
            threshold,
        ),
        Command::Predict {
            model,
            inputs,
            threshold,
            lexicons,
        } => commands::predict::run(&model, &inputs, threshold, &lexicons),
        Command::Inspect {
            model,
            fresh_convnet,
        } => commands::inspect::run(&ctx, model.as_deref(), fresh_convnet),
        Command::Schema => {
            print!("{}", stylodetect::features::schema_document());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
