//! Command-line front end for the kgdbn pipeline.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
pub mod io;
pub mod reproduce;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<kgdbn::Error> for CliError {
    fn from(e: kgdbn::Error) -> Self {
        if e.is_numerical() {
            CliError::numerical(e.to_string())
        } else {
            CliError::input(e.to_string())
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(
    name = "kgdbn",
    version,
    about = "Knowledge-graph hierarchy encoding with a DBN-shaped autoencoder"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TrainingArgs {
    #[arg(long, default_value_t = 100)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 32)]
    pub batch: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train on uniform data and compare W of the test input and its reconstruction.
    Reproduce {
        #[arg(long, default_value_t = 2)]
        properties: usize,
        #[arg(long, default_value_t = 500)]
        train_rows: usize,
        #[arg(long, default_value_t = 50)]
        test_rows: usize,
        #[command(flatten)]
        training: TrainingArgs,
        /// Run this many consecutive seeds concurrently.
        #[arg(long, default_value_t = 1)]
        seeds: usize,
        #[arg(long, default_value = "-")]
        out: PathBuf,
        /// Also write the trained model (first seed only).
        #[arg(long)]
        model_out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Train an autoencoder on a CSV dataset and write the model file.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Expected column count; defaults to the CSV width.
        #[arg(long)]
        properties: Option<usize>,
        #[command(flatten)]
        training: TrainingArgs,
        #[arg(long)]
        no_shuffle: bool,
    },
    /// Reconstruct a CSV dataset through a trained model.
    Encode {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Build the sibling/binary hierarchy of a knowledge graph.
    Hierarchy {
        #[arg(long)]
        graph: PathBuf,
        /// `median`, or comma-separated fixed thresholds, one per property.
        #[arg(long, default_value = "median")]
        eta: String,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Embed a corpus via the SVD of its co-occurrence matrix.
    Embed {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value = "-")]
        out: PathBuf,
        /// CSV of property rows, one per vocabulary word in first-seen order.
        #[arg(long, requires = "graph_out")]
        word_properties: Option<PathBuf>,
        /// Comma-separated property names; defaults to p1..pM.
        #[arg(long)]
        property_names: Option<String>,
        /// Write the knowledge graph built from co-occurrence here.
        #[arg(long, requires = "word_properties")]
        graph_out: Option<PathBuf>,
    },
    /// Shapiro-Wilk W of a CSV dataset (all entries pooled).
    Swtest {
        #[arg(long)]
        data: PathBuf,
        /// Report each column separately as well.
        #[arg(long)]
        per_column: bool,
        /// Seed that generated the data, echoed as provenance.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Reproduce {
            properties,
            train_rows,
            test_rows,
            training,
            seeds,
            out,
            model_out,
            format,
        } => commands::reproduce(
            reproduce::ReproduceConfig {
                properties,
                train_rows,
                test_rows,
                epochs: training.epochs,
                lr: training.lr,
                batch: training.batch,
                seed: training.seed,
            },
            seeds,
            &out,
            model_out.as_deref(),
            format,
        ),
        Command::Train {
            data,
            out,
            properties,
            training,
            no_shuffle,
        } => commands::train(&data, &out, properties, &training, !no_shuffle),
        Command::Encode { model, data, out } => commands::encode(&model, &data, &out),
        Command::Hierarchy { graph, eta, out } => commands::hierarchy(&graph, &eta, &out),
        Command::Embed {
            corpus,
            rank,
            out,
            word_properties,
            property_names,
            graph_out,
        } => commands::embed(
            &corpus,
            rank,
            &out,
            word_properties.as_deref(),
            property_names.as_deref(),
            graph_out.as_deref(),
        ),
        Command::Swtest {
            data,
            per_column,
            seed,
            format,
        } => commands::swtest(&data, per_column, seed, format),
    }
}
