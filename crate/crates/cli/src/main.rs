//! `namebank`: maintain a multilingual name resource and annotate text with it.

mod commands;
mod io;
mod store;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use namebank::merge::MergerConfig;
use namebank::LanguageScope;

use crate::io::Format;

#[derive(Parser)]
#[command(name = "namebank", version, about = "Multilingual name resource tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Resource file (`.tsv`, or `.zip` holding one); metadata lives in `<resource>.meta`.
    #[arg(long, value_name = "PATH")]
    resource: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Build the matcher and print its size.
    Compile {
        #[command(flatten)]
        common: Common,
        /// Text language; without it only universal variants are compiled.
        #[arg(long)]
        lang: Option<LanguageScope>,
    },
    /// Annotate documents (files, or NUL-separated on stdin) with known names.
    Match {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lang: Option<LanguageScope>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        documents: Vec<PathBuf>,
    },
    /// Resolve candidate names against the resource and save the result.
    Merge {
        #[command(flatten)]
        common: Common,
        /// Similarity at or above which a candidate joins an entity.
        #[arg(long, value_parser = parse_threshold)]
        threshold: Option<f64>,
        /// Normalization rule file replacing the built-in rules.
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
        /// Extract candidates from raw documents with this trigger lexicon.
        #[arg(long, value_name = "FILE")]
        lexicon: Option<PathBuf>,
        /// Person/organisation training list (`P|O <tab> name`) for typing extracted names.
        #[arg(long, value_name = "FILE", requires = "lexicon")]
        types: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Candidate files, or documents with `--lexicon`; stdin when absent.
        inputs: Vec<PathBuf>,
    },
    /// Add inflected forms of frequently seen names.
    Expand {
        #[command(flatten)]
        common: Common,
        /// Inflection rule file, or a directory of them.
        #[arg(long, value_name = "PATH")]
        rules: PathBuf,
        /// Print the generated patterns and leave the resource alone.
        #[arg(long)]
        pattern_only: bool,
        /// Also add hyphen and particle variants of eligible names.
        #[arg(long)]
        surface_variants: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Apply a moderation edit log; nothing is written unless every edit succeeds.
    Moderate {
        #[command(flatten)]
        common: Common,
        /// Edit log; stdin when absent.
        edits: Option<PathBuf>,
    },
    /// List name variants, optionally only those usable for one language.
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lang: Option<LanguageScope>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Per-script and per-type counts and the names-per-entity histogram.
    Stats {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    MergerConfig::new(t).map(|c| c.threshold()).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    use commands::*;
    match cli.command {
        Command::Compile { common, lang } => compile(&common.resource, lang),
        Command::Match {
            common,
            lang,
            format,
            documents,
        } => annotate(&common.resource, lang, format, &documents),
        Command::Merge {
            common,
            threshold,
            rules,
            lexicon,
            types,
            format,
            inputs,
        } => merge(MergeArgs {
            resource: &common.resource,
            threshold,
            rules: rules.as_deref(),
            lexicon: lexicon.as_deref(),
            types: types.as_deref(),
            format,
            inputs: &inputs,
        }),
        Command::Expand {
            common,
            rules,
            pattern_only,
            surface_variants,
            format,
        } => expand(&common.resource, &rules, pattern_only, surface_variants, format),
        Command::Moderate { common, edits } => moderate(&common.resource, edits.as_deref()),
        Command::Export { common, lang, format } => export(&common.resource, lang, format),
        Command::Stats { common, format } => stats(&common.resource, format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("namebank: {e:#}");
            ExitCode::FAILURE
        }
    }
}
