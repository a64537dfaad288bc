//! `twk`: validate, glue and compare exact twisted complexes from JSON manifests.
//!
//! Exit codes: 0 pass, 1 mathematical failure, 2 input error.

mod commands;
mod examples;
mod manifest;
mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use commands::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "twk", version, about = "Exact checks for twisted complexes and their gluing data")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Maurer–Cartan equation and non-degeneracy of an object, or d∘d = 0 on a morphism.
    Validate {
        file: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Dimensions of H^*(Hom(A, B)) per degree and weight.
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Half-width of the weight box searched for sections.
        #[arg(long)]
        window: Option<i32>,
        /// Degree range, e.g. `0..1`.
        #[arg(long, value_parser = parse_range)]
        degrees: Option<[i32; 2]>,
    },
    /// Twisted complex → totalization → twisted complex, compared componentwise.
    Roundtrip {
        file: PathBuf,
        #[arg(long)]
        object: String,
        /// Random endomorphisms on which both morphism differentials are compared.
        #[arg(long)]
        probes: Option<usize>,
    },
    /// Check an equivariant object and summarize residuals per level.
    Equivariant {
        file: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// List level-k tuples of the cover's nerve and its matching-object witness.
    Nerve {
        file: PathBuf,
        #[arg(long)]
        level: usize,
    },
    /// Print a named example manifest.
    Example {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(examples::NAMES))]
        name: String,
    },
    /// Run the seeded property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials per suite.
        #[arg(long, default_value_t = 12)]
        trials: usize,
        /// Highest simplicial level for the bookkeeping suites.
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Add a known-bad object to the MC suite.
        #[arg(long)]
        inject_bad: bool,
        /// Rerun the single trial recorded in a reproducer manifest.
        #[arg(long, conflicts_with_all = ["seed", "trials", "inject_bad"])]
        replay: Option<PathBuf>,
        /// Write the first reproducer here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<[i32; 2], String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let parse = |x: &str| x.trim().parse::<i32>().map_err(|e| format!("{x:?}: {e}"));
    Ok([parse(a)?, parse(b)?])
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("TWK_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().with_context(|| format!("TWK_THREADS={v:?} is not a thread count"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the worker pool")?;
    }
    Ok(())
}

fn emit(format: Format, out: &Outcome) -> Result<()> {
    match format {
        Format::Text => print!("{}", out.text),
        Format::Json => println!("{}", serde_json::to_string_pretty(&out.json)?),
    }
    Ok(())
}

fn selftest_outcome(results: &[selftest::SuiteResult], out: Option<&Path>) -> Result<Outcome> {
    let json = selftest::to_json(results)?;
    let mut text = String::new();
    for r in results {
        match &r.failure {
            None => text.push_str(&format!("suite {:<10} pass ({} trials)\n", r.suite, r.trials)),
            Some(f) => {
                text.push_str(&format!("suite {:<10} FAIL at trial {}: {}\n", r.suite, f.trial, f.message));
                text.push_str(&format!("reproducer:\n{}\n", serde_json::to_string_pretty(&f.reproducer)?));
            }
        }
    }
    if let Some(path) = out {
        if let Some(f) = results.iter().find_map(|r| r.failure.as_ref()) {
            std::fs::write(path, serde_json::to_string_pretty(&f.reproducer)?)
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    let pass = json.get("pass").and_then(Value::as_bool).unwrap_or(false);
    Ok(Outcome { pass, text, json })
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Validate { file, object } => commands::validate(&manifest::load(&file)?, &object),
        Command::Cohomology { file, from, to, window, degrees } => {
            commands::cohomology(&manifest::load(&file)?, &from, &to, window, degrees)
        }
        Command::Roundtrip { file, object, probes } => {
            let m = manifest::load(&file)?;
            let probes = probes.or(m.options.probes).unwrap_or(8);
            commands::roundtrip(&m, &object, probes)
        }
        Command::Equivariant { file, object } => commands::equivariant(&manifest::load(&file)?, &object),
        Command::Nerve { file, level } => commands::nerve(&manifest::load(&file)?, level),
        Command::Example { name } => {
            let m = examples::example(&name)?;
            let text = format!("{}\n", serde_json::to_string_pretty(&m)?);
            let json = serde_json::to_value(&m)?;
            Ok(Outcome { pass: true, text, json })
        }
        Command::Selftest { seed, trials, levels, inject_bad, replay, out } => {
            let results = match replay {
                Some(path) => vec![selftest::replay(&manifest::load(&path)?, levels)?],
                None => selftest::run(&selftest::Config { seed, trials, levels, inject_bad })?,
            };
            selftest_outcome(&results, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let result = configure_threads().and_then(|()| run(cli)).and_then(|out| emit(format, &out).map(|()| out.pass));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
