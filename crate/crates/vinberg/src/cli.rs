//! Argument parsing and exit codes.
//!
//! Reports go to stdout, diagnostics to stderr. Exit codes: 0 success or
//! Yes, 3 a No verdict, 2 any error or invalid input.

use std::ffi::OsString;
use std::fs;
use std::io::Read;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use vinberg_core::decision::Question;
use vinberg_core::Mode;

use crate::commands::{self, Output};
use crate::input::InputDocument;
use crate::load::{load, Options};
use crate::report;

#[derive(Parser, Debug)]
#[command(name = "vinberg", version, about = "Coxeter polytopes, Vinberg representations and their convex domains")]
pub struct Cli {
    /// Arithmetic mode; overrides the document's "mode" field.
    #[arg(long, global = true, env = "VINBERG_MODE", value_enum)]
    pub mode: Option<ModeArg>,
    /// Tolerance for approximate arithmetic.
    #[arg(long, global = true, default_value_t = vinberg_core::scalar::DEFAULT_EPS)]
    pub eps: f64,
    /// Largest number of facets accepted.
    #[arg(long, global = true, default_value_t = vinberg_core::polytope::DEFAULT_MAX_FACETS)]
    pub max_facets: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Exact,
    Approx,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum QuestionArg {
    FiniteVolume,
    UniqueDomain,
    MinEqualsVinberg,
    LimitSetFillsBoundaryNecessary,
}

impl From<QuestionArg> for Question {
    fn from(q: QuestionArg) -> Self {
        match q {
            QuestionArg::FiniteVolume => Question::FiniteVolume,
            QuestionArg::UniqueDomain => Question::UniqueDomain,
            QuestionArg::MinEqualsVinberg => Question::MinDomainEqualsVinberg,
            QuestionArg::LimitSetFillsBoundaryNecessary => Question::LimitSetFillsBoundaryNecessary,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the Cartan axioms and the polytope.
    Validate { input: PathBuf },
    /// Matrix type, group class and representation data.
    Classify { input: PathBuf },
    /// Every face with its parabolic or loxodromic kind.
    Faces { input: PathBuf },
    /// Answer one of the decision questions (exit 0 yes, 3 no).
    Decide {
        #[arg(value_enum)]
        question: QuestionArg,
        input: PathBuf,
    },
    /// Monte Carlo Busemann volume of truncated domains (dimension 2).
    Volume {
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw the tiling up to a word length (dimension 2).
    Tile {
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample attracting fixed points of random group elements.
    LimitSet {
        input: PathBuf,
        /// Word length.
        #[arg(long, default_value_t = 10)]
        words: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

impl Command {
    fn input(&self) -> &PathBuf {
        match self {
            Command::Validate { input }
            | Command::Classify { input }
            | Command::Faces { input }
            | Command::Decide { input, .. }
            | Command::Volume { input, .. }
            | Command::Tile { input, .. }
            | Command::LimitSet { input, .. } => input,
        }
    }
}

fn read_input(path: &PathBuf) -> Result<InputDocument> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    InputDocument::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Output> {
    let opts = Options {
        mode: cli.mode.map(|m| match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Approx => Mode::Approx,
        }),
        eps: cli.eps,
        max_facets: cli.max_facets,
    };
    let doc = read_input(cli.command.input())?;
    if let Command::Validate { .. } = cli.command {
        return commands::validate(&doc, &opts);
    }
    let loaded = load(&doc, &opts)?;
    match &cli.command {
        Command::Validate { .. } => unreachable!(),
        Command::Classify { .. } => commands::classify(&loaded),
        Command::Faces { .. } => commands::faces(&loaded, &opts),
        Command::Decide { question, .. } => commands::decide(&loaded, (*question).into(), &opts),
        Command::Volume { depth, samples, seed, out, .. } => commands::volume(&loaded, *depth, *samples, *seed, out.as_deref()),
        Command::Tile { depth, out, .. } => commands::tile(&loaded, *depth, out),
        Command::LimitSet { words, count, seed, out, svg, .. } => commands::limit_set(&loaded, *words, *count, *seed, out, svg.as_deref()),
    }
}

/// Parses, runs and prints; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", report::render(&out.report));
            out.outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
