//! `bifol`: command-line front end. Every verb prints a JSON report on
//! stdout (or the requested artifact when no `--out` is given for verbs that
//! emit one) and exits with
//!
//! * 0 — all requested checks pass,
//! * 1 — usage or I/O error,
//! * 2 — the input does not parse or validate,
//! * 3 — a property check fails,
//! * 4 — the census budget would be exceeded.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use bifol::graphs::GraphKind;
use bifol::walls::WallKind;
use bifol::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bifol", version, about = "Finite and periodic models of bifoliated planes")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone, Copy)]
pub struct Window {
    /// Index window `LO:HI` used to materialize a periodic input.
    #[arg(long, value_parser = parse_window)]
    pub window: Option<(i64, i64)>,
}

#[derive(Subcommand)]
enum Verb {
    /// Parse and validate a pattern file.
    Validate { file: PathBuf },
    /// Write a fixture or a seeded random pattern.
    Gen {
        /// Fixture kind, or `random`.
        kind: String,
        /// Size parameter of the kind.
        #[arg(long)]
        param: Option<i64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        max_leaves: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build a leaf graph; DOT to `--out` or stdout.
    Graph {
        file: PathBuf,
        #[arg(long, value_parser = parse_graph_kind, default_value = "xplus")]
        kind: GraphKind,
        #[command(flatten)]
        window: Window,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Graph distance between two leaves, or the full table as CSV.
    Dist {
        file: PathBuf,
        #[arg(long, value_parser = parse_graph_kind, default_value = "xplus")]
        kind: GraphKind,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
        #[command(flatten)]
        window: Window,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Bottleneck certificate for leaf graphs of one or more patterns.
    Bottleneck {
        files: Vec<PathBuf>,
        #[arg(long = "K", default_value_t = 3)]
        k: u32,
        /// Graph kinds to certify.
        #[arg(long, value_delimiter = ',', value_parser = parse_graph_kind,
              default_value = "xplus,xminus,gammaplus,gammaminus")]
        kinds: Vec<GraphKind>,
        /// Also certify this many seeded random patterns.
        #[arg(long, default_value_t = 0)]
        random: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        max_leaves: usize,
        #[command(flatten)]
        window: Window,
    },
    /// Wall metrics: axioms and comparison with the leaf graphs.
    Metric {
        file: PathBuf,
        /// One of dH, d+, d-, dR+, dR-; all five when omitted.
        #[arg(long, value_parser = parse_wall_kind)]
        kind: Option<WallKind>,
        #[command(flatten)]
        window: Window,
        /// Write the distance matrix of `--kind` as CSV.
        #[arg(short, long, requires = "kind")]
        out: Option<PathBuf>,
    },
    /// Lozenges, chains and the quadrant claim.
    Lozenges {
        file: PathBuf,
        #[command(flatten)]
        window: Window,
    },
    /// Classify a declared automorphism of a periodic pattern.
    Classify {
        file: PathBuf,
        #[arg(long, default_value = "shift")]
        element: String,
        /// Window size in leaf indices; 4 periods when omitted.
        #[arg(long)]
        window: Option<i64>,
        #[arg(long, default_value_t = 16)]
        nmax: u32,
        /// Fail (exit 3) unless the verdict has this type.
        #[arg(long, value_enum)]
        expect: Option<Verdict>,
    },
    /// Scan a word ball for elements moving two far leaves by less than ε.
    Wpd {
        file: PathBuf,
        #[arg(long, default_value = "shift")]
        element: String,
        /// Base plus-leaf index.
        #[arg(long, default_value_t = 0)]
        base: i64,
        #[arg(long, default_value_t = 1)]
        eps: u32,
        #[arg(long, default_value_t = 8)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[arg(long)]
        window: Option<i64>,
    },
    /// Word-ball census of fixed and free elements.
    Census {
        #[arg(long, value_enum, default_value = "skew")]
        model: ModelArg,
        /// Generators file; the model's standard set when omitted.
        #[arg(long)]
        gens: Option<PathBuf>,
        /// Periodic pattern for `--model pattern`.
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        nmax: u32,
        /// Skew model only: `shift` or comma-separated offsets of `h`.
        #[arg(long)]
        h: Option<String>,
        /// Write the per-radius rows as CSV.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write a pattern as canonical JSON, a graph as DOT, or distances as CSV.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long, value_parser = parse_graph_kind, default_value = "xplus")]
        kind: GraphKind,
        #[command(flatten)]
        window: Window,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Verdict {
    Loxodromic,
    Elliptic,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Trivial,
    Skew,
    Pattern,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Csv,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

fn parse_graph_kind(s: &str) -> Result<GraphKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_wall_kind(s: &str) -> Result<WallKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure classes, each with its exit code.
pub enum Failure {
    Usage(String),
    Data(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Invalid(_) | Error::Parse { .. } => Failure::Data(e.to_string()),
            Error::Budget { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.verb {
        Verb::Validate { file } => commands::validate(&file),
        Verb::Gen { kind, param, seed, max_leaves, out } => {
            commands::gen(&kind, param, seed, max_leaves, out.as_deref())
        }
        Verb::Graph { file, kind, window, out } => commands::graph(&file, kind, window, out.as_deref()),
        Verb::Dist { file, kind, from, to, window, out } => {
            commands::dist(&file, kind, from.zip(to), window, out.as_deref())
        }
        Verb::Bottleneck { files, k, kinds, random, seed, max_leaves, window } => {
            commands::bottleneck(&files, k, &kinds, random, seed, max_leaves, window)
        }
        Verb::Metric { file, kind, window, out } => commands::metric(&file, kind, window, out.as_deref()),
        Verb::Lozenges { file, window } => commands::lozenges(&file, window),
        Verb::Classify { file, element, window, nmax, expect } => {
            commands::classify(&file, &element, window, nmax, expect)
        }
        Verb::Wpd { file, element, base, eps, n, radius, window } => {
            commands::wpd(&file, &element, base, eps, n, radius, window)
        }
        Verb::Census { model, gens, pattern, nmax, h, out } => {
            commands::census(model, gens.as_deref(), pattern.as_deref(), nmax, h.as_deref(), out.as_deref())
        }
        Verb::Export { file, format, kind, window, out } => commands::export(&file, format, kind, window, &out),
    };
    match outcome {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(r)) => {
            print!("{}", bifol::io::to_canonical_json(&r).expect("report serializes"));
            ExitCode::from(if r.pass() { 0 } else { 3 })
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (1, m),
                Failure::Data(m) => (2, m),
                Failure::Budget(m) => (4, m),
            };
            eprintln!("bifol: {msg}");
            ExitCode::from(code)
        }
    }
}
