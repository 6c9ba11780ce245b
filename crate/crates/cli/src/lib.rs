//! Command-line front end.
//!
//! [`run`] parses arguments, runs one command and returns the exit code:
//! [`EXIT_OK`] on a positive answer, [`EXIT_NEGATIVE`] on a negative one
//! or a failed battery, [`EXIT_ERROR`] on bad input, [`EXIT_EXHAUSTED`]
//! when a search finds nothing.

mod input;
mod query;
mod search;
mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ik_lab::points::Semantics;

pub use search::Predicate;
pub use verify::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "ik-lab",
    version,
    about = "Ideal convergence on finite topological spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where an instance comes from: a config file, flags, or both (flags win).
#[derive(Args, Debug, Default, Clone)]
pub(crate) struct InstanceArgs {
    /// JSON instance description.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Builtin name (`sierpinski`, `discrete:3`, ...) or a JSON space.
    #[arg(long)]
    space: Option<String>,
    /// `omega` or `finite:n`.
    #[arg(long)]
    domain: Option<String>,
    /// The ideal `I`: `Fin`, `I0`, `principal:[..]` or JSON `{"gen": [..]}`.
    #[arg(long = "I", value_name = "IDEAL")]
    i: Option<String>,
    /// The ideal `K`, same forms as `--I`.
    #[arg(long = "K", value_name = "IDEAL")]
    k: Option<String>,
    /// Values `b,a,b,a` on a finite domain, or JSON `{"head": [..], "period": [..]}`.
    #[arg(long)]
    function: Option<String>,
    /// Mode expression such as `I^K`, `I^K*`, `IuK`.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    point: Option<String>,
    /// Point set such as `[a]` or `a,b`.
    #[arg(long)]
    set: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the function converges to the point in the mode.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Use the definition-following evaluator.
        #[arg(long)]
        oracle: bool,
    },
    /// Limits in the mode, and I^K-limit points on ω.
    Limits {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_parser = parse_semantics)]
        semantics: Option<Semantics>,
        #[arg(long)]
        oracle: bool,
    },
    /// I^K-cluster points, with the set deciding each point.
    Cluster {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_parser = parse_semantics)]
        semantics: Option<Semantics>,
    },
    /// Whether a set is mode-open (or mode-closed).
    Open {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Ask for mode-closedness instead.
        #[arg(long)]
        closed: bool,
    },
    /// Whether every mode-open set is open.
    Sequential {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Run a verification battery and print a JSON report.
    Verify {
        suite: Suite,
        /// Comma-separated `key=value` bounds, e.g. `k=3,n=4,p=6,m=6`.
        #[arg(long)]
        bounds: Option<String>,
        /// Restrict the cluster-point battery to one reading.
        #[arg(long, value_parser = parse_semantics)]
        semantics: Option<Semantics>,
        /// Also write the report here.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        /// Drive the mode-relation battery with the definition-following evaluator.
        #[arg(long)]
        oracle: bool,
    },
    /// Search small models for instances matching a predicate.
    Search {
        predicate: Predicate,
        /// `k` points, finite domain `n`, modulus `m`, period `p`.
        #[arg(long)]
        bounds: Option<String>,
        #[arg(long, value_enum, default_value_t = DomainKind::Finite)]
        domain: DomainKind,
        /// Mode that must converge (converges-in-not-in).
        #[arg(long = "in", default_value = "I^K")]
        in_mode: String,
        /// Modes that must not converge (converges-in-not-in); default `I` and `K`.
        #[arg(long = "not-in")]
        not_in: Vec<String>,
        /// Only ideal pairs whose join is proper.
        #[arg(long)]
        proper: bool,
        /// Only discrete spaces.
        #[arg(long)]
        discrete: bool,
        /// Stop after this many matches; 0 for all.
        #[arg(long, default_value_t = 1)]
        limit: usize,
    },
    /// Count topologies on a few points.
    Enumerate {
        #[arg(long, value_name = "K")]
        spaces: usize,
        /// Print every space up to homeomorphism.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum DomainKind {
    Finite,
    Omega,
}

fn parse_semantics(s: &str) -> Result<Semantics, String> {
    s.parse().map_err(|e: ik_lab::Error| e.to_string())
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_ERROR;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match cli.command {
        Command::Check { instance, oracle } => query::check(&instance, oracle, out),
        Command::Limits {
            instance,
            semantics,
            oracle,
        } => query::limits(&instance, semantics, oracle, out),
        Command::Cluster {
            instance,
            semantics,
        } => query::cluster(&instance, semantics, out),
        Command::Open { instance, closed } => query::open(&instance, closed, out),
        Command::Sequential { instance } => query::sequential(&instance, out),
        Command::Verify {
            suite,
            bounds,
            semantics,
            report,
            oracle,
        } => verify::verify(
            suite,
            bounds.as_deref(),
            semantics,
            report.as_deref(),
            oracle,
            out,
            err,
        ),
        Command::Search {
            predicate,
            bounds,
            domain,
            in_mode,
            not_in,
            proper,
            discrete,
            limit,
        } => {
            let opts = search::Options {
                domain,
                in_mode,
                not_in,
                proper,
                discrete,
                limit,
            };
            search::search(predicate, bounds.as_deref(), &opts, out, err)
        }
        Command::Enumerate { spaces, list } => query::enumerate(spaces, list, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}
