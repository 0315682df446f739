//! `faithful`: identity testing, transcendence degree, faithful maps and
//! hitting sets from the command line.
//!
//! Every output is JSON, one value per line, and embeds the run
//! configuration so that `faithful verify` can reproduce and re-check it.
//!
//! Exit codes: 0 Zero (or success), 1 Nonzero (or a failed check),
//! 2 inconclusive or over budget, 3 unparseable input, 4 any other error
//! (including bad command-line usage).

mod config;
mod run;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use faithful::{Error, FieldSpec};
use serde_json::json;

use config::{
    parse_field, Budgets, Construction, CorpusArg, MapKind, Method, Mode, RankArg, RunConfig, SetParams, Task,
    ZeroTestArg,
};

#[derive(Parser)]
#[command(name = "faithful", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Field: a prime `p`, `p^k`, or `rational`. Must match the input file's field.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<FieldSpec>,
    /// Parameter enumeration for map searches and hitting sets.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Adaptive)]
    mode: Mode,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Points evaluated (or streamed) before giving up.
    #[arg(long, global = true)]
    max_points: Option<u64>,
    /// Term budget for brute-force expansion.
    #[arg(long, global = true)]
    budget_expand: Option<usize>,
    /// Column budget for annihilator searches.
    #[arg(long, global = true)]
    budget_annihilator: Option<usize>,
    /// Map candidates tried before giving up.
    #[arg(long, global = true)]
    budget_candidates: Option<u64>,
    /// Rank bound R for depth-4 circuits (default: the trivial bound ks).
    #[arg(long = "R", global = true, conflicts_with = "conjecture_r")]
    rank_bound: Option<usize>,
    /// Use the unproven bound R = min(δk, ks).
    #[arg(long = "conjecture-R", global = true)]
    conjecture_r: bool,
    /// Evaluate on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Blackbox identity test of a circuit file.
    Pit {
        circuit: PathBuf,
        /// Schwartz-Zippel cross-check with this many random points instead.
        #[arg(long)]
        randomized: Option<u64>,
    },
    /// Transcendence degree of a polynomial list, with certificate.
    Trdeg {
        polys: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Annihilating polynomial of total degree at most `cap`, or "none".
    Annihilator {
        polys: PathBuf,
        #[arg(long)]
        cap: u32,
    },
    /// Gcd part, simple part, minimality and rank of a depth-4 circuit.
    Depth4 {
        circuit: PathBuf,
        #[arg(long, value_enum, default_value_t = ZeroTestArg::Auto)]
        zero_test: ZeroTestArg,
    },
    /// Streams the points of a hitting set.
    HittingSet {
        #[arg(long, value_enum)]
        construction: Construction,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long, default_value_t = 1)]
        delta: u64,
        #[arg(long, default_value_t = 1)]
        ell: u64,
        #[arg(long, default_value_t = 2)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        s: u64,
    },
    /// Certified faithful map for a polynomial list.
    Faithful {
        polys: PathBuf,
        #[arg(long, value_enum)]
        kind: MapKind,
        /// Target rank (default: the transcendence degree).
        #[arg(long)]
        r: Option<usize>,
    },
    /// Reruns a saved output and re-checks its witnesses and certificates.
    Verify { saved: PathBuf },
    /// Seeded instances judged by PIT and by expansion.
    Corpus {
        #[arg(long, value_enum)]
        kind: CorpusArg,
        /// Characteristic for `small-char`.
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
    },
}

fn config(global: Global, command: Command) -> RunConfig {
    let defaults = Budgets::default();
    let task = match command {
        Command::Pit { circuit, randomized } => Task::Pit {
            input: circuit,
            randomized,
        },
        Command::Trdeg { polys, method } => Task::Trdeg { input: polys, method },
        Command::Annihilator { polys, cap } => Task::Annihilator { input: polys, cap },
        Command::Depth4 { circuit, zero_test } => Task::Depth4 {
            input: circuit,
            zero_test,
        },
        Command::HittingSet {
            construction,
            n,
            d,
            r,
            delta,
            ell,
            k,
            s,
        } => Task::HittingSet {
            construction,
            params: SetParams { n, d, r, delta, ell, k, s },
        },
        Command::Faithful { polys, kind, r } => Task::Faithful { input: polys, kind, r },
        Command::Corpus { kind, p, count } => Task::Corpus { kind, p, count },
        Command::Verify { .. } => unreachable!("verify carries no config"),
    };
    RunConfig {
        task,
        field: global.field,
        mode: global.mode,
        seed: global.seed,
        budgets: Budgets {
            expand_terms: global.budget_expand.unwrap_or(defaults.expand_terms),
            pit_points: global.max_points.unwrap_or(defaults.pit_points),
            annihilator_columns: global.budget_annihilator.unwrap_or(defaults.annihilator_columns),
            map_candidates: global.budget_candidates.unwrap_or(defaults.map_candidates),
        },
        rank_bound: match (global.rank_bound, global.conjecture_r) {
            (Some(r), _) => RankArg::Given(r),
            (None, true) => RankArg::Conjecture,
            (None, false) => RankArg::Trivial,
        },
        sequential: global.sequential,
        output: global.output,
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Budget { .. } | Error::Exhausted(_)) => 2,
        Some(Error::Parse { .. } | Error::Json(_)) => 3,
        _ if err.downcast_ref::<serde_json::Error>().is_some() => 3,
        _ => 4,
    }
}

fn sink(output: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn main_inner(cli: Cli) -> anyhow::Result<u8> {
    let output = cli.global.output.clone();
    let mut out = sink(output.as_ref())?;
    let mut emit = |v: serde_json::Value| -> anyhow::Result<()> {
        serde_json::to_writer(&mut out, &v)?;
        out.write_all(b"\n")?;
        Ok(())
    };
    let code = match cli.command {
        Command::Verify { saved } => {
            let (report, ok) = verify::verify(&saved)?;
            emit(report)?;
            u8::from(!ok)
        }
        command => {
            let cfg = config(cli.global, command);
            match run::run(&cfg, &mut emit) {
                Err(e) if exit_code(&e) == 2 => {
                    emit(json!({
                        "outcome": "inconclusive-budget",
                        "guarantee": "inconclusive",
                        "error": format!("{e:#}"),
                        "config": cfg.to_json(),
                    }))?;
                    eprintln!("faithful: {e:#}");
                    2
                }
                other => other?,
            }
        }
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("faithful: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
