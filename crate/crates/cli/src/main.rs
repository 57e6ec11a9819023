//! `swat`: ingest corpora, inspect them, query experts, recommend and score
//! teams, benchmark, and serve the HTTP API.
//!
//! Exit codes: 0 success, 1 file access error, 2 domain error, 3 usage error.

/// `println!` that ends the process quietly when the reader has gone away,
/// as when piping into `head`.
macro_rules! outln {
    ($($arg:tt)*) => {
        $crate::write_line(format_args!($($arg)*))
    };
}

mod bench;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use swat_core::ingest::{
    cross_validate_history, generate_synthetic, parse_corpus, write_corpus, AnomalyAction, SynthParams,
};
use swat_core::model::build_snapshot;
use swat_core::persist::{load_snapshot, save_snapshot};
use swat_core::wire::{self, to_json, RecommendRequest, ScoreRequest, WeightsInput};
use swat_core::{Error, GraphSnapshot};

const EXIT_IO: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "swat",
    version,
    about = "Team recommendation over expertise, social ties and collaboration history"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SnapshotArg {
    /// Snapshot file written by `swat ingest`.
    #[arg(long, env = "SWAT_SNAPSHOT")]
    snapshot: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and clean a corpus directory and write a snapshot file.
    Ingest {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, env = "SWAT_SNAPSHOT")]
        snapshot: PathBuf,
        /// List every anomaly, not just the counts.
        #[arg(long)]
        verbose: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write a seeded synthetic corpus directory.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        individuals: usize,
        #[arg(long, default_value_t = 100)]
        areas: usize,
        #[arg(long, default_value_t = 3000)]
        publications: usize,
        #[arg(long, default_value_t = 1)]
        dimensions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Corpus statistics.
    Stats {
        #[command(flatten)]
        snap: SnapshotArg,
        #[arg(long)]
        json: bool,
    },
    /// Expertise areas matching a partial name.
    Suggest {
        #[command(flatten)]
        snap: SnapshotArg,
        #[arg(long, short)]
        query: String,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Top experts of an area.
    Experts {
        #[command(flatten)]
        snap: SnapshotArg,
        #[arg(long)]
        area: String,
        #[arg(long)]
        k: Option<usize>,
        /// Include holders of related areas, discounted by similarity.
        #[arg(long)]
        expand: bool,
        #[arg(long)]
        json: bool,
    },
    /// Rank the teams formed from the top experts of each area.
    Recommend {
        #[command(flatten)]
        snap: SnapshotArg,
        /// Comma-separated area ids.
        #[arg(long, value_delimiter = ',', required = true)]
        areas: Vec<String>,
        #[arg(long)]
        k: Option<usize>,
        /// e.g. `comp=1,coh=0.5`; unnamed metrics weigh 0. Uniform when omitted.
        #[arg(long)]
        weights: Option<String>,
        /// `avg` or `max`.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Score a hand-picked team.
    Score {
        #[command(flatten)]
        snap: SnapshotArg,
        /// Comma-separated individual ids.
        #[arg(long, value_delimiter = ',', required = true)]
        members: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        areas: Vec<String>,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Time expert queries, each metric and end-to-end recommendation.
    Bench(bench::BenchArgs),
    /// Serve the HTTP API and, optionally, the web UI.
    Serve {
        #[command(flatten)]
        snap: SnapshotArg,
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Directory of the built web UI, served at `/`.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

enum Failure {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { EXIT_IO } else { EXIT_DOMAIN })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn write_line(line: std::fmt::Arguments) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{line}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(i32::from(EXIT_IO));
    }
}

fn weights(arg: Option<&str>) -> Result<Option<WeightsInput>, Error> {
    arg.map(str::parse).transpose()
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Ingest {
            corpus,
            snapshot,
            verbose,
            json,
        } => ingest(&corpus, &snapshot, verbose, json),
        Command::Synth {
            out,
            individuals,
            areas,
            publications,
            dimensions,
            seed,
        } => {
            let params = SynthParams {
                individuals,
                areas,
                publications,
                dimensions,
            };
            let records = generate_synthetic(&params, seed)?;
            write_corpus(&out, &records)?;
            outln!("wrote {} records to {}", records.record_count(), out.display());
            Ok(())
        }
        Command::Stats { snap, json } => {
            let s = load_snapshot(&snap.snapshot)?;
            let stats = wire::stats(&s);
            if json {
                outln!("{}", to_json(&stats));
            } else {
                print_stats(&stats);
            }
            Ok(())
        }
        Command::Suggest {
            snap,
            query,
            limit,
            json,
        } => {
            let s = load_snapshot(&snap.snapshot)?;
            let hits = wire::suggest(&s, &query, limit);
            if json {
                outln!("{}", to_json(&hits));
            } else {
                for h in &hits {
                    outln!("{:<10} {:>5.1}  {}", h.area_id, h.score, h.name);
                }
            }
            Ok(())
        }
        Command::Experts {
            snap,
            area,
            k,
            expand,
            json,
        } => {
            let s = load_snapshot(&snap.snapshot)?;
            let r = wire::experts(&s, &area, k, expand)?;
            if json {
                outln!("{}", to_json(&r));
            } else {
                outln!("experts in {} ({})", r.area.name, r.area.id);
                for e in &r.experts {
                    let via = e.via.as_deref().map(|v| format!("  via {v}")).unwrap_or_default();
                    outln!("{:>3}. {:.4}  {} ({}){via}", e.rank, e.competence, e.name, e.id);
                }
            }
            Ok(())
        }
        Command::Recommend {
            snap,
            areas,
            k,
            weights: w,
            mode,
            limit,
            json,
        } => {
            let req = RecommendRequest {
                areas,
                k,
                weights: weights(w.as_deref())?,
                mode,
                limit,
            };
            let s = load_snapshot(&snap.snapshot)?;
            let r = wire::recommend(&s, &req)?;
            if json {
                outln!("{}", to_json(&r));
            } else {
                print_recommendation(&r);
            }
            Ok(())
        }
        Command::Score {
            snap,
            members,
            areas,
            weights: w,
            mode,
            json,
        } => {
            let req = ScoreRequest {
                members,
                areas,
                weights: weights(w.as_deref())?,
                mode,
            };
            let s = load_snapshot(&snap.snapshot)?;
            let r = wire::score(&s, &req)?;
            if json {
                outln!("{}", to_json(&r));
            } else {
                print_score(&r);
            }
            Ok(())
        }
        Command::Bench(args) => bench::run(&args),
        Command::Serve { snap, addr, ui_dir } => {
            let s = load_snapshot(&snap.snapshot)?;
            serve(s, addr, ui_dir)
        }
    }
}

fn ingest(corpus: &PathBuf, snapshot: &PathBuf, verbose: bool, json: bool) -> Outcome {
    let (records, mut report) = parse_corpus(corpus)?;
    let (records, derived) = cross_validate_history(records);
    report.extend(derived);
    let s = build_snapshot(&records)?;
    save_snapshot(&s, snapshot)?;
    if json {
        outln!(
            "{}",
            to_json(&serde_json::json!({
                "snapshot": snapshot,
                "individuals": s.individuals().len(),
                "areas": s.areas().len(),
                "history_teams": s.history().len(),
                "anomalies": report.entries,
            }))
        );
        return Ok(());
    }
    if verbose {
        for a in &report.entries {
            eprintln!("{}: {} ({:?})", a.at, a.rule, a.action);
        }
    }
    outln!(
        "snapshot {}: {} individuals, {} areas, {} history teams",
        snapshot.display(),
        s.individuals().len(),
        s.areas().len(),
        s.history().len()
    );
    outln!(
        "anomalies: {} clamped, {} dropped, {} derived edges",
        report.count(AnomalyAction::Clamped),
        report.count(AnomalyAction::Dropped),
        report.count(AnomalyAction::DerivedEdgeAdded)
    );
    Ok(())
}

fn serve(s: GraphSnapshot, addr: SocketAddr, ui_dir: Option<PathBuf>) -> Outcome {
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    let state = swat_service::AppState::new(s);
    eprintln!("listening on http://{addr}");
    runtime.block_on(swat_service::serve(addr, state, ui_dir))?;
    Ok(())
}

fn print_stats(st: &swat_core::ingest::CorpusStats) {
    outln!("individuals            {}", st.individuals_count);
    outln!("expertise areas        {}", st.concepts_count);
    outln!("history teams          {}", st.teams_count);
    outln!("publications           {}", st.publications_count);
    outln!("connections/individual {:.3}", st.avg_connections_per_individual);
    outln!("individuals/team       {:.3}", st.avg_individuals_per_team);
    outln!("largest team           {}", st.max_individuals_per_team);
    outln!("organizations          {}", st.organizations_count);
    outln!("countries              {}", st.countries_count);
    outln!("authors  publications  cdf");
    for (n, count) in &st.authors_histogram {
        outln!("{n:>7}  {count:>12}  {:.4}", st.authors_cdf[n]);
    }
    outln!("year  single-author  max authors");
    for (year, share) in &st.yearly_single_author_pct {
        outln!(
            "{year:>4}  {:>12.1}%  {:>11}",
            share * 100.0,
            st.yearly_max_authors[year]
        );
    }
}

fn print_recommendation(r: &wire::RecommendResponse) {
    outln!(
        "{} combinations, {} distinct teams scored, k={}, mode={}",
        r.candidates_enumerated,
        r.candidates_scored,
        r.k,
        r.mode
    );
    for t in &r.teams {
        let names: Vec<String> = t.members.iter().map(|m| format!("{} ({})", m.name, m.id)).collect();
        outln!(
            "{:>3}. total {:.4}  comp {:.4}  coh {:.4}  tur {}  tcr {:.4}  {}",
            t.rank,
            t.total,
            t.raw.competence,
            t.raw.cohesiveness,
            t.raw.user_repetition,
            t.raw.concept_repetition,
            names.join(", ")
        );
    }
}

fn print_score(r: &wire::ScoreResponse) {
    outln!("total {:.4}", r.total);
    outln!(
        "competence {:.4}  cohesiveness {:.4}  user repetition {}  concept repetition {:.4}",
        r.raw.competence,
        r.raw.cohesiveness,
        r.raw.user_repetition,
        r.raw.concept_repetition
    );
    for e in &r.assignment {
        outln!("  {}: {}", e.area, e.members.join(", "));
    }
    for d in &r.distances {
        let hops = d.hops.map_or_else(|| "unreachable".to_string(), |h| h.to_string());
        outln!("  {} - {}: {hops}", d.a, d.b);
    }
}
