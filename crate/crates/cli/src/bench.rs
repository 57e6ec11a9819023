use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde::{Deserialize, Serialize};

use swat_core::concepts::top_experts_ix;
use swat_core::metrics::{
    cohesiveness_with, competence_score, concept_repetition_with, team_user_repetition, ConceptJaccards, DistanceCache,
};
use swat_core::model::DEFAULT_HORIZON;
use swat_core::persist::load_snapshot;
use swat_core::teams::{enumerate_candidates, rank_candidates, MetricWeights, DEFAULT_CANDIDATE_CAP};
use swat_core::{AreaIx, CompetenceMode, Error, GraphSnapshot};

use crate::{Failure, Outcome};

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, env = "SWAT_SNAPSHOT")]
    snapshot: PathBuf,
    #[arg(long, default_value_t = 2)]
    areas_min: usize,
    #[arg(long, default_value_t = 4)]
    areas_max: usize,
    #[arg(long, default_value_t = 20)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Largest number of combinations to enumerate.
    #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
    cap: u64,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub phase: String,
    pub areas_count: usize,
    pub k: usize,
    pub candidates_scored: u64,
    pub elapsed_ms: f64,
    pub reps: usize,
}

const PHASES: [&str; 6] = [
    "expert_query",
    "metric_competence",
    "metric_cohesiveness",
    "metric_tur",
    "metric_tcr",
    "end_to_end",
];

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn timed(f: impl FnOnce()) -> f64 {
    let start = Instant::now();
    f();
    start.elapsed().as_secs_f64() * 1000.0
}

/// Areas with at least one competence holder, most holders first.
fn populated_areas(s: &GraphSnapshot) -> Vec<AreaIx> {
    let mut areas: Vec<AreaIx> = (0..s.areas().len() as u32)
        .map(AreaIx)
        .filter(|&a| s.holder_count(a) > 0)
        .collect();
    areas.sort_by_key(|&a| (std::cmp::Reverse(s.holder_count(a)), a));
    areas
}

/// Timings for one area count, medians over `reps`.
fn measure(s: &GraphSnapshot, required: &[AreaIx], k: usize, reps: usize, cap: u64) -> Result<Vec<BenchRow>, Error> {
    let mode = CompetenceMode::Avg;
    let enumeration = enumerate_candidates(s, required, k, cap)?;
    let candidates = &enumeration.candidates;
    let mut samples: Vec<Vec<f64>> = vec![Vec::with_capacity(reps); PHASES.len()];
    for _ in 0..reps {
        samples[0].push(timed(|| {
            for &a in required {
                top_experts_ix(s, a, k, false).expect("validated area");
            }
        }));
        samples[1].push(timed(|| {
            for c in candidates {
                competence_score(s, &c.assignment, mode).expect("non-empty assignment");
            }
        }));
        samples[2].push(timed(|| {
            let cache = DistanceCache::for_teams(s, candidates.iter().map(|c| c.members.as_slice()), DEFAULT_HORIZON);
            for c in candidates {
                cohesiveness_with(&c.members, &cache);
            }
        }));
        samples[3].push(timed(|| {
            for c in candidates {
                team_user_repetition(s, &c.members);
            }
        }));
        samples[4].push(timed(|| {
            let jaccards = ConceptJaccards::new(s, required);
            for c in candidates {
                concept_repetition_with(s, &c.members, &jaccards);
            }
        }));
        let mut result = Ok(());
        samples[5].push(timed(|| {
            result = enumerate_candidates(s, required, k, cap)
                .and_then(|e| rank_candidates(s, &e.candidates, MetricWeights::uniform(), mode, 20))
                .map(drop);
        }));
        result?;
    }
    Ok(PHASES
        .iter()
        .zip(samples)
        .map(|(phase, xs)| BenchRow {
            phase: phase.to_string(),
            areas_count: required.len(),
            k,
            candidates_scored: enumeration.combinations,
            elapsed_ms: median(xs),
            reps,
        })
        .collect())
}

pub fn bench_rows(
    s: &GraphSnapshot,
    areas_min: usize,
    areas_max: usize,
    k: usize,
    reps: usize,
    cap: u64,
) -> Result<Vec<BenchRow>, Error> {
    if areas_min < 2 {
        return Err(Error::InvalidArgument("--areas-min must be at least 2".into()));
    }
    if areas_max < areas_min {
        return Err(Error::InvalidArgument(
            "--areas-max must not be below --areas-min".into(),
        ));
    }
    if k == 0 || reps == 0 {
        return Err(Error::InvalidArgument("--k and --reps must be at least 1".into()));
    }
    let populated = populated_areas(s);
    if populated.len() < areas_max {
        return Err(Error::InsufficientAreas {
            needed: areas_max,
            available: populated.len(),
        });
    }
    let mut rows = Vec::new();
    for q in areas_min..=areas_max {
        rows.extend(measure(s, &populated[..q], k, reps, cap)?);
    }
    Ok(rows)
}

pub fn run(args: &BenchArgs) -> Outcome {
    let s = load_snapshot(&args.snapshot)?;
    let rows = bench_rows(&s, args.areas_min, args.areas_max, args.k, args.reps, args.cap)?;
    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(std::fs::File::create(path).map_err(Failure::Io)?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for row in &rows {
        w.serialize(row).map_err(|e| Failure::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}
