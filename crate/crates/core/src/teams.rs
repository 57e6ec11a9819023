//! Candidate enumeration, weighted ranking and ad-hoc team scoring.

use std::collections::HashMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concepts::top_experts_ix;
use crate::error::{Error, Result};
use crate::metrics::{self, Assignment, CompetenceMode, ConceptJaccards, DirectDistance, DistanceCache, MetricValues};
use crate::model::{AreaIx, GraphSnapshot, PersonIx, DEFAULT_HORIZON};

/// Enumeration refuses to expand more combinations than this by default.
pub const DEFAULT_CANDIDATE_CAP: u64 = 200_000;

/// Relative importance of the four metrics, stored normalized to sum 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricWeights {
    pub competence: f64,
    pub cohesiveness: f64,
    pub user_repetition: f64,
    pub concept_repetition: f64,
}

impl MetricWeights {
    pub fn new(competence: f64, cohesiveness: f64, user_repetition: f64, concept_repetition: f64) -> Result<Self> {
        let raw = [competence, cohesiveness, user_repetition, concept_repetition];
        if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument(
                "metric weights must be finite and non-negative".into(),
            ));
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidArgument(
                "at least one metric weight must be positive".into(),
            ));
        }
        Ok(Self {
            competence: competence / sum,
            cohesiveness: cohesiveness / sum,
            user_repetition: user_repetition / sum,
            concept_repetition: concept_repetition / sum,
        })
    }

    pub fn uniform() -> Self {
        Self {
            competence: 0.25,
            cohesiveness: 0.25,
            user_repetition: 0.25,
            concept_repetition: 0.25,
        }
    }

    fn combine(&self, n: &NormalizedMetrics) -> f64 {
        self.competence * n.competence
            + self.cohesiveness * n.cohesiveness
            + self.user_repetition * n.user_repetition
            + self.concept_repetition * n.concept_repetition
    }
}

impl Default for MetricWeights {
    fn default() -> Self {
        Self::uniform()
    }
}

/// Parses `name=value` pairs separated by commas into raw weights in the
/// order competence, cohesiveness, user repetition, concept repetition.
/// Unnamed metrics weigh 0. Names: `comp`/`competence`,
/// `coh`/`cohesiveness`, `tur`/`user_repetition`, `tcr`/`concept_repetition`.
pub(crate) fn parse_weight_list(s: &str) -> Result<[f64; 4]> {
    let mut w = [0.0f64; 4];
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected name=value, got `{part}`")))?;
        let slot = match name.trim() {
            "comp" | "competence" => 0,
            "coh" | "cohesiveness" => 1,
            "tur" | "user_repetition" => 2,
            "tcr" | "concept_repetition" => 3,
            other => return Err(Error::InvalidArgument(format!("unknown metric `{other}`"))),
        };
        w[slot] = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad weight `{value}` for `{name}`")))?;
    }
    Ok(w)
}

impl FromStr for MetricWeights {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let [a, b, c, d] = parse_weight_list(s)?;
        Self::new(a, b, c, d)
    }
}

/// Metric values mapped onto [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedMetrics {
    pub competence: f64,
    pub cohesiveness: f64,
    pub user_repetition: f64,
    pub concept_repetition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreCard {
    pub raw: MetricValues,
    pub normalized: NormalizedMetrics,
    pub total: f64,
    pub weights: MetricWeights,
}

impl ScoreCard {
    fn new(raw: MetricValues, user_repetition_norm: f64, weights: MetricWeights) -> Self {
        let normalized = NormalizedMetrics {
            competence: raw.competence,
            cohesiveness: raw.cohesiveness,
            user_repetition: user_repetition_norm,
            concept_repetition: raw.concept_repetition,
        };
        Self {
            raw,
            normalized,
            total: weights.combine(&normalized),
            weights,
        }
    }
}

/// A member set with the areas each member was picked for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateTeam {
    /// Sorted, at least two.
    pub members: Vec<PersonIx>,
    pub assignment: Assignment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedTeam {
    pub team: CandidateTeam,
    pub scorecard: ScoreCard,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    /// Top-k experts per required area, in required order.
    pub slates: Vec<Vec<PersonIx>>,
    /// Product of the slate sizes: combinations examined before merging.
    pub combinations: u64,
    /// Distinct member sets with at least two members, sorted by members.
    pub candidates: Vec<CandidateTeam>,
}

fn check_required(snapshot: &GraphSnapshot, required: &[AreaIx]) -> Result<()> {
    if required.is_empty() {
        return Err(Error::InvalidArgument("no expertise areas requested".into()));
    }
    for (n, a) in required.iter().enumerate() {
        if a.index() >= snapshot.areas().len() {
            return Err(Error::UnknownArea(format!("#{}", a.0)));
        }
        if required[..n].contains(a) {
            return Err(Error::InvalidArgument(format!(
                "area `{}` requested twice",
                snapshot.area(*a).id
            )));
        }
    }
    Ok(())
}

/// Every way of picking one expert per area from the top-`k` slates.
///
/// Picks collapsing to fewer than two distinct people are discarded; picks
/// yielding the same member set are merged with their per-area assignments
/// unioned.
pub fn enumerate_candidates(snapshot: &GraphSnapshot, required: &[AreaIx], k: usize, cap: u64) -> Result<Enumeration> {
    check_required(snapshot, required)?;
    let slates: Vec<Vec<PersonIx>> = required
        .iter()
        .map(|&a| {
            Ok(top_experts_ix(snapshot, a, k, false)?
                .into_iter()
                .map(|h| h.individual)
                .collect())
        })
        .collect::<Result<_>>()?;
    let combinations = slates
        .iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
        .unwrap_or(u128::MAX);
    if combinations > u128::from(cap) {
        return Err(Error::CandidateExplosion { combinations, cap });
    }
    let combinations = combinations as u64;

    let q = required.len();
    let mut merged: HashMap<Vec<PersonIx>, Vec<Vec<PersonIx>>> = HashMap::new();
    if combinations > 0 {
        let mut pick = vec![0usize; q];
        'combos: loop {
            let chosen: Vec<PersonIx> = (0..q).map(|i| slates[i][pick[i]]).collect();
            let mut members = chosen.clone();
            members.sort_unstable();
            members.dedup();
            if members.len() >= 2 {
                let slots = merged.entry(members).or_insert_with(|| vec![Vec::new(); q]);
                for (slot, p) in slots.iter_mut().zip(&chosen) {
                    if !slot.contains(p) {
                        slot.push(*p);
                    }
                }
            }
            // Odometer step, last area fastest.
            let mut i = q;
            loop {
                if i == 0 {
                    break 'combos;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < slates[i].len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    }

    let mut candidates: Vec<CandidateTeam> = merged
        .into_iter()
        .map(|(members, slots)| CandidateTeam {
            members,
            assignment: Assignment::new(required.iter().copied().zip(slots).collect()),
        })
        .collect();
    candidates.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(Enumeration {
        slates,
        combinations,
        candidates,
    })
}

/// Raw metrics for each candidate, in input order.
pub fn score_candidates(
    snapshot: &GraphSnapshot,
    candidates: &[CandidateTeam],
    mode: CompetenceMode,
) -> Result<Vec<MetricValues>> {
    let Some(first) = candidates.first() else {
        return Ok(Vec::new());
    };
    let cache = DistanceCache::for_teams(
        snapshot,
        candidates.iter().map(|c| c.members.as_slice()),
        DEFAULT_HORIZON,
    );
    // Candidates of one request share the required areas.
    let required: Vec<AreaIx> = first.assignment.areas().collect();
    let jaccards = ConceptJaccards::new(snapshot, &required);
    candidates
        .par_iter()
        .map(|c| {
            if c.assignment.areas().eq(required.iter().copied()) {
                metrics::evaluate_with(snapshot, &c.members, &c.assignment, mode, &cache, &jaccards)
            } else {
                metrics::evaluate(snapshot, &c.members, &c.assignment, mode, &cache)
            }
        })
        .collect()
}

/// Scores every candidate, combines the metrics under `weights` and returns
/// the best `limit` teams, highest total first, ties by member ids.
///
/// Team user repetition is normalized by the largest count in the slate
/// (0 everywhere when that is 0); the other metrics pass through.
pub fn rank_candidates(
    snapshot: &GraphSnapshot,
    candidates: &[CandidateTeam],
    weights: MetricWeights,
    mode: CompetenceMode,
    limit: usize,
) -> Result<Vec<RankedTeam>> {
    let raw = score_candidates(snapshot, candidates, mode)?;
    let tur_max = raw.iter().map(|m| m.user_repetition).max().unwrap_or(0);
    let cards: Vec<ScoreCard> = raw
        .into_iter()
        .map(|m| {
            let tur = if tur_max == 0 {
                0.0
            } else {
                m.user_repetition as f64 / tur_max as f64
            };
            ScoreCard::new(m, tur, weights)
        })
        .collect();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&x, &y| {
        cards[y]
            .total
            .total_cmp(&cards[x].total)
            .then_with(|| candidates[x].members.cmp(&candidates[y].members))
    });
    order.truncate(limit);
    Ok(order
        .into_iter()
        .map(|i| RankedTeam {
            team: candidates[i].clone(),
            scorecard: cards[i],
        })
        .collect())
}

/// Scores a hand-picked team. Each required area is assigned every member
/// holding an edge to it; user repetition is normalized as `n / (n + 1)`.
pub fn score_team(
    snapshot: &GraphSnapshot,
    members: &[PersonIx],
    required: &[AreaIx],
    weights: MetricWeights,
    mode: CompetenceMode,
) -> Result<(Assignment, ScoreCard)> {
    if members.is_empty() {
        return Err(Error::InvalidArgument("team has no members".into()));
    }
    if let Some(p) = members.iter().find(|p| p.index() >= snapshot.individuals().len()) {
        return Err(Error::UnknownIndividual(format!("#{}", p.0)));
    }
    check_required(snapshot, required)?;
    let mut team = members.to_vec();
    team.sort_unstable();
    team.dedup();
    let assignment = Assignment::derive(snapshot, &team, required);
    let raw = metrics::evaluate(
        snapshot,
        &team,
        &assignment,
        mode,
        &DirectDistance {
            snapshot,
            horizon: DEFAULT_HORIZON,
        },
    )?;
    let n = raw.user_repetition as f64;
    Ok((assignment, ScoreCard::new(raw, n / (n + 1.0), weights)))
}
