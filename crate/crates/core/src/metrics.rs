//! The four team-quality metrics.
//!
//! All functions are pure over an immutable snapshot. Member lists are
//! treated as sets; callers may pass them in any order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AreaIx, DimensionFilter, GraphSnapshot, PersonIx, DEFAULT_HORIZON};

/// How per-area competence values are folded into one score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompetenceMode {
    /// Mean over required areas; favours evenly competent teams.
    #[default]
    Avg,
    /// Best single area; favours teams with one strong specialist.
    Max,
}

impl FromStr for CompetenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "avg" | "average" | "mean" => Ok(CompetenceMode::Avg),
            "max" => Ok(CompetenceMode::Max),
            other => Err(Error::InvalidArgument(format!("unknown competence mode `{other}`"))),
        }
    }
}

impl fmt::Display for CompetenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompetenceMode::Avg => "avg",
            CompetenceMode::Max => "max",
        })
    }
}

/// Which members cover which required area, in required-area order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    entries: Vec<(AreaIx, Vec<PersonIx>)>,
}

impl Assignment {
    /// Member lists are sorted and deduplicated.
    pub fn new(entries: Vec<(AreaIx, Vec<PersonIx>)>) -> Self {
        let entries = entries
            .into_iter()
            .map(|(a, mut m)| {
                m.sort_unstable();
                m.dedup();
                (a, m)
            })
            .collect();
        Self { entries }
    }

    /// Each required area mapped to every member holding a competence edge to it.
    pub fn derive(snapshot: &GraphSnapshot, members: &[PersonIx], required: &[AreaIx]) -> Self {
        Self::new(
            required
                .iter()
                .map(|&a| {
                    let holders = members
                        .iter()
                        .copied()
                        .filter(|&m| snapshot.competence(m, a).is_some())
                        .collect();
                    (a, holders)
                })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[(AreaIx, Vec<PersonIx>)] {
        &self.entries
    }

    pub fn areas(&self) -> impl Iterator<Item = AreaIx> + '_ {
        self.entries.iter().map(|(a, _)| *a)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValues {
    pub competence: f64,
    pub cohesiveness: f64,
    pub user_repetition: u64,
    pub concept_repetition: f64,
}

fn sorted_set<T: Ord + Copy>(items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Per-area value is the best competence among the members assigned to it
/// (a missing edge counts as 0); areas are then averaged or maxed.
pub fn competence_score(snapshot: &GraphSnapshot, assignment: &Assignment, mode: CompetenceMode) -> Result<f64> {
    if assignment.is_empty() {
        return Err(Error::EmptyAssignment);
    }
    let per_area = assignment.entries().iter().map(|(a, members)| {
        members
            .iter()
            .map(|&m| snapshot.competence(m, *a).unwrap_or(0.0))
            .fold(0.0, f64::max)
    });
    Ok(match mode {
        CompetenceMode::Avg => per_area.sum::<f64>() / assignment.entries().len() as f64,
        CompetenceMode::Max => per_area.fold(0.0, f64::max),
    })
}

/// Source of pairwise hop distances; `None` means unreachable within the horizon.
pub trait PairDistance {
    fn distance(&self, a: PersonIx, b: PersonIx) -> Option<u32>;
}

/// Computes distances on demand against the snapshot.
pub struct DirectDistance<'a> {
    pub snapshot: &'a GraphSnapshot,
    pub horizon: u32,
}

impl PairDistance for DirectDistance<'_> {
    fn distance(&self, a: PersonIx, b: PersonIx) -> Option<u32> {
        self.snapshot
            .shortest_social_distance(a, b, DimensionFilter::ALL, self.horizon)
            .ok()
            .flatten()
    }
}

/// Precomputed distances for a fixed set of pairs, shared across candidates.
#[derive(Debug, Clone, Default)]
pub struct DistanceCache {
    horizon: u32,
    map: HashMap<(PersonIx, PersonIx), Option<u32>>,
}

fn ordered(a: PersonIx, b: PersonIx) -> (PersonIx, PersonIx) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl DistanceCache {
    /// Distances for every unordered pair inside each team.
    pub fn for_teams<'t>(
        snapshot: &GraphSnapshot,
        teams: impl IntoIterator<Item = &'t [PersonIx]>,
        horizon: u32,
    ) -> Self {
        let mut pairs = Vec::new();
        for team in teams {
            for (n, &a) in team.iter().enumerate() {
                for &b in &team[n + 1..] {
                    if a != b {
                        pairs.push(ordered(a, b));
                    }
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let direct = DirectDistance { snapshot, horizon };
        let map = pairs
            .par_iter()
            .map(|&(a, b)| ((a, b), direct.distance(a, b)))
            .collect();
        Self { horizon, map }
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl PairDistance for DistanceCache {
    fn distance(&self, a: PersonIx, b: PersonIx) -> Option<u32> {
        if a == b {
            return Some(0);
        }
        *self.map.get(&ordered(a, b)).expect("pair missing from distance cache")
    }
}

/// Mean inverse hop distance over all unordered member pairs, on the union
/// of every social dimension with the default horizon. Unreachable pairs
/// contribute 0; a single member scores 0.
pub fn social_cohesiveness(snapshot: &GraphSnapshot, team: &[PersonIx]) -> Result<f64> {
    if team.is_empty() {
        return Err(Error::InvalidArgument("team has no members".into()));
    }
    if let Some(p) = team.iter().find(|p| p.index() >= snapshot.individuals().len()) {
        return Err(Error::UnknownIndividual(format!("#{}", p.0)));
    }
    Ok(cohesiveness_with(
        team,
        &DirectDistance {
            snapshot,
            horizon: DEFAULT_HORIZON,
        },
    ))
}

/// Cohesiveness against any distance source. Pairs are summed in sorted
/// member order.
pub fn cohesiveness_with(team: &[PersonIx], distances: &impl PairDistance) -> f64 {
    let members = sorted_set(team);
    let m = members.len();
    if m < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    for (n, &a) in members.iter().enumerate() {
        for &b in &members[n + 1..] {
            if let Some(d) = distances.distance(a, b) {
                sum += 1.0 / f64::from(d);
            }
        }
    }
    2.0 / (m * (m - 1)) as f64 * sum
}

/// Number of past teams whose member set is a subset of `team`.
pub fn team_user_repetition(snapshot: &GraphSnapshot, team: &[PersonIx]) -> u64 {
    let members = sorted_set(team);
    let history = snapshot.history();
    let mut count = 0;
    for &m in &members {
        // Each past team is examined once, from its smallest member.
        for &t in snapshot.teams_of(m) {
            let past = &history[t as usize].members;
            if past[0] == m && past.iter().all(|p| members.binary_search(p).is_ok()) {
                count += 1;
            }
        }
    }
    count
}

/// |a ∩ b| / |a ∪ b| for sorted, duplicate-free slices.
pub fn jaccard(a: &[AreaIx], b: &[AreaIx]) -> f64 {
    let (mut i, mut j, mut common) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.len() + b.len() - common;
    if union == 0 {
        0.0
    } else {
        common as f64 / union as f64
    }
}

/// Mean Jaccard similarity between `required` and the area sets of past
/// teams that share at least one member with `team`; 0 when there are none.
/// Past teams are summed in history order.
pub fn team_concept_repetition(snapshot: &GraphSnapshot, team: &[PersonIx], required: &[AreaIx]) -> f64 {
    let required = sorted_set(required);
    let history = snapshot.history();
    mean_over_relevant(snapshot, team, |t| jaccard(&required, &history[t as usize].areas))
}

/// Jaccard similarity of every past team's areas with one required set,
/// for scoring many candidates against the same request.
#[derive(Debug, Clone)]
pub struct ConceptJaccards {
    required: Vec<AreaIx>,
    values: Vec<f64>,
}

impl ConceptJaccards {
    pub fn new(snapshot: &GraphSnapshot, required: &[AreaIx]) -> Self {
        let required = sorted_set(required);
        let values = snapshot
            .history()
            .iter()
            .map(|t| jaccard(&required, &t.areas))
            .collect();
        Self { required, values }
    }

    /// The required set, sorted.
    pub fn required(&self) -> &[AreaIx] {
        &self.required
    }
}

/// Same value as [`team_concept_repetition`] for the cached required set.
pub fn concept_repetition_with(snapshot: &GraphSnapshot, team: &[PersonIx], jaccards: &ConceptJaccards) -> f64 {
    mean_over_relevant(snapshot, team, |t| jaccards.values[t as usize])
}

/// Mean of `value` over the past teams of any member, visited in ascending
/// team order by merging the members' sorted team lists.
fn mean_over_relevant(snapshot: &GraphSnapshot, team: &[PersonIx], value: impl Fn(u32) -> f64) -> f64 {
    let lists: Vec<&[u32]> = sorted_set(team).iter().map(|&m| snapshot.teams_of(m)).collect();
    let mut heads = vec![0usize; lists.len()];
    let (mut sum, mut count) = (0.0, 0usize);
    while let Some(t) = lists.iter().zip(&heads).filter_map(|(l, &h)| l.get(h)).min().copied() {
        for (l, h) in lists.iter().zip(heads.iter_mut()) {
            if l.get(*h) == Some(&t) {
                *h += 1;
            }
        }
        sum += value(t);
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// All four metrics for one team.
pub fn evaluate(
    snapshot: &GraphSnapshot,
    members: &[PersonIx],
    assignment: &Assignment,
    mode: CompetenceMode,
    distances: &impl PairDistance,
) -> Result<MetricValues> {
    let required: Vec<AreaIx> = assignment.areas().collect();
    Ok(MetricValues {
        competence: competence_score(snapshot, assignment, mode)?,
        cohesiveness: cohesiveness_with(members, distances),
        user_repetition: team_user_repetition(snapshot, members),
        concept_repetition: team_concept_repetition(snapshot, members, &required),
    })
}

/// [`evaluate`] with concept repetition taken from a cache built for the
/// assignment's areas.
pub fn evaluate_with(
    snapshot: &GraphSnapshot,
    members: &[PersonIx],
    assignment: &Assignment,
    mode: CompetenceMode,
    distances: &impl PairDistance,
    jaccards: &ConceptJaccards,
) -> Result<MetricValues> {
    Ok(MetricValues {
        competence: competence_score(snapshot, assignment, mode)?,
        cohesiveness: cohesiveness_with(members, distances),
        user_repetition: team_user_repetition(snapshot, members),
        concept_repetition: concept_repetition_with(snapshot, members, jaccards),
    })
}
