//! JSON request and response shapes shared by the command line and the
//! HTTP service. Both render responses with [`to_json`], so identical
//! inputs give byte-identical bodies.

use serde::{Deserialize, Serialize};

use crate::concepts::{self, SuggestionHit};
use crate::error::{Error, Result};
use crate::ingest::records::RelationKind;
use crate::ingest::{compute_stats, CorpusStats};
use crate::metrics::{Assignment, CompetenceMode, MetricValues};
use crate::model::{AreaIx, GraphSnapshot, PersonIx, DEFAULT_HORIZON};
use crate::teams::{self, MetricWeights, NormalizedMetrics, DEFAULT_CANDIDATE_CAP};

pub const DEFAULT_K: usize = 20;
pub const DEFAULT_LIMIT: usize = 20;
pub const DEFAULT_SUGGEST_LIMIT: usize = 10;
pub const DEFAULT_EXPERTS_K: usize = 20;
pub const DEFAULT_EGO_RADIUS: u32 = 1;

/// Compact JSON, the single rendering used on every interface.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("response types serialize")
}

/// Metric weights as sent by clients. Omitted metrics weigh 0; the whole
/// object omitted means uniform weights.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsInput {
    #[serde(default)]
    pub competence: f64,
    #[serde(default)]
    pub cohesiveness: f64,
    #[serde(default)]
    pub user_repetition: f64,
    #[serde(default)]
    pub concept_repetition: f64,
}

impl WeightsInput {
    pub fn resolve(&self) -> Result<MetricWeights> {
        MetricWeights::new(
            self.competence,
            self.cohesiveness,
            self.user_repetition,
            self.concept_repetition,
        )
    }
}

impl std::str::FromStr for WeightsInput {
    type Err = Error;

    /// The `name=value,..` form used on the command line, unnormalized.
    fn from_str(s: &str) -> Result<Self> {
        let [competence, cohesiveness, user_repetition, concept_repetition] = teams::parse_weight_list(s)?;
        Ok(Self {
            competence,
            cohesiveness,
            user_repetition,
            concept_repetition,
        })
    }
}

impl From<MetricWeights> for WeightsInput {
    fn from(w: MetricWeights) -> Self {
        Self {
            competence: w.competence,
            cohesiveness: w.cohesiveness,
            user_repetition: w.user_repetition,
            concept_repetition: w.concept_repetition,
        }
    }
}

fn resolve_weights(w: Option<&WeightsInput>) -> Result<MetricWeights> {
    w.map_or(Ok(MetricWeights::uniform()), WeightsInput::resolve)
}

fn resolve_mode(mode: Option<&str>) -> Result<CompetenceMode> {
    mode.map_or(Ok(CompetenceMode::Avg), str::parse)
}

fn resolve_areas(snapshot: &GraphSnapshot, ids: &[String]) -> Result<Vec<AreaIx>> {
    if ids.is_empty() {
        return Err(Error::InvalidArgument("areas must not be empty".into()));
    }
    ids.iter().map(|id| snapshot.area_ix(id)).collect()
}

fn resolve_people(snapshot: &GraphSnapshot, ids: &[String]) -> Result<Vec<PersonIx>> {
    if ids.is_empty() {
        return Err(Error::InvalidArgument("members must not be empty".into()));
    }
    ids.iter().map(|id| snapshot.person_ix(id)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Named {
    pub id: String,
    pub name: String,
}

fn person(s: &GraphSnapshot, p: PersonIx) -> Named {
    let i = s.individual(p);
    Named {
        id: i.id.clone(),
        name: i.name.clone(),
    }
}

fn area(s: &GraphSnapshot, a: AreaIx) -> Named {
    let x = s.area(a);
    Named {
        id: x.id.clone(),
        name: x.name.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentEntry {
    pub area: String,
    pub members: Vec<String>,
}

fn assignment_view(s: &GraphSnapshot, a: &Assignment) -> Vec<AssignmentEntry> {
    a.entries()
        .iter()
        .map(|(area, members)| AssignmentEntry {
            area: s.area(*area).id.clone(),
            members: members.iter().map(|&m| s.individual(m).id.clone()).collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecommendRequest {
    pub areas: Vec<String>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub weights: Option<WeightsInput>,
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamView {
    pub rank: usize,
    pub members: Vec<Named>,
    pub assignment: Vec<AssignmentEntry>,
    pub raw: MetricValues,
    pub normalized: NormalizedMetrics,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendResponse {
    pub areas: Vec<Named>,
    pub k: usize,
    pub mode: CompetenceMode,
    pub weights: MetricWeights,
    /// Combinations of one expert per area, before merging.
    pub candidates_enumerated: u64,
    /// Distinct teams scored.
    pub candidates_scored: usize,
    pub teams: Vec<TeamView>,
}

pub fn recommend(snapshot: &GraphSnapshot, req: &RecommendRequest) -> Result<RecommendResponse> {
    let required = resolve_areas(snapshot, &req.areas)?;
    let k = req.k.unwrap_or(DEFAULT_K);
    let limit = req.limit.unwrap_or(DEFAULT_LIMIT);
    let weights = resolve_weights(req.weights.as_ref())?;
    let mode = resolve_mode(req.mode.as_deref())?;
    let enumeration = teams::enumerate_candidates(snapshot, &required, k, DEFAULT_CANDIDATE_CAP)?;
    let ranked = teams::rank_candidates(snapshot, &enumeration.candidates, weights, mode, limit)?;
    Ok(RecommendResponse {
        areas: required.iter().map(|&a| area(snapshot, a)).collect(),
        k,
        mode,
        weights,
        candidates_enumerated: enumeration.combinations,
        candidates_scored: enumeration.candidates.len(),
        teams: ranked
            .into_iter()
            .enumerate()
            .map(|(n, r)| TeamView {
                rank: n + 1,
                members: r.team.members.iter().map(|&m| person(snapshot, m)).collect(),
                assignment: assignment_view(snapshot, &r.team.assignment),
                raw: r.scorecard.raw,
                normalized: r.scorecard.normalized,
                total: r.scorecard.total,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreRequest {
    pub members: Vec<String>,
    pub areas: Vec<String>,
    #[serde(default)]
    pub weights: Option<WeightsInput>,
    #[serde(default)]
    pub mode: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDistance {
    pub a: String,
    pub b: String,
    /// `null` when unreachable within the horizon.
    pub hops: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub members: Vec<Named>,
    pub areas: Vec<Named>,
    pub mode: CompetenceMode,
    pub weights: MetricWeights,
    pub assignment: Vec<AssignmentEntry>,
    pub raw: MetricValues,
    pub normalized: NormalizedMetrics,
    pub total: f64,
    pub distances: Vec<PairDistance>,
}

pub fn score(snapshot: &GraphSnapshot, req: &ScoreRequest) -> Result<ScoreResponse> {
    let mut members = resolve_people(snapshot, &req.members)?;
    let required = resolve_areas(snapshot, &req.areas)?;
    let weights = resolve_weights(req.weights.as_ref())?;
    let mode = resolve_mode(req.mode.as_deref())?;
    let (assignment, card) = teams::score_team(snapshot, &members, &required, weights, mode)?;
    members.sort_unstable();
    members.dedup();
    let mut distances = Vec::new();
    for (n, &a) in members.iter().enumerate() {
        for &b in &members[n + 1..] {
            distances.push(PairDistance {
                a: snapshot.individual(a).id.clone(),
                b: snapshot.individual(b).id.clone(),
                hops: snapshot.shortest_social_distance(a, b, Default::default(), DEFAULT_HORIZON)?,
            });
        }
    }
    Ok(ScoreResponse {
        members: members.iter().map(|&m| person(snapshot, m)).collect(),
        areas: required.iter().map(|&a| area(snapshot, a)).collect(),
        mode,
        weights,
        assignment: assignment_view(snapshot, &assignment),
        raw: card.raw,
        normalized: card.normalized,
        total: card.total,
        distances,
    })
}

pub fn suggest(snapshot: &GraphSnapshot, query: &str, limit: Option<usize>) -> Vec<SuggestionHit> {
    concepts::suggest(snapshot, query, limit.unwrap_or(DEFAULT_SUGGEST_LIMIT))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelatedView {
    pub id: String,
    pub name: String,
    pub kind: RelationKind,
    pub similarity: f64,
}

pub fn related(snapshot: &GraphSnapshot, area_id: &str) -> Result<Vec<RelatedView>> {
    Ok(concepts::related(snapshot, area_id)?
        .into_iter()
        .map(|r| {
            let a = snapshot.area(r.area);
            RelatedView {
                id: a.id.clone(),
                name: a.name.clone(),
                kind: r.kind,
                similarity: r.similarity,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpertView {
    pub rank: usize,
    pub id: String,
    pub name: String,
    /// The weight used for ranking.
    pub competence: f64,
    /// Set when the expert was found through a related area.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpertsResponse {
    pub area: Named,
    pub k: usize,
    pub expand: bool,
    pub experts: Vec<ExpertView>,
}

pub fn experts(snapshot: &GraphSnapshot, area_id: &str, k: Option<usize>, expand: bool) -> Result<ExpertsResponse> {
    let a = snapshot.area_ix(area_id)?;
    let k = k.unwrap_or(DEFAULT_EXPERTS_K);
    let hits = concepts::top_experts_ix(snapshot, a, k, expand)?;
    Ok(ExpertsResponse {
        area: area(snapshot, a),
        k,
        expand,
        experts: hits
            .iter()
            .enumerate()
            .map(|(n, h)| {
                let p = snapshot.individual(h.individual);
                ExpertView {
                    rank: n + 1,
                    id: p.id.clone(),
                    name: p.name.clone(),
                    competence: h.effective(),
                    via: h.via_related.map(|(r, _)| snapshot.area(r).id.clone()),
                }
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialEdgeView {
    pub src: String,
    pub dst: String,
    pub dimension: String,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompetenceEdgeView {
    pub individual: String,
    pub area: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoResponse {
    pub center: Named,
    pub radius: u32,
    pub members: Vec<Named>,
    pub social: Vec<SocialEdgeView>,
    pub competence: Vec<CompetenceEdgeView>,
}

pub fn ego(snapshot: &GraphSnapshot, individual_id: &str, radius: Option<u32>) -> Result<EgoResponse> {
    let p = snapshot.person_ix(individual_id)?;
    let radius = radius.unwrap_or(DEFAULT_EGO_RADIUS);
    let net = snapshot.ego_network(p, radius)?;
    let pid = |p: PersonIx| snapshot.individual(p).id.clone();
    Ok(EgoResponse {
        center: person(snapshot, net.center),
        radius: net.radius,
        members: net.members.iter().map(|&m| person(snapshot, m)).collect(),
        social: net
            .social
            .iter()
            .map(|e| SocialEdgeView {
                src: pid(e.src),
                dst: pid(e.dst),
                dimension: snapshot.dimensions()[e.dimension.index()].clone(),
                strength: e.strength,
            })
            .collect(),
        competence: net
            .competence
            .iter()
            .map(|e| CompetenceEdgeView {
                individual: pid(e.individual),
                area: snapshot.area(e.area).id.clone(),
                weight: e.weight,
            })
            .collect(),
    })
}

pub fn stats(snapshot: &GraphSnapshot) -> CorpusStats {
    compute_stats(snapshot)
}
