//! The three-graph data model: competence graph, social multigraph and
//! collaboration history hypergraph, bundled into one immutable snapshot.
//!
//! Individuals and areas are stored sorted by their opaque id, so the dense
//! indices [`PersonIx`] and [`AreaIx`] order exactly like the ids do. All
//! deterministic tie-breaks in the crate rely on that.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::concepts::SuggestIndex;
use crate::error::{Error, Locator, Result};
use crate::ingest::records::{CorpusRecords, RelationKind};

/// Hop limit used by distance queries unless the caller picks another.
pub const DEFAULT_HORIZON: u32 = 6;

/// Social dimensions are tracked as bits of a `u64` mask.
pub const MAX_DIMENSIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PersonIx(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AreaIx(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimIx(pub u8);

impl PersonIx {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl AreaIx {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl DimIx {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of social dimensions to traverse. The default admits all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionFilter(u64);

impl DimensionFilter {
    pub const ALL: DimensionFilter = DimensionFilter(u64::MAX);

    fn admits(self, mask: u64) -> bool {
        self.0 & mask != 0
    }
}

impl Default for DimensionFilter {
    fn default() -> Self {
        Self::ALL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Individual {
    pub id: String,
    pub name: String,
    pub affiliations: Vec<String>,
    pub country: Option<String>,
    pub profile: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpertiseArea {
    pub id: String,
    pub name: String,
    pub aliases: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompetenceEdge {
    pub individual: PersonIx,
    pub area: AreaIx,
    pub weight: f64,
    pub derived: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SocialEdge {
    pub src: PersonIx,
    pub dst: PersonIx,
    pub dimension: DimIx,
    pub strength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaRelation {
    pub from: AreaIx,
    pub to: AreaIx,
    pub kind: RelationKind,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Publication {
    pub id: String,
    pub authors: Vec<PersonIx>,
    pub areas: Vec<AreaIx>,
    pub year: i32,
    pub venue: Option<String>,
}

/// A past collaboration: at least two members, at least one area.
/// Both lists are sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryTeam {
    pub members: Vec<PersonIx>,
    pub areas: Vec<AreaIx>,
    pub year: i32,
    pub source_publication: usize,
}

/// Compressed adjacency: `items[offsets[n]..offsets[n + 1]]` belong to node `n`.
#[derive(Debug, Clone, Default)]
struct Csr<T> {
    offsets: Vec<u32>,
    items: Vec<T>,
}

impl<T> Csr<T> {
    /// `keyed` must be sorted by node.
    fn from_keyed(node_count: usize, keyed: Vec<(usize, T)>) -> Self {
        let offsets = row_offsets(node_count, keyed.iter().map(|(k, _)| *k));
        let items = keyed.into_iter().map(|(_, item)| item).collect();
        Self { offsets, items }
    }

    #[inline]
    fn row(&self, n: usize) -> &[T] {
        &self.items[self.offsets[n] as usize..self.offsets[n + 1] as usize]
    }
}

/// Everything the engine queries, built once and never mutated.
pub struct GraphSnapshot {
    individuals: Vec<Individual>,
    person_by_id: HashMap<String, PersonIx>,
    areas: Vec<ExpertiseArea>,
    area_by_id: HashMap<String, AreaIx>,
    dimensions: Vec<String>,
    /// Sorted by (individual, area).
    competence: Vec<CompetenceEdge>,
    /// Sorted by (src, dst, dimension).
    social: Vec<SocialEdge>,
    relations: Vec<AreaRelation>,
    publications: Vec<Publication>,
    history: Vec<HistoryTeam>,
    build_timestamp: u64,

    competence_rows: Vec<u32>,
    social_rows: Vec<u32>,
    /// Competence edge indices per area, best first.
    holders: Csr<u32>,
    /// Undirected union of all dimensions: (neighbor, dimension mask).
    neighbors: Csr<(u32, u64)>,
    /// Relation indices per source area, most similar first.
    relations_from: Csr<u32>,
    history_by_person: Csr<u32>,
    suggest: SuggestIndex,
}

impl fmt::Debug for GraphSnapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphSnapshot")
            .field("individuals", &self.individuals.len())
            .field("areas", &self.areas.len())
            .field("competence", &self.competence.len())
            .field("social", &self.social.len())
            .field("publications", &self.publications.len())
            .field("history", &self.history.len())
            .field("build_timestamp", &self.build_timestamp)
            .finish()
    }
}

fn unit_open(x: f64) -> bool {
    x > 0.0 && x < 1.0
}

fn now_secs() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Builds a snapshot from parsed corpus records, stamped with the current time.
pub fn build_snapshot(records: &CorpusRecords) -> Result<GraphSnapshot> {
    build_snapshot_at(records, now_secs())
}

/// Builds a snapshot with an explicit build timestamp (seconds since epoch).
pub fn build_snapshot_at(records: &CorpusRecords, build_timestamp: u64) -> Result<GraphSnapshot> {
    // Individuals, sorted by id.
    let mut people: Vec<(&Locator, &crate::ingest::records::IndividualRecord)> =
        records.individuals.iter().map(|r| (&r.at, &r.record)).collect();
    people.sort_by(|a, b| a.1.id.cmp(&b.1.id));
    for pair in people.windows(2) {
        if pair[0].1.id == pair[1].1.id {
            return Err(Error::integrity(
                pair[1].0.max(pair[0].0),
                format!("duplicate individual id `{}`", pair[1].1.id),
            ));
        }
    }
    let mut individuals = Vec::with_capacity(people.len());
    let mut person_by_id = HashMap::with_capacity(people.len());
    for (n, (at, rec)) in people.iter().enumerate() {
        if rec.id.is_empty() {
            return Err(Error::integrity(at, "empty individual id"));
        }
        if rec.name.trim().is_empty() {
            return Err(Error::integrity(
                at,
                format!("individual `{}` has an empty name", rec.id),
            ));
        }
        person_by_id.insert(rec.id.clone(), PersonIx(n as u32));
        individuals.push(Individual {
            id: rec.id.clone(),
            name: rec.name.clone(),
            affiliations: rec.affiliations.clone(),
            country: rec.country.clone(),
            profile: rec.profile.clone(),
        });
    }

    // Areas, sorted by id.
    let mut area_recs: Vec<_> = records.areas.iter().map(|r| (&r.at, &r.record)).collect();
    area_recs.sort_by(|a, b| a.1.id.cmp(&b.1.id));
    for pair in area_recs.windows(2) {
        if pair[0].1.id == pair[1].1.id {
            return Err(Error::integrity(
                pair[1].0.max(pair[0].0),
                format!("duplicate area id `{}`", pair[1].1.id),
            ));
        }
    }
    let mut areas = Vec::with_capacity(area_recs.len());
    let mut area_by_id = HashMap::with_capacity(area_recs.len());
    for (n, (at, rec)) in area_recs.iter().enumerate() {
        if rec.id.is_empty() {
            return Err(Error::integrity(at, "empty area id"));
        }
        if rec.name.trim().is_empty() {
            return Err(Error::integrity(at, format!("area `{}` has an empty name", rec.id)));
        }
        let mut seen = HashSet::new();
        for alias in &rec.aliases {
            if !seen.insert(alias.as_str()) {
                return Err(Error::integrity(
                    at,
                    format!("area `{}` lists alias `{alias}` twice", rec.id),
                ));
            }
        }
        area_by_id.insert(rec.id.clone(), AreaIx(n as u32));
        areas.push(ExpertiseArea {
            id: rec.id.clone(),
            name: rec.name.clone(),
            aliases: rec.aliases.clone(),
        });
    }

    let person = |at: &Locator, id: &str| {
        person_by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::integrity(at, format!("unknown individual `{id}`")))
    };
    let area = |at: &Locator, id: &str| {
        area_by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::integrity(at, format!("unknown area `{id}`")))
    };

    // Area relations.
    let mut relations = Vec::with_capacity(records.relations.len());
    for r in &records.relations {
        let rec = &r.record;
        let from = area(&r.at, &rec.from)?;
        let to = area(&r.at, &rec.to)?;
        if from == to {
            return Err(Error::integrity(&r.at, "relation links an area to itself"));
        }
        if !(rec.similarity > 0.0 && rec.similarity <= 1.0) {
            return Err(Error::integrity(
                &r.at,
                format!("relation similarity {} outside (0, 1]", rec.similarity),
            ));
        }
        if rec.kind == RelationKind::Synonym && rec.similarity != 1.0 {
            return Err(Error::integrity(&r.at, "synonym relation must have similarity 1"));
        }
        relations.push(AreaRelation {
            from,
            to,
            kind: rec.kind,
            similarity: rec.similarity,
        });
    }

    // Competence graph.
    let mut competence = Vec::with_capacity(records.competence.len());
    let mut competence_at = Vec::with_capacity(records.competence.len());
    for r in &records.competence {
        let rec = &r.record;
        let individual = person(&r.at, &rec.individual)?;
        let a = area(&r.at, &rec.area)?;
        if !unit_open(rec.weight) {
            return Err(Error::integrity(
                &r.at,
                format!("competence weight {} outside (0, 1)", rec.weight),
            ));
        }
        competence.push(CompetenceEdge {
            individual,
            area: a,
            weight: rec.weight,
            derived: rec.derived,
        });
        competence_at.push(&r.at);
    }
    let mut order: Vec<usize> = (0..competence.len()).collect();
    order.sort_by_key(|&e| (competence[e].individual, competence[e].area));
    for pair in order.windows(2) {
        let (a, b) = (&competence[pair[0]], &competence[pair[1]]);
        if a.individual == b.individual && a.area == b.area {
            return Err(Error::integrity(
                competence_at[pair[1]].max(competence_at[pair[0]]),
                "duplicate competence edge",
            ));
        }
    }
    let competence: Vec<CompetenceEdge> = order.iter().map(|&e| competence[e]).collect();
    drop(competence_at);

    // Social multigraph.
    let mut dim_names: Vec<&str> = records.social.iter().map(|r| r.record.dimension.as_str()).collect();
    dim_names.sort_unstable();
    dim_names.dedup();
    if dim_names.len() > MAX_DIMENSIONS {
        let at = &records.social[records.social.len() - 1].at;
        return Err(Error::integrity(
            at,
            format!(
                "{} social dimensions, at most {MAX_DIMENSIONS} supported",
                dim_names.len()
            ),
        ));
    }
    let dimensions: Vec<String> = dim_names.iter().map(|s| s.to_string()).collect();
    let dim_of: HashMap<&str, DimIx> = dim_names
        .iter()
        .enumerate()
        .map(|(n, d)| (*d, DimIx(n as u8)))
        .collect();

    let mut social = Vec::with_capacity(records.social.len());
    let mut social_at = Vec::with_capacity(records.social.len());
    for r in &records.social {
        let rec = &r.record;
        let src = person(&r.at, &rec.src)?;
        let dst = person(&r.at, &rec.dst)?;
        if src == dst {
            return Err(Error::integrity(&r.at, "social edge is a self-loop"));
        }
        if rec.dimension.is_empty() {
            return Err(Error::integrity(&r.at, "social edge has an empty dimension"));
        }
        if !unit_open(rec.strength) {
            return Err(Error::integrity(
                &r.at,
                format!("social strength {} outside (0, 1)", rec.strength),
            ));
        }
        social.push(SocialEdge {
            src,
            dst,
            dimension: dim_of[rec.dimension.as_str()],
            strength: rec.strength,
        });
        social_at.push(&r.at);
    }
    let mut order: Vec<usize> = (0..social.len()).collect();
    order.sort_by_key(|&e| (social[e].src, social[e].dst, social[e].dimension));
    for pair in order.windows(2) {
        let (a, b) = (&social[pair[0]], &social[pair[1]]);
        if a.src == b.src && a.dst == b.dst && a.dimension == b.dimension {
            return Err(Error::integrity(
                social_at[pair[1]].max(social_at[pair[0]]),
                "duplicate social edge for the same dimension",
            ));
        }
    }
    let social: Vec<SocialEdge> = order.iter().map(|&e| social[e]).collect();
    drop(social_at);

    // Publications and the history hypergraph.
    let mut publications = Vec::with_capacity(records.publications.len());
    let mut history = Vec::new();
    let mut pub_ids = HashSet::with_capacity(records.publications.len());
    for r in &records.publications {
        let rec = &r.record;
        if !pub_ids.insert(rec.id.as_str()) {
            return Err(Error::integrity(
                &r.at,
                format!("duplicate publication id `{}`", rec.id),
            ));
        }
        if rec.authors.is_empty() {
            return Err(Error::integrity(&r.at, "publication has no authors"));
        }
        let mut authors = Vec::with_capacity(rec.authors.len());
        for a in &rec.authors {
            authors.push(person(&r.at, a)?);
        }
        let mut members = authors.clone();
        members.sort_unstable();
        members.dedup();
        if members.len() != authors.len() {
            return Err(Error::integrity(&r.at, "publication lists an author twice"));
        }
        let mut pub_areas = Vec::with_capacity(rec.areas.len());
        for a in &rec.areas {
            let ix = area(&r.at, a)?;
            if !pub_areas.contains(&ix) {
                pub_areas.push(ix);
            }
        }
        if members.len() >= 2 && !pub_areas.is_empty() {
            let mut team_areas = pub_areas.clone();
            team_areas.sort_unstable();
            history.push(HistoryTeam {
                members,
                areas: team_areas,
                year: rec.year,
                source_publication: publications.len(),
            });
        }
        publications.push(Publication {
            id: rec.id.clone(),
            authors,
            areas: pub_areas,
            year: rec.year,
            venue: rec.venue.clone(),
        });
    }

    let n_people = individuals.len();
    let n_areas = areas.len();

    let competence_rows = row_offsets(n_people, competence.iter().map(|e| e.individual.index()));
    let social_rows = row_offsets(n_people, social.iter().map(|e| e.src.index()));

    let mut by_area: Vec<u32> = (0..competence.len() as u32).collect();
    by_area.sort_by(|&x, &y| {
        let (a, b) = (&competence[x as usize], &competence[y as usize]);
        a.area
            .cmp(&b.area)
            .then(b.weight.total_cmp(&a.weight))
            .then(a.individual.cmp(&b.individual))
    });
    let holders = Csr::from_keyed(
        n_areas,
        by_area
            .into_iter()
            .map(|e| (competence[e as usize].area.index(), e))
            .collect(),
    );

    let mut adjacency: Vec<(u32, u32, u64)> = Vec::with_capacity(social.len() * 2);
    for e in &social {
        let bit = 1u64 << e.dimension.0;
        adjacency.push((e.src.0, e.dst.0, bit));
        adjacency.push((e.dst.0, e.src.0, bit));
    }
    adjacency.sort_unstable_by_key(|&(a, b, _)| (a, b));
    let mut merged: Vec<(u32, u32, u64)> = Vec::with_capacity(adjacency.len());
    for (a, b, m) in adjacency {
        match merged.last_mut() {
            Some(last) if last.0 == a && last.1 == b => last.2 |= m,
            _ => merged.push((a, b, m)),
        }
    }
    let neighbors = Csr::from_keyed(
        n_people,
        merged.into_iter().map(|(a, b, m)| (a as usize, (b, m))).collect(),
    );

    let mut rel_order: Vec<u32> = (0..relations.len() as u32).collect();
    rel_order.sort_by(|&x, &y| {
        let (a, b) = (&relations[x as usize], &relations[y as usize]);
        a.from
            .cmp(&b.from)
            .then(b.similarity.total_cmp(&a.similarity))
            .then(a.to.cmp(&b.to))
            .then(a.kind.cmp(&b.kind))
    });
    let relations_from = Csr::from_keyed(
        n_areas,
        rel_order
            .into_iter()
            .map(|r| (relations[r as usize].from.index(), r))
            .collect(),
    );

    let mut memberships: Vec<(u32, u32)> = history
        .iter()
        .enumerate()
        .flat_map(|(t, team)| team.members.iter().map(move |m| (m.0, t as u32)))
        .collect();
    memberships.sort_unstable();
    let history_by_person = Csr::from_keyed(
        n_people,
        memberships.into_iter().map(|(p, t)| (p as usize, t)).collect(),
    );

    let suggest = SuggestIndex::build(&areas);

    Ok(GraphSnapshot {
        individuals,
        person_by_id,
        areas,
        area_by_id,
        dimensions,
        competence,
        social,
        relations,
        publications,
        history,
        build_timestamp,
        competence_rows,
        social_rows,
        holders,
        neighbors,
        relations_from,
        history_by_person,
        suggest,
    })
}

fn row_offsets(node_count: usize, keys: impl Iterator<Item = usize>) -> Vec<u32> {
    let mut offsets = vec![0u32; node_count + 1];
    for k in keys {
        offsets[k + 1] += 1;
    }
    for n in 0..node_count {
        offsets[n + 1] += offsets[n];
    }
    offsets
}

/// The radius-bounded social neighbourhood of one individual.
#[derive(Debug, Clone, PartialEq)]
pub struct EgoNetwork {
    pub center: PersonIx,
    pub radius: u32,
    /// Sorted; always contains `center`.
    pub members: Vec<PersonIx>,
    /// Social edges with both endpoints among `members`.
    pub social: Vec<SocialEdge>,
    /// Competence edges of `members`.
    pub competence: Vec<CompetenceEdge>,
}

impl GraphSnapshot {
    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    pub fn areas(&self) -> &[ExpertiseArea] {
        &self.areas
    }

    pub fn dimensions(&self) -> &[String] {
        &self.dimensions
    }

    pub fn competence_edges(&self) -> &[CompetenceEdge] {
        &self.competence
    }

    pub fn social_edges(&self) -> &[SocialEdge] {
        &self.social
    }

    pub fn relations(&self) -> &[AreaRelation] {
        &self.relations
    }

    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn history(&self) -> &[HistoryTeam] {
        &self.history
    }

    pub fn build_timestamp(&self) -> u64 {
        self.build_timestamp
    }

    pub fn individual(&self, p: PersonIx) -> &Individual {
        &self.individuals[p.index()]
    }

    pub fn area(&self, a: AreaIx) -> &ExpertiseArea {
        &self.areas[a.index()]
    }

    pub fn person_ix(&self, id: &str) -> Result<PersonIx> {
        self.person_by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownIndividual(id.to_string()))
    }

    pub fn area_ix(&self, id: &str) -> Result<AreaIx> {
        self.area_by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownArea(id.to_string()))
    }

    /// Resolves a list of dimension names into a traversal filter.
    pub fn dimension_filter<S: AsRef<str>>(&self, names: &[S]) -> Result<DimensionFilter> {
        let mut mask = 0u64;
        for name in names {
            let name = name.as_ref();
            let ix = self
                .dimensions
                .iter()
                .position(|d| d == name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown social dimension `{name}`")))?;
            mask |= 1 << ix;
        }
        Ok(DimensionFilter(mask))
    }

    /// Competence edges of one individual, sorted by area.
    pub fn competences_of(&self, p: PersonIx) -> &[CompetenceEdge] {
        let (lo, hi) = (
            self.competence_rows[p.index()] as usize,
            self.competence_rows[p.index() + 1] as usize,
        );
        &self.competence[lo..hi]
    }

    /// Competence label of `p` on `a`, if the edge exists.
    pub fn competence(&self, p: PersonIx, a: AreaIx) -> Option<f64> {
        let row = self.competences_of(p);
        row.binary_search_by_key(&a, |e| e.area).ok().map(|i| row[i].weight)
    }

    /// Outgoing social edges of one individual, sorted by destination.
    pub fn social_from(&self, p: PersonIx) -> &[SocialEdge] {
        let (lo, hi) = (
            self.social_rows[p.index()] as usize,
            self.social_rows[p.index() + 1] as usize,
        );
        &self.social[lo..hi]
    }

    /// Holders of a competence edge to `a`, by weight descending then id.
    pub fn holders(&self, a: AreaIx) -> impl ExactSizeIterator<Item = &CompetenceEdge> + '_ {
        self.holders
            .row(a.index())
            .iter()
            .map(move |&e| &self.competence[e as usize])
    }

    pub fn holder_count(&self, a: AreaIx) -> usize {
        self.holders.row(a.index()).len()
    }

    /// Relations leaving `a`, most similar first.
    pub fn relations_from(&self, a: AreaIx) -> impl ExactSizeIterator<Item = &AreaRelation> + '_ {
        self.relations_from
            .row(a.index())
            .iter()
            .map(move |&r| &self.relations[r as usize])
    }

    /// Distinct undirected social neighbours across all dimensions.
    pub fn neighbor_count(&self, p: PersonIx) -> usize {
        self.neighbors.row(p.index()).len()
    }

    pub fn neighbors(&self, p: PersonIx) -> impl Iterator<Item = PersonIx> + '_ {
        self.neighbors.row(p.index()).iter().map(|&(n, _)| PersonIx(n))
    }

    /// Indices into [`history`](Self::history) of the teams `p` took part in, ascending.
    pub fn teams_of(&self, p: PersonIx) -> &[u32] {
        self.history_by_person.row(p.index())
    }

    pub fn suggest_index(&self) -> &SuggestIndex {
        &self.suggest
    }

    /// Hop count of the shortest path between `i` and `j` on the undirected
    /// union of the admitted dimensions, or `None` when no path of at most
    /// `horizon` hops exists. Strengths do not affect the distance.
    pub fn shortest_social_distance(
        &self,
        i: PersonIx,
        j: PersonIx,
        dims: DimensionFilter,
        horizon: u32,
    ) -> Result<Option<u32>> {
        if horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be at least 1".into()));
        }
        for p in [i, j] {
            if p.index() >= self.individuals.len() {
                return Err(Error::UnknownIndividual(format!("#{}", p.0)));
            }
        }
        Ok(self.bidirectional_bfs(i.0, j.0, dims, horizon))
    }

    fn bidirectional_bfs(&self, i: u32, j: u32, dims: DimensionFilter, horizon: u32) -> Option<u32> {
        if i == j {
            return Some(0);
        }
        let mut dist = [HashMap::from([(i, 0u32)]), HashMap::from([(j, 0u32)])];
        let mut frontier = [vec![i], vec![j]];
        let mut depth = [0u32, 0u32];
        while !frontier[0].is_empty() && !frontier[1].is_empty() && depth[0] + depth[1] < horizon {
            // Grow the side whose frontier has fewer outgoing entries.
            let work = |f: &Vec<u32>| -> usize { f.iter().map(|&u| self.neighbors.row(u as usize).len()).sum() };
            let side = if work(&frontier[0]) <= work(&frontier[1]) { 0 } else { 1 };
            let other = 1 - side;
            let next_depth = depth[side] + 1;
            let mut next = Vec::new();
            let mut best: Option<u32> = None;
            for &u in &frontier[side] {
                for &(v, mask) in self.neighbors.row(u as usize) {
                    if !dims.admits(mask) || dist[side].contains_key(&v) {
                        continue;
                    }
                    dist[side].insert(v, next_depth);
                    if let Some(&d) = dist[other].get(&v) {
                        let total = next_depth + d;
                        best = Some(best.map_or(total, |b| b.min(total)));
                    }
                    next.push(v);
                }
            }
            if best.is_some() {
                return best;
            }
            frontier[side] = next;
            depth[side] = next_depth;
        }
        None
    }

    /// Individuals within `radius` hops of `i` with their mutual social edges
    /// and their competence edges.
    pub fn ego_network(&self, i: PersonIx, radius: u32) -> Result<EgoNetwork> {
        if radius == 0 {
            return Err(Error::InvalidArgument("radius must be at least 1".into()));
        }
        if i.index() >= self.individuals.len() {
            return Err(Error::UnknownIndividual(format!("#{}", i.0)));
        }
        let mut depth: HashMap<u32, u32> = HashMap::from([(i.0, 0)]);
        let mut queue = VecDeque::from([i.0]);
        while let Some(u) = queue.pop_front() {
            let d = depth[&u];
            if d == radius {
                continue;
            }
            for &(v, _) in self.neighbors.row(u as usize) {
                if let std::collections::hash_map::Entry::Vacant(slot) = depth.entry(v) {
                    slot.insert(d + 1);
                    queue.push_back(v);
                }
            }
        }
        let mut members: Vec<PersonIx> = depth.keys().map(|&p| PersonIx(p)).collect();
        members.sort_unstable();
        let social = members
            .iter()
            .flat_map(|&m| self.social_from(m).iter())
            .filter(|e| depth.contains_key(&e.dst.0))
            .copied()
            .collect();
        let competence = members
            .iter()
            .flat_map(|&m| self.competences_of(m).iter())
            .copied()
            .collect();
        Ok(EgoNetwork {
            center: i,
            radius,
            members,
            social,
            competence,
        })
    }
}
