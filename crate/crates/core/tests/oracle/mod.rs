//! Brute-force reference implementations over raw corpus records, keyed by
//! string ids. Nothing here touches the engine's indexes, so agreement with
//! the engine is meaningful.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use swat_core::ingest::records::*;
use swat_core::Locator;

pub const HORIZON: u32 = 6;

/// Shape of a random knowledge base.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub people: usize,
    pub areas: usize,
    pub dimensions: usize,
    /// Probability of an edge per ordered pair and dimension.
    pub social_p: f64,
    /// Probability of a competence edge per (person, area).
    pub competence_p: f64,
    pub publications: usize,
    pub relations: usize,
}

impl Shape {
    pub fn small(rng: &mut impl Rng) -> Self {
        Self {
            people: rng.gen_range(2..=30),
            areas: rng.gen_range(1..=6),
            dimensions: rng.gen_range(1..=3),
            social_p: rng.gen_range(0.0..0.15),
            competence_p: rng.gen_range(0.2..0.8),
            publications: rng.gen_range(0..=24),
            relations: rng.gen_range(0..=4),
        }
    }
}

pub fn person_id(n: usize) -> String {
    format!("p{n:02}")
}

pub fn area_id(n: usize) -> String {
    format!("a{n:02}")
}

fn at(file: &str, n: usize) -> Locator {
    Locator::new(file, n + 1)
}

/// Labels drawn from a small set half of the time so that ties occur.
fn label(rng: &mut impl Rng) -> f64 {
    const COMMON: [f64; 5] = [0.2, 0.4, 0.5, 0.8, 0.9];
    if rng.gen_bool(0.5) {
        COMMON[rng.gen_range(0..COMMON.len())]
    } else {
        (rng.gen_range(1..100) as f64) / 100.0
    }
}

/// A random, valid corpus. Publications name 1 to 4 authors and 0 to 3
/// areas, so some are not history teams.
pub fn random_records(seed: u64, shape: Shape) -> CorpusRecords {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = CorpusRecords::default();
    for n in 0..shape.people {
        rec.individuals.push(Located::new(
            at(INDIVIDUALS_FILE, n),
            IndividualRecord {
                id: person_id(n),
                name: format!("Person {n}"),
                affiliations: vec![format!("Org {}", rng.gen_range(0..4))],
                country: Some(["IT", "SG", "FR"][rng.gen_range(0..3)].to_string()),
                profile: Default::default(),
            },
        ));
    }
    for n in 0..shape.areas {
        rec.areas.push(Located::new(
            at(AREAS_FILE, n),
            AreaRecord {
                id: area_id(n),
                name: format!("Area {n}"),
                aliases: vec![],
            },
        ));
    }
    if shape.areas >= 2 {
        let mut seen = BTreeSet::new();
        for _ in 0..shape.relations {
            let (f, t) = (rng.gen_range(0..shape.areas), rng.gen_range(0..shape.areas));
            if f != t && seen.insert((f, t)) {
                let n = rec.relations.len();
                rec.relations.push(Located::new(
                    at(RELATIONS_FILE, n),
                    RelationRecord {
                        from: area_id(f),
                        to: area_id(t),
                        kind: RelationKind::Similar,
                        similarity: [0.5, 0.8, 0.9][rng.gen_range(0..3)],
                    },
                ));
            }
        }
    }
    for p in 0..shape.people {
        for a in 0..shape.areas {
            if rng.gen_bool(shape.competence_p) {
                let n = rec.competence.len();
                rec.competence.push(Located::new(
                    at(COMPETENCE_FILE, n),
                    CompetenceRecord {
                        individual: person_id(p),
                        area: area_id(a),
                        weight: label(&mut rng),
                        derived: false,
                    },
                ));
            }
        }
    }
    for d in 0..shape.dimensions {
        for s in 0..shape.people {
            for t in 0..shape.people {
                if s != t && rng.gen_bool(shape.social_p) {
                    let n = rec.social.len();
                    rec.social.push(Located::new(
                        at(SOCIAL_FILE, n),
                        SocialRecord {
                            src: person_id(s),
                            dst: person_id(t),
                            dimension: format!("dim{d}"),
                            strength: label(&mut rng),
                        },
                    ));
                }
            }
        }
    }
    for n in 0..shape.publications {
        let authors: BTreeSet<usize> = (0..rng.gen_range(1..=4))
            .map(|_| rng.gen_range(0..shape.people))
            .collect();
        let areas: BTreeSet<usize> = if shape.areas == 0 {
            BTreeSet::new()
        } else {
            (0..rng.gen_range(0..=3))
                .map(|_| rng.gen_range(0..shape.areas))
                .collect()
        };
        let mut authors: Vec<String> = authors.into_iter().map(person_id).collect();
        authors.shuffle(&mut rng);
        rec.publications.push(Located::new(
            at(PUBLICATIONS_FILE, n),
            PublicationRecord {
                id: format!("pub{n:03}"),
                authors,
                areas: areas.into_iter().map(area_id).collect(),
                year: rng.gen_range(2000..2004),
                venue: None,
            },
        ));
    }
    rec
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Avg,
    Max,
}

/// A past team: member and area sets of a qualifying publication.
#[derive(Debug, Clone)]
pub struct Past {
    pub members: BTreeSet<String>,
    pub areas: BTreeSet<String>,
}

pub struct Oracle {
    pub people: Vec<String>,
    pub areas: Vec<String>,
    /// dimension -> undirected adjacency
    pub adjacency: BTreeMap<String, HashMap<String, BTreeSet<String>>>,
    pub competence: HashMap<(String, String), f64>,
    pub relations: Vec<(String, String, f64)>,
    pub history: Vec<Past>,
}

impl Oracle {
    pub fn new(rec: &CorpusRecords) -> Self {
        let mut people: Vec<String> = rec.individuals.iter().map(|r| r.record.id.clone()).collect();
        people.sort();
        let mut areas: Vec<String> = rec.areas.iter().map(|r| r.record.id.clone()).collect();
        areas.sort();
        let mut adjacency: BTreeMap<String, HashMap<String, BTreeSet<String>>> = BTreeMap::new();
        for s in &rec.social {
            let s = &s.record;
            let dim = adjacency.entry(s.dimension.clone()).or_default();
            dim.entry(s.src.clone()).or_default().insert(s.dst.clone());
            dim.entry(s.dst.clone()).or_default().insert(s.src.clone());
        }
        let competence = rec
            .competence
            .iter()
            .map(|c| ((c.record.individual.clone(), c.record.area.clone()), c.record.weight))
            .collect();
        let relations = rec
            .relations
            .iter()
            .map(|r| (r.record.from.clone(), r.record.to.clone(), r.record.similarity))
            .collect();
        let history = rec
            .publications
            .iter()
            .map(|p| Past {
                members: p.record.authors.iter().cloned().collect(),
                areas: p.record.areas.iter().cloned().collect(),
            })
            .filter(|t| t.members.len() >= 2 && !t.areas.is_empty())
            .collect();
        Self {
            people,
            areas,
            adjacency,
            competence,
            relations,
            history,
        }
    }

    fn neighbours<'a>(&'a self, p: &str, dims: Option<&'a [String]>) -> BTreeSet<&'a String> {
        self.adjacency
            .iter()
            .filter(|(d, _)| dims.is_none_or(|ds| ds.contains(d)))
            .filter_map(|(_, adj)| adj.get(p))
            .flatten()
            .collect()
    }

    /// Plain single-source BFS, distances of every reachable node.
    pub fn bfs_all(&self, from: &str, dims: Option<&[String]>) -> HashMap<String, u32> {
        let mut dist = HashMap::from([(from.to_string(), 0u32)]);
        let mut queue = VecDeque::from([from.to_string()]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            for v in self.neighbours(&u, dims) {
                if !dist.contains_key(v) {
                    dist.insert(v.clone(), d + 1);
                    queue.push_back(v.clone());
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: &str, b: &str, dims: Option<&[String]>, horizon: u32) -> Option<u32> {
        self.bfs_all(a, dims).get(b).copied().filter(|&d| d <= horizon)
    }

    pub fn ego(&self, center: &str, radius: u32) -> BTreeSet<String> {
        self.bfs_all(center, None)
            .into_iter()
            .filter(|&(_, d)| d <= radius)
            .map(|(p, _)| p)
            .collect()
    }

    pub fn weight(&self, p: &str, a: &str) -> Option<f64> {
        self.competence.get(&(p.to_string(), a.to_string())).copied()
    }

    /// Holders of `area` sorted by weight descending, then id.
    pub fn holders(&self, area: &str) -> Vec<(String, f64)> {
        let mut v: Vec<(String, f64)> = self
            .people
            .iter()
            .filter_map(|p| self.weight(p, area).map(|w| (p.clone(), w)))
            .collect();
        v.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then_with(|| x.0.cmp(&y.0)));
        v
    }

    pub fn top_experts(&self, area: &str, k: usize) -> Vec<(String, f64)> {
        let mut v = self.holders(area);
        v.truncate(k);
        v
    }

    /// Best of the direct weight and every related-area weight times
    /// similarity, per person; then sorted and cut like the direct list.
    pub fn top_experts_expanded(&self, area: &str, k: usize) -> Vec<(String, f64)> {
        let mut v: Vec<(String, f64)> = self
            .people
            .iter()
            .filter_map(|p| {
                let direct = self.weight(p, area);
                let related = self
                    .relations
                    .iter()
                    .filter(|(f, _, _)| f == area)
                    .filter_map(|(_, t, s)| self.weight(p, t).map(|w| w * s));
                direct
                    .into_iter()
                    .chain(related)
                    .reduce(f64::max)
                    .map(|w| (p.clone(), w))
            })
            .collect();
        v.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then_with(|| x.0.cmp(&y.0)));
        v.truncate(k);
        v
    }

    pub fn competence_score(&self, assignment: &[(String, Vec<String>)], mode: Mode) -> f64 {
        let per_area: Vec<f64> = assignment
            .iter()
            .map(|(a, ms)| ms.iter().map(|m| self.weight(m, a).unwrap_or(0.0)).fold(0.0, f64::max))
            .collect();
        match mode {
            Mode::Avg => per_area.iter().sum::<f64>() / per_area.len() as f64,
            Mode::Max => per_area.iter().copied().fold(0.0, f64::max),
        }
    }

    pub fn cohesiveness(&self, members: &BTreeSet<String>) -> f64 {
        let m: Vec<&String> = members.iter().collect();
        if m.len() < 2 {
            return 0.0;
        }
        let mut sum = 0.0;
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                if let Some(d) = self.distance(m[i], m[j], None, HORIZON) {
                    sum += 1.0 / f64::from(d);
                }
            }
        }
        2.0 / (m.len() * (m.len() - 1)) as f64 * sum
    }

    pub fn user_repetition(&self, members: &BTreeSet<String>) -> u64 {
        self.history.iter().filter(|t| t.members.is_subset(members)).count() as u64
    }

    pub fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
        let common = a.intersection(b).count();
        let union = a.union(b).count();
        if union == 0 {
            0.0
        } else {
            common as f64 / union as f64
        }
    }

    pub fn concept_repetition(&self, members: &BTreeSet<String>, required: &BTreeSet<String>) -> f64 {
        let relevant: Vec<&Past> = self
            .history
            .iter()
            .filter(|t| !t.members.is_disjoint(members))
            .collect();
        if relevant.is_empty() {
            return 0.0;
        }
        let sum: f64 = relevant.iter().map(|t| Self::jaccard(required, &t.areas)).sum();
        sum / relevant.len() as f64
    }

    /// Exhaustive recommendation: every pick of one slate expert per area,
    /// merged by member set, scored from scratch and sorted.
    pub fn rank(&self, required: &[String], k: usize, weights: [f64; 4], mode: Mode) -> Vec<Ranked> {
        let slates: Vec<Vec<String>> = required
            .iter()
            .map(|a| self.top_experts(a, k).into_iter().map(|(p, _)| p).collect())
            .collect();
        let mut merged: BTreeMap<BTreeSet<String>, Vec<BTreeSet<String>>> = BTreeMap::new();
        let mut pick: Vec<&String> = Vec::new();
        fn walk<'a>(
            slates: &'a [Vec<String>],
            pick: &mut Vec<&'a String>,
            merged: &mut BTreeMap<BTreeSet<String>, Vec<BTreeSet<String>>>,
        ) {
            if pick.len() == slates.len() {
                let members: BTreeSet<String> = pick.iter().map(|s| s.to_string()).collect();
                if members.len() >= 2 {
                    let slots = merged
                        .entry(members)
                        .or_insert_with(|| vec![BTreeSet::new(); slates.len()]);
                    for (slot, p) in slots.iter_mut().zip(pick.iter()) {
                        slot.insert(p.to_string());
                    }
                }
                return;
            }
            for p in &slates[pick.len()] {
                pick.push(p);
                walk(slates, pick, merged);
                pick.pop();
            }
        }
        walk(&slates, &mut pick, &mut merged);

        let sum: f64 = weights.iter().sum();
        let w: Vec<f64> = weights.iter().map(|x| x / sum).collect();
        let required_set: BTreeSet<String> = required.iter().cloned().collect();
        type Scored = (BTreeSet<String>, f64, f64, u64, f64, Vec<(String, Vec<String>)>);
        let raw: Vec<Scored> = merged
            .into_iter()
            .map(|(members, slots)| {
                let assignment: Vec<(String, Vec<String>)> = required
                    .iter()
                    .cloned()
                    .zip(slots.into_iter().map(|s| s.into_iter().collect()))
                    .collect();
                let comp = self.competence_score(&assignment, mode);
                let coh = self.cohesiveness(&members);
                let tur = self.user_repetition(&members);
                let tcr = self.concept_repetition(&members, &required_set);
                (members, comp, coh, tur, tcr, assignment)
            })
            .collect();
        let tur_max = raw.iter().map(|r| r.3).max().unwrap_or(0);
        let mut out: Vec<Ranked> = raw
            .into_iter()
            .map(|(members, comp, coh, tur, tcr, assignment)| {
                let tur_n = if tur_max == 0 { 0.0 } else { tur as f64 / tur_max as f64 };
                Ranked {
                    members: members.into_iter().collect(),
                    assignment,
                    competence: comp,
                    cohesiveness: coh,
                    user_repetition: tur,
                    concept_repetition: tcr,
                    total: w[0] * comp + w[1] * coh + w[2] * tur_n + w[3] * tcr,
                }
            })
            .collect();
        out.sort_by(|a, b| {
            b.total
                .partial_cmp(&a.total)
                .unwrap()
                .then_with(|| a.members.cmp(&b.members))
        });
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranked {
    pub members: Vec<String>,
    pub assignment: Vec<(String, Vec<String>)>,
    pub competence: f64,
    pub cohesiveness: f64,
    pub user_repetition: u64,
    pub concept_repetition: f64,
    pub total: f64,
}

/// q areas, each held by its own k people with distinct weights, so every
/// slate is full and no two slates share anyone.
pub fn disjoint_slates(q: usize, k: usize) -> CorpusRecords {
    let mut rec = CorpusRecords::default();
    for n in 0..q * k {
        rec.individuals.push(Located::new(
            at(INDIVIDUALS_FILE, n),
            IndividualRecord {
                id: person_id(n),
                name: format!("P{n}"),
                affiliations: vec![],
                country: None,
                profile: Default::default(),
            },
        ));
    }
    for a in 0..q {
        rec.areas.push(Located::new(
            at(AREAS_FILE, a),
            AreaRecord {
                id: area_id(a),
                name: format!("Area {a}"),
                aliases: vec![],
            },
        ));
        for j in 0..k {
            let n = rec.competence.len();
            rec.competence.push(Located::new(
                at(COMPETENCE_FILE, n),
                CompetenceRecord {
                    individual: person_id(a * k + j),
                    area: area_id(a),
                    weight: 0.9 - j as f64 * 0.01,
                    derived: false,
                },
            ));
        }
    }
    rec
}

/// A ranking scenario drawn from `seed`: a corpus of at most 20 people and
/// 20 publications, 2 to 4 required areas, slate size 1 to 4, raw weights
/// and competence mode.
pub struct Scenario {
    pub records: CorpusRecords,
    pub required: Vec<String>,
    pub k: usize,
    pub weights: [f64; 4],
    pub mode: Mode,
}

impl Scenario {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0ddba11);
        let mut shape = Shape::small(&mut rng);
        shape.areas = rng.gen_range(2..=6);
        shape.people = rng.gen_range(4..=20);
        shape.social_p = rng.gen_range(0.05..0.3);
        shape.competence_p = rng.gen_range(0.3..0.9);
        shape.publications = rng.gen_range(0..=20);
        let records = random_records(seed, shape);
        let q = rng.gen_range(2..=shape.areas.min(4));
        let mut areas: Vec<String> = (0..shape.areas).map(area_id).collect();
        areas.shuffle(&mut rng);
        areas.truncate(q);
        let mut weights = [0.0; 4];
        while weights.iter().sum::<f64>() == 0.0 {
            for w in &mut weights {
                *w = if rng.gen_bool(0.25) {
                    0.0
                } else {
                    f64::from(rng.gen_range(1u8..=10)) / 10.0
                };
            }
        }
        Self {
            records,
            required: areas,
            k: rng.gen_range(1..=4),
            weights,
            mode: if rng.gen_bool(0.5) { Mode::Avg } else { Mode::Max },
        }
    }
}

/// Runs the engine's enumerate-and-rank on a scenario and compares every
/// ranked team with the exhaustive reference. Returns the number of teams
/// compared, or a description of the first mismatch.
pub fn compare_ranking(seed: u64) -> Result<usize, String> {
    use swat_core::teams::{enumerate_candidates, rank_candidates, MetricWeights, DEFAULT_CANDIDATE_CAP};
    use swat_core::{build_snapshot, CompetenceMode};

    let sc = Scenario::new(seed);
    let s = build_snapshot(&sc.records).map_err(|e| e.to_string())?;
    let required: Vec<_> = sc.required.iter().map(|a| s.area_ix(a).unwrap()).collect();
    let [a, b, c, d] = sc.weights;
    let weights = MetricWeights::new(a, b, c, d).map_err(|e| e.to_string())?;
    let mode = match sc.mode {
        Mode::Avg => CompetenceMode::Avg,
        Mode::Max => CompetenceMode::Max,
    };
    let en = enumerate_candidates(&s, &required, sc.k, DEFAULT_CANDIDATE_CAP).map_err(|e| e.to_string())?;
    let got = rank_candidates(&s, &en.candidates, weights, mode, usize::MAX).map_err(|e| e.to_string())?;
    let want = Oracle::new(&sc.records).rank(&sc.required, sc.k, sc.weights, sc.mode);
    if got.len() != want.len() {
        return Err(format!(
            "seed {seed}: {} teams, reference has {}",
            got.len(),
            want.len()
        ));
    }
    for (rank, (g, w)) in got.iter().zip(&want).enumerate() {
        let members: Vec<String> = g.team.members.iter().map(|&p| s.individual(p).id.clone()).collect();
        let assignment: Vec<(String, Vec<String>)> = g
            .team
            .assignment
            .entries()
            .iter()
            .map(|(a, ms)| {
                (
                    s.area(*a).id.clone(),
                    ms.iter().map(|&m| s.individual(m).id.clone()).collect(),
                )
            })
            .collect();
        let raw = &g.scorecard.raw;
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12;
        let ok = members == w.members
            && assignment == w.assignment
            && close(raw.competence, w.competence)
            && close(raw.cohesiveness, w.cohesiveness)
            && raw.user_repetition == w.user_repetition
            && close(raw.concept_repetition, w.concept_repetition)
            && close(g.scorecard.total, w.total);
        if !ok {
            return Err(format!(
                "seed {seed}, rank {rank}: engine {members:?} {assignment:?} {raw:?} total {}; reference {w:?}",
                g.scorecard.total
            ));
        }
    }
    Ok(got.len())
}
