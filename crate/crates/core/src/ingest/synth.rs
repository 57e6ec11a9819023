//! Seeded synthetic corpora.
//!
//! Productivity of individuals and popularity of areas are heavy-tailed, the
//! number of authors per publication follows a truncated geometric law, and
//! the coauthor dimension of the social graph is exactly the coauthorship
//! implied by the publications. Every (author, area) pair seen in a
//! publication gets a competence edge, so history cross-validation has
//! nothing to add.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::records::*;
use crate::error::{Error, Locator, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthParams {
    pub individuals: usize,
    pub areas: usize,
    pub publications: usize,
    pub dimensions: usize,
}

const MAX_AUTHORS: usize = 8;
/// Per-step stopping probability of the author-count law; P(1 author) = 0.3.
const AUTHOR_STOP: f64 = 0.3;
const MAX_AREAS_PER_PUBLICATION: usize = 3;
const FIRST_YEAR: i32 = 1990;
const LAST_YEAR: i32 = 2011;

const FIRST_NAMES: &[&str] = &[
    "Alice", "Bruno", "Chen", "Dana", "Elif", "Farid", "Greta", "Hiro", "Ines", "Jonas", "Kavya", "Luca", "Mei",
    "Nadia", "Omar", "Priya", "Quentin", "Rosa", "Sven", "Tomoko", "Ugo", "Vera", "Wei", "Yara",
];
const LAST_NAMES: &[&str] = &[
    "Anwar", "Bianchi", "Cohen", "Datta", "Eriksen", "Fischer", "Gupta", "Hoang", "Ito", "Jensen", "Kim", "Lopez",
    "Moreau", "Nakamura", "Okafor", "Petrov", "Quinn", "Rossi", "Schmidt", "Tan", "Ueda", "Varga", "Wong", "Zhang",
];
const MODIFIERS: &[&str] = &[
    "Applied",
    "Social",
    "Distributed",
    "Statistical",
    "Online",
    "Computational",
    "Cognitive",
    "Quantum",
    "Parallel",
    "Secure",
    "Probabilistic",
    "Semantic",
    "Mobile",
    "Visual",
    "Neural",
    "Spatial",
    "Temporal",
    "Interactive",
    "Biomedical",
    "Economic",
];
const TOPICS: &[&str] = &[
    "Network Analysis",
    "Databases",
    "Learning",
    "Cryptography",
    "Data Mining",
    "Cloud Computing",
    "Psychology",
    "Networks",
    "Computing",
    "Information Retrieval",
    "Robotics",
    "Optimization",
    "Graph Theory",
    "Signal Processing",
    "Systems",
    "Linguistics",
    "Vision",
    "Game Theory",
    "Algorithms",
    "Simulation",
];
const PLACES: &[(&str, &str)] = &[
    ("Nanyang", "Singapore"),
    ("Trento", "Italy"),
    ("Lyon", "France"),
    ("Delft", "Netherlands"),
    ("Kyoto", "Japan"),
    ("Austin", "United States"),
    ("Toronto", "Canada"),
    ("Pune", "India"),
    ("Porto", "Portugal"),
    ("Aarhus", "Denmark"),
    ("Seoul", "South Korea"),
    ("Zurich", "Switzerland"),
];
const DIMENSIONS: &[&str] = &["coauthor", "colleague", "friend", "advisor", "follower"];
const VENUES: &[&str] = &[
    "ICDE",
    "VLDB",
    "SIGMOD",
    "KDD",
    "WWW",
    "CIKM",
    "ICWSM",
    "HT",
    "Inf. Syst.",
    "TKDE",
];

fn round_to(x: f64, digits: i32) -> f64 {
    let f = 10f64.powi(digits);
    (x * f).round() / f
}

fn dimension_name(n: usize) -> String {
    DIMENSIONS
        .get(n)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("dimension{n}"))
}

/// Heavy-tailed weights over a random permutation of `0..n`.
fn zipf_weights(n: usize, exponent: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut ranks: Vec<usize> = (0..n).collect();
    ranks.shuffle(rng);
    ranks
        .into_iter()
        .map(|r| 1.0 / ((r + 1) as f64).powf(exponent))
        .collect()
}

/// Draws `count` distinct indices, mostly by weight.
fn distinct_sample(count: usize, population: usize, dist: &WeightedIndex<f64>, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        let pick = if tries < 64 {
            dist.sample(rng) as u32
        } else {
            rng.gen_range(0..population) as u32
        };
        tries += 1;
        if !out.contains(&pick) {
            out.push(pick);
        }
    }
    out
}

fn at(file: &str, n: usize) -> Locator {
    Locator::new(file, n + 1)
}

/// Generates a corpus from counts and a seed. Identical inputs give
/// identical records, in file order with line locators.
pub fn generate_synthetic(params: &SynthParams, seed: u64) -> Result<CorpusRecords> {
    let SynthParams {
        individuals: n_people,
        areas: n_areas,
        publications: n_pubs,
        dimensions: n_dims,
    } = *params;
    for (name, v) in [
        ("individuals", n_people),
        ("areas", n_areas),
        ("publications", n_pubs),
        ("dimensions", n_dims),
    ] {
        if v == 0 {
            return Err(Error::InvalidParams(format!("{name} must be at least 1")));
        }
    }
    if n_dims > crate::model::MAX_DIMENSIONS {
        return Err(Error::InvalidParams(format!(
            "at most {} dimensions",
            crate::model::MAX_DIMENSIONS
        )));
    }
    if n_people > u32::MAX as usize || n_areas > u32::MAX as usize {
        return Err(Error::InvalidParams("counts exceed 32-bit ids".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = CorpusRecords::default();

    // Organizations and people.
    let n_orgs = (n_people / 50).max(1);
    let orgs: Vec<(String, &str)> = (0..n_orgs)
        .map(|o| {
            let (city, country) = PLACES[o % PLACES.len()];
            let name = match o / PLACES.len() {
                0 => format!("University of {city}"),
                1 => format!("{city} Institute of Technology"),
                g => format!("{city} Research Lab {g}"),
            };
            (name, country)
        })
        .collect();
    let person_id = |n: usize| format!("i{n:07}");
    let mut person_org = Vec::with_capacity(n_people);
    for n in 0..n_people {
        let org = rng.gen_range(0..n_orgs);
        person_org.push(org);
        let name = format!(
            "{} {}",
            FIRST_NAMES.choose(&mut rng).unwrap(),
            LAST_NAMES.choose(&mut rng).unwrap()
        );
        let mut profile = BTreeMap::new();
        profile.insert(
            "position".to_string(),
            ["student", "postdoc", "faculty", "industry"][rng.gen_range(0..4)].to_string(),
        );
        rec.individuals.push(Located::new(
            at(INDIVIDUALS_FILE, n),
            IndividualRecord {
                id: person_id(n),
                name,
                affiliations: vec![orgs[org].0.clone()],
                country: Some(orgs[org].1.to_string()),
                profile,
            },
        ));
    }

    // Areas.
    let mut combos: Vec<(usize, usize)> = (0..MODIFIERS.len())
        .flat_map(|m| (0..TOPICS.len()).map(move |t| (m, t)))
        .collect();
    combos.shuffle(&mut rng);
    let area_id = |n: usize| format!("c{n:06}");
    for n in 0..n_areas {
        let (m, t) = combos[n % combos.len()];
        let mut name = format!("{} {}", MODIFIERS[m], TOPICS[t]);
        if n >= combos.len() {
            name = format!("{name} {}", n / combos.len() + 1);
        }
        let aliases = if rng.gen_bool(0.25) {
            let acronym: String = name
                .split_whitespace()
                .filter_map(|w| w.chars().next())
                .filter(|c| c.is_alphabetic())
                .collect();
            vec![acronym]
        } else {
            Vec::new()
        };
        rec.areas.push(Located::new(
            at(AREAS_FILE, n),
            AreaRecord {
                id: area_id(n),
                name,
                aliases,
            },
        ));
    }

    // Area relations.
    if n_areas >= 2 {
        let mut seen = HashSet::new();
        let wanted = n_areas / 2;
        let mut attempts = 0;
        while rec.relations.len() < wanted && attempts < wanted * 10 {
            attempts += 1;
            let from = rng.gen_range(0..n_areas);
            let to = rng.gen_range(0..n_areas);
            if from == to || !seen.insert((from, to)) {
                continue;
            }
            let roll: f64 = rng.gen();
            let (kind, similarity) = if roll < 0.7 {
                (RelationKind::Similar, round_to(rng.gen_range(0.3..0.95), 2))
            } else if roll < 0.9 {
                (RelationKind::Subsumes, round_to(rng.gen_range(0.5..0.9), 2))
            } else {
                (RelationKind::Synonym, 1.0)
            };
            let n = rec.relations.len();
            rec.relations.push(Located::new(
                at(RELATIONS_FILE, n),
                RelationRecord {
                    from: area_id(from),
                    to: area_id(to),
                    kind,
                    similarity,
                },
            ));
        }
    }

    // Publications.
    let people_dist = WeightedIndex::new(zipf_weights(n_people, 0.7, &mut rng)).expect("positive weights");
    let area_dist = WeightedIndex::new(zipf_weights(n_areas, 0.9, &mut rng)).expect("positive weights");
    let max_authors = MAX_AUTHORS.min(n_people);
    let max_areas = MAX_AREAS_PER_PUBLICATION.min(n_areas);
    let mut expertise: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut coauthors: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for n in 0..n_pubs {
        let mut k = 1;
        while k < max_authors && !rng.gen_bool(AUTHOR_STOP) {
            k += 1;
        }
        let authors = distinct_sample(k, n_people, &people_dist, &mut rng);
        let mut a = 1;
        while a < max_areas && rng.gen_bool(0.35) {
            a += 1;
        }
        let areas = distinct_sample(a, n_areas, &area_dist, &mut rng);
        for &p in &authors {
            for &c in &areas {
                *expertise.entry((p, c)).or_default() += 1;
            }
        }
        for (i, &p) in authors.iter().enumerate() {
            for &q in &authors[i + 1..] {
                *coauthors.entry((p.min(q), p.max(q))).or_default() += 1;
            }
        }
        let year = rng.gen_range(FIRST_YEAR..=LAST_YEAR);
        let venue = VENUES.choose(&mut rng).map(|v| v.to_string());
        rec.publications.push(Located::new(
            at(PUBLICATIONS_FILE, n),
            PublicationRecord {
                id: format!("pub{n:08}"),
                authors: authors.iter().map(|&p| person_id(p as usize)).collect(),
                areas: areas.iter().map(|&c| area_id(c as usize)).collect(),
                year,
                venue,
            },
        ));
    }

    // Competence for every observed (author, area) pair.
    for (&(p, c), &count) in &expertise {
        let base = f64::from(count) / (f64::from(count) + 1.5);
        let weight = round_to((base * rng.gen_range(0.85..1.0)).clamp(0.01, 0.99), 4);
        let n = rec.competence.len();
        rec.competence.push(Located::new(
            at(COMPETENCE_FILE, n),
            CompetenceRecord {
                individual: person_id(p as usize),
                area: area_id(c as usize),
                weight,
                derived: false,
            },
        ));
    }

    // Social graph: coauthorship first, then the extra dimensions.
    let push_social = |rec: &mut CorpusRecords, src: u32, dst: u32, dim: &str, strength: f64| {
        let n = rec.social.len();
        rec.social.push(Located::new(
            at(SOCIAL_FILE, n),
            SocialRecord {
                src: person_id(src as usize),
                dst: person_id(dst as usize),
                dimension: dim.to_string(),
                strength,
            },
        ));
    };
    for (&(p, q), &count) in &coauthors {
        let strength = round_to(f64::from(count) / (f64::from(count) + 1.0), 4).min(0.99);
        push_social(&mut rec, p, q, DIMENSIONS[0], strength);
        push_social(&mut rec, q, p, DIMENSIONS[0], strength);
    }
    if n_people >= 2 {
        let mut by_org: Vec<Vec<u32>> = vec![Vec::new(); n_orgs];
        for (p, &o) in person_org.iter().enumerate() {
            by_org[o].push(p as u32);
        }
        for d in 1..n_dims {
            let name = dimension_name(d);
            let wanted = (n_people / 2).max(1);
            let mut pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
            let mut attempts = 0;
            while pairs.len() < wanted && attempts < wanted * 10 {
                attempts += 1;
                let p = rng.gen_range(0..n_people) as u32;
                // Colleagues share an organization; other dimensions are open.
                let q = if d == 1 {
                    let peers = &by_org[person_org[p as usize]];
                    peers[rng.gen_range(0..peers.len())]
                } else {
                    rng.gen_range(0..n_people) as u32
                };
                if p != q {
                    pairs.insert((p.min(q), p.max(q)));
                }
            }
            for (p, q) in pairs {
                let forward = round_to(rng.gen_range(0.05..0.95), 2);
                let backward = if d == 1 {
                    forward
                } else {
                    round_to(rng.gen_range(0.05..0.95), 2)
                };
                push_social(&mut rec, p, q, &name, forward);
                push_social(&mut rec, q, p, &name, backward);
            }
        }
    }

    Ok(rec)
}
