//! Property bodies shared by the per-module suites and the acceptance run.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{random_records, Mode, Oracle, Shape};
use swat_core::ingest::records::*;
use swat_core::ingest::CorpusStats;
use swat_core::metrics::{
    competence_score, social_cohesiveness, team_concept_repetition, team_user_repetition, Assignment,
};
use swat_core::model::build_snapshot;
use swat_core::{AreaIx, CompetenceMode, GraphSnapshot, Locator, PersonIx};

pub type MetricProperty = fn(u64, u64) -> Result<(), TestCaseError>;

/// Every metric property, by name.
pub const METRIC_PROPERTIES: &[(&str, MetricProperty)] = &[
    ("all_four_metrics_match_the_oracle", all_four_metrics_match_the_oracle),
    ("competence_max_mode_dominates_avg", competence_max_mode_dominates_avg),
    (
        "cohesiveness_is_one_exactly_on_cliques",
        cohesiveness_is_one_exactly_on_cliques,
    ),
    (
        "cohesiveness_is_one_on_constructed_cliques",
        cohesiveness_is_one_on_constructed_cliques,
    ),
    (
        "cohesiveness_never_drops_when_members_gain_an_edge",
        cohesiveness_never_drops_when_members_gain_an_edge,
    ),
    (
        "user_repetition_is_monotone_in_the_team",
        user_repetition_is_monotone_in_the_team,
    ),
    (
        "inserting_a_subset_team_adds_exactly_one",
        inserting_a_subset_team_adds_exactly_one,
    ),
    (
        "concept_repetition_is_one_when_every_relevant_team_matches",
        concept_repetition_is_one_when_every_relevant_team_matches,
    ),
];

/// A small knowledge base with at most 30 people and 20 history teams.
pub fn kb(seed: u64) -> CorpusRecords {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shape = Shape::small(&mut rng);
    shape.social_p = rng.gen_range(0.02..0.3);
    shape.publications = rng.gen_range(0..=20);
    random_records(seed, shape)
}

fn pick_team(s: &GraphSnapshot, seed: u64, max: usize) -> Vec<PersonIx> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = s.individuals().len();
    let size = rng.gen_range(1..=n.min(max));
    let mut all: Vec<u32> = (0..n as u32).collect();
    all.shuffle(&mut rng);
    let mut team: Vec<PersonIx> = all[..size].iter().map(|&p| PersonIx(p)).collect();
    team.sort();
    team
}

fn pick_areas(s: &GraphSnapshot, seed: u64) -> Vec<AreaIx> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
    let n = s.areas().len();
    let size = rng.gen_range(1..=n.min(4));
    let mut all: Vec<u32> = (0..n as u32).collect();
    all.shuffle(&mut rng);
    all[..size].iter().map(|&a| AreaIx(a)).collect()
}

fn ids(s: &GraphSnapshot, team: &[PersonIx]) -> BTreeSet<String> {
    team.iter().map(|&p| s.individual(p).id.clone()).collect()
}

fn area_ids(s: &GraphSnapshot, areas: &[AreaIx]) -> Vec<String> {
    areas.iter().map(|&a| s.area(a).id.clone()).collect()
}

/// Each area mapped to a random non-empty subset of the team.
fn random_assignment(team: &[PersonIx], areas: &[AreaIx], seed: u64) -> Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
    Assignment::new(
        areas
            .iter()
            .map(|&a| {
                let mut members: Vec<PersonIx> = team.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                if members.is_empty() {
                    members.push(team[rng.gen_range(0..team.len())]);
                }
                (a, members)
            })
            .collect(),
    )
}

fn add_publication(rec: &mut CorpusRecords, authors: Vec<String>, areas: Vec<String>) {
    let n = rec.publications.len();
    rec.publications.push(Located::new(
        Locator::new(PUBLICATIONS_FILE, n + 1),
        PublicationRecord {
            id: format!("extra{n}"),
            authors,
            areas,
            year: 2010,
            venue: None,
        },
    ));
}

pub fn all_four_metrics_match_the_oracle(seed: u64, pick: u64) -> Result<(), TestCaseError> {
    let rec = kb(seed);
    let s = build_snapshot(&rec).unwrap();
    let o = Oracle::new(&rec);
    let team = pick_team(&s, pick, 6);
    let areas = pick_areas(&s, pick);
    let assignment = random_assignment(&team, &areas, pick);
    let as_ids: Vec<(String, Vec<String>)> = assignment
        .entries()
        .iter()
        .map(|(a, ms)| {
            (
                s.area(*a).id.clone(),
                ms.iter().map(|&m| s.individual(m).id.clone()).collect(),
            )
        })
        .collect();
    let members = ids(&s, &team);
    let required: BTreeSet<String> = area_ids(&s, &areas).into_iter().collect();
    for (mode, omode) in [(CompetenceMode::Avg, Mode::Avg), (CompetenceMode::Max, Mode::Max)] {
        let got = competence_score(&s, &assignment, mode).unwrap();
        prop_assert!((got - o.competence_score(&as_ids, omode)).abs() < 1e-12);
    }
    prop_assert!((social_cohesiveness(&s, &team).unwrap() - o.cohesiveness(&members)).abs() < 1e-12);
    prop_assert_eq!(team_user_repetition(&s, &team), o.user_repetition(&members));
    let tcr = team_concept_repetition(&s, &team, &areas);
    prop_assert!((tcr - o.concept_repetition(&members, &required)).abs() < 1e-12);
    Ok(())
}

pub fn competence_max_mode_dominates_avg(seed: u64, pick: u64) -> Result<(), TestCaseError> {
    let s = build_snapshot(&kb(seed)).unwrap();
    let team = pick_team(&s, pick, 6);
    let assignment = random_assignment(&team, &pick_areas(&s, pick), pick);
    let avg = competence_score(&s, &assignment, CompetenceMode::Avg).unwrap();
    let max = competence_score(&s, &assignment, CompetenceMode::Max).unwrap();
    prop_assert!(max >= avg);
    prop_assert!((0.0..=1.0).contains(&avg) && (0.0..=1.0).contains(&max));
    Ok(())
}

pub fn cohesiveness_is_one_exactly_on_cliques(seed: u64, pick: u64) -> Result<(), TestCaseError> {
    let rec = kb(seed);
    let s = build_snapshot(&rec).unwrap();
    let o = Oracle::new(&rec);
    let team = pick_team(&s, pick, 5);
    let coh = social_cohesiveness(&s, &team).unwrap();
    prop_assert!((0.0..=1.0).contains(&coh));
    let members: Vec<String> = ids(&s, &team).into_iter().collect();
    let clique = members.len() >= 2
        && members
            .iter()
            .enumerate()
            .all(|(i, a)| members[i + 1..].iter().all(|b| o.distance(a, b, None, 1) == Some(1)));
    prop_assert_eq!(coh == 1.0, clique);
    Ok(())
}

pub fn cohesiveness_is_one_on_constructed_cliques(seed: u64, pick: u64) -> Result<(), TestCaseError> {
    let mut rec = kb(seed);
    let s = build_snapshot(&rec).unwrap();
    let team = pick_team(&s, pick, 6);
    let members: Vec<String> = ids(&s, &team).into_iter().collect();
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            let n = rec.social.len();
            rec.social.push(Located::new(
                Locator::new(SOCIAL_FILE, n + 1),
                SocialRecord {
                    src: a.clone(),
                    dst: b.clone(),
                    dimension: "clique".into(),
                    strength: 0.5,
                },
            ));
        }
    }
    let s = build_snapshot(&rec).unwrap();
    let coh = social_cohesiveness(&s, &team).unwrap();
    prop_assert_eq!(coh, if team.len() >= 2 { 1.0 } else { 0.0 });
    Ok(())
}

pub fn cohesiveness_never_drops_when_members_gain_an_edge(seed: u64, pick: u64) -> Result<(), TestCaseError> {
    let mut rec = kb(seed);
    let s = build_snapshot(&rec).unwrap();
    let team = pick_team(&s, pick, 6);
    prop_assume!(team.len() >= 2);
    let before = social_cohesiveness(&s, &team).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(pick);
    let (x, y) = loop {
        let x = rng.gen_range(0..team.len());
        let y = rng.gen_range(0..team.len());
        if x != y {
            break (x, y);
        }
    };
    let n = rec.social.len();
    rec.social.push(Located::new(
        Locator::new(SOCIAL_FILE, n + 1),
        SocialRecord {
            src: s.individual(team[x]).id.clone(),
            dst: s.individual(team[y]).id.clone(),
            dimension: "added".into(),
            strength: 0.3,
        },
    ));
    let after = social_cohesiveness(&build_snapshot(&rec).unwrap(), &team).unwrap();
    prop_assert!(after >= before, "{} < {}", after, before);
    Ok(())
}

pub fn user_repetition_is_monotone_in_the_team(seed: u64, pick: u64) -> Result<(), TestCaseError> {
    let s = build_snapshot(&kb(seed)).unwrap();
    let team = pick_team(&s, pick, 6);
    let outside: Vec<PersonIx> = (0..s.individuals().len() as u32)
        .map(PersonIx)
        .filter(|p| !team.contains(p))
        .collect();
    prop_assume!(!outside.is_empty());
    let mut bigger = team.clone();
    bigger.push(outside[(pick % outside.len() as u64) as usize]);
    prop_assert!(team_user_repetition(&s, &bigger) >= team_user_repetition(&s, &team));
    Ok(())
}

pub fn inserting_a_subset_team_adds_exactly_one(seed: u64, pick: u64) -> Result<(), TestCaseError> {
    let mut rec = kb(seed);
    let s = build_snapshot(&rec).unwrap();
    let team = pick_team(&s, pick, 6);
    prop_assume!(team.len() >= 2);
    let before = team_user_repetition(&s, &team);
    let mut rng = ChaCha8Rng::seed_from_u64(pick);
    let size = rng.gen_range(2..=team.len());
    let authors: Vec<String> = team
        .choose_multiple(&mut rng, size)
        .map(|&p| s.individual(p).id.clone())
        .collect();
    add_publication(&mut rec, authors, vec![s.area(AreaIx(0)).id.clone()]);
    let after = team_user_repetition(&build_snapshot(&rec).unwrap(), &team);
    prop_assert_eq!(after, before + 1);
    Ok(())
}

pub fn concept_repetition_is_one_when_every_relevant_team_matches(seed: u64, pick: u64) -> Result<(), TestCaseError> {
    let mut rec = kb(seed);
    rec.publications.clear();
    let s = build_snapshot(&rec).unwrap();
    let team = pick_team(&s, pick, 5);
    let areas = pick_areas(&s, pick);
    let required = area_ids(&s, &areas);
    let n = s.individuals().len();
    let mut rng = ChaCha8Rng::seed_from_u64(pick);
    for _ in 0..rng.gen_range(1..6) {
        // Each past team includes a team member and covers exactly `required`.
        let a = s.individual(team[rng.gen_range(0..team.len())]).id.clone();
        let b = s.individual(PersonIx(rng.gen_range(0..n as u32))).id.clone();
        prop_assume!(a != b);
        let mut shuffled = required.clone();
        shuffled.shuffle(&mut rng);
        add_publication(&mut rec, vec![a, b], shuffled);
    }
    let s = build_snapshot(&rec).unwrap();
    prop_assert_eq!(team_concept_repetition(&s, &team, &areas), 1.0);
    let tcr = team_concept_repetition(&s, &team, &[AreaIx(0)]);
    prop_assert!((0.0..=1.0).contains(&tcr));
    Ok(())
}

/// Independent recount of every statistic from the records themselves.
pub fn recount(rec: &CorpusRecords) -> CorpusStats {
    let people = rec.individuals.len();
    let mut neighbours: HashMap<&str, BTreeSet<&str>> = HashMap::new();
    for s in &rec.social {
        neighbours.entry(&s.record.src).or_default().insert(&s.record.dst);
        neighbours.entry(&s.record.dst).or_default().insert(&s.record.src);
    }
    let links: usize = neighbours.values().map(BTreeSet::len).sum();
    let teams: Vec<usize> = rec
        .publications
        .iter()
        .filter(|p| p.record.authors.len() >= 2 && !p.record.areas.is_empty())
        .map(|p| p.record.authors.len())
        .collect();
    let mut histogram = BTreeMap::new();
    let mut years: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for p in &rec.publications {
        *histogram.entry(p.record.authors.len()).or_insert(0usize) += 1;
        years.entry(p.record.year).or_default().push(p.record.authors.len());
    }
    let total = rec.publications.len() as f64;
    let cdf = histogram
        .keys()
        .map(|&n| {
            let upto: usize = histogram.range(..=n).map(|(_, c)| c).sum();
            (n, upto as f64 / total)
        })
        .collect();
    CorpusStats {
        individuals_count: people,
        concepts_count: rec.areas.len(),
        teams_count: teams.len(),
        publications_count: rec.publications.len(),
        avg_connections_per_individual: if people == 0 { 0.0 } else { links as f64 / people as f64 },
        avg_individuals_per_team: if teams.is_empty() {
            0.0
        } else {
            teams.iter().sum::<usize>() as f64 / teams.len() as f64
        },
        max_individuals_per_team: teams.iter().copied().max().unwrap_or(0),
        organizations_count: rec
            .individuals
            .iter()
            .flat_map(|i| i.record.affiliations.iter())
            .collect::<BTreeSet<_>>()
            .len(),
        countries_count: rec
            .individuals
            .iter()
            .filter_map(|i| i.record.country.as_ref())
            .collect::<BTreeSet<_>>()
            .len(),
        authors_histogram: histogram,
        authors_cdf: cdf,
        yearly_single_author_pct: years
            .iter()
            .map(|(&y, v)| (y, v.iter().filter(|&&n| n == 1).count() as f64 / v.len() as f64))
            .collect(),
        yearly_max_authors: years.iter().map(|(&y, v)| (y, *v.iter().max().unwrap())).collect(),
    }
}

pub fn assert_stats_match(got: &CorpusStats, want: &CorpusStats) -> Result<(), TestCaseError> {
    let close = |a: f64, b: f64| (a - b).abs() < 1e-9;
    prop_assert_eq!(got.individuals_count, want.individuals_count);
    prop_assert_eq!(got.concepts_count, want.concepts_count);
    prop_assert_eq!(got.teams_count, want.teams_count);
    prop_assert_eq!(got.publications_count, want.publications_count);
    prop_assert_eq!(got.max_individuals_per_team, want.max_individuals_per_team);
    prop_assert_eq!(got.organizations_count, want.organizations_count);
    prop_assert_eq!(got.countries_count, want.countries_count);
    prop_assert_eq!(&got.authors_histogram, &want.authors_histogram);
    prop_assert_eq!(&got.yearly_max_authors, &want.yearly_max_authors);
    prop_assert!(close(
        got.avg_connections_per_individual,
        want.avg_connections_per_individual
    ));
    prop_assert!(close(got.avg_individuals_per_team, want.avg_individuals_per_team));
    prop_assert_eq!(got.authors_cdf.len(), want.authors_cdf.len());
    for ((n, a), (m, b)) in got.authors_cdf.iter().zip(&want.authors_cdf) {
        prop_assert!(n == m && close(*a, *b));
    }
    prop_assert_eq!(got.yearly_single_author_pct.len(), want.yearly_single_author_pct.len());
    for ((x, a), (y, b)) in got.yearly_single_author_pct.iter().zip(&want.yearly_single_author_pct) {
        prop_assert!(x == y && close(*a, *b));
    }
    let values: Vec<f64> = got.authors_cdf.values().copied().collect();
    prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    if want.publications_count > 0 {
        prop_assert_eq!(values.last().copied(), Some(1.0));
    }
    Ok(())
}
