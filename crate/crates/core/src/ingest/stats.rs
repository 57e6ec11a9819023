use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{GraphSnapshot, PersonIx};

/// Summary figures of a knowledge base.
///
/// Team figures are over history teams; the author-count histogram, CDF and
/// yearly series are over all publications, single-author ones included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub individuals_count: usize,
    pub concepts_count: usize,
    pub teams_count: usize,
    pub publications_count: usize,
    /// Mean number of distinct social neighbours, all dimensions, both directions.
    pub avg_connections_per_individual: f64,
    pub avg_individuals_per_team: f64,
    pub max_individuals_per_team: usize,
    pub organizations_count: usize,
    pub countries_count: usize,
    pub authors_histogram: BTreeMap<usize, usize>,
    pub authors_cdf: BTreeMap<usize, f64>,
    pub yearly_single_author_pct: BTreeMap<i32, f64>,
    pub yearly_max_authors: BTreeMap<i32, usize>,
}

pub fn compute_stats(snapshot: &GraphSnapshot) -> CorpusStats {
    let people = snapshot.individuals();
    let connections: usize = (0..people.len())
        .map(|p| snapshot.neighbor_count(PersonIx(p as u32)))
        .sum();
    let avg_connections = if people.is_empty() {
        0.0
    } else {
        connections as f64 / people.len() as f64
    };

    let teams = snapshot.history();
    let team_sizes: usize = teams.iter().map(|t| t.members.len()).sum();
    let avg_team = if teams.is_empty() {
        0.0
    } else {
        team_sizes as f64 / teams.len() as f64
    };

    let organizations: BTreeSet<&str> = people
        .iter()
        .flat_map(|p| p.affiliations.iter().map(String::as_str))
        .filter(|o| !o.trim().is_empty())
        .collect();
    let countries: BTreeSet<&str> = people
        .iter()
        .filter_map(|p| p.country.as_deref())
        .filter(|c| !c.trim().is_empty())
        .collect();

    let publications = snapshot.publications();
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut per_year: BTreeMap<i32, (usize, usize, usize)> = BTreeMap::new();
    for p in publications {
        let n = p.authors.len();
        *histogram.entry(n).or_default() += 1;
        let year = per_year.entry(p.year).or_default();
        year.0 += 1;
        year.1 += usize::from(n == 1);
        year.2 = year.2.max(n);
    }
    let total = publications.len() as f64;
    let mut running = 0usize;
    let cdf = histogram
        .iter()
        .map(|(&n, &count)| {
            running += count;
            (n, running as f64 / total)
        })
        .collect();

    CorpusStats {
        individuals_count: people.len(),
        concepts_count: snapshot.areas().len(),
        teams_count: teams.len(),
        publications_count: publications.len(),
        avg_connections_per_individual: avg_connections,
        avg_individuals_per_team: avg_team,
        max_individuals_per_team: teams.iter().map(|t| t.members.len()).max().unwrap_or(0),
        organizations_count: organizations.len(),
        countries_count: countries.len(),
        authors_histogram: histogram,
        authors_cdf: cdf,
        yearly_single_author_pct: per_year
            .iter()
            .map(|(&y, &(all, single, _))| (y, single as f64 / all as f64))
            .collect(),
        yearly_max_authors: per_year.iter().map(|(&y, &(_, _, max))| (y, max)).collect(),
    }
}
