//! Expertise-area suggestion, relation lookup and top-k expert retrieval.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::records::RelationKind;
use crate::model::{AreaIx, ExpertiseArea, GraphSnapshot, PersonIx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchKind {
    Exact,
    NamePrefix,
    TokenPrefix,
    Alias,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuggestionHit {
    pub area_id: String,
    pub name: String,
    pub score: f64,
    pub match_kind: MatchKind,
}

/// Sorted token list over area names and aliases, used to narrow the areas a
/// query can match before scoring them.
#[derive(Debug, Clone, Default)]
pub struct SuggestIndex {
    names: Vec<String>,
    aliases: Vec<Vec<String>>,
    tokens: Vec<(String, u32)>,
}

/// Byte offsets where an alphanumeric run starts.
fn token_starts(s: &str) -> impl Iterator<Item = usize> + '_ {
    let mut prev_alnum = false;
    s.char_indices().filter_map(move |(i, c)| {
        let alnum = c.is_alphanumeric();
        let start = alnum && !prev_alnum;
        prev_alnum = alnum;
        start.then_some(i)
    })
}

fn tokens(s: &str) -> impl Iterator<Item = &str> + '_ {
    s.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty())
}

/// Additive match score of a lowercased query against one lowercased label.
fn label_score(label: &str, query: &str) -> (f64, Option<MatchKind>) {
    let exact = label == query;
    let prefix = label.starts_with(query);
    let token_hits = token_starts(label).filter(|&p| label[p..].starts_with(query)).count();
    let score = 3.0 * f64::from(u8::from(exact)) + 2.0 * f64::from(u8::from(prefix)) + token_hits as f64;
    let kind = if exact {
        Some(MatchKind::Exact)
    } else if prefix {
        Some(MatchKind::NamePrefix)
    } else if token_hits > 0 {
        Some(MatchKind::TokenPrefix)
    } else {
        None
    };
    (score, kind)
}

impl SuggestIndex {
    pub fn build(areas: &[ExpertiseArea]) -> Self {
        let names: Vec<String> = areas.iter().map(|a| a.name.to_lowercase()).collect();
        let aliases: Vec<Vec<String>> = areas
            .iter()
            .map(|a| a.aliases.iter().map(|s| s.to_lowercase()).collect())
            .collect();
        let mut toks = Vec::new();
        for (n, (name, al)) in names.iter().zip(&aliases).enumerate() {
            for label in std::iter::once(name).chain(al) {
                for t in tokens(label) {
                    toks.push((t.to_string(), n as u32));
                }
            }
        }
        toks.sort_unstable();
        toks.dedup();
        Self {
            names,
            aliases,
            tokens: toks,
        }
    }

    fn candidates(&self, query: &str) -> Vec<u32> {
        let first = match query.chars().next() {
            Some(c) if c.is_alphanumeric() => tokens(query).next().unwrap_or(query),
            _ => return (0..self.names.len() as u32).collect(),
        };
        let lo = self.tokens.partition_point(|(t, _)| t.as_str() < first);
        let mut out: Vec<u32> = self.tokens[lo..]
            .iter()
            .take_while(|(t, _)| t.starts_with(first))
            .map(|&(_, a)| a)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn score(&self, area: usize, query: &str) -> Option<(f64, MatchKind)> {
        let (score, kind) = label_score(&self.names[area], query);
        if let Some(kind) = kind {
            return Some((score, kind));
        }
        let best = self.aliases[area]
            .iter()
            .map(|a| label_score(a, query).0)
            .fold(0.0, f64::max);
        (best > 0.0).then_some((best, MatchKind::Alias))
    }
}

/// Autocomplete over area names and aliases, case-insensitive.
///
/// A label matches when the query occurs at the start of one of its tokens.
/// Score is `3·exact + 2·name-prefix + token-prefix count`, computed on the
/// name, or on the best alias when the name does not match. Results are
/// ordered by score, then name, then id.
pub fn suggest(snapshot: &GraphSnapshot, query: &str, limit: usize) -> Vec<SuggestionHit> {
    let query = query.trim().to_lowercase();
    if query.is_empty() || limit == 0 {
        return Vec::new();
    }
    let index = snapshot.suggest_index();
    let mut hits: Vec<(f64, MatchKind, u32)> = index
        .candidates(&query)
        .into_iter()
        .filter_map(|a| index.score(a as usize, &query).map(|(s, k)| (s, k, a)))
        .collect();
    hits.sort_by(|x, y| {
        y.0.total_cmp(&x.0)
            .then_with(|| index.names[x.2 as usize].cmp(&index.names[y.2 as usize]))
            .then(x.2.cmp(&y.2))
    });
    hits.truncate(limit);
    hits.into_iter()
        .map(|(score, match_kind, a)| {
            let area = snapshot.area(AreaIx(a));
            SuggestionHit {
                area_id: area.id.clone(),
                name: area.name.clone(),
                score,
                match_kind,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelatedArea {
    pub area: AreaIx,
    pub kind: RelationKind,
    pub similarity: f64,
}

/// Declared relations leaving `area`, most similar first.
pub fn related(snapshot: &GraphSnapshot, area: &str) -> Result<Vec<RelatedArea>> {
    let a = snapshot.area_ix(area)?;
    Ok(snapshot
        .relations_from(a)
        .map(|r| RelatedArea {
            area: r.to,
            kind: r.kind,
            similarity: r.similarity,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpertHit {
    pub individual: PersonIx,
    /// The queried area.
    pub area: AreaIx,
    /// Competence label on `area`, or on the related area when `via_related` is set.
    pub competence: f64,
    /// Related area the hit came through and the discounted weight
    /// `competence × similarity`.
    pub via_related: Option<(AreaIx, f64)>,
}

impl ExpertHit {
    /// The weight the hit is ranked by.
    pub fn effective(&self) -> f64 {
        self.via_related.map_or(self.competence, |(_, w)| w)
    }
}

/// Top-`k` experts for an area id.
pub fn top_experts(snapshot: &GraphSnapshot, area: &str, k: usize, expand: bool) -> Result<Vec<ExpertHit>> {
    let a = snapshot.area_ix(area)?;
    top_experts_ix(snapshot, a, k, expand)
}

/// Direct competence holders ranked by weight then id. With `expand`,
/// holders of related areas join with weight `competence × similarity`;
/// each individual appears once, under their best weight.
pub fn top_experts_ix(snapshot: &GraphSnapshot, area: AreaIx, k: usize, expand: bool) -> Result<Vec<ExpertHit>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if area.index() >= snapshot.areas().len() {
        return Err(Error::UnknownArea(format!("#{}", area.0)));
    }
    let direct = snapshot.holders(area).map(|e| ExpertHit {
        individual: e.individual,
        area,
        competence: e.weight,
        via_related: None,
    });
    if !expand {
        return Ok(direct.take(k).collect());
    }

    // The global top-k is contained in the union of each source's top-k,
    // widened to keep weight ties at the cut.
    let mut best: HashMap<PersonIx, ExpertHit> = HashMap::new();
    let mut offer = |hit: ExpertHit| match best.get(&hit.individual) {
        Some(cur) if cur.effective() >= hit.effective() => {}
        _ => {
            best.insert(hit.individual, hit);
        }
    };
    for hit in take_with_ties(direct, k) {
        offer(hit);
    }
    for rel in snapshot.relations_from(area) {
        let hits = snapshot.holders(rel.to).map(|e| ExpertHit {
            individual: e.individual,
            area,
            competence: e.weight,
            via_related: Some((rel.to, e.weight * rel.similarity)),
        });
        for hit in take_with_ties(hits, k) {
            offer(hit);
        }
    }
    let mut hits: Vec<ExpertHit> = best.into_values().collect();
    hits.sort_by(|x, y| {
        y.effective()
            .total_cmp(&x.effective())
            .then(x.individual.cmp(&y.individual))
    });
    hits.truncate(k);
    Ok(hits)
}

fn take_with_ties(hits: impl Iterator<Item = ExpertHit>, k: usize) -> Vec<ExpertHit> {
    let mut out: Vec<ExpertHit> = Vec::with_capacity(k);
    for hit in hits {
        if out.len() >= k && hit.effective() < out[k - 1].effective() {
            break;
        }
        out.push(hit);
    }
    out
}
