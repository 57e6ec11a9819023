//! Corpus ingestion: parsing and cleaning the line-delimited corpus files,
//! enriching competence from collaboration history, synthetic corpora and
//! corpus statistics.

pub mod records;
mod stats;
mod synth;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Locator, Result};
use records::*;

pub use stats::{compute_stats, CorpusStats};
pub use synth::{generate_synthetic, SynthParams};

/// Bounds that out-of-range competence and strength labels are clamped to.
pub const CLAMP_MIN: f64 = 0.001;
pub const CLAMP_MAX: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnomalyAction {
    Clamped,
    Dropped,
    DerivedEdgeAdded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anomaly {
    pub at: Locator,
    pub rule: String,
    pub action: AnomalyAction,
}

/// Every change made to the input while cleaning or enriching it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnomalyReport {
    pub entries: Vec<Anomaly>,
}

impl AnomalyReport {
    fn push(&mut self, at: &Locator, rule: impl Into<String>, action: AnomalyAction) {
        self.entries.push(Anomaly {
            at: at.clone(),
            rule: rule.into(),
            action,
        });
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn count(&self, action: AnomalyAction) -> usize {
        self.entries.iter().filter(|a| a.action == action).count()
    }

    pub fn extend(&mut self, other: AnomalyReport) {
        self.entries.extend(other.entries);
    }
}

/// Where each corpus file lives. Individuals, areas and publications are
/// required; the other files may be absent.
#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub individuals: PathBuf,
    pub areas: PathBuf,
    pub relations: PathBuf,
    pub competence: PathBuf,
    pub social: PathBuf,
    pub publications: PathBuf,
}

impl CorpusPaths {
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        Self {
            individuals: dir.join(INDIVIDUALS_FILE),
            areas: dir.join(AREAS_FILE),
            relations: dir.join(RELATIONS_FILE),
            competence: dir.join(COMPETENCE_FILE),
            social: dir.join(SOCIAL_FILE),
            publications: dir.join(PUBLICATIONS_FILE),
        }
    }
}

fn read_text(path: &Path, required: bool) -> Result<Option<String>> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if !required && e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(path, e)),
    };
    String::from_utf8(bytes).map(Some).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: format!("not UTF-8 text: {e}"),
    })
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Parses every non-blank line; lines that do not decode are reported and skipped.
fn parse_lines<T: DeserializeOwned>(
    path: &Path,
    required: bool,
    report: &mut AnomalyReport,
) -> Result<Vec<Located<T>>> {
    let Some(text) = read_text(path, required)? else {
        return Ok(Vec::new());
    };
    let label = file_label(path);
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let at = Locator::new(label.clone(), n + 1);
        match serde_json::from_str::<T>(line) {
            Ok(record) => out.push(Located::new(at, record)),
            Err(e) => report.push(&at, format!("malformed record: {e}"), AnomalyAction::Dropped),
        }
    }
    Ok(out)
}

fn clamp_label(value: f64) -> Option<f64> {
    if value > 0.0 && value < 1.0 {
        None
    } else if value <= 0.0 {
        Some(CLAMP_MIN)
    } else {
        Some(CLAMP_MAX)
    }
}

/// Removes repeated entries, reporting each removal.
fn dedup_listed(items: &mut Vec<String>, at: &Locator, what: &str, report: &mut AnomalyReport) {
    let mut seen = HashSet::new();
    items.retain(|item| {
        let fresh = seen.insert(item.clone());
        if !fresh {
            report.push(at, format!("duplicate {what} `{item}`"), AnomalyAction::Dropped);
        }
        fresh
    });
}

/// Reads a corpus directory.
pub fn parse_corpus(dir: impl AsRef<Path>) -> Result<(CorpusRecords, AnomalyReport)> {
    parse_corpus_files(&CorpusPaths::in_dir(dir))
}

/// Reads and cleans the corpus files. Malformed lines, self-loops and
/// records with empty identifiers are dropped; labels outside their range are
/// clamped. Referential problems are left for snapshot construction.
pub fn parse_corpus_files(paths: &CorpusPaths) -> Result<(CorpusRecords, AnomalyReport)> {
    let mut report = AnomalyReport::default();
    let mut rec = CorpusRecords::default();

    for r in parse_lines::<IndividualRecord>(&paths.individuals, true, &mut report)? {
        if r.record.id.is_empty() {
            report.push(&r.at, "empty individual id", AnomalyAction::Dropped);
        } else if r.record.name.trim().is_empty() {
            report.push(&r.at, "empty individual name", AnomalyAction::Dropped);
        } else {
            rec.individuals.push(r);
        }
    }

    for mut r in parse_lines::<AreaRecord>(&paths.areas, true, &mut report)? {
        if r.record.id.is_empty() {
            report.push(&r.at, "empty area id", AnomalyAction::Dropped);
        } else if r.record.name.trim().is_empty() {
            report.push(&r.at, "empty area name", AnomalyAction::Dropped);
        } else {
            dedup_listed(&mut r.record.aliases, &r.at, "alias", &mut report);
            rec.areas.push(r);
        }
    }

    for mut r in parse_lines::<RelationRecord>(&paths.relations, false, &mut report)? {
        let rel = &mut r.record;
        if rel.from == rel.to {
            report.push(&r.at, "relation links an area to itself", AnomalyAction::Dropped);
            continue;
        }
        let wanted = if rel.kind == RelationKind::Synonym {
            1.0
        } else {
            rel.similarity.clamp(CLAMP_MIN, 1.0)
        };
        if wanted != rel.similarity {
            let rule = if rel.kind == RelationKind::Synonym {
                format!("synonym similarity {} must be 1", rel.similarity)
            } else {
                format!("similarity {} outside (0, 1]", rel.similarity)
            };
            rel.similarity = wanted;
            report.push(&r.at, rule, AnomalyAction::Clamped);
        }
        rec.relations.push(r);
    }

    for mut r in parse_lines::<CompetenceRecord>(&paths.competence, false, &mut report)? {
        let c = &mut r.record;
        if c.individual.is_empty() || c.area.is_empty() {
            report.push(&r.at, "competence edge with empty endpoint", AnomalyAction::Dropped);
            continue;
        }
        if let Some(w) = clamp_label(c.weight) {
            report.push(
                &r.at,
                format!("competence weight {} outside (0, 1)", c.weight),
                AnomalyAction::Clamped,
            );
            c.weight = w;
        }
        rec.competence.push(r);
    }

    for mut r in parse_lines::<SocialRecord>(&paths.social, false, &mut report)? {
        let s = &mut r.record;
        if s.src == s.dst {
            report.push(&r.at, "social edge is a self-loop", AnomalyAction::Dropped);
            continue;
        }
        if s.src.is_empty() || s.dst.is_empty() || s.dimension.is_empty() {
            report.push(&r.at, "social edge with empty field", AnomalyAction::Dropped);
            continue;
        }
        if let Some(v) = clamp_label(s.strength) {
            report.push(
                &r.at,
                format!("social strength {} outside (0, 1)", s.strength),
                AnomalyAction::Clamped,
            );
            s.strength = v;
        }
        rec.social.push(r);
    }

    for mut r in parse_lines::<PublicationRecord>(&paths.publications, true, &mut report)? {
        if r.record.id.is_empty() {
            report.push(&r.at, "empty publication id", AnomalyAction::Dropped);
            continue;
        }
        if r.record.authors.is_empty() {
            report.push(&r.at, "publication without authors", AnomalyAction::Dropped);
            continue;
        }
        dedup_listed(&mut r.record.authors, &r.at, "author", &mut report);
        dedup_listed(&mut r.record.areas, &r.at, "area", &mut report);
        rec.publications.push(r);
    }

    Ok((rec, report))
}

fn write_lines<T: Serialize>(path: &Path, items: &[Located<T>]) -> Result<()> {
    let mut buf = Vec::new();
    for item in items {
        serde_json::to_writer(&mut buf, &item.record).expect("records serialize");
        buf.push(b'\n');
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&buf).map_err(|e| Error::io(path, e))
}

/// Writes records as a corpus directory, one file per record kind, in
/// record order. The directory is created if needed.
pub fn write_corpus(dir: impl AsRef<Path>, records: &CorpusRecords) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = CorpusPaths::in_dir(dir);
    write_lines(&paths.individuals, &records.individuals)?;
    write_lines(&paths.areas, &records.areas)?;
    write_lines(&paths.relations, &records.relations)?;
    write_lines(&paths.competence, &records.competence)?;
    write_lines(&paths.social, &records.social)?;
    write_lines(&paths.publications, &records.publications)?;
    Ok(())
}

/// Weight given to a competence edge inferred from `n` coauthored
/// publications on an area.
pub fn derived_weight(n: usize) -> f64 {
    n as f64 / (n as f64 + 2.0)
}

/// Adds the competence edges implied by collaboration history.
///
/// Every (author, area) pair of a publication with at least two authors
/// that has no competence edge gets a derived one with weight `n / (n + 2)`,
/// `n` being the number of such publications. Existing edges are untouched.
pub fn cross_validate_history(mut records: CorpusRecords) -> (CorpusRecords, AnomalyReport) {
    let existing: HashSet<(&str, &str)> = records
        .competence
        .iter()
        .map(|c| (c.record.individual.as_str(), c.record.area.as_str()))
        .collect();
    let mut missing: BTreeMap<(&str, &str), (usize, &Locator)> = BTreeMap::new();
    for p in &records.publications {
        let pubrec = &p.record;
        let distinct: HashSet<&str> = pubrec.authors.iter().map(String::as_str).collect();
        if distinct.len() < 2 {
            continue;
        }
        let areas: HashSet<&str> = pubrec.areas.iter().map(String::as_str).collect();
        for &author in &distinct {
            for &area in &areas {
                if !existing.contains(&(author, area)) {
                    missing.entry((author, area)).or_insert((0, &p.at)).0 += 1;
                }
            }
        }
    }

    let mut report = AnomalyReport::default();
    let derived: Vec<Located<CompetenceRecord>> = missing
        .into_iter()
        .map(|((individual, area), (n, at))| {
            report.push(
                at,
                format!("`{individual}` coauthored {n} publication(s) on `{area}` without a competence edge"),
                AnomalyAction::DerivedEdgeAdded,
            );
            Located::new(
                at.clone(),
                CompetenceRecord {
                    individual: individual.to_string(),
                    area: area.to_string(),
                    weight: derived_weight(n),
                    derived: true,
                },
            )
        })
        .collect();
    records.competence.extend(derived);
    (records, report)
}
