//! Snapshot files: a magic header line followed by compact JSON records.
//!
//! Loading rebuilds every index from the stored records, so the file stays
//! small and the index layout stays private.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Locator, Result};
use crate::ingest::records::*;
use crate::model::{build_snapshot_at, GraphSnapshot};

pub const SNAPSHOT_MAGIC: &[u8] = b"SWAT-SNAPSHOT 1\n";

#[derive(Serialize, Deserialize)]
struct SnapshotFile {
    build_timestamp: u64,
    individuals: Vec<IndividualRecord>,
    areas: Vec<AreaRecord>,
    relations: Vec<RelationRecord>,
    competence: Vec<CompetenceRecord>,
    social: Vec<SocialRecord>,
    publications: Vec<PublicationRecord>,
}

fn located<T>(file: &str, items: Vec<T>) -> Vec<Located<T>> {
    items
        .into_iter()
        .enumerate()
        .map(|(n, r)| Located::new(Locator::new(file, n + 1), r))
        .collect()
}

/// Exports a snapshot back to records, one per entity in snapshot order.
/// Locators are sequential lines of the canonical file names.
pub fn snapshot_to_records(s: &GraphSnapshot) -> CorpusRecords {
    let file = to_file(s);
    CorpusRecords {
        individuals: located(INDIVIDUALS_FILE, file.individuals),
        areas: located(AREAS_FILE, file.areas),
        relations: located(RELATIONS_FILE, file.relations),
        competence: located(COMPETENCE_FILE, file.competence),
        social: located(SOCIAL_FILE, file.social),
        publications: located(PUBLICATIONS_FILE, file.publications),
    }
}

fn to_file(s: &GraphSnapshot) -> SnapshotFile {
    let pid = |p: crate::model::PersonIx| s.individual(p).id.clone();
    let aid = |a: crate::model::AreaIx| s.area(a).id.clone();
    SnapshotFile {
        build_timestamp: s.build_timestamp(),
        individuals: s
            .individuals()
            .iter()
            .map(|i| IndividualRecord {
                id: i.id.clone(),
                name: i.name.clone(),
                affiliations: i.affiliations.clone(),
                country: i.country.clone(),
                profile: i.profile.clone(),
            })
            .collect(),
        areas: s
            .areas()
            .iter()
            .map(|a| AreaRecord {
                id: a.id.clone(),
                name: a.name.clone(),
                aliases: a.aliases.clone(),
            })
            .collect(),
        relations: s
            .relations()
            .iter()
            .map(|r| RelationRecord {
                from: aid(r.from),
                to: aid(r.to),
                kind: r.kind,
                similarity: r.similarity,
            })
            .collect(),
        competence: s
            .competence_edges()
            .iter()
            .map(|e| CompetenceRecord {
                individual: pid(e.individual),
                area: aid(e.area),
                weight: e.weight,
                derived: e.derived,
            })
            .collect(),
        social: s
            .social_edges()
            .iter()
            .map(|e| SocialRecord {
                src: pid(e.src),
                dst: pid(e.dst),
                dimension: s.dimensions()[e.dimension.index()].clone(),
                strength: e.strength,
            })
            .collect(),
        publications: s
            .publications()
            .iter()
            .map(|p| PublicationRecord {
                id: p.id.clone(),
                authors: p.authors.iter().map(|&a| pid(a)).collect(),
                areas: p.areas.iter().map(|&a| aid(a)).collect(),
                year: p.year,
                venue: p.venue.clone(),
            })
            .collect(),
    }
}

pub fn save_snapshot(snapshot: &GraphSnapshot, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    out.write_all(SNAPSHOT_MAGIC).map_err(|e| Error::io(path, e))?;
    serde_json::to_writer(&mut out, &to_file(snapshot)).map_err(|e| Error::io(path, e.into()))?;
    out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Loads a snapshot file. A missing or different header is a format error;
/// the remedy is to ingest the corpus again.
pub fn load_snapshot(path: impl AsRef<Path>) -> Result<GraphSnapshot> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let body = bytes.strip_prefix(SNAPSHOT_MAGIC).ok_or_else(|| Error::Format {
        path: path.into(),
        message: "not a snapshot file of this version; re-run ingest".into(),
    })?;
    let file: SnapshotFile = serde_json::from_slice(body).map_err(|e| Error::Format {
        path: path.into(),
        message: e.to_string(),
    })?;
    let stamp = file.build_timestamp;
    let records = CorpusRecords {
        individuals: located(INDIVIDUALS_FILE, file.individuals),
        areas: located(AREAS_FILE, file.areas),
        relations: located(RELATIONS_FILE, file.relations),
        competence: located(COMPETENCE_FILE, file.competence),
        social: located(SOCIAL_FILE, file.social),
        publications: located(PUBLICATIONS_FILE, file.publications),
    };
    build_snapshot_at(&records, stamp)
}
