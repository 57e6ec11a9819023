//! Line-level record types of the corpus directory format.
//!
//! Each file holds one JSON object per line. Field names here are the wire
//! names; optional fields are omitted on output when empty.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Locator;

pub const INDIVIDUALS_FILE: &str = "individuals.jsonl";
pub const AREAS_FILE: &str = "areas.jsonl";
pub const RELATIONS_FILE: &str = "relations.jsonl";
pub const COMPETENCE_FILE: &str = "competence.jsonl";
pub const SOCIAL_FILE: &str = "social.jsonl";
pub const PUBLICATIONS_FILE: &str = "publications.jsonl";

/// A parsed record together with the place it was read from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Located<T> {
    pub at: Locator,
    pub record: T,
}

impl<T> Located<T> {
    pub fn new(at: Locator, record: T) -> Self {
        Self { at, record }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualRecord {
    pub id: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub affiliations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub profile: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaRecord {
    pub id: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Subsumes,
    Similar,
    Synonym,
}

impl RelationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::Subsumes => "subsumes",
            RelationKind::Similar => "similar",
            RelationKind::Synonym => "synonym",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationRecord {
    pub from: String,
    pub to: String,
    pub kind: RelationKind,
    pub similarity: f64,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompetenceRecord {
    pub individual: String,
    pub area: String,
    pub weight: f64,
    /// Set when the edge was added by history cross-validation.
    #[serde(default, skip_serializing_if = "is_false")]
    pub derived: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialRecord {
    pub src: String,
    pub dst: String,
    pub dimension: String,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub id: String,
    pub authors: Vec<String>,
    #[serde(default)]
    pub areas: Vec<String>,
    pub year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub venue: Option<String>,
}

/// Everything read from a corpus directory, in file order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecords {
    pub individuals: Vec<Located<IndividualRecord>>,
    pub areas: Vec<Located<AreaRecord>>,
    pub relations: Vec<Located<RelationRecord>>,
    pub competence: Vec<Located<CompetenceRecord>>,
    pub social: Vec<Located<SocialRecord>>,
    pub publications: Vec<Located<PublicationRecord>>,
}

impl CorpusRecords {
    pub fn record_count(&self) -> usize {
        self.individuals.len()
            + self.areas.len()
            + self.relations.len()
            + self.competence.len()
            + self.social.len()
            + self.publications.len()
    }
}
