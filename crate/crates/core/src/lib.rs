//! Team formation over a knowledge base of individuals, expertise areas,
//! social ties and collaboration history.
//!
//! A corpus directory is parsed by [`ingest`], frozen into a
//! [`GraphSnapshot`] by [`model::build_snapshot`], and then queried:
//! [`concepts`] finds areas and experts, [`metrics`] measures teams and
//! [`teams`] enumerates and ranks them. [`wire`] holds the JSON shapes
//! shared by the command line and the HTTP service.

pub mod concepts;
pub mod error;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod persist;
pub mod teams;
pub mod wire;

pub use error::{Error, Locator, Result};
pub use metrics::{Assignment, CompetenceMode, MetricValues};
pub use model::{build_snapshot, AreaIx, GraphSnapshot, PersonIx};
pub use teams::{MetricWeights, ScoreCard};
