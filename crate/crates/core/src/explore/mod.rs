//! Set generators, extremal search over registry ratios, the exhaustive subset
//! oracle and the on-disk corpus of extremal sets.

mod bsg;
mod generate;
mod mutate;
mod record;
mod search;

pub use bsg::{bsg_subset_oracle, BSG_MAX_SIZE};
pub use generate::{generate, GeneratorSpec};
pub use mutate::{mutate, mutate_with, Mutation};
pub use record::{corpus_load, corpus_store, ExtremalRecord, Lineage, LoadedRecord, ARTIFACT_VERSION};
pub use search::{search_extremal, Direction, SearchConfig, SearchMode, SearchOutcome};
