//! The inequality registry, the fiber constructions behind the critical-case
//! bounds and the suite runner.

mod katz_koester;
mod registry;
mod report;
mod small_l;
mod solplus;
mod suite;

pub use katz_koester::{katz_koester_check, Inclusion, KkViolation};
pub use registry::{evaluate, lemma_holds, Evaluator, Params, LEMMA3_SIGMA_BUDGET, PROP_CRIT_LIMIT};
pub use report::{set_digest, BoundKind, InequalityId, InequalityReport};
pub use small_l::{small_l_construction, SmallLReport, SmallLSlice};
pub use solplus::{solplus_trace, SolPlusTrace};
pub use suite::{parse_ids, verify_suite, verify_suite_with, SuiteOutcome};
