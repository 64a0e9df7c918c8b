use crate::error::{Error, Result};
use crate::exactset::FiniteSet;

use super::registry::{Evaluator, Params};
use super::report::{InequalityId, InequalityReport};

/// Reports in id order, and the entries that could not be evaluated.
#[derive(Debug, Default)]
pub struct SuiteOutcome {
    pub reports: Vec<InequalityReport>,
    pub errors: Vec<(InequalityId, Error)>,
}

impl SuiteOutcome {
    /// Explicit entries that were evaluated and failed.
    pub fn failures(&self) -> impl Iterator<Item = &InequalityReport> {
        self.reports.iter().filter(|r| r.pass == Some(false))
    }

    pub fn all_explicit_pass(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Evaluates the given entries (all when `ids` is `None`) with default parameters.
pub fn verify_suite(a: &FiniteSet, ids: Option<&[InequalityId]>) -> SuiteOutcome {
    verify_suite_with(a, ids, &Params::default())
}

pub fn verify_suite_with(a: &FiniteSet, ids: Option<&[InequalityId]>, params: &Params) -> SuiteOutcome {
    let mut ids: Vec<InequalityId> = ids.map_or_else(|| InequalityId::ALL.to_vec(), <[_]>::to_vec);
    ids.sort_unstable();
    ids.dedup();
    let ev = Evaluator::new(a);
    let mut out = SuiteOutcome::default();
    for id in ids {
        match ev.evaluate(id, params) {
            Ok(r) => out.reports.push(r),
            Err(e) => out.errors.push((id, e)),
        }
    }
    out
}

/// Parses a comma-separated id list.
pub fn parse_ids(list: &str) -> Result<Vec<InequalityId>> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}
