//! Polynomial-time algorithms for paths and stars.

mod knife;
mod matching;
mod mms;
mod path;
mod star;

pub use knife::{
    check_non_nested, interval_profile, lemma1_counterexamples, moving_knife, nested_pair,
    IntervalApprovalProfile, KnifeOutcome, KnifeRule, KnifeStep, LemmaViolation,
};
pub use matching::{max_weight_matching, Matching};
pub use mms::{mms_profile_path, mms_value_path};
pub use path::po_path_additive;
pub use star::{po_star_additive, StarOutcome};

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::value::Value;

/// Item order along the path, or a precondition error.
pub(crate) fn require_path(instance: &Instance, what: &str) -> Result<Vec<usize>> {
    instance
        .graph()
        .path_order()
        .ok_or_else(|| Error::Precondition(format!("{what} needs a path, got a {}", instance.graph().topology())))
}

/// Per-agent item values, or a precondition error naming the first non-additive agent.
pub(crate) fn require_additive(instance: &Instance, what: &str) -> Result<Vec<Vec<Value>>> {
    let m = instance.item_count();
    instance
        .valuations()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.item_values(m).ok_or_else(|| {
                Error::Precondition(format!("{what} needs additive valuations; agent {i} is {}", v.kind()))
            })
        })
        .collect()
}
