use serde::Serialize;

use super::mms::mms_value_path;
use super::require_path;
use crate::error::{Error, Result};
use crate::model::{Allocation, Bundle, Instance};
use crate::value::{int, Value};

/// Approval intervals of binary agents on a path, as inclusive positions
/// along the path order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalApprovalProfile {
    pub order: Vec<usize>,
    /// `None` for an agent approving nothing.
    pub intervals: Vec<Option<(usize, usize)>>,
}

impl IntervalApprovalProfile {
    fn approves(&self, agent: usize, pos: usize) -> bool {
        self.intervals[agent].is_some_and(|(lo, hi)| lo <= pos && pos <= hi)
    }
}

pub fn interval_profile(instance: &Instance) -> Result<IntervalApprovalProfile> {
    let order = require_path(instance, "interval approvals")?;
    let mut position = vec![0; order.len()];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let mut intervals = Vec::with_capacity(instance.agent_count());
    for (i, val) in instance.valuations().iter().enumerate() {
        let approved = val.approval_set().ok_or_else(|| {
            Error::Precondition(format!("interval approvals need binary valuations; agent {i} is not binary"))
        })?;
        let mut pos: Vec<usize> = approved.iter().map(|&v| position[v]).collect();
        pos.sort_unstable();
        match (pos.first(), pos.last()) {
            (Some(&lo), Some(&hi)) => {
                if hi - lo + 1 != pos.len() {
                    return Err(Error::Precondition(format!(
                        "approval set of agent {i} is not an interval of the path"
                    )));
                }
                intervals.push(Some((lo, hi)));
            }
            _ => intervals.push(None),
        }
    }
    Ok(IntervalApprovalProfile { order, intervals })
}

/// A pair `(i, j)` where agent `i`'s interval strictly surrounds agent `j`'s.
pub fn nested_pair(profile: &IntervalApprovalProfile) -> Option<(usize, usize)> {
    let iv = &profile.intervals;
    for (i, a) in iv.iter().enumerate() {
        for (j, b) in iv.iter().enumerate() {
            if let (Some((lo_i, hi_i)), Some((lo_j, hi_j))) = (a, b) {
                if lo_i < lo_j && hi_j < hi_i {
                    return Some((i, j));
                }
            }
        }
    }
    None
}

pub fn check_non_nested(profile: &IntervalApprovalProfile) -> bool {
    nested_pair(profile).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KnifeRule {
    /// The first agent takes the shortest prefix meeting its share.
    Prefix,
    /// The prefix misses the next agent's interval, so the first agent takes
    /// everything before that interval.
    BeforeNext,
    /// Only one agent is left.
    Last,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KnifeStep {
    pub agent: usize,
    /// Share of `agent` in the remaining instance.
    #[serde(serialize_with = "ser_value")]
    pub threshold: Value,
    /// Length of the shortest sufficient prefix, counted in approved items.
    pub x: usize,
    pub rule: KnifeRule,
    /// Items assigned in this step, before unapproved items are attached.
    pub bundle: Vec<usize>,
}

fn ser_value<S: serde::Serializer>(v: &Value, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::value::RawValue::from(*v).serialize(s)
}

#[derive(Clone, Debug)]
pub struct KnifeOutcome {
    pub allocation: Allocation,
    pub trace: Vec<KnifeStep>,
}

/// MMS and welfare-maximizing allocation on a path where every agent approves
/// an interval and no interval strictly contains another. With `force` the
/// nesting check is skipped, which is only useful for studying the failure.
pub fn moving_knife(instance: &Instance, force: bool) -> Result<KnifeOutcome> {
    let profile = interval_profile(instance)?;
    if !force {
        if let Some((i, j)) = nested_pair(&profile) {
            return Err(Error::Precondition(format!(
                "nested intervals: the approval interval of agent {i} strictly contains that of agent {j}"
            )));
        }
    }
    let m = profile.order.len();
    let mut owner: Vec<Option<usize>> = vec![None; m];
    let mut trace = Vec::new();
    let mut remaining: Vec<usize> = (0..instance.agent_count()).collect();
    let mut start = 0;

    loop {
        let clipped = |i: usize| profile.intervals[i].filter(|&(_, hi)| hi >= start).map(|(lo, hi)| (lo.max(start), hi));
        remaining.retain(|&i| clipped(i).is_some());
        if remaining.is_empty() {
            break;
        }
        remaining.sort_by_key(|&i| {
            let (lo, hi) = clipped(i).expect("kept agents approve something");
            (lo, hi, i)
        });
        let compressed: Vec<usize> =
            (start..m).filter(|&p| remaining.iter().any(|&i| profile.approves(i, p))).collect();
        let first = remaining[0];
        let values: Vec<Value> =
            compressed.iter().map(|&p| int(profile.approves(first, p) as i64)).collect();
        let threshold = mms_value_path(&values, remaining.len());

        let (take, x, rule) = if remaining.len() == 1 {
            ((start..m).collect::<Vec<_>>(), compressed.len(), KnifeRule::Last)
        } else {
            let mut x = 0;
            let mut got = int(0);
            while got < threshold {
                got += values[x];
                x += 1;
            }
            let next = remaining[1];
            let (next_lo, _) = clipped(next).expect("kept agents approve something");
            if compressed[..x].iter().any(|&p| profile.approves(next, p)) {
                (compressed[..x].to_vec(), x, KnifeRule::Prefix)
            } else {
                (compressed.iter().copied().filter(|&p| p < next_lo).collect(), x, KnifeRule::BeforeNext)
            }
        };
        for &p in &take {
            owner[p] = Some(first);
        }
        trace.push(KnifeStep {
            agent: first,
            threshold,
            x,
            rule,
            bundle: take.iter().map(|&p| profile.order[p]).collect(),
        });
        remaining.remove(0);
        if let Some(&last) = take.last() {
            start = last + 1;
        }
        if rule == KnifeRule::Last {
            break;
        }
    }

    // unapproved leftovers join the next bundle along the path, else the previous one
    let mut fill = vec![None; m];
    let mut next_owner = None;
    for p in (0..m).rev() {
        next_owner = owner[p].or(next_owner);
        fill[p] = next_owner;
    }
    let mut prev_owner = None;
    for p in 0..m {
        prev_owner = owner[p].or(prev_owner);
        if fill[p].is_none() {
            fill[p] = prev_owner;
        }
    }
    let mut bundles = vec![Vec::new(); instance.agent_count()];
    for (p, o) in fill.into_iter().enumerate() {
        bundles[o.unwrap_or(0)].push(profile.order[p]);
    }
    Ok(KnifeOutcome { allocation: Allocation::new(bundles.into_iter().map(Bundle::new).collect()), trace })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaViolation {
    /// Prefix length.
    pub x: usize,
    /// The agent whose share the prefix should have met.
    pub i: usize,
    pub j: usize,
}

/// Checks, for every prefix of the path and every ordered pair of agents with
/// `lo_i <= lo_j` and `hi_i <= hi_j`: if the prefix reaches `j`'s interval
/// start and gives `j` its share, it also gives `i` its share. Shares use the
/// full instance. Returns all failures.
pub fn lemma1_counterexamples(instance: &Instance) -> Result<Vec<LemmaViolation>> {
    let profile = interval_profile(instance)?;
    let m = profile.order.len();
    let n = instance.agent_count();
    let ones = |i: usize| -> Vec<Value> { (0..m).map(|p| int(profile.approves(i, p) as i64)).collect() };
    let shares: Vec<Value> = (0..n).map(|i| mms_value_path(&ones(i), n)).collect();
    let prefix = |i: usize, x: usize| int((0..x).filter(|&p| profile.approves(i, p)).count() as i64);
    let mut out = Vec::new();
    for x in 1..=m {
        for i in 0..n {
            for j in 0..n {
                let (Some((lo_i, hi_i)), Some((lo_j, hi_j))) = (profile.intervals[i], profile.intervals[j]) else {
                    continue;
                };
                if i == j || lo_i > lo_j || hi_i > hi_j || lo_j > x {
                    continue;
                }
                if prefix(j, x) >= shares[j] && prefix(i, x) < shares[i] {
                    out.push(LemmaViolation { x, i, j });
                }
            }
        }
    }
    Ok(out)
}
