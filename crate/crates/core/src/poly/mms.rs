use super::{require_additive, require_path};
use crate::error::Result;
use crate::model::{Instance, MmsMethod, MmsProfile};
use crate::value::{int, Value};

/// Maximin share of an agent whose item values, listed in path order, are
/// `values`, when the path is split into `n` connected blocks. Zero when there
/// are fewer items than blocks.
pub fn mms_value_path(values: &[Value], n: usize) -> Value {
    let m = values.len();
    if n == 0 || n > m {
        return int(0);
    }
    let mut candidates = vec![int(0)];
    for a in 0..m {
        let mut sum = int(0);
        for v in &values[a..] {
            sum += v;
            candidates.push(sum);
        }
    }
    candidates.sort();
    candidates.dedup();
    // candidates[lo] is always feasible, candidates[hi] never
    let (mut lo, mut hi) = (0, candidates.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if blocks_reaching(values, candidates[mid]) >= n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    candidates[lo]
}

/// Most blocks of value at least `t` a left-to-right sweep can close.
fn blocks_reaching(values: &[Value], t: Value) -> usize {
    let mut count = 0;
    let mut run = int(0);
    for v in values {
        run += v;
        if run >= t {
            count += 1;
            run = int(0);
        }
    }
    count
}

pub fn mms_profile_path(instance: &Instance) -> Result<MmsProfile> {
    let order = require_path(instance, "polynomial MMS")?;
    let vals = require_additive(instance, "polynomial MMS")?;
    let n = instance.agent_count();
    let values = vals
        .iter()
        .map(|row| {
            let along: Vec<Value> = order.iter().map(|&v| row[v]).collect();
            mms_value_path(&along, n)
        })
        .collect();
    Ok(MmsProfile {
        values,
        method: MmsMethod::Poly,
        degenerate: n > instance.item_count(),
        instance_fingerprint: instance.fingerprint(),
    })
}
