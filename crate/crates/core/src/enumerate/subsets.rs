use std::cmp::Ordering;
use std::collections::HashMap;

use super::{bundle_of, Universe};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{ItemGraph, Topology};
use crate::model::Bundle;

/// All connected subsets of a graph, the empty set included, in canonical
/// order: by size, then lexicographically on sorted items.
#[derive(Clone, Debug)]
pub struct SubsetTable {
    masks: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl SubsetTable {
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub(crate) fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub(crate) fn mask(&self, id: usize) -> u64 {
        self.masks[id]
    }

    /// Position of a connected mask; `None` means the mask is not connected.
    pub(crate) fn id_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn bundles(&self) -> impl Iterator<Item = Bundle> + '_ {
        self.masks.iter().map(|&m| bundle_of(m))
    }
}

fn canonical(a: &u64, b: &u64) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| {
        let d = a ^ b;
        if d == 0 {
            Ordering::Equal
        } else if a & d & d.wrapping_neg() != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    })
}

pub fn enumerate_connected_subsets(graph: &ItemGraph, budget: &Budget) -> Result<SubsetTable> {
    let m = graph.item_count();
    if graph.topology() != Topology::Path && m > budget.subset_items {
        return Err(Error::Budget(format!(
            "connected subsets of a {m}-item {} (limit {} items)",
            graph.topology(),
            budget.subset_items
        )));
    }
    let uni = Universe::new(graph)?;
    let mut masks = vec![0u64];
    for v in 0..m {
        let below = (1u64 << v) - 1;
        let start = 1u64 << v;
        grow(&uni, start, uni.adj[v] & !below, below, &mut masks, budget.max_subsets)?;
    }
    masks.sort_by(canonical);
    let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    Ok(SubsetTable { masks, index })
}

// Each connected set is reached once: `cand` holds the frontier still open for
// inclusion, `forb` the items excluded on this branch.
fn grow(uni: &Universe, cur: u64, cand: u64, forb: u64, out: &mut Vec<u64>, cap: usize) -> Result<()> {
    out.push(cur);
    if out.len() > cap {
        return Err(Error::Budget(format!("more than {cap} connected subsets")));
    }
    let mut cand = cand;
    let mut forb = forb;
    while cand != 0 {
        let w = cand & cand.wrapping_neg();
        cand ^= w;
        let next = cur | w;
        let next_cand = (cand | uni.adj[w.trailing_zeros() as usize]) & !next & !forb;
        grow(uni, next, next_cand, forb, out, cap)?;
        forb |= w;
    }
    Ok(())
}
