use std::ops::Range;

use itertools::{Combinations, Itertools};

use super::{bundle_of, enumerate_connected_subsets, Universe};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{ItemGraph, Topology};
use crate::model::Bundle;

/// Partitions of the items into exactly `n` non-empty connected blocks.
/// Blocks of each partition are sorted by smallest item.
pub struct PartitionIter {
    inner: Inner,
}

enum Inner {
    Empty,
    Cuts { order: Vec<usize>, combos: Combinations<Range<usize>> },
    Edges { uni: Universe, edges: Vec<(usize, usize)>, combos: Combinations<Range<usize>> },
    Listed(std::vec::IntoIter<Vec<Bundle>>),
}

impl Iterator for PartitionIter {
    type Item = Vec<Bundle>;

    fn next(&mut self) -> Option<Vec<Bundle>> {
        match &mut self.inner {
            Inner::Empty => None,
            Inner::Cuts { order, combos } => {
                let cuts = combos.next()?;
                let mut blocks = Vec::with_capacity(cuts.len() + 1);
                let mut start = 0;
                for c in cuts.into_iter().chain([order.len()]) {
                    blocks.push(Bundle::new(order[start..c].iter().copied()));
                    start = c;
                }
                blocks.sort();
                Some(blocks)
            }
            Inner::Edges { uni, edges, combos } => {
                let removed = combos.next()?;
                let mut kept = uni.clone();
                for &e in &removed {
                    let (a, b) = edges[e];
                    kept.adj[a] &= !(1 << b);
                    kept.adj[b] &= !(1 << a);
                }
                let mut blocks: Vec<Bundle> =
                    kept.components(kept.full()).into_iter().map(bundle_of).collect();
                blocks.sort();
                Some(blocks)
            }
            Inner::Listed(it) => it.next(),
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

pub fn enumerate_connected_partitions(graph: &ItemGraph, n: usize, budget: &Budget) -> Result<PartitionIter> {
    let m = graph.item_count();
    if n == 0 || n > m {
        return Ok(PartitionIter { inner: Inner::Empty });
    }
    let topo = graph.topology();
    if matches!(topo, Topology::Path | Topology::Star | Topology::Tree) {
        let count = binomial(m as u64 - 1, n as u64 - 1);
        if count > budget.max_partitions {
            return Err(Error::Budget(format!(
                "{count} partitions of a {m}-item {topo} into {n} blocks (limit {})",
                budget.max_partitions
            )));
        }
    }
    let inner = match topo {
        Topology::Path => Inner::Cuts {
            order: graph.path_order().expect("path topology has an order"),
            combos: (1..m).combinations(n - 1),
        },
        Topology::Star | Topology::Tree => Inner::Edges {
            uni: Universe::new(graph)?,
            edges: graph.edges().to_vec(),
            combos: (0..m - 1).combinations(n - 1),
        },
        Topology::Forest | Topology::General => Inner::Listed(generic(graph, n, budget)?.into_iter()),
    };
    Ok(PartitionIter { inner })
}

/// Search where each new block contains the lowest uncovered item.
pub(crate) fn generic(graph: &ItemGraph, n: usize, budget: &Budget) -> Result<Vec<Vec<Bundle>>> {
    let uni = Universe::new(graph)?;
    let table = enumerate_connected_subsets(graph, budget)?;
    let mut by_min = vec![Vec::new(); uni.m];
    for &mask in table.masks().iter().filter(|&&m| m != 0) {
        by_min[mask.trailing_zeros() as usize].push(mask);
    }
    let mut out = Vec::new();
    let mut blocks = Vec::with_capacity(n);
    search(&uni, &by_min, uni.full(), n, &mut blocks, &mut out, budget.max_partitions)?;
    Ok(out)
}

fn search(
    uni: &Universe,
    by_min: &[Vec<u64>],
    rest: u64,
    k: usize,
    blocks: &mut Vec<u64>,
    out: &mut Vec<Vec<Bundle>>,
    cap: u64,
) -> Result<()> {
    if k == 1 {
        if uni.is_connected(rest) {
            let mut p: Vec<Bundle> = blocks.iter().chain([&rest]).map(|&b| bundle_of(b)).collect();
            p.sort();
            out.push(p);
            if out.len() as u64 > cap {
                return Err(Error::Budget(format!("more than {cap} partitions")));
            }
        }
        return Ok(());
    }
    let low = rest.trailing_zeros() as usize;
    for &block in &by_min[low] {
        if block & !rest != 0 {
            continue;
        }
        let left = rest & !block;
        if (left.count_ones() as usize) < k - 1 || uni.component_count(left) > k - 1 {
            continue;
        }
        blocks.push(block);
        search(uni, by_min, left, k - 1, blocks, out, cap)?;
        blocks.pop();
    }
    Ok(())
}
