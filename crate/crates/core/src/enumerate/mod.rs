//! Exhaustive enumeration of connected subsets, connected partitions and
//! connected allocations. Items are packed into `u64` masks, so at most 64
//! items can be enumerated.

mod allocations;
mod partitions;
mod subsets;

pub use allocations::{count_allocations, enumerate_allocations, AllocationIter};
pub(crate) use allocations::{SearchSpace, Visitor};
pub use partitions::{enumerate_connected_partitions, PartitionIter};
pub use subsets::{enumerate_connected_subsets, SubsetTable};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::ItemGraph;
use crate::model::Bundle;

pub(crate) fn mask_of(items: &[usize]) -> u64 {
    items.iter().fold(0, |m, &v| m | (1 << v))
}

pub(crate) fn items_of(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

pub(crate) fn bundle_of(mask: u64) -> Bundle {
    Bundle::new(items_of(mask))
}

/// Adjacency in mask form.
#[derive(Clone, Debug)]
pub(crate) struct Universe {
    pub m: usize,
    pub adj: Vec<u64>,
}

impl Universe {
    pub fn new(graph: &ItemGraph) -> Result<Self> {
        let m = graph.item_count();
        if m > 64 {
            return Err(Error::Budget(format!("{m} items; enumeration handles at most 64")));
        }
        let adj = (0..m).map(|v| mask_of(graph.neighbors(v))).collect();
        Ok(Universe { m, adj })
    }

    pub fn full(&self) -> u64 {
        if self.m == 64 {
            u64::MAX
        } else {
            (1u64 << self.m) - 1
        }
    }

    pub fn neighbors_of(&self, mut mask: u64) -> u64 {
        let mut out = 0;
        while mask != 0 {
            out |= self.adj[mask.trailing_zeros() as usize];
            mask &= mask - 1;
        }
        out
    }

    /// The component of `within` containing the lowest set bit of `seed`.
    pub fn component(&self, seed: u64, within: u64) -> u64 {
        let mut comp = seed & seed.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let next = self.neighbors_of(frontier) & within & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    pub fn components(&self, mut mask: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while mask != 0 {
            let c = self.component(mask, mask);
            out.push(c);
            mask &= !c;
        }
        out
    }

    pub fn component_count(&self, mut mask: u64) -> usize {
        let mut count = 0;
        while mask != 0 {
            mask &= !self.component(mask, mask);
            count += 1;
        }
        count
    }

    pub fn is_connected(&self, mask: u64) -> bool {
        mask == 0 || self.component(mask, mask) == mask
    }
}

/// Connected subsets of a graph small enough for exhaustive checks on table valuations.
pub(crate) fn connected_subsets_for_table(graph: &ItemGraph) -> Result<Vec<Bundle>> {
    let table = enumerate_connected_subsets(graph, &Budget::default())?;
    Ok(table.masks().iter().map(|&m| bundle_of(m)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_roundtrip() {
        assert_eq!(items_of(mask_of(&[0, 3, 5])), vec![0, 3, 5]);
        assert_eq!(items_of(0), Vec::<usize>::new());
    }

    #[test]
    fn components_of_masks() {
        let g = ItemGraph::path(6).unwrap();
        let u = Universe::new(&g).unwrap();
        assert_eq!(u.component_count(0b110111), 2);
        assert_eq!(u.components(0b110111), vec![0b000111, 0b110000]);
        assert!(u.is_connected(0b011100));
        assert!(u.is_connected(0));
        assert!(!u.is_connected(0b101));
    }
}
