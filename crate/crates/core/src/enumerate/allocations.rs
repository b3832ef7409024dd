use std::cell::Cell;

use super::{bundle_of, enumerate_connected_subsets, SubsetTable, Universe};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::model::{Allocation, Instance};

/// Connected allocations in agent order: agent 0 picks a subset in canonical
/// order, then agent 1 from what is left, and so on; the last agent takes the
/// remainder if it is connected. A choice is kept only while the remaining
/// items still split into no more components than there are agents left.
pub struct AllocationIter {
    uni: Universe,
    table: SubsetTable,
    n: usize,
    chosen: Vec<usize>,
    rest: Vec<u64>,
    cursor: Vec<usize>,
    done: bool,
}

pub fn enumerate_allocations(instance: &Instance, budget: &Budget) -> Result<AllocationIter> {
    budget.check_allocations(instance)?;
    let uni = Universe::new(instance.graph())?;
    let table = enumerate_connected_subsets(instance.graph(), budget)?;
    let full = uni.full();
    Ok(AllocationIter {
        uni,
        table,
        n: instance.agent_count(),
        chosen: Vec::new(),
        rest: vec![full],
        cursor: vec![0],
        done: false,
    })
}

pub fn count_allocations(instance: &Instance, budget: &Budget) -> Result<u64> {
    Ok(enumerate_allocations(instance, budget)?.count() as u64)
}

impl AllocationIter {
    fn backtrack(&mut self) -> bool {
        if self.chosen.pop().is_none() {
            return false;
        }
        self.rest.pop();
        self.cursor.pop();
        true
    }

    fn build(&self, last: usize) -> Allocation {
        let bundles = self
            .chosen
            .iter()
            .chain([&last])
            .map(|&id| bundle_of(self.table.mask(id)))
            .collect();
        Allocation::new(bundles)
    }
}

impl Iterator for AllocationIter {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        while !self.done {
            let k = self.chosen.len();
            let rest = self.rest[k];
            if k == self.n - 1 {
                let out = self.table.id_of(rest).map(|id| self.build(id));
                if !self.backtrack() {
                    self.done = true;
                }
                if out.is_some() {
                    return out;
                }
                continue;
            }
            let left_agents = self.n - 1 - k;
            let mut id = self.cursor[k];
            let mut next = None;
            while id < self.table.len() {
                let s = self.table.mask(id);
                id += 1;
                if s & !rest == 0 && self.uni.component_count(rest & !s) <= left_agents {
                    next = Some(s);
                    break;
                }
            }
            self.cursor[k] = id;
            match next {
                Some(s) => {
                    self.chosen.push(id - 1);
                    self.rest.push(rest & !s);
                    self.cursor.push(0);
                }
                None => {
                    if !self.backtrack() {
                        self.done = true;
                    }
                }
            }
        }
        None
    }
}

/// Hooks for a pruned walk over the allocation tree.
pub(crate) trait Visitor {
    /// Agent `k` is about to take subset `id`, leaving `rest`. Return false to prune.
    fn enter(&mut self, k: usize, id: usize, rest: u64) -> bool;
    fn exit(&mut self, k: usize, id: usize);
    /// A complete allocation (subset ids per agent). Return true to stop the walk.
    fn leaf(&mut self, choice: &[usize]) -> bool;
}

/// Everything the oracles need to walk the allocations of one instance.
pub(crate) struct SearchSpace {
    pub uni: Universe,
    pub table: SubsetTable,
    pub n: usize,
    pub max_steps: u64,
    pub steps: Cell<u64>,
    pub leaves: Cell<u64>,
}

impl SearchSpace {
    pub fn new(instance: &Instance, budget: &Budget) -> Result<Self> {
        budget.check_allocations(instance)?;
        Ok(SearchSpace {
            uni: Universe::new(instance.graph())?,
            table: enumerate_connected_subsets(instance.graph(), budget)?,
            n: instance.agent_count(),
            max_steps: budget.max_steps,
            steps: Cell::new(0),
            leaves: Cell::new(0),
        })
    }

    pub fn allocation(&self, choice: &[usize]) -> Allocation {
        Allocation::new(choice.iter().map(|&id| bundle_of(self.table.mask(id))).collect())
    }

    /// Walk in the same order as [`AllocationIter`]. Returns true if the visitor stopped it.
    pub fn walk<V: Visitor>(&self, visitor: &mut V) -> Result<bool> {
        self.steps.set(0);
        self.leaves.set(0);
        let mut choice = Vec::with_capacity(self.n);
        let full = self.uni.full();
        self.dfs(0, full, &mut choice, visitor)
    }

    fn tick(&self) -> Result<()> {
        self.steps.set(self.steps.get() + 1);
        if self.steps.get() > self.max_steps {
            return Err(Error::Budget(format!("search exceeded {} steps", self.max_steps)));
        }
        Ok(())
    }

    fn dfs<V: Visitor>(&self, k: usize, rest: u64, choice: &mut Vec<usize>, visitor: &mut V) -> Result<bool> {
        if k == self.n - 1 {
            let Some(id) = self.table.id_of(rest) else {
                return Ok(false);
            };
            self.tick()?;
            if !visitor.enter(k, id, 0) {
                return Ok(false);
            }
            choice.push(id);
            self.leaves.set(self.leaves.get() + 1);
            let stop = visitor.leaf(choice);
            choice.pop();
            visitor.exit(k, id);
            return Ok(stop);
        }
        let left_agents = self.n - 1 - k;
        for id in 0..self.table.len() {
            let s = self.table.mask(id);
            if s & !rest != 0 {
                continue;
            }
            let left = rest & !s;
            if self.uni.component_count(left) > left_agents {
                continue;
            }
            self.tick()?;
            if !visitor.enter(k, id, left) {
                continue;
            }
            choice.push(id);
            let stop = self.dfs(k + 1, left, choice, visitor)?;
            choice.pop();
            visitor.exit(k, id);
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
