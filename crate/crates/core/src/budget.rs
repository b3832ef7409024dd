use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::model::Instance;

/// Limits on exhaustive work. Exceeding any of them is a [`Error::Budget`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub path_items: usize,
    pub path_agents: usize,
    pub items: usize,
    pub agents: usize,
    /// Largest non-path graph whose connected subsets may be listed.
    pub subset_items: usize,
    pub max_subsets: usize,
    pub max_partitions: u64,
    /// Search nodes visited by a single oracle call.
    pub max_steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            path_items: 12,
            path_agents: 5,
            items: 10,
            agents: 4,
            subset_items: 20,
            max_subsets: 2_000_000,
            max_partitions: 20_000_000,
            max_steps: 400_000_000,
        }
    }
}

impl Budget {
    /// Same item and agent limits for every topology.
    pub fn uniform(items: usize, agents: usize) -> Self {
        Budget::default().with_items(items).with_agents(agents)
    }

    pub fn with_items(mut self, items: usize) -> Self {
        self.path_items = items;
        self.items = items;
        self.subset_items = self.subset_items.max(items);
        self
    }

    pub fn with_agents(mut self, agents: usize) -> Self {
        self.path_agents = agents;
        self.agents = agents;
        self
    }

    pub fn with_steps(mut self, steps: u64) -> Self {
        self.max_steps = steps;
        self
    }

    /// Whether allocation enumeration over `instance` is allowed.
    pub fn check_allocations(&self, instance: &Instance) -> Result<()> {
        let (items, agents) = match instance.graph().topology() {
            Topology::Path => (self.path_items, self.path_agents),
            _ => (self.items, self.agents),
        };
        let (m, n) = (instance.item_count(), instance.agent_count());
        if m > items || n > agents {
            return Err(Error::Budget(format!(
                "{m} items x {n} agents on a {} exceeds the limit of {items} items x {agents} agents",
                instance.graph().topology()
            )));
        }
        Ok(())
    }
}
