//! Instances, valuations and allocations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ItemGraph;
use crate::value::{int, is_negative, Value};

/// A set of items, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bundle(Vec<usize>);

impl Bundle {
    pub fn new(items: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Bundle(v)
    }

    pub fn empty() -> Self {
        Bundle(Vec::new())
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn without(&self, item: usize) -> Bundle {
        Bundle(self.0.iter().copied().filter(|&v| v != item).collect())
    }

    pub fn is_subset(&self, other: &Bundle) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn is_connected(&self, graph: &ItemGraph) -> bool {
        graph.is_connected_set(&self.0)
    }

    /// Items whose removal leaves the rest connected.
    pub fn outer_items<'a>(&'a self, graph: &'a ItemGraph) -> impl Iterator<Item = usize> + 'a {
        self.0.iter().copied().filter(move |&v| self.without(v).is_connected(graph))
    }
}

impl FromIterator<usize> for Bundle {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Bundle::new(iter)
    }
}

/// One agent's preference over connected bundles.
#[derive(Clone, Debug, PartialEq)]
pub enum Valuation {
    /// Value per item, summed over the bundle.
    Additive(Vec<Value>),
    /// Approval set; a bundle is worth the number of approved items in it.
    Binary(BTreeSet<usize>),
    /// Weights over singletons and unordered pairs; pairs need not be edges.
    TwoAdditive {
        singles: BTreeMap<usize, Value>,
        pairs: BTreeMap<(usize, usize), Value>,
    },
    /// Explicit value of every connected bundle.
    Table(HashMap<Bundle, Value>),
}

impl Valuation {
    pub fn value(&self, bundle: &Bundle) -> Result<Value> {
        match self {
            Valuation::Additive(values) => Ok(bundle.items().iter().map(|&v| values[v]).sum()),
            Valuation::Binary(approves) => {
                Ok(int(bundle.items().iter().filter(|v| approves.contains(v)).count() as i64))
            }
            Valuation::TwoAdditive { singles, pairs } => {
                let items = bundle.items();
                let mut total: Value = items.iter().filter_map(|v| singles.get(v)).sum();
                if pairs.len() < items.len() * items.len() / 2 {
                    for (&(a, b), w) in pairs {
                        if bundle.contains(a) && bundle.contains(b) {
                            total += w;
                        }
                    }
                } else {
                    for (k, &a) in items.iter().enumerate() {
                        for &b in &items[k + 1..] {
                            if let Some(w) = pairs.get(&(a, b)) {
                                total += w;
                            }
                        }
                    }
                }
                Ok(total)
            }
            Valuation::Table(table) => {
                if bundle.is_empty() {
                    return Ok(table.get(bundle).copied().unwrap_or_else(|| int(0)));
                }
                table
                    .get(bundle)
                    .copied()
                    .ok_or_else(|| Error::UnlistedBundle(bundle.items().to_vec()))
            }
        }
    }

    /// Per-item values when the valuation is additive (binary included).
    pub fn item_values(&self, item_count: usize) -> Option<Vec<Value>> {
        match self {
            Valuation::Additive(values) => Some(values.clone()),
            Valuation::Binary(approves) => Some(
                (0..item_count).map(|v| int(approves.contains(&v) as i64)).collect(),
            ),
            _ => None,
        }
    }

    pub fn is_additive(&self) -> bool {
        matches!(self, Valuation::Additive(_) | Valuation::Binary(_))
    }

    /// Approval set when every item value is 0 or 1.
    pub fn approval_set(&self) -> Option<BTreeSet<usize>> {
        match self {
            Valuation::Binary(a) => Some(a.clone()),
            Valuation::Additive(values) => {
                let one = int(1);
                let zero = int(0);
                if values.iter().all(|v| *v == one || *v == zero) {
                    Some(values.iter().enumerate().filter(|(_, v)| **v == one).map(|(i, _)| i).collect())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Valuation::Additive(_) => "additive",
            Valuation::Binary(_) => "binary",
            Valuation::TwoAdditive { .. } => "two_additive",
            Valuation::Table(_) => "table",
        }
    }

    fn check_domain(&self, agent: usize, graph: &ItemGraph) -> Result<()> {
        let m = graph.item_count();
        let bad = |msg: String| Err(Error::InvalidInstance(format!("agent {agent}: {msg}")));
        match self {
            Valuation::Additive(values) => {
                if values.len() != m {
                    return bad(format!("{} values for {m} items", values.len()));
                }
                if let Some(i) = values.iter().position(is_negative) {
                    return bad(format!("negative value for item {i}"));
                }
            }
            Valuation::Binary(approves) => {
                if let Some(v) = approves.iter().find(|&&v| v >= m) {
                    return bad(format!("approves item {v}, out of range"));
                }
            }
            Valuation::TwoAdditive { singles, pairs } => {
                if let Some(v) = singles.keys().find(|&&v| v >= m) {
                    return bad(format!("weight on item {v}, out of range"));
                }
                for &(a, b) in pairs.keys() {
                    if a >= m || b >= m || a >= b {
                        return bad(format!("pair weight on ({a},{b}) is out of range or malformed"));
                    }
                }
            }
            Valuation::Table(table) => {
                for (bundle, value) in table {
                    if bundle.items().iter().any(|&v| v >= m) {
                        return bad(format!("table entry {:?} out of range", bundle.items()));
                    }
                    if bundle.is_empty() && *value != int(0) {
                        return bad("empty bundle must be worth 0".into());
                    }
                    if !bundle.is_connected(graph) {
                        return bad(format!("table entry {:?} is not connected", bundle.items()));
                    }
                }
                let subsets = crate::enumerate::connected_subsets_for_table(graph)?;
                for b in subsets.iter().filter(|b| !b.is_empty()) {
                    if !table.contains_key(b) {
                        return bad(format!("table misses connected bundle {:?}", b.items()));
                    }
                }
                for b in &subsets {
                    let here = self.value(b)?;
                    for &v in b.items().iter().flat_map(|&v| graph.neighbors(v)) {
                        if b.contains(v) {
                            continue;
                        }
                        let bigger = Bundle::new(b.items().iter().copied().chain([v]));
                        if self.value(&bigger)? < here {
                            return bad(format!(
                                "table is not monotone: {:?} is worth more than {:?}",
                                b.items(),
                                bigger.items()
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

/// Item graph plus an ordered list of agents.
#[derive(Clone, Debug)]
pub struct Instance {
    graph: ItemGraph,
    valuations: Vec<Valuation>,
    agent_names: Vec<String>,
    meta: Metadata,
}

impl Instance {
    pub fn new(graph: ItemGraph, valuations: Vec<Valuation>) -> Result<Self> {
        let names = (0..valuations.len()).map(|i| format!("agent{}", i + 1)).collect();
        Self::with_names(graph, valuations, names, Metadata::default())
    }

    pub fn with_names(
        graph: ItemGraph,
        valuations: Vec<Valuation>,
        agent_names: Vec<String>,
        meta: Metadata,
    ) -> Result<Self> {
        if valuations.is_empty() {
            return Err(Error::InvalidInstance("instance needs at least one agent".into()));
        }
        if agent_names.len() != valuations.len() {
            return Err(Error::InvalidInstance("one name per agent required".into()));
        }
        for (i, val) in valuations.iter().enumerate() {
            val.check_domain(i, &graph)?;
        }
        Ok(Instance { graph, valuations, agent_names, meta })
    }

    pub fn graph(&self) -> &ItemGraph {
        &self.graph
    }

    pub fn valuations(&self) -> &[Valuation] {
        &self.valuations
    }

    pub fn valuation(&self, agent: usize) -> &Valuation {
        &self.valuations[agent]
    }

    pub fn agent_count(&self) -> usize {
        self.valuations.len()
    }

    pub fn item_count(&self) -> usize {
        self.graph.item_count()
    }

    pub fn agent_name(&self, agent: usize) -> &str {
        &self.agent_names[agent]
    }

    pub fn agent_names(&self) -> &[String] {
        &self.agent_names
    }

    pub fn meta(&self) -> &Metadata {
        &self.meta
    }

    pub fn with_meta(mut self, meta: Metadata) -> Self {
        self.meta = meta;
        self
    }

    pub fn all_additive(&self) -> bool {
        self.valuations.iter().all(Valuation::is_additive)
    }

    pub fn value(&self, agent: usize, bundle: &Bundle) -> Result<Value> {
        self.valuations[agent].value(bundle)
    }

    pub fn full_bundle(&self) -> Bundle {
        Bundle::new(0..self.item_count())
    }

    /// Stable fingerprint of graph and valuations, used to tie MMS profiles to instances.
    pub fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.graph.item_count().hash(&mut h);
        self.graph.edges().hash(&mut h);
        self.valuations.len().hash(&mut h);
        for v in &self.valuations {
            match v {
                Valuation::Additive(x) => x.hash(&mut h),
                Valuation::Binary(a) => a.hash(&mut h),
                Valuation::TwoAdditive { singles, pairs } => {
                    singles.hash(&mut h);
                    pairs.hash(&mut h);
                }
                Valuation::Table(t) => {
                    let mut entries: Vec<_> = t.iter().collect();
                    entries.sort();
                    entries.hash(&mut h);
                }
            }
        }
        h.finish()
    }

    pub fn validate_allocation(&self, alloc: &Allocation) -> Result<()> {
        let n = self.agent_count();
        let m = self.item_count();
        if alloc.bundles.len() != n {
            return Err(Error::InvalidAllocation(format!(
                "{} bundles for {n} agents",
                alloc.bundles.len()
            )));
        }
        let mut owner = vec![None; m];
        for (i, b) in alloc.bundles.iter().enumerate() {
            for &v in b.items() {
                if v >= m {
                    return Err(Error::InvalidAllocation(format!("item {v} out of range")));
                }
                if let Some(j) = owner[v] {
                    return Err(Error::InvalidAllocation(format!(
                        "item {v} given to both agent {j} and agent {i}"
                    )));
                }
                owner[v] = Some(i);
            }
            if !b.is_connected(&self.graph) {
                return Err(Error::InvalidAllocation(format!(
                    "bundle of agent {i} {:?} is not connected",
                    b.items()
                )));
            }
        }
        if let Some(v) = owner.iter().position(Option::is_none) {
            return Err(Error::InvalidAllocation(format!("item {v} is not allocated")));
        }
        Ok(())
    }

    pub fn utilities(&self, alloc: &Allocation) -> Result<Vec<Value>> {
        alloc.bundles.iter().enumerate().map(|(i, b)| self.value(i, b)).collect()
    }

    pub fn welfare(&self, alloc: &Allocation) -> Result<Value> {
        Ok(self.utilities(alloc)?.into_iter().sum())
    }
}

/// One bundle per agent, in agent order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    bundles: Vec<Bundle>,
}

impl Allocation {
    pub fn new(bundles: Vec<Bundle>) -> Self {
        Allocation { bundles }
    }

    /// Convenience constructor from raw item lists.
    pub fn from_lists<I, J>(lists: I) -> Self
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = usize>,
    {
        Allocation { bundles: lists.into_iter().map(Bundle::new).collect() }
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> &Bundle {
        &self.bundles[agent]
    }

    pub fn into_bundles(self) -> Vec<Bundle> {
        self.bundles
    }

    pub fn owner_of(&self, item: usize) -> Option<usize> {
        self.bundles.iter().position(|b| b.contains(item))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MmsMethod {
    Poly,
    Brute,
}

/// Per-agent maximin shares for one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct MmsProfile {
    pub values: Vec<Value>,
    pub method: MmsMethod,
    /// Set when there are more agents than items, so no partition into non-empty
    /// connected blocks exists and every share is 0 by convention.
    pub degenerate: bool,
    pub instance_fingerprint: u64,
}

impl MmsProfile {
    pub fn check_for(&self, instance: &Instance) -> Result<()> {
        if self.values.len() != instance.agent_count() {
            return Err(Error::ProfileMismatch(format!(
                "{} shares for {} agents",
                self.values.len(),
                instance.agent_count()
            )));
        }
        if self.instance_fingerprint != instance.fingerprint() {
            return Err(Error::ProfileMismatch("computed for a different instance".into()));
        }
        Ok(())
    }
}
