//! Item graphs and their topology.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Path,
    Star,
    Tree,
    Forest,
    General,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Topology::Path => "path",
            Topology::Star => "star",
            Topology::Tree => "tree",
            Topology::Forest => "forest",
            Topology::General => "general",
        };
        f.write_str(s)
    }
}

/// Undirected simple graph over items `0..m`, each item carrying a display label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemGraph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    topology: Topology,
}

impl ItemGraph {
    pub fn new(item_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let labels = (0..item_count).map(|i| format!("v{}", i + 1)).collect();
        Self::with_labels(labels, edges)
    }

    pub fn with_labels(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::InvalidInstance("item graph has no items".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= m || b >= m {
                return Err(Error::InvalidInstance(format!(
                    "edge ({a},{b}) has an endpoint out of range for {m} items"
                )));
            }
            if a == b {
                return Err(Error::InvalidInstance(format!("self-loop on item {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({},{})", e.0, e.1)));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); m];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut g = ItemGraph { labels, edges, adj, topology: Topology::General };
        g.topology = g.classify();
        Ok(g)
    }

    /// Path `0 - 1 - ... - (m-1)`.
    pub fn path(item_count: usize) -> Result<Self> {
        Self::new(item_count, (1..item_count).map(|i| (i - 1, i)))
    }

    /// Star with center `0`.
    pub fn star(item_count: usize) -> Result<Self> {
        Self::new(item_count, (1..item_count).map(|i| (0, i)))
    }

    pub fn item_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, item: usize) -> &str {
        &self.labels[item]
    }

    pub fn neighbors(&self, item: usize) -> &[usize] {
        &self.adj[item]
    }

    pub fn degree(&self, item: usize) -> usize {
        self.adj[item].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj.get(a).is_some_and(|l| l.binary_search(&b).is_ok())
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Whether `items` induces a connected subgraph. The empty set counts as connected.
    pub fn is_connected_set(&self, items: &[usize]) -> bool {
        let Some(&start) = items.first() else {
            return true;
        };
        let inside: BTreeSet<usize> = items.iter().copied().collect();
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if inside.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == inside.len()
    }

    /// Connected components, each sorted, ordered by smallest item.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let m = self.item_count();
        let mut comp = vec![usize::MAX; m];
        let mut out = Vec::new();
        for s in 0..m {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.item_count()
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.item_count()
    }

    pub fn is_path(&self) -> bool {
        let m = self.item_count();
        if !self.is_connected() {
            return false;
        }
        if m <= 2 {
            return true;
        }
        self.adj.iter().all(|l| l.len() <= 2) && self.adj.iter().filter(|l| l.len() == 1).count() == 2
    }

    pub fn is_star(&self) -> bool {
        self.star_center().is_some()
    }

    /// The center of a star: the lowest item adjacent to every other item, provided
    /// there are no further edges.
    pub fn star_center(&self) -> Option<usize> {
        let m = self.item_count();
        if !self.is_connected() || self.edges.len() != m - 1 {
            return None;
        }
        (0..m).find(|&v| self.degree(v) == m - 1)
    }

    /// Items in walking order from the lower-numbered endpoint, if the graph is a path.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if !self.is_path() {
            return None;
        }
        let m = self.item_count();
        let start = (0..m).find(|&v| self.degree(v) <= 1)?;
        let mut order = Vec::with_capacity(m);
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            order.push(cur);
            match self.adj[cur].iter().find(|&&w| w != prev) {
                Some(&next) if order.len() < m => {
                    prev = cur;
                    cur = next;
                }
                _ => break,
            }
        }
        Some(order)
    }

    /// Largest shortest-path distance in edges; `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        if !self.is_connected() {
            return None;
        }
        let m = self.item_count();
        let mut best = 0;
        for s in 0..m {
            let mut dist = vec![usize::MAX; m];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            best = best.max(dist.into_iter().max().unwrap_or(0));
        }
        Some(best)
    }

    fn classify(&self) -> Topology {
        if self.is_path() {
            Topology::Path
        } else if self.is_star() {
            Topology::Star
        } else if self.is_tree() {
            Topology::Tree
        } else if self.is_forest() {
            Topology::Forest
        } else {
            Topology::General
        }
    }

    /// Concatenate path graphs in order, joining the last item of each piece to the
    /// first item of the next. Items are renumbered along the resulting path; labels
    /// carry over unchanged.
    pub fn concatenate_paths(pieces: &[ItemGraph]) -> Result<ItemGraph> {
        if pieces.is_empty() {
            return Err(Error::Precondition("nothing to concatenate".into()));
        }
        let mut labels = Vec::new();
        for (k, piece) in pieces.iter().enumerate() {
            let order = piece
                .path_order()
                .ok_or_else(|| Error::Precondition(format!("piece {k} is not a path")))?;
            labels.extend(order.into_iter().map(|v| piece.labels[v].clone()));
        }
        let m = labels.len();
        ItemGraph::with_labels(labels, (1..m).map(|i| (i - 1, i)))
    }
}
