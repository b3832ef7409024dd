use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::source::{VCInstance, X3CInstance};
use crate::error::{Error, Result};
use crate::graph::ItemGraph;
use crate::model::{Instance, Metadata, Valuation};
use crate::value::{int, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetKind {
    Forest,
    Tree,
    Maxdeg3,
    #[serde(rename = "2add-path")]
    TwoAddPath,
    VcStar,
    PoEf1,
    PoMms,
}

impl GadgetKind {
    pub const X3C: [GadgetKind; 6] = [
        GadgetKind::Forest,
        GadgetKind::Tree,
        GadgetKind::Maxdeg3,
        GadgetKind::TwoAddPath,
        GadgetKind::PoEf1,
        GadgetKind::PoMms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::Forest => "forest",
            GadgetKind::Tree => "tree",
            GadgetKind::Maxdeg3 => "maxdeg3",
            GadgetKind::TwoAddPath => "2add-path",
            GadgetKind::VcStar => "vc-star",
            GadgetKind::PoEf1 => "po-ef1",
            GadgetKind::PoMms => "po-mms",
        }
    }
}

impl std::str::FromStr for GadgetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [GadgetKind::VcStar]
            .into_iter()
            .chain(GadgetKind::X3C)
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown gadget kind {s:?}")))
    }
}

impl std::fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// What an agent stands for. `layer` is 0 except for the copies of the tree
/// gadget (layer 1) and the families of the degree-3 gadget (layer f).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum AgentRole {
    /// `i_x` for element `x`.
    Element { x: usize, layer: usize },
    /// `d_k`, one per set beyond the cover size.
    Dummy { k: usize, layer: usize },
    /// `a^1_x` / `a^2_x` guarding the path of element `x`.
    ElementGuard { x: usize, which: usize },
    /// `a^1_k` / `a^2_k` guarding the path of dummy `k`.
    DummyGuard { k: usize, which: usize },
    /// `b_k`, owner of the middle pair on the path of dummy `k`.
    DummyMiddle { k: usize },
    /// Agent that only wants its own block of items.
    Filler { h: usize },
    /// Vertex-cover agent.
    Cover,
    /// Vertex-cover dummy.
    CoverDummy { k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum ItemRole {
    /// `v_{S,j}` (j in 1..=3) on the 3-path of set `set`.
    SetItem { set: usize, j: usize, layer: usize },
    /// The item joining the two halves of the tree gadget.
    Hub,
    /// Spine vertex `b_S` of the degree-3 gadget.
    Spine { set: usize },
    /// Ladder vertex `c_S^f` of the degree-3 gadget.
    Ladder { set: usize, layer: usize },
    /// Position `pos` on the path of element `x`.
    ElementPath { x: usize, pos: usize },
    /// Position `pos` on the path of dummy `k`.
    DummyPath { k: usize, pos: usize },
    /// Position `pos` on the block of filler agent `h`.
    FillerBlock { h: usize, pos: usize },
    /// Vertex `w` of the cover graph.
    Vertex { w: usize },
    /// Star center of the vertex-cover gadget.
    Center,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "problem", rename_all = "snake_case")]
pub enum Source {
    X3c(X3CInstance),
    Vc(VCInstance),
}

#[derive(Clone, Debug)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub source: Source,
    pub instance: Instance,
    pub agent_roles: Vec<AgentRole>,
    pub item_roles: Vec<ItemRole>,
}

impl Gadget {
    pub fn x3c(&self) -> Option<&X3CInstance> {
        match &self.source {
            Source::X3c(x) => Some(x),
            Source::Vc(_) => None,
        }
    }

    pub fn vc(&self) -> Option<&VCInstance> {
        match &self.source {
            Source::Vc(v) => Some(v),
            Source::X3c(_) => None,
        }
    }

    /// Role annotations, written next to the instance.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "source": self.source,
            "agent_roles": self.agent_roles,
            "item_roles": self.item_roles,
        })
    }

    /// The instance in wire format with the role annotations embedded.
    pub fn to_json(&self) -> serde_json::Value {
        let mut raw = crate::io::RawInstance::from_instance(&self.instance);
        raw.gadget = Some(self.sidecar());
        serde_json::to_value(raw).expect("gadgets always serialize")
    }

    pub fn agents_where(&self, pred: impl Fn(&AgentRole) -> bool) -> Vec<usize> {
        (0..self.agent_roles.len()).filter(|&i| pred(&self.agent_roles[i])).collect()
    }

    pub fn items_where(&self, pred: impl Fn(&ItemRole) -> bool) -> Vec<usize> {
        (0..self.item_roles.len()).filter(|&v| pred(&self.item_roles[v])).collect()
    }

    /// Items of the 3-path of `set` on `layer`, in path order.
    pub fn set_path(&self, set: usize, layer: usize) -> Vec<usize> {
        let mut items: Vec<(usize, usize)> = self
            .item_roles
            .iter()
            .enumerate()
            .filter_map(|(v, r)| match *r {
                ItemRole::SetItem { set: s, j, layer: l } if s == set && l == layer => Some((j, v)),
                _ => None,
            })
            .collect();
        items.sort_unstable();
        items.into_iter().map(|(_, v)| v).collect()
    }

    /// All set items on `layer`.
    pub fn set_items(&self, layer: usize) -> Vec<usize> {
        self.items_where(|r| matches!(*r, ItemRole::SetItem { layer: l, .. } if l == layer))
    }
}

pub fn build_x3c_gadget(x3c: &X3CInstance, kind: GadgetKind) -> Result<Gadget> {
    x3c.validate()?;
    match kind {
        GadgetKind::Forest => Ok(forest(x3c)),
        GadgetKind::Tree => Ok(tree(x3c)),
        GadgetKind::Maxdeg3 => Ok(maxdeg3(x3c)),
        GadgetKind::TwoAddPath => Ok(two_additive_path(x3c)),
        GadgetKind::PoEf1 => po_ef1(x3c),
        GadgetKind::PoMms => po_mms(x3c),
        GadgetKind::VcStar => Err(Error::Precondition("vc-star is built from a vertex-cover instance".into())),
    }
}

struct Builder {
    labels: Vec<String>,
    roles: Vec<ItemRole>,
    edges: Vec<(usize, usize)>,
    agents: Vec<(String, Valuation, AgentRole)>,
}

impl Builder {
    fn new() -> Self {
        Builder { labels: Vec::new(), roles: Vec::new(), edges: Vec::new(), agents: Vec::new() }
    }

    fn item(&mut self, label: String, role: ItemRole) -> usize {
        self.labels.push(label);
        self.roles.push(role);
        self.labels.len() - 1
    }

    /// Appends a path of items and returns them in order.
    fn path(&mut self, items: impl IntoIterator<Item = (String, ItemRole)>) -> Vec<usize> {
        let ids: Vec<usize> = items.into_iter().map(|(l, r)| self.item(l, r)).collect();
        self.edges.extend(ids.windows(2).map(|w| (w[0], w[1])));
        ids
    }

    fn agent(&mut self, name: String, valuation: Valuation, role: AgentRole) {
        self.agents.push((name, valuation, role));
    }

    fn approver(&mut self, name: String, items: impl IntoIterator<Item = usize>, role: AgentRole) {
        self.agent(name, Valuation::Binary(items.into_iter().collect()), role);
    }

    fn finish(self, kind: GadgetKind, source: Source) -> Result<Gadget> {
        let graph = ItemGraph::with_labels(self.labels, self.edges)?;
        let mut names = Vec::new();
        let mut vals = Vec::new();
        let mut agent_roles = Vec::new();
        for (n, v, r) in self.agents {
            names.push(n);
            vals.push(v);
            agent_roles.push(r);
        }
        let meta = Metadata { name: Some(format!("{kind} gadget")), provenance: Some("generated".into()) };
        let instance = Instance::with_names(graph, vals, names, meta)?;
        Ok(Gadget { kind, source, instance, agent_roles, item_roles: self.roles })
    }
}

fn set_path_items(set: usize, layer: usize, tag: &str) -> Vec<(String, ItemRole)> {
    (1..=3)
        .map(|j| (format!("v{tag}[S{},{j}]", set + 1), ItemRole::SetItem { set, j, layer }))
        .collect()
}

/// Items `v_{S,j}` with `S^j = x`, given the 3-paths of one layer.
fn element_items(x3c: &X3CInstance, paths: &[Vec<usize>], x: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for (s, set) in x3c.sets.iter().enumerate() {
        for j in 0..3 {
            if set[j] == x {
                out.push(paths[s][j]);
            }
        }
    }
    out
}

/// Element and dummy agents approving the set items of one layer.
fn original_agents(b: &mut Builder, x3c: &X3CInstance, paths: &[Vec<usize>], layer: usize, tag: &str) {
    let all: Vec<usize> = paths.iter().flatten().copied().collect();
    for x in 0..x3c.elements {
        b.approver(format!("i{tag}_{}", x + 1), element_items(x3c, paths, x), AgentRole::Element { x, layer });
    }
    for k in 0..x3c.s() - x3c.r() {
        b.approver(format!("d{tag}_{}", k + 1), all.iter().copied(), AgentRole::Dummy { k, layer });
    }
}

fn forest(x3c: &X3CInstance) -> Gadget {
    let mut b = Builder::new();
    let paths: Vec<Vec<usize>> = (0..x3c.s()).map(|s| b.path(set_path_items(s, 0, ""))).collect();
    original_agents(&mut b, x3c, &paths, 0, "");
    b.finish(GadgetKind::Forest, Source::X3c(x3c.clone())).expect("forest gadget is well formed")
}

/// Two copies of the forest joined through one extra item that nobody approves.
fn tree(x3c: &X3CInstance) -> Gadget {
    let mut b = Builder::new();
    let originals: Vec<Vec<usize>> = (0..x3c.s()).map(|s| b.path(set_path_items(s, 0, ""))).collect();
    let copies: Vec<Vec<usize>> = (0..x3c.s()).map(|s| b.path(set_path_items(s, 1, "'"))).collect();
    let hub = b.item("c".into(), ItemRole::Hub);
    for p in originals.iter().chain(&copies) {
        b.edges.push((hub, p[1]));
    }
    original_agents(&mut b, x3c, &originals, 0, "");
    original_agents(&mut b, x3c, &copies, 1, "'");
    b.finish(GadgetKind::Tree, Source::X3c(x3c.clone())).expect("tree gadget is well formed")
}

/// A spine of one vertex per set, a ladder of `s+1` vertices hanging off each
/// spine vertex, and one copy of the set's 3-path hanging off each ladder vertex.
/// Family `f` of agents only approves the 3-paths hanging at ladder height `f`.
fn maxdeg3(x3c: &X3CInstance) -> Gadget {
    let s = x3c.s();
    let mut b = Builder::new();
    let spine = b.path((0..s).map(|set| (format!("b[S{}]", set + 1), ItemRole::Spine { set })));
    let mut families: Vec<Vec<Vec<usize>>> = vec![Vec::new(); s + 1];
    let mut arms = Vec::new();
    for set in 0..s {
        let ladder = b.path(
            (0..=s).map(|f| (format!("c{f}[S{}]", set + 1), ItemRole::Ladder { set, layer: f })),
        );
        b.edges.push((spine[set], ladder[0]));
        arms.push(ladder);
    }
    for set in 0..s {
        for f in 0..=s {
            let arm = b.path(set_path_items(set, f, &f.to_string()));
            b.edges.push((arms[set][f], arm[0]));
            families[f].push(arm);
        }
    }
    for (f, paths) in families.iter().enumerate() {
        original_agents(&mut b, x3c, paths, f, &f.to_string());
    }
    b.finish(GadgetKind::Maxdeg3, Source::X3c(x3c.clone())).expect("degree-3 gadget is well formed")
}

/// The forest's 3-paths joined into one path, with pair weights standing in
/// for the missing edges.
fn two_additive_path(x3c: &X3CInstance) -> Gadget {
    let s = x3c.s();
    let mut b = Builder::new();
    let paths: Vec<Vec<usize>> = (0..s).map(|set| b.path(set_path_items(set, 0, ""))).collect();
    for w in paths.windows(2) {
        b.edges.push((w[0][2], w[1][0]));
    }
    for x in 0..x3c.elements {
        let approved = element_items(x3c, &paths, x);
        let singles: BTreeMap<usize, Value> = approved.iter().map(|&v| (v, int(1))).collect();
        let pairs = approved.windows(2).map(|w| ((w[0], w[1]), int(-1))).collect();
        b.agent(
            format!("i_{}", x + 1),
            Valuation::TwoAdditive { singles, pairs },
            AgentRole::Element { x, layer: 0 },
        );
    }
    for k in 0..s - x3c.r() {
        let mut pairs: BTreeMap<(usize, usize), Value> = paths.iter().map(|p| ((p[0], p[2]), int(1))).collect();
        for w in paths.windows(2) {
            pairs.insert((w[0][0], w[1][2]), int(-1));
        }
        b.agent(
            format!("d_{}", k + 1),
            Valuation::TwoAdditive { singles: BTreeMap::new(), pairs },
            AgentRole::Dummy { k, layer: 0 },
        );
    }
    b.finish(GadgetKind::TwoAddPath, Source::X3c(x3c.clone())).expect("2-additive gadget is well formed")
}

/// Star with the cover graph's vertices as leaves.
pub fn build_vc_gadget(vc: &VCInstance) -> Result<Gadget> {
    vc.validate()?;
    let mut b = Builder::new();
    for w in 0..vc.vertices {
        b.item(format!("w{}", w + 1), ItemRole::Vertex { w });
    }
    let c = b.item("c".into(), ItemRole::Center);
    b.edges.extend((0..vc.vertices).map(|w| (w, c)));
    let singles = (0..vc.vertices)
        .filter(|&w| vc.degree(w) > 0)
        .map(|w| (w, int(vc.degree(w) as i64)))
        .collect();
    let pairs = vc.edges.iter().map(|&[a, z]| ((a.min(z), a.max(z)), int(-1))).collect();
    b.agent("i".into(), Valuation::TwoAdditive { singles, pairs }, AgentRole::Cover);
    for k in 0..vc.vertices - vc.k {
        let singles = (0..=vc.vertices).map(|v| (v, int(1))).collect();
        let pairs = (0..vc.vertices).map(|w| ((w, c), int(-1))).collect();
        b.agent(format!("d_{}", k + 1), Valuation::TwoAdditive { singles, pairs }, AgentRole::CoverDummy { k });
    }
    b.finish(GadgetKind::VcStar, Source::Vc(vc.clone()))
}

pub const ELEMENT_PATH_LEN: usize = 11;
pub const DUMMY_PATH_LEN: usize = 10;
/// Positions on a dummy's path that only `b_k` wants.
pub const DUMMY_MIDDLE: [usize; 2] = [4, 5];
/// Positions on an element's path that `i_x` also wants.
pub const ELEMENT_BAIT: [usize; 2] = [3, 4];

/// One long path: set paths each followed by a filler pair, then one guarded
/// path per element and per dummy, each also followed by a filler pair.
fn po_ef1(x3c: &X3CInstance) -> Result<Gadget> {
    let (r, s) = (x3c.r(), x3c.s());
    let dummies = s - r;
    let mut pieces: Vec<ItemGraph> = Vec::new();
    let mut roles: Vec<ItemRole> = Vec::new();
    let mut h = 0;
    let mut filler = |pieces: &mut Vec<ItemGraph>, roles: &mut Vec<ItemRole>| -> Result<()> {
        pieces.push(ItemGraph::with_labels(
            vec![format!("z{}.1", h + 1), format!("z{}.2", h + 1)],
            [(0, 1)],
        )?);
        roles.extend((0..2).map(|pos| ItemRole::FillerBlock { h, pos }));
        h += 1;
        Ok(())
    };
    let path_piece = |labels: Vec<String>| {
        let m = labels.len();
        ItemGraph::with_labels(labels, (1..m).map(|i| (i - 1, i)))
    };
    for set in 0..s {
        let (labels, rs): (Vec<_>, Vec<_>) = set_path_items(set, 0, "").into_iter().unzip();
        pieces.push(path_piece(labels)?);
        roles.extend(rs);
        filler(&mut pieces, &mut roles)?;
    }
    for x in 0..x3c.elements {
        pieces.push(path_piece((0..ELEMENT_PATH_LEN).map(|p| format!("p{}.{}", x + 1, p + 1)).collect())?);
        roles.extend((0..ELEMENT_PATH_LEN).map(|pos| ItemRole::ElementPath { x, pos }));
        filler(&mut pieces, &mut roles)?;
    }
    for k in 0..dummies {
        pieces.push(path_piece((0..DUMMY_PATH_LEN).map(|p| format!("q{}.{}", k + 1, p + 1)).collect())?);
        roles.extend((0..DUMMY_PATH_LEN).map(|pos| ItemRole::DummyPath { k, pos }));
        filler(&mut pieces, &mut roles)?;
    }
    let graph = ItemGraph::concatenate_paths(&pieces)?;

    let find = |want: ItemRole| roles.iter().position(|r| *r == want).expect("role exists");
    let set_paths: Vec<Vec<usize>> = (0..s)
        .map(|set| (1..=3).map(|j| find(ItemRole::SetItem { set, j, layer: 0 })).collect())
        .collect();
    let original: Vec<usize> = set_paths.iter().flatten().copied().collect();
    let element_path = |x: usize| -> Vec<usize> {
        (0..ELEMENT_PATH_LEN).map(|pos| find(ItemRole::ElementPath { x, pos })).collect()
    };
    let dummy_path = |k: usize| -> Vec<usize> {
        (0..DUMMY_PATH_LEN).map(|pos| find(ItemRole::DummyPath { k, pos })).collect()
    };

    let mut agents: Vec<(String, BTreeSet<usize>, AgentRole)> = Vec::new();
    for x in 0..x3c.elements {
        let p = element_path(x);
        let mut a: BTreeSet<usize> = element_items(x3c, &set_paths, x).into_iter().collect();
        a.extend(ELEMENT_BAIT.iter().map(|&pos| p[pos]));
        agents.push((format!("i_{}", x + 1), a, AgentRole::Element { x, layer: 0 }));
    }
    for k in 0..dummies {
        let p = dummy_path(k);
        let mut a: BTreeSet<usize> = original.iter().copied().collect();
        a.extend((0..DUMMY_PATH_LEN).filter(|pos| !DUMMY_MIDDLE.contains(pos)).map(|pos| p[pos]));
        agents.push((format!("d_{}", k + 1), a, AgentRole::Dummy { k, layer: 0 }));
    }
    for x in 0..x3c.elements {
        for which in 1..=2 {
            agents.push((
                format!("a{which}_x{}", x + 1),
                element_path(x).into_iter().collect(),
                AgentRole::ElementGuard { x, which },
            ));
        }
    }
    for k in 0..dummies {
        let p = dummy_path(k);
        let outer: BTreeSet<usize> =
            (0..DUMMY_PATH_LEN).filter(|pos| !DUMMY_MIDDLE.contains(pos)).map(|pos| p[pos]).collect();
        for which in 1..=2 {
            agents.push((format!("a{which}_d{}", k + 1), outer.clone(), AgentRole::DummyGuard { k, which }));
        }
        agents.push((
            format!("b_{}", k + 1),
            DUMMY_MIDDLE.iter().map(|&pos| p[pos]).collect(),
            AgentRole::DummyMiddle { k },
        ));
    }
    for hh in 0..h {
        let block = (0..2).map(|pos| find(ItemRole::FillerBlock { h: hh, pos })).collect();
        agents.push((format!("z_{}", hh + 1), block, AgentRole::Filler { h: hh }));
    }
    assemble(GadgetKind::PoEf1, x3c, graph, roles, agents)
}

/// Set paths on one line, each followed by a block that only its filler agent wants.
fn po_mms(x3c: &X3CInstance) -> Result<Gadget> {
    let (r, s) = (x3c.r(), x3c.s());
    let block = 2 * r + 2 * s;
    let mut pieces = Vec::new();
    let mut roles = Vec::new();
    for set in 0..s {
        let (labels, rs): (Vec<_>, Vec<_>) = set_path_items(set, 0, "").into_iter().unzip();
        pieces.push(ItemGraph::with_labels(labels, [(0, 1), (1, 2)])?);
        roles.extend(rs);
        pieces.push(ItemGraph::with_labels(
            (0..block).map(|p| format!("B{}.{}", set + 1, p + 1)).collect(),
            (1..block).map(|i| (i - 1, i)),
        )?);
        roles.extend((0..block).map(|pos| ItemRole::FillerBlock { h: set, pos }));
    }
    let graph = ItemGraph::concatenate_paths(&pieces)?;
    let set_paths: Vec<Vec<usize>> =
        (0..s).map(|set| (0..3).map(|j| set * (3 + block) + j).collect()).collect();
    let original: Vec<usize> = set_paths.iter().flatten().copied().collect();
    let mut agents: Vec<(String, BTreeSet<usize>, AgentRole)> = Vec::new();
    for x in 0..x3c.elements {
        let a = element_items(x3c, &set_paths, x).into_iter().collect();
        agents.push((format!("i_{}", x + 1), a, AgentRole::Element { x, layer: 0 }));
    }
    for k in 0..s - r {
        agents.push((format!("d_{}", k + 1), original.iter().copied().collect(), AgentRole::Dummy { k, layer: 0 }));
    }
    for h in 0..s {
        let start = h * (3 + block) + 3;
        agents.push((format!("z_{}", h + 1), (start..start + block).collect(), AgentRole::Filler { h }));
    }
    assemble(GadgetKind::PoMms, x3c, graph, roles, agents)
}

fn assemble(
    kind: GadgetKind,
    x3c: &X3CInstance,
    graph: ItemGraph,
    item_roles: Vec<ItemRole>,
    agents: Vec<(String, BTreeSet<usize>, AgentRole)>,
) -> Result<Gadget> {
    let mut names = Vec::new();
    let mut vals = Vec::new();
    let mut agent_roles = Vec::new();
    for (n, a, r) in agents {
        names.push(n);
        vals.push(Valuation::Binary(a));
        agent_roles.push(r);
    }
    let meta = Metadata { name: Some(format!("{kind} gadget")), provenance: Some("generated".into()) };
    let instance = Instance::with_names(graph, vals, names, meta)?;
    Ok(Gadget { kind, source: Source::X3c(x3c.clone()), instance, agent_roles, item_roles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Topology;
    use crate::model::Bundle;

    fn sample() -> X3CInstance {
        X3CInstance::new(6, vec![[0, 1, 2], [3, 4, 5], [1, 2, 3]]).unwrap()
    }

    #[test]
    fn sizes_and_shapes() {
        let x = sample();
        let (r, s) = (2, 3);
        let f = build_x3c_gadget(&x, GadgetKind::Forest).unwrap();
        assert_eq!((f.instance.item_count(), f.instance.agent_count()), (3 * s, 2 * r + s));
        assert_eq!(f.instance.graph().topology(), Topology::Forest);

        let t = build_x3c_gadget(&x, GadgetKind::Tree).unwrap();
        assert_eq!((t.instance.item_count(), t.instance.agent_count()), (6 * s + 1, 2 * (2 * r + s)));
        assert_eq!(t.instance.graph().topology(), Topology::Tree);
        assert_eq!(t.instance.graph().diameter(), Some(4));

        let d = build_x3c_gadget(&x, GadgetKind::Maxdeg3).unwrap();
        assert_eq!(d.instance.item_count(), s + s * (s + 1) + 3 * s * (s + 1));
        assert_eq!(d.instance.agent_count(), (s + 1) * (2 * r + s));
        assert_eq!(d.instance.graph().max_degree(), 3);
        assert!(d.instance.graph().is_tree());

        let p = build_x3c_gadget(&x, GadgetKind::TwoAddPath).unwrap();
        assert_eq!(p.instance.graph().topology(), Topology::Path);

        let e = build_x3c_gadget(&x, GadgetKind::PoEf1).unwrap();
        assert_eq!(e.instance.item_count(), 17 * s + 27 * r);
        assert_eq!(e.instance.graph().topology(), Topology::Path);

        let m = build_x3c_gadget(&x, GadgetKind::PoMms).unwrap();
        assert_eq!(m.instance.item_count(), 3 * s + s * (2 * r + 2 * s));
        assert_eq!(m.instance.agent_count(), 2 * r + 2 * s);
    }

    #[test]
    fn two_additive_values() {
        let g = build_x3c_gadget(&sample(), GadgetKind::TwoAddPath).unwrap();
        let d = g.agents_where(|r| matches!(r, AgentRole::Dummy { .. }))[0];
        assert_eq!(g.instance.value(d, &Bundle::new(0..3)).unwrap(), int(1));
        assert_eq!(g.instance.value(d, &Bundle::new(0..6)).unwrap(), int(1));
        assert_eq!(g.instance.value(d, &Bundle::new(0..9)).unwrap(), int(1));
        assert_eq!(g.instance.value(d, &Bundle::new(1..5)).unwrap(), int(0));
        // element 1 sits in sets 0 and 2, at items 1 and 6
        assert_eq!(g.instance.value(1, &Bundle::new(1..7)).unwrap(), int(1));
        assert_eq!(g.instance.value(1, &Bundle::new([1])).unwrap(), int(1));
    }

    #[test]
    fn vc_star_values() {
        let vc = VCInstance::new(3, vec![[0, 1], [1, 2]], 1).unwrap();
        let g = build_vc_gadget(&vc).unwrap();
        assert_eq!(g.instance.graph().star_center(), Some(3));
        assert_eq!(g.instance.agent_count(), 3);
        assert_eq!(g.instance.value(0, &Bundle::new([1])).unwrap(), int(2));
        assert_eq!(g.instance.value(0, &Bundle::new([0, 1, 2, 3])).unwrap(), int(2));
        assert_eq!(g.instance.value(1, &Bundle::new([0, 3])).unwrap(), int(1));
        assert_eq!(g.instance.value(1, &Bundle::new([0])).unwrap(), int(1));
    }

    #[test]
    fn sidecar_lists_every_role() {
        let g = build_x3c_gadget(&sample(), GadgetKind::PoEf1).unwrap();
        let side = g.to_json();
        assert_eq!(side["gadget"]["kind"], "po-ef1");
        assert_eq!(side["gadget"]["item_roles"].as_array().unwrap().len(), g.instance.item_count());
        assert_eq!(side["gadget"]["agent_roles"][0]["role"], "element");
        assert_eq!("2add-path".parse::<GadgetKind>().unwrap(), GadgetKind::TwoAddPath);
    }
}
