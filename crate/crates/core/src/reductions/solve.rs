use std::collections::BTreeSet;

use super::gadgets::{
    build_vc_gadget, build_x3c_gadget, AgentRole, Gadget, GadgetKind, ItemRole, DUMMY_MIDDLE,
};
use super::source::{VCInstance, X3CInstance};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::model::{Allocation, Bundle};
use crate::oracle::{exists_po_and_ef1, mms_profile, Oracle, SearchStats};
use crate::value::int;

/// Allocation meeting the perfect condition, built from an exact cover.
/// Supported for every X3C gadget except the degree-3 one.
pub fn perfect_allocation_from_cover(g: &Gadget, cover: &[usize]) -> Result<Allocation> {
    let x3c = g.x3c().ok_or_else(|| Error::Precondition("not an exact-cover gadget".into()))?;
    if !x3c.is_exact_cover(cover) {
        return Err(Error::Precondition(format!("{cover:?} is not an exact cover")));
    }
    let layers: &[usize] = match g.kind {
        GadgetKind::Forest | GadgetKind::TwoAddPath | GadgetKind::PoMms | GadgetKind::PoEf1 => &[0],
        GadgetKind::Tree => &[0, 1],
        _ => return Err(Error::Precondition(format!("no cover witness for the {} gadget", g.kind))),
    };
    let n = g.instance.agent_count();
    let mut bundles: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let rest: Vec<usize> = (0..x3c.s()).filter(|s| !cover.contains(s)).collect();
    for &layer in layers {
        for &s in cover {
            let path = g.set_path(s, layer);
            for (j, &x) in x3c.sets[s].iter().enumerate() {
                let agent = g.agents_where(|r| *r == AgentRole::Element { x, layer })[0];
                bundles[agent].insert(path[j]);
            }
        }
        for (k, &s) in rest.iter().enumerate() {
            let agent = g.agents_where(|r| *r == AgentRole::Dummy { k, layer })[0];
            bundles[agent].extend(g.set_path(s, layer));
        }
    }
    for (v, role) in g.item_roles.iter().enumerate() {
        let owner = match *role {
            ItemRole::SetItem { .. } => continue,
            ItemRole::Hub => {
                let middle = g.set_path(0, 1)[1];
                bundles.iter().position(|b| b.contains(&middle)).expect("middle item is owned")
            }
            ItemRole::FillerBlock { h, .. } => g.agents_where(|r| *r == AgentRole::Filler { h })[0],
            ItemRole::DummyPath { k, pos } => {
                let want = if DUMMY_MIDDLE.contains(&pos) {
                    AgentRole::DummyMiddle { k }
                } else {
                    AgentRole::DummyGuard { k, which: if pos < DUMMY_MIDDLE[0] { 1 } else { 2 } }
                };
                g.agents_where(|r| *r == want)[0]
            }
            ItemRole::ElementPath { x, pos } => {
                let which = if pos < 5 { 1 } else { 2 };
                g.agents_where(|r| *r == AgentRole::ElementGuard { x, which })[0]
            }
            _ => return Err(Error::Internal(format!("unexpected item role {role:?}"))),
        };
        bundles[owner].insert(v);
    }
    let alloc = Allocation::new(bundles.into_iter().map(Bundle::new).collect());
    g.instance.validate_allocation(&alloc)?;
    Ok(alloc)
}

/// Which layer of original agents the perfect condition is read on: 0, except
/// for the degree-3 gadget where it is the first family holding no spine item.
pub fn condition_layer(g: &Gadget, alloc: &Allocation) -> Option<usize> {
    if g.kind != GadgetKind::Maxdeg3 {
        return Some(0);
    }
    let spine = g.items_where(|r| matches!(r, ItemRole::Spine { .. }));
    let families = g.x3c().expect("degree-3 gadgets come from X3C").s() + 1;
    (0..families).find(|&f| {
        family(g, f).into_iter().all(|a| spine.iter().all(|&b| !alloc.bundle(a).contains(b)))
    })
}

fn family(g: &Gadget, f: usize) -> Vec<usize> {
    g.agents_where(|r| {
        matches!(*r, AgentRole::Element { layer, .. } | AgentRole::Dummy { layer, .. } if layer == f)
    })
}

/// The per-gadget condition that marks allocations coming from an exact cover
/// (or a small vertex cover).
pub fn check_perfect_condition(g: &Gadget, alloc: &Allocation) -> Result<bool> {
    g.instance.validate_allocation(alloc)?;
    let inst = &g.instance;
    if g.kind == GadgetKind::VcStar {
        let edges = g.vc().expect("vc gadget").edges.len() as i64;
        for (a, role) in g.agent_roles.iter().enumerate() {
            let want = if *role == AgentRole::Cover { int(edges) } else { int(1) };
            if inst.value(a, alloc.bundle(a))? != want {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let Some(layer) = condition_layer(g, alloc) else {
        return Ok(false);
    };
    let original: BTreeSet<usize> = g.set_items(layer).into_iter().collect();
    for (a, role) in g.agent_roles.iter().enumerate() {
        let (is_element, l) = match *role {
            AgentRole::Element { layer, .. } => (true, layer),
            AgentRole::Dummy { layer, .. } => (false, layer),
            _ => continue,
        };
        if l != layer {
            continue;
        }
        let ok = match g.kind {
            GadgetKind::PoEf1 => {
                let inside = Bundle::new(alloc.bundle(a).items().iter().copied().filter(|v| original.contains(v)));
                let u = inst.value(a, &inside)?;
                u >= int(if is_element { 1 } else { 3 })
            }
            GadgetKind::TwoAddPath => inst.value(a, alloc.bundle(a))? == int(1),
            _ => inst.value(a, alloc.bundle(a))? == int(if is_element { 1 } else { 3 }),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sets whose 3-path is not wholly held by one dummy, checked to be an exact cover.
pub fn extract_exact_cover(g: &Gadget, alloc: &Allocation) -> Result<Vec<usize>> {
    let x3c = g.x3c().ok_or_else(|| Error::Precondition("not an exact-cover gadget".into()))?;
    if !check_perfect_condition(g, alloc)? {
        return Err(Error::Precondition("allocation does not meet the perfect condition".into()));
    }
    let layer = condition_layer(g, alloc).expect("condition holds");
    let dummies = g.agents_where(|r| matches!(*r, AgentRole::Dummy { layer: l, .. } if l == layer));
    let cover: Vec<usize> = (0..x3c.s())
        .filter(|&s| {
            let path = g.set_path(s, layer);
            !dummies.iter().any(|&d| path.iter().all(|&v| alloc.bundle(d).contains(v)))
        })
        .collect();
    if !x3c.is_exact_cover(&cover) {
        return Err(Error::Internal(format!("extracted sets {cover:?} are not an exact cover")));
    }
    Ok(cover)
}

/// The cover agent's vertices, checked to cover every edge within the size bound.
pub fn extract_vertex_cover(g: &Gadget, alloc: &Allocation) -> Result<Vec<usize>> {
    let vc = g.vc().ok_or_else(|| Error::Precondition("not a vertex-cover gadget".into()))?;
    if !check_perfect_condition(g, alloc)? {
        return Err(Error::Precondition("allocation does not meet the perfect condition".into()));
    }
    let main = g.agents_where(|r| *r == AgentRole::Cover)[0];
    let cover: Vec<usize> = alloc.bundle(main).items().iter().copied().filter(|&w| w < vc.vertices).collect();
    if cover.len() > vc.k || !vc.is_cover(&cover) {
        return Err(Error::Internal(format!("extracted vertices {cover:?} are not a cover of size <= {}", vc.k)));
    }
    Ok(cover)
}

/// Rewrites an allocation so that original agents only hold items they could
/// value, without making anyone worse off. Gadgets that need no rewriting are
/// returned unchanged.
pub fn normalize(g: &Gadget, alloc: &Allocation) -> Result<Allocation> {
    g.instance.validate_allocation(alloc)?;
    match g.kind {
        GadgetKind::Tree => {
            let alloc = swap_halves_if_needed(g, alloc)?;
            let stripped = g.agents_where(|r| matches!(*r, AgentRole::Element { layer: 0, .. } | AgentRole::Dummy { layer: 0, .. }));
            strip_and_refill(g, &alloc, &stripped, &g.set_items(0))
        }
        GadgetKind::Maxdeg3 => match condition_layer(g, alloc) {
            Some(f) => strip_and_refill(g, alloc, &family(g, f), &g.set_items(f)),
            None => Ok(alloc.clone()),
        },
        GadgetKind::PoMms => {
            let stripped = family(g, 0);
            strip_and_refill(g, alloc, &stripped, &g.set_items(0))
        }
        _ => Ok(alloc.clone()),
    }
}

/// If an original agent holds the hub, exchange the roles of originals and copies.
fn swap_halves_if_needed(g: &Gadget, alloc: &Allocation) -> Result<Allocation> {
    let hub = g.items_where(|r| *r == ItemRole::Hub)[0];
    let owner = alloc.owner_of(hub).ok_or_else(|| Error::Internal("hub is unowned".into()))?;
    if !matches!(g.agent_roles[owner], AgentRole::Element { layer: 0, .. } | AgentRole::Dummy { layer: 0, .. }) {
        return Ok(alloc.clone());
    }
    let flip_item = |v: usize| -> usize {
        match g.item_roles[v] {
            ItemRole::SetItem { set, j, layer } => {
                g.items_where(|r| *r == ItemRole::SetItem { set, j, layer: 1 - layer })[0]
            }
            _ => v,
        }
    };
    let flip_agent = |a: usize| -> usize {
        let other = match g.agent_roles[a] {
            AgentRole::Element { x, layer } => AgentRole::Element { x, layer: 1 - layer },
            AgentRole::Dummy { k, layer } => AgentRole::Dummy { k, layer: 1 - layer },
            r => r,
        };
        g.agents_where(|r| *r == other)[0]
    };
    let bundles = (0..g.instance.agent_count())
        .map(|a| Bundle::new(alloc.bundle(flip_agent(a)).items().iter().map(|&v| flip_item(v))))
        .collect();
    let out = Allocation::new(bundles);
    g.instance.validate_allocation(&out)?;
    let mut before = g.instance.utilities(alloc)?;
    let mut after = g.instance.utilities(&out)?;
    before.sort();
    after.sort();
    if before != after {
        return Err(Error::Internal("swapping halves changed the utility profile".into()));
    }
    Ok(out)
}

/// Take every item outside `keep` away from the `stripped` agents, then hand
/// the removed items to adjacent bundles of the other agents until none is left.
fn strip_and_refill(g: &Gadget, alloc: &Allocation, stripped: &[usize], keep: &[usize]) -> Result<Allocation> {
    let inst = &g.instance;
    let graph = inst.graph();
    let mut owner: Vec<Option<usize>> = (0..inst.item_count()).map(|v| alloc.owner_of(v)).collect();
    let mut pool = Vec::new();
    for (v, o) in owner.iter_mut().enumerate() {
        if let Some(a) = *o {
            if stripped.contains(&a) && !keep.contains(&v) {
                *o = None;
                pool.push(v);
            }
        }
    }
    loop {
        let mut changed = false;
        for &v in &pool {
            if owner[v].is_some() {
                continue;
            }
            let taker = graph
                .neighbors(v)
                .iter()
                .filter_map(|&u| owner[u])
                .filter(|a| !stripped.contains(a))
                .min();
            if let Some(a) = taker {
                owner[v] = Some(a);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if owner.iter().any(Option::is_none) {
        return Err(Error::Internal("removed items could not be handed back".into()));
    }
    let mut bundles = vec![Vec::new(); inst.agent_count()];
    for (v, o) in owner.into_iter().enumerate() {
        bundles[o.expect("checked above")].push(v);
    }
    let out = Allocation::from_lists(bundles);
    inst.validate_allocation(&out)?;
    let before = inst.utilities(alloc)?;
    let after = inst.utilities(&out)?;
    if before.iter().zip(&after).any(|(b, a)| a < b) {
        return Err(Error::Internal("normalization made an agent worse off".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ViaPoOutcome {
    pub cover: Option<Vec<usize>>,
    /// The allocation the decision was read from, after normalization.
    pub allocation: Option<Allocation>,
    pub stats: SearchStats,
}

/// Decide exact cover by computing a Pareto-optimal allocation of the gadget
/// (one that is also MMS or EF1 where the gadget asks for it) and reading
/// the cover off it.
pub fn solve_x3c_via_po(x3c: &X3CInstance, kind: GadgetKind, budget: &Budget) -> Result<ViaPoOutcome> {
    let g = build_x3c_gadget(x3c, kind)?;
    let (alloc, stats) = match kind {
        GadgetKind::PoEf1 => {
            let out = exists_po_and_ef1(&g.instance, budget)?;
            match out.witness {
                Some(a) => (a, out.stats),
                None => return Ok(ViaPoOutcome { cover: None, allocation: None, stats: out.stats }),
            }
        }
        GadgetKind::PoMms => {
            let profile = mms_profile(&g.instance, budget)?;
            let mut oracle = Oracle::new(&g.instance, budget)?;
            let out = oracle
                .max_welfare_with_floors(&profile.values)?
                .ok_or_else(|| Error::Internal("no MMS allocation on a path".into()))?;
            (out.allocation, out.stats)
        }
        _ => {
            let out = Oracle::new(&g.instance, budget)?.max_welfare()?;
            (out.allocation, out.stats)
        }
    };
    let alloc = normalize(&g, &alloc)?;
    let cover = if check_perfect_condition(&g, &alloc)? {
        Some(extract_exact_cover(&g, &alloc)?)
    } else {
        if kind == GadgetKind::PoEf1 {
            return Err(Error::Internal("a Pareto-optimal EF1 allocation misses the perfect condition".into()));
        }
        None
    };
    Ok(ViaPoOutcome { cover, allocation: Some(alloc), stats })
}

pub fn solve_vc_via_po(vc: &VCInstance, budget: &Budget) -> Result<ViaPoOutcome> {
    let g = build_vc_gadget(vc)?;
    let out = Oracle::new(&g.instance, budget)?.max_welfare()?;
    let cover = if check_perfect_condition(&g, &out.allocation)? {
        Some(extract_vertex_cover(&g, &out.allocation)?)
    } else {
        None
    };
    Ok(ViaPoOutcome { cover, allocation: Some(out.allocation), stats: out.stats })
}
