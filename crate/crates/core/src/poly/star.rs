use super::matching::max_weight_matching;
use super::require_additive;
use crate::error::{Error, Result};
use crate::model::{Allocation, Bundle, Instance};
use crate::value::{int, Value};

#[derive(Clone, Debug)]
pub struct StarOutcome {
    pub allocation: Allocation,
    pub welfare: Value,
    /// Agent holding the center item.
    pub center_agent: usize,
}

/// Welfare-maximizing allocation on a star with additive valuations.
///
/// Whoever gets the center may also hold any set of leaves; everybody else
/// holds at most one leaf. For each candidate center holder this is a
/// bipartite matching between leaves and the other agents plus one slot per
/// leaf for the holder.
pub fn po_star_additive(instance: &Instance) -> Result<StarOutcome> {
    let graph = instance.graph();
    let center = graph
        .star_center()
        .ok_or_else(|| Error::Precondition(format!("star PO needs a star, got a {}", graph.topology())))?;
    let vals = require_additive(instance, "star PO")?;
    let n = instance.agent_count();
    let leaves: Vec<usize> = (0..graph.item_count()).filter(|&v| v != center).collect();
    let zero = int(0);
    let edge = |i: usize, leaf: usize| Some(vals[i][leaf]).filter(|w| *w > zero);

    let mut best: Option<StarOutcome> = None;
    for holder in 0..n {
        let others: Vec<usize> = (0..n).filter(|&j| j != holder).collect();
        let mut weights: Vec<Vec<Option<Value>>> =
            others.iter().map(|&j| leaves.iter().map(|&l| edge(j, l)).collect()).collect();
        weights.extend((0..leaves.len()).map(|_| leaves.iter().map(|&l| edge(holder, l)).collect()));
        let matching = max_weight_matching(&weights);

        let mut bundles = vec![Vec::new(); n];
        let mut taken = vec![false; leaves.len()];
        for &(row, col) in &matching.pairs {
            if row < others.len() {
                bundles[others[row]].push(leaves[col]);
                taken[col] = true;
            }
        }
        bundles[holder].push(center);
        bundles[holder].extend(leaves.iter().zip(&taken).filter(|(_, &t)| !t).map(|(&l, _)| l));
        let allocation = Allocation::new(bundles.into_iter().map(Bundle::new).collect());
        let welfare = instance.welfare(&allocation)?;
        debug_assert_eq!(welfare, vals[holder][center] + matching.weight);
        if best.as_ref().map_or(true, |b| welfare > b.welfare) {
            best = Some(StarOutcome { allocation, welfare, center_agent: holder });
        }
    }
    Ok(best.expect("instances have at least one agent"))
}
