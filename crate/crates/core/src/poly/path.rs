use super::{require_additive, require_path};
use crate::error::Result;
use crate::model::{Allocation, Bundle, Instance};
use crate::value::int;

/// Pareto-optimal allocation on a path with additive valuations.
///
/// Sweeping left to right, the lowest-index remaining agent that values the
/// first non-worthless item takes the shortest interval holding everything
/// it still values. Items no remaining agent values are carried into the
/// next bundle. The last agent takes whatever is left; items trailing after
/// every remaining agent's interest go to the lowest-index remaining agent.
pub fn po_path_additive(instance: &Instance) -> Result<Allocation> {
    let order = require_path(instance, "path PO")?;
    let vals = require_additive(instance, "path PO")?;
    let m = order.len();
    let n = instance.agent_count();
    let zero = int(0);
    let positive = |i: usize, p: usize| vals[i][order[p]] > zero;

    let mut bundles = vec![Bundle::empty(); n];
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut start = 0;
    while start < m {
        if remaining.len() == 1 {
            bundles[remaining[0]] = Bundle::new(order[start..].iter().copied());
            break;
        }
        let first = (start..m).find_map(|p| remaining.iter().find(|&&i| positive(i, p)).map(|&i| (p, i)));
        let Some((p, agent)) = first else {
            bundles[remaining[0]] = Bundle::new(order[start..].iter().copied());
            break;
        };
        let last = (p..m).rev().find(|&q| positive(agent, q)).expect("p itself is positive");
        bundles[agent] = Bundle::new(order[start..=last].iter().copied());
        remaining.retain(|&i| i != agent);
        start = last + 1;
    }
    Ok(Allocation::new(bundles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::graph::ItemGraph;
    use crate::model::Valuation;
    use crate::oracle::is_pareto_optimal;
    use crate::value::Value;

    fn additive(rows: &[&[i64]]) -> Instance {
        let m = rows[0].len();
        let vals = rows.iter().map(|r| Valuation::Additive(r.iter().map(|&x| int(x)).collect())).collect();
        Instance::new(ItemGraph::path(m).unwrap(), vals).unwrap()
    }

    #[test]
    fn single_agent_takes_everything() {
        let inst = additive(&[&[0, 2, 0]]);
        assert_eq!(po_path_additive(&inst).unwrap(), Allocation::from_lists([vec![0, 1, 2]]));
    }

    #[test]
    fn nested_approvals_give_everything_to_the_wide_agent() {
        let inst = additive(&[&[1, 1, 1, 1, 1], &[0, 1, 1, 0, 0]]);
        let a = po_path_additive(&inst).unwrap();
        assert_eq!(a, Allocation::from_lists([vec![0, 1, 2, 3, 4], vec![]]));
        assert!(is_pareto_optimal(&inst, &a, &Budget::default()).unwrap());
    }

    #[test]
    fn disjoint_interests_split() {
        let inst = additive(&[&[1, 0], &[0, 1]]);
        let a = po_path_additive(&inst).unwrap();
        assert_eq!(a, Allocation::from_lists([vec![0], vec![1]]));
        assert!(is_pareto_optimal(&inst, &a, &Budget::default()).unwrap());
    }

    #[test]
    fn zero_items_ride_along() {
        // nobody values items 0 and 4; the first is carried forward, the last trails
        let inst = additive(&[&[0, 0, 3, 0, 0], &[0, 2, 0, 0, 0], &[0, 0, 0, 1, 0]]);
        let a = po_path_additive(&inst).unwrap();
        assert_eq!(a, Allocation::from_lists([vec![2], vec![0, 1], vec![3, 4]]));
        let all_zero = additive(&[&[0, 0], &[0, 0]]);
        assert_eq!(
            po_path_additive(&all_zero).unwrap(),
            Allocation::from_lists([vec![0, 1], vec![]])
        );
    }

    #[test]
    fn works_on_relabelled_paths() {
        let g = ItemGraph::new(3, [(2, 0), (0, 1)]).unwrap();
        let vals = vec![
            Valuation::Additive(vec![int(0), int(1), int(0)]),
            Valuation::Additive(vec![Value::new(1, 2), int(0), int(1)]),
        ];
        let inst = Instance::new(g, vals).unwrap();
        let a = po_path_additive(&inst).unwrap();
        inst.validate_allocation(&a).unwrap();
        assert!(is_pareto_optimal(&inst, &a, &Budget::default()).unwrap());
    }

    #[test]
    fn rejects_non_paths_and_non_additive() {
        let star = Instance::new(ItemGraph::star(4).unwrap(), vec![Valuation::Additive(vec![int(1); 4])]).unwrap();
        assert!(po_path_additive(&star).is_err());
        let two = Valuation::TwoAdditive { singles: Default::default(), pairs: Default::default() };
        let inst = Instance::new(ItemGraph::path(2).unwrap(), vec![two]).unwrap();
        assert!(po_path_additive(&inst).is_err());
    }
}
