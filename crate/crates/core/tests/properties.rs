use connalloc::enumerate::{count_allocations, enumerate_allocations, enumerate_connected_partitions};
use connalloc::io::{instance_to_json, parse_instance};
use connalloc::oracle::*;
use connalloc::poly::{mms_value_path, po_path_additive, po_star_additive};
use connalloc::{Bundle, Budget, Instance, ItemGraph, Valuation, Value};
use proptest::collection::vec;
use proptest::prelude::*;

fn rows(m: usize, n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    vec(vec(0..=3i64, m), n)
}

fn additive(graph: ItemGraph, rows: Vec<Vec<i64>>) -> Instance {
    let vals = rows.into_iter().map(|r| Valuation::Additive(r.into_iter().map(Value::from_integer).collect())).collect();
    Instance::new(graph, vals).unwrap()
}

fn path_instance(max_m: usize, max_n: usize) -> impl Strategy<Value = Instance> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| rows(m, n).prop_map(move |r| additive(ItemGraph::path(m).unwrap(), r)))
}

fn tree_instance(max_m: usize, max_n: usize) -> impl Strategy<Value = Instance> {
    (2..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        let parents: Vec<_> = (1..m).map(|v| 0..v).collect();
        (parents, rows(m, n)).prop_map(move |(p, r)| {
            let g = ItemGraph::new(m, p.into_iter().enumerate().map(|(i, u)| (u, i + 1))).unwrap();
            additive(g, r)
        })
    })
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Some allocation of the instance, picked by position in the enumeration.
fn nth_allocation(inst: &Instance, pick: usize) -> connalloc::Allocation {
    let all: Vec<_> = enumerate_allocations(inst, &Budget::default()).unwrap().collect();
    all[pick % all.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerated_allocations_are_valid_and_counted(inst in tree_instance(7, 3)) {
        let b = Budget::default();
        let mut n = 0u64;
        for a in enumerate_allocations(&inst, &b).unwrap() {
            inst.validate_allocation(&a).unwrap();
            n += 1;
        }
        prop_assert_eq!(n, count_allocations(&inst, &b).unwrap());
        // on a tree, an allocation with k non-empty bundles is k-1 cut edges and an injective labelling
        let (m, agents) = (inst.item_count() as u64, inst.agent_count() as u64);
        let closed: u64 = (1..=agents.min(m))
            .map(|k| binomial(m - 1, k - 1) * (0..k).map(|i| agents - i).product::<u64>())
            .sum();
        prop_assert_eq!(n, closed);
    }

    #[test]
    fn tree_partitions_are_edge_cuts(inst in tree_instance(8, 4)) {
        let m = inst.item_count();
        let n = inst.agent_count();
        let parts: Vec<_> = enumerate_connected_partitions(inst.graph(), n, &Budget::default()).unwrap().collect();
        prop_assert_eq!(parts.len() as u64, if n <= m { binomial(m as u64 - 1, n as u64 - 1) } else { 0 });
        for p in parts {
            prop_assert!(p.iter().all(|b| !b.is_empty() && b.is_connected(inst.graph())));
            prop_assert_eq!(p.iter().map(Bundle::len).sum::<usize>(), m);
        }
    }

    #[test]
    fn completion_is_pareto_optimal_and_dominating(inst in tree_instance(6, 3), pick in any::<usize>()) {
        let b = Budget::default();
        let start = nth_allocation(&inst, pick);
        let done = complete_to_pareto_optimum(&inst, &start, &b).unwrap();
        prop_assert!(is_pareto_optimal(&inst, &done, &b).unwrap());
        prop_assert!(weakly_dominates(&inst, &done, &start).unwrap());
        let profile = mms_profile(&inst, &b).unwrap();
        if is_mms(&inst, &start, &profile).unwrap() {
            prop_assert!(is_mms(&inst, &done, &profile).unwrap());
        }
    }

    #[test]
    fn welfare_maximum_is_pareto_optimal(inst in tree_instance(7, 3)) {
        let b = Budget::default();
        let w = max_welfare_allocation(&inst, &b).unwrap();
        prop_assert!(is_pareto_optimal(&inst, &w.allocation, &b).unwrap());
        let best = enumerate_allocations(&inst, &b).unwrap().map(|a| inst.welfare(&a).unwrap()).max().unwrap();
        prop_assert_eq!(w.welfare, best);
    }

    #[test]
    fn po_and_mms_exist_on_trees(inst in tree_instance(7, 3)) {
        let b = Budget::default();
        let w = exists_po_and_mms(&inst, &b).unwrap().witness.unwrap();
        let profile = mms_profile(&inst, &b).unwrap();
        prop_assert!(is_mms(&inst, &w, &profile).unwrap());
        prop_assert!(is_pareto_optimal(&inst, &w, &b).unwrap());
    }

    #[test]
    fn shares_never_exceed_the_whole(inst in tree_instance(8, 4)) {
        let p = mms_profile_bruteforce(&inst, &Budget::default()).unwrap();
        let full = inst.full_bundle();
        for (i, v) in p.values.iter().enumerate() {
            prop_assert!(*v >= Value::from_integer(0));
            prop_assert!(*v <= inst.value(i, &full).unwrap());
        }
    }

    #[test]
    fn path_solver_is_pareto_optimal(inst in path_instance(8, 4)) {
        let a = po_path_additive(&inst).unwrap();
        prop_assert!(is_pareto_optimal(&inst, &a, &Budget::default()).unwrap());
    }

    #[test]
    fn star_solver_maximizes_welfare(m in 1..=7usize, n in 1..=4usize, seed in rows(7, 4)) {
        let r: Vec<Vec<i64>> = seed.into_iter().take(n).map(|row| row.into_iter().take(m).collect()).collect();
        let inst = additive(ItemGraph::star(m).unwrap(), r);
        let star = po_star_additive(&inst).unwrap();
        let brute = max_welfare_allocation(&inst, &Budget::default()).unwrap();
        prop_assert_eq!(star.welfare, brute.welfare);
        prop_assert_eq!(inst.welfare(&star.allocation).unwrap(), star.welfare);
    }

    #[test]
    fn path_shares_match_partitions(
        values in vec((0..=6i64, 1..=3i64), 1..=9),
        n in 1..=4usize,
    ) {
        let vals: Vec<Value> = values.iter().map(|&(a, b)| Value::new(a, b)).collect();
        let m = vals.len();
        let inst = Instance::new(ItemGraph::path(m).unwrap(), vec![Valuation::Additive(vals.clone()); n]).unwrap();
        let brute = mms_profile_bruteforce(&inst, &Budget::default()).unwrap();
        prop_assert_eq!(mms_value_path(&vals, n), brute.values[0]);
    }

    #[test]
    fn additive_values_are_monotone(inst in tree_instance(7, 2), pick in any::<usize>()) {
        let a = nth_allocation(&inst, pick);
        for (i, b) in a.bundles().iter().enumerate() {
            let v = inst.value(i, b).unwrap();
            for x in b.outer_items(inst.graph()) {
                prop_assert!(inst.value(i, &b.without(x)).unwrap() <= v);
            }
        }
    }

    #[test]
    fn all_zero_valuations_are_always_ef1(m in 1..=6usize, n in 1..=3usize) {
        let inst = additive(ItemGraph::path(m).unwrap(), vec![vec![0; m]; n]);
        for a in enumerate_allocations(&inst, &Budget::default()).unwrap() {
            prop_assert!(is_ef1(&inst, &a).unwrap());
        }
    }

    #[test]
    fn instances_round_trip_through_json(inst in tree_instance(8, 3)) {
        let text = serde_json::to_string(&instance_to_json(&inst)).unwrap();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(back.fingerprint(), inst.fingerprint());
    }
}
