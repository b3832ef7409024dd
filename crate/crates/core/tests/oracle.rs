mod common;

use common::fixture;
use connalloc::enumerate::enumerate_allocations;
use connalloc::oracle::*;
use connalloc::reductions::{build_x3c_gadget, GadgetKind, X3CInstance};
use connalloc::{int, Allocation, Budget, Instance, ItemGraph, Valuation};

fn alloc(lists: &[&[usize]]) -> Allocation {
    Allocation::from_lists(lists.iter().map(|l| l.to_vec()))
}

fn budget() -> Budget {
    Budget::default()
}

#[test]
fn nested_improvement_is_the_documented_one() {
    let inst = fixture("nested.json");
    let knife = alloc(&[&[0, 1], &[2, 3, 4]]);
    let better = find_pareto_improvement(&inst, &knife, &budget()).unwrap().unwrap();
    assert_eq!(better, alloc(&[&[3, 4], &[0, 1, 2]]));
    assert!(!is_pareto_optimal(&inst, &knife, &budget()).unwrap());
    assert!(is_pareto_optimal(&inst, &alloc(&[&[0, 1, 2, 3, 4], &[]]), &budget()).unwrap());
}

#[test]
fn single_agent_cannot_be_improved() {
    let inst = Instance::new(ItemGraph::path(3).unwrap(), vec![Valuation::Additive(vec![int(1); 3])]).unwrap();
    let all = alloc(&[&[0, 1, 2]]);
    assert!(find_pareto_improvement(&inst, &all, &budget()).unwrap().is_none());
    let w = max_welfare_allocation(&inst, &budget()).unwrap();
    assert_eq!((w.allocation, w.welfare), (all, int(3)));
}

#[test]
fn non_additive_verdicts() {
    let inst = fixture("nonadditive.json");
    let b = budget();
    assert!(!is_ef1(&inst, &alloc(&[&[0, 1, 2, 3], &[]])).unwrap());
    assert!(!is_ef1(&inst, &alloc(&[&[0, 1, 2], &[3]])).unwrap());
    let split = alloc(&[&[0, 1], &[2, 3]]);
    let better = alloc(&[&[0], &[1, 2, 3]]);
    assert_eq!(find_pareto_improvement(&inst, &split, &b).unwrap(), Some(better.clone()));
    assert!(!is_ef1(&inst, &better).unwrap());
    assert!(exists_po_and_ef1(&inst, &b).unwrap().witness.is_none());
}

#[test]
fn completion_reaches_a_dominating_optimum() {
    let inst = fixture("nested.json");
    let knife = alloc(&[&[0, 1], &[2, 3, 4]]);
    let done = complete_to_pareto_optimum(&inst, &knife, &budget()).unwrap();
    assert!(is_pareto_optimal(&inst, &done, &budget()).unwrap());
    assert!(weakly_dominates(&inst, &done, &knife).unwrap());
    assert!(inst.utilities(&done).unwrap()[1] >= int(2));
    let po = alloc(&[&[0, 1, 2, 3, 4], &[]]);
    assert_eq!(complete_to_pareto_optimum(&inst, &po, &budget()).unwrap(), po);
}

#[test]
fn welfare_maxima() {
    let nested = max_welfare_allocation(&fixture("nested.json"), &budget()).unwrap();
    assert_eq!(nested.allocation, alloc(&[&[0, 1, 2, 3, 4], &[]]));
    assert_eq!(nested.welfare, int(5));
    let ex1 = max_welfare_allocation(&fixture("ex1.json"), &budget()).unwrap();
    assert_eq!(ex1.welfare, int(10));
    assert!(is_pareto_optimal(&fixture("ex1.json"), &ex1.allocation, &budget()).unwrap());
}

#[test]
fn ef1_examples() {
    let pair = Instance::new(ItemGraph::path(2).unwrap(), vec![Valuation::Binary([0, 1].into()); 2]).unwrap();
    assert!(is_ef1(&pair, &alloc(&[&[0], &[1]])).unwrap());
    let ex1 = fixture("ex1.json");
    // a1 holding v5 and v6 leaves b envious beyond one item
    let bad = alloc(&[&[3, 4, 5, 6], &[0, 1, 2], &[7, 8, 9], &[]]);
    assert_eq!(ef1_violation(&ex1, &bad).unwrap(), Some((3, 0)));
    let zero = Instance::new(ItemGraph::path(4).unwrap(), vec![Valuation::Additive(vec![int(0); 4]); 3]).unwrap();
    for a in enumerate_allocations(&zero, &budget()).unwrap() {
        assert!(is_ef1(&zero, &a).unwrap());
    }
}

#[test]
fn ef1_only_removes_outer_items() {
    // star with center 0: removing the center disconnects the bundle
    let g = ItemGraph::star(4).unwrap();
    let inst = Instance::new(
        g,
        vec![Valuation::Additive(vec![int(5), int(1), int(1), int(1)]), Valuation::Additive(vec![int(0); 4])],
    )
    .unwrap();
    let a = alloc(&[&[], &[0, 1, 2, 3]]);
    // dropping a leaf still leaves 7 > 0 for agent 0
    assert!(!is_ef1(&inst, &a).unwrap());
}

#[test]
fn mms_examples() {
    let b = budget();
    let all6 = Instance::new(ItemGraph::path(6).unwrap(), vec![Valuation::Binary((0..6).collect()); 3]).unwrap();
    assert_eq!(mms_profile_bruteforce(&all6, &b).unwrap().values, vec![int(2); 3]);
    let v = Valuation::Additive(vec![int(3), int(1), int(1), int(3)]);
    let two = Instance::new(ItemGraph::path(4).unwrap(), vec![v.clone(), v]).unwrap();
    assert_eq!(mms_profile_bruteforce(&two, &b).unwrap().values, vec![int(4); 2]);

    let nested = fixture("nested.json");
    let p = mms_profile(&nested, &b).unwrap();
    assert_eq!(p.values, vec![int(2), int(1)]);
    let everything = alloc(&[&[0, 1, 2, 3, 4], &[]]);
    assert!(!is_mms(&nested, &everything, &p).unwrap());
    assert_eq!(alpha_mms_level(&nested, &everything, &p).unwrap(), int(0));

    let degenerate = Instance::new(ItemGraph::path(2).unwrap(), vec![Valuation::Binary([0].into()); 3]).unwrap();
    let d = mms_profile_bruteforce(&degenerate, &b).unwrap();
    assert!(d.degenerate);
    assert_eq!(d.values, vec![int(0); 3]);
    let a = alloc(&[&[0, 1], &[], &[]]);
    assert!(is_mms(&degenerate, &a, &d).unwrap());
    assert_eq!(alpha_mms_level(&degenerate, &a, &d).unwrap(), int(1));
}

#[test]
fn profile_must_match_instance() {
    let nested = fixture("nested.json");
    let other = fixture("ex1.json");
    let p = mms_profile(&nested, &budget()).unwrap();
    let a = alloc(&[&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9], &[], &[], &[]]);
    assert!(is_mms(&other, &a, &p).is_err());
}

#[test]
fn filler_agents_of_the_mms_gadget_have_share_one() {
    let x = X3CInstance::new(3, vec![[0, 1, 2], [0, 1, 2]]).unwrap();
    let g = build_x3c_gadget(&x, GadgetKind::PoMms).unwrap();
    let p = mms_profile(&g.instance, &budget()).unwrap();
    for h in g.agents_where(|r| matches!(r, connalloc::reductions::AgentRole::Filler { .. })) {
        assert_eq!(p.values[h], int(1));
    }
}

#[test]
fn existence_on_the_impossibility_examples() {
    let b = budget();
    let ex1 = exists_po_and_ef1(&fixture("ex1.json"), &b).unwrap();
    assert!(ex1.witness.is_none());
    assert_eq!(ex1.stats.scanned, 2992);
    assert!(exists_po_and_ef1(&fixture("ex2.json"), &b).unwrap().witness.is_none());
    let w = exists_po_and_mms(&fixture("nested.json"), &b).unwrap().witness.unwrap();
    // no welfare-maximal allocation is MMS here, so the witness has welfare below 5
    assert!(fixture("nested.json").welfare(&w).unwrap() < int(5));
}

#[test]
fn report_witnesses_recheck() {
    let inst = fixture("ex1.json");
    let a = alloc(&[&[0, 1], &[2, 3], &[6, 7, 8, 9], &[4, 5]]);
    let r = fairness_report(&inst, &a, &budget()).unwrap();
    assert!(r.is_po && !r.is_ef1);
    assert_eq!(r.envy_pair, Some((0, 2)));
    let (i, j) = r.envy_pair.unwrap();
    let mine = inst.value(i, a.bundle(j)).unwrap();
    assert!(mine > r.utilities[i]);
    assert!(r.is_mms);
    let json = r.to_json();
    assert_eq!(json["is_po"], true);
    assert_eq!(json["welfare"], 10);
}

#[test]
fn budget_errors() {
    let big = Instance::new(ItemGraph::path(20).unwrap(), vec![Valuation::Binary(Default::default()); 3]).unwrap();
    assert!(matches!(max_welfare_allocation(&big, &budget()), Err(connalloc::Error::Budget(_))));
    let tiny_steps = budget().with_steps(10);
    assert!(matches!(exists_po_and_ef1(&fixture("ex1.json"), &tiny_steps), Err(connalloc::Error::Budget(_))));
}

#[test]
fn item_maxima_certificate() {
    let inst = fixture("ex1.json");
    assert!(certify_po_by_item_maxima(&inst, &alloc(&[&[0, 1], &[2, 3], &[6, 7, 8, 9], &[4, 5]])).unwrap());
    assert!(!certify_po_by_item_maxima(&inst, &alloc(&[&[0, 1], &[2, 3, 4], &[6, 7, 8, 9], &[5]])).unwrap());
}
