mod common;

use connalloc::oracle::{certify_po_by_item_maxima, is_ef1, is_pareto_optimal, mms_profile};
use connalloc::reductions::*;
use connalloc::{int, Budget, Error};
use rand::Rng;

fn fit(g: &Gadget) -> Budget {
    Budget::uniform(g.instance.item_count(), g.instance.agent_count())
}

fn decide(x: &X3CInstance, kind: GadgetKind) -> Option<Vec<usize>> {
    let g = build_x3c_gadget(x, kind).unwrap();
    solve_x3c_via_po(x, kind, &fit(&g)).unwrap().cover
}

#[test]
fn forest_and_two_additive_match_brute_force() {
    let mut rng = common::rng(1);
    for _ in 0..40 {
        let s = rng.gen_range(2..=4);
        let x = common::x3c(&mut rng, 2, s);
        let truth = solve_x3c_bruteforce(&x, 1 << 20).unwrap();
        for kind in [GadgetKind::Forest, GadgetKind::TwoAddPath] {
            let got = decide(&x, kind);
            assert_eq!(got.is_some(), truth.is_some(), "{kind} on {x:?}");
            if let Some(c) = got {
                assert!(x.is_exact_cover(&c));
            }
        }
    }
}

#[test]
fn degree_three_gadget_on_the_smallest_instances() {
    for s in 1..=2 {
        let x = X3CInstance::new(3, vec![[0, 1, 2]; s]).unwrap();
        assert_eq!(decide(&x, GadgetKind::Maxdeg3), Some(vec![0]));
    }
}

#[test]
fn degree_three_normalization_frees_one_family() {
    let x = X3CInstance::new(3, vec![[0, 1, 2], [0, 1, 2]]).unwrap();
    let g = build_x3c_gadget(&x, GadgetKind::Maxdeg3).unwrap();
    let out = connalloc::oracle::max_welfare_allocation(&g.instance, &fit(&g)).unwrap();
    let f = condition_layer(&g, &out.allocation).expect("some family holds no spine item");
    let n = normalize(&g, &out.allocation).unwrap();
    let keep: Vec<usize> = g.set_items(f);
    for a in g.agents_where(|r| matches!(*r, AgentRole::Element { layer, .. } | AgentRole::Dummy { layer, .. } if layer == f)) {
        assert!(n.bundle(a).items().iter().all(|v| keep.contains(v)));
    }
    assert!(check_perfect_condition(&g, &n).unwrap());
}

#[test]
fn tree_and_mms_gadgets_on_small_instances() {
    let yes = X3CInstance::new(6, vec![[0, 1, 2], [1, 2, 3], [3, 4, 5]]).unwrap();
    let no = X3CInstance::new(6, vec![[0, 1, 2], [2, 3, 4], [1, 4, 5]]).unwrap();
    for kind in [GadgetKind::Tree, GadgetKind::PoMms] {
        assert_eq!(decide(&yes, kind), Some(vec![0, 2]), "{kind}");
        assert_eq!(decide(&no, kind), None, "{kind}");
    }
}

#[test]
fn mms_gadget_allocation_is_po_and_mms() {
    let x = X3CInstance::new(3, vec![[0, 1, 2], [0, 1, 2]]).unwrap();
    let g = build_x3c_gadget(&x, GadgetKind::PoMms).unwrap();
    let b = fit(&g);
    let out = solve_x3c_via_po(&x, GadgetKind::PoMms, &b).unwrap();
    let a = out.allocation.unwrap();
    let p = mms_profile(&g.instance, &b).unwrap();
    assert!(connalloc::oracle::is_mms(&g.instance, &a, &p).unwrap());
    assert!(is_pareto_optimal(&g.instance, &a, &b).unwrap());
}

#[test]
fn po_ef1_gadget_layout_and_witness() {
    let x = X3CInstance::new(6, vec![[0, 1, 2], [1, 2, 3], [3, 4, 5]]).unwrap();
    let g = build_x3c_gadget(&x, GadgetKind::PoEf1).unwrap();
    let (r, s) = (2, 3);
    assert_eq!(g.instance.item_count(), 17 * s + 27 * r);
    let fillers = g.agents_where(|a| matches!(a, AgentRole::Filler { .. }));
    assert_eq!(fillers.len(), 2 * s + 2 * r);
    // dummy rows follow the ten-item pattern, element rows the eleven-item one
    let d = g.agents_where(|a| *a == AgentRole::DummyGuard { k: 0, which: 1 })[0];
    let q = g.items_where(|i| matches!(i, ItemRole::DummyPath { k: 0, .. }));
    let row: Vec<u8> = q.iter().map(|v| g.instance.valuation(d).approval_set().unwrap().contains(v) as u8).collect();
    assert_eq!(row, [1, 1, 1, 1, 0, 0, 1, 1, 1, 1]);
    let i = g.agents_where(|a| *a == AgentRole::Element { x: 0, layer: 0 })[0];
    let p = g.items_where(|it| matches!(it, ItemRole::ElementPath { x: 0, .. }));
    let row: Vec<u8> = p.iter().map(|v| g.instance.valuation(i).approval_set().unwrap().contains(v) as u8).collect();
    assert_eq!(row, [0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0]);

    let w = perfect_allocation_from_cover(&g, &[0, 2]).unwrap();
    assert!(is_ef1(&g.instance, &w).unwrap());
    assert!(certify_po_by_item_maxima(&g.instance, &w).unwrap());
    assert_eq!(extract_exact_cover(&g, &w).unwrap(), vec![0, 2]);
}

#[test]
fn po_ef1_driver_is_out_of_budget() {
    let x = X3CInstance::new(3, vec![[0, 1, 2]]).unwrap();
    let err = solve_x3c_via_po(&x, GadgetKind::PoEf1, &Budget::default()).unwrap_err();
    assert!(matches!(err, Error::Budget(_)), "{err}");
}

#[test]
fn vertex_cover_matches_brute_force() {
    let mut rng = common::rng(2);
    for _ in 0..30 {
        let w = rng.gen_range(2..=5);
        let mut edges = Vec::new();
        for a in 0..w {
            for b in a + 1..w {
                if rng.gen_bool(0.5) {
                    edges.push([a, b]);
                }
            }
        }
        let k = rng.gen_range(1..=w);
        let vc = VCInstance::new(w, edges, k).unwrap();
        let g = build_vc_gadget(&vc).unwrap();
        let got = solve_vc_via_po(&vc, &fit(&g)).unwrap();
        let truth = solve_vc_bruteforce(&vc, 1 << 20).unwrap();
        assert_eq!(got.cover.is_some(), truth.is_some(), "{vc:?}");
        if let Some(c) = got.cover {
            assert!(c.len() <= k && vc.is_cover(&c));
        }
    }
}

#[test]
fn gadget_values_spot_checks() {
    let x = X3CInstance::new(6, vec![[0, 1, 2], [3, 4, 5], [1, 2, 3]]).unwrap();
    let g = build_x3c_gadget(&x, GadgetKind::Forest).unwrap();
    let cover = solve_x3c_bruteforce(&x, 100).unwrap().unwrap();
    let a = perfect_allocation_from_cover(&g, &cover).unwrap();
    for (i, role) in g.agent_roles.iter().enumerate() {
        let want = if matches!(role, AgentRole::Element { .. }) { 1 } else { 3 };
        assert_eq!(g.instance.value(i, a.bundle(i)).unwrap(), int(want));
    }
    assert!(matches!(perfect_allocation_from_cover(&g, &[0, 2]), Err(Error::Precondition(_))));
}
