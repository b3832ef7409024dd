//! Seeded random instances shared by the integration suites.
#![allow(dead_code)]

use connalloc::poly::{check_non_nested, interval_profile};
use connalloc::reductions::X3CInstance;
use connalloc::{int, Instance, ItemGraph, Valuation, Value};
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn additive_row(rng: &mut ChaCha8Rng, m: usize, max: i64) -> Valuation {
    Valuation::Additive((0..m).map(|_| int(rng.gen_range(0..=max))).collect())
}

pub fn path_additive(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize, max_value: i64) -> Instance {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let vals = (0..n).map(|_| additive_row(rng, m, max_value)).collect();
    Instance::new(ItemGraph::path(m).unwrap(), vals).unwrap()
}

pub fn star_additive(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize, max_value: i64) -> Instance {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let vals = (0..n).map(|_| additive_row(rng, m, max_value)).collect();
    Instance::new(ItemGraph::star(m).unwrap(), vals).unwrap()
}

/// Every agent has the same additive valuation.
pub fn identical_path_additive(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize, max_value: i64) -> Instance {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let row = additive_row(rng, m, max_value);
    Instance::new(ItemGraph::path(m).unwrap(), vec![row; n]).unwrap()
}

/// Values with small denominators, to exercise exact arithmetic.
pub fn path_rational(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize) -> Instance {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let vals = (0..n)
        .map(|_| {
            Valuation::Additive(
                (0..m).map(|_| Value::new(rng.gen_range(0..=6), rng.gen_range(1..=3))).collect(),
            )
        })
        .collect();
    Instance::new(ItemGraph::path(m).unwrap(), vals).unwrap()
}

/// Binary agents approving intervals of a path, no interval strictly inside another.
pub fn non_nested_intervals(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize) -> Instance {
    loop {
        let m = rng.gen_range(1..=max_m);
        let n = rng.gen_range(1..=max_n);
        let vals = (0..n)
            .map(|_| {
                if rng.gen_ratio(1, 10) {
                    return Valuation::Binary(Default::default());
                }
                let lo = rng.gen_range(0..m);
                let hi = rng.gen_range(lo..m);
                Valuation::Binary((lo..=hi).collect())
            })
            .collect();
        let inst = Instance::new(ItemGraph::path(m).unwrap(), vals).unwrap();
        if check_non_nested(&interval_profile(&inst).unwrap()) {
            return inst;
        }
    }
}

/// Random tree by attaching each item to an earlier one.
pub fn tree_additive(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize, max_value: i64) -> Instance {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let edges: Vec<(usize, usize)> = (1..m).map(|v| (rng.gen_range(0..v), v)).collect();
    let vals = (0..n).map(|_| additive_row(rng, m, max_value)).collect();
    Instance::new(ItemGraph::new(m, edges).unwrap(), vals).unwrap()
}

/// `s` distinct 3-sets over `3r` elements.
pub fn x3c(rng: &mut ChaCha8Rng, r: usize, s: usize) -> X3CInstance {
    let m = 3 * r;
    let mut sets: Vec<[usize; 3]> = Vec::new();
    while sets.len() < s {
        let mut t = sample(rng, m, 3).into_vec();
        t.sort_unstable();
        let t = [t[0], t[1], t[2]];
        if !sets.contains(&t) {
            sets.push(t);
        }
    }
    X3CInstance::new(m, sets).unwrap()
}

pub fn fixture(name: &str) -> Instance {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    connalloc::io::parse_instance(&std::fs::read_to_string(path).unwrap()).unwrap()
}
