use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact cover by 3-sets: `elements = 3r` elements and a family of 3-sets.
/// Each set is stored in ascending order, which fixes the order of its members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct X3CInstance {
    pub elements: usize,
    pub sets: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn new(elements: usize, sets: Vec<[usize; 3]>) -> Result<Self> {
        let x = X3CInstance { elements, sets };
        x.validate()?;
        Ok(x.normalized())
    }

    fn normalized(mut self) -> Self {
        for s in &mut self.sets {
            s.sort_unstable();
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if self.elements == 0 || self.elements % 3 != 0 {
            return bad(format!("element count {} is not a positive multiple of 3", self.elements));
        }
        for (k, s) in self.sets.iter().enumerate() {
            if s.iter().any(|&e| e >= self.elements) {
                return bad(format!("set {k} has an element out of range"));
            }
            if s[0] == s[1] || s[1] == s[2] || s[0] == s[2] {
                return bad(format!("set {k} repeats an element"));
            }
        }
        if self.sets.len() < self.r() {
            return bad(format!("{} sets cannot cover {} elements", self.sets.len(), self.elements));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: X3CInstance = serde_json::from_str(text)?;
        raw.validate()?;
        Ok(raw.normalized())
    }

    pub fn r(&self) -> usize {
        self.elements / 3
    }

    pub fn s(&self) -> usize {
        self.sets.len()
    }

    /// Whether `chosen` (set indices) is an exact cover.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        if chosen.len() != self.r() {
            return false;
        }
        let mut seen = vec![false; self.elements];
        for &k in chosen {
            let Some(set) = self.sets.get(k) else {
                return false;
            };
            for &e in set {
                if std::mem::replace(&mut seen[e], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|b| b)
    }
}

/// First exact cover in lexicographic order of set indices.
pub fn solve_x3c_bruteforce(x3c: &X3CInstance, max_candidates: u64) -> Result<Option<Vec<usize>>> {
    let candidates = binomial(x3c.s() as u64, x3c.r() as u64);
    if candidates > max_candidates {
        return Err(Error::Budget(format!("{candidates} candidate covers (limit {max_candidates})")));
    }
    Ok((0..x3c.s()).combinations(x3c.r()).find(|c| x3c.is_exact_cover(c)))
}

/// Vertex cover: graph `H = (W, E)` and a target size `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VCInstance {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub k: usize,
}

impl VCInstance {
    pub fn new(vertices: usize, edges: Vec<[usize; 2]>, k: usize) -> Result<Self> {
        let vc = VCInstance { vertices, edges, k };
        vc.validate()?;
        Ok(vc)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if self.k == 0 || self.k > self.vertices {
            return bad(format!("cover size {} outside 1..={}", self.k, self.vertices));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &[a, b] in &self.edges {
            if a >= self.vertices || b >= self.vertices || a == b {
                return bad(format!("edge ({a},{b}) is out of range or a loop"));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return bad(format!("duplicate edge ({a},{b})"));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: VCInstance = serde_json::from_str(text)?;
        raw.validate()?;
        Ok(raw)
    }

    pub fn degree(&self, w: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&w)).count()
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        self.edges.iter().all(|e| chosen.contains(&e[0]) || chosen.contains(&e[1]))
    }
}

/// First vertex cover of size exactly `k`, in lexicographic order.
pub fn solve_vc_bruteforce(vc: &VCInstance, max_candidates: u64) -> Result<Option<Vec<usize>>> {
    let candidates = binomial(vc.vertices as u64, vc.k as u64);
    if candidates > max_candidates {
        return Err(Error::Budget(format!("{candidates} candidate covers (limit {max_candidates})")));
    }
    Ok((0..vc.vertices).combinations(vc.k).find(|c| vc.is_cover(c)))
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}
