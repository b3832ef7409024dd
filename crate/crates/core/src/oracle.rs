//! Brute-force ground truth over all connected allocations.

use serde_json::json;

use crate::budget::Budget;
use crate::enumerate::{
    bundle_of, enumerate_allocations, enumerate_connected_partitions, mask_of, SearchSpace, Visitor,
};
use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::io::RawAllocation;
use crate::model::{Allocation, Bundle, Instance, MmsMethod, MmsProfile};
use crate::value::{display, int, to_json, Scale, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Complete allocations looked at.
    pub scanned: u64,
    /// Search-tree nodes visited.
    pub steps: u64,
}

impl SearchStats {
    fn add(&mut self, other: SearchStats) {
        self.scanned += other.scanned;
        self.steps += other.steps;
    }
}

#[derive(Clone, Debug)]
pub struct WelfareOutcome {
    pub allocation: Allocation,
    pub welfare: Value,
    pub stats: SearchStats,
}

/// Scaled integer value of every connected subset for every agent.
struct Scores {
    scale: Scale,
    vals: Vec<Vec<i64>>,
    global_max: Vec<i64>,
    monotone: Vec<bool>,
    /// Per item, the best scaled value among agents `k..`; `None` if one of them is not additive.
    item_max_from: Vec<Option<Vec<i64>>>,
}

impl Scores {
    fn new(instance: &Instance, space: &SearchSpace) -> Result<Self> {
        let n = instance.agent_count();
        let m = instance.item_count();
        let bundles: Vec<Bundle> = space.table.masks().iter().map(|&s| bundle_of(s)).collect();
        let mut raw = Vec::with_capacity(n);
        for i in 0..n {
            let v = instance.valuation(i);
            raw.push(bundles.iter().map(|b| v.value(b)).collect::<Result<Vec<Value>>>()?);
        }
        let scale = Scale::for_values(raw.iter().flatten())?;
        let vals: Vec<Vec<i64>> = raw
            .iter()
            .map(|row| row.iter().map(|&x| scale.apply(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let global_max = vals.iter().map(|row| row.iter().copied().max().unwrap_or(0).max(0)).collect();
        let monotone = (0..n)
            .map(|i| {
                instance.valuation(i).is_additive() || is_monotone(space, &vals[i])
            })
            .collect();
        let mut item_max_from = vec![Some(vec![0; m]); n + 1];
        for k in (0..n).rev() {
            item_max_from[k] = match (&item_max_from[k + 1], instance.valuation(k).item_values(m)) {
                (Some(next), Some(items)) => {
                    let mut row = next.clone();
                    for (v, x) in items.into_iter().enumerate() {
                        row[v] = row[v].max(scale.apply(x)?);
                    }
                    Some(row)
                }
                _ => None,
            };
        }
        Ok(Scores { scale, vals, global_max, monotone, item_max_from })
    }

    fn utilities(&self, space: &SearchSpace, alloc: &Allocation) -> Result<Vec<i64>> {
        alloc
            .bundles()
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let id = space.table.id_of(mask_of(b.items())).ok_or_else(|| {
                    Error::InvalidAllocation(format!("bundle of agent {i} is not connected"))
                })?;
                Ok(self.vals[i][id])
            })
            .collect()
    }

    /// Upper bound on what agents `k..` can still collect from `rest`.
    fn bound(&self, space: &SearchSpace, k: usize, rest: u64) -> i64 {
        if k >= self.vals.len() || rest == 0 {
            return 0;
        }
        let comps: Vec<usize> = space
            .uni
            .components(rest)
            .into_iter()
            .map(|c| space.table.id_of(c).expect("components are connected"))
            .collect();
        let by_agent: i64 = (k..self.vals.len())
            .map(|j| {
                if self.monotone[j] {
                    comps.iter().map(|&c| self.vals[j][c]).max().unwrap_or(0).max(0)
                } else {
                    self.global_max[j]
                }
            })
            .sum();
        match &self.item_max_from[k] {
            Some(row) => {
                let mut by_item = 0;
                let mut r = rest;
                while r != 0 {
                    by_item += row[r.trailing_zeros() as usize];
                    r &= r - 1;
                }
                by_item.min(by_agent)
            }
            None => by_agent,
        }
    }
}

/// Whether adding one adjacent item never lowers the value.
fn is_monotone(space: &SearchSpace, vals: &[i64]) -> bool {
    space.table.masks().iter().enumerate().all(|(id, &s)| {
        let mut frontier = if s == 0 { space.uni.full() } else { space.uni.neighbors_of(s) & !s };
        while frontier != 0 {
            let w = frontier & frontier.wrapping_neg();
            frontier ^= w;
            if vals[space.table.id_of(s | w).expect("connected")] < vals[id] {
                return false;
            }
        }
        true
    })
}

struct WelfareSearch<'a> {
    scores: &'a Scores,
    space: &'a SearchSpace,
    floors: Option<&'a [i64]>,
    cur: i64,
    best: Option<i64>,
    seed: i64,
    best_choice: Vec<usize>,
}

impl Visitor for WelfareSearch<'_> {
    fn enter(&mut self, k: usize, id: usize, rest: u64) -> bool {
        let v = self.scores.vals[k][id];
        if self.floors.is_some_and(|f| v < f[k]) {
            return false;
        }
        let ub = self.cur + v + self.scores.bound(self.space, k + 1, rest);
        let keep = match self.best {
            Some(b) => ub > b,
            None => ub >= self.seed,
        };
        if keep {
            self.cur += v;
        }
        keep
    }

    fn exit(&mut self, k: usize, id: usize) {
        self.cur -= self.scores.vals[k][id];
    }

    fn leaf(&mut self, choice: &[usize]) -> bool {
        let better = match self.best {
            Some(b) => self.cur > b,
            None => self.cur >= self.seed,
        };
        if better {
            self.best = Some(self.cur);
            self.best_choice = choice.to_vec();
        }
        false
    }
}

struct ImprovementSearch<'a> {
    scores: &'a Scores,
    base: &'a [i64],
    found: Option<Vec<usize>>,
}

impl Visitor for ImprovementSearch<'_> {
    fn enter(&mut self, k: usize, id: usize, _rest: u64) -> bool {
        self.scores.vals[k][id] >= self.base[k]
    }

    fn exit(&mut self, _: usize, _: usize) {}

    fn leaf(&mut self, choice: &[usize]) -> bool {
        let strict = choice.iter().enumerate().any(|(i, &id)| self.scores.vals[i][id] > self.base[i]);
        if strict {
            self.found = Some(choice.to_vec());
        }
        strict
    }
}

/// Precomputed search state for repeated oracle calls on one instance.
pub struct Oracle<'a> {
    instance: &'a Instance,
    space: SearchSpace,
    scores: Scores,
    budget: Budget,
    max_welfare: Option<i64>,
    pub stats: SearchStats,
}

impl<'a> Oracle<'a> {
    pub fn new(instance: &'a Instance, budget: &Budget) -> Result<Self> {
        let space = SearchSpace::new(instance, budget)?;
        let scores = Scores::new(instance, &space)?;
        Ok(Oracle {
            instance,
            space,
            scores,
            budget: budget.clone(),
            max_welfare: None,
            stats: SearchStats::default(),
        })
    }

    pub fn instance(&self) -> &Instance {
        self.instance
    }

    fn walk<V: Visitor>(space: &SearchSpace, stats: &mut SearchStats, visitor: &mut V) -> Result<SearchStats> {
        let result = space.walk(visitor);
        let s = SearchStats { scanned: space.leaves.get(), steps: space.steps.get() };
        stats.add(s);
        result.map(|_| s)
    }

    fn welfare_search(&mut self, floors: Option<&[i64]>, seed: Option<i64>) -> Result<Option<WelfareOutcome>> {
        let mut search = WelfareSearch {
            scores: &self.scores,
            space: &self.space,
            floors,
            cur: 0,
            best: None,
            seed: seed.unwrap_or(i64::MIN),
            best_choice: Vec::new(),
        };
        let stats = Self::walk(&self.space, &mut self.stats, &mut search)?;
        Ok(search.best.map(|w| WelfareOutcome {
            allocation: self.space.allocation(&search.best_choice),
            welfare: self.scores.scale.unapply(w),
            stats,
        }))
    }

    /// Welfare-maximizing allocation; ties go to the first in enumeration order.
    pub fn max_welfare(&mut self) -> Result<WelfareOutcome> {
        let out = self
            .welfare_search(None, None)?
            .ok_or_else(|| Error::Internal("an instance always has an allocation".into()))?;
        self.max_welfare = Some(self.scores.scale.apply(out.welfare)?);
        Ok(out)
    }

    /// Best welfare among allocations giving every agent at least its floor.
    /// Such an allocation is Pareto-optimal whenever floors are preserved by
    /// Pareto improvements, as with maximin shares.
    pub fn max_welfare_with_floors(&mut self, floors: &[Value]) -> Result<Option<WelfareOutcome>> {
        if floors.len() != self.instance.agent_count() {
            return Err(Error::Precondition("one floor per agent required".into()));
        }
        let scaled = floors
            .iter()
            .map(|&f| {
                let x = f * Value::from_integer(self.scores.scale.denom);
                Ok(x.ceil().to_integer())
            })
            .collect::<Result<Vec<i64>>>()?;
        self.welfare_search(Some(&scaled), None)
    }

    /// Same as [`Oracle::max_welfare`] but starting from a known lower bound on
    /// the optimum; the result is identical, the search only prunes earlier.
    pub fn max_welfare_seeded(&mut self, lower_bound: Value) -> Result<WelfareOutcome> {
        let seed = self.scores.scale.apply(lower_bound)?;
        let out = self
            .welfare_search(None, Some(seed))?
            .ok_or_else(|| Error::Internal("seed exceeds the optimum".into()))?;
        self.max_welfare = Some(self.scores.scale.apply(out.welfare)?);
        Ok(out)
    }

    pub fn find_pareto_improvement(&mut self, alloc: &Allocation) -> Result<Option<Allocation>> {
        self.instance.validate_allocation(alloc)?;
        let base = self.scores.utilities(&self.space, alloc)?;
        if let Some(w) = self.max_welfare {
            if base.iter().sum::<i64>() == w {
                return Ok(None);
            }
        }
        let mut search = ImprovementSearch { scores: &self.scores, base: &base, found: None };
        Self::walk(&self.space, &mut self.stats, &mut search)?;
        Ok(search.found.map(|c| self.space.allocation(&c)))
    }

    pub fn is_pareto_optimal(&mut self, alloc: &Allocation) -> Result<bool> {
        Ok(self.find_pareto_improvement(alloc)?.is_none())
    }

    pub fn complete_to_pareto_optimum(&mut self, alloc: &Allocation) -> Result<Allocation> {
        let mut cur = alloc.clone();
        let mut rounds = 0u64;
        while let Some(better) = self.find_pareto_improvement(&cur)? {
            cur = better;
            rounds += 1;
            if rounds > self.budget.max_steps {
                return Err(Error::Budget("too many improvement rounds".into()));
            }
        }
        Ok(cur)
    }

    /// Welfare of the optimum, computing it on first use.
    pub fn optimum_welfare(&mut self) -> Result<Value> {
        if self.max_welfare.is_none() {
            self.max_welfare()?;
        }
        Ok(self.scores.scale.unapply(self.max_welfare.expect("just computed")))
    }
}

pub fn max_welfare_allocation(instance: &Instance, budget: &Budget) -> Result<WelfareOutcome> {
    Oracle::new(instance, budget)?.max_welfare()
}

pub fn find_pareto_improvement(instance: &Instance, alloc: &Allocation, budget: &Budget) -> Result<Option<Allocation>> {
    Oracle::new(instance, budget)?.find_pareto_improvement(alloc)
}

pub fn is_pareto_optimal(instance: &Instance, alloc: &Allocation, budget: &Budget) -> Result<bool> {
    Oracle::new(instance, budget)?.is_pareto_optimal(alloc)
}

pub fn complete_to_pareto_optimum(instance: &Instance, alloc: &Allocation, budget: &Budget) -> Result<Allocation> {
    Oracle::new(instance, budget)?.complete_to_pareto_optimum(alloc)
}

/// Pareto optimality certified without search: with additive valuations an
/// allocation giving every item to an agent valuing it most has the largest
/// possible welfare. `false` means "not certified", not "not optimal".
pub fn certify_po_by_item_maxima(instance: &Instance, alloc: &Allocation) -> Result<bool> {
    instance.validate_allocation(alloc)?;
    let m = instance.item_count();
    let mut bound = int(0);
    for v in 0..m {
        let mut best = int(0);
        for val in instance.valuations() {
            let Some(items) = val.item_values(m) else {
                return Ok(false);
            };
            best = best.max(items[v]);
        }
        bound += best;
    }
    Ok(instance.welfare(alloc)? == bound)
}

/// An ordered pair `(i, j)` where agent `i` envies `j` beyond any single outer item.
pub fn ef1_violation(instance: &Instance, alloc: &Allocation) -> Result<Option<(usize, usize)>> {
    instance.validate_allocation(alloc)?;
    let graph = instance.graph();
    for i in 0..instance.agent_count() {
        let own = instance.value(i, alloc.bundle(i))?;
        for j in 0..instance.agent_count() {
            let other = alloc.bundle(j);
            if i == j || other.is_empty() || own >= instance.value(i, other)? {
                continue;
            }
            let mut fixed = false;
            for v in other.outer_items(graph) {
                if own >= instance.value(i, &other.without(v))? {
                    fixed = true;
                    break;
                }
            }
            if !fixed {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_ef1(instance: &Instance, alloc: &Allocation) -> Result<bool> {
    Ok(ef1_violation(instance, alloc)?.is_none())
}

pub fn mms_profile_bruteforce(instance: &Instance, budget: &Budget) -> Result<MmsProfile> {
    let n = instance.agent_count();
    let m = instance.item_count();
    let degenerate = n > m;
    let mut values = vec![None::<Value>; n];
    for part in enumerate_connected_partitions(instance.graph(), n, budget)? {
        for (i, best) in values.iter_mut().enumerate() {
            let mut worst = None::<Value>;
            for b in &part {
                let v = instance.value(i, b)?;
                worst = Some(worst.map_or(v, |w| w.min(v)));
            }
            let worst = worst.expect("partitions have blocks");
            *best = Some(best.map_or(worst, |b| b.max(worst)));
        }
    }
    Ok(MmsProfile {
        values: values.into_iter().map(|v| v.unwrap_or_else(|| int(0))).collect(),
        method: MmsMethod::Brute,
        degenerate,
        instance_fingerprint: instance.fingerprint(),
    })
}

/// Maximin shares by the fastest exact method: the polynomial routine on
/// additive paths, partition enumeration otherwise.
pub fn mms_profile(instance: &Instance, budget: &Budget) -> Result<MmsProfile> {
    if instance.graph().topology() == Topology::Path && instance.all_additive() {
        crate::poly::mms_profile_path(instance)
    } else {
        mms_profile_bruteforce(instance, budget)
    }
}

pub fn is_mms(instance: &Instance, alloc: &Allocation, profile: &MmsProfile) -> Result<bool> {
    profile.check_for(instance)?;
    let u = instance.utilities(alloc)?;
    Ok(u.iter().zip(&profile.values).all(|(a, b)| a >= b))
}

/// Largest α with every agent getting at least α times its share, capped at 1.
/// Agents with a zero share do not constrain α.
pub fn alpha_mms_level(instance: &Instance, alloc: &Allocation, profile: &MmsProfile) -> Result<Value> {
    profile.check_for(instance)?;
    let u = instance.utilities(alloc)?;
    let mut alpha = int(1);
    for (ui, mi) in u.iter().zip(&profile.values) {
        if *mi > int(0) {
            alpha = alpha.min(ui / mi);
        }
    }
    Ok(alpha)
}

#[derive(Clone, Debug)]
pub struct ExistsOutcome {
    pub witness: Option<Allocation>,
    pub stats: SearchStats,
}

/// First allocation in enumeration order that is both Pareto-optimal and EF1.
pub fn exists_po_and_ef1(instance: &Instance, budget: &Budget) -> Result<ExistsOutcome> {
    let mut oracle = Oracle::new(instance, budget)?;
    oracle.optimum_welfare()?;
    let mut scanned = 0;
    for alloc in enumerate_allocations(instance, budget)? {
        scanned += 1;
        if is_ef1(instance, &alloc)? && oracle.is_pareto_optimal(&alloc)? {
            return Ok(ExistsOutcome {
                witness: Some(alloc),
                stats: SearchStats { scanned, steps: oracle.stats.steps },
            });
        }
    }
    Ok(ExistsOutcome { witness: None, stats: SearchStats { scanned, steps: oracle.stats.steps } })
}

/// First allocation in enumeration order that is both Pareto-optimal and MMS.
/// On trees one always exists; not finding one there is reported as an internal error.
pub fn exists_po_and_mms(instance: &Instance, budget: &Budget) -> Result<ExistsOutcome> {
    let profile = mms_profile(instance, budget)?;
    let mut oracle = Oracle::new(instance, budget)?;
    // The best MMS allocation is Pareto-optimal, so reaching its welfare settles optimality.
    let best_mms = oracle.max_welfare_with_floors(&profile.values)?;
    let mut scanned = 0;
    for alloc in enumerate_allocations(instance, budget)? {
        scanned += 1;
        if !is_mms(instance, &alloc, &profile)? {
            continue;
        }
        let po = match &best_mms {
            Some(b) if instance.welfare(&alloc)? == b.welfare => true,
            _ => oracle.is_pareto_optimal(&alloc)?,
        };
        if po {
            return Ok(ExistsOutcome {
                witness: Some(alloc),
                stats: SearchStats { scanned, steps: oracle.stats.steps },
            });
        }
    }
    if matches!(instance.graph().topology(), Topology::Path | Topology::Star | Topology::Tree) {
        return Err(Error::Internal("no Pareto-optimal MMS allocation found on a tree".into()));
    }
    Ok(ExistsOutcome { witness: None, stats: SearchStats { scanned, steps: oracle.stats.steps } })
}

#[derive(Clone, Debug)]
pub struct FairnessReport {
    pub utilities: Vec<Value>,
    pub welfare: Value,
    pub is_po: bool,
    pub pareto_improvement: Option<Allocation>,
    pub is_ef1: bool,
    pub envy_pair: Option<(usize, usize)>,
    pub mms: MmsProfile,
    pub is_mms: bool,
    pub alpha_mms: Value,
    pub stats: SearchStats,
}

pub fn fairness_report(instance: &Instance, alloc: &Allocation, budget: &Budget) -> Result<FairnessReport> {
    instance.validate_allocation(alloc)?;
    let mut oracle = Oracle::new(instance, budget)?;
    let pareto_improvement = oracle.find_pareto_improvement(alloc)?;
    let envy_pair = ef1_violation(instance, alloc)?;
    let mms = mms_profile(instance, budget)?;
    Ok(FairnessReport {
        utilities: instance.utilities(alloc)?,
        welfare: instance.welfare(alloc)?,
        is_po: pareto_improvement.is_none(),
        pareto_improvement,
        is_ef1: envy_pair.is_none(),
        envy_pair,
        is_mms: is_mms(instance, alloc, &mms)?,
        alpha_mms: alpha_mms_level(instance, alloc, &mms)?,
        mms,
        stats: oracle.stats,
    })
}

impl FairnessReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "utilities": self.utilities.iter().map(|&v| to_json(v)).collect::<Vec<_>>(),
            "welfare": to_json(self.welfare),
            "is_po": self.is_po,
            "pareto_improvement": self.pareto_improvement.as_ref().map(RawAllocation::from),
            "is_ef1": self.is_ef1,
            "envy_pair": self.envy_pair.map(|(i, j)| [i, j]),
            "mms": self.mms.values.iter().map(|&v| to_json(v)).collect::<Vec<_>>(),
            "mms_method": self.mms.method,
            "mms_degenerate": self.mms.degenerate,
            "is_mms": self.is_mms,
            "alpha_mms": to_json(self.alpha_mms),
            "scanned": self.stats.scanned,
            "steps": self.stats.steps,
        })
    }

    pub fn to_table(&self, instance: &Instance) -> String {
        let mut out = String::new();
        for (i, u) in self.utilities.iter().enumerate() {
            out.push_str(&format!(
                "{:<12} utility {:>6}  mms {:>6}\n",
                instance.agent_name(i),
                display(*u),
                display(self.mms.values[i])
            ));
        }
        out.push_str(&format!("welfare     {}\n", display(self.welfare)));
        out.push_str(&format!("pareto      {}\n", self.is_po));
        if let Some(p) = &self.pareto_improvement {
            out.push_str(&format!("  improved by {:?}\n", RawAllocation::from(p).bundles));
        }
        out.push_str(&format!("ef1         {}\n", self.is_ef1));
        if let Some((i, j)) = self.envy_pair {
            out.push_str(&format!(
                "  {} envies {}\n",
                instance.agent_name(i),
                instance.agent_name(j)
            ));
        }
        out.push_str(&format!("mms         {} (alpha {})\n", self.is_mms, display(self.alpha_mms)));
        out.push_str(&format!("scanned     {}\n", self.stats.scanned));
        out
    }
}

/// Utility vector check used by tests and the CLI: does `b` weakly dominate `a`?
pub fn weakly_dominates(instance: &Instance, b: &Allocation, a: &Allocation) -> Result<bool> {
    let ua = instance.utilities(a)?;
    let ub = instance.utilities(b)?;
    Ok(ub.iter().zip(&ua).all(|(x, y)| x >= y))
}
