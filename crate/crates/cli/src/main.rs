use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use connalloc::enumerate::{enumerate_allocations, enumerate_connected_partitions, enumerate_connected_subsets};
use connalloc::io::{parse_allocation, parse_instance, RawAllocation};
use connalloc::oracle::{
    exists_po_and_ef1, exists_po_and_mms, fairness_report, max_welfare_allocation, mms_profile_bruteforce,
    SearchStats,
};
use connalloc::poly::{moving_knife, mms_profile_path, po_path_additive, po_star_additive};
use connalloc::reductions::{
    build_vc_gadget, build_x3c_gadget, solve_vc_bruteforce, solve_vc_via_po, solve_x3c_bruteforce,
    solve_x3c_via_po, GadgetKind, VCInstance, X3CInstance,
};
use connalloc::value::{display, to_json};
use connalloc::{Allocation, Budget, Error, Instance, MmsProfile};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

#[derive(Parser)]
#[command(name = "connalloc", version, about = "Connected allocations of indivisible items on a graph")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Largest item count any exhaustive search may touch.
    #[arg(long, global = true)]
    budget_items: Option<usize>,
    /// Largest agent count any exhaustive search may touch.
    #[arg(long, global = true)]
    budget_agents: Option<usize>,
    /// Search nodes a single oracle call may visit.
    #[arg(long, global = true)]
    budget_steps: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include per-step traces where the algorithm has one.
    #[arg(long, global = true)]
    trace: bool,
    /// Seed for random instance generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    PathPo,
    StarPo,
    MovingKnife,
    BruteWelfare,
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    Po,
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an allocation with one of the solvers and report on it.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum)]
        algo: Algo,
        /// Run the moving knife even on nested intervals.
        #[arg(long)]
        force: bool,
        /// Skip the fairness report (it needs the exhaustive oracle).
        #[arg(long)]
        no_report: bool,
    },
    /// Report Pareto optimality, EF1 and MMS of a given allocation.
    Check { instance: PathBuf, allocation: PathBuf },
    /// Search for an allocation with the requested properties.
    Exists {
        instance: PathBuf,
        #[arg(long)]
        po: bool,
        #[arg(long)]
        ef1: bool,
        #[arg(long)]
        mms: bool,
    },
    /// Maximin share of every agent.
    Mms {
        instance: PathBuf,
        /// Also run partition enumeration on paths and compare.
        #[arg(long)]
        both: bool,
    },
    /// List or count connected subsets, partitions or allocations.
    Enumerate {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = What::Allocations)]
        what: What,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Exact cover by 3-sets.
    X3c {
        #[command(subcommand)]
        command: X3cCommand,
    },
    /// Vertex cover.
    Vc {
        #[command(subcommand)]
        command: VcCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Subsets,
    Partitions,
    Allocations,
}

#[derive(Subcommand)]
enum X3cCommand {
    /// Build an allocation instance from an exact-cover instance.
    Gen {
        input: PathBuf,
        #[arg(long)]
        kind: String,
    },
    /// Decide an exact-cover instance.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Po)]
        via: Via,
        #[arg(long, default_value = "forest")]
        kind: String,
    },
    /// Random instance with 3r elements and s distinct sets.
    Random {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
    },
}

#[derive(Subcommand)]
enum VcCommand {
    /// Build the star instance from a vertex-cover instance.
    GenStar { input: PathBuf },
    /// Decide a vertex-cover instance.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Po)]
        via: Via,
    },
}

const BRUTE_CANDIDATES: u64 = 50_000_000;

impl RunConfig {
    fn budget(&self) -> Budget {
        self.budget_for(None)
    }

    /// Budget from the flags; unset limits fall back to `fit` when given, else to the defaults.
    fn budget_for(&self, fit: Option<&Instance>) -> Budget {
        let mut b = Budget::default();
        if let Some(inst) = fit {
            b = b.with_items(inst.item_count()).with_agents(inst.agent_count());
        }
        if let Some(items) = self.budget_items {
            b = b.with_items(items);
        }
        if let Some(agents) = self.budget_agents {
            b = b.with_agents(agents);
        }
        if let Some(steps) = self.budget_steps {
            b = b.with_steps(steps);
        }
        b
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    Ok(parse_instance(&read(path)?)?)
}

fn alloc_json(a: &Allocation) -> Json {
    serde_json::to_value(RawAllocation::from(a)).expect("allocations serialize")
}

fn bundles_table(inst: &Instance, a: &Allocation) -> String {
    let mut out = String::new();
    for (i, b) in a.bundles().iter().enumerate() {
        let labels: Vec<&str> = b.items().iter().map(|&v| inst.graph().label(v)).collect();
        out.push_str(&format!("{:<12} {{{}}}\n", inst.agent_name(i), labels.join(", ")));
    }
    out
}

fn stats_json(s: SearchStats) -> Json {
    json!({"scanned": s.scanned, "steps": s.steps})
}

fn emit(cfg: &RunConfig, value: Json, table: impl FnOnce() -> String) {
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&value).expect("json serializes") + "\n",
        Format::Table => table(),
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn cmd_solve(cfg: &RunConfig, path: &Path, algo: Algo, force: bool, no_report: bool) -> Result<()> {
    let inst = load_instance(path)?;
    let budget = cfg.budget();
    let (alloc, trace, extra) = match algo {
        Algo::PathPo => {
            let a = po_path_additive(&inst)?;
            (a, None, json!({}))
        }
        Algo::StarPo => {
            let out = po_star_additive(&inst)?;
            (out.allocation, None, json!({"center_agent": out.center_agent, "welfare": to_json(out.welfare)}))
        }
        Algo::MovingKnife => {
            let out = moving_knife(&inst, force)?;
            (out.allocation, Some(serde_json::to_value(&out.trace)?), json!({}))
        }
        Algo::BruteWelfare => {
            let out = max_welfare_allocation(&inst, &budget)?;
            (out.allocation, None, json!({"welfare": to_json(out.welfare), "search": stats_json(out.stats)}))
        }
    };
    let report = if no_report { None } else { Some(fairness_report(&inst, &alloc, &budget)?) };
    let mut value = json!({
        "allocation": alloc_json(&alloc),
        "report": report.as_ref().map(|r| r.to_json()),
    });
    if let (Json::Object(map), Json::Object(more)) = (&mut value, extra) {
        map.extend(more);
    }
    if cfg.trace {
        let steps = trace.unwrap_or_else(|| {
            alloc.bundles().iter().enumerate().map(|(i, b)| json!({"agent": i, "bundle": b.items()})).collect()
        });
        value["trace"] = steps;
    }
    emit(cfg, value, || {
        let mut out = bundles_table(&inst, &alloc);
        if let Some(r) = &report {
            out.push_str(&r.to_table(&inst));
        }
        out
    });
    Ok(())
}

fn cmd_check(cfg: &RunConfig, inst_path: &Path, alloc_path: &Path) -> Result<()> {
    let inst = load_instance(inst_path)?;
    let alloc = parse_allocation(&read(alloc_path)?)?;
    inst.validate_allocation(&alloc)?;
    let report = fairness_report(&inst, &alloc, &cfg.budget())?;
    emit(cfg, report.to_json(), || report.to_table(&inst));
    Ok(())
}

fn cmd_exists(cfg: &RunConfig, path: &Path, po: bool, ef1: bool, mms: bool) -> Result<()> {
    let inst = load_instance(path)?;
    let budget = cfg.budget();
    let out = match (po, ef1, mms) {
        (true, true, false) => exists_po_and_ef1(&inst, &budget)?,
        (true, false, true) => exists_po_and_mms(&inst, &budget)?,
        _ => return Err(Error::Precondition("choose --po together with exactly one of --ef1, --mms".into()).into()),
    };
    let value = json!({
        "result": if out.witness.is_some() { "FOUND" } else { "NONE" },
        "witness": out.witness.as_ref().map(alloc_json),
        "search": stats_json(out.stats),
    });
    emit(cfg, value, || match &out.witness {
        Some(w) => format!("FOUND\n{}scanned {}\n", bundles_table(&inst, w), out.stats.scanned),
        None => format!("NONE\nscanned {}\n", out.stats.scanned),
    });
    Ok(())
}

fn profile_json(p: &MmsProfile) -> Json {
    json!({
        "values": p.values.iter().map(|&v| to_json(v)).collect::<Vec<_>>(),
        "method": p.method,
        "degenerate": p.degenerate,
    })
}

fn cmd_mms(cfg: &RunConfig, path: &Path, both: bool) -> Result<()> {
    let inst = load_instance(path)?;
    let budget = cfg.budget();
    let poly = if inst.graph().is_path() && inst.all_additive() { Some(mms_profile_path(&inst)?) } else { None };
    let brute = if poly.is_none() || both { Some(mms_profile_bruteforce(&inst, &budget)?) } else { None };
    let main = poly.as_ref().or(brute.as_ref()).expect("one method ran");
    let agree = match (&poly, &brute) {
        (Some(p), Some(b)) => Some(p.values == b.values),
        _ => None,
    };
    let mut value = profile_json(main);
    value["agents"] = json!(inst.agent_names());
    if let Some(a) = agree {
        value["agreement"] = json!(a);
    }
    emit(cfg, value, || {
        let mut out = String::new();
        for (i, v) in main.values.iter().enumerate() {
            out.push_str(&format!("{:<12} {}\n", inst.agent_name(i), display(*v)));
        }
        out.push_str(&format!("method       {:?}\n", main.method).to_lowercase());
        if let Some(a) = agree {
            out.push_str(&format!("agreement    {a}\n"));
        }
        out
    });
    if agree == Some(false) {
        return Err(Error::Internal("polynomial and brute-force shares differ".into()).into());
    }
    Ok(())
}

fn cmd_enumerate(cfg: &RunConfig, path: &Path, what: What, count_only: bool) -> Result<()> {
    let inst = load_instance(path)?;
    let budget = cfg.budget();
    let lists: Vec<Json> = match what {
        What::Subsets => enumerate_connected_subsets(inst.graph(), &budget)?
            .bundles()
            .map(|b| json!(b.items()))
            .collect(),
        What::Partitions => enumerate_connected_partitions(inst.graph(), inst.agent_count(), &budget)?
            .map(|p| json!(p.iter().map(|b| b.items().to_vec()).collect::<Vec<_>>()))
            .collect(),
        What::Allocations => enumerate_allocations(&inst, &budget)?.map(|a| alloc_json(&a)["bundles"].clone()).collect(),
    };
    let n = lists.len();
    let value = if count_only { json!({"count": n}) } else { json!({"count": n, "items": lists}) };
    emit(cfg, value, || {
        let mut out = String::new();
        if !count_only {
            for l in &lists {
                out.push_str(&format!("{l}\n"));
            }
        }
        out.push_str(&format!("count {n}\n"));
        out
    });
    Ok(())
}

fn cover_json(cover: &Option<Vec<usize>>) -> Json {
    json!({"result": if cover.is_some() { "YES" } else { "NO" }, "cover": cover})
}

fn cover_table(cover: &Option<Vec<usize>>) -> String {
    match cover {
        Some(c) => format!("YES {c:?}\n"),
        None => "NO\n".to_string(),
    }
}

fn cmd_x3c(cfg: &RunConfig, command: &X3cCommand) -> Result<()> {
    match command {
        X3cCommand::Gen { input, kind } => {
            let x3c = X3CInstance::from_json(&read(input)?)?;
            let g = build_x3c_gadget(&x3c, kind.parse()?)?;
            emit(cfg, g.to_json(), || bundles_free_summary(&g.instance));
        }
        X3cCommand::Solve { input, via, kind } => {
            let x3c = X3CInstance::from_json(&read(input)?)?;
            match via {
                Via::Brute => {
                    let cover = solve_x3c_bruteforce(&x3c, BRUTE_CANDIDATES)?;
                    emit(cfg, cover_json(&cover), || cover_table(&cover));
                }
                Via::Po => {
                    let kind: GadgetKind = kind.parse()?;
                    let g = build_x3c_gadget(&x3c, kind)?;
                    let out = solve_x3c_via_po(&x3c, kind, &cfg.budget_for(Some(&g.instance)))?;
                    let mut value = cover_json(&out.cover);
                    value["kind"] = json!(kind);
                    value["allocation"] = json!(out.allocation.as_ref().map(alloc_json));
                    value["search"] = stats_json(out.stats);
                    emit(cfg, value, || cover_table(&out.cover));
                }
            }
        }
        X3cCommand::Random { r, s } => {
            let x3c = random_x3c(*r, *s, cfg.seed)?;
            emit(cfg, serde_json::to_value(&x3c)?, || format!("{:?}\n", x3c.sets));
        }
    }
    Ok(())
}

fn bundles_free_summary(inst: &Instance) -> String {
    format!(
        "{} items, {} agents, {} topology, max degree {}\n",
        inst.item_count(),
        inst.agent_count(),
        inst.graph().topology(),
        inst.graph().max_degree()
    )
}

fn random_x3c(r: usize, s: usize, seed: u64) -> Result<X3CInstance> {
    let m = 3 * r;
    let distinct = if m >= 3 { m * (m - 1) * (m - 2) / 6 } else { 0 };
    if s > distinct {
        return Err(Error::Precondition(format!("only {distinct} distinct 3-sets over {m} elements")).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets: Vec<[usize; 3]> = Vec::new();
    while sets.len() < s {
        let mut t = sample(&mut rng, m, 3).into_vec();
        t.sort_unstable();
        let t = [t[0], t[1], t[2]];
        if !sets.contains(&t) {
            sets.push(t);
        }
    }
    Ok(X3CInstance::new(m, sets)?)
}

fn cmd_vc(cfg: &RunConfig, command: &VcCommand) -> Result<()> {
    match command {
        VcCommand::GenStar { input } => {
            let vc = VCInstance::from_json(&read(input)?)?;
            let g = build_vc_gadget(&vc)?;
            emit(cfg, g.to_json(), || bundles_free_summary(&g.instance));
        }
        VcCommand::Solve { input, via } => {
            let vc = VCInstance::from_json(&read(input)?)?;
            match via {
                Via::Brute => {
                    let cover = solve_vc_bruteforce(&vc, BRUTE_CANDIDATES)?;
                    emit(cfg, cover_json(&cover), || cover_table(&cover));
                }
                Via::Po => {
                    let g = build_vc_gadget(&vc)?;
                    let out = solve_vc_via_po(&vc, &cfg.budget_for(Some(&g.instance)))?;
                    let mut value = cover_json(&out.cover);
                    value["allocation"] = json!(out.allocation.as_ref().map(alloc_json));
                    value["search"] = stats_json(out.stats);
                    emit(cfg, value, || cover_table(&out.cover));
                }
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Solve { instance, algo, force, no_report } => cmd_solve(cfg, instance, *algo, *force, *no_report),
        Command::Check { instance, allocation } => cmd_check(cfg, instance, allocation),
        Command::Exists { instance, po, ef1, mms } => cmd_exists(cfg, instance, *po, *ef1, *mms),
        Command::Mms { instance, both } => cmd_mms(cfg, instance, *both),
        Command::Enumerate { instance, what, count } => cmd_enumerate(cfg, instance, *what, *count),
        Command::X3c { command } => cmd_x3c(cfg, command),
        Command::Vc { command } => cmd_vc(cfg, command),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<Error>().map_or(2, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
