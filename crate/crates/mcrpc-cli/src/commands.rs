//! Implementations of the CLI subcommands.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use mcrpc::approx::solve_approx2;
use mcrpc::error::{Error, Result};
use mcrpc::exact::{evaluate_routing, solve_exact, SolveResult};
use mcrpc::fpt::solve_fpt;
use mcrpc::instances::{
    fixture, gen_partition_reduction, gen_random, instance_to_json, load_instance, Fixture,
    PartitionSpec, RoutingDoc,
};
use mcrpc::lp::{solve_lp32_with, LpConfig};
use mcrpc::rational::{format_rational, parse_rational, rational_to_f64, Rational};
use mcrpc::rng::SplitMix64;
use mcrpc::Instance;

use crate::report::{
    demand_label, rational_field, route_member_label, FptReport, LpReport, SolveReport,
    VerifyReport,
};
use crate::{Algo, BatchArgs, SolveArgs, VerifyArgs};

/// `--input` takes a file path or a bundled fixture name.
fn resolve_input(text: &str) -> Result<Instance> {
    let path = Path::new(text);
    if path.exists() {
        return load_instance(path);
    }
    if let Ok(which) = text.parse::<Fixture>() {
        return fixture(which);
    }
    Err(Error::Parse(format!(
        "{text}: not a readable file or a fixture name (fig2, fig3, fig5)"
    )))
}

fn write_or_print(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    let instance = resolve_input(&args.input)?;
    let mut lp_report = None;
    let mut fpt_report = None;
    let result: SolveResult = match args.algo {
        Algo::Exact => solve_exact(&instance)?,
        Algo::Approx2 => solve_approx2(&instance)?,
        Algo::Lp32 => {
            let config = LpConfig {
                cut_limit: args.cut_limit,
                dump_cuts: args.dump_cuts,
            };
            let lp = solve_lp32_with(&instance, &config)?;
            let (opt_f, opt_f_approx) = rational_field(&lp.opt_f);
            lp_report = Some(LpReport {
                opt_f,
                opt_f_approx,
                support: lp
                    .support
                    .iter()
                    .map(|&p| demand_label(&instance, p))
                    .collect(),
                support_weight: format_rational(&lp.support_weight),
                bound: format_rational(&lp.bound),
                cuts: lp.stats.cuts_added,
                lp_solves: lp.stats.lp_solves,
                pivots: lp.stats.pivots,
                cut_dump: args.dump_cuts.then_some(lp.stats.cut_dump),
            });
            SolveResult {
                routing: lp.routing,
                value: lp.value,
                witness: lp.witness,
            }
        }
        Algo::Fpt => {
            let fpt = solve_fpt(&instance)?;
            fpt_report = Some(FptReport {
                k: fpt.k,
                evaluated: fpt.evaluated,
                work_budget: instance.demand_count() as u64 * (1u64 << fpt.k),
            });
            fpt.result
        }
    };

    let (value, value_approx) = rational_field(&result.value);
    let report = SolveReport {
        algo: args.algo.name().to_string(),
        n: instance.n(),
        demands: instance.demand_count(),
        value,
        value_approx,
        sides: result.routing.to_string(),
        collisions: instance.collision_count(&result.routing)?,
        witness: result
            .witness
            .members
            .iter()
            .map(|&p| route_member_label(&instance, p, result.routing.side(p)))
            .collect(),
        lp: lp_report,
        fpt: fpt_report,
    };

    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report json"));
    } else {
        print!("{}", report.render_text());
    }
    if let Some(path) = &args.output {
        RoutingDoc::new(&instance, &result.routing, &result.value).save(path)?;
    }
    Ok(0)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let instance = resolve_input(&args.input)?;
    let doc = RoutingDoc::load(&args.routing)?;
    if doc.n != instance.n() {
        return Err(Error::Parse(format!(
            "routing file is for a ring with {} nodes, instance has {}",
            doc.n,
            instance.n()
        )));
    }
    let routing = doc.routing()?;
    let claimed = doc.claimed_value()?;
    let recomputed = evaluate_routing(&instance, &routing)?;
    let report = VerifyReport {
        sides: routing.to_string(),
        claimed: format_rational(&claimed),
        recomputed: format_rational(&recomputed.value),
        collisions: instance.collision_count(&routing)?,
        matches: claimed == recomputed.value,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report json"));
    } else {
        print!("{}", report.render_text());
    }
    Ok(if report.matches { 0 } else { 3 })
}

pub fn cmd_generate_partition(set: &[u64], output: Option<&PathBuf>) -> Result<i32> {
    let spec = PartitionSpec::new(set.to_vec())?;
    let instance = gen_partition_reduction(&spec);
    write_or_print(&instance_to_json(&instance), output)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_generate_random(
    n: u32,
    demands: usize,
    max_weight: u64,
    uniform: bool,
    seed: u64,
    output: Option<&PathBuf>,
) -> Result<i32> {
    let instance = gen_random(n, demands, max_weight, uniform, seed)?;
    write_or_print(&instance_to_json(&instance), output)?;
    Ok(0)
}

pub fn cmd_generate_fixture(name: &str, output: Option<&PathBuf>) -> Result<i32> {
    let instance = fixture(name.parse()?)?;
    write_or_print(&instance_to_json(&instance), output)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// Batch commands
// ---------------------------------------------------------------------------

struct TrialOutcome {
    seed: u64,
    instance: Instance,
    /// Algo name -> (value, wall clock seconds); absent when skipped.
    values: BTreeMap<&'static str, (Rational, f64)>,
    fpt_work: Option<(u64, u64)>,
}

/// Runs the selected algorithms over the seeded batch. Guards that trip
/// (enumeration size, non-uniform weights for the fixed-parameter solver)
/// mark the entry as skipped instead of failing the batch.
fn run_batch(args: &BatchArgs) -> Result<Vec<TrialOutcome>> {
    let mut master = SplitMix64::new(args.seed);
    let mut outcomes = Vec::with_capacity(args.trials);
    for _ in 0..args.trials {
        let seed = master.next_u64();
        let instance = gen_random(args.n, args.demands, args.max_weight, args.uniform, seed)?;
        let mut values = BTreeMap::new();
        let mut fpt_work = None;
        for algo in &args.algos {
            let started = Instant::now();
            let value = match algo {
                Algo::Exact => match solve_exact(&instance) {
                    Ok(result) => Some(result.value),
                    Err(Error::SizeLimit { .. }) => None,
                    Err(err) => return Err(err),
                },
                Algo::Approx2 => Some(solve_approx2(&instance)?.value),
                Algo::Lp32 => Some(solve_lp32_with(&instance, &LpConfig::default())?.value),
                Algo::Fpt => match solve_fpt(&instance) {
                    Ok(result) => {
                        let budget =
                            instance.demand_count() as u64 * (1u64 << result.k);
                        fpt_work = Some((result.evaluated, budget));
                        Some(result.result.value)
                    }
                    Err(Error::NonUniformWeights) | Err(Error::SizeLimit { .. }) => None,
                    Err(err) => return Err(err),
                },
            };
            if let Some(value) = value {
                values.insert(algo.name(), (value, started.elapsed().as_secs_f64()));
            }
        }
        outcomes.push(TrialOutcome {
            seed,
            instance,
            values,
            fpt_work,
        });
    }
    Ok(outcomes)
}

#[derive(Serialize)]
struct CompareTrialRow {
    trial: usize,
    seed: u64,
    n: u32,
    demands: usize,
    values: BTreeMap<&'static str, String>,
    ratios: BTreeMap<&'static str, String>,
}

#[derive(Serialize)]
struct CompareSummary {
    trials: usize,
    worst_ratios: BTreeMap<&'static str, String>,
    worst_ratios_approx: BTreeMap<&'static str, f64>,
    violations: usize,
    rows: Vec<CompareTrialRow>,
}

pub fn cmd_compare(args: &BatchArgs) -> Result<i32> {
    let outcomes = run_batch(args)?;
    let mut rows = Vec::new();
    let mut worst: BTreeMap<&'static str, Rational> = BTreeMap::new();
    let mut violations = 0;
    let two = parse_rational("2")?;
    let three_halves = parse_rational("3/2")?;

    for (trial, outcome) in outcomes.iter().enumerate() {
        let exact = outcome.values.get("exact").map(|(v, _)| v.clone());
        let mut values = BTreeMap::new();
        let mut ratios = BTreeMap::new();
        for (name, (value, _)) in &outcome.values {
            values.insert(*name, format_rational(value));
            if *name == "exact" {
                continue;
            }
            if let Some(exact) = &exact {
                let ratio = value / exact;
                let bound = match *name {
                    "approx2" => Some(&two),
                    "lp32" => Some(&three_halves),
                    _ => None,
                };
                if let Some(bound) = bound {
                    if ratio > *bound {
                        violations += 1;
                    }
                }
                let entry = worst.entry(name).or_insert_with(|| ratio.clone());
                if ratio > *entry {
                    *entry = ratio.clone();
                }
                ratios.insert(*name, format_rational(&ratio));
            }
        }
        rows.push(CompareTrialRow {
            trial,
            seed: outcome.seed,
            n: outcome.instance.n(),
            demands: outcome.instance.demand_count(),
            values,
            ratios,
        });
    }

    let summary = CompareSummary {
        trials: outcomes.len(),
        worst_ratios: worst
            .iter()
            .map(|(name, r)| (*name, format_rational(r)))
            .collect(),
        worst_ratios_approx: worst
            .iter()
            .map(|(name, r)| (*name, rational_to_f64(r)))
            .collect(),
        violations,
        rows,
    };

    if args.json {
        println!("{}", serde_json::to_string_pretty(&summary).expect("report json"));
        return Ok(0);
    }

    for row in &summary.rows {
        let mut line = format!(
            "trial {:3}: n={} |D|={}",
            row.trial, row.n, row.demands
        );
        for algo in &args.algos {
            let name = algo.name();
            match row.values.get(name) {
                Some(value) => {
                    line.push_str(&format!("  {name}={value}"));
                    if let Some(ratio) = row.ratios.get(name) {
                        line.push_str(&format!(
                            " ({:.4})",
                            rational_to_f64(&parse_rational(ratio)?)
                        ));
                    }
                }
                None => line.push_str(&format!("  {name}=skipped")),
            }
        }
        println!("{line}");
    }
    for (name, ratio) in &summary.worst_ratios {
        println!(
            "worst {name}/exact: {ratio} ({:.4})",
            summary.worst_ratios_approx[name]
        );
    }
    println!("violations: {}", summary.violations);
    Ok(0)
}

#[derive(Serialize)]
struct BenchAlgoRow {
    runs: usize,
    total_seconds: f64,
    mean_seconds: f64,
}

#[derive(Serialize)]
struct BenchSummary {
    trials: usize,
    per_algo: BTreeMap<&'static str, BenchAlgoRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fpt_work: Option<BenchFptWork>,
}

#[derive(Serialize)]
struct BenchFptWork {
    evaluated: u64,
    budget: u64,
    within_budget: bool,
}

pub fn cmd_bench(args: &BatchArgs) -> Result<i32> {
    let outcomes = run_batch(args)?;
    let mut per_algo: BTreeMap<&'static str, BenchAlgoRow> = BTreeMap::new();
    for outcome in &outcomes {
        for (name, (_, seconds)) in &outcome.values {
            let row = per_algo.entry(name).or_insert(BenchAlgoRow {
                runs: 0,
                total_seconds: 0.0,
                mean_seconds: 0.0,
            });
            row.runs += 1;
            row.total_seconds += seconds;
        }
    }
    for row in per_algo.values_mut() {
        if row.runs > 0 {
            row.mean_seconds = row.total_seconds / row.runs as f64;
        }
    }
    let fpt_work = {
        let tracked: Vec<(u64, u64)> = outcomes.iter().filter_map(|o| o.fpt_work).collect();
        if tracked.is_empty() {
            None
        } else {
            let evaluated = tracked.iter().map(|(e, _)| e).sum();
            let budget = tracked.iter().map(|(_, b)| b).sum();
            let within_budget = tracked.iter().all(|(e, b)| e <= b);
            Some(BenchFptWork {
                evaluated,
                budget,
                within_budget,
            })
        }
    };
    let summary = BenchSummary {
        trials: outcomes.len(),
        per_algo,
        fpt_work,
    };

    if args.json {
        println!("{}", serde_json::to_string_pretty(&summary).expect("report json"));
        return Ok(0);
    }
    println!("{:<10} {:>6} {:>12} {:>12}", "algo", "runs", "total_ms", "mean_ms");
    for (name, row) in &summary.per_algo {
        println!(
            "{:<10} {:>6} {:>12.3} {:>12.3}",
            name,
            row.runs,
            row.total_seconds * 1000.0,
            row.mean_seconds * 1000.0
        );
    }
    if let Some(work) = &summary.fpt_work {
        println!(
            "fpt work: evaluated={} budget={} within_budget={}",
            work.evaluated, work.budget, work.within_budget
        );
    }
    Ok(0)
}
