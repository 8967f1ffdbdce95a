//! One line per acceptance criterion. Runs without the test harness so the
//! lines are never captured. Every criterion runs; the exit status is
//! nonzero if any failed.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gscsp::acids::{extract_bound_solutions, run_acids_with, AcStatus, AcidsOptions};
use gscsp::algebra::{compose, intersect, transpose};
use gscsp::classify::{classify_grid, is_ds, is_us};
use gscsp::fixtures;
use gscsp::format::{parse, serialize};
use gscsp::oracle::{
    ac3_reference, brute_force_solutions, dense, diff_chain, generate, infeasible_chain,
    planted_chain, random_constraint, random_grid, random_instance, solution_minima, GenKind,
    GenSpec, Shape, Topology,
};
use gscsp::solver::solve_dscsp;
use gscsp::{CspInstance, Direction, VarId};

type Verdict = Result<String, String>;

const SIZES: [usize; 3] = [256, 512, 1024];
const MAX_RATIO: f64 = 2.5;

fn dims(seed: u64, max: usize) -> (usize, usize) {
    (1 + seed as usize % max, 1 + (seed as usize / max) % max)
}

fn fail_if(failures: Vec<String>, ok: String) -> Verdict {
    match failures.first() {
        None => Ok(ok),
        Some(first) => Err(format!("{} failures, first: {first}", failures.len())),
    }
}

fn min_max_closure() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..1000u64 {
        let (r, c) = dims(seed, 10);
        let g = random_constraint(seed, Shape::RowConvex, r, c, 0.6).to_dense();
        let rep = classify_grid(&g);
        if rep.ds != (rep.min_closed && rep.max_closed) || rep.ds != (dense::min_closed(&g) && dense::max_closed(&g)) {
            failures.push(format!("row convex seed {seed}"));
        }
    }
    for seed in 0..1000u64 {
        let (r, c) = dims(seed, 10);
        let g = random_grid(seed, r, c, (seed % 10) as f64 / 10.0 + 0.05);
        let rep = classify_grid(&g);
        if rep.ds != (rep.min_closed && rep.max_closed) || rep.ds != (dense::min_closed(&g) && dense::max_closed(&g)) {
            failures.push(format!("dense seed {seed}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(10) {
        failures.push(format!("took {elapsed:?}"));
    }
    fail_if(failures, format!("2000 relations, 0 exceptions, {elapsed:.2?}"))
}

fn closure_operations() -> Verdict {
    let mut failures = Vec::new();
    for (shape, class, same) in [(Shape::Ds, "DS", is_ds as fn(&_) -> bool), (Shape::Us, "US", is_us)] {
        for seed in 0..500u64 {
            let (r, m) = dims(seed, 10);
            let k = 1 + (seed as usize * 7) % 10;
            let a = random_constraint(seed, shape, r, m, 0.5);
            let a2 = random_constraint(seed ^ 0x5eed, shape, r, m, 0.5);
            let b = random_constraint(seed.wrapping_mul(31) + 1, shape, m, k, 0.5).with_vars(VarId(1), VarId(2));
            let ok = match (transpose(&a), intersect(&a, &a2), compose(&a, &b)) {
                (Ok(t), Ok(i), Ok(p)) => {
                    same(&t)
                        && same(&i)
                        && is_ds(&p)
                        && t.to_dense() == dense::transpose(&a.to_dense())
                        && i.to_dense() == dense::and(&a.to_dense(), &a2.to_dense())
                        && p.to_dense() == dense::product(&a.to_dense(), &b.to_dense())
                }
                _ => false,
            };
            if !ok {
                failures.push(format!("{class} seed {seed}"));
            }
        }
    }
    fail_if(failures, "500 DS and 500 US pairs, 0 failures".into())
}

/// Criterion 3 instances: a mix of both staircase directions.
fn gs_instances() -> Vec<(CspInstance, Direction)> {
    let shapes = [
        (Shape::Ds, Direction::Ds),
        (Shape::Us, Direction::Us),
        (Shape::LooseDs, Direction::Ds),
        (Shape::LooseUs, Direction::Us),
    ];
    let mut out: Vec<_> = (0..500u64)
        .map(|seed| {
            let (shape, dir) = shapes[seed as usize % 4];
            let n = 1 + (seed as usize / 4) % 6;
            let d = 1 + (seed as usize / 3) % 10;
            (random_instance(seed, n, d, shape), dir)
        })
        .collect();
    out.push((fixtures::cyclone(true), Direction::Ds));
    out
}

fn acids_correctness(instances: &[(CspInstance, Direction)]) -> Verdict {
    let mut failures = Vec::new();
    let mut wiped = 0;
    for (k, (inst, dir)) in instances.iter().enumerate() {
        match run_acids_with(inst, *dir, AcidsOptions { check_invariants: true }) {
            Ok(got) => {
                if !got.same_closure(&ac3_reference(inst)) {
                    failures.push(format!("instance {k}: closure differs from AC-3"));
                }
                wiped += usize::from(got.status != AcStatus::Consistent);
            }
            Err(e) => failures.push(format!("instance {k}: {e}")),
        }
    }
    fail_if(failures, format!("{} instances ({wiped} wiped out), invariants held", instances.len()))
}

fn bound_solutions(instances: &[(CspInstance, Direction)]) -> Verdict {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (k, (inst, dir)) in instances.iter().enumerate() {
        if *dir != Direction::Ds {
            continue;
        }
        let res = match run_acids_with(inst, Direction::Ds, AcidsOptions::default()) {
            Ok(r) if r.status == AcStatus::Consistent => r,
            Ok(_) => continue,
            Err(e) => {
                failures.push(format!("instance {k}: {e}"));
                continue;
            }
        };
        match extract_bound_solutions(inst, &res) {
            Ok((f, l)) if inst.satisfies(&f) && inst.satisfies(&l) => checked += 1,
            Ok(_) => failures.push(format!("instance {k}: bound solution violates a constraint")),
            Err(e) => failures.push(format!("instance {k}: {e}")),
        }
    }
    let cyclone = fixtures::cyclone(true);
    let res = run_acids_with(&cyclone, Direction::Ds, AcidsOptions::default()).map_err(|e| e.to_string())?;
    let (f, l) = extract_bound_solutions(&cyclone, &res).map_err(|e| e.to_string())?;
    let (f, l) = (f.values(&cyclone), l.values(&cyclone));
    if f != [1, 2, 3] || l != [9, 8, 10] {
        failures.push(format!("cyclone S_f {f:?}, S_l {l:?}"));
    }
    fail_if(failures, format!("{checked} consistent DS instances, cyclone S_f={f:?} S_l={l:?}"))
}

fn solver_vs_brute_force() -> Verdict {
    let mut failures = Vec::new();
    let mut solvable = 0;
    for seed in 0..500u64 {
        let n = 1 + seed as usize % 6;
        let d = 1 + (seed as usize / 6) % 8;
        let inst = random_instance(seed, n, d, if seed % 2 == 0 { Shape::Ds } else { Shape::LooseDs });
        let res = match solve_dscsp(&inst) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let sols = brute_force_solutions(&inst, usize::MAX).map_err(|e| e.to_string())?;
        match (res.outcome.solution(), solution_minima(&sols)) {
            (Some(a), Some(m)) if inst.satisfies(a) && a.0 == m => solvable += 1,
            (None, None) => {}
            (got, want) => failures.push(format!("seed {seed}: solver {got:?}, minima {want:?}")),
        }
    }
    fail_if(failures, format!("500 instances ({solvable} solvable), 0 failures"))
}

fn ratios(ops: &[u64]) -> Vec<f64> {
    ops.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect()
}

fn acids_scaling() -> Verdict {
    let mut ops = Vec::new();
    let mut slowest = Duration::ZERO;
    for d in SIZES {
        let inst = diff_chain(16, d, 1);
        if inst.num_constraints() != 15 {
            return Err(format!("chain at d={d} has {} constraints", inst.num_constraints()));
        }
        let start = Instant::now();
        let res = run_acids_with(&inst, Direction::Ds, AcidsOptions::default()).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        ops.push(res.op_count);
    }
    let r = ratios(&ops);
    let detail = format!("opCount {ops:?}, ratios {r:.2?}, slowest run {slowest:.2?}");
    if r.iter().all(|&x| x <= MAX_RATIO) && slowest < Duration::from_secs(1) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn solver_early_exit() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for s in [1, 4, 8] {
        let mut ops = Vec::new();
        for d in SIZES {
            let res = solve_dscsp(&planted_chain(16, d, s, 1)).map_err(|e| e.to_string())?;
            if res.outcome.solution().is_none() {
                return Err(format!("planted chain s={s} d={d} reported infeasible"));
            }
            ops.push(res.op_count);
        }
        let (lo, hi) = (*ops.iter().min().unwrap(), *ops.iter().max().unwrap());
        ok &= (hi as f64) < 2.0 * lo as f64;
        lines.push(format!("s={s} {ops:?}"));
    }
    let detail = format!("opCount {}", lines.join(", "));
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn solver_infeasible_cost() -> Verdict {
    let mut ops = Vec::new();
    for d in SIZES {
        let res = solve_dscsp(&infeasible_chain(16, d, 1)).map_err(|e| e.to_string())?;
        if res.outcome.solution().is_some() {
            return Err(format!("infeasible chain d={d} reported a solution"));
        }
        ops.push(res.op_count);
    }
    let r = ratios(&ops);
    let detail = format!("opCount {ops:?}, ratios {r:.2?}");
    if r.iter().all(|&x| x <= MAX_RATIO) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cli_contract() -> Verdict {
    let mut failures = common::golden_failures();
    let kinds = [GenKind::BoundedDiff, GenKind::RandomDs, GenKind::RandomUs];
    for seed in 0..60u64 {
        let spec = GenSpec {
            kind: kinds[seed as usize % 3],
            n: 3 + seed as usize % 5,
            d: 1 + seed as usize % 12,
            density: 0.4,
            seed,
            topology: Topology::Cycle,
        };
        let inst = generate(&spec).map_err(|e| e.to_string())?;
        let text = serialize(&inst);
        match parse(&text) {
            Ok(back) if back == inst && serialize(&back) == text => {}
            _ => failures.push(format!("round trip, seed {seed}")),
        }
    }
    fail_if(failures, format!("{} golden cases, 60 round trips", common::CASES.len()))
}

fn main() -> ExitCode {
    let gs = gs_instances();
    let results: Vec<(&str, Verdict)> = vec![
        ("1 min/max closure equivalence", min_max_closure()),
        ("2 closure operations", closure_operations()),
        ("3 ACiDS equals AC-3", acids_correctness(&gs)),
        ("4 bound solutions", bound_solutions(&gs)),
        ("5 DSCSP solver vs brute force", solver_vs_brute_force()),
        ("6 ACiDS O(cd) scaling", acids_scaling()),
        ("7 solver O(cs) early exit", solver_early_exit()),
        ("8 solver infeasible cost", solver_infeasible_cost()),
        ("9 CLI contract", cli_contract()),
    ];
    let mut failed = 0;
    for (name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
