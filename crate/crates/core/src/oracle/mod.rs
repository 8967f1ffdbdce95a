//! Ground truth for the engines: exhaustive enumeration, a plain AC-3, and
//! seeded instance generators.

pub mod dense;
mod generate;

pub use generate::{
    diff_chain, generate, infeasible_chain, planted_chain, random_constraint, random_grid,
    random_instance, GenKind, GenSpec, Shape, Topology,
};

use std::collections::VecDeque;

use crate::acids::{AcResult, AcStatus};
use crate::error::{Error, Result};
use crate::model::{Assignment, CspInstance, VarId};

/// Enumeration is refused above this many candidate tuples.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// All solutions in lexicographic order of domain indices, at most `limit`.
pub fn brute_force_solutions(instance: &CspInstance, limit: usize) -> Result<Vec<Assignment>> {
    let space = instance.domains().iter().fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128));
    if space > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(space));
    }
    let n = instance.num_vars();
    // constraints checked when their later variable is assigned
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, c) in instance.constraints().iter().enumerate() {
        closing[c.row_var().index().max(c.col_var().index())].push(k);
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    search(instance, &closing, 0, &mut current, limit, &mut out);
    Ok(out)
}

fn search(
    inst: &CspInstance,
    closing: &[Vec<usize>],
    var: usize,
    current: &mut Vec<usize>,
    limit: usize,
    out: &mut Vec<Assignment>,
) {
    if out.len() >= limit {
        return;
    }
    if var == current.len() {
        out.push(Assignment(current.clone()));
        return;
    }
    for v in 0..inst.domain(VarId(var)).len() {
        current[var] = v;
        let ok = closing[var].iter().all(|&k| {
            let c = &inst.constraints()[k];
            c.contains(current[c.row_var().index()], current[c.col_var().index()])
        });
        if ok {
            search(inst, closing, var + 1, current, limit, out);
            if out.len() >= limit {
                return;
            }
        }
    }
}

/// Per variable, the smallest domain index used by any solution.
pub fn solution_minima(solutions: &[Assignment]) -> Option<Vec<usize>> {
    let first = solutions.first()?;
    let mut minima = first.0.clone();
    for s in &solutions[1..] {
        for (m, &v) in minima.iter_mut().zip(&s.0) {
            *m = (*m).min(v);
        }
    }
    Some(minima)
}

/// Textbook AC-3 over constraint membership tests; works on any binary
/// constraints.
pub fn ac3_reference(instance: &CspInstance) -> AcResult {
    let mut alive: Vec<Vec<bool>> = instance.domains().iter().map(|d| vec![true; d.len()]).collect();
    let arcs = instance.arcs();
    let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); instance.num_vars()];
    for (k, &(_, j)) in arcs.iter().enumerate() {
        by_target[j.index()].push(k);
    }
    let mut queue: VecDeque<usize> = (0..arcs.len()).collect();
    let mut queued = vec![true; arcs.len()];
    let mut ops = 0u64;
    let mut status = AcStatus::Consistent;

    while let Some(k) = queue.pop_front() {
        queued[k] = false;
        let (i, j) = arcs[k];
        let c = instance.constraint_between(i, j).expect("arc has a constraint");
        let holds = |vi: usize, vj: usize| {
            if c.row_var() == i {
                c.contains(vi, vj)
            } else {
                c.contains(vj, vi)
            }
        };
        let mut changed = false;
        for vi in 0..alive[i.index()].len() {
            if !alive[i.index()][vi] {
                continue;
            }
            let supported = (0..alive[j.index()].len()).any(|vj| {
                ops += 1;
                alive[j.index()][vj] && holds(vi, vj)
            });
            if !supported {
                alive[i.index()][vi] = false;
                changed = true;
            }
        }
        if !alive[i.index()].iter().any(|&a| a) {
            status = AcStatus::EmptyDomain(i);
            break;
        }
        if changed {
            for &back in &by_target[i.index()] {
                if arcs[back].0 != j && !queued[back] {
                    queued[back] = true;
                    queue.push_back(back);
                }
            }
        }
    }

    let surviving = alive
        .iter()
        .map(|a| a.iter().enumerate().filter(|(_, &on)| on).map(|(k, _)| k).collect())
        .collect();
    AcResult { status, surviving, op_count: ops }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::Domain;

    #[test]
    fn cyclone_solutions() {
        let inst = fixtures::cyclone(false);
        let sols = brute_force_solutions(&inst, usize::MAX).unwrap();
        let values: Vec<_> = sols.iter().map(|s| s.values(&inst)).collect();
        assert_eq!(values, vec![vec![1, 2, 3], vec![1, 2, 4], vec![5, 6, 4], vec![9, 8, 10]]);
        assert_eq!(solution_minima(&sols), Some(vec![0, 0, 0]));
        let with_stray = fixtures::cyclone(true);
        assert_eq!(brute_force_solutions(&with_stray, usize::MAX).unwrap().len(), 4);
    }

    #[test]
    fn unconstrained_enumerates_product() {
        let inst = CspInstance::new(vec![Domain::range(2).unwrap(), Domain::range(3).unwrap()]);
        let sols = brute_force_solutions(&inst, usize::MAX).unwrap();
        assert_eq!(sols.len(), 6);
        assert_eq!(sols[1], Assignment(vec![0, 1]));
        assert_eq!(brute_force_solutions(&inst, 4).unwrap().len(), 4);
    }

    #[test]
    fn infeasible_has_no_solutions() {
        let inst = fixtures::infeasible_pair();
        assert!(brute_force_solutions(&inst, usize::MAX).unwrap().is_empty());
        assert_eq!(solution_minima(&[]), None);
    }

    #[test]
    fn guard_refuses_large_spaces() {
        let inst = CspInstance::new(vec![Domain::range(1000).unwrap(); 3]);
        assert_eq!(brute_force_solutions(&inst, 1), Err(Error::TooLarge(1_000_000_000)));
    }

    #[test]
    fn ac3_on_fixtures() {
        let inst = fixtures::cyclone(true);
        let res = ac3_reference(&inst);
        assert_eq!(res.status, AcStatus::Consistent);
        assert_eq!(res.surviving_values(&inst), vec![vec![1, 5, 9], vec![2, 6, 8], vec![3, 4, 10]]);

        let inst = fixtures::cyclone(false);
        assert_eq!(ac3_reference(&inst).surviving, vec![vec![0, 1, 2]; 3]);

        let res = ac3_reference(&fixtures::infeasible_pair());
        assert!(matches!(res.status, AcStatus::EmptyDomain(_)));
    }
}
