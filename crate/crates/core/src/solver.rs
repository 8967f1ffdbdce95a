//! Direct solver for down staircase networks.
//!
//! Every variable has one forward cursor. A cursor only moves past values
//! that belong to no solution, so when all cursors are mutually consistent
//! they form the componentwise smallest solution; when a cursor runs off its
//! domain there is none. Arc consistency is never computed.

use std::collections::VecDeque;

use crate::error::Result;
use crate::model::{Assignment, CspInstance, Direction, VarId};
use crate::network::Network;
use crate::ops::OpCount;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(Assignment),
    Infeasible,
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&Assignment> {
        match self {
            SolveOutcome::Solution(a) => Some(a),
            SolveOutcome::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub outcome: SolveOutcome,
    pub op_count: u64,
}

struct State<'a> {
    net: &'a Network,
    scan: Vec<usize>,
    flag: Vec<bool>,
    sum: usize,
    queue: VecDeque<VarId>,
    ops: OpCount,
}

enum Step {
    Done,
    Restart,
    Infeasible,
}

impl State<'_> {
    fn at_end(&self, var: VarId) -> bool {
        self.scan[var.index()] >= self.net.domain_len(var)
    }

    fn advance(&mut self, var: VarId, to: usize) {
        debug_assert!(to > self.scan[var.index()], "cursor of {var} moved backwards");
        self.scan[var.index()] = to;
        self.ops.tick();
    }

    fn unflag(&mut self, var: VarId) {
        if self.flag[var.index()] {
            self.flag[var.index()] = false;
            self.sum -= 1;
            self.queue.push_back(var);
            self.ops.tick();
        }
    }

    /// One pass over the arcs leaving `j`.
    fn revise(&mut self, j: VarId) -> Step {
        let net = self.net;
        for &a in net.outgoing(j) {
            self.ops.tick();
            let arc = net.arc(a);
            let back = net.arc(arc.reverse);
            let k = arc.to;

            let start_j = self.scan[j.index()];
            let mut sj = start_j;
            while sj < arc.non_empty.len() && !arc.non_empty[sj] {
                sj += 1;
                self.ops.tick();
            }
            let mut sk = self.scan[k.index()];
            let start_k = sk;
            while sk < back.non_empty.len() && !back.non_empty[sk] {
                sk += 1;
                self.ops.tick();
            }
            self.scan[j.index()] = sj;
            self.scan[k.index()] = sk;
            if sk != start_k {
                self.unflag(k);
            }
            if self.at_end(j) || self.at_end(k) {
                return Step::Infeasible;
            }
            if sj != start_j {
                return Step::Restart;
            }

            // no value of j below this supports any remaining value of k
            let need_j = back.image(sk).expect("skipped to a supported row").lo;
            if sj < need_j {
                self.advance(j, need_j);
                return Step::Restart;
            }
            let need_k = arc.image(sj).expect("skipped to a supported row").lo;
            if sk < need_k {
                self.advance(k, need_k);
                self.unflag(k);
            }
        }
        Step::Done
    }
}

/// Finds the componentwise smallest solution of a down staircase network.
pub fn solve_dscsp(instance: &CspInstance) -> Result<SolveResult> {
    let net = Network::build(instance, Direction::Ds)?;
    Ok(solve_network(&net))
}

/// Solves a prebuilt network; only the propagation loop is counted.
pub fn solve_network(net: &Network) -> SolveResult {
    let n = net.num_vars();
    let mut st = State {
        net,
        scan: vec![0; n],
        flag: vec![false; n],
        sum: 0,
        queue: (0..n).map(VarId).collect(),
        ops: OpCount::default(),
    };
    if (0..n).any(|v| net.domain_len(VarId(v)) == 0) {
        return SolveResult { outcome: SolveOutcome::Infeasible, op_count: 0 };
    }
    if n == 0 {
        return SolveResult { outcome: SolveOutcome::Solution(Assignment(Vec::new())), op_count: 0 };
    }
    while let Some(j) = st.queue.pop_front() {
        st.ops.tick();
        loop {
            match st.revise(j) {
                Step::Done => break,
                Step::Restart => continue,
                Step::Infeasible => {
                    return SolveResult { outcome: SolveOutcome::Infeasible, op_count: st.ops.get() }
                }
            }
        }
        st.flag[j.index()] = true;
        st.sum += 1;
        if st.sum == n {
            let outcome = SolveOutcome::Solution(Assignment(st.scan.clone()));
            return SolveResult { outcome, op_count: st.ops.get() };
        }
    }
    unreachable!("every unflagged variable is queued")
}
