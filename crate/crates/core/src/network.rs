//! Both orientations of every constraint, materialized once per run.

use crate::algebra::transpose_hull;
use crate::classify::is_direction;
use crate::error::{Error, Result};
use crate::model::{CspInstance, Direction, RowConvexConstraint, SupportInterval, VarId};

/// Ordered arc `(from, to)`; rows index `from`'s domain.
#[derive(Debug, Clone)]
pub struct Arc {
    pub from: VarId,
    pub to: VarId,
    pub con: RowConvexConstraint,
    /// `non_empty[v]` iff row `v` has a support.
    pub non_empty: Vec<bool>,
    /// Index of the arc `(to, from)`.
    pub reverse: usize,
}

impl Arc {
    #[inline]
    pub fn image(&self, row: usize) -> Option<SupportInterval> {
        self.con.image(row)
    }
}

#[derive(Debug, Clone)]
pub struct Network {
    direction: Direction,
    domain_lens: Vec<usize>,
    arcs: Vec<Arc>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl Network {
    /// Fails with [`Error::ClassMismatch`] on the first constraint that is
    /// not of class `direction`.
    pub fn build(instance: &CspInstance, direction: Direction) -> Result<Self> {
        let n = instance.num_vars();
        let mut arcs = Vec::with_capacity(2 * instance.num_constraints());
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for c in instance.constraints() {
            if !is_direction(c, direction) {
                return Err(Error::ClassMismatch {
                    row: c.row_var(),
                    col: c.col_var(),
                    expected: direction,
                });
            }
            let t = transpose_hull(c, direction);
            let base = arcs.len();
            for (con, reverse) in [(c.clone(), base + 1), (t, base)] {
                let idx = arcs.len();
                let (from, to) = (con.row_var(), con.col_var());
                let non_empty = con.rows().iter().map(Option::is_some).collect();
                outgoing[from.index()].push(idx);
                incoming[to.index()].push(idx);
                arcs.push(Arc { from, to, con, non_empty, reverse });
            }
        }
        let domain_lens = instance.domains().iter().map(|d| d.len()).collect();
        Ok(Network { direction, domain_lens, arcs, outgoing, incoming })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn num_vars(&self) -> usize {
        self.domain_lens.len()
    }

    pub fn domain_len(&self, var: VarId) -> usize {
        self.domain_lens[var.index()]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, idx: usize) -> &Arc {
        &self.arcs[idx]
    }

    /// Arcs `(var, k)`.
    pub fn outgoing(&self, var: VarId) -> &[usize] {
        &self.outgoing[var.index()]
    }

    /// Arcs `(k, var)`.
    pub fn incoming(&self, var: VarId) -> &[usize] {
        &self.incoming[var.index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn cyclone_network_shape() {
        let inst = fixtures::cyclone(true);
        let net = Network::build(&inst, Direction::Ds).unwrap();
        assert_eq!(net.arcs().len(), 6);
        for (i, a) in net.arcs().iter().enumerate() {
            let r = net.arc(a.reverse);
            assert_eq!(r.reverse, i);
            assert_eq!((r.from, r.to), (a.to, a.from));
            for u in 0..net.domain_len(a.from) {
                for v in 0..net.domain_len(a.to) {
                    let truth = inst.constraint_between(a.from, a.to).map(|c| {
                        if c.row_var() == a.from {
                            c.contains(u, v)
                        } else {
                            c.contains(v, u)
                        }
                    });
                    assert_eq!(Some(a.con.contains(u, v)), truth);
                }
            }
        }
        for v in 0..3 {
            assert_eq!(net.outgoing(VarId(v)).len(), 2);
            assert_eq!(net.incoming(VarId(v)).len(), 2);
        }
    }

    #[test]
    fn wrong_direction_is_rejected() {
        let inst = fixtures::us_antidiag();
        assert_eq!(
            Network::build(&inst, Direction::Ds).unwrap_err(),
            Error::ClassMismatch { row: VarId(0), col: VarId(1), expected: Direction::Ds }
        );
        assert!(Network::build(&inst, Direction::Us).is_ok());
    }
}
