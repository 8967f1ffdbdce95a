//! Optimal arc consistency for staircase networks.
//!
//! For every arc `(i, j)` the engine keeps the active rows `D_i(C_ij)` in a
//! linked list and, for each column value `v_j`, the interval `MIN(v_j, i)`
//! of rows whose smallest available support is `v_j`. Removing `v_j` only
//! touches `MIN(v_j, i)`: rows whose largest support lies before the next
//! available column lose all support, and the rest move to that column's
//! interval in O(1).
//!
//! "Available" means not yet processed on this arc. A removed column stays
//! available until its own queue entry is handled, which keeps the MIN
//! intervals exact while removals are still pending.

mod view;

use std::collections::VecDeque;
use std::fmt;

pub use view::{ActiveList, NONE};

use crate::classify::is_ds;
use crate::error::{Error, Result};
use crate::model::{Assignment, CspInstance, Direction, SupportInterval, VarId};
use crate::network::Network;
use crate::ops::OpCount;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcStatus {
    Consistent,
    /// First variable found with no surviving value.
    EmptyDomain(VarId),
}

impl AcStatus {
    pub fn is_consistent(self) -> bool {
        self == AcStatus::Consistent
    }
}

impl fmt::Display for AcStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AcStatus::Consistent => f.write_str("CONSISTENT"),
            AcStatus::EmptyDomain(v) => write!(f, "EMPTY_DOMAIN {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcResult {
    pub status: AcStatus,
    /// Surviving domain indices per variable, increasing. Partial when the
    /// run aborted on a wipeout.
    pub surviving: Vec<Vec<usize>>,
    pub op_count: u64,
}

impl AcResult {
    pub fn surviving_values(&self, instance: &CspInstance) -> Vec<Vec<i64>> {
        self.surviving
            .iter()
            .enumerate()
            .map(|(i, idx)| idx.iter().map(|&k| instance.domain(VarId(i)).value(k)).collect())
            .collect()
    }

    /// Same fixpoint: equal survivors when consistent, both wiped out otherwise.
    pub fn same_closure(&self, other: &AcResult) -> bool {
        match (self.status, other.status) {
            (AcStatus::Consistent, AcStatus::Consistent) => self.surviving == other.surviving,
            (AcStatus::EmptyDomain(_), AcStatus::EmptyDomain(_)) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AcidsOptions {
    /// Verify the MIN invariants after every propagation step.
    pub check_invariants: bool,
}

/// One queued removal: `value` left `source`'s domain; `target` must
/// revise its supports along `arc = (target, source)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pending {
    pub target: VarId,
    pub source: VarId,
    pub value: usize,
    pub arc: usize,
}

#[derive(Debug, Clone)]
struct ArcState {
    rows: ActiveList,
    cols: ActiveList,
    min_lo: Vec<u32>,
    min_hi: Vec<u32>,
    lo_owner: Vec<u32>,
    hi_owner: Vec<u32>,
}

impl ArcState {
    fn min(&self, col: usize) -> Option<(usize, usize)> {
        (self.min_lo[col] != NONE).then(|| (self.min_lo[col] as usize, self.min_hi[col] as usize))
    }

    fn set_min(&mut self, col: usize, lo: usize, hi: usize) {
        self.min_lo[col] = lo as u32;
        self.min_hi[col] = hi as u32;
        self.lo_owner[lo] = col as u32;
        self.hi_owner[hi] = col as u32;
    }

    fn clear_min(&mut self, col: usize) {
        if let Some((lo, hi)) = self.min(col) {
            self.lo_owner[lo] = NONE;
            self.hi_owner[hi] = NONE;
            self.min_lo[col] = NONE;
            self.min_hi[col] = NONE;
        }
    }

    fn set_lo(&mut self, col: usize, lo: usize) {
        let old = self.min_lo[col] as usize;
        self.lo_owner[old] = NONE;
        self.min_lo[col] = lo as u32;
        self.lo_owner[lo] = col as u32;
    }

    fn set_hi(&mut self, col: usize, hi: usize) {
        let old = self.min_hi[col] as usize;
        self.hi_owner[old] = NONE;
        self.min_hi[col] = hi as u32;
        self.hi_owner[hi] = col as u32;
    }

    /// Unlinks an active row, shrinking the MIN interval it bounds.
    fn unlink_row(&mut self, row: usize) {
        let (lo_col, hi_col) = (self.lo_owner[row], self.hi_owner[row]);
        if lo_col != NONE && lo_col == hi_col {
            self.clear_min(lo_col as usize);
        } else {
            if lo_col != NONE {
                let next = self.rows.next(row);
                self.set_lo(lo_col as usize, next as usize);
            }
            if hi_col != NONE {
                let prev = self.rows.prev(row);
                self.set_hi(hi_col as usize, prev as usize);
            }
        }
        self.rows.unlink(row);
    }
}

/// MIN interval per column of one arc; `None` when the set is empty.
pub type MinColumn = Vec<Option<SupportInterval>>;

/// Per-arc MIN intervals as row-index pairs, indexed by arc then column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinSupportMap {
    pub arcs: Vec<((VarId, VarId), MinColumn)>,
}

impl MinSupportMap {
    pub fn get(&self, from: VarId, to: VarId) -> Option<&[Option<SupportInterval>]> {
        self.arcs.iter().find(|((f, t), _)| *f == from && *t == to).map(|(_, v)| v.as_slice())
    }
}

/// ACiDS state for one run.
#[derive(Debug, Clone)]
pub struct Acids {
    net: Network,
    arcs: Vec<ArcState>,
    active: Vec<Vec<bool>>,
    counts: Vec<usize>,
    queue: VecDeque<Pending>,
    opts: AcidsOptions,
    ops: OpCount,
}

impl Acids {
    /// Builds both arc orientations and the initial MIN intervals.
    pub fn new(instance: &CspInstance, direction: Direction, opts: AcidsOptions) -> Result<Self> {
        let net = Network::build(instance, direction)?;
        let mut ops = OpCount::default();
        let arcs = net
            .arcs()
            .iter()
            .map(|arc| {
                let rev = net.arc(arc.reverse);
                let rows = ActiveList::new(arc.non_empty.len(), |r| arc.non_empty[r]);
                let cols = ActiveList::new(rev.non_empty.len(), |c| rev.non_empty[c]);
                let (nr, nc) = (arc.non_empty.len(), rev.non_empty.len());
                let mut st = ArcState {
                    rows,
                    cols,
                    min_lo: vec![NONE; nc],
                    min_hi: vec![NONE; nc],
                    lo_owner: vec![NONE; nr],
                    hi_owner: vec![NONE; nr],
                };
                initialize(&mut st, arc, direction, &mut ops);
                st
            })
            .collect();
        let active = instance.domains().iter().map(|d| vec![true; d.len()]).collect();
        let counts = instance.domains().iter().map(|d| d.len()).collect();
        Ok(Acids { net, arcs, active, counts, queue: VecDeque::new(), opts, ops })
    }

    pub fn direction(&self) -> Direction {
        self.net.direction()
    }

    pub fn op_count(&self) -> u64 {
        self.ops.get()
    }

    pub fn is_active(&self, var: VarId, value: usize) -> bool {
        self.active[var.index()][value]
    }

    pub fn min_support_map(&self) -> MinSupportMap {
        let arcs = self
            .net
            .arcs()
            .iter()
            .zip(&self.arcs)
            .map(|(arc, st)| {
                let mins = (0..st.min_lo.len())
                    .map(|c| st.min(c).map(|(lo, hi)| SupportInterval::new(lo, hi)))
                    .collect();
                ((arc.from, arc.to), mins)
            })
            .collect();
        MinSupportMap { arcs }
    }

    /// Index of arc `(from, to)`.
    pub fn arc_index(&self, from: VarId, to: VarId) -> Option<usize> {
        self.net.outgoing(from).iter().copied().find(|&a| self.net.arc(a).to == to)
    }

    /// Active rows of the arc with no support at all.
    pub fn arc_cons(&mut self, arc: usize) -> Vec<usize> {
        let a = self.net.arc(arc);
        let var = a.from.index();
        let mut delta = Vec::new();
        for (row, &filled) in a.non_empty.iter().enumerate() {
            self.ops.tick();
            if !filled && self.active[var][row] {
                delta.push(row);
            }
        }
        delta
    }

    /// Revises the arc `(i, j)` after `col` left `D_j`. Returns the rows of
    /// `D_i` that lost their last support.
    pub fn local_arc_cons(&mut self, arc: usize, col: usize) -> Vec<usize> {
        let direction = self.net.direction();
        let con = &self.net.arc(arc).con;
        let st = &mut self.arcs[arc];
        let mut delta = Vec::new();
        if !st.cols.is_linked(col) {
            return delta;
        }
        let succ = st.cols.next(col);
        st.cols.unlink(col);
        let Some((lo, hi)) = st.min(col) else {
            return delta;
        };
        st.clear_min(col);

        let supported = |row: usize| {
            let max = con.image(row).expect("active rows have supports").hi;
            succ != NONE && max >= succ as usize
        };
        match direction {
            Direction::Ds => {
                let mut scan = lo;
                loop {
                    self.ops.tick();
                    if supported(scan) {
                        merge(st, succ as usize, scan, hi, direction);
                        self.ops.tick();
                        break;
                    }
                    delta.push(scan);
                    if scan == hi {
                        break;
                    }
                    scan = st.rows.next(scan) as usize;
                }
            }
            Direction::Us => {
                let mut scan = hi;
                loop {
                    self.ops.tick();
                    if supported(scan) {
                        merge(st, succ as usize, lo, scan, direction);
                        self.ops.tick();
                        break;
                    }
                    delta.push(scan);
                    if scan == lo {
                        break;
                    }
                    scan = st.rows.prev(scan) as usize;
                }
            }
        }
        delta
    }

    /// Queues `value`'s departure from `var` on every incoming arc.
    pub fn enqueue(&mut self, var: VarId, value: usize) {
        for &arc in self.net.incoming(var) {
            let target = self.net.arc(arc).from;
            self.queue.push_back(Pending { target, source: var, value, arc });
            self.ops.tick();
        }
    }

    /// Deactivates `value` in every arc leaving `var`.
    pub fn remove(&mut self, var: VarId, value: usize) {
        let i = var.index();
        assert!(self.active[i][value], "value {value} of {var} already removed");
        self.active[i][value] = false;
        self.counts[i] -= 1;
        self.ops.tick();
        for &arc in self.net.outgoing(var) {
            let st = &mut self.arcs[arc];
            if st.rows.is_linked(value) {
                st.unlink_row(value);
            }
        }
    }

    /// Propagates to the fixpoint.
    pub fn run(mut self) -> Result<AcResult> {
        let status = self.propagate()?;
        let surviving = self
            .active
            .iter()
            .map(|a| a.iter().enumerate().filter(|(_, &on)| on).map(|(k, _)| k).collect())
            .collect();
        Ok(AcResult { status, surviving, op_count: self.ops.get() })
    }

    fn propagate(&mut self) -> Result<AcStatus> {
        for arc in 0..self.net.arcs().len() {
            let var = self.net.arc(arc).from;
            for row in self.arc_cons(arc) {
                if let Some(status) = self.prune(var, row) {
                    return Ok(status);
                }
            }
        }
        self.verify()?;
        while let Some(p) = self.queue.pop_front() {
            self.ops.tick();
            for row in self.local_arc_cons(p.arc, p.value) {
                if let Some(status) = self.prune(p.target, row) {
                    return Ok(status);
                }
            }
            self.verify()?;
        }
        Ok(AcStatus::Consistent)
    }

    fn prune(&mut self, var: VarId, value: usize) -> Option<AcStatus> {
        if !self.active[var.index()][value] {
            return None;
        }
        self.enqueue(var, value);
        self.remove(var, value);
        (self.counts[var.index()] == 0).then_some(AcStatus::EmptyDomain(var))
    }

    fn verify(&self) -> Result<()> {
        if self.opts.check_invariants {
            self.check_invariants()
        } else {
            Ok(())
        }
    }

    /// MIN intervals are disjoint, ordered and bounded by active rows, and
    /// every active row sits in the interval of its smallest available
    /// support.
    pub fn check_invariants(&self) -> Result<()> {
        let direction = self.net.direction();
        for (idx, (arc, st)) in self.net.arcs().iter().zip(&self.arcs).enumerate() {
            let fail = |msg: String| {
                Err(Error::InvariantViolated(format!("arc {}->{} (#{idx}): {msg}", arc.from, arc.to)))
            };
            let mut owner = vec![NONE; arc.non_empty.len()];
            let mut last_end: Option<usize> = None;
            let cols: Box<dyn Iterator<Item = usize>> = match direction {
                Direction::Ds => Box::new(0..st.min_lo.len()),
                Direction::Us => Box::new((0..st.min_lo.len()).rev()),
            };
            for col in cols {
                let Some((lo, hi)) = st.min(col) else { continue };
                if !st.rows.is_linked(lo) || !st.rows.is_linked(hi) {
                    return fail(format!("MIN({col}) has an inactive endpoint"));
                }
                if lo > hi || last_end.is_some_and(|e| e >= lo) {
                    return fail(format!("MIN({col}) = [{lo}, {hi}] is out of order"));
                }
                last_end = Some(hi);
                let mut r = lo;
                loop {
                    if owner[r] != NONE {
                        return fail(format!("row {r} lies in two MIN intervals"));
                    }
                    owner[r] = col as u32;
                    if r == hi {
                        break;
                    }
                    r = st.rows.next(r) as usize;
                }
            }
            for row in st.rows.iter() {
                let iv = arc.image(row).expect("linked rows have supports");
                let smallest = (iv.lo..=iv.hi).find(|&c| st.cols.is_linked(c));
                match smallest {
                    Some(c) if owner[row] == c as u32 => {}
                    Some(c) => {
                        return fail(format!(
                            "row {row} has smallest available support {c} but MIN owner {}",
                            owner[row] as i64
                        ))
                    }
                    None => return fail(format!("active row {row} has no available support")),
                }
            }
        }
        Ok(())
    }
}

fn initialize(st: &mut ArcState, arc: &crate::network::Arc, direction: Direction, ops: &mut OpCount) {
    let mut row = match direction {
        Direction::Ds => st.rows.head(),
        Direction::Us => st.rows.tail(),
    };
    while row != NONE {
        ops.tick();
        let r = row as usize;
        let m = arc.image(r).expect("linked rows have supports").lo;
        match (st.min(m), direction) {
            (None, _) => st.set_min(m, r, r),
            (Some(_), Direction::Ds) => st.set_hi(m, r),
            (Some(_), Direction::Us) => st.set_lo(m, r),
        }
        row = match direction {
            Direction::Ds => st.rows.next(r),
            Direction::Us => st.rows.prev(r),
        };
    }
}

/// Adds the surviving block `[lo, hi]` to `MIN(col)`. The block sits just
/// before (DS) or just after (US) the existing interval in row order.
fn merge(st: &mut ArcState, col: usize, lo: usize, hi: usize, direction: Direction) {
    match (st.min(col), direction) {
        (None, _) => st.set_min(col, lo, hi),
        (Some(_), Direction::Ds) => st.set_lo(col, lo),
        (Some(_), Direction::Us) => st.set_hi(col, hi),
    }
}

pub fn run_acids(instance: &CspInstance, direction: Direction) -> Result<AcResult> {
    run_acids_with(instance, direction, AcidsOptions::default())
}

pub fn run_acids_with(
    instance: &CspInstance,
    direction: Direction,
    opts: AcidsOptions,
) -> Result<AcResult> {
    Acids::new(instance, direction, opts)?.run()
}

pub fn initialize_min(instance: &CspInstance, direction: Direction) -> Result<MinSupportMap> {
    Ok(Acids::new(instance, direction, AcidsOptions::default())?.min_support_map())
}

/// The assignments of first and last surviving values, both solutions of a
/// down staircase network after arc consistency.
pub fn extract_bound_solutions(
    instance: &CspInstance,
    result: &AcResult,
) -> Result<(Assignment, Assignment)> {
    if !instance.constraints().iter().all(is_ds) {
        return Err(Error::NotApplicable("bound solutions require down staircase constraints"));
    }
    if !result.status.is_consistent() {
        return Err(Error::NotApplicable("bound solutions require a consistent closure"));
    }
    let first = result.surviving.iter().map(|s| s[0]).collect();
    let last = result.surviving.iter().map(|s| *s.last().expect("non-empty")).collect();
    Ok((Assignment(first), Assignment(last)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{Domain, RowConvexConstraint};

    fn iv(lo: usize, hi: usize) -> Option<SupportInterval> {
        Some(SupportInterval::new(lo, hi))
    }

    fn single(c: RowConvexConstraint, row_len: usize) -> CspInstance {
        let mut inst = CspInstance::new(vec![
            Domain::range(row_len).unwrap(),
            Domain::range(c.col_len()).unwrap(),
        ]);
        inst.add_constraint(c).unwrap();
        inst
    }

    fn checked() -> AcidsOptions {
        AcidsOptions { check_invariants: true }
    }

    #[test]
    fn fig2a_min_sets() {
        let inst = single(fixtures::fig2a(), 5);
        let map = initialize_min(&inst, Direction::Ds).unwrap();
        let mins = map.get(VarId(0), VarId(1)).unwrap();
        assert_eq!(mins, &[iv(0, 1), None, iv(2, 3), None, iv(4, 4)]);
    }

    #[test]
    fn identity_min_sets() {
        let id = RowConvexConstraint::from_pairs(VarId(0), VarId(1), 3, &[Some((0, 0)), Some((1, 1)), Some((2, 2))])
            .unwrap();
        let map = initialize_min(&single(id, 3), Direction::Ds).unwrap();
        assert_eq!(map.get(VarId(0), VarId(1)).unwrap(), &[iv(0, 0), iv(1, 1), iv(2, 2)]);
    }

    #[test]
    fn us_min_sets() {
        let c = RowConvexConstraint::from_pairs(VarId(0), VarId(1), 3, &[Some((1, 2)), Some((0, 1)), Some((0, 0))])
            .unwrap();
        let map = initialize_min(&single(c, 3), Direction::Us).unwrap();
        assert_eq!(map.get(VarId(0), VarId(1)).unwrap(), &[iv(1, 2), iv(0, 0), None]);
    }

    #[test]
    fn fig2a_local_trace() {
        let inst = single(fixtures::fig2a(), 5);
        let mut eng = Acids::new(&inst, Direction::Ds, checked()).unwrap();
        let arc = eng.arc_index(VarId(0), VarId(1)).unwrap();

        eng.remove(VarId(1), 0);
        assert!(eng.local_arc_cons(arc, 0).is_empty());
        let mins = eng.min_support_map();
        assert_eq!(mins.get(VarId(0), VarId(1)).unwrap()[1], iv(0, 1));
        eng.check_invariants().unwrap();

        eng.remove(VarId(1), 1);
        assert_eq!(eng.local_arc_cons(arc, 1), vec![0]);
        eng.remove(VarId(0), 0);
        let mins = eng.min_support_map();
        assert_eq!(mins.get(VarId(0), VarId(1)).unwrap()[2], iv(1, 3));
        eng.check_invariants().unwrap();
    }

    #[test]
    fn last_support_removal_empties_row() {
        let id = RowConvexConstraint::from_pairs(VarId(0), VarId(1), 2, &[Some((0, 0)), Some((1, 1))]).unwrap();
        let inst = single(id, 2);
        let mut eng = Acids::new(&inst, Direction::Ds, checked()).unwrap();
        let arc = eng.arc_index(VarId(0), VarId(1)).unwrap();
        eng.remove(VarId(1), 1);
        assert_eq!(eng.local_arc_cons(arc, 1), vec![1]);
    }

    #[test]
    fn arc_cons_finds_unsupported_rows() {
        let inst = fixtures::infeasible_pair();
        let mut eng = Acids::new(&inst, Direction::Ds, checked()).unwrap();
        let arc = eng.arc_index(VarId(0), VarId(1)).unwrap();
        assert_eq!(eng.arc_cons(arc), vec![0]);

        let c = RowConvexConstraint::from_pairs(
            VarId(0),
            VarId(1),
            2,
            &[Some((0, 0)), Some((0, 0)), None, Some((0, 1)), Some((1, 1)), None],
        )
        .unwrap();
        let inst = single(c, 6);
        let mut eng = Acids::new(&inst, Direction::Ds, checked()).unwrap();
        let arc = eng.arc_index(VarId(0), VarId(1)).unwrap();
        assert_eq!(eng.arc_cons(arc), vec![2, 5]);
    }

    #[test]
    fn remove_is_shared_across_arcs() {
        let inst = fixtures::cyclone(false);
        let mut eng = Acids::new(&inst, Direction::Ds, checked()).unwrap();
        eng.remove(VarId(0), 1);
        assert!(!eng.is_active(VarId(0), 1));
        for &a in eng.net.outgoing(VarId(0)) {
            assert!(!eng.arcs[a].rows.is_linked(1));
            assert_eq!(eng.arcs[a].rows.next(0), 2);
        }
    }

    #[test]
    #[should_panic(expected = "already removed")]
    fn double_remove_panics() {
        let inst = fixtures::cyclone(false);
        let mut eng = Acids::new(&inst, Direction::Ds, checked()).unwrap();
        eng.remove(VarId(0), 1);
        eng.remove(VarId(0), 1);
    }

    #[test]
    fn cyclone_prunes_stray_value() {
        let inst = fixtures::cyclone(true);
        let res = run_acids_with(&inst, Direction::Ds, checked()).unwrap();
        assert_eq!(res.status, AcStatus::Consistent);
        assert_eq!(res.surviving_values(&inst), vec![vec![1, 5, 9], vec![2, 6, 8], vec![3, 4, 10]]);
        let (first, last) = extract_bound_solutions(&inst, &res).unwrap();
        assert_eq!(first.values(&inst), vec![1, 2, 3]);
        assert_eq!(last.values(&inst), vec![9, 8, 10]);
        assert!(inst.satisfies(&first) && inst.satisfies(&last));
    }

    #[test]
    fn infeasible_pair_wipes_out() {
        let inst = fixtures::infeasible_pair();
        let res = run_acids(&inst, Direction::Ds).unwrap();
        assert_eq!(res.status, AcStatus::EmptyDomain(VarId(0)));
        assert!(extract_bound_solutions(&inst, &res).is_err());
    }

    #[test]
    fn consistent_instance_is_untouched() {
        let inst = fixtures::cyclone(false);
        let mut eng = Acids::new(&inst, Direction::Ds, checked()).unwrap();
        for a in 0..6 {
            assert!(eng.arc_cons(a).is_empty());
        }
        let res = eng.run().unwrap();
        assert_eq!(res.surviving, vec![vec![0, 1, 2]; 3]);
    }

    #[test]
    fn unconstrained_and_singleton() {
        let inst = CspInstance::new(vec![Domain::new(vec![4, 7]).unwrap()]);
        let res = run_acids(&inst, Direction::Ds).unwrap();
        let (f, l) = extract_bound_solutions(&inst, &res).unwrap();
        assert_eq!((f.values(&inst), l.values(&inst)), (vec![4], vec![7]));

        let mut inst = CspInstance::new(vec![Domain::new(vec![3]).unwrap(), Domain::new(vec![5]).unwrap()]);
        let c = RowConvexConstraint::from_pairs(VarId(0), VarId(1), 1, &[Some((0, 0))]).unwrap();
        inst.add_constraint(c).unwrap();
        let res = run_acids(&inst, Direction::Ds).unwrap();
        let (f, l) = extract_bound_solutions(&inst, &res).unwrap();
        assert_eq!(f, l);
    }

    #[test]
    fn us_direction() {
        let inst = fixtures::us_antidiag();
        assert!(matches!(run_acids(&inst, Direction::Ds), Err(Error::ClassMismatch { .. })));
        let res = run_acids_with(&inst, Direction::Us, checked()).unwrap();
        assert_eq!(res.surviving, vec![vec![0, 1], vec![0, 1]]);
        assert!(matches!(extract_bound_solutions(&inst, &res), Err(Error::NotApplicable(_))));
    }
}
