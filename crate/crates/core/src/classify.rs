//! Class membership predicates for binary constraints.
//!
//! Interval-encoded constraints are row convex by construction. Dense
//! relations are judged on their reduced form (empty rows and columns
//! dropped), where support sets are intervals over the non-empty columns.
//! On that form, down staircase coincides exactly with "min-closed and
//! max-closed".

use std::fmt;

use crate::model::{Direction, Grid, RowConvexConstraint};

/// One of the two total orders on a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Le,
    Ge,
}

impl Order {
    pub const ALL: [Order; 2] = [Order::Le, Order::Ge];

    fn idx(self) -> usize {
        match self {
            Order::Le => 0,
            Order::Ge => 1,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Order::Le => "<=",
            Order::Ge => ">=",
        })
    }
}

/// Results of every class predicate for one constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassReport {
    pub row_convex: bool,
    pub ds: bool,
    pub us: bool,
    pub crc: bool,
    pub min_closed: bool,
    pub max_closed: bool,
    staircase: [[bool; 2]; 2],
}

impl ClassReport {
    /// `(alpha, beta)`-monotonicity.
    pub fn staircase(&self, alpha: Order, beta: Order) -> bool {
        self.staircase[alpha.idx()][beta.idx()]
    }

    /// True if any of the four orientations is monotone.
    pub fn any_staircase(&self) -> bool {
        self.staircase.iter().flatten().any(|&b| b)
    }

    pub fn gs(&self) -> bool {
        self.ds || self.us
    }
}

/// Nondecreasing (DS) or nonincreasing (US) endpoints over the non-empty rows.
pub fn is_direction(c: &RowConvexConstraint, dir: Direction) -> bool {
    let mut prev = None;
    for (_, iv) in c.non_empty_rows() {
        if let Some((lo, hi)) = prev {
            let ok = match dir {
                Direction::Ds => lo <= iv.lo && hi <= iv.hi,
                Direction::Us => lo >= iv.lo && hi >= iv.hi,
            };
            if !ok {
                return false;
            }
        }
        prev = Some((iv.lo, iv.hi));
    }
    true
}

pub fn is_ds(c: &RowConvexConstraint) -> bool {
    is_direction(c, Direction::Ds)
}

pub fn is_us(c: &RowConvexConstraint) -> bool {
    is_direction(c, Direction::Us)
}

/// The staircase class of `c`, preferring DS when it is both.
pub fn gs_direction(c: &RowConvexConstraint) -> Option<Direction> {
    if is_ds(c) {
        Some(Direction::Ds)
    } else if is_us(c) {
        Some(Direction::Us)
    } else {
        None
    }
}

pub fn classify(c: &RowConvexConstraint) -> ClassReport {
    let report = classify_grid(&c.to_dense());
    debug_assert!(report.row_convex);
    debug_assert_eq!(report.ds, is_ds(c));
    debug_assert_eq!(report.us, is_us(c));
    report
}

/// Classifies an arbitrary dense relation.
pub fn classify_grid(g: &Grid) -> ClassReport {
    let (rows, cols) = (g.rows(), g.cols());

    // rank of each non-empty column in the reduced form
    let mut col_rank = vec![usize::MAX; cols];
    let mut next = 0;
    for c in 0..cols {
        if (0..rows).any(|r| g.get(r, c)) {
            col_rank[c] = next;
            next += 1;
        }
    }

    let mut row_convex = true;
    let mut images = Vec::new();
    for r in 0..rows {
        let ranks: Vec<usize> = (0..cols).filter(|&c| g.get(r, c)).map(|c| col_rank[c]).collect();
        if let (Some(&lo), Some(&hi)) = (ranks.first(), ranks.last()) {
            if hi - lo + 1 != ranks.len() {
                row_convex = false;
            }
            images.push((lo, hi));
        }
    }

    let (ds, us, crc) = if row_convex {
        let pairs = || images.windows(2).map(|w| (w[0], w[1]));
        let ds = pairs().all(|((a, b), (c, d))| a <= c && b <= d);
        let us = pairs().all(|((a, b), (c, d))| a >= c && b >= d);
        // consecutive reduced images overlap or touch
        let crc = pairs().all(|((a, b), (c, d))| c <= b + 1 && d + 1 >= a);
        (ds, us, crc)
    } else {
        (false, false, false)
    };

    let tuples = g.tuples();
    let mut min_closed = true;
    let mut max_closed = true;
    'outer: for (i, &(u, v)) in tuples.iter().enumerate() {
        for &(u2, v2) in &tuples[i + 1..] {
            if min_closed && !g.get(u.min(u2), v.min(v2)) {
                min_closed = false;
            }
            if max_closed && !g.get(u.max(u2), v.max(v2)) {
                max_closed = false;
            }
            if !min_closed && !max_closed {
                break 'outer;
            }
        }
    }

    let mut staircase = [[false; 2]; 2];
    for alpha in Order::ALL {
        for beta in Order::ALL {
            staircase[alpha.idx()][beta.idx()] = is_monotone(g, &tuples, alpha, beta);
        }
    }

    ClassReport { row_convex, ds, us, crc, min_closed, max_closed, staircase }
}

/// `(alpha, beta)`-monotone: every member stays a member when the row moves
/// one step in the `alpha` direction or the column one step in the `beta`
/// direction. Closure under single steps gives closure under all steps.
fn is_monotone(g: &Grid, tuples: &[(usize, usize)], alpha: Order, beta: Order) -> bool {
    tuples.iter().all(|&(r, c)| {
        let row_step = match alpha {
            Order::Le => r.checked_sub(1),
            Order::Ge => (r + 1 < g.rows()).then_some(r + 1),
        };
        let col_step = match beta {
            Order::Le => c.checked_sub(1),
            Order::Ge => (c + 1 < g.cols()).then_some(c + 1),
        };
        row_step.is_none_or(|r2| g.get(r2, c)) && col_step.is_none_or(|c2| g.get(r, c2))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::VarId;

    fn le_relation() -> Grid {
        Grid::from_fn(3, 3, |r, c| r <= c)
    }

    #[test]
    fn less_or_equal_relation() {
        let rep = classify_grid(&le_relation());
        assert!(rep.row_convex && rep.ds && !rep.us);
        assert!(rep.min_closed && rep.max_closed);
        assert!(rep.staircase(Order::Le, Order::Ge));
        assert!(!rep.staircase(Order::Ge, Order::Le));
        assert!(!rep.staircase(Order::Le, Order::Le));
        assert!(rep.crc);
    }

    #[test]
    fn antidiagonal_pair() {
        let inst = fixtures::us_antidiag();
        let rep = classify(&inst.constraints()[0]);
        assert!(rep.row_convex && rep.us && !rep.ds);
        assert!(!rep.min_closed && !rep.max_closed);
        assert!(rep.crc);
    }

    #[test]
    fn fig2a_is_ds() {
        let rep = classify(&fixtures::fig2a());
        assert!(rep.ds && !rep.us && rep.crc);
        assert!(rep.min_closed && rep.max_closed);
    }

    #[test]
    fn empty_relation_is_both() {
        let c = RowConvexConstraint::from_pairs(VarId(0), VarId(1), 3, &[None, None, None]).unwrap();
        let rep = classify(&c);
        assert!(rep.ds && rep.us && rep.crc && rep.min_closed && rep.max_closed);
        assert!(rep.any_staircase());
    }

    #[test]
    fn reduced_form_row_convexity() {
        // column 1 is empty, so row 0 is an interval over the reduced columns
        let g = Grid::from_rows(&[[1u8, 0, 1]]).unwrap();
        let rep = classify_grid(&g);
        assert!(rep.row_convex && rep.ds && rep.min_closed && rep.max_closed);

        let g = Grid::from_rows(&[[1u8, 0, 1], [0, 1, 0]]).unwrap();
        let rep = classify_grid(&g);
        assert!(!rep.row_convex && !rep.ds && !rep.us && !rep.crc);
        assert!(!(rep.min_closed && rep.max_closed));
    }

    #[test]
    fn crc_but_not_gs() {
        // images [1,1], [0,2], [1,1]: connected, endpoints not monotone
        let c = RowConvexConstraint::from_pairs(
            VarId(0),
            VarId(1),
            3,
            &[Some((1, 1)), Some((0, 2)), Some((1, 1))],
        )
        .unwrap();
        let rep = classify(&c);
        assert!(rep.crc && !rep.ds && !rep.us);
    }

    #[test]
    fn staircase_orientations() {
        // (>=, <=): closed going down and left
        let g = Grid::from_fn(3, 3, |r, c| c <= r);
        let rep = classify_grid(&g);
        assert!(rep.staircase(Order::Ge, Order::Le) && rep.ds);
        // (<=, <=): closed going up and left
        let g = Grid::from_fn(3, 3, |r, c| r + c <= 2);
        let rep = classify_grid(&g);
        assert!(rep.staircase(Order::Le, Order::Le) && rep.us && !rep.ds);
        // (>=, >=)
        let g = Grid::from_fn(3, 3, |r, c| r + c >= 2);
        let rep = classify_grid(&g);
        assert!(rep.staircase(Order::Ge, Order::Ge) && rep.us);
    }
}
