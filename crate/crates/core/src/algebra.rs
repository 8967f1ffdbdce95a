//! Transposition, intersection and composition of staircase constraints,
//! each in a constant number of linear sweeps over the interval rows.
//!
//! Results are exact relations. When the exact relation is not one interval
//! per row (possible when empty rows sit inside a staircase), the operation
//! returns [`Error::NotRepresentable`]; [`transpose_hull`] is the variant the
//! engines use, which keeps exact row minima, maxima and emptiness.

use crate::classify::{gs_direction, is_ds, is_us};
use crate::error::{Error, Result};
use crate::model::{Direction, RowConvexConstraint, SupportInterval};
use crate::ops::OpCount;

pub fn transpose(c: &RowConvexConstraint) -> Result<RowConvexConstraint> {
    transpose_counted(c, &mut OpCount::default())
}

pub fn transpose_counted(c: &RowConvexConstraint, ops: &mut OpCount) -> Result<RowConvexConstraint> {
    let dir = gs_direction(c).ok_or(Error::NotGs)?;
    let t = hull(c, dir, ops);
    if !hull_is_exact(c, &t, ops) {
        return Err(Error::NotRepresentable);
    }
    Ok(t)
}

/// Transpose whose row `u` is `[first row containing u, last row containing u]`.
///
/// Row minima, maxima and emptiness are exact; interior membership is exact
/// unless `c` has an empty row strictly inside some column's support.
pub fn transpose_hull(c: &RowConvexConstraint, dir: Direction) -> RowConvexConstraint {
    hull(c, dir, &mut OpCount::default())
}

fn hull(c: &RowConvexConstraint, dir: Direction, ops: &mut OpCount) -> RowConvexConstraint {
    let filled: Vec<(usize, SupportInterval)> = c.non_empty_rows().collect();
    let cols = c.col_len();
    let mut first = vec![None; cols];
    let mut last = vec![None; cols];

    // Row images move right (DS) or left (US) as rows increase, so the
    // first row containing u is found by a cursor moving monotonically in
    // u, and likewise for the last row.
    match dir {
        Direction::Ds => {
            let mut k = 0;
            for u in 0..cols {
                while k < filled.len() && filled[k].1.hi < u {
                    k += 1;
                    ops.tick();
                }
                ops.tick();
                if k < filled.len() && filled[k].1.lo <= u {
                    first[u] = Some(filled[k].0);
                }
            }
            let mut k = filled.len();
            for u in (0..cols).rev() {
                while k > 0 && filled[k - 1].1.lo > u {
                    k -= 1;
                    ops.tick();
                }
                ops.tick();
                if k > 0 && filled[k - 1].1.hi >= u {
                    last[u] = Some(filled[k - 1].0);
                }
            }
        }
        Direction::Us => {
            let mut k = 0;
            for u in (0..cols).rev() {
                while k < filled.len() && filled[k].1.lo > u {
                    k += 1;
                    ops.tick();
                }
                ops.tick();
                if k < filled.len() && filled[k].1.hi >= u {
                    first[u] = Some(filled[k].0);
                }
            }
            let mut k = filled.len();
            for u in 0..cols {
                while k > 0 && filled[k - 1].1.hi < u {
                    k -= 1;
                    ops.tick();
                }
                ops.tick();
                if k > 0 && filled[k - 1].1.lo <= u {
                    last[u] = Some(filled[k - 1].0);
                }
            }
        }
    }

    let rows = first
        .into_iter()
        .zip(last)
        .map(|(f, l)| match (f, l) {
            (Some(f), Some(l)) => Some(SupportInterval::new(f, l)),
            _ => None,
        })
        .collect();
    RowConvexConstraint::new(c.col_var(), c.row_var(), c.row_len(), rows)
        .expect("hull rows index the original row domain")
}

/// Compares each hull width against the true number of rows covering the
/// column, counted with a difference array.
fn hull_is_exact(c: &RowConvexConstraint, t: &RowConvexConstraint, ops: &mut OpCount) -> bool {
    let mut delta = vec![0i64; c.col_len() + 1];
    for (_, iv) in c.non_empty_rows() {
        delta[iv.lo] += 1;
        delta[iv.hi + 1] -= 1;
        ops.tick();
    }
    let mut covering = 0;
    for u in 0..c.col_len() {
        covering += delta[u];
        ops.tick();
        let width = t.image(u).map_or(0, |iv| iv.len() as i64);
        if width != covering {
            return false;
        }
    }
    true
}

fn common_direction(a: &RowConvexConstraint, b: &RowConvexConstraint) -> Result<Direction> {
    if is_ds(a) && is_ds(b) {
        Ok(Direction::Ds)
    } else if is_us(a) && is_us(b) {
        Ok(Direction::Us)
    } else if gs_direction(a).is_none() || gs_direction(b).is_none() {
        Err(Error::NotGs)
    } else {
        Err(Error::MixedClasses)
    }
}

pub fn intersect(a: &RowConvexConstraint, b: &RowConvexConstraint) -> Result<RowConvexConstraint> {
    intersect_counted(a, b, &mut OpCount::default())
}

pub fn intersect_counted(
    a: &RowConvexConstraint,
    b: &RowConvexConstraint,
    ops: &mut OpCount,
) -> Result<RowConvexConstraint> {
    if a.row_var() != b.row_var()
        || a.col_var() != b.col_var()
        || a.row_len() != b.row_len()
        || a.col_len() != b.col_len()
    {
        return Err(Error::DomainMismatch);
    }
    common_direction(a, b)?;
    let rows = a
        .rows()
        .iter()
        .zip(b.rows())
        .map(|(x, y)| {
            ops.tick();
            let (x, y) = ((*x)?, (*y)?);
            let (lo, hi) = (x.lo.max(y.lo), x.hi.min(y.hi));
            (lo <= hi).then(|| SupportInterval::new(lo, hi))
        })
        .collect();
    RowConvexConstraint::new(a.row_var(), a.col_var(), a.col_len(), rows)
}

/// Relational product: `(u, w)` is in the result iff some `v` has
/// `(u, v)` in `a` and `(v, w)` in `b`. DS∘DS and US∘US are both DS.
pub fn compose(a: &RowConvexConstraint, b: &RowConvexConstraint) -> Result<RowConvexConstraint> {
    compose_counted(a, b, &mut OpCount::default())
}

pub fn compose_counted(
    a: &RowConvexConstraint,
    b: &RowConvexConstraint,
    ops: &mut OpCount,
) -> Result<RowConvexConstraint> {
    if a.col_var() != b.row_var() || a.col_len() != b.row_len() {
        return Err(Error::DomainMismatch);
    }
    let dir = common_direction(a, b)?;
    let mid = b.row_len();

    // nearest non-empty row of b at or after / at or before each index
    let mut next_filled = vec![usize::MAX; mid + 1];
    for v in (0..mid).rev() {
        next_filled[v] = if b.image(v).is_some() { v } else { next_filled[v + 1] };
        ops.tick();
    }
    let mut prev_filled = vec![usize::MAX; mid];
    let mut last = usize::MAX;
    for v in 0..mid {
        if b.image(v).is_some() {
            last = v;
        }
        prev_filled[v] = last;
        ops.tick();
    }
    // breaks[v]: number of disconnected consecutive non-empty row pairs of b
    // ending at or before v
    let mut breaks = vec![0usize; mid];
    let mut prev: Option<SupportInterval> = None;
    let mut count = 0;
    for v in 0..mid {
        if let Some(iv) = b.image(v) {
            if let Some(p) = prev {
                let connected = iv.lo <= p.hi + 1 && p.lo <= iv.hi + 1;
                if !connected {
                    count += 1;
                }
            }
            prev = Some(iv);
        }
        breaks[v] = count;
        ops.tick();
    }

    let mut rows = Vec::with_capacity(a.row_len());
    for u in 0..a.row_len() {
        ops.tick();
        let Some(img) = a.image(u) else {
            rows.push(None);
            continue;
        };
        let (lo_row, hi_row) = (next_filled[img.lo], prev_filled[img.hi]);
        if lo_row == usize::MAX || hi_row == usize::MAX || lo_row > hi_row {
            rows.push(None);
            continue;
        }
        if breaks[hi_row] != breaks[lo_row] {
            return Err(Error::NotRepresentable);
        }
        let (first, last) = (b.image(lo_row).unwrap(), b.image(hi_row).unwrap());
        let iv = match dir {
            Direction::Ds => SupportInterval::new(first.lo, last.hi),
            Direction::Us => SupportInterval::new(last.lo, first.hi),
        };
        rows.push(Some(iv));
    }
    RowConvexConstraint::new(a.row_var(), b.col_var(), b.col_len(), rows)
}
