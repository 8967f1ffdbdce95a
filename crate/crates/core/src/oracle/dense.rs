//! Definitional checks and relational operations on dense 0/1 grids. Slow
//! on purpose: every quantifier is a loop.

use crate::classify::Order;
use crate::model::Grid;

pub fn transpose(g: &Grid) -> Grid {
    Grid::from_fn(g.cols(), g.rows(), |r, c| g.get(c, r))
}

pub fn and(a: &Grid, b: &Grid) -> Grid {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    Grid::from_fn(a.rows(), a.cols(), |r, c| a.get(r, c) && b.get(r, c))
}

/// Boolean matrix product.
pub fn product(a: &Grid, b: &Grid) -> Grid {
    assert_eq!(a.cols(), b.rows());
    Grid::from_fn(a.rows(), b.cols(), |r, c| (0..a.cols()).any(|m| a.get(r, m) && b.get(m, c)))
}

/// Drops empty rows and columns.
pub fn reduce(g: &Grid) -> Grid {
    let rows: Vec<usize> = (0..g.rows()).filter(|&r| (0..g.cols()).any(|c| g.get(r, c))).collect();
    let cols: Vec<usize> = (0..g.cols()).filter(|&c| (0..g.rows()).any(|r| g.get(r, c))).collect();
    Grid::from_fn(rows.len(), cols.len(), |r, c| g.get(rows[r], cols[c]))
}

fn ones(g: &Grid, r: usize) -> Vec<usize> {
    (0..g.cols()).filter(|&c| g.get(r, c)).collect()
}

/// Ones of every row of the reduced form are consecutive.
pub fn row_convex(g: &Grid) -> bool {
    let g = reduce(g);
    (0..g.rows()).all(|r| {
        let o = ones(&g, r);
        o.windows(2).all(|w| w[1] == w[0] + 1)
    })
}

fn images(g: &Grid) -> Vec<(usize, usize)> {
    let g = reduce(g);
    (0..g.rows()).map(|r| {
        let o = ones(&g, r);
        (o[0], o[o.len() - 1])
    })
    .collect()
}

pub fn ds(g: &Grid) -> bool {
    row_convex(g) && images(g).windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1)
}

pub fn us(g: &Grid) -> bool {
    row_convex(g) && images(g).windows(2).all(|w| w[0].0 >= w[1].0 && w[0].1 >= w[1].1)
}

/// Consecutive reduced rows `[a, b]`, `[c, d]` satisfy `c <= b + 1` and
/// `d + 1 >= a`.
pub fn crc(g: &Grid) -> bool {
    row_convex(g) && images(g).windows(2).all(|w| w[1].0 <= w[0].1 + 1 && w[1].1 + 1 >= w[0].0)
}

fn closed(g: &Grid, pick: fn(usize, usize) -> usize) -> bool {
    for a in 0..g.rows() {
        for b in 0..g.cols() {
            for c in 0..g.rows() {
                for d in 0..g.cols() {
                    if g.get(a, b) && g.get(c, d) && !g.get(pick(a, c), pick(b, d)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn min_closed(g: &Grid) -> bool {
    closed(g, std::cmp::min)
}

pub fn max_closed(g: &Grid) -> bool {
    closed(g, std::cmp::max)
}

fn holds(o: Order, x: usize, y: usize) -> bool {
    match o {
        Order::Le => x <= y,
        Order::Ge => x >= y,
    }
}

/// `(u, v)` in `g` implies `(u', v')` in `g` whenever `u' alpha u` and
/// `v' beta v`.
pub fn monotone(g: &Grid, alpha: Order, beta: Order) -> bool {
    for u in 0..g.rows() {
        for v in 0..g.cols() {
            if !g.get(u, v) {
                continue;
            }
            for u2 in 0..g.rows() {
                for v2 in 0..g.cols() {
                    if holds(alpha, u2, u) && holds(beta, v2, v) && !g.get(u2, v2) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_small_grids() {
        let a = Grid::from_rows(&[[1u8, 0], [1, 1]]).unwrap();
        let b = Grid::from_rows(&[[0u8, 1], [1, 0]]).unwrap();
        assert_eq!(product(&a, &b), Grid::from_rows(&[[0u8, 1], [1, 1]]).unwrap());
        assert_eq!(transpose(&a), Grid::from_rows(&[[1u8, 1], [0, 1]]).unwrap());
        assert_eq!(and(&a, &b), Grid::from_rows(&[[0u8, 0], [1, 0]]).unwrap());
    }

    #[test]
    fn definitional_classes() {
        let le = Grid::from_fn(3, 3, |r, c| r <= c);
        assert!(ds(&le) && !us(&le) && crc(&le) && min_closed(&le) && max_closed(&le));
        assert!(monotone(&le, Order::Le, Order::Ge));
        let anti = Grid::from_rows(&[[0u8, 1], [1, 0]]).unwrap();
        assert!(us(&anti) && !ds(&anti) && !min_closed(&anti) && !max_closed(&anti));
    }
}
