//! Small hand-built instances shared by tests, examples and the CLI.

use crate::model::{CspInstance, Domain, Grid, RowConvexConstraint, VarId};

/// One completion of the classic 5x5 down staircase picture: rows a1..a5,
/// columns b1..b5. Only a few of its facts are pinned (min(a3)=b3,
/// max(a3)=b4, MIN(b1)=[a1,a2], MIN(b3)=[a3,a4], MIN(b5)=[a5],
/// MIN(b2)=MIN(b4)=empty); the rest is a consistent choice.
pub fn fig2a_grid() -> Grid {
    Grid::from_rows(&[
        [1u8, 1, 0, 0, 0],
        [1, 1, 1, 0, 0],
        [0, 0, 1, 1, 0],
        [0, 0, 1, 1, 1],
        [0, 0, 0, 0, 1],
    ])
    .expect("static grid")
}

pub fn fig2a() -> RowConvexConstraint {
    let d = Domain::range(5).expect("static domain");
    RowConvexConstraint::from_dense(VarId(0), VarId(1), &d, &d, &fig2a_grid()).expect("row convex")
}

/// Cyclone pattern: `-3 <= A-B <= 1`, `-2 <= B-C <= 2`, `-2 <= C-A <= 3`
/// over `A={1,5,9}`, `B={2,6,8}` and `C={3,4,10}` (plus `20` when
/// `with_stray` is set).
pub fn cyclone(with_stray: bool) -> CspInstance {
    let c_values = if with_stray { vec![3, 4, 10, 20] } else { vec![3, 4, 10] };
    let domains = vec![
        Domain::new(vec![1, 5, 9]).expect("static domain"),
        Domain::new(vec![2, 6, 8]).expect("static domain"),
        Domain::new(c_values).expect("static domain"),
    ];
    let names = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
    let mut inst = CspInstance::with_names(domains, names).expect("names");
    let (a, b, c) = (VarId(0), VarId(1), VarId(2));
    for (x, y, lo, hi) in [(a, b, -3, 1), (b, c, -2, 2), (c, a, -2, 3)] {
        let con = RowConvexConstraint::bounded_difference(
            x,
            y,
            inst.domain(x),
            inst.domain(y),
            lo,
            hi,
        )
        .expect("valid bounds");
        inst.add_constraint(con).expect("distinct pairs");
    }
    inst
}

/// `A={1}`, `B={6}`, `-3 <= A-B <= 1`: no solution.
pub fn infeasible_pair() -> CspInstance {
    let domains = vec![Domain::new(vec![1]).unwrap(), Domain::new(vec![6]).unwrap()];
    let names = vec!["A".to_string(), "B".to_string()];
    let mut inst = CspInstance::with_names(domains, names).unwrap();
    let c = RowConvexConstraint::bounded_difference(
        VarId(0),
        VarId(1),
        inst.domain(VarId(0)),
        inst.domain(VarId(1)),
        -3,
        1,
    )
    .unwrap();
    inst.add_constraint(c).unwrap();
    inst
}

/// The two-tuple relation `{(1,2), (2,1)}` on `{1,2}^2`: up staircase,
/// neither min- nor max-closed.
pub fn us_antidiag() -> CspInstance {
    let domains = vec![Domain::new(vec![1, 2]).unwrap(), Domain::new(vec![1, 2]).unwrap()];
    let mut inst = CspInstance::new(domains);
    let c = RowConvexConstraint::from_pairs(VarId(0), VarId(1), 2, &[Some((1, 1)), Some((0, 0))])
        .unwrap();
    inst.add_constraint(c).unwrap();
    inst
}
