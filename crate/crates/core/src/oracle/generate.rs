//! Seeded instance generation. The stream is `ChaCha8Rng::seed_from_u64`,
//! so a spec always yields the same instance.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{CspInstance, Domain, Grid, RowConvexConstraint, SupportInterval, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// `lo <= X_i - X_j <= hi` windows.
    BoundedDiff,
    RandomDs,
    RandomUs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Chain,
    Cycle,
    /// `c` distinct random pairs with random orientation.
    Random(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    pub d: usize,
    /// Image width as a fraction of the column domain; window width as a
    /// fraction of the value range for bounded differences.
    pub density: f64,
    pub seed: u64,
    pub topology: Topology,
}

impl GenSpec {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.d == 0 {
            return bad("d must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.density) {
            return bad(format!("density {} is outside [0, 1]", self.density));
        }
        let pairs = self.n * (self.n - 1) / 2;
        match self.topology {
            Topology::Cycle if self.n < 3 => bad("a cycle needs at least 3 variables".into()),
            Topology::Random(c) if c > pairs => {
                bad(format!("{c} constraints requested, only {pairs} pairs exist"))
            }
            _ => Ok(()),
        }
    }

    fn pairs(&self, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut pairs: Vec<(usize, usize)> = match self.topology {
            Topology::Chain => (1..n).map(|i| (i - 1, i)).collect(),
            Topology::Cycle => (1..n).map(|i| (i - 1, i)).chain([(n - 1, 0)]).collect(),
            Topology::Random(c) => {
                let all: Vec<(usize, usize)> =
                    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
                sample(rng, all.len(), c)
                    .into_iter()
                    .map(|k| {
                        let (i, j) = all[k];
                        if rng.gen_bool(0.5) {
                            (i, j)
                        } else {
                            (j, i)
                        }
                    })
                    .collect()
            }
        };
        pairs.sort();
        pairs
    }
}

pub fn generate(spec: &GenSpec) -> Result<CspInstance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let span = 3 * spec.d as i64;
    let domains: Vec<Domain> = (0..spec.n)
        .map(|_| {
            let mut vals: Vec<i64> =
                sample(&mut rng, span as usize, spec.d).into_iter().map(|v| v as i64).collect();
            vals.sort_unstable();
            Domain::new(vals).expect("distinct sorted sample")
        })
        .collect();
    let mut inst = CspInstance::new(domains);
    for (i, j) in spec.pairs(&mut rng) {
        let (a, b) = (VarId(i), VarId(j));
        let con = match spec.kind {
            GenKind::BoundedDiff => {
                let width = (spec.density * span as f64).round() as i64;
                let d = spec.d as i64;
                let lo = rng.gen_range(-(width + d)..=d);
                RowConvexConstraint::bounded_difference(a, b, inst.domain(a), inst.domain(b), lo, lo + width)?
            }
            GenKind::RandomDs => random_ds(&mut rng, a, b, spec.d, spec.d, spec.density),
            GenKind::RandomUs => mirror(random_ds(&mut rng, a, b, spec.d, spec.d, spec.density)),
        };
        inst.add_constraint(con)?;
    }
    Ok(inst)
}

/// A down staircase whose non-empty rows form one block and whose
/// consecutive images overlap or touch.
pub(crate) fn random_ds(
    rng: &mut ChaCha8Rng,
    row_var: VarId,
    col_var: VarId,
    rows: usize,
    cols: usize,
    density: f64,
) -> RowConvexConstraint {
    let width = ((density * cols as f64).round() as usize).max(1);
    let gap = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.3) { rng.gen_range(0..=rows / 4) } else { 0 };
    let first = gap(rng).min(rows - 1);
    let last = (rows - 1 - gap(rng)).max(first);
    let mut out = vec![None; rows];
    let lo = rng.gen_range(0..cols.div_ceil(2));
    let hi = (lo + rng.gen_range(0..width)).min(cols - 1);
    let mut cur = SupportInterval::new(lo, hi);
    out[first] = Some(cur);
    for slot in out.iter_mut().take(last + 1).skip(first + 1) {
        let lo = rng.gen_range(cur.lo..=(cur.hi + 1).min(cols - 1));
        let base = cur.hi.max(lo);
        let hi = rng.gen_range(base..=(base + width / 2).min(cols - 1));
        cur = SupportInterval::new(lo, hi);
        *slot = Some(cur);
    }
    RowConvexConstraint::new(row_var, col_var, cols, out).expect("intervals within bounds")
}

/// Reverses the column order, turning a down staircase into an up staircase.
pub(crate) fn mirror(c: RowConvexConstraint) -> RowConvexConstraint {
    let cols = c.col_len();
    let rows = c
        .rows()
        .iter()
        .map(|r| r.map(|iv| SupportInterval::new(cols - 1 - iv.hi, cols - 1 - iv.lo)))
        .collect();
    RowConvexConstraint::new(c.row_var(), c.col_var(), cols, rows).expect("mirrored bounds")
}

fn equality(inst: &CspInstance, a: usize, b: usize) -> RowConvexConstraint {
    let (a, b) = (VarId(a), VarId(b));
    RowConvexConstraint::bounded_difference(a, b, inst.domain(a), inst.domain(b), 0, 0)
        .expect("zero window")
}

/// Bounded-difference chain over `n` variables with domain size `d`.
pub fn diff_chain(n: usize, d: usize, seed: u64) -> CspInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domains = (0..n)
        .map(|_| {
            let mut vals: Vec<i64> =
                sample(&mut rng, 2 * d, d).into_iter().map(|v| v as i64).collect();
            vals.sort_unstable();
            Domain::new(vals).expect("distinct sorted sample")
        })
        .collect();
    let mut inst = CspInstance::new(domains);
    let reach = (d / 8).max(1) as i64;
    for i in 1..n {
        let lo = rng.gen_range(-reach..=0);
        let hi = rng.gen_range(0..=reach);
        let (a, b) = (VarId(i - 1), VarId(i));
        let c = RowConvexConstraint::bounded_difference(a, b, inst.domain(a), inst.domain(b), lo, hi)
            .expect("lo <= hi");
        inst.add_constraint(c).expect("chain pairs are distinct");
    }
    inst
}

/// Equality chain whose smallest solution sits at domain index `< s` for
/// every variable, independent of `d`. Variable `i` holds `100k + i + 1`
/// (matching nothing) below a seeded threshold `p_i < s` and `100k` above.
pub fn planted_chain(n: usize, d: usize, s: usize, seed: u64) -> CspInstance {
    assert!(n < 99 && s >= 1 && s <= d, "planted chain needs n < 99 and 1 <= s <= d");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thresholds: Vec<usize> = (0..n).map(|_| rng.gen_range(0..s)).collect();
    let domains = thresholds
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let vals = (0..d)
                .map(|k| 100 * k as i64 + if k < p { i as i64 + 1 } else { 0 })
                .collect();
            Domain::new(vals).expect("increasing by construction")
        })
        .collect();
    let mut inst = CspInstance::new(domains);
    for i in 1..n {
        let c = equality(&inst, i - 1, i);
        inst.add_constraint(c).expect("chain pairs are distinct");
    }
    inst
}

/// Equality chain with no solution: the last variable holds odd values,
/// all others even ones, so a cursor must cross a whole domain.
pub fn infeasible_chain(n: usize, d: usize, seed: u64) -> CspInstance {
    assert!(n >= 2, "infeasible chain needs two variables");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset = 2 * rng.gen_range(0..d as i64);
    let domains = (0..n)
        .map(|i| {
            let parity = i64::from(i == n - 1);
            Domain::new((0..d as i64).map(|k| offset + 2 * k + parity).collect()).expect("increasing")
        })
        .collect();
    let mut inst = CspInstance::new(domains);
    for i in 1..n {
        let c = equality(&inst, i - 1, i);
        inst.add_constraint(c).expect("chain pairs are distinct");
    }
    inst
}


/// Constraint shapes for [`random_constraint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Independent random interval (or empty) per row.
    RowConvex,
    /// Connected down staircase, as emitted by [`generate`].
    Ds,
    Us,
    /// Down staircase with empty rows anywhere and possibly disjoint
    /// consecutive images.
    LooseDs,
    LooseUs,
}

pub fn random_constraint(seed: u64, shape: Shape, rows: usize, cols: usize, density: f64) -> RowConvexConstraint {
    assert!(rows > 0 && cols > 0, "dimensions must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (VarId(0), VarId(1));
    match shape {
        Shape::RowConvex => {
            let out = (0..rows)
                .map(|_| {
                    rng.gen_bool(density.max(0.2)).then(|| {
                        let lo = rng.gen_range(0..cols);
                        SupportInterval::new(lo, rng.gen_range(lo..cols))
                    })
                })
                .collect();
            RowConvexConstraint::new(a, b, cols, out).expect("intervals within bounds")
        }
        Shape::Ds => random_ds(&mut rng, a, b, rows, cols, density),
        Shape::Us => mirror(random_ds(&mut rng, a, b, rows, cols, density)),
        Shape::LooseDs => loose_ds(&mut rng, rows, cols),
        Shape::LooseUs => mirror(loose_ds(&mut rng, rows, cols)),
    }
}

fn loose_ds(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RowConvexConstraint {
    let filled: Vec<usize> = (0..rows).filter(|_| rng.gen_bool(0.75)).collect();
    let mut los = Vec::with_capacity(filled.len());
    let mut his = Vec::with_capacity(filled.len());
    for _ in &filled {
        let lo = rng.gen_range(0..cols);
        los.push(lo);
        his.push(rng.gen_range(lo..cols));
    }
    // k-th smallest lo never exceeds k-th smallest hi
    los.sort_unstable();
    his.sort_unstable();
    let mut out = vec![None; rows];
    for (k, &r) in filled.iter().enumerate() {
        out[r] = Some(SupportInterval::new(los[k], his[k]));
    }
    RowConvexConstraint::new(VarId(0), VarId(1), cols, out).expect("intervals within bounds")
}

/// Random dense relation with roughly `density` ones.
pub fn random_grid(seed: u64, rows: usize, cols: usize, density: f64) -> Grid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Grid::from_fn(rows, cols, |_, _| rng.gen_bool(density))
}

/// Instance of `n` variables with domain sizes in `1..=d` and random pairs,
/// each constraint of the given shape.
pub fn random_instance(seed: u64, n: usize, d: usize, shape: Shape) -> CspInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domains = (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=d);
            let mut vals: Vec<i64> =
                sample(&mut rng, 3 * d, len).into_iter().map(|v| v as i64).collect();
            vals.sort_unstable();
            Domain::new(vals).expect("distinct sorted sample")
        })
        .collect::<Vec<_>>();
    let mut inst = CspInstance::new(domains);
    let density = rng.gen_range(0.2..0.8);
    for i in 0..n {
        for j in i + 1..n {
            if !rng.gen_bool(0.6) {
                continue;
            }
            let (r, c) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
            let (rl, cl) = (inst.domain(VarId(r)).len(), inst.domain(VarId(c)).len());
            let con = random_constraint(rng.gen(), shape, rl, cl, density).with_vars(VarId(r), VarId(c));
            inst.add_constraint(con).expect("distinct pairs, matching sizes");
        }
    }
    inst
}
