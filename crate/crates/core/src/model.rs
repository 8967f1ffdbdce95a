//! Domains, interval-encoded row-convex constraints and CSP instances.
//!
//! Everything downstream works on domain *indices*. A constraint row is the
//! index of a value in the row variable's domain and its support interval is
//! a closed range of indices into the column variable's domain. Raw integer
//! values only show up when reading or printing instances.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a variable inside a [`CspInstance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The two generalized staircase orientations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Down staircase: row image endpoints nondecreasing down the rows.
    Ds,
    /// Up staircase: row image endpoints nonincreasing down the rows.
    Us,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Ds => write!(f, "down staircase"),
            Direction::Us => write!(f, "up staircase"),
        }
    }
}

/// Sorted, duplicate-free, non-empty set of values for one variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    values: Vec<i64>,
}

impl Domain {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDomain("domain is empty".into()));
        }
        if let Some(w) = values.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDomain(format!(
                "values must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self { values })
    }

    /// Domain `{0, 1, ..., len-1}`.
    pub fn range(len: usize) -> Result<Self> {
        Self::new((0..len as i64).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn value(&self, index: usize) -> i64 {
        self.values[index]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn index_of(&self, value: i64) -> Option<usize> {
        self.values.binary_search(&value).ok()
    }

    pub fn first(&self) -> i64 {
        self.values[0]
    }

    pub fn last(&self) -> i64 {
        self.values[self.values.len() - 1]
    }
}

/// Closed range `[lo, hi]` of column indices supporting one row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SupportInterval {
    pub lo: usize,
    pub hi: usize,
}

impl SupportInterval {
    pub fn new(lo: usize, hi: usize) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    #[inline]
    pub fn contains(&self, col: usize) -> bool {
        self.lo <= col && col <= self.hi
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Dense 0/1 matrix, row-major. Rows index the row domain, columns the
/// column domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, bits: vec![false; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::new(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                g.set(r, c, f(r, c));
            }
        }
        g
    }

    /// Builds a grid from nested rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut g = Self::new(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &bit) in row.iter().enumerate() {
                g.set(r, c, bit != 0);
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.bits[r * self.cols + c] = bit;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Member tuples `(row, col)` in row-major order.
    pub fn tuples(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.push((r, c));
                }
            }
        }
        out
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Binary constraint stored as one optional support interval per row.
///
/// `(r, c)` is in the relation iff `rows[r]` is present and contains `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowConvexConstraint {
    row_var: VarId,
    col_var: VarId,
    col_len: usize,
    rows: Vec<Option<SupportInterval>>,
}

impl RowConvexConstraint {
    pub fn new(
        row_var: VarId,
        col_var: VarId,
        col_len: usize,
        rows: Vec<Option<SupportInterval>>,
    ) -> Result<Self> {
        for (row, iv) in rows.iter().enumerate() {
            if let Some(iv) = iv {
                if iv.lo > iv.hi || iv.hi >= col_len {
                    return Err(Error::InvalidInterval { row, lo: iv.lo, hi: iv.hi, cols: col_len });
                }
            }
        }
        Ok(Self { row_var, col_var, col_len, rows })
    }

    /// Convenience constructor from `(lo, hi)` pairs.
    pub fn from_pairs(
        row_var: VarId,
        col_var: VarId,
        col_len: usize,
        rows: &[Option<(usize, usize)>],
    ) -> Result<Self> {
        for (row, r) in rows.iter().enumerate() {
            if let Some((lo, hi)) = *r {
                if lo > hi {
                    return Err(Error::InvalidInterval { row, lo, hi, cols: col_len });
                }
            }
        }
        let rows = rows.iter().map(|r| r.map(|(lo, hi)| SupportInterval::new(lo, hi))).collect();
        Self::new(row_var, col_var, col_len, rows)
    }

    /// Encodes a dense 0/1 matrix. Every row's ones must be consecutive.
    pub fn from_dense(
        row_var: VarId,
        col_var: VarId,
        row_domain: &Domain,
        col_domain: &Domain,
        grid: &Grid,
    ) -> Result<Self> {
        if grid.rows() != row_domain.len() || grid.cols() != col_domain.len() {
            return Err(Error::DimensionMismatch(format!(
                "grid is {}x{}, domains are {}x{}",
                grid.rows(),
                grid.cols(),
                row_domain.len(),
                col_domain.len()
            )));
        }
        let mut rows = Vec::with_capacity(grid.rows());
        for r in 0..grid.rows() {
            let ones: Vec<usize> = (0..grid.cols()).filter(|&c| grid.get(r, c)).collect();
            match (ones.first(), ones.last()) {
                (Some(&lo), Some(&hi)) => {
                    if hi - lo + 1 != ones.len() {
                        return Err(Error::NotRowConvex { row: r });
                    }
                    rows.push(Some(SupportInterval::new(lo, hi)));
                }
                _ => rows.push(None),
            }
        }
        Self::new(row_var, col_var, grid.cols(), rows)
    }

    pub fn to_dense(&self) -> Grid {
        let mut g = Grid::new(self.rows.len(), self.col_len);
        for (r, iv) in self.rows.iter().enumerate() {
            if let Some(iv) = iv {
                for c in iv.lo..=iv.hi {
                    g.set(r, c, true);
                }
            }
        }
        g
    }

    #[inline]
    pub fn row_var(&self) -> VarId {
        self.row_var
    }

    #[inline]
    pub fn col_var(&self) -> VarId {
        self.col_var
    }

    #[inline]
    pub fn row_len(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn col_len(&self) -> usize {
        self.col_len
    }

    pub fn rows(&self) -> &[Option<SupportInterval>] {
        &self.rows
    }

    /// Support interval of `row`, or `None` for an empty row.
    #[inline]
    pub fn image(&self, row: usize) -> Option<SupportInterval> {
        self.rows[row]
    }

    #[inline]
    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.rows[row].is_some_and(|iv| iv.contains(col))
    }

    pub fn non_empty_rows(&self) -> impl Iterator<Item = (usize, SupportInterval)> + '_ {
        self.rows.iter().enumerate().filter_map(|(r, iv)| iv.map(|iv| (r, iv)))
    }

    /// Same relation attached to a different variable pair.
    pub fn with_vars(mut self, row_var: VarId, col_var: VarId) -> Self {
        self.row_var = row_var;
        self.col_var = col_var;
        self
    }

    /// Compiles `lo <= x_row - x_col <= hi`: row value `v` is supported by
    /// the column values in `[v - hi, v - lo]`.
    pub fn bounded_difference(
        row_var: VarId,
        col_var: VarId,
        row_domain: &Domain,
        col_domain: &Domain,
        lo: i64,
        hi: i64,
    ) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval { row: 0, lo: 0, hi: 0, cols: col_domain.len() });
        }
        let cols = col_domain.values();
        let rows = row_domain
            .values()
            .iter()
            .map(|&v| {
                let first = cols.partition_point(|&w| w < v.saturating_sub(hi));
                let end = cols.partition_point(|&w| w <= v.saturating_sub(lo));
                (first < end).then(|| SupportInterval::new(first, end - 1))
            })
            .collect();
        Self::new(row_var, col_var, cols.len(), rows)
    }
}

/// One value per variable, stored as domain indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn index(&self, var: VarId) -> usize {
        self.0[var.0]
    }

    pub fn values(&self, instance: &CspInstance) -> Vec<i64> {
        self.0.iter().enumerate().map(|(v, &i)| instance.domain(VarId(v)).value(i)).collect()
    }
}

/// A binary CSP with at most one constraint per unordered variable pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    names: Vec<String>,
    domains: Vec<Domain>,
    constraints: Vec<RowConvexConstraint>,
    by_pair: BTreeMap<(VarId, VarId), usize>,
}

impl CspInstance {
    /// Instance with default variable names `x0, x1, ...` and no constraints.
    pub fn new(domains: Vec<Domain>) -> Self {
        let names = (0..domains.len()).map(|i| format!("x{i}")).collect();
        Self { names, domains, constraints: Vec::new(), by_pair: BTreeMap::new() }
    }

    pub fn with_names(domains: Vec<Domain>, names: Vec<String>) -> Result<Self> {
        if names.len() != domains.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} names for {} domains",
                names.len(),
                domains.len()
            )));
        }
        Ok(Self { names, domains, constraints: Vec::new(), by_pair: BTreeMap::new() })
    }

    pub fn add_constraint(&mut self, c: RowConvexConstraint) -> Result<()> {
        let (a, b) = (c.row_var(), c.col_var());
        for v in [a, b] {
            if v.0 >= self.domains.len() {
                return Err(Error::UnknownVariable(v));
            }
        }
        if a == b {
            return Err(Error::SelfConstraint(a));
        }
        if c.row_len() != self.domains[a.0].len() || c.col_len() != self.domains[b.0].len() {
            return Err(Error::DimensionMismatch(format!(
                "constraint ({a}, {b}) is {}x{}, domains are {}x{}",
                c.row_len(),
                c.col_len(),
                self.domains[a.0].len(),
                self.domains[b.0].len()
            )));
        }
        let key = (a.min(b), a.max(b));
        if self.by_pair.contains_key(&key) {
            return Err(Error::DuplicateConstraint(key.0, key.1));
        }
        self.by_pair.insert(key, self.constraints.len());
        self.constraints.push(c);
        Ok(())
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    #[inline]
    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn domain(&self, var: VarId) -> &Domain {
        &self.domains[var.0]
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    pub fn name(&self, var: VarId) -> &str {
        &self.names[var.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name).map(VarId)
    }

    pub fn constraints(&self) -> &[RowConvexConstraint] {
        &self.constraints
    }

    /// The constraint on the unordered pair `{a, b}`, in its stored orientation.
    pub fn constraint_between(&self, a: VarId, b: VarId) -> Option<&RowConvexConstraint> {
        self.by_pair.get(&(a.min(b), a.max(b))).map(|&i| &self.constraints[i])
    }

    /// Largest domain size.
    pub fn max_domain_size(&self) -> usize {
        self.domains.iter().map(Domain::len).max().unwrap_or(0)
    }

    /// Ordered arcs `(i, j)`: both orientations of every constraint.
    pub fn arcs(&self) -> Vec<(VarId, VarId)> {
        let mut arcs: Vec<_> = self
            .constraints
            .iter()
            .flat_map(|c| [(c.row_var(), c.col_var()), (c.col_var(), c.row_var())])
            .collect();
        arcs.sort();
        arcs
    }

    /// Direct evaluation of every constraint.
    pub fn satisfies(&self, a: &Assignment) -> bool {
        a.0.len() == self.num_vars()
            && a.0.iter().enumerate().all(|(v, &i)| i < self.domains[v].len())
            && self.constraints.iter().all(|c| c.contains(a.index(c.row_var()), a.index(c.col_var())))
    }
}
