//! Line-oriented instance files.
//!
//! ```text
//! gscsp 1
//! vars 2
//! domain A 1 5 9
//! domain B 2 6 8
//! constraint A B intervals
//!   row 1 2 2          # value of A, lowest and highest supporting value of B
//! end
//! constraint A B diff -3 1   # -3 <= A - B <= 1
//! ```
//!
//! Variables are named by their `domain` line and numbered in declaration
//! order. All domains precede the first constraint. Omitted rows are empty.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{CspInstance, Domain, RowConvexConstraint, SupportInterval, VarId};

const HEADER: &str = "gscsp 1";

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, msg: msg.into() }
}

fn int(tok: &str, line: usize) -> Result<i64> {
    tok.parse().map_err(|_| syntax(line, format!("expected an integer, found `{tok}`")))
}

struct Block {
    line: usize,
    row: VarId,
    col: VarId,
    rows: Vec<Option<SupportInterval>>,
}

pub fn parse(text: &str) -> Result<CspInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, l)) if l.split_whitespace().collect::<Vec<_>>() == ["gscsp", "1"] => {}
        Some((n, l)) => return Err(syntax(n, format!("expected `{HEADER}`, found `{l}`"))),
        None => return Err(syntax(1, "empty file")),
    }
    let n = match lines.next() {
        Some((k, l)) => match l.split_whitespace().collect::<Vec<_>>()[..] {
            ["vars", count] => count
                .parse::<usize>()
                .map_err(|_| syntax(k, format!("invalid variable count `{count}`")))?,
            _ => return Err(syntax(k, "expected `vars <n>`")),
        },
        None => return Err(syntax(1, "missing `vars` line")),
    };

    let mut names: Vec<String> = Vec::new();
    let mut domains: Vec<Domain> = Vec::new();
    let mut inst: Option<CspInstance> = None;
    let mut block: Option<Block> = None;
    let mut last_line = 1;

    for (k, l) in lines {
        last_line = k;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if let Some(b) = block.as_mut() {
            match toks[..] {
                ["row", v, lo, hi] => {
                    let inst = inst.as_ref().expect("blocks open after domains");
                    let (rd, cd) = (inst.domain(b.row), inst.domain(b.col));
                    let lookup = |tok: &str, d: &Domain, var: VarId| -> Result<usize> {
                        let value = int(tok, k)?;
                        d.index_of(value).ok_or_else(|| Error::UnknownValue {
                            line: k,
                            value,
                            var: inst.name(var).to_string(),
                        })
                    };
                    let r = lookup(v, rd, b.row)?;
                    let (lo, hi) = (lookup(lo, cd, b.col)?, lookup(hi, cd, b.col)?);
                    if lo > hi {
                        return Err(syntax(k, "row interval is empty"));
                    }
                    if b.rows[r].is_some() {
                        return Err(syntax(k, format!("row {v} given twice")));
                    }
                    b.rows[r] = Some(SupportInterval::new(lo, hi));
                }
                ["end"] => {
                    let b = block.take().expect("inside a block");
                    let inst = inst_mut(&mut inst);
                    let c = RowConvexConstraint::new(b.row, b.col, inst.domain(b.col).len(), b.rows)?;
                    add(inst, c, b.line)?;
                }
                _ => return Err(syntax(k, "expected `row <v> <lo> <hi>` or `end`")),
            }
            continue;
        }
        match toks[..] {
            ["domain", name, ref vals @ ..] => {
                if inst.is_some() {
                    return Err(syntax(k, "domain after the first constraint"));
                }
                if names.len() == n {
                    return Err(syntax(k, format!("more than {n} domains")));
                }
                if names.iter().any(|x| x == name) {
                    return Err(syntax(k, format!("variable `{name}` declared twice")));
                }
                let vals = vals.iter().map(|t| int(t, k)).collect::<Result<Vec<_>>>()?;
                let d = Domain::new(vals).map_err(|e| syntax(k, e.to_string()))?;
                names.push(name.to_string());
                domains.push(d);
            }
            ["constraint", a, b, ref rest @ ..] => {
                if inst.is_none() {
                    if names.len() != n {
                        return Err(syntax(k, format!("{} of {n} domains declared", names.len())));
                    }
                    inst = Some(CspInstance::with_names(domains.clone(), names.clone())?);
                }
                let inst = inst_mut(&mut inst);
                let var = |name: &str| {
                    inst.var_by_name(name).ok_or_else(|| syntax(k, format!("unknown variable `{name}`")))
                };
                let (row, col) = (var(a)?, var(b)?);
                match *rest {
                    ["intervals"] => {
                        let rows = vec![None; inst.domain(row).len()];
                        block = Some(Block { line: k, row, col, rows });
                    }
                    ["diff", lo, hi] => {
                        let (lo, hi) = (int(lo, k)?, int(hi, k)?);
                        if lo > hi {
                            return Err(syntax(k, "diff bounds out of order"));
                        }
                        let c = RowConvexConstraint::bounded_difference(
                            row,
                            col,
                            inst.domain(row),
                            inst.domain(col),
                            lo,
                            hi,
                        )?;
                        add(inst, c, k)?;
                    }
                    _ => return Err(syntax(k, "expected `intervals` or `diff <lo> <hi>`")),
                }
            }
            _ => return Err(syntax(k, format!("unrecognized line `{l}`"))),
        }
    }
    if block.is_some() {
        return Err(syntax(last_line, "missing `end`"));
    }
    match inst {
        Some(inst) => Ok(inst),
        None if names.len() == n => CspInstance::with_names(domains, names),
        None => Err(syntax(last_line, format!("{} of {n} domains declared", names.len()))),
    }
}

fn inst_mut(inst: &mut Option<CspInstance>) -> &mut CspInstance {
    inst.as_mut().expect("instance built")
}

fn add(inst: &mut CspInstance, c: RowConvexConstraint, line: usize) -> Result<()> {
    match inst.add_constraint(c) {
        Err(Error::SelfConstraint(v)) => Err(syntax(line, format!("constraint relates {} to itself", inst.name(v)))),
        other => other,
    }
}

/// Canonical text: domains in variable order, constraints sorted by
/// `(row, column)` variable and always in `intervals` form.
pub fn serialize(inst: &CspInstance) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "vars {}", inst.num_vars()).unwrap();
    for (v, d) in inst.domains().iter().enumerate() {
        write!(out, "domain {}", inst.name(VarId(v))).unwrap();
        for x in d.values() {
            write!(out, " {x}").unwrap();
        }
        out.push('\n');
    }
    let mut cons: Vec<&RowConvexConstraint> = inst.constraints().iter().collect();
    cons.sort_by_key(|c| (c.row_var(), c.col_var()));
    for c in cons {
        out.push_str(&serialize_constraint(inst, c));
    }
    out
}

/// One `constraint ... intervals` block.
pub fn serialize_constraint(inst: &CspInstance, c: &RowConvexConstraint) -> String {
    let (rd, cd) = (inst.domain(c.row_var()), inst.domain(c.col_var()));
    let mut out = format!("constraint {} {} intervals\n", inst.name(c.row_var()), inst.name(c.col_var()));
    for (r, iv) in c.non_empty_rows() {
        writeln!(out, "  row {} {} {}", rd.value(r), cd.value(iv.lo), cd.value(iv.hi)).unwrap();
    }
    out.push_str("end\n");
    out
}
