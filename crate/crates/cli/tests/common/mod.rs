#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn gscsp(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gscsp"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

// (golden name, expected exit code, arguments)
pub const CASES: &[(&str, i32, &str)] = &[
    ("classify_cyclone", 0, "classify cyclone.gscsp"),
    ("classify_us_antidiag", 0, "classify us_antidiag.gscsp"),
    ("classify_fig2a", 0, "classify fig2a.gscsp"),
    ("ac_acids_cyclone", 0, "ac cyclone.gscsp --engine acids --check-invariants"),
    ("ac_ac3_cyclone", 0, "ac cyclone.gscsp --engine ac3"),
    ("ac_us_antidiag", 0, "ac us_antidiag.gscsp --direction us"),
    ("ac_infeasible", 1, "ac infeasible.gscsp"),
    ("ac_mixed", 3, "ac mixed.gscsp"),
    ("solve_dscsp_cyclone", 0, "solve cyclone.gscsp --engine dscsp"),
    ("solve_acids_cyclone", 0, "solve cyclone.gscsp --engine acids"),
    ("solve_brute_cyclone", 0, "solve cyclone.gscsp --engine brute"),
    ("solve_dscsp_infeasible", 1, "solve infeasible.gscsp --engine dscsp"),
    ("solve_acids_infeasible", 1, "solve infeasible.gscsp --engine acids"),
    ("solve_acids_us", 3, "solve us_antidiag.gscsp --engine acids"),
    ("solve_dscsp_us", 3, "solve us_antidiag.gscsp --engine dscsp"),
    ("solve_bad_value", 2, "solve bad_value.gscsp"),
    ("solve_duplicate", 2, "solve duplicate.gscsp"),
    ("solve_missing_file", 2, "solve no_such_file.gscsp"),
    ("oracle_cyclone", 0, "oracle cyclone.gscsp"),
    ("algebra_transpose_fig2a", 0, "algebra transpose fig2a.gscsp --pair a b"),
    ("algebra_transpose_reversed", 0, "algebra transpose fig2a.gscsp --pair b a"),
    ("algebra_intersect_fig2a", 0, "algebra intersect fig2a.gscsp --pair a b --with fig2a_upper.gscsp"),
    ("algebra_compose_ds", 0, "algebra compose compose_ds.gscsp --pair I J --then J K"),
    ("algebra_compose_mixed", 3, "algebra compose mixed.gscsp --pair X Y --then Y Z"),
    ("gen_random_ds", 0, "gen --kind random-ds --n 4 --d 4 --seed 7 --topology cycle"),
    ("gen_bounded_diff", 0, "gen --kind bounded-diff --n 3 --d 3 --density 0.4 --seed 2 --topology random:3"),
    ("gen_bad_spec", 2, "gen --kind random-us --n 2 --d 3 --topology cycle"),
    ("usage_unknown_engine", 2, "solve cyclone.gscsp --engine magic"),
];

/// Runs every golden case; returns one message per mismatch.
pub fn golden_failures() -> Vec<String> {
    let dir = fixtures().join("golden");
    let mut failures = Vec::new();
    for &(name, code, args) in CASES {
        let argv: Vec<&str> = args.split_whitespace().collect();
        let (got_code, out, err) = gscsp(&argv);
        let want_out = std::fs::read_to_string(dir.join(format!("{name}.out"))).unwrap();
        let want_err = std::fs::read_to_string(dir.join(format!("{name}.err"))).unwrap();
        if got_code != code || out != want_out || err != want_err {
            failures.push(format!("{name}: exit {got_code} (want {code})\nstdout:\n{out}\nstderr:\n{err}"));
        }
    }
    failures
}
