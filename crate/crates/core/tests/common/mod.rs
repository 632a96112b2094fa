#![allow(dead_code)]

use std::fs;
use std::path::Path;
use std::process::Command;

pub const BIN: &str = env!("CARGO_BIN_EXE_ingham");

pub struct Step {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub status: i32,
}

/// End-to-end fixtures, in order; later steps read grids written by earlier ones.
pub const FIXTURES: &[Step] = &[
    Step { name: "criterion-divergent", args: &["criterion", "--profile", "t/log(e+t)"], status: 0 },
    Step { name: "criterion-csv", args: &["criterion", "--profile", "t^0.5", "--format", "csv"], status: 0 },
    Step { name: "criterion-radial", args: &["criterion", "--profile", "t^0.5", "--dim", "3"], status: 0 },
    Step {
        name: "synthesize",
        args: &["synthesize", "--profile", "t^0.5", "--halfwidth", "1", "--out", "f.grid"],
        status: 0,
    },
    Step { name: "verify-decay", args: &["verify-decay", "f.grid"], status: 0 },
    Step {
        name: "vanish-test-convergent",
        args: &["vanish-test", "--grid", "f.grid", "--eta=-1", "--s", "1", "--profile", "t^0.5"],
        status: 0,
    },
    Step {
        name: "vanish-test-divergent",
        args: &["vanish-test", "--grid", "f.grid", "--eta=-1", "--s", "1", "--profile", "t", "--format", "csv"],
        status: 0,
    },
    Step { name: "lie-analyze", args: &["lie-analyze", "--algebra", "heisenberg1.alg"], status: 0 },
    Step {
        name: "lie-analyze-filiform",
        args: &["lie-analyze", "--algebra", "filiform4", "--seed", "7", "--format", "csv"],
        status: 0,
    },
    Step { name: "plancherel", args: &["plancherel"], status: 0 },
    Step { name: "lemma-slice", args: &["lemma-slice"], status: 0 },
    Step { name: "nilpotent-check", args: &["nilpotent-check", "--profile", "t"], status: 0 },
    Step { name: "central-construct", args: &["central-construct", "--out", "c.grid"], status: 0 },
    Step {
        name: "nilpotent-check-central",
        args: &["nilpotent-check", "--grid", "c.grid", "--profile", "t^0.5", "--lambda-max", "4"],
        status: 0,
    },
    Step {
        name: "plancherel-central-csv",
        args: &["plancherel", "--grid", "c.grid", "--format", "csv", "--out", "plancherel.csv"],
        status: 0,
    },
];

pub struct StepOutput {
    pub name: &'static str,
    pub status: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn ingham(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env("INGHAM_OUT_DIR", dir)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

/// Runs every fixture in `dir`; returns the step outputs and the files left behind.
pub fn run_fixtures(dir: &Path) -> (Vec<StepOutput>, Vec<(String, Vec<u8>)>) {
    let steps = FIXTURES
        .iter()
        .map(|s| {
            let out = ingham(dir, s.args);
            StepOutput {
                name: s.name,
                status: out.status.code().unwrap_or(-1),
                stdout: out.stdout,
                stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
            }
        })
        .collect();
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    (steps, files)
}
