// SPDX-License-Identifier: Apache-2.0

//! The `wsteps` command line.
//!
//! Exit codes: 0 pass, 1 fail, 2 undetermined, 3 parse error, 4 refusal or
//! other error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::cantor::CantorPoint;
use crate::dot::hypercube_dot;
use crate::injury::{parse_opponents, parse_quadruples, run_diagonalization, run_injury};
use crate::normalize::{compile_reduction, normalize_to_k};
use crate::transducer::witness::Certificate;
use crate::transducer::Problem;
use crate::truthtable::TruthTable;
use crate::verify::{boundary_check, check_witness, sample_points, DEPTH_SCHEDULE};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_OTHER: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "wsteps", version, about = "Alternation invariants and reduction witnesses for step functions")]
pub struct Cli {
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest column budget for exact runs.
    #[arg(long, global = true, default_value_t = 4096)]
    pub depth: usize,
    /// Append a Graphviz diagram (analyze, normalize).
    #[arg(long, global = true)]
    pub dot: bool,
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print l(F), completeness, homogeneity and an optimal chain.
    Analyze {
        /// Table file, or inline `n:bits`.
        table: String,
    },
    /// Flip a table to its normal form K_{n,l}.
    Normalize { table: String },
    /// Compile a certificate for s^F_α ≤ s^G_α.
    Compile {
        source: String,
        target: String,
        #[arg(long, default_value = "(01)")]
        alpha: String,
    },
    /// Check a certificate on seeded samples.
    Verify {
        certificate: PathBuf,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the finite-injury construction against an opponent list.
    Injury {
        opponents: PathBuf,
        #[arg(long, default_value_t = 1000)]
        stages: usize,
    },
    /// Run the finite-extension diagonalization on a quadruple list.
    Diag {
        quadruples: PathBuf,
        #[arg(long, default_value_t = 10)]
        stages: usize,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn parse_err(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message: e.to_string(),
    }
}

fn other_err(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_OTHER,
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| other_err(format!("{}: {e}", path.display())))
}

/// A table given as a file path or inline as `n:bits`.
fn load_table(arg: &str) -> Result<TruthTable, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        TruthTable::parse(&read(path)?).map_err(|e| parse_err(format!("{arg}: {e}")))
    } else {
        TruthTable::parse_inline(arg).map_err(|e| parse_err(format!("{arg}: {e}")))
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn schedule(depth: usize) -> Vec<usize> {
    let mut s: Vec<usize> = DEPTH_SCHEDULE.iter().copied().filter(|&d| d < depth).collect();
    s.push(depth);
    s
}

/// Thresholds whose boundary families seed the samples for `p`.
fn sample_thresholds(p: &Problem) -> Vec<CantorPoint> {
    let mut ts = match p {
        Problem::StepF { thresholds, .. } | Problem::MultiStep { thresholds } => thresholds.clone(),
        Problem::Lpo => vec![CantorPoint::ones()],
    };
    ts.sort();
    ts.dedup();
    ts
}

fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    let mut out = String::new();
    let code = match &cli.command {
        Command::Analyze { table } => {
            let t = load_table(table)?;
            let c = t.classify();
            let chain = t.optimal_covering_chain();
            out.push_str(&format!(
                "n={} l={} complete={} homogeneous={}\n",
                t.dim(),
                c.alternations,
                yes(c.complete),
                yes(c.homogeneous)
            ));
            out.push_str(&format!("chain={} word={}\n", chain, chain.level_word()));
            if let Some(w) = t.level_word() {
                out.push_str(&format!("level_word={w}\n"));
            }
            if cli.dot {
                out.push_str(&hypercube_dot(&t, Some(&chain)));
            }
            EXIT_PASS
        }
        Command::Normalize { table } => {
            let t = load_table(table)?;
            let r = normalize_to_k(&t).map_err(other_err)?;
            out.push_str(&format!("negated={}\n", yes(r.negated)));
            for f in &r.flips {
                out.push_str(&format!("{f}\n"));
            }
            out.push_str(&r.table.to_text());
            if cli.dot {
                out.push_str(&hypercube_dot(&r.table, Some(&r.table.optimal_covering_chain())));
            }
            EXIT_PASS
        }
        Command::Compile { source, target, alpha } => {
            let (f, g) = (load_table(source)?, load_table(target)?);
            let alpha: CantorPoint = alpha.parse().map_err(parse_err)?;
            let plan = compile_reduction(&f, &g, &alpha).map_err(other_err)?;
            out.push_str(&plan.certificate.to_text());
            EXIT_PASS
        }
        Command::Verify {
            certificate,
            samples,
            json,
        } => {
            let cert = Certificate::parse(&read(certificate)?).map_err(parse_err)?;
            let w = cert.witness().map_err(other_err)?;
            let sched = schedule(cli.depth);
            let mut tuples = Vec::new();
            for (i, t) in sample_thresholds(&w.source).iter().enumerate() {
                let seed = cli.seed.wrapping_add(i as u64);
                tuples.extend(sample_points(t, w.source.arity(), *samples, seed).map_err(other_err)?);
            }
            let mut report = check_witness(&w, &tuples, &sched).map_err(other_err)?;
            if let (Problem::StepF { table: ft, thresholds: fa }, Problem::StepF { table: gt, thresholds: ga }) =
                (&w.source, &w.target)
            {
                if ft.dim() == 1 && gt.dim() == 1 && ft.get(0) != ft.get(1) && gt.get(0) != gt.get(1) {
                    let b = boundary_check(&w, &fa[0], &ga[0], &sched).map_err(other_err)?;
                    report = report.with_boundary(b);
                }
            }
            out.push_str(&if *json { report.to_json() + "\n" } else { report.to_text() });
            report.status.exit_code()
        }
        Command::Injury { opponents, stages } => {
            let ops = parse_opponents(&read(opponents)?).map_err(parse_err)?;
            let r = run_injury(&ops, *stages).map_err(other_err)?;
            out.push_str(&r.log_text());
            out.push_str(&r.summary());
            EXIT_PASS
        }
        Command::Diag { quadruples, stages } => {
            let qs = parse_quadruples(&read(quadruples)?).map_err(parse_err)?;
            let r = run_diagonalization(&qs, *stages).map_err(other_err)?;
            out.push_str(&r.log_text());
            EXIT_PASS
        }
    };
    Ok((out, code))
}

/// Runs the command line with explicit arguments and streams; returns the
/// exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_OTHER
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_PASS
            };
        }
    };
    log::debug!("{cli:?}");
    match execute(&cli) {
        Ok((text, code)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_OTHER
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
