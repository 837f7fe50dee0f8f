// SPDX-License-Identifier: Apache-2.0

//! Sample-based verification of reduction witnesses.
//!
//! Every check is exact on the sampled inputs; a sample whose machine run
//! does not settle within the depth schedule is reported as undetermined,
//! never as a pass.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cantor::{format_point_list, CantorError, CantorPoint};
use crate::transducer::{run_with_schedule, Problem, RunError, Stream, TransducerError, WitnessPair};
use crate::truthtable::{TableError, TruthTable};

/// Column budgets tried in turn before a sample is declared undetermined.
pub const DEPTH_SCHEDULE: [usize; 4] = [64, 256, 1024, 4096];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("threshold {0} is not proper")]
    Improper(CantorPoint),
    #[error("brute force is limited to n <= 4, got n={0}")]
    TooLarge(usize),
    #[error("boundary check needs one-dimensional non-constant step problems")]
    NotBoundary,
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error(transparent)]
    Transducer(#[from] TransducerError),
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undetermined,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Undetermined => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub inputs: String,
    pub outputs: String,
    pub expected: u32,
    pub target_answer: Option<u32>,
    pub post_answer: Option<u32>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Undetermined {
    pub inputs: String,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryOutcome {
    pub status: Status,
    pub output: Option<String>,
    pub expected: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub status: Status,
    pub samples: usize,
    pub failures: Vec<Failure>,
    pub undetermined: Vec<Undetermined>,
    pub boundary: Option<BoundaryOutcome>,
}

impl VerificationReport {
    fn settle(&mut self) {
        self.failures.sort();
        self.undetermined.sort();
        let boundary = self.boundary.as_ref().map(|b| b.status);
        self.status = if !self.failures.is_empty() || boundary == Some(Status::Fail) {
            Status::Fail
        } else if !self.undetermined.is_empty() || boundary == Some(Status::Undetermined) {
            Status::Undetermined
        } else {
            Status::Pass
        };
    }

    pub fn with_boundary(mut self, b: BoundaryOutcome) -> Self {
        self.boundary = Some(b);
        self.settle();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "status={} samples={} failures={} undetermined={}\n",
            self.status,
            self.samples,
            self.failures.len(),
            self.undetermined.len()
        );
        for f in &self.failures {
            let show = |a: Option<u32>| a.map_or("-".to_string(), |a| a.to_string());
            s.push_str(&format!(
                "failure inputs={} outputs={} expected={} target={} post={}\n",
                f.inputs,
                f.outputs,
                f.expected,
                show(f.target_answer),
                show(f.post_answer)
            ));
        }
        for u in &self.undetermined {
            s.push_str(&format!("undetermined inputs={} depth={}\n", u.inputs, u.depth));
        }
        if let Some(b) = &self.boundary {
            s.push_str(&format!("boundary status={} {}\n", b.status, b.detail));
        }
        s
    }
}

/// Result of checking one input tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleOutcome {
    Pass { depth: usize },
    Fail(Failure),
    Undetermined(Undetermined),
}

fn show_outputs(outputs: &[Stream]) -> String {
    outputs
        .iter()
        .map(|s| match s {
            Stream::Total(p) => p.to_string(),
            Stream::Finite(bits) => format!("{}…", crate::truthtable::bits_to_string(bits)),
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn check_sample(w: &WitnessPair, xs: &[CantorPoint], schedule: &[usize]) -> Result<SampleOutcome, VerifyError> {
    let expected = w.source.eval(xs)?;
    let out = match run_with_schedule(&w.pre, xs, schedule) {
        Ok(out) => out,
        Err(RunError::Undetermined { depth, .. }) => {
            return Ok(SampleOutcome::Undetermined(Undetermined {
                inputs: format_point_list(xs),
                depth,
            }))
        }
        Err(RunError::Transducer(e)) => return Err(e.into()),
    };
    let target_answer = match out.points() {
        Some(ys) => Some(w.target.eval(&ys)?),
        None => None,
    };
    let post_answer = target_answer.and_then(|a| w.post.apply(a, xs));
    if post_answer == Some(expected) {
        return Ok(SampleOutcome::Pass { depth: out.depth });
    }
    Ok(SampleOutcome::Fail(Failure {
        inputs: format_point_list(xs),
        outputs: show_outputs(&out.outputs),
        expected,
        target_answer,
        post_answer,
        depth: out.depth,
    }))
}

/// Runs the witness on every sample and compares against the source problem.
pub fn check_witness(
    w: &WitnessPair,
    samples: &[Vec<CantorPoint>],
    schedule: &[usize],
) -> Result<VerificationReport, VerifyError> {
    w.check_arities()?;
    let mut report = VerificationReport {
        status: Status::Pass,
        samples: samples.len(),
        failures: Vec::new(),
        undetermined: Vec::new(),
        boundary: None,
    };
    for xs in samples {
        match check_sample(w, xs, schedule)? {
            SampleOutcome::Pass { .. } => {}
            SampleOutcome::Fail(f) => report.failures.push(f),
            SampleOutcome::Undetermined(u) => report.undetermined.push(u),
        }
    }
    report.settle();
    Ok(report)
}

/// Polarity of a one-dimensional non-constant step problem: `true` for `1 - s_α`.
fn polarity(p: &Problem) -> Option<(bool, &CantorPoint)> {
    match p {
        Problem::StepF { table, thresholds } if table.dim() == 1 && table.get(0) != table.get(1) => {
            Some((table.get(0), &thresholds[0]))
        }
        _ => None,
    }
}

/// Runs the pre-processor on `α` itself; the output must be exactly `β`.
/// A strong post must be the identity up to the polarities of the two
/// problems.
pub fn boundary_check(
    w: &WitnessPair,
    alpha: &CantorPoint,
    beta: &CantorPoint,
    schedule: &[usize],
) -> Result<BoundaryOutcome, VerifyError> {
    if !alpha.is_proper() {
        return Err(VerifyError::Improper(alpha.clone()));
    }
    let (Some((ps, _)), Some((pt, _))) = (polarity(&w.source), polarity(&w.target)) else {
        return Err(VerifyError::NotBoundary);
    };
    w.check_arities()?;
    let outcome = |status, output: Option<String>, detail: String| BoundaryOutcome {
        status,
        output,
        expected: beta.to_string(),
        detail,
    };
    let out = match run_with_schedule(&w.pre, std::slice::from_ref(alpha), schedule) {
        Ok(out) => out,
        Err(RunError::Undetermined { depth, .. }) => {
            return Ok(outcome(Status::Undetermined, None, format!("no repetition within {depth} columns")))
        }
        Err(RunError::Transducer(e)) => return Err(e.into()),
    };
    let shown = show_outputs(&out.outputs);
    match out.outputs[0].total() {
        Some(y) if y == beta => {}
        _ => return Ok(outcome(Status::Fail, Some(shown.clone()), format!("output {shown} differs from {beta}"))),
    }
    if w.post.is_strong() {
        let want = if ps ^ pt {
            crate::transducer::PostMap::negation()
        } else {
            crate::transducer::PostMap::identity()
        };
        if w.post != want {
            return Ok(outcome(Status::Fail, Some(shown), format!("post {} is not {want}", w.post)));
        }
    }
    Ok(outcome(Status::Pass, Some(shown), "output equals target threshold".into()))
}

/// Points around `α` used by every verification: `α`, and `(α↾k)0^ω`,
/// `(α↾k)1^ω` for `k ≤ |prefix| + 2|period|`.
pub fn boundary_family(alpha: &CantorPoint) -> Vec<CantorPoint> {
    let reach = alpha.prefix().len() + 2 * alpha.period().len();
    let mut set = BTreeSet::new();
    set.insert(alpha.clone());
    for k in 0..=reach {
        set.insert(alpha.truncate_fill(k, false));
        set.insert(alpha.truncate_fill(k, true));
    }
    set.into_iter().collect()
}

fn random_point(rng: &mut ChaCha8Rng) -> CantorPoint {
    let prefix: Vec<bool> = (0..rng.random_range(0..6)).map(|_| rng.random()).collect();
    let period: Vec<bool> = (0..rng.random_range(1..4)).map(|_| rng.random()).collect();
    CantorPoint::new(prefix, period).expect("nonempty period")
}

/// Deterministic sample tuples for arity `n`.
///
/// The mandatory part is always present: every boundary point repeated in
/// all coordinates, and two representatives of each of the `2^n` truth
/// vector cells. Seeded random tuples then fill up to `count`.
pub fn sample_points(alpha: &CantorPoint, n: usize, count: usize, seed: u64) -> Result<Vec<Vec<CantorPoint>>, VerifyError> {
    if !alpha.is_proper() {
        return Err(VerifyError::Improper(alpha.clone()));
    }
    let pool = boundary_family(alpha);
    let (high, low): (Vec<_>, Vec<_>) = pool.iter().cloned().partition(|x| x >= alpha);
    let mut out: Vec<Vec<CantorPoint>> = pool.iter().map(|x| vec![x.clone(); n]).collect();
    for cell in 0..1usize << n {
        for r in 0..2 {
            out.push(
                (0..n)
                    .map(|i| {
                        let side = if cell >> i & 1 == 1 { &high } else { &low };
                        side[(r + i * (r + 1)) % side.len()].clone()
                    })
                    .collect(),
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        out.push(
            (0..n)
                .map(|_| {
                    if rng.random_bool(0.5) {
                        pool[rng.random_range(0..pool.len())].clone()
                    } else {
                        random_point(&mut rng)
                    }
                })
                .collect(),
        );
    }
    Ok(out)
}

/// `l(F)` by depth-first enumeration of all strictly increasing chains.
pub fn brute_force_l(f: &TruthTable) -> Result<usize, VerifyError> {
    let n = f.dim();
    if n > 4 {
        return Err(VerifyError::TooLarge(n));
    }
    fn walk(f: &TruthTable, v: usize, top: usize) -> usize {
        let mut best = 0;
        let mut w = top;
        loop {
            if w != v && w & v == v {
                best = best.max(usize::from(f.get(v) != f.get(w)) + walk(f, w, top));
            }
            if w == 0 {
                break;
            }
            w -= 1;
        }
        best
    }
    let top = (1usize << n) - 1;
    Ok((0..=top).map(|v| walk(f, v, top)).max().unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SearchOutcome {
    Found { failure: Failure, probes: usize },
    Exhausted { probes: usize },
}

/// Heuristic search for an input on which the witness answers wrongly.
///
/// Checks the standard samples first. Each sample that settles at depth `u`
/// is then perturbed one coordinate at a time to `(x_i↾u')0^ω` and
/// `(x_i↾u')1^ω` for `u' ≥ u`, past the point where the answer was locked.
/// Every check counts as one probe.
pub fn counterexample_search(
    w: &WitnessPair,
    alpha: &CantorPoint,
    budget: usize,
    seed: u64,
) -> Result<SearchOutcome, VerifyError> {
    let n = w.source.arity();
    let base = sample_points(alpha, n, 64, seed)?;
    let mut probes = 0;
    let mut locked = Vec::new();
    for xs in &base {
        if probes >= budget {
            return Ok(SearchOutcome::Exhausted { probes });
        }
        probes += 1;
        match check_sample(w, xs, &DEPTH_SCHEDULE)? {
            SampleOutcome::Fail(failure) => return Ok(SearchOutcome::Found { failure, probes }),
            SampleOutcome::Pass { depth } => locked.push((xs, depth)),
            SampleOutcome::Undetermined(_) => {}
        }
    }
    for extra in 0..64 {
        for (xs, depth) in &locked {
            for i in 0..n {
                for b in [false, true] {
                    if probes >= budget {
                        return Ok(SearchOutcome::Exhausted { probes });
                    }
                    let mut ys = (*xs).clone();
                    ys[i] = xs[i].truncate_fill(depth + extra, b);
                    if ys == **xs {
                        continue;
                    }
                    probes += 1;
                    if let SampleOutcome::Fail(failure) = check_sample(w, &ys, &DEPTH_SCHEDULE)? {
                        return Ok(SearchOutcome::Found { failure, probes });
                    }
                }
            }
        }
    }
    Ok(SearchOutcome::Exhausted { probes })
}
