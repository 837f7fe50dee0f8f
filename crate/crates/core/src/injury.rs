// SPDX-License-Identifier: Apache-2.0

//! Bounded simulators for two stagewise constructions against a finite list
//! of opponents: a finite-injury construction of `A ≡_1 B` with
//! `s_α | s_β`, and a finite-extension diagonalization building thresholds
//! that separate `s^G` from `s^F`.
//!
//! Opponents are eventually-copying machines with input-independent post
//! tables, so every probe is computed exactly.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cantor::CantorPoint;
use crate::transducer::witness::parse_compact_post;
use crate::transducer::{run, run_finite, run_with_schedule, PostMap, Problem, RunError, Stage, Stream, Transducer, TransducerError, WitnessPair};
use crate::truthtable::{bits_to_string, TableError, TruthTable};
use crate::verify::{check_sample, SampleOutcome, VerifyError, DEPTH_SCHEDULE};

/// Column budget for the exact runs that decide waiting and condition (i).
const EXACT_BUDGET: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InjuryError {
    #[error("stage budget must be positive")]
    NoStages,
    #[error("opponent {index}: {message}")]
    Opponent { index: usize, message: String },
    #[error("quadruple {index}: G and F are trivially comparable")]
    TriviallyComparable { index: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Transducer(#[from] TransducerError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// A candidate reduction: pre-processing stages and a post table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Opponent {
    pub stages: Vec<Stage>,
    pub pre: Transducer,
    pub post: PostMap,
}

impl Opponent {
    pub fn new(stages: Vec<Stage>, post: PostMap) -> Result<Self, TransducerError> {
        if matches!(post, PostMap::Localize { .. }) {
            return Err(TransducerError::Range("opponent posts are answer tables".into()));
        }
        let pre = Stage::build_all(&stages)?;
        Ok(Opponent { stages, pre, post })
    }

    fn answer(&self, b: u32) -> Option<u32> {
        self.post.apply(b, &[])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadruple {
    pub g: TruthTable,
    pub f: TruthTable,
    pub opponent: Opponent,
}

struct Block {
    line: usize,
    header: Vec<(String, String)>,
    stages: Vec<Stage>,
}

fn parse_blocks(text: &str, head: &str) -> Result<Vec<Block>, InjuryError> {
    let mut blocks = Vec::new();
    let mut open: Option<Block> = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let err = |message: String| InjuryError::Parse { line, message };
        let (word, rest) = l.split_once(' ').unwrap_or((l, ""));
        match (word, open.as_mut()) {
            (w, None) if w == head => {
                let header = rest
                    .split_whitespace()
                    .map(|kv| {
                        kv.split_once('=')
                            .map(|(k, v)| (k.to_string(), v.to_string()))
                            .ok_or_else(|| err(format!("expected key=value, found {kv:?}")))
                    })
                    .collect::<Result<_, _>>()?;
                open = Some(Block {
                    line,
                    header,
                    stages: Vec::new(),
                });
            }
            ("stage", Some(b)) => b.stages.push(rest.parse().map_err(err)?),
            ("end", Some(_)) => {
                let b = open.take().expect("open block");
                if b.stages.is_empty() {
                    return Err(err("block has no stages".into()));
                }
                blocks.push(b);
            }
            (w, _) => return Err(err(format!("unexpected {w:?}"))),
        }
    }
    if open.is_some() {
        return Err(InjuryError::Parse {
            line: last + 1,
            message: "missing end".into(),
        });
    }
    Ok(blocks)
}

fn header_value<'a>(b: &'a Block, key: &str) -> Result<&'a str, InjuryError> {
    b.header
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| InjuryError::Parse {
            line: b.line,
            message: format!("missing {key}="),
        })
}

fn block_opponent(b: &Block) -> Result<Opponent, InjuryError> {
    let err = |message: String| InjuryError::Parse { line: b.line, message };
    let post = parse_compact_post(header_value(b, "post")?).map_err(err)?;
    Opponent::new(b.stages.clone(), post).map_err(|e| err(e.to_string()))
}

/// Opponent list, one block per opponent:
///
/// ```text
/// opponent post=01
/// stage identity n=1
/// end
/// ```
pub fn parse_opponents(text: &str) -> Result<Vec<Opponent>, InjuryError> {
    parse_blocks(text, "opponent")?.iter().map(block_opponent).collect()
}

/// Quadruple list, one block per quadruple:
///
/// ```text
/// quadruple g=2:0110 f=2:0001 post=1-
/// stage identity n=2
/// end
/// ```
pub fn parse_quadruples(text: &str) -> Result<Vec<Quadruple>, InjuryError> {
    parse_blocks(text, "quadruple")?
        .iter()
        .map(|b| {
            let table = |key| {
                TruthTable::parse_inline(header_value(b, key)?).map_err(|e| InjuryError::Parse {
                    line: b.line,
                    message: e.to_string(),
                })
            };
            Ok(Quadruple {
                g: table("g")?,
                f: table("f")?,
                opponent: block_opponent(b)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Attended since its last initialization.
    Satisfied,
    /// Will never require attention unless injured.
    ProvablyWaiting,
    Waiting,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Satisfied => "satisfied",
            Status::ProvablyWaiting => "provably-waiting",
            Status::Waiting => "waiting",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Requirement {
    pub marker: usize,
    pub status: Status,
    pub initializations: usize,
    pub attentions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Attended,
    Initialized,
    Satisfied,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Attended => "attended",
            Action::Initialized => "initialized",
            Action::Satisfied => "satisfied",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Event {
    pub stage: usize,
    pub req: usize,
    pub action: Action,
    pub detail: String,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage={} req={} action={} detail={}",
            self.stage, self.req, self.action, self.detail
        )
    }
}

/// Finite approximation of `A` and `B` plus the requirement markers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjuryState {
    pub stage: usize,
    /// Numbers enumerated into `A`; the coding bits `4n+2`, `4n+3` are implicit.
    pub enumerated: BTreeSet<usize>,
    pub requirements: Vec<Requirement>,
    /// Last stage at which anything happened.
    pub quiescent_from: usize,
}

impl InjuryState {
    fn new(requirements: usize) -> Self {
        InjuryState {
            stage: 0,
            enumerated: BTreeSet::new(),
            requirements: (0..requirements)
                .map(|k| Requirement {
                    marker: 4 * k,
                    status: Status::Waiting,
                    initializations: 0,
                    attentions: 0,
                })
                .collect(),
            quiescent_from: 0,
        }
    }

    pub fn a(&self, x: usize) -> bool {
        x % 4 >= 2 || self.enumerated.contains(&x)
    }

    pub fn b(&self, x: usize) -> bool {
        self.a(x ^ 1)
    }

    fn horizon(&self) -> usize {
        self.enumerated.last().map_or(0, |&x| (x / 4 + 1) * 4)
    }

    fn point(&self, bit: impl Fn(usize) -> bool) -> CantorPoint {
        let prefix = (0..self.horizon()).map(bit).collect();
        CantorPoint::new(prefix, vec![false, false, true, true]).expect("nonempty period")
    }

    /// `α_s`, the characteristic sequence of `A_s`.
    pub fn alpha(&self) -> CantorPoint {
        self.point(|x| self.a(x))
    }

    /// `β_s`, the characteristic sequence of `B_s`.
    pub fn beta(&self) -> CantorPoint {
        self.point(|x| self.b(x))
    }

    /// Coding bits, the `B` mirror and marker order over the decided region.
    pub fn check_invariants(&self) -> Result<(), String> {
        let reach = self.horizon() + 8;
        for x in 0..reach {
            if x % 4 >= 2 && !self.a(x) {
                return Err(format!("coding bit {x} missing"));
            }
            if self.b(2 * (x / 2)) != self.a(2 * (x / 2) + 1) || self.b(2 * (x / 2) + 1) != self.a(2 * (x / 2)) {
                return Err(format!("B does not mirror A at {x}"));
            }
        }
        for (k, r) in self.requirements.iter().enumerate() {
            if r.marker % 4 != 0 {
                return Err(format!("marker {k} = {} is not a multiple of 4", r.marker));
            }
            if k > 0 && self.requirements[k - 1].marker >= r.marker {
                return Err(format!("markers {} and {k} out of order", k - 1));
            }
        }
        Ok(())
    }
}

/// The two ways an attention defeats an opponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Refutation {
    /// The output on the probe leaves the other threshold, so the machine
    /// cannot map the own threshold onto the other one.
    Boundary,
    /// The post answers 1 on this input although the own step function is 0
    /// there.
    Probe(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjuryRun {
    pub state: InjuryState,
    pub log: Vec<Event>,
    /// How each requirement's latest attention refutes its opponent.
    pub witnesses: Vec<Option<Refutation>>,
}

impl InjuryRun {
    pub fn log_text(&self) -> String {
        self.log.iter().map(|e| format!("{e}\n")).collect()
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "stages={} quiescent_from={} alpha={} beta={}\n",
            self.state.stage,
            self.state.quiescent_from,
            self.state.alpha(),
            self.state.beta()
        );
        for (k, r) in self.state.requirements.iter().enumerate() {
            s.push_str(&format!(
                "req={k} marker={} status={} attentions={} initializations={}\n",
                r.marker, r.status, r.attentions, r.initializations
            ));
        }
        s
    }
}

/// Which side of the construction requirement `k` works on: `(own, other)`.
fn sides(state: &InjuryState, k: usize) -> (CantorPoint, CantorPoint) {
    if k.is_multiple_of(2) {
        (state.alpha(), state.beta())
    } else {
        (state.beta(), state.alpha())
    }
}

fn target_word(other: &CantorPoint, m: usize) -> Vec<bool> {
    let mut t = other.prefix_bits(m);
    t.extend([true, false]);
    t
}

/// Decides whether a requirement that has not been attended can never
/// require attention while `α↾(m+2)` stays fixed: the output on the limit
/// probe `(α↾m)01·1^ω` is shorter than `m+2`, or it extends `(β↾m)10` and
/// the post never answers 1 on 1.
fn provably_waiting(state: &InjuryState, k: usize, op: &Opponent) -> bool {
    let m = state.requirements[k].marker;
    let (own, other) = sides(state, k);
    let mut prefix = own.prefix_bits(m);
    prefix.push(false);
    let probe = CantorPoint::new(prefix, vec![true]).expect("nonempty period");
    let out = match run(&op.pre, &[probe], EXACT_BUDGET) {
        Ok(out) => out,
        Err(_) => return false,
    };
    let bits = match &out.outputs[0] {
        Stream::Finite(bits) if bits.len() < m + 2 => return true,
        Stream::Finite(bits) => bits[..m + 2].to_vec(),
        Stream::Total(p) => p.prefix_bits(m + 2),
    };
    bits == target_word(&other, m) && op.answer(1) != Some(1)
}

/// Runs the finite-injury construction for `stages` stages.
///
/// Requirement `2e` attacks opponent `e` as a reduction of `s_α` to `s_β`,
/// requirement `2e+1` as a reduction of `s_β` to `s_α`. Once every
/// requirement is satisfied or provably waiting nothing can change any more
/// and the remaining stages are skipped.
pub fn run_injury(opponents: &[Opponent], stages: usize) -> Result<InjuryRun, InjuryError> {
    if stages == 0 {
        return Err(InjuryError::NoStages);
    }
    for (index, op) in opponents.iter().enumerate() {
        if op.pre.arity_in() != 1 || op.pre.arity_out() != 1 {
            return Err(InjuryError::Opponent {
                index,
                message: format!("expected a 1->1 machine, found {}->{}", op.pre.arity_in(), op.pre.arity_out()),
            });
        }
    }
    let count = 2 * opponents.len();
    let mut state = InjuryState::new(count);
    let mut log = Vec::new();
    let mut witnesses = vec![None; count];
    let mut used_max = count.saturating_sub(1) * 4;
    for s in 1..=stages {
        state.stage = s;
        let mut acted = false;
        for k in 0..count.min(s) {
            let m = state.requirements[k].marker;
            if state.enumerated.contains(&m) || state.enumerated.contains(&(m + 1)) {
                continue;
            }
            let op = &opponents[k / 2];
            let (own, other) = sides(&state, k);
            let mut probe = own.prefix_bits(m);
            probe.extend([false, true]);
            probe.extend(std::iter::repeat_n(true, s));
            let out = run_finite(&op.pre, &[probe])?.remove(0);
            if out.len() < m + 2 {
                continue;
            }
            let disagrees = out[..m + 2] != target_word(&other, m)[..];
            let post_one = op.answer(1) == Some(1);
            if !disagrees && !post_one {
                continue;
            }
            let fired = match (disagrees, post_one) {
                (true, true) => "prefix+post",
                (true, false) => "prefix",
                _ => "post",
            };
            witnesses[k] = Some(if disagrees {
                Refutation::Boundary
            } else {
                let mut wit = own.prefix_bits(m);
                wit.push(false);
                Refutation::Probe(CantorPoint::new(wit, vec![true]).expect("nonempty").to_string())
            });
            log.push(Event {
                stage: s,
                req: k,
                action: Action::Attended,
                detail: format!("cond={fired} marker={m} output={}", bits_to_string(&out[..m + 2])),
            });
            // The enumerated number, as a position of the requirement's own set.
            let own_x = if disagrees { m + 1 } else { m };
            let flip = if k % 2 == 0 { 0 } else { 1 };
            state.enumerated.insert(own_x ^ flip);
            for x in m + 2..s {
                state.enumerated.insert(x ^ flip);
            }
            let req = &mut state.requirements[k];
            req.attentions += 1;
            req.status = Status::Satisfied;
            log.push(Event {
                stage: s,
                req: k,
                action: Action::Satisfied,
                detail: format!(
                    "enumerated={} into={} bulk={}",
                    own_x,
                    if k % 2 == 0 { "A" } else { "B" },
                    if s > m + 2 { format!("{}..{}", m + 2, s - 1) } else { "none".into() }
                ),
            });
            let mut next = (used_max.max(s) / 4 + 1) * 4;
            for j in k + 1..count {
                let r = &mut state.requirements[j];
                r.marker = next;
                r.status = Status::Waiting;
                r.initializations += 1;
                used_max = next;
                log.push(Event {
                    stage: s,
                    req: j,
                    action: Action::Initialized,
                    detail: format!("marker={next}"),
                });
                next += 4;
            }
            acted = true;
            break;
        }
        state.check_invariants().map_err(InjuryError::Internal)?;
        if acted {
            state.quiescent_from = s;
            continue;
        }
        if s >= count {
            let mut settled = true;
            for k in 0..count {
                if state.requirements[k].status == Status::Satisfied {
                    continue;
                }
                if provably_waiting(&state, k, &opponents[k / 2]) {
                    state.requirements[k].status = Status::ProvablyWaiting;
                } else {
                    state.requirements[k].status = Status::Waiting;
                    settled = false;
                }
            }
            if settled {
                state.stage = stages;
                break;
            }
        }
    }
    Ok(InjuryRun { state, log, witnesses })
}

/// Each requirement is attended at most once between initializations.
pub fn check_attention_discipline(log: &[Event]) -> Result<(), String> {
    let mut attended = std::collections::BTreeMap::new();
    for e in log {
        match e.action {
            Action::Attended => {
                if attended.insert(e.req, e.stage).is_some() {
                    return Err(format!("req={} attended twice without injury (stage {})", e.req, e.stage));
                }
            }
            Action::Initialized => {
                attended.remove(&e.req);
            }
            Action::Satisfied => {}
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Replay {
    Refuted(String),
    NotRefuted(String),
    Undetermined,
}

/// Replays opponent `k / 2` against the final approximations, following
/// the refutation recorded at the latest attention of requirement `k`.
pub fn replay_requirement(run: &InjuryRun, opponents: &[Opponent], k: usize) -> Result<Option<Replay>, InjuryError> {
    let Some(refutation) = &run.witnesses[k] else {
        return Ok(None);
    };
    let (own, other) = sides(&run.state, k);
    let op = &opponents[k / 2];
    match refutation {
        Refutation::Boundary => match run_with_schedule(&op.pre, std::slice::from_ref(&own), &DEPTH_SCHEDULE) {
            Ok(out) => {
                let shown = match &out.outputs[0] {
                    Stream::Total(p) => p.to_string(),
                    Stream::Finite(b) => format!("{}…", bits_to_string(b)),
                };
                if out.outputs[0].total() == Some(&other) {
                    Ok(Some(Replay::NotRefuted(format!("pre maps {own} to {shown}"))))
                } else {
                    Ok(Some(Replay::Refuted(format!("pre maps {own} to {shown}, not {other}"))))
                }
            }
            Err(RunError::Undetermined { .. }) => Ok(Some(Replay::Undetermined)),
            Err(RunError::Transducer(e)) => Err(e.into()),
        },
        Refutation::Probe(input) => {
            let x: CantorPoint = input
                .parse()
                .map_err(|e: crate::cantor::CantorError| InjuryError::Internal(e.to_string()))?;
            let w = WitnessPair {
                pre: op.pre.clone(),
                post: op.post.clone(),
                source: Problem::single(&own),
                target: Problem::single(&other),
            };
            Ok(Some(match check_sample(&w, &[x], &DEPTH_SCHEDULE)? {
                SampleOutcome::Fail(f) => Replay::Refuted(format!("wrong answer on {}", f.inputs)),
                SampleOutcome::Pass { .. } => Replay::NotRefuted(format!("correct answer on {input}")),
                SampleOutcome::Undetermined(_) => Replay::Undetermined,
            }))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagCase {
    /// No stage handles a quadruple.
    Default,
    /// No `m` makes the output long enough.
    NoOutput,
    /// The post table is not a bijection on `{0, 1}`.
    PostNotBijective,
    Split,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagStage {
    pub stage: usize,
    pub quadruple: Option<usize>,
    pub case: DiagCase,
    pub m: Option<usize>,
    pub tau: Vec<String>,
    pub fixed: Vec<(usize, bool)>,
    pub x: Option<Vec<bool>>,
    /// The three bits appended to each `σ_k`.
    pub extensions: Vec<[bool; 3]>,
}

impl fmt::Display for DiagStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let case = match self.case {
            DiagCase::Default => "default",
            DiagCase::NoOutput => "no-output",
            DiagCase::PostNotBijective => "post-not-bijective",
            DiagCase::Split => "split",
        };
        write!(f, "stage={} case={case}", self.stage)?;
        if let Some(q) = self.quadruple {
            write!(f, " quad={q}")?;
        }
        if let Some(m) = self.m {
            write!(f, " m={m} tau={}", self.tau.join(","))?;
            let fixed: Vec<String> = self.fixed.iter().map(|(i, b)| format!("{i}:{}", u8::from(*b))).collect();
            write!(f, " fixed={}", if fixed.is_empty() { "-".into() } else { fixed.join(",") })?;
        }
        if let Some(x) = &self.x {
            write!(f, " x={}", bits_to_string(x))?;
        }
        let ext: Vec<String> = self.extensions.iter().map(|e| bits_to_string(e)).collect();
        write!(f, " ext={}", ext.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagRun {
    pub stages: Vec<DiagStage>,
    /// `σ_k[S]` for `k = 1..=K`.
    pub sigmas: Vec<Vec<bool>>,
}

pub const DIAG_NOTE: &str = "note: thresholds are the raw limits of the stage strings; the 1-equivalence coding step is not applied";

impl DiagRun {
    pub fn sigma_at(&self, k: usize, s: usize) -> Vec<bool> {
        self.sigmas[k][..3 * s].to_vec()
    }

    /// `β_k = σ_k[S]·1^ω`.
    pub fn beta(&self, k: usize) -> CantorPoint {
        CantorPoint::new(self.sigmas[k].clone(), vec![true]).expect("nonempty period")
    }

    pub fn log_text(&self) -> String {
        let mut s = format!("{DIAG_NOTE}\n");
        for st in &self.stages {
            s.push_str(&format!("{st}\n"));
        }
        for (k, sigma) in self.sigmas.iter().enumerate() {
            s.push_str(&format!("sigma{}={}\n", k + 1, bits_to_string(sigma)));
        }
        s
    }
}

fn ext(bits: &str) -> [bool; 3] {
    let b: Vec<bool> = bits.chars().map(|c| c == '1').collect();
    [b[0], b[1], b[2]]
}

fn least_vertex(n: usize, pred: impl Fn(usize) -> bool) -> Option<Vec<bool>> {
    (0..1usize << n).find(|&v| pred(v)).map(|v| (0..n).map(|i| v >> i & 1 == 1).collect())
}

/// Runs the finite-extension diagonalization for `stages` stages over
/// `K = max(1, max n)` thresholds. Stage `s+1` acts for quadruple `s`.
pub fn run_diagonalization(quadruples: &[Quadruple], stages: usize) -> Result<DiagRun, InjuryError> {
    if stages == 0 {
        return Err(InjuryError::NoStages);
    }
    for (index, q) in quadruples.iter().enumerate() {
        let n = q.f.dim();
        if q.g.dim() != n || q.opponent.pre.arity_in() != n || q.opponent.pre.arity_out() != n {
            return Err(InjuryError::Opponent {
                index,
                message: format!("arities must all equal n(F)={n}"),
            });
        }
        if TruthTable::trivially_comparable(&q.g, &q.f)?.is_some() {
            return Err(InjuryError::TriviallyComparable { index });
        }
    }
    let big_k = quadruples.iter().map(|q| q.f.dim()).max().unwrap_or(0).max(1);
    let mut sigmas: Vec<Vec<bool>> = vec![Vec::new(); big_k];
    let mut log = Vec::new();
    for s in 0..stages {
        let mut st = DiagStage {
            stage: s + 1,
            quadruple: None,
            case: DiagCase::Default,
            m: None,
            tau: Vec::new(),
            fixed: Vec::new(),
            x: None,
            extensions: vec![ext("000"); big_k],
        };
        if let Some(q) = quadruples.get(s) {
            st.quadruple = Some(s);
            diag_stage(q, &sigmas, &mut st)?;
        }
        for (sigma, e) in sigmas.iter_mut().zip(&st.extensions) {
            sigma.extend(e);
        }
        log.push(st);
    }
    Ok(DiagRun { stages: log, sigmas })
}

fn diag_stage(q: &Quadruple, sigmas: &[Vec<bool>], st: &mut DiagStage) -> Result<(), InjuryError> {
    let n = q.f.dim();
    let len = sigmas[0].len();
    let op = &q.opponent;
    let limit: Vec<CantorPoint> = sigmas[..n]
        .iter()
        .map(|s| {
            let mut p = s.clone();
            p.push(false);
            CantorPoint::new(p, vec![true]).expect("nonempty period")
        })
        .collect();
    let long_enough = match run(&op.pre, &limit, EXACT_BUDGET) {
        Ok(out) => out.outputs.iter().all(|o| match o {
            Stream::Total(_) => true,
            Stream::Finite(b) => b.len() >= len + 3,
        }),
        Err(RunError::Undetermined { .. }) => false,
        Err(RunError::Transducer(e)) => return Err(e.into()),
    };
    if !long_enough {
        st.case = DiagCase::NoOutput;
        return Ok(());
    }
    let (p0, p1) = (op.answer(0), op.answer(1));
    let bijective = matches!((p0, p1), (Some(0), Some(1)) | (Some(1), Some(0)));
    if !bijective {
        let b = [false, true]
            .into_iter()
            .find(|&b| p0 != Some(u32::from(b)) && p1 != Some(u32::from(b)))
            .ok_or_else(|| InjuryError::Internal("no free answer".into()))?;
        let x = least_vertex(n, |v| q.g.get(v) == b)
            .ok_or_else(|| InjuryError::Internal("G is constant".into()))?;
        st.case = DiagCase::PostNotBijective;
        for (e, &xk) in st.extensions.iter_mut().zip(&x[..n]) {
            *e = ext(if xk { "000" } else { "100" });
        }
        st.x = Some(x);
        return Ok(());
    }
    let mut m = 0;
    let tau = loop {
        let inputs: Vec<Vec<bool>> = sigmas[..n]
            .iter()
            .map(|s| {
                let mut p = s.clone();
                p.push(false);
                p.extend(std::iter::repeat_n(true, m));
                p
            })
            .collect();
        let out = run_finite(&op.pre, &inputs)?;
        if out.iter().all(|o| o.len() >= len + 3) {
            break out;
        }
        m += 1;
        if m > EXACT_BUDGET + len {
            return Err(InjuryError::Internal("least m not found".into()));
        }
    };
    let mut fixed = Vec::new();
    for k in 0..n {
        let head = &tau[k][..len + 3];
        let mut lo = sigmas[k].clone();
        lo.extend([false, false, true]);
        let mut hi = sigmas[k].clone();
        hi.extend([true, false, false]);
        if head < &lo[..] {
            fixed.push((k + 1, false));
        } else if head > &hi[..] {
            fixed.push((k + 1, true));
        }
    }
    let idx: Vec<usize> = fixed.iter().map(|f| f.0).collect();
    let bits: Vec<bool> = fixed.iter().map(|f| f.1).collect();
    let fixed_f = q.f.fix_coords(&idx, &bits)?;
    let flips = p0 == Some(1);
    let x = least_vertex(n, |v| q.g.get(v) != (fixed_f.get(v) ^ flips))
        .ok_or_else(|| InjuryError::Internal("G equals the fixed F".into()))?;
    for (k, (e, &xk)) in st.extensions.iter_mut().zip(&x[..n]).enumerate() {
        *e = ext(match (idx.contains(&(k + 1)), xk) {
            (false, true) => "000",
            (false, false) => "110",
            (true, true) => "001",
            (true, false) => "100",
        });
    }
    st.case = DiagCase::Split;
    st.m = Some(m);
    st.tau = tau.iter().map(|t| bits_to_string(t)).collect();
    st.fixed = fixed;
    st.x = Some(x);
    Ok(())
}

/// Replays quadruple `s` on `σ⃗[s]*01^ω` with thresholds `β_k = σ_k[S]·1^ω`.
pub fn replay_quadruple(run: &DiagRun, quadruples: &[Quadruple], s: usize) -> Result<SampleOutcome, InjuryError> {
    let q = &quadruples[s];
    let n = q.f.dim();
    let thresholds: Vec<CantorPoint> = (0..n).map(|k| run.beta(k)).collect();
    let xs: Vec<CantorPoint> = (0..n)
        .map(|k| {
            let mut p = run.sigma_at(k, s);
            p.push(false);
            CantorPoint::new(p, vec![true]).expect("nonempty period")
        })
        .collect();
    let w = WitnessPair {
        pre: q.opponent.pre.clone(),
        post: q.opponent.post.clone(),
        source: Problem::StepF {
            table: q.g.clone(),
            thresholds: thresholds.clone(),
        },
        target: Problem::StepF {
            table: q.f.clone(),
            thresholds,
        },
    };
    Ok(check_sample(&w, &xs, &DEPTH_SCHEDULE)?)
}
