// SPDX-License-Identifier: Apache-2.0

//! Execution of transducers, exact on eventually periodic inputs.
//!
//! Past the longest prefix `P` the input columns repeat with period `L`, the
//! lcm of the input periods. Snapshots of the machine state are taken at the
//! depths `P + kL`; once a snapshot repeats, the outputs emitted between the
//! two occurrences repeat forever.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use super::order::OrderTracker;
use super::{Source, Transducer, TransducerError};
use crate::cantor::{lcm, CantorPoint};

/// Default column budget for one exact run.
pub const DEFAULT_BUDGET: usize = 4096;

/// Terminal behavior of one output coordinate at the end of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Copy { source: usize, negate: bool },
    Const(bool),
    Pending,
}

/// One output stream of an exact run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stream {
    Total(CantorPoint),
    /// The machine stops emitting on this coordinate after these bits.
    Finite(Vec<bool>),
}

impl Stream {
    pub fn total(&self) -> Option<&CantorPoint> {
        match self {
            Stream::Total(p) => Some(p),
            Stream::Finite(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub outputs: Vec<Stream>,
    /// Depth after which every output is a fixed repetition.
    pub depth: usize,
    pub routes: Vec<Route>,
}

impl RunOutput {
    /// All outputs, if every one of them is infinite.
    pub fn points(&self) -> Option<Vec<CantorPoint>> {
        self.outputs.iter().map(|s| s.total().cloned()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error(transparent)]
    Transducer(#[from] TransducerError),
    #[error("no repetition within {depth} columns")]
    Undetermined { partial: Vec<Vec<bool>>, depth: usize },
}

#[derive(Debug, Clone)]
struct SelectRunner {
    outputs: Vec<Source>,
    tracker: Option<OrderTracker>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Assign {
    Copy(usize),
    RankIn(u32, usize),
    One,
}

#[derive(Debug, Clone)]
struct KeyLemmaRunner {
    n: usize,
    t_mask: u32,
    /// Tracks the inputs plus, when `T` is empty, a virtual `1^ω` stream.
    tracker: OrderTracker,
    assign: Option<Vec<Assign>>,
    scratch: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Split {
    Equal,
    Less,
    Greater,
}

#[derive(Debug, Clone)]
struct LocalizerRunner {
    points: Vec<CantorPoint>,
    state: Vec<Split>,
    horizon: usize,
    depth: usize,
    buffer: Vec<bool>,
    chosen: Option<usize>,
    arity_out: usize,
}

#[derive(Debug, Clone)]
struct ComposeRunner {
    inner: Runner,
    outer: Runner,
    queues: Vec<VecDeque<bool>>,
    inner_out: Vec<Vec<bool>>,
    column: Vec<bool>,
    inner_arity_out: usize,
}

#[derive(Debug, Clone)]
enum Runner {
    Select(SelectRunner),
    KeyLemma(KeyLemmaRunner),
    Switch(Split),
    Localizer(LocalizerRunner),
    Stall,
    Truncate { limit: usize, seen: usize },
    Compose(Box<ComposeRunner>),
    Product { parts: Vec<Runner>, ins: Vec<usize>, outs: Vec<usize> },
}

impl Runner {
    fn new(t: &Transducer) -> Runner {
        match t {
            Transducer::Select { arity_in, outputs } => {
                let needs = outputs.iter().any(|s| matches!(s, Source::Rank(_)));
                Runner::Select(SelectRunner {
                    outputs: outputs.clone(),
                    tracker: needs.then(|| OrderTracker::new(*arity_in)),
                })
            }
            Transducer::KeyLemma { v } => {
                let n = v.dim();
                let t_mask = v.index() as u32;
                let tracked = if t_mask == 0 { n + 1 } else { n };
                Runner::KeyLemma(KeyLemmaRunner {
                    n,
                    t_mask,
                    tracker: OrderTracker::new(tracked),
                    assign: None,
                    scratch: vec![true; tracked],
                })
            }
            Transducer::SwitchOnSplit => Runner::Switch(Split::Equal),
            Transducer::Localizer { separators } => {
                let points: Vec<CantorPoint> =
                    separators.iter().flat_map(|(lo, up)| [lo.clone(), up.clone()]).collect();
                let horizon = t.horizon().0;
                Runner::Localizer(LocalizerRunner {
                    state: vec![Split::Equal; points.len()],
                    points,
                    horizon,
                    depth: 0,
                    buffer: Vec::new(),
                    chosen: (separators.is_empty()).then_some(0),
                    arity_out: separators.len() + 1,
                })
            }
            Transducer::Stall { .. } => Runner::Stall,
            Transducer::Truncate { limit, .. } => Runner::Truncate { limit: *limit, seen: 0 },
            Transducer::Compose { outer, inner } => {
                let k = inner.arity_out();
                Runner::Compose(Box::new(ComposeRunner {
                    inner: Runner::new(inner),
                    outer: Runner::new(outer),
                    queues: vec![VecDeque::new(); k],
                    inner_out: vec![Vec::new(); k],
                    column: Vec::with_capacity(k),
                    inner_arity_out: k,
                }))
            }
            Transducer::Product(parts) => Runner::Product {
                parts: parts.iter().map(Runner::new).collect(),
                ins: parts.iter().map(Transducer::arity_in).collect(),
                outs: parts.iter().map(Transducer::arity_out).collect(),
            },
        }
    }

    fn step(&mut self, col: &[bool], out: &mut [Vec<bool>]) {
        match self {
            Runner::Select(r) => {
                if let Some(t) = r.tracker.as_mut() {
                    t.refine(col);
                }
                for (o, s) in out.iter_mut().zip(&r.outputs) {
                    o.push(match *s {
                        Source::Input(i) => col[i],
                        Source::NegInput(i) => !col[i],
                        Source::Rank(k) => col[r.tracker.as_ref().expect("tracker").at(k - 1)],
                        Source::Const(b) => b,
                    });
                }
            }
            Runner::KeyLemma(r) => r.step(col, out),
            Runner::Switch(state) => {
                let (x, y) = (col[0], col[1]);
                if *state == Split::Equal && x != y {
                    *state = if !x & y { Split::Less } else { Split::Greater };
                }
                out[0].push(x);
                out[1].push(if *state == Split::Less { x } else { y });
            }
            Runner::Localizer(r) => r.step(col[0], out),
            Runner::Stall => {}
            Runner::Truncate { limit, seen } => {
                if *seen < *limit {
                    *seen += 1;
                    for (o, &b) in out.iter_mut().zip(col) {
                        o.push(b);
                    }
                }
            }
            Runner::Compose(c) => c.step(col, out),
            Runner::Product { parts, ins, outs } => {
                let (mut i0, mut o0) = (0, 0);
                for ((p, &ni), &no) in parts.iter_mut().zip(ins.iter()).zip(outs.iter()) {
                    p.step(&col[i0..i0 + ni], &mut out[o0..o0 + no]);
                    i0 += ni;
                    o0 += no;
                }
            }
        }
    }

    /// Everything the future behavior depends on, without absolute positions.
    fn key(&self, k: &mut Vec<u8>) {
        match self {
            Runner::Select(r) => {
                if let Some(t) = &r.tracker {
                    t.key(k);
                }
            }
            Runner::KeyLemma(r) => {
                r.tracker.key(k);
                match &r.assign {
                    None => k.push(0),
                    Some(a) => {
                        k.push(1);
                        for x in a {
                            match *x {
                                Assign::Copy(i) => k.extend([0, i as u8]),
                                Assign::RankIn(m, j) => {
                                    k.push(1);
                                    k.extend(m.to_le_bytes());
                                    k.push(j as u8);
                                }
                                Assign::One => k.push(2),
                            }
                        }
                    }
                }
            }
            Runner::Switch(s) => k.push(*s as u8),
            Runner::Localizer(r) => {
                k.extend(r.state.iter().map(|s| *s as u8));
                k.extend((r.depth.min(r.horizon) as u64).to_le_bytes());
                match r.chosen {
                    Some(c) => k.extend([1, c as u8]),
                    None => {
                        k.push(0);
                        k.extend(r.buffer.iter().map(|&b| u8::from(b)));
                    }
                }
            }
            Runner::Stall => {}
            Runner::Truncate { limit, seen } => k.extend(((*seen).min(*limit) as u64).to_le_bytes()),
            Runner::Compose(c) => {
                c.inner.key(k);
                k.push(0xfe);
                c.outer.key(k);
                for q in &c.queues {
                    k.push(0xfd);
                    k.extend(q.iter().map(|&b| u8::from(b)));
                }
            }
            Runner::Product { parts, .. } => {
                for p in parts {
                    p.key(k);
                    k.push(0xfc);
                }
            }
        }
    }

    fn route(&self, j: usize) -> Route {
        match self {
            Runner::Select(r) => match r.outputs[j] {
                Source::Input(i) => Route::Copy { source: i, negate: false },
                Source::NegInput(i) => Route::Copy { source: i, negate: true },
                Source::Const(b) => Route::Const(b),
                Source::Rank(k) => {
                    let t = r.tracker.as_ref().expect("tracker");
                    if t.isolated(k - 1) {
                        Route::Copy {
                            source: t.at(k - 1),
                            negate: false,
                        }
                    } else {
                        Route::Pending
                    }
                }
            },
            Runner::KeyLemma(r) => match r.assign.as_ref().map(|a| a[j]) {
                None if r.t_mask >> j & 1 == 1 => Route::Copy { source: j, negate: false },
                None => Route::Pending,
                Some(Assign::Copy(i)) => Route::Copy { source: i, negate: false },
                Some(Assign::One) => Route::Const(true),
                Some(Assign::RankIn(mask, k)) => {
                    let i = r.tracker.rank_in(mask, k);
                    let p = r.tracker.position_of(i);
                    let alone = (0..r.tracker.len()).all(|q| {
                        q == p || mask >> r.tracker.at(q) & 1 == 0 || !same_group(&r.tracker, p, q)
                    });
                    if alone && i < r.n {
                        Route::Copy { source: i, negate: false }
                    } else if alone {
                        Route::Const(true)
                    } else {
                        Route::Pending
                    }
                }
            },
            Runner::Switch(s) => match (*s, j) {
                (Split::Equal, _) => Route::Pending,
                (_, 0) | (Split::Greater, _) => Route::Copy { source: j, negate: false },
                (Split::Less, _) => Route::Copy { source: 0, negate: false },
            },
            Runner::Localizer(r) => match r.chosen {
                Some(c) if c == j => Route::Copy { source: 0, negate: false },
                Some(_) => Route::Const(false),
                None => Route::Pending,
            },
            Runner::Stall => Route::Pending,
            Runner::Truncate { .. } => Route::Copy { source: j, negate: false },
            Runner::Compose(c) => match c.outer.route(j) {
                Route::Copy { source, negate } => match c.inner.route(source) {
                    Route::Copy { source, negate: n2 } => Route::Copy {
                        source,
                        negate: negate ^ n2,
                    },
                    Route::Const(b) => Route::Const(b ^ negate),
                    Route::Pending => Route::Pending,
                },
                other => other,
            },
            Runner::Product { parts, ins, outs } => {
                let (mut i0, mut o0) = (0, 0);
                for ((p, &ni), &no) in parts.iter().zip(ins).zip(outs) {
                    if j < o0 + no {
                        return match p.route(j - o0) {
                            Route::Copy { source, negate } => Route::Copy {
                                source: source + i0,
                                negate,
                            },
                            other => other,
                        };
                    }
                    i0 += ni;
                    o0 += no;
                }
                Route::Pending
            }
        }
    }
}

fn same_group(t: &OrderTracker, p: usize, q: usize) -> bool {
    let (a, b) = (p.min(q), p.max(q));
    (a + 1..=b).all(|r| t.tied_with_previous(r))
}

impl KeyLemmaRunner {
    fn step(&mut self, col: &[bool], out: &mut [Vec<bool>]) {
        let n = self.n;
        self.scratch[..n].copy_from_slice(col);
        self.tracker.refine(&self.scratch);
        if self.assign.is_none() {
            self.try_trigger();
        }
        for (j, o) in out.iter_mut().enumerate() {
            let bit = match self.assign.as_ref().map(|a| a[j]) {
                None => col[j],
                Some(Assign::Copy(i)) => col[i],
                Some(Assign::RankIn(mask, k)) => self.scratch[self.tracker.rank_in(mask, k)],
                Some(Assign::One) => true,
            };
            o.push(bit);
        }
    }

    /// Checks whether every zero coordinate now lies strictly below every
    /// one coordinate, and if so fixes the new routing.
    fn try_trigger(&mut self) {
        let n = self.n;
        let tracked = self.tracker.len();
        let t_set = if self.t_mask == 0 { 1u32 << n } else { self.t_mask };
        let in_t = |i: usize| t_set >> i & 1 == 1;
        let positions: Vec<usize> = (0..tracked).map(|p| self.tracker.at(p)).collect();
        let Some(first_t) = positions.iter().position(|&i| in_t(i)) else {
            return;
        };
        if first_t == 0 || positions[first_t..].iter().any(|&i| !in_t(i)) {
            return;
        }
        if self.tracker.tied_with_previous(first_t) {
            return;
        }
        let mut start = first_t - 1;
        while self.tracker.tied_with_previous(start) {
            start -= 1;
        }
        let mut u: Vec<usize> = positions[start..first_t].to_vec();
        u.sort_unstable();
        let u_mask = u.iter().fold(0u32, |m, &i| m | 1 << i);
        let mut assign: Vec<Assign> = (0..n).map(Assign::Copy).collect();
        assign[u[0]] = if self.t_mask == 0 {
            Assign::One
        } else {
            Assign::RankIn(self.t_mask, 0)
        };
        for (k, &i) in u[1..].iter().enumerate() {
            assign[i] = Assign::RankIn(u_mask, k);
        }
        self.assign = Some(assign);
    }
}

impl LocalizerRunner {
    /// Cases `1..=m+1` for `m` separator pairs; returns the first decided one.
    fn decided_case(&self) -> Option<usize> {
        let m = self.arity_out - 1;
        (0..=m).find(|&c| {
            let above_lo = c == 0 || self.state[2 * (c - 1)] == Split::Greater;
            let below_up = c == m || self.state[2 * c + 1] == Split::Less;
            above_lo && below_up
        })
    }

    fn step(&mut self, x: bool, out: &mut [Vec<bool>]) {
        if let Some(c) = self.chosen {
            for (j, o) in out.iter_mut().enumerate() {
                o.push(j == c && x);
            }
            self.depth += 1;
            return;
        }
        for (s, p) in self.state.iter_mut().zip(&self.points) {
            if *s == Split::Equal {
                let q = p.bit(self.depth);
                if x != q {
                    *s = if !x & q { Split::Less } else { Split::Greater };
                }
            }
        }
        self.depth += 1;
        self.buffer.push(x);
        if let Some(c) = self.decided_case() {
            self.chosen = Some(c);
            for (j, o) in out.iter_mut().enumerate() {
                if j == c {
                    o.extend_from_slice(&self.buffer);
                } else {
                    o.extend(std::iter::repeat_n(false, self.buffer.len()));
                }
            }
            self.buffer.clear();
        }
    }
}

/// The case the localizer settles on for `x`, computed directly.
pub(crate) fn localizer_case(separators: &[(CantorPoint, CantorPoint)], x: &CantorPoint) -> usize {
    let m = separators.len();
    let mut best: Option<(usize, usize)> = None;
    for c in 0..=m {
        let mut depth = 0;
        let mut ok = true;
        if c > 0 {
            let lo = &separators[c - 1].0;
            match x.first_difference(lo) {
                Some(d) if x.bit(d) => depth = depth.max(d),
                _ => ok = false,
            }
        }
        if c < m {
            let up = &separators[c].1;
            match x.first_difference(up) {
                Some(d) if !x.bit(d) => depth = depth.max(d),
                _ => ok = false,
            }
        }
        if ok && best.is_none_or(|(d, _)| depth < d) {
            best = Some((depth, c));
        }
    }
    best.map_or(0, |(_, c)| c)
}

impl ComposeRunner {
    fn step(&mut self, col: &[bool], out: &mut [Vec<bool>]) {
        for b in &mut self.inner_out {
            b.clear();
        }
        self.inner.step(col, &mut self.inner_out);
        if self.inner_arity_out == 0 {
            self.outer.step(&[], out);
            return;
        }
        for (q, b) in self.queues.iter_mut().zip(&self.inner_out) {
            q.extend(b.iter().copied());
        }
        while self.queues.iter().all(|q| !q.is_empty()) {
            self.column.clear();
            self.column.extend(self.queues.iter_mut().map(|q| q.pop_front().expect("nonempty")));
            self.outer.step(&self.column, out);
        }
    }
}

fn check_arity(t: &Transducer, found: usize) -> Result<(), TransducerError> {
    if t.arity_in() != found {
        return Err(TransducerError::Arity {
            expected: t.arity_in(),
            found,
        });
    }
    Ok(())
}

/// Runs `t` on finite, equally long inputs and returns what it has emitted.
pub fn run_finite(t: &Transducer, inputs: &[Vec<bool>]) -> Result<Vec<Vec<bool>>, TransducerError> {
    check_arity(t, inputs.len())?;
    let len = inputs.iter().map(Vec::len).min().unwrap_or(0);
    let mut runner = Runner::new(t);
    let mut out = vec![Vec::new(); t.arity_out()];
    let mut col = vec![false; inputs.len()];
    for d in 0..len {
        for (c, x) in col.iter_mut().zip(inputs) {
            *c = x[d];
        }
        runner.step(&col, &mut out);
    }
    Ok(out)
}

/// Exact outputs of `t` on eventually periodic inputs, processing at most
/// `budget` columns.
pub fn run(t: &Transducer, xs: &[CantorPoint], budget: usize) -> Result<RunOutput, RunError> {
    check_arity(t, xs.len())?;
    let (hp, hq) = t.horizon();
    let prefix = xs.iter().map(|x| x.prefix().len()).fold(hp, usize::max);
    let period = xs.iter().map(|x| x.period().len()).fold(hq, lcm);
    let mut runner = Runner::new(t);
    let mut out: Vec<Vec<bool>> = vec![Vec::new(); t.arity_out()];
    let mut col = vec![false; xs.len()];
    let mut seen: HashMap<Vec<u8>, (usize, Vec<usize>)> = HashMap::new();
    let mut key = Vec::new();
    let mut d = 0;
    loop {
        if d >= prefix && (d - prefix) % period == 0 {
            key.clear();
            runner.key(&mut key);
            let lens: Vec<usize> = out.iter().map(Vec::len).collect();
            if let Some((d0, lens0)) = seen.get(&key) {
                let outputs = out
                    .iter()
                    .zip(lens0)
                    .zip(&lens)
                    .map(|((o, &a), &b)| {
                        if a == b {
                            Stream::Finite(o[..a].to_vec())
                        } else {
                            Stream::Total(CantorPoint::new(o[..a].to_vec(), o[a..b].to_vec()).expect("nonempty cycle"))
                        }
                    })
                    .collect();
                let routes = (0..t.arity_out()).map(|j| runner.route(j)).collect();
                return Ok(RunOutput {
                    outputs,
                    depth: *d0,
                    routes,
                });
            }
            seen.insert(key.clone(), (d, lens));
        }
        if d >= budget {
            return Err(RunError::Undetermined { partial: out, depth: d });
        }
        for (c, x) in col.iter_mut().zip(xs) {
            *c = x.bit(d);
        }
        runner.step(&col, &mut out);
        d += 1;
    }
}

/// [`run`] with an escalating budget schedule; the first determined result wins.
pub fn run_with_schedule(t: &Transducer, xs: &[CantorPoint], schedule: &[usize]) -> Result<RunOutput, RunError> {
    let mut last = None;
    for &budget in schedule {
        match run(t, xs, budget) {
            Err(RunError::Undetermined { partial, depth }) => last = Some(RunError::Undetermined { partial, depth }),
            other => return other,
        }
    }
    Err(last.unwrap_or(RunError::Undetermined {
        partial: Vec::new(),
        depth: 0,
    }))
}
