// SPDX-License-Identifier: Apache-2.0

//! Prefix-monotone stream machines on tuples of Cantor points.
//!
//! A [`Transducer`] is an immutable program. Running it consumes one column
//! (one bit of every input) at a time and appends zero or more bits to every
//! output. All machines here make finitely many decisions on any input and
//! then route copies of inputs, order statistics of inputs, or constants,
//! which is what makes [`run`] exact on eventually periodic inputs.

mod order;
mod run;
pub mod stage;
pub mod witness;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cantor::{lcm, CantorError, CantorPoint};
use crate::truthtable::{CoveringChain, TableError, Vertex};

pub use run::{run, run_finite, run_with_schedule, Route, RunError, RunOutput, Stream, DEFAULT_BUDGET};
pub use stage::Stage;
pub use witness::{PostMap, Problem, WitnessPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransducerError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error("certificate error at line {line}: {message}")]
    Certificate { line: usize, message: String },
}

fn range(msg: impl Into<String>) -> TransducerError {
    TransducerError::Range(msg.into())
}

/// What an output coordinate of a [`Transducer::Select`] emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    /// Copy input `i` (0-based).
    Input(usize),
    /// Copy the complement of input `i`.
    NegInput(usize),
    /// The `k`-th smallest input, `μ_k`, with `k` 1-based.
    Rank(usize),
    /// `b^ω`.
    Const(bool),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transducer {
    /// Fixed routing of inputs, order statistics and constants.
    Select { arity_in: usize, outputs: Vec<Source> },
    /// The flip pre-processing for vertex `v`.
    KeyLemma { v: Vertex },
    /// Copies `(x, y)` until they split; afterwards `(x, x)` if `x < y`, else `(x, y)`.
    SwitchOnSplit,
    /// Waits until `x` is located in one of the overlapping intervals cut out
    /// by the separators, then places `x` in that coordinate and `0^ω` elsewhere.
    Localizer { separators: Vec<(CantorPoint, CantorPoint)> },
    /// Never outputs anything.
    Stall { arity_in: usize, arity_out: usize },
    /// Identity on the first `limit` columns, silent afterwards.
    Truncate { arity: usize, limit: usize },
    /// `outer ∘ inner`.
    Compose { outer: Box<Transducer>, inner: Box<Transducer> },
    /// Juxtaposition; inputs and outputs are concatenated.
    Product(Vec<Transducer>),
}

impl Transducer {
    pub fn arity_in(&self) -> usize {
        match self {
            Transducer::Select { arity_in, .. } => *arity_in,
            Transducer::KeyLemma { v } => v.dim(),
            Transducer::SwitchOnSplit => 2,
            Transducer::Localizer { .. } => 1,
            Transducer::Stall { arity_in, .. } => *arity_in,
            Transducer::Truncate { arity, .. } => *arity,
            Transducer::Compose { inner, .. } => inner.arity_in(),
            Transducer::Product(parts) => parts.iter().map(Transducer::arity_in).sum(),
        }
    }

    pub fn arity_out(&self) -> usize {
        match self {
            Transducer::Select { outputs, .. } => outputs.len(),
            Transducer::KeyLemma { v } => v.dim(),
            Transducer::SwitchOnSplit => 2,
            Transducer::Localizer { separators } => separators.len() + 1,
            Transducer::Stall { arity_out, .. } => *arity_out,
            Transducer::Truncate { arity, .. } => *arity,
            Transducer::Compose { outer, .. } => outer.arity_out(),
            Transducer::Product(parts) => parts.iter().map(Transducer::arity_out).sum(),
        }
    }

    /// Prefix length and period of the constants the machine compares against.
    pub(crate) fn horizon(&self) -> (usize, usize) {
        match self {
            Transducer::Localizer { separators } => {
                let len = separators
                    .iter()
                    .flat_map(|(a, b)| [a.prefix().len(), b.prefix().len()])
                    .max()
                    .unwrap_or(0);
                (len, 1)
            }
            Transducer::Truncate { limit, .. } => (*limit, 1),
            Transducer::Compose { outer, inner } => {
                let (a, p) = outer.horizon();
                let (b, q) = inner.horizon();
                (a.max(b), lcm(p, q))
            }
            Transducer::Product(parts) => parts
                .iter()
                .map(Transducer::horizon)
                .fold((0, 1), |(a, p), (b, q)| (a.max(b), lcm(p, q))),
            _ => (0, 1),
        }
    }
}

/// `outer ∘ inner`.
pub fn compose(outer: Transducer, inner: Transducer) -> Result<Transducer, TransducerError> {
    if outer.arity_in() != inner.arity_out() {
        return Err(TransducerError::Arity {
            expected: outer.arity_in(),
            found: inner.arity_out(),
        });
    }
    Ok(Transducer::Compose {
        outer: Box::new(outer),
        inner: Box::new(inner),
    })
}

/// Composes machines in application order: `stages[0]` sees the input first.
pub fn compose_all(stages: Vec<Transducer>) -> Result<Transducer, TransducerError> {
    let mut iter = stages.into_iter();
    let first = iter.next().ok_or_else(|| range("empty stage list"))?;
    iter.try_fold(first, |acc, next| compose(next, acc))
}

pub fn product(a: Transducer, b: Transducer) -> Transducer {
    Transducer::Product(vec![a, b])
}

fn check_n(n: usize) -> Result<(), TransducerError> {
    if (1..=crate::truthtable::MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(range(format!("arity {n}")))
    }
}

fn ranks(ks: impl IntoIterator<Item = usize>) -> Vec<Source> {
    ks.into_iter().map(Source::Rank).collect()
}

pub fn identity(n: usize) -> Result<Transducer, TransducerError> {
    check_n(n)?;
    Ok(Transducer::Select {
        arity_in: n,
        outputs: (0..n).map(Source::Input).collect(),
    })
}

/// `x ↦ 1 - x` bitwise.
pub fn bit_flip() -> Transducer {
    Transducer::Select {
        arity_in: 1,
        outputs: vec![Source::NegInput(0)],
    }
}

pub fn max2() -> Transducer {
    Transducer::Select {
        arity_in: 2,
        outputs: vec![Source::Rank(2)],
    }
}

pub fn min2() -> Transducer {
    Transducer::Select {
        arity_in: 2,
        outputs: vec![Source::Rank(1)],
    }
}

/// `(x, y) ↦ (max, min)`.
pub fn maxmin_pair() -> Transducer {
    Transducer::Select {
        arity_in: 2,
        outputs: vec![Source::Rank(2), Source::Rank(1)],
    }
}

pub fn switch_on_split() -> Transducer {
    Transducer::SwitchOnSplit
}

pub fn swap() -> Transducer {
    Transducer::Select {
        arity_in: 2,
        outputs: vec![Source::Input(1), Source::Input(0)],
    }
}

/// `(μ_1, …, μ_n)`.
pub fn sorted(n: usize) -> Result<Transducer, TransducerError> {
    check_n(n)?;
    Ok(Transducer::Select {
        arity_in: n,
        outputs: ranks(1..=n),
    })
}

/// `(μ_1, …, μ_{n-k0}, μ_{n-k0}, μ_{n-k0+1}, …, μ_{n-1})`.
pub fn wtow(n: usize, k0: usize) -> Result<Transducer, TransducerError> {
    check_n(n)?;
    if !(1..n).contains(&k0) {
        return Err(range(format!("k0={k0} outside 1..{n}")));
    }
    let mut out = ranks(1..=n - k0);
    out.push(Source::Rank(n - k0));
    out.extend(ranks(n - k0 + 1..n));
    Ok(Transducer::Select { arity_in: n, outputs: out })
}

/// `(μ_1, …, μ_{n-k0-1}, μ_{n-k0+1}, …, μ_n, 1^ω)`.
pub fn wtow1(n: usize, k0: usize) -> Result<Transducer, TransducerError> {
    check_n(n)?;
    if !(1..n).contains(&k0) {
        return Err(range(format!("k0={k0} outside 1..{n}")));
    }
    let mut out = ranks(1..n - k0);
    out.extend(ranks(n - k0 + 1..=n));
    out.push(Source::Const(true));
    Ok(Transducer::Select { arity_in: n, outputs: out })
}

pub fn keylemma_flip(v: Vertex) -> Result<Transducer, TransducerError> {
    if v.weight() >= v.dim() {
        return Err(range(format!("vertex {v} has full weight")));
    }
    Ok(Transducer::KeyLemma { v })
}

/// Sends the largest input to the coordinate added first along the chain,
/// the second largest to the next one, and so on.
pub fn chain_embed(chain: &CoveringChain) -> Transducer {
    let n = chain.dim();
    let mut outputs = vec![Source::Const(false); n];
    for (i, c) in chain.added_coordinates().into_iter().enumerate() {
        outputs[c - 1] = Source::Rank(n - i);
    }
    Transducer::Select { arity_in: n, outputs }
}

/// Overwrites coordinates `idx` (1-based) with the constants `bits`.
pub fn const_plug(n: usize, idx: &[usize], bits: &[bool]) -> Result<Transducer, TransducerError> {
    check_n(n)?;
    if idx.len() != bits.len() {
        return Err(range("index and bit lists differ in length"));
    }
    let mut outputs: Vec<Source> = (0..n).map(Source::Input).collect();
    let mut seen = vec![false; n];
    for (&i, &b) in idx.iter().zip(bits) {
        if !(1..=n).contains(&i) || seen[i - 1] {
            return Err(range(format!("coordinate {i}")));
        }
        seen[i - 1] = true;
        outputs[i - 1] = Source::Const(b);
    }
    Ok(Transducer::Select { arity_in: n, outputs })
}

fn pad(l: usize, n: usize, b: bool) -> Result<Transducer, TransducerError> {
    if l > n || n == 0 {
        return Err(range(format!("cannot pad {l} to {n}")));
    }
    let mut outputs: Vec<Source> = (0..l).map(Source::Input).collect();
    outputs.extend(std::iter::repeat_n(Source::Const(b), n - l));
    Ok(Transducer::Select { arity_in: l, outputs })
}

/// Appends `n - l` copies of `1^ω`.
pub fn pad_ones(l: usize, n: usize) -> Result<Transducer, TransducerError> {
    pad(l, n, true)
}

/// Appends `n - l` copies of `0^ω`.
pub fn pad_zeros(l: usize, n: usize) -> Result<Transducer, TransducerError> {
    pad(l, n, false)
}

/// `(μ_1, …, μ_l)`.
pub fn keep_smallest(n: usize, l: usize) -> Result<Transducer, TransducerError> {
    check_n(n)?;
    if l > n {
        return Err(range(format!("keep {l} of {n}")));
    }
    Ok(Transducer::Select {
        arity_in: n,
        outputs: ranks(1..=l),
    })
}

/// `x ↦ (x, …, x)`.
pub fn duplicate(n: usize) -> Result<Transducer, TransducerError> {
    check_n(n)?;
    Ok(Transducer::Select {
        arity_in: 1,
        outputs: vec![Source::Input(0); n],
    })
}

/// `(x_1, …, x_n) ↦ x_i`, `i` 1-based.
pub fn project(n: usize, i: usize) -> Result<Transducer, TransducerError> {
    check_n(n)?;
    if !(1..=n).contains(&i) {
        return Err(range(format!("coordinate {i}")));
    }
    Ok(Transducer::Select {
        arity_in: n,
        outputs: vec![Source::Input(i - 1)],
    })
}

/// Witness for `s_{(α_1,…,α_n)} ≤_W s^{⊕_n}_{α_1,…,α_n}`.
pub fn interval_localizer(
    thresholds: &[CantorPoint],
    separators: &[(CantorPoint, CantorPoint)],
) -> Result<WitnessPair, TransducerError> {
    let n = thresholds.len();
    check_n(n)?;
    if separators.len() + 1 != n {
        return Err(range(format!("{} separators for {n} thresholds", separators.len())));
    }
    for (i, (lo, up)) in separators.iter().enumerate() {
        let ok = thresholds[i] < *lo && lo < up && *up < thresholds[i + 1];
        if !ok || !lo.is_finite_support() || !up.is_finite_support() {
            return Err(range(format!("separator pair {} is invalid", i + 1)));
        }
    }
    Ok(WitnessPair {
        pre: Transducer::Localizer {
            separators: separators.to_vec(),
        },
        post: PostMap::Localize {
            separators: separators.to_vec(),
        },
        source: Problem::MultiStep {
            thresholds: thresholds.to_vec(),
        },
        target: Problem::StepF {
            table: crate::truthtable::TruthTable::parity(n)?,
            thresholds: thresholds.to_vec(),
        },
    })
}

#[cfg(test)]
mod tests;
