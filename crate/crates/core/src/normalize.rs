// SPDX-License-Identifier: Apache-2.0

//! Normalization of truth tables to `K_{n,l}` and the reduction compiler.
//!
//! Normalization flips one table entry at a time, each flip justified by the
//! key flip lemma, sweeping down from the top level. The compiler chains the
//! resulting flip machines with order-statistic stages and a chain embedding
//! to produce a strong witness for `s^F_α ≤ s^G_α` whenever `l(F) ≤ l(G)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cantor::CantorPoint;
use crate::transducer::witness::Certificate;
use crate::transducer::{PostMap, Problem, Stage, TransducerError, WitnessPair};
use crate::truthtable::{full_mask, LevelWord, TableError, TruthTable, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("l(source)={source_l} > l(target)={target_l}")]
    Impossible { source_l: usize, target_l: usize },
    #[error("alternation counts differ: {0} vs {1}")]
    AlternationMismatch(usize, usize),
    #[error("words start with different bits")]
    PolarityMismatch,
    #[error("word lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("threshold {0} is not proper")]
    Improper(CantorPoint),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Transducer(#[from] TransducerError),
}

/// One application of the key flip lemma.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipCertificate {
    pub vertex: Vertex,
    pub from: bool,
    pub to: bool,
    /// Index of the level sweep that performed the flip.
    pub sweep: usize,
    pub conditions_verified: bool,
}

impl fmt::Display for FlipCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "flip v={} {}->{} sweep={} conditions={}",
            self.vertex,
            u8::from(self.from),
            u8::from(self.to),
            self.sweep,
            if self.conditions_verified { "ok" } else { "unchecked" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    /// `K_{n,l(F)}`.
    pub table: TruthTable,
    pub flips: Vec<FlipCertificate>,
    /// The flips were applied to `1 - F` rather than `F`.
    pub negated: bool,
    /// Tables after each flip, starting with the (possibly negated) input.
    pub trace: Vec<TruthTable>,
}

/// Vertices `v` whose supersets up to weight `bound` all carry `value`.
fn saturated(t: &TruthTable, value: bool, bound: usize) -> Vec<bool> {
    let n = t.dim();
    let full = full_mask(n) as usize;
    let mut ok = vec![false; full + 1];
    for v in (0..=full).rev() {
        let w = (v as u32).count_ones() as usize;
        ok[v] = if w > bound {
            true
        } else {
            t.get(v) == value && (0..n).all(|c| v >> c & 1 == 1 || ok[v | 1 << c])
        };
    }
    ok
}

/// Flips entries of `F` (or of `1 - F`, so that the top value matches
/// `l mod 2`) until the table is `K_{n,l(F)}`.
///
/// Sweep `j` targets the value `c_j`, which is `F(1^n)` for even `j` and its
/// complement for odd `j`. It repeatedly takes the smallest-weight, then
/// smallest-index vertex `v` with `1 ≤ t(v) ≤ n-1-j` whose supersets of weight
/// at most `n-j` all carry `c_j`, and flips it. The process ends once `0^n`
/// itself has that property.
pub fn normalize_to_k(f: &TruthTable) -> Result<Normalization, NormalizeError> {
    let n = f.dim();
    let l = f.alternation_length();
    let top = full_mask(n) as usize;
    let negated = f.get(top) != (l % 2 == 1);
    let mut cur = if negated { f.negated() } else { f.clone() };
    let b = cur.get(top);
    let mut flips = Vec::new();
    let mut trace = vec![cur.clone()];
    'sweeps: for sweep in 0..=n {
        let c = if sweep % 2 == 0 { b } else { !b };
        let bound = n - sweep;
        loop {
            let ok = saturated(&cur, c, bound);
            if ok[0] {
                if sweep != l {
                    return Err(NormalizeError::Internal(format!("stopped at sweep {sweep} but l={l}")));
                }
                break 'sweeps;
            }
            let pick = (1..bound.max(1))
                .flat_map(|w| (1..top).filter(move |&v| (v as u32).count_ones() as usize == w))
                .find(|&v| ok[v]);
            let Some(v) = pick else {
                continue 'sweeps;
            };
            let vertex = Vertex::new(n, v as u32)?;
            let conditions_verified = cur.check_flip_conditions(&vertex)?;
            if !conditions_verified {
                return Err(NormalizeError::Internal(format!("flip conditions fail at {vertex}")));
            }
            let next = cur.flipped_at(&vertex);
            if next.alternation_length() != l {
                return Err(NormalizeError::Internal(format!("flip at {vertex} changed l")));
            }
            flips.push(FlipCertificate {
                vertex,
                from: c,
                to: !c,
                sweep,
                conditions_verified,
            });
            cur = next;
            trace.push(cur.clone());
        }
    }
    let k = TruthTable::top_alternating(n, l)?;
    if cur != k {
        return Err(NormalizeError::Internal(format!("endpoint differs from K_{{{n},{l}}}")));
    }
    Ok(Normalization {
        table: k,
        flips,
        negated,
        trace,
    })
}

/// Level map of a word-shift stage: inputs with `k` coordinates above the
/// threshold produce outputs with `level_map(k)` such coordinates.
pub fn level_map(stage: &Stage, k: usize) -> Option<usize> {
    match *stage {
        Stage::Wtow { k0, .. } => Some(if k > k0 || k == 0 { k } else { k - 1 }),
        Stage::Wtow1 { k0, .. } => Some(if k > k0 { k } else { k + 1 }),
        _ => None,
    }
}

fn runs(word: &[bool]) -> Vec<usize> {
    let mut out = vec![1];
    for w in word.windows(2) {
        if w[0] == w[1] {
            *out.last_mut().expect("nonempty") += 1;
        } else {
            out.push(1);
        }
    }
    out
}

fn word_from_runs(start: bool, runs: &[usize]) -> Vec<bool> {
    let mut out = Vec::new();
    for (i, &r) in runs.iter().enumerate() {
        out.extend(std::iter::repeat_n(start ^ (i % 2 == 1), r));
    }
    out
}

/// Word-shift stages turning the semantics of `from` into that of `to`:
/// with `H_from ≤ H_w1 ≤ … ≤ H_to`, each step justified by one stage.
///
/// Surplus length of runs after the first is first moved into the first
/// run, left to right; then the first run hands units to every run that is
/// still short, left to right.
pub fn word_shift_plan(from: &LevelWord, to: &LevelWord) -> Result<Vec<Stage>, NormalizeError> {
    let (a, b) = (from.bits(), to.bits());
    if a.len() != b.len() {
        return Err(NormalizeError::LengthMismatch(a.len(), b.len()));
    }
    if from.alternations() != to.alternations() {
        return Err(NormalizeError::AlternationMismatch(from.alternations(), to.alternations()));
    }
    if a[0] != b[0] {
        return Err(NormalizeError::PolarityMismatch);
    }
    let n = a.len() - 1;
    let target = runs(b);
    let mut cur = runs(a);
    let mut plan = Vec::new();
    let start_of = |r: &[usize], i: usize| r[..i].iter().sum::<usize>();
    let push = |plan: &mut Vec<Stage>, stage: Stage, before: &[usize], after: &[usize]| {
        let (wa, wb) = (word_from_runs(a[0], before), word_from_runs(a[0], after));
        debug_assert!((0..=n).all(|k| wa[k] == wb[level_map(&stage, k).expect("shift")]));
        plan.push(stage);
    };
    for j in 1..cur.len() {
        while cur[j] > target[j] {
            let k0 = start_of(&cur, j);
            let before = cur.clone();
            cur[j] -= 1;
            cur[0] += 1;
            push(&mut plan, Stage::Wtow1 { n, k0 }, &before, &cur);
        }
    }
    for i in 1..cur.len() {
        while cur[i] < target[i] {
            let k0 = start_of(&cur, i) - 1;
            let before = cur.clone();
            cur[i] += 1;
            cur[0] -= 1;
            push(&mut plan, Stage::Wtow { n, k0 }, &before, &cur);
        }
    }
    if cur != target {
        return Err(NormalizeError::Internal("word shift plan did not converge".into()));
    }
    Ok(plan)
}

/// A compiled reduction together with its audit trail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionPlan {
    pub certificate: Certificate,
    pub flips: Vec<FlipCertificate>,
    pub source_negated: bool,
    pub target_negated: bool,
    pub source_l: usize,
    pub target_l: usize,
}

impl ReductionPlan {
    pub fn witness(&self) -> Result<WitnessPair, NormalizeError> {
        Ok(self.certificate.witness()?)
    }
}

/// Builds a strong witness for `s^F_α ≤ s^G_α`.
///
/// Stages, in the order they act on the input: flips taking `F` (or `1 - F`)
/// to `K_{n_F,l_F}`; keep the `l_F` smallest inputs; pad with `0^ω` up to
/// `l_G`; pad with `1^ω` up to `n_G`; word shifts from the `K_{n_G,l_G}` word
/// to the word of an optimal chain of `G` (or its complement); embed along
/// that chain. The post map negates exactly when one side was negated.
pub fn compile_reduction(f: &TruthTable, g: &TruthTable, alpha: &CantorPoint) -> Result<ReductionPlan, NormalizeError> {
    if !alpha.is_proper() {
        return Err(NormalizeError::Improper(alpha.clone()));
    }
    let (lf, lg) = (f.alternation_length(), g.alternation_length());
    if lf > lg {
        return Err(NormalizeError::Impossible {
            source_l: lf,
            target_l: lg,
        });
    }
    let (nf, ng) = (f.dim(), g.dim());
    let norm = normalize_to_k(f)?;
    let mut stages: Vec<Stage> = norm.flips.iter().map(|fl| Stage::Flip { v: fl.vertex }).collect();
    stages.push(Stage::KeepSmallest { n: nf, l: lf });
    if lg > lf {
        stages.push(Stage::PadZeros { l: lf, n: lg });
    }
    if ng > lg {
        stages.push(Stage::PadOnes { l: lg, n: ng });
    }
    let chain = g.optimal_covering_chain();
    let word = chain.level_word();
    let target_negated = word.get(0);
    let aligned = if target_negated { word.negated() } else { word };
    stages.extend(word_shift_plan(&LevelWord::top_alternating(ng, lg)?, &aligned)?);
    stages.push(Stage::ChainEmbed { chain });
    let post = if norm.negated ^ target_negated {
        PostMap::negation()
    } else {
        PostMap::identity()
    };
    let certificate = Certificate {
        source: Problem::step_equal(f.clone(), alpha),
        target: Problem::step_equal(g.clone(), alpha),
        stages,
        post,
    };
    certificate.witness()?;
    Ok(ReductionPlan {
        certificate,
        flips: norm.flips,
        source_negated: norm.negated,
        target_negated,
        source_l: lf,
        target_l: lg,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    Less,
    Greater,
    Equivalent,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Less => "F<G",
            Comparison::Greater => "G<F",
            Comparison::Equivalent => "F≡G",
        })
    }
}

/// Degree comparison of `s^F_α` and `s^G_α`, decided by `l`.
pub fn decide_sb(f: &TruthTable, g: &TruthTable) -> Comparison {
    match f.alternation_length().cmp(&g.alternation_length()) {
        std::cmp::Ordering::Less => Comparison::Less,
        std::cmp::Ordering::Greater => Comparison::Greater,
        std::cmp::Ordering::Equal => Comparison::Equivalent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> LevelWord {
        s.parse().unwrap()
    }

    fn fig2() -> TruthTable {
        let ones = ["111", "110", "011", "100", "001"];
        TruthTable::from_fn(3, |u| ones.iter().any(|s| s.parse::<Vertex>().unwrap() == u)).unwrap()
    }

    #[test]
    fn normal_forms_need_no_flips() {
        for n in 1..=4 {
            for l in 0..=n {
                let k = TruthTable::top_alternating(n, l).unwrap();
                let r = normalize_to_k(&k).unwrap();
                assert!(r.flips.is_empty() && !r.negated);
                assert_eq!(r.table, k);
            }
        }
    }

    #[test]
    fn figure_two_reaches_parity() {
        let r = normalize_to_k(&fig2()).unwrap();
        assert_eq!(r.table, TruthTable::parity(3).unwrap());
        assert!(!r.negated);
        assert!(r.flips.iter().all(|f| f.conditions_verified));
    }

    #[test]
    fn walkthrough_flip_sequence() {
        let ones = ["111", "101", "011", "100", "001"];
        let start = TruthTable::from_fn(3, |u| ones.iter().any(|s| s.parse::<Vertex>().unwrap() == u)).unwrap();
        let r = normalize_to_k(&start).unwrap();
        for (a, b) in r.trace.iter().zip(&r.trace[1..]) {
            assert_eq!(a.values().iter().zip(b.values()).filter(|(x, y)| x != y).count(), 1);
        }
        assert_eq!(r.table, TruthTable::parity(3).unwrap());
    }

    #[test]
    fn every_small_table_normalizes() {
        for n in 1..=4usize {
            for mask in 0..1u64 << (1 << n) {
                let f = TruthTable::from_fn(n, |u| mask >> u.index() & 1 == 1).unwrap();
                let r = normalize_to_k(&f).unwrap();
                let l = f.alternation_length();
                assert_eq!(r.table, TruthTable::top_alternating(n, l).unwrap());
                assert!(r.trace.iter().all(|t| t.alternation_length() == l));
            }
        }
    }

    #[test]
    fn shift_plans() {
        assert!(word_shift_plan(&w("0101"), &w("0101")).unwrap().is_empty());
        let plan = word_shift_plan(&w("00010"), &w("01000")).unwrap();
        assert!(!plan.is_empty());
        for k in 0..=4 {
            let mut level = k;
            for s in &plan {
                level = level_map(s, level).unwrap();
            }
            assert_eq!(w("00010").get(k), w("01000").get(level));
        }
        assert_eq!(
            word_shift_plan(&w("0001"), &w("0101")),
            Err(NormalizeError::AlternationMismatch(1, 3))
        );
        assert_eq!(word_shift_plan(&w("0011"), &w("1100")), Err(NormalizeError::PolarityMismatch));
    }

    #[test]
    fn compile_refuses_impossible() {
        let alpha: CantorPoint = "(01)".parse().unwrap();
        let err = compile_reduction(&TruthTable::iff2(), &TruthTable::and2(), &alpha).unwrap_err();
        assert_eq!(err.to_string(), "l(source)=2 > l(target)=1");
        assert!(compile_reduction(&TruthTable::and2(), &TruthTable::iff2(), &alpha).is_ok());
    }

    #[test]
    fn decide_examples() {
        assert_eq!(decide_sb(&TruthTable::or2(), &TruthTable::and2()), Comparison::Equivalent);
        assert_eq!(
            decide_sb(&TruthTable::parity(2).unwrap(), &TruthTable::parity(3).unwrap()),
            Comparison::Less
        );
        let f = TruthTable::implies2();
        let k = TruthTable::top_alternating(2, f.alternation_length()).unwrap();
        assert_eq!(decide_sb(&f, &k), Comparison::Equivalent);
    }
}
