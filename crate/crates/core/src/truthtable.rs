// SPDX-License-Identifier: Apache-2.0

//! n-dimensional truth tables over the Boolean hypercube.
//!
//! Coordinates are numbered `1..=n`. Coordinate `i` lives at bit `i - 1` of a
//! vertex index, so index 0 is `0^n` and index `2^n - 1` is `1^n`. When a
//! vertex is written as a string, the first character is coordinate 1:
//! `"100"` is the vertex with only coordinate 1 set (index 1).
//!
//! The central quantity is the alternation length `l(F)`: the largest number
//! of value changes along a strictly increasing chain of inputs.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported dimension.
pub const MAX_DIM: usize = 16;

/// Dimensions above this trigger a runtime warning; the tables get large.
pub const WARN_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("dimension {0} out of range 1..={MAX_DIM}")]
    DimensionOutOfRange(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} table entries, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("coordinate {0} is repeated")]
    RepeatedIndex(usize),
    #[error("coordinate {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{indices} coordinates but {bits} bits")]
    BitCountMismatch { indices: usize, bits: usize },
    #[error("level word must have length {expected}, found {found}")]
    WordLength { expected: usize, found: usize },
    #[error("alternation count {l} exceeds dimension {n}")]
    AlternationBound { l: usize, n: usize },
    #[error("vertex {0} has full weight; no flip conditions apply")]
    FullWeight(Vertex),
    #[error("malformed chain: {0}")]
    MalformedChain(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> TableError {
    TableError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn check_dim(n: usize) -> Result<(), TableError> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(TableError::DimensionOutOfRange(n))
    }
}

/// A point of the hypercube `2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    n: usize,
    bits: u32,
}

impl Vertex {
    pub fn new(n: usize, bits: u32) -> Result<Self, TableError> {
        check_dim(n)?;
        if bits >> n != 0 {
            return Err(TableError::IndexOutOfRange {
                index: (32 - bits.leading_zeros()) as usize,
                n,
            });
        }
        Ok(Vertex { n, bits })
    }

    pub(crate) fn from_index(n: usize, bits: u32) -> Self {
        debug_assert!(bits >> n == 0);
        Vertex { n, bits }
    }

    pub fn zero(n: usize) -> Self {
        Vertex { n, bits: 0 }
    }

    pub fn top(n: usize) -> Self {
        Vertex {
            n,
            bits: full_mask(n),
        }
    }

    /// Builds a vertex from one bit per coordinate, coordinate 1 first.
    pub fn from_bits(bits: &[bool]) -> Result<Self, TableError> {
        check_dim(bits.len())?;
        let index = bits
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << i));
        Ok(Vertex {
            n: bits.len(),
            bits: index,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// Value of coordinate `i` (1-based).
    pub fn coord(&self, i: usize) -> bool {
        debug_assert!((1..=self.n).contains(&i));
        self.bits >> (i - 1) & 1 == 1
    }

    /// Number of set coordinates, `t(v)`.
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_subset_of(&self, other: &Vertex) -> bool {
        self.n == other.n && self.bits & !other.bits == 0
    }

    /// Coordinates set in `self`, ascending.
    pub fn ones(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| self.coord(i)).collect()
    }

    pub fn zeros(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| !self.coord(i)).collect()
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (1..=self.n).map(|i| self.coord(i)).collect()
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            f.write_str(if self.coord(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Vertex {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = parse_bit_string(s.trim(), 1, 1)?;
        Vertex::from_bits(&bits)
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn parse_bit_string(s: &str, line: usize, col0: usize) -> Result<Vec<bool>, TableError> {
    s.chars()
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(parse_err(line, col0 + i, format!("unexpected character {other:?}"))),
        })
        .collect()
}

/// Renders a bit slice as a `0`/`1` string.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Number of adjacent unequal pairs in `word`.
pub fn word_alternations(word: &[bool]) -> usize {
    word.windows(2).filter(|w| w[0] != w[1]).count()
}

/// A word `w` of length `n + 1`; `w(k)` is the value on weight-`k` inputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelWord(Vec<bool>);

impl LevelWord {
    pub fn new(bits: Vec<bool>) -> Result<Self, TableError> {
        if bits.len() < 2 || bits.len() > MAX_DIM + 1 {
            return Err(TableError::WordLength {
                expected: bits.len().clamp(2, MAX_DIM + 1),
                found: bits.len(),
            });
        }
        Ok(LevelWord(bits))
    }

    /// The word of `K_{n,l}`: `0^{n-l}` followed by `0, 1, 0, 1, ...` up to `l mod 2`.
    pub fn top_alternating(n: usize, l: usize) -> Result<Self, TableError> {
        check_dim(n)?;
        if l > n {
            return Err(TableError::AlternationBound { l, n });
        }
        let bits = (0..=n)
            .map(|k| k > n - l && (k - (n - l)) % 2 == 1)
            .collect();
        Ok(LevelWord(bits))
    }

    /// Dimension `n` this word belongs to.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn get(&self, k: usize) -> bool {
        self.0[k]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn alternations(&self) -> usize {
        word_alternations(&self.0)
    }

    pub fn negated(&self) -> LevelWord {
        LevelWord(self.0.iter().map(|b| !b).collect())
    }
}

impl fmt::Display for LevelWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_to_string(&self.0))
    }
}

impl FromStr for LevelWord {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LevelWord::new(parse_bit_string(s.trim(), 1, 1)?)
    }
}

/// A maximal covering chain `0^n = v_0 ⊂¹ v_1 ⊂¹ ... ⊂¹ v_n = 1^n` with the
/// values of some table along it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringChain {
    vertices: Vec<Vertex>,
    word: Vec<bool>,
}

impl CoveringChain {
    /// Validates the covering shape; `word` is taken from `table`.
    pub fn new(vertices: Vec<Vertex>, table: &TruthTable) -> Result<Self, TableError> {
        Self::validate(&vertices)?;
        let n = vertices.len() - 1;
        if n != table.dim() {
            return Err(TableError::DimensionMismatch {
                expected: table.dim(),
                found: n,
            });
        }
        let word = vertices.iter().map(|v| table.get(v.index())).collect();
        Ok(CoveringChain { vertices, word })
    }

    /// A chain whose word is not tied to a table (all zeros).
    pub fn bare(vertices: Vec<Vertex>) -> Result<Self, TableError> {
        Self::validate(&vertices)?;
        let word = vec![false; vertices.len()];
        Ok(CoveringChain { vertices, word })
    }

    /// The chain that adds coordinates in the given order.
    pub fn from_order(n: usize, order: &[usize]) -> Result<Self, TableError> {
        check_dim(n)?;
        let mut bits = 0u32;
        let mut vertices = vec![Vertex::zero(n)];
        for &c in order {
            if !(1..=n).contains(&c) {
                return Err(TableError::IndexOutOfRange { index: c, n });
            }
            bits |= 1 << (c - 1);
            vertices.push(Vertex::from_index(n, bits));
        }
        Self::bare(vertices)
    }

    fn validate(vertices: &[Vertex]) -> Result<(), TableError> {
        let Some(first) = vertices.first() else {
            return Err(TableError::MalformedChain("empty chain".into()));
        };
        let n = first.dim();
        if vertices.len() != n + 1 {
            return Err(TableError::MalformedChain(format!(
                "expected {} vertices, found {}",
                n + 1,
                vertices.len()
            )));
        }
        if first.bits != 0 {
            return Err(TableError::MalformedChain(format!("chain starts at {first}")));
        }
        for pair in vertices.windows(2) {
            let (u, v) = (pair[0], pair[1]);
            if v.dim() != n || !u.is_subset_of(&v) || v.weight() != u.weight() + 1 {
                return Err(TableError::MalformedChain(format!("{u} does not cover into {v}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn word(&self) -> &[bool] {
        &self.word
    }

    pub fn level_word(&self) -> LevelWord {
        LevelWord(self.word.clone())
    }

    pub fn alternations(&self) -> usize {
        word_alternations(&self.word)
    }

    /// `c_i`: the coordinate added at step `i`, for `i = 1..=n`.
    pub fn added_coordinates(&self) -> Vec<usize> {
        self.vertices
            .windows(2)
            .map(|p| (p[1].bits ^ p[0].bits).trailing_zeros() as usize + 1)
            .collect()
    }
}

impl fmt::Display for CoveringChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for CoveringChain {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let vertices = s
            .split(',')
            .map(|p| p.parse())
            .collect::<Result<Vec<Vertex>, _>>()?;
        CoveringChain::bare(vertices)
    }
}

/// Result of [`TruthTable::classify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub alternations: usize,
    pub complete: bool,
    pub homogeneous: bool,
    pub homogeneous_levels: BTreeSet<usize>,
}

/// Witness that `G = F` with some coordinates fixed, possibly negated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixingWitness {
    /// Fixed coordinates, 1-based and ascending.
    pub idx: Vec<usize>,
    pub bits: Vec<bool>,
    pub negated: bool,
}

/// A Boolean function `2^n -> 2` stored as its value vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruthTable {
    n: usize,
    values: Vec<bool>,
}

impl TruthTable {
    pub fn new(n: usize, values: Vec<bool>) -> Result<Self, TableError> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(TableError::WrongLength {
                expected: 1 << n,
                found: values.len(),
            });
        }
        if n > WARN_DIM {
            log::warn!("truth table of dimension {n} has {} entries", 1usize << n);
        }
        Ok(TruthTable { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(Vertex) -> bool) -> Result<Self, TableError> {
        check_dim(n)?;
        let values = (0..1u32 << n).map(|i| f(Vertex::from_index(n, i))).collect();
        TruthTable::new(n, values)
    }

    /// Table whose value at index `i` is bit `i` of `mask`; handy for `n <= 6`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self, TableError> {
        check_dim(n)?;
        if n > 6 {
            return Err(TableError::DimensionOutOfRange(n));
        }
        TruthTable::new(n, (0..1usize << n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn constant(n: usize, value: bool) -> Result<Self, TableError> {
        check_dim(n)?;
        TruthTable::new(n, vec![value; 1 << n])
    }

    /// `⊕_n`: parity of the input weight.
    pub fn parity(n: usize) -> Result<Self, TableError> {
        TruthTable::from_fn(n, |v| v.weight() % 2 == 1)
    }

    /// `H_{n,w}(v) = w(t(v))`.
    pub fn level_table(n: usize, word: &LevelWord) -> Result<Self, TableError> {
        if word.dim() != n {
            return Err(TableError::WordLength {
                expected: n + 1,
                found: word.bits().len(),
            });
        }
        TruthTable::from_fn(n, |v| word.get(v.weight()))
    }

    /// `K_{n,l}`: false on the `n - l` lowest levels, then alternating.
    pub fn top_alternating(n: usize, l: usize) -> Result<Self, TableError> {
        TruthTable::level_table(n, &LevelWord::top_alternating(n, l)?)
    }

    pub fn and2() -> Self {
        TruthTable::from_mask(2, 0b1000).expect("static table")
    }

    pub fn or2() -> Self {
        TruthTable::from_mask(2, 0b1110).expect("static table")
    }

    /// `x1 → x2`.
    pub fn implies2() -> Self {
        TruthTable::from_mask(2, 0b1101).expect("static table")
    }

    /// `x1 ← x2`.
    pub fn implied_by2() -> Self {
        TruthTable::from_mask(2, 0b1011).expect("static table")
    }

    pub fn iff2() -> Self {
        TruthTable::from_mask(2, 0b1001).expect("static table")
    }

    /// The 1-dimensional identity table; `s^F_α` for it is `s_α`.
    pub fn identity1() -> Self {
        TruthTable::from_mask(1, 0b10).expect("static table")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn get(&self, index: usize) -> bool {
        self.values[index]
    }

    pub fn eval(&self, v: &Vertex) -> Result<bool, TableError> {
        self.check_vertex(v)?;
        Ok(self.values[v.index()])
    }

    /// Evaluates on one bit per coordinate.
    pub fn eval_bits(&self, bits: &[bool]) -> Result<bool, TableError> {
        if bits.len() != self.n {
            return Err(TableError::DimensionMismatch {
                expected: self.n,
                found: bits.len(),
            });
        }
        Ok(self.values[Vertex::from_bits(bits)?.index()])
    }

    fn check_vertex(&self, v: &Vertex) -> Result<(), TableError> {
        if v.dim() != self.n {
            return Err(TableError::DimensionMismatch {
                expected: self.n,
                found: v.dim(),
            });
        }
        Ok(())
    }

    pub fn negated(&self) -> TruthTable {
        TruthTable {
            n: self.n,
            values: self.values.iter().map(|b| !b).collect(),
        }
    }

    /// Copy of the table with the value at `v` inverted.
    pub fn flipped_at(&self, v: &Vertex) -> TruthTable {
        let mut t = self.clone();
        t.values[v.index()] = !t.values[v.index()];
        t
    }

    /// `v ↦ F(v with coordinates idx overwritten by bits)`.
    pub fn fix_coords(&self, idx: &[usize], bits: &[bool]) -> Result<TruthTable, TableError> {
        let (mask, val) = self.fixing_mask(idx, bits)?;
        Ok(self.restrict_mask(mask, val))
    }

    fn fixing_mask(&self, idx: &[usize], bits: &[bool]) -> Result<(u32, u32), TableError> {
        if idx.len() != bits.len() {
            return Err(TableError::BitCountMismatch {
                indices: idx.len(),
                bits: bits.len(),
            });
        }
        let (mut mask, mut val) = (0u32, 0u32);
        for (&i, &b) in idx.iter().zip(bits) {
            if !(1..=self.n).contains(&i) {
                return Err(TableError::IndexOutOfRange { index: i, n: self.n });
            }
            let m = 1u32 << (i - 1);
            if mask & m != 0 {
                return Err(TableError::RepeatedIndex(i));
            }
            mask |= m;
            if b {
                val |= m;
            }
        }
        Ok((mask, val))
    }

    fn restrict_mask(&self, mask: u32, val: u32) -> TruthTable {
        let values = (0..1u32 << self.n)
            .map(|i| self.values[((i & !mask) | val) as usize])
            .collect();
        TruthTable { n: self.n, values }
    }

    /// `best[v]`: most alternations on a covering chain from `0^n` to `v`.
    fn alternations_below(&self) -> Vec<u8> {
        let size = 1usize << self.n;
        let mut best = vec![0u8; size];
        for v in 1..size {
            let fv = self.values[v];
            let mut rest = v;
            let mut b = 0u8;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest ^= bit;
                let u = v ^ bit;
                b = b.max(best[u] + u8::from(self.values[u] != fv));
            }
            best[v] = b;
        }
        best
    }

    /// `above[v]`: most alternations on a covering chain from `v` to `1^n`.
    fn alternations_above(&self) -> Vec<u8> {
        let size = 1usize << self.n;
        let full = size - 1;
        let mut above = vec![0u8; size];
        for v in (0..full).rev() {
            let fv = self.values[v];
            let mut rest = full & !v;
            let mut b = 0u8;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest ^= bit;
                let w = v | bit;
                b = b.max(above[w] + u8::from(self.values[w] != fv));
            }
            above[v] = b;
        }
        above
    }

    /// The alternation length `l(F)`.
    ///
    /// Refining a chain to a covering chain never loses an alternation, so the
    /// covering-edge dynamic program over `0^n → 1^n` gives the maximum over
    /// all strictly increasing chains.
    pub fn alternation_length(&self) -> usize {
        usize::from(self.alternations_below()[(1 << self.n) - 1])
    }

    /// A covering chain attaining `l(F)` alternations. Walks up from `0^n`,
    /// adding the smallest coordinate that still allows an optimal completion.
    pub fn optimal_covering_chain(&self) -> CoveringChain {
        let above = self.alternations_above();
        let full = (1u32 << self.n) - 1;
        let mut v = 0u32;
        let mut vertices = vec![Vertex::zero(self.n)];
        while v != full {
            let here = above[v as usize];
            let fv = self.values[v as usize];
            let next = (0..self.n)
                .map(|c| v | 1 << c)
                .find(|&w| {
                    w != v
                        && above[w as usize] + u8::from(self.values[w as usize] != fv) == here
                })
                .expect("an optimal successor always exists");
            v = next;
            vertices.push(Vertex::from_index(self.n, v));
        }
        CoveringChain::new(vertices, self).expect("walk produces a covering chain")
    }

    pub fn is_level_homogeneous(&self, level: usize) -> bool {
        let mut seen = None;
        for (i, &b) in self.values.iter().enumerate() {
            if (i as u32).count_ones() as usize == level {
                match seen {
                    None => seen = Some(b),
                    Some(s) if s != b => return false,
                    _ => {}
                }
            }
        }
        true
    }

    pub fn classify(&self) -> Classification {
        let alternations = self.alternation_length();
        let homogeneous_levels: BTreeSet<usize> =
            (0..=self.n).filter(|&k| self.is_level_homogeneous(k)).collect();
        Classification {
            alternations,
            complete: alternations == self.n,
            homogeneous: homogeneous_levels.len() == self.n + 1,
            homogeneous_levels,
        }
    }

    /// The level word of a homogeneous table.
    pub fn level_word(&self) -> Option<LevelWord> {
        let word: Vec<bool> = (0..=self.n)
            .map(|k| self.values[((1u32 << k) - 1) as usize])
            .collect();
        let t = TruthTable::level_table(self.n, &LevelWord(word.clone())).ok()?;
        (t == *self).then_some(LevelWord(word))
    }

    /// Hypotheses of the key flip lemma at `v`: above `v`, every level is
    /// constant, and the level right above `v` agrees with `F(v)`.
    pub fn check_flip_conditions(&self, v: &Vertex) -> Result<bool, TableError> {
        self.check_vertex(v)?;
        if v.weight() == self.n {
            return Err(TableError::FullWeight(*v));
        }
        let fv = self.values[v.index()];
        let tv = v.weight();
        let mut level_value: Vec<Option<bool>> = vec![None; self.n + 1];
        for w in supersets(self.n, v.bits) {
            let tw = w.count_ones() as usize;
            if tw == tv {
                continue;
            }
            let fw = self.values[w as usize];
            if tw == tv + 1 && fw != fv {
                return Ok(false);
            }
            match level_value[tw] {
                None => level_value[tw] = Some(fw),
                Some(x) if x != fw => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }

    /// Searches for `(idx, bits, polarity)` with `G = F^bits_idx` or
    /// `G = 1 - F^bits_idx`. Order: fewer fixed coordinates first, then
    /// lexicographic coordinates, lexicographic bits, polarity 0 before 1.
    pub fn trivially_comparable(g: &TruthTable, f: &TruthTable) -> Result<Option<FixingWitness>, TableError> {
        if g.n != f.n {
            return Err(TableError::DimensionMismatch {
                expected: f.n,
                found: g.n,
            });
        }
        let n = f.n;
        for k in 0..=n {
            for idx in combinations(n, k) {
                let mask = idx.iter().fold(0u32, |m, &i| m | 1 << (i - 1));
                for pattern in 0..1u32 << k {
                    // bits[0] is the most significant position of `pattern`.
                    let bits: Vec<bool> = (0..k).map(|j| pattern >> (k - 1 - j) & 1 == 1).collect();
                    let val = idx
                        .iter()
                        .zip(&bits)
                        .fold(0u32, |m, (&i, &b)| if b { m | 1 << (i - 1) } else { m });
                    for negated in [false, true] {
                        let hit = (0..1u32 << n).all(|v| {
                            (f.values[((v & !mask) | val) as usize] != negated) == g.values[v as usize]
                        });
                        if hit {
                            return Ok(Some(FixingWitness {
                                idx: idx.clone(),
                                bits,
                                negated,
                            }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// `n=<dim>` line followed by the value string.
    pub fn to_text(&self) -> String {
        format!("n={}\n{}\n", self.n, bits_to_string(&self.values))
    }

    /// Value vector as a big-endian hex number whose bit `i` is entry `i`.
    pub fn to_hex(&self) -> String {
        let digits = self.values.len().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nib = (0..4).fold(0u32, |acc, b| {
                    let i = d * 4 + b;
                    acc | (u32::from(i < self.values.len() && self.values[i]) << b)
                });
                char::from_digit(nib, 16).expect("nibble")
            })
            .collect()
    }

    /// Compact inline form `<n>:<bits>`, used inside other file formats.
    pub fn to_inline(&self) -> String {
        format!("{}:{}", self.n, bits_to_string(&self.values))
    }

    pub fn parse_inline(s: &str) -> Result<Self, TableError> {
        let (n, bits) = s
            .split_once(':')
            .ok_or_else(|| parse_err(1, 1, "expected <n>:<bits>"))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| parse_err(1, 1, format!("bad dimension {n:?}")))?;
        TruthTable::new(n, parse_bit_string(bits.trim(), 1, s.find(':').unwrap_or(0) + 2)?)
    }

    /// Parses the table text format: `n=<dim>` then the value string on the
    /// next line, or `n=<dim> hex=<digits>` on one line.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, 1, "empty input"))?;
        let mut words = header.split_whitespace();
        let dim_word = words.next().unwrap_or_default();
        let col = header.find(dim_word).unwrap_or(0) + 1;
        let dim = dim_word
            .strip_prefix("n=")
            .ok_or_else(|| parse_err(line_no, col, "expected n=<dim>"))?;
        let n: usize = dim
            .parse()
            .map_err(|_| parse_err(line_no, col + 2, format!("bad dimension {dim:?}")))?;
        check_dim(n).map_err(|e| parse_err(line_no, col + 2, e.to_string()))?;
        let values = if let Some(hex_word) = words.next() {
            let hcol = header.find(hex_word).unwrap_or(0) + 1;
            let hex = hex_word
                .strip_prefix("hex=")
                .ok_or_else(|| parse_err(line_no, hcol, "expected hex=<digits>"))?;
            parse_hex_values(n, hex, line_no, hcol + 4)?
        } else {
            let (vline, body) = lines
                .next()
                .ok_or_else(|| parse_err(line_no + 1, 1, "missing value line"))?;
            let trimmed = body.trim();
            let col0 = body.find(trimmed).unwrap_or(0) + 1;
            let values = parse_bit_string(trimmed, vline, col0)?;
            if values.len() != 1 << n {
                return Err(parse_err(
                    vline,
                    col0 + values.len().min(1 << n),
                    format!("expected {} values, found {}", 1 << n, values.len()),
                ));
            }
            values
        };
        if let Some((extra, _)) = lines.next() {
            return Err(parse_err(extra, 1, "unexpected trailing content"));
        }
        TruthTable::new(n, values)
    }
}

fn parse_hex_values(n: usize, hex: &str, line: usize, col0: usize) -> Result<Vec<bool>, TableError> {
    let size = 1usize << n;
    let mut values = vec![false; size];
    for (pos, c) in hex.chars().rev().enumerate() {
        let col = col0 + hex.chars().count() - 1 - pos;
        let nib = c
            .to_digit(16)
            .ok_or_else(|| parse_err(line, col, format!("bad hex digit {c:?}")))?;
        for b in 0..4 {
            if nib >> b & 1 == 1 {
                let i = pos * 4 + b;
                if i >= size {
                    return Err(parse_err(line, col, "hex value exceeds 2^n bits"));
                }
                values[i] = true;
            }
        }
    }
    Ok(values)
}

/// All supersets of `bits` inside `2^n`, including `bits` itself.
pub(crate) fn supersets(n: usize, bits: u32) -> impl Iterator<Item = u32> {
    let free = full_mask(n) & !bits;
    let mut sub = free;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = bits | sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & free;
        }
        Some(out)
    })
}

/// `k`-element subsets of `1..=n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    /// Figure-style example: complete but inhomogeneous, n = 3.
    pub(crate) fn complete_inhomogeneous() -> TruthTable {
        let ones = ["111", "110", "011", "100", "001"];
        TruthTable::from_fn(3, |u| ones.iter().any(|s| v(s) == u)).unwrap()
    }

    #[test]
    fn vertex_convention_is_lsb_first() {
        let x = v("100");
        assert_eq!(x.index(), 1);
        assert!(x.coord(1) && !x.coord(3));
        assert_eq!(v("001").index(), 4);
        assert_eq!(x.to_string(), "100");
    }

    #[test]
    fn eval_examples() {
        assert!(!TruthTable::or2().eval(&v("00")).unwrap());
        assert!(!complete_inhomogeneous().eval(&v("101")).unwrap());
        assert!(!TruthTable::parity(3).unwrap().eval(&v("110")).unwrap());
        assert_eq!(
            TruthTable::or2().eval(&v("000")),
            Err(TableError::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn fix_coords_examples() {
        let or = TruthTable::or2();
        assert_eq!(or.fix_coords(&[1], &[true]).unwrap(), TruthTable::constant(2, true).unwrap());
        let proj2 = TruthTable::from_fn(2, |u| u.coord(2)).unwrap();
        assert_eq!(TruthTable::and2().fix_coords(&[1], &[true]).unwrap(), proj2);
        // Enumerated: with x2 = 1, x3 = 0 the parity is x1 ⊕ 1.
        let expect = TruthTable::from_fn(3, |u| !u.coord(1)).unwrap();
        assert_eq!(TruthTable::parity(3).unwrap().fix_coords(&[2, 3], &[true, false]).unwrap(), expect);
        assert_eq!(or.fix_coords(&[1, 1], &[true, false]), Err(TableError::RepeatedIndex(1)));
        assert_eq!(
            or.fix_coords(&[3], &[true]),
            Err(TableError::IndexOutOfRange { index: 3, n: 2 })
        );
    }

    #[test]
    fn named_alternation_lengths() {
        assert_eq!(TruthTable::and2().alternation_length(), 1);
        assert_eq!(TruthTable::or2().alternation_length(), 1);
        assert_eq!(TruthTable::implies2().alternation_length(), 2);
        assert_eq!(TruthTable::implied_by2().alternation_length(), 2);
        assert_eq!(TruthTable::iff2().alternation_length(), 2);
        assert_eq!(TruthTable::constant(4, true).unwrap().alternation_length(), 0);
        assert_eq!(complete_inhomogeneous().alternation_length(), 3);
    }

    #[test]
    fn optimal_chain_examples() {
        let c = TruthTable::parity(2).unwrap().optimal_covering_chain();
        assert_eq!(c.to_string(), "00,10,11");
        assert_eq!(bits_to_string(c.word()), "010");
        let c = complete_inhomogeneous().optimal_covering_chain();
        assert_eq!(c.to_string(), "000,100,101,111");
        assert_eq!(bits_to_string(c.word()), "0101");
        let c = TruthTable::constant(3, true).unwrap().optimal_covering_chain();
        assert_eq!(bits_to_string(c.word()), "1111");
        assert_eq!(c.alternations(), 0);
        assert_eq!(c.added_coordinates(), vec![1, 2, 3]);
    }

    #[test]
    fn classify_examples() {
        let c = complete_inhomogeneous().classify();
        assert!(c.complete && !c.homogeneous);
        assert_eq!(c.homogeneous_levels, BTreeSet::from([0, 3]));
        let c = TruthTable::parity(4).unwrap().classify();
        assert!(c.complete && c.homogeneous);
        let c = TruthTable::or2().classify();
        assert!(!c.complete && c.homogeneous);
    }

    #[test]
    fn word_alternation_examples() {
        let w = |s: &str| s.parse::<LevelWord>().unwrap();
        assert_eq!(w("11010").alternations(), 3);
        assert_eq!(w("00010").alternations(), 2);
        assert_eq!(w("0000").alternations(), 0);
    }

    #[test]
    fn level_tables() {
        let h = TruthTable::level_table(4, &"11010".parse().unwrap()).unwrap();
        for u in 0..16u32 {
            let expect = [true, true, false, true, false][u.count_ones() as usize];
            assert_eq!(h.get(u as usize), expect);
        }
        let k = TruthTable::top_alternating(4, 2).unwrap();
        assert_eq!(LevelWord::top_alternating(4, 2).unwrap().to_string(), "00010");
        assert_eq!(k.level_word().unwrap().to_string(), "00010");
        assert_eq!(TruthTable::top_alternating(3, 3).unwrap(), TruthTable::parity(3).unwrap());
        assert!(LevelWord::top_alternating(3, 4).is_err());
        assert!(TruthTable::level_table(4, &"0101".parse().unwrap()).is_err());
    }

    #[test]
    fn trivially_comparable_examples() {
        let or = TruthTable::or2();
        let w = TruthTable::trivially_comparable(&or, &or).unwrap().unwrap();
        assert!(w.idx.is_empty() && !w.negated);
        let proj2 = TruthTable::from_fn(2, |u| u.coord(2)).unwrap();
        let w = TruthTable::trivially_comparable(&proj2, &or).unwrap().unwrap();
        assert_eq!((w.idx, w.bits, w.negated), (vec![1], vec![false], false));
        assert_eq!(TruthTable::trivially_comparable(&TruthTable::and2(), &or).unwrap(), None);
    }

    #[test]
    fn flip_condition_examples() {
        let k31 = TruthTable::top_alternating(3, 1).unwrap();
        assert!(!k31.check_flip_conditions(&v("110")).unwrap());
        let c = TruthTable::constant(3, false).unwrap();
        for i in 0..7 {
            assert!(c.check_flip_conditions(&Vertex::from_index(3, i)).unwrap());
        }
        // First table of the three-dimensional normalization walkthrough.
        let ones = ["111", "101", "011", "100", "001"];
        let walk = TruthTable::from_fn(3, |u| ones.iter().any(|s| v(s) == u)).unwrap();
        assert!(walk.check_flip_conditions(&v("001")).unwrap());
        assert!(matches!(walk.check_flip_conditions(&v("111")), Err(TableError::FullWeight(_))));
    }

    #[test]
    fn text_formats() {
        let t = TruthTable::parse("n=2\n0111\n").unwrap();
        assert_eq!(t, TruthTable::or2());
        assert_eq!(TruthTable::parse(&t.to_text()).unwrap(), t);
        assert_eq!(t.to_hex(), "e");
        assert_eq!(TruthTable::parse("n=2 hex=e").unwrap(), t);
        let p = TruthTable::parity(3).unwrap();
        assert_eq!(TruthTable::parse(&format!("n=3 hex={}", p.to_hex())).unwrap(), p);
        assert_eq!(TruthTable::parse_inline("2:0111").unwrap(), t);
        match TruthTable::parse("n=2\n01x1\n") {
            Err(TableError::Parse { line: 2, column: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(TruthTable::parse("n=2\n011\n"), Err(TableError::Parse { line: 2, .. })));
        assert!(matches!(TruthTable::parse("dim=2\n0111"), Err(TableError::Parse { line: 1, column: 1, .. })));
        assert!(matches!(TruthTable::parse("n=17\n"), Err(TableError::Parse { .. })));
    }

    #[test]
    fn chain_parsing_and_validation() {
        let c: CoveringChain = "000,100,101,111".parse().unwrap();
        assert_eq!(c.added_coordinates(), vec![1, 3, 2]);
        assert!("000,110,111".parse::<CoveringChain>().is_err());
        assert!("100,110,111,111".parse::<CoveringChain>().is_err());
    }

    #[test]
    fn superset_and_combination_helpers() {
        let mut s: Vec<u32> = supersets(3, 0b001).collect();
        s.sort();
        assert_eq!(s, vec![0b001, 0b011, 0b101, 0b111]);
        assert_eq!(combinations(3, 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
