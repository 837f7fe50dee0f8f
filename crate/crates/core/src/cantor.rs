// SPDX-License-Identifier: Apache-2.0

//! Eventually periodic points of Cantor space and the step functions over them.
//!
//! A point is a finite prefix followed by a nonempty period repeated forever.
//! Points are kept in a canonical form so that equality of sequences is
//! structural equality. All order queries are exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::truthtable::{bits_to_string, TableError, TruthTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CantorError {
    #[error("empty period")]
    EmptyPeriod,
    #[error("malformed point {text:?}: {message}")]
    Parse { text: String, message: String },
    #[error("thresholds are not strictly increasing at position {0}")]
    NotIncreasing(usize),
    #[error("threshold {0} is not proper")]
    Improper(usize),
    #[error("thresholds must lie strictly between 0^ω and 1^ω")]
    Endpoint,
    #[error("no finite-support point fits between thresholds {0} and {1}")]
    NoRoom(usize, usize),
    #[error("expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error(transparent)]
    Table(#[from] TableError),
}

/// `prefix * period^ω` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CantorPoint {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn primitive_root(period: &[bool]) -> Vec<bool> {
    let len = period.len();
    for p in 1..=len {
        if len.is_multiple_of(p) && (p..len).all(|i| period[i] == period[i - p]) {
            return period[..p].to_vec();
        }
    }
    period.to_vec()
}

impl CantorPoint {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Result<Self, CantorError> {
        if period.is_empty() {
            return Err(CantorError::EmptyPeriod);
        }
        let mut prefix = prefix;
        let mut period = primitive_root(&period);
        while let (Some(&a), Some(&b)) = (prefix.last(), period.last()) {
            if a != b {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Ok(CantorPoint { prefix, period })
    }

    /// `b^ω`.
    pub fn constant(b: bool) -> Self {
        CantorPoint {
            prefix: Vec::new(),
            period: vec![b],
        }
    }

    pub fn zeros() -> Self {
        Self::constant(false)
    }

    pub fn ones() -> Self {
        Self::constant(true)
    }

    /// `word * b^ω`.
    pub fn with_tail(word: &[bool], b: bool) -> Self {
        CantorPoint::new(word.to_vec(), vec![b]).expect("nonempty period")
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn bit(&self, i: usize) -> bool {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// The first `k` bits, `x↾k`.
    pub fn prefix_bits(&self, k: usize) -> Vec<bool> {
        (0..k).map(|i| self.bit(i)).collect()
    }

    /// `(x↾k) * b^ω`.
    pub fn truncate_fill(&self, k: usize, b: bool) -> CantorPoint {
        CantorPoint::with_tail(&self.prefix_bits(k), b)
    }

    /// Infinitely many ones.
    pub fn is_proper(&self) -> bool {
        self.period.contains(&true)
    }

    /// Finitely many ones.
    pub fn is_finite_support(&self) -> bool {
        self.period == [false]
    }

    /// Length after which comparisons with `other` need not look.
    fn horizon(&self, other: &CantorPoint) -> usize {
        self.prefix.len().max(other.prefix.len()) + lcm(self.period.len(), other.period.len())
    }

    /// First position where the two sequences differ.
    pub fn first_difference(&self, other: &CantorPoint) -> Option<usize> {
        (0..self.horizon(other)).find(|&i| self.bit(i) != other.bit(i))
    }

    pub fn lex_compare(&self, other: &CantorPoint) -> Ordering {
        match self.first_difference(other) {
            None => Ordering::Equal,
            Some(i) => self.bit(i).cmp(&other.bit(i)),
        }
    }

    /// The bitwise complement.
    pub fn complement(&self) -> CantorPoint {
        CantorPoint::new(
            self.prefix.iter().map(|b| !b).collect(),
            self.period.iter().map(|b| !b).collect(),
        )
        .expect("nonempty period")
    }

    /// Builds a point from separate prefix and period strings.
    pub fn from_parts(prefix: &str, period: &str) -> Result<Self, CantorError> {
        format!("{prefix}({period})").parse()
    }
}

impl PartialOrd for CantorPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CantorPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_compare(other)
    }
}

impl fmt::Display for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", bits_to_string(&self.prefix), bits_to_string(&self.period))
    }
}

fn bits_of(text: &str, part: &str) -> Result<Vec<bool>, CantorError> {
    part.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(CantorError::Parse {
                text: text.into(),
                message: format!("unexpected character {other:?}"),
            }),
        })
        .collect()
}

impl FromStr for CantorPoint {
    type Err = CantorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let err = |message: &str| CantorError::Parse {
            text: text.into(),
            message: message.into(),
        };
        let open = text.find('(').ok_or_else(|| err("expected prefix(period)"))?;
        let body = text[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| err("missing closing parenthesis"))?;
        if body.contains(['(', ')']) {
            return Err(err("nested parentheses"));
        }
        let prefix = bits_of(text, &text[..open])?;
        let period = bits_of(text, body)?;
        if period.is_empty() {
            return Err(CantorError::EmptyPeriod);
        }
        CantorPoint::new(prefix, period)
    }
}

/// Parses a comma-separated list of points.
pub fn parse_point_list(s: &str) -> Result<Vec<CantorPoint>, CantorError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

pub fn format_point_list(points: &[CantorPoint]) -> String {
    points.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// `s_α(x)`: 1 iff `x ≥ α`.
pub fn step(alpha: &CantorPoint, x: &CantorPoint) -> bool {
    x.lex_compare(alpha) != Ordering::Less
}

fn check_increasing(thresholds: &[CantorPoint]) -> Result<(), CantorError> {
    for (i, pair) in thresholds.windows(2).enumerate() {
        if pair[0] >= pair[1] {
            return Err(CantorError::NotIncreasing(i + 1));
        }
    }
    Ok(())
}

/// `s_{(α_1,…,α_n)}(x)`: the number of thresholds `≤ x`.
pub fn multi_step(thresholds: &[CantorPoint], x: &CantorPoint) -> Result<usize, CantorError> {
    check_increasing(thresholds)?;
    Ok(thresholds.iter().filter(|a| step(a, x)).count())
}

/// `F(s_{α_1}(x_1), …, s_{α_n}(x_n))`.
pub fn eval_sf(f: &TruthTable, thresholds: &[CantorPoint], xs: &[CantorPoint]) -> Result<bool, CantorError> {
    let n = f.dim();
    if thresholds.len() != n {
        return Err(CantorError::Arity {
            expected: n,
            found: thresholds.len(),
        });
    }
    if xs.len() != n {
        return Err(CantorError::Arity {
            expected: n,
            found: xs.len(),
        });
    }
    Ok(f.eval_bits(&truth_vector(thresholds, xs))?)
}

/// The equal-threshold form `s^F_α`; `α` must be proper.
pub fn eval_sf_equal(f: &TruthTable, alpha: &CantorPoint, xs: &[CantorPoint]) -> Result<bool, CantorError> {
    if !alpha.is_proper() {
        return Err(CantorError::Improper(1));
    }
    eval_sf(f, &vec![alpha.clone(); f.dim()], xs)
}

/// `(s_{α_1}(x_1), …)` as bits.
pub fn truth_vector(thresholds: &[CantorPoint], xs: &[CantorPoint]) -> Vec<bool> {
    thresholds.iter().zip(xs).map(|(a, x)| step(a, x)).collect()
}

fn increment(bits: &[bool]) -> Option<Vec<bool>> {
    let mut out = bits.to_vec();
    for b in out.iter_mut().rev() {
        if *b {
            *b = false;
        } else {
            *b = true;
            return Some(out);
        }
    }
    None
}

fn decrement(bits: &[bool]) -> Option<Vec<bool>> {
    let mut out = bits.to_vec();
    for b in out.iter_mut().rev() {
        if *b {
            *b = false;
            return Some(out);
        }
        *b = true;
    }
    None
}

/// Finite-support points `(q^ℓ_i, q^u_i)` with
/// `α_i < q^ℓ_i < q^u_i < α_{i+1}` for each consecutive pair.
///
/// For each pair the shortest support length with room for two points is
/// used, and the two smallest such points are taken.
pub fn dyadic_separators(thresholds: &[CantorPoint]) -> Result<Vec<(CantorPoint, CantorPoint)>, CantorError> {
    check_increasing(thresholds)?;
    if let (Some(first), Some(last)) = (thresholds.first(), thresholds.last()) {
        if *first <= CantorPoint::zeros() || *last >= CantorPoint::ones() {
            return Err(CantorError::Endpoint);
        }
    }
    let mut out = Vec::new();
    for (i, pair) in thresholds.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let bound = a.prefix().len().max(b.prefix().len()) + 2 * lcm(a.period().len(), b.period().len()) + 4;
        let found = (1..=bound).find_map(|len| {
            let lo = increment(&a.prefix_bits(len))?;
            let b_head = b.prefix_bits(len);
            let tail_zero = b.truncate_fill(len, false) == *b;
            let hi = if tail_zero { decrement(&b_head)? } else { b_head };
            let up = increment(&lo)?;
            (up <= hi).then(|| (CantorPoint::with_tail(&lo, false), CantorPoint::with_tail(&up, false)))
        });
        out.push(found.ok_or(CantorError::NoRoom(i + 1, i + 2))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> CantorPoint {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(p("0(10)"), p("(01)"));
        assert_eq!(p("(0101)"), p("(01)"));
        assert_eq!(p("111(1)"), p("(1)"));
        assert_eq!(p("0(10)").to_string(), "(01)");
        assert_eq!(p("01(0)").to_string(), "01(0)");
        assert!("01".parse::<CantorPoint>().is_err());
        assert_eq!("01()".parse::<CantorPoint>(), Err(CantorError::EmptyPeriod));
        assert!("0x(1)".parse::<CantorPoint>().is_err());
    }

    #[test]
    fn compare_examples() {
        assert_eq!(p("(01)").lex_compare(&p("(1)")), Ordering::Less);
        assert_eq!(p("01(0)").lex_compare(&p("(01)")), Ordering::Less);
        assert_eq!(p("0(10)").lex_compare(&p("(01)")), Ordering::Equal);
    }

    #[test]
    fn properness() {
        assert!(p("(01)").is_proper());
        assert!(!p("111(0)").is_proper());
        assert!(p("(1)").is_proper());
    }

    #[test]
    fn step_examples() {
        let alpha = p("10(011)");
        assert!(step(&alpha, &alpha));
        for n in 0..12 {
            assert!(step(&alpha, &alpha.truncate_fill(n, true)));
            assert!(!step(&alpha, &alpha.truncate_fill(n, false)));
        }
    }

    #[test]
    fn multi_step_examples() {
        let t = vec![p("00(1)"), p("01(1)")];
        assert_eq!(multi_step(&t, &p("(0)")).unwrap(), 0);
        assert_eq!(multi_step(&t, &p("010(0)")).unwrap(), 1);
        assert_eq!(multi_step(&t, &t[1]).unwrap(), 2);
        assert_eq!(multi_step(&[t[1].clone(), t[0].clone()], &p("(0)")), Err(CantorError::NotIncreasing(1)));
    }

    #[test]
    fn eval_sf_examples() {
        let alpha = p("(01)");
        let or = TruthTable::or2();
        assert!(eval_sf_equal(&or, &alpha, &[alpha.clone(), p("(0)")]).unwrap());
        let par = TruthTable::parity(2).unwrap();
        assert!(!eval_sf_equal(&par, &alpha, &[alpha.clone(), alpha.clone()]).unwrap());
        assert!(eval_sf_equal(&or, &p("(0)"), &[alpha.clone(), alpha.clone()]).is_err());
        assert!(eval_sf_equal(&or, &alpha, std::slice::from_ref(&alpha)).is_err());
    }

    #[test]
    fn separator_examples() {
        let t = vec![p("0(01)"), p("1(01)")];
        let seps = dyadic_separators(&t).unwrap();
        let (lo, up) = &seps[0];
        assert!(t[0] < *lo && lo < up && *up < t[1]);
        assert!(lo.is_finite_support() && up.is_finite_support());
        assert_eq!((lo.to_string(), up.to_string()), ("01(0)".to_string(), "1(0)".to_string()));
        assert!(dyadic_separators(&[t[0].clone(), t[0].clone()]).is_err());
        assert!(dyadic_separators(&t[..1]).unwrap().is_empty());
        assert_eq!(dyadic_separators(&[p("001(1)"), p("01(0)")]), Err(CantorError::NoRoom(1, 2)));
        assert_eq!(dyadic_separators(&[p("(0)"), p("1(01)")]), Err(CantorError::Endpoint));
    }
}
