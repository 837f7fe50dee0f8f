// SPDX-License-Identifier: Apache-2.0

//! Problems, post-processing maps, witness pairs and their certificates.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::run::localizer_case;
use super::stage::{Fields, Stage};
use super::{Transducer, TransducerError};
use crate::cantor::{self, format_point_list, parse_point_list, CantorError, CantorPoint};
use crate::truthtable::TruthTable;

/// A function on tuples of Cantor points with finitely many answers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Problem {
    /// `s^F_{α_1,…,α_n}`.
    StepF { table: TruthTable, thresholds: Vec<CantorPoint> },
    /// `s_{(α_1,…,α_n)}` on a single point, answers `0..=n`.
    MultiStep { thresholds: Vec<CantorPoint> },
    /// 1 iff the input is `0^ω`.
    Lpo,
}

impl Problem {
    /// `s^F_α` with every coordinate compared against `alpha`.
    pub fn step_equal(table: TruthTable, alpha: &CantorPoint) -> Problem {
        let n = table.dim();
        Problem::StepF {
            table,
            thresholds: vec![alpha.clone(); n],
        }
    }

    /// `s_α`.
    pub fn single(alpha: &CantorPoint) -> Problem {
        Problem::step_equal(TruthTable::identity1(), alpha)
    }

    pub fn arity(&self) -> usize {
        match self {
            Problem::StepF { table, .. } => table.dim(),
            Problem::MultiStep { .. } | Problem::Lpo => 1,
        }
    }

    pub fn answers(&self) -> usize {
        match self {
            Problem::MultiStep { thresholds } => thresholds.len() + 1,
            _ => 2,
        }
    }

    pub fn eval(&self, xs: &[CantorPoint]) -> Result<u32, CantorError> {
        if xs.len() != self.arity() {
            return Err(CantorError::Arity {
                expected: self.arity(),
                found: xs.len(),
            });
        }
        match self {
            Problem::StepF { table, thresholds } => Ok(u32::from(cantor::eval_sf(table, thresholds, xs)?)),
            Problem::MultiStep { thresholds } => Ok(cantor::multi_step(thresholds, &xs[0])? as u32),
            Problem::Lpo => Ok(u32::from(xs[0] == CantorPoint::zeros())),
        }
    }

    /// The common threshold, if all coordinates share one.
    pub fn equal_threshold(&self) -> Option<&CantorPoint> {
        match self {
            Problem::StepF { thresholds, .. } => {
                let first = thresholds.first()?;
                thresholds.iter().all(|t| t == first).then_some(first)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::StepF { table, thresholds } => {
                write!(f, "step table={}", table.to_inline())?;
                match self.equal_threshold() {
                    Some(a) => write!(f, " alpha={a}"),
                    None => write!(f, " thresholds={}", format_point_list(thresholds)),
                }
            }
            Problem::MultiStep { thresholds } => write!(f, "multistep thresholds={}", format_point_list(thresholds)),
            Problem::Lpo => write!(f, "lpo"),
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        let name = words.next().ok_or("empty problem")?;
        let f = Fields::parse(words)?;
        let points = |key: &str| -> Result<Vec<CantorPoint>, String> {
            parse_point_list(f.str(key)?).map_err(|e| e.to_string())
        };
        match name {
            "step" => {
                f.check_only(&["table", "alpha", "thresholds"])?;
                let table = TruthTable::parse_inline(f.str("table")?).map_err(|e| e.to_string())?;
                let thresholds = match (f.opt("alpha"), f.opt("thresholds")) {
                    (Some(a), None) => vec![a.parse::<CantorPoint>().map_err(|e| e.to_string())?; table.dim()],
                    (None, Some(_)) => points("thresholds")?,
                    _ => return Err("expected exactly one of alpha= and thresholds=".into()),
                };
                if thresholds.len() != table.dim() {
                    return Err(format!("{} thresholds for dimension {}", thresholds.len(), table.dim()));
                }
                Ok(Problem::StepF { table, thresholds })
            }
            "multistep" => {
                f.check_only(&["thresholds"])?;
                Ok(Problem::MultiStep {
                    thresholds: points("thresholds")?,
                })
            }
            "lpo" => {
                f.check_only(&[])?;
                Ok(Problem::Lpo)
            }
            other => Err(format!("unknown problem {other:?}")),
        }
    }
}

/// Translation of the target's answer back to a source answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PostMap {
    /// Answer `a` becomes `table[a]`; the input is not consulted.
    Strong(Vec<u32>),
    /// Like `Strong`, but undefined on some answers.
    Partial(Vec<Option<u32>>),
    /// Re-reads the input to find the coordinate the localizer chose, `k`,
    /// and answers `k - 1 + b`.
    Localize { separators: Vec<(CantorPoint, CantorPoint)> },
}

impl PostMap {
    pub fn identity() -> PostMap {
        PostMap::Strong(vec![0, 1])
    }

    pub fn negation() -> PostMap {
        PostMap::Strong(vec![1, 0])
    }

    pub fn apply(&self, answer: u32, xs: &[CantorPoint]) -> Option<u32> {
        match self {
            PostMap::Strong(t) => t.get(answer as usize).copied(),
            PostMap::Partial(t) => t.get(answer as usize).copied().flatten(),
            PostMap::Localize { separators } => {
                let k = localizer_case(separators, xs.first()?) as u32;
                Some(k + answer)
            }
        }
    }

    pub fn is_strong(&self) -> bool {
        matches!(self, PostMap::Strong(_))
    }

    pub fn is_identity(&self) -> bool {
        match self {
            PostMap::Strong(t) => t.iter().enumerate().all(|(i, &a)| a == i as u32),
            _ => false,
        }
    }
}

impl fmt::Display for PostMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PostMap::Strong(t) => {
                write!(f, "strong")?;
                for (i, a) in t.iter().enumerate() {
                    write!(f, " {i}->{a}")?;
                }
                Ok(())
            }
            PostMap::Partial(t) => {
                write!(f, "partial")?;
                for (i, a) in t.iter().enumerate() {
                    match a {
                        Some(a) => write!(f, " {i}->{a}")?,
                        None => write!(f, " {i}->-")?,
                    }
                }
                Ok(())
            }
            PostMap::Localize { separators } => {
                let parts: Vec<String> = separators.iter().map(|(a, b)| format!("{a}/{b}")).collect();
                write!(f, "localize seps={}", parts.join(","))
            }
        }
    }
}

impl std::str::FromStr for PostMap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        let kind = words.next().ok_or("empty post map")?;
        let rest: Vec<&str> = words.collect();
        let entries = |rest: &[&str]| -> Result<Vec<Option<u32>>, String> {
            let mut out = Vec::new();
            for (i, w) in rest.iter().enumerate() {
                let (a, b) = w.split_once("->").ok_or_else(|| format!("bad entry {w:?}"))?;
                if a.parse::<usize>().ok() != Some(i) {
                    return Err(format!("entry {w:?} out of order"));
                }
                out.push(match b {
                    "-" => None,
                    b => Some(b.parse().map_err(|_| format!("bad answer {b:?}"))?),
                });
            }
            Ok(out)
        };
        match kind {
            "strong" => entries(&rest)?
                .into_iter()
                .map(|e| e.ok_or_else(|| "strong post maps are total".to_string()))
                .collect::<Result<Vec<_>, _>>()
                .map(PostMap::Strong),
            "partial" => entries(&rest).map(PostMap::Partial),
            "localize" => {
                let stage: Stage = format!("localizer {}", rest.join(" ")).parse()?;
                match stage {
                    Stage::Localizer { separators } => Ok(PostMap::Localize { separators }),
                    _ => unreachable!("parsed as localizer"),
                }
            }
            other => Err(format!("unknown post map {other:?}")),
        }
    }
}

/// Parses the compact post notation of fixture files: one character per
/// answer, `0`-`9` or `-` for undefined, e.g. `01` for the identity.
pub fn parse_compact_post(s: &str) -> Result<PostMap, String> {
    let entries = s
        .chars()
        .map(|c| match c {
            '-' => Ok(None),
            c => c.to_digit(10).map(Some).ok_or_else(|| format!("bad post entry {c:?}")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if entries.iter().all(Option::is_some) {
        Ok(PostMap::Strong(entries.into_iter().flatten().collect()))
    } else {
        Ok(PostMap::Partial(entries))
    }
}

/// A pre-processing machine and post-processing map claimed to reduce
/// `source` to `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub pre: Transducer,
    pub post: PostMap,
    pub source: Problem,
    pub target: Problem,
}

impl WitnessPair {
    pub fn check_arities(&self) -> Result<(), TransducerError> {
        if self.pre.arity_in() != self.source.arity() {
            return Err(TransducerError::Arity {
                expected: self.source.arity(),
                found: self.pre.arity_in(),
            });
        }
        if self.pre.arity_out() != self.target.arity() {
            return Err(TransducerError::Arity {
                expected: self.target.arity(),
                found: self.pre.arity_out(),
            });
        }
        Ok(())
    }
}

/// Replayable text form of a witness: problems, stages in application
/// order, and the post map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub source: Problem,
    pub target: Problem,
    pub stages: Vec<Stage>,
    pub post: PostMap,
}

impl Certificate {
    pub fn witness(&self) -> Result<WitnessPair, TransducerError> {
        let w = WitnessPair {
            pre: Stage::build_all(&self.stages)?,
            post: self.post.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
        };
        w.check_arities()?;
        Ok(w)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("certificate v1\n");
        s.push_str(&format!("source {}\n", self.source));
        s.push_str(&format!("target {}\n", self.target));
        for st in &self.stages {
            s.push_str(&format!("stage {st}\n"));
        }
        s.push_str(&format!("post {}\n", self.post));
        s.push_str("end\n");
        s
    }

    pub fn parse(text: &str) -> Result<Certificate, TransducerError> {
        let err = |line: usize, message: String| TransducerError::Certificate { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, "certificate v1")) => {}
            Some((n, l)) => return Err(err(n, format!("expected header, found {l:?}"))),
            None => return Err(err(1, "empty certificate".into())),
        }
        let (mut source, mut target, mut post) = (None, None, None);
        let mut stages = Vec::new();
        let mut last = 1;
        for (n, line) in lines {
            last = n;
            let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
            match head {
                "source" => source = Some(rest.parse().map_err(|e| err(n, e))?),
                "target" => target = Some(rest.parse().map_err(|e| err(n, e))?),
                "stage" => stages.push(rest.parse().map_err(|e| err(n, e))?),
                "post" => post = Some(rest.parse().map_err(|e| err(n, e))?),
                "end" => {
                    let missing = |what: &str| err(n, format!("missing {what} line"));
                    return Ok(Certificate {
                        source: source.ok_or_else(|| missing("source"))?,
                        target: target.ok_or_else(|| missing("target"))?,
                        stages,
                        post: post.ok_or_else(|| missing("post"))?,
                    });
                }
                other => return Err(err(n, format!("unexpected line kind {other:?}"))),
            }
        }
        Err(err(last + 1, "truncated certificate: missing end".into()))
    }
}
