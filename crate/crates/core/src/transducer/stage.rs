// SPDX-License-Identifier: Apache-2.0

//! Named builder invocations, the unit of certificates and fixture files.
//!
//! A stage is written on one line as a name followed by `key=value` pairs,
//! for example `wtow n=4 k0=2` or `flip v=0110`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Transducer, TransducerError};
use crate::cantor::CantorPoint;
use crate::truthtable::{bits_to_string, CoveringChain, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    Identity { n: usize },
    BitFlip,
    Max,
    Min,
    MaxMin,
    SwitchOnSplit,
    Swap,
    Sorted { n: usize },
    Wtow { n: usize, k0: usize },
    Wtow1 { n: usize, k0: usize },
    Flip { v: Vertex },
    ChainEmbed { chain: CoveringChain },
    ConstPlug { n: usize, idx: Vec<usize>, bits: Vec<bool> },
    PadOnes { l: usize, n: usize },
    PadZeros { l: usize, n: usize },
    KeepSmallest { n: usize, l: usize },
    Duplicate { n: usize },
    Project { n: usize, i: usize },
    Stall { arity_in: usize, arity_out: usize },
    Truncate { n: usize, limit: usize },
    Localizer { separators: Vec<(CantorPoint, CantorPoint)> },
}

impl Stage {
    pub fn build(&self) -> Result<Transducer, TransducerError> {
        use super as b;
        match self {
            Stage::Identity { n } => b::identity(*n),
            Stage::BitFlip => Ok(b::bit_flip()),
            Stage::Max => Ok(b::max2()),
            Stage::Min => Ok(b::min2()),
            Stage::MaxMin => Ok(b::maxmin_pair()),
            Stage::SwitchOnSplit => Ok(b::switch_on_split()),
            Stage::Swap => Ok(b::swap()),
            Stage::Sorted { n } => b::sorted(*n),
            Stage::Wtow { n, k0 } => b::wtow(*n, *k0),
            Stage::Wtow1 { n, k0 } => b::wtow1(*n, *k0),
            Stage::Flip { v } => b::keylemma_flip(*v),
            Stage::ChainEmbed { chain } => Ok(b::chain_embed(chain)),
            Stage::ConstPlug { n, idx, bits } => b::const_plug(*n, idx, bits),
            Stage::PadOnes { l, n } => b::pad_ones(*l, *n),
            Stage::PadZeros { l, n } => b::pad_zeros(*l, *n),
            Stage::KeepSmallest { n, l } => b::keep_smallest(*n, *l),
            Stage::Duplicate { n } => b::duplicate(*n),
            Stage::Project { n, i } => b::project(*n, *i),
            Stage::Stall { arity_in, arity_out } => Ok(Transducer::Stall {
                arity_in: *arity_in,
                arity_out: *arity_out,
            }),
            Stage::Truncate { n, limit } => Ok(Transducer::Truncate {
                arity: *n,
                limit: *limit,
            }),
            Stage::Localizer { separators } => Ok(Transducer::Localizer {
                separators: separators.clone(),
            }),
        }
    }

    /// Builds every stage and composes them in order.
    pub fn build_all(stages: &[Stage]) -> Result<Transducer, TransducerError> {
        let built = stages.iter().map(Stage::build).collect::<Result<Vec<_>, _>>()?;
        super::compose_all(built)
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Identity { n } => write!(f, "identity n={n}"),
            Stage::BitFlip => write!(f, "bit_flip"),
            Stage::Max => write!(f, "max"),
            Stage::Min => write!(f, "min"),
            Stage::MaxMin => write!(f, "maxmin"),
            Stage::SwitchOnSplit => write!(f, "switch_on_split"),
            Stage::Swap => write!(f, "swap"),
            Stage::Sorted { n } => write!(f, "sorted n={n}"),
            Stage::Wtow { n, k0 } => write!(f, "wtow n={n} k0={k0}"),
            Stage::Wtow1 { n, k0 } => write!(f, "wtow1 n={n} k0={k0}"),
            Stage::Flip { v } => write!(f, "flip v={v}"),
            Stage::ChainEmbed { chain } => write!(f, "chain_embed chain={chain}"),
            Stage::ConstPlug { n, idx, bits } => {
                write!(f, "const_plug n={n} idx={} bits={}", join(idx), bits_to_string(bits))
            }
            Stage::PadOnes { l, n } => write!(f, "pad_ones l={l} n={n}"),
            Stage::PadZeros { l, n } => write!(f, "pad_zeros l={l} n={n}"),
            Stage::KeepSmallest { n, l } => write!(f, "keep_smallest n={n} l={l}"),
            Stage::Duplicate { n } => write!(f, "duplicate n={n}"),
            Stage::Project { n, i } => write!(f, "project n={n} i={i}"),
            Stage::Stall { arity_in, arity_out } => write!(f, "stall in={arity_in} out={arity_out}"),
            Stage::Truncate { n, limit } => write!(f, "truncate n={n} limit={limit}"),
            Stage::Localizer { separators } => {
                write!(f, "localizer seps=")?;
                let parts: Vec<String> = separators.iter().map(|(a, b)| format!("{a}/{b}")).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

/// `key=value` pairs after a leading name.
pub(crate) struct Fields {
    map: BTreeMap<String, String>,
}

impl Fields {
    pub(crate) fn parse<'a>(words: impl Iterator<Item = &'a str>) -> Result<Fields, String> {
        let mut map = BTreeMap::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| format!("expected key=value, found {w:?}"))?;
            if map.insert(k.to_string(), v.to_string()).is_some() {
                return Err(format!("repeated key {k:?}"));
            }
        }
        Ok(Fields { map })
    }

    pub(crate) fn str(&self, key: &str) -> Result<&str, String> {
        self.map
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| format!("missing {key}="))
    }

    pub(crate) fn opt(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub(crate) fn usize(&self, key: &str) -> Result<usize, String> {
        let s = self.str(key)?;
        s.parse().map_err(|_| format!("{key}={s} is not a number"))
    }

    pub(crate) fn check_only(&self, allowed: &[&str]) -> Result<(), String> {
        match self.map.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(format!("unknown key {k:?}")),
            None => Ok(()),
        }
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>, String> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(format!("bad bit {c:?}")),
        })
        .collect()
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let mut words = line.split_whitespace();
        let name = words.next().ok_or("empty stage line")?;
        let f = Fields::parse(words)?;
        let only = |keys: &[&str]| f.check_only(keys);
        let stage = match name {
            "identity" => {
                only(&["n"])?;
                Stage::Identity { n: f.usize("n")? }
            }
            "bit_flip" | "max" | "min" | "maxmin" | "switch_on_split" | "swap" => {
                only(&[])?;
                match name {
                    "bit_flip" => Stage::BitFlip,
                    "max" => Stage::Max,
                    "min" => Stage::Min,
                    "maxmin" => Stage::MaxMin,
                    "swap" => Stage::Swap,
                    _ => Stage::SwitchOnSplit,
                }
            }
            "sorted" => {
                only(&["n"])?;
                Stage::Sorted { n: f.usize("n")? }
            }
            "wtow" | "wtow1" => {
                only(&["n", "k0"])?;
                let (n, k0) = (f.usize("n")?, f.usize("k0")?);
                if name == "wtow" {
                    Stage::Wtow { n, k0 }
                } else {
                    Stage::Wtow1 { n, k0 }
                }
            }
            "flip" => {
                only(&["v"])?;
                Stage::Flip {
                    v: f.str("v")?.parse().map_err(|e| format!("{e}"))?,
                }
            }
            "chain_embed" => {
                only(&["chain"])?;
                Stage::ChainEmbed {
                    chain: f.str("chain")?.parse().map_err(|e| format!("{e}"))?,
                }
            }
            "const_plug" => {
                only(&["n", "idx", "bits"])?;
                let idx = f
                    .str("idx")?
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|_| format!("bad index {s:?}")))
                    .collect::<Result<Vec<_>, _>>()?;
                Stage::ConstPlug {
                    n: f.usize("n")?,
                    idx,
                    bits: parse_bits(f.str("bits")?)?,
                }
            }
            "pad_ones" | "pad_zeros" => {
                only(&["l", "n"])?;
                let (l, n) = (f.usize("l")?, f.usize("n")?);
                if name == "pad_ones" {
                    Stage::PadOnes { l, n }
                } else {
                    Stage::PadZeros { l, n }
                }
            }
            "keep_smallest" => {
                only(&["n", "l"])?;
                Stage::KeepSmallest {
                    n: f.usize("n")?,
                    l: f.usize("l")?,
                }
            }
            "duplicate" => {
                only(&["n"])?;
                Stage::Duplicate { n: f.usize("n")? }
            }
            "project" => {
                only(&["n", "i"])?;
                Stage::Project {
                    n: f.usize("n")?,
                    i: f.usize("i")?,
                }
            }
            "stall" => {
                only(&["in", "out"])?;
                Stage::Stall {
                    arity_in: f.usize("in")?,
                    arity_out: f.usize("out")?,
                }
            }
            "truncate" => {
                only(&["n", "limit"])?;
                Stage::Truncate {
                    n: f.usize("n")?,
                    limit: f.usize("limit")?,
                }
            }
            "localizer" => {
                only(&["seps"])?;
                let separators = f
                    .str("seps")?
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|pair| {
                        let (a, b) = pair.split_once('/').ok_or_else(|| format!("bad separator {pair:?}"))?;
                        Ok((
                            a.parse::<CantorPoint>().map_err(|e| e.to_string())?,
                            b.parse::<CantorPoint>().map_err(|e| e.to_string())?,
                        ))
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                Stage::Localizer { separators }
            }
            other => return Err(format!("unknown stage {other:?}")),
        };
        Ok(stage)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_lines_round_trip() {
        let lines = [
            "identity n=3",
            "bit_flip",
            "maxmin",
            "wtow n=4 k0=2",
            "wtow1 n=4 k0=1",
            "flip v=0110",
            "chain_embed chain=000,100,101,111",
            "const_plug n=3 idx=1,3 bits=10",
            "const_plug n=2 idx= bits=",
            "pad_zeros l=1 n=3",
            "keep_smallest n=3 l=0",
            "stall in=1 out=1",
            "truncate n=1 limit=5",
            "localizer seps=01(0)/1(0)",
        ];
        for line in lines {
            let stage: Stage = line.parse().unwrap();
            assert_eq!(stage.to_string(), line);
            assert_eq!(stage.to_string().parse::<Stage>().unwrap(), stage);
        }
        assert!("wtow n=4".parse::<Stage>().is_err());
        assert!("wtow n=4 k0=2 extra=1".parse::<Stage>().is_err());
        assert!("frobnicate".parse::<Stage>().is_err());
    }
}
