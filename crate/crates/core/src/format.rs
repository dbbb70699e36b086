//! The two on-disk quiver formats. Both use 1-based vertex indices.
//!
//! Text:
//!
//! ```text
//! # oriented triangle
//! n 3
//! 1 2 1
//! 2 3 1
//! 3 1 1
//! ```
//!
//! JSON: `{"n": 3, "arrows": [[1, 2, 1], [2, 3, 1], [3, 1, 1]]}`, with an
//! optional `"labels"` array.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// Parses the line-oriented text format.
pub fn parse_text(input: &str) -> Result<Quiver> {
    let mut n: Option<usize> = None;
    let mut arrows = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        match n {
            None => {
                if fields.len() != 2 || fields[0] != "n" {
                    return Err(parse_err(format!(
                        "expected header \"n <count>\", found {line:?}"
                    )));
                }
                let count: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_err(format!("invalid vertex count {:?}", fields[1])))?;
                if count == 0 {
                    return Err(parse_err("a quiver needs at least one vertex".into()));
                }
                n = Some(count);
            }
            Some(count) => {
                if fields.len() != 3 {
                    return Err(parse_err(format!(
                        "expected \"<i> <j> <w>\", found {line:?}"
                    )));
                }
                let vertex = |s: &str| -> Result<usize> {
                    let v: usize = s
                        .parse()
                        .map_err(|_| parse_err(format!("invalid vertex {s:?}")))?;
                    if v == 0 || v > count {
                        return Err(parse_err(format!("vertex {v} not in 1..={count}")));
                    }
                    Ok(v - 1)
                };
                let i = vertex(fields[0])?;
                let j = vertex(fields[1])?;
                let w: BigInt = fields[2]
                    .parse()
                    .map_err(|_| parse_err(format!("invalid weight {:?}", fields[2])))?;
                if !w.is_positive() {
                    return Err(parse_err(format!("weight must be at least 1, found {w}")));
                }
                arrows.push((line_no, i, j, w));
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: input.lines().count().max(1),
        message: "missing header \"n <count>\"".into(),
    })?;
    build_with_lines(n, arrows)
}

fn build_with_lines(n: usize, arrows: Vec<(usize, usize, usize, BigInt)>) -> Result<Quiver> {
    let mut seen = std::collections::HashSet::new();
    for (line, i, j, _) in &arrows {
        let message = if i == j {
            Some(Error::LoopForbidden(*i).to_string())
        } else if !seen.insert((*i.min(j), *i.max(j))) {
            Some(Error::ConflictingEdge(*i.min(j), *i.max(j)).to_string())
        } else {
            None
        };
        if let Some(message) = message {
            return Err(Error::Parse {
                line: *line,
                message,
            });
        }
    }
    Quiver::from_arrows(n, arrows.into_iter().map(|(_, i, j, w)| (i, j, w)))
}

/// Prints the text format. Arrows are listed by vertex pair.
pub fn to_text(q: &Quiver) -> String {
    let mut out = String::new();
    writeln!(out, "n {}", q.n()).unwrap();
    for (i, j, w) in q.arrows() {
        writeln!(out, "{} {} {}", i + 1, j + 1, w).unwrap();
    }
    out
}

/// Wire form of a quiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverJson {
    pub n: usize,
    pub arrows: Vec<ArrowJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// `[i, j, w]`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowJson(pub usize, pub usize, pub BigInt);

impl Serialize for ArrowJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(3))?;
        seq.serialize_element(&self.0)?;
        seq.serialize_element(&self.1)?;
        seq.serialize_element(&BigJson(&self.2))?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ArrowJson {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (i, j, Weight(w)) = <(usize, usize, Weight)>::deserialize(deserializer)?;
        Ok(ArrowJson(i, j, w))
    }
}

/// Integers that fit in 64 bits go out as JSON numbers, larger ones as
/// decimal strings.
struct BigJson<'a>(&'a BigInt);

impl Serialize for BigJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if let Some(v) = self.0.to_i64() {
            serializer.serialize_i64(v)
        } else {
            serializer.serialize_str(&self.0.to_string())
        }
    }
}

pub(crate) fn serialize_big_int<S: Serializer>(value: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    BigJson(value).serialize(serializer)
}

pub(crate) fn serialize_big_ints<S: Serializer>(values: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(BigJson))
}

/// Writes 0-based vertex indices as the 1-based numbers used in every
/// external format.
pub(crate) fn one_based<S: Serializer>(vertices: &[usize], serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(vertices.iter().map(|v| v + 1))
}

pub(crate) fn one_based_sets<S: Serializer>(
    sets: &[Vec<usize>],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(sets.iter().map(|s| s.iter().map(|v| v + 1).collect::<Vec<_>>()))
}

pub(crate) fn one_based_opt<S: Serializer>(
    vertices: &Option<Vec<usize>>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match vertices {
        Some(v) => serializer.serialize_some(&v.iter().map(|v| v + 1).collect::<Vec<_>>()),
        None => serializer.serialize_none(),
    }
}

struct Weight(BigInt);

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct WeightVisitor;
        impl Visitor<'_> for WeightVisitor {
            type Value = Weight;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Weight, E> {
                Ok(Weight(v.into()))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Weight, E> {
                Ok(Weight(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Weight, E> {
                v.parse()
                    .map(Weight)
                    .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }
        deserializer.deserialize_any(WeightVisitor)
    }
}

impl QuiverJson {
    pub fn from_quiver(q: &Quiver) -> Self {
        QuiverJson {
            n: q.n(),
            arrows: q
                .arrows()
                .into_iter()
                .map(|(i, j, w)| ArrowJson(i + 1, j + 1, w))
                .collect(),
            labels: q.labels().map(<[String]>::to_vec),
        }
    }

    /// Validates indices and builds the quiver. Index problems are reported
    /// with the JSON path of the offending field.
    pub fn to_quiver(&self) -> Result<Quiver> {
        for (k, ArrowJson(i, j, w)) in self.arrows.iter().enumerate() {
            for (slot, v) in [(0, i), (1, j)] {
                if *v == 0 || *v > self.n {
                    return Err(Error::Json {
                        path: format!("arrows[{k}][{slot}]"),
                        message: format!("vertex {v} not in 1..={}", self.n),
                    });
                }
            }
            if !w.is_positive() {
                return Err(Error::Json {
                    path: format!("arrows[{k}][2]"),
                    message: format!("weight must be at least 1, found {w}"),
                });
            }
        }
        let q = Quiver::from_arrows(
            self.n,
            self.arrows
                .iter()
                .map(|ArrowJson(i, j, w)| (i - 1, j - 1, w.clone())),
        )?;
        match &self.labels {
            Some(labels) => q.with_labels(labels.clone()),
            None => Ok(q),
        }
    }
}

impl Serialize for Quiver {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QuiverJson::from_quiver(self).serialize(serializer)
    }
}

/// Parses the JSON format.
pub fn parse_json(input: &str) -> Result<Quiver> {
    let de = &mut serde_json::Deserializer::from_str(input);
    let wire: QuiverJson = serde_path_to_error::deserialize(de).map_err(|e| Error::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    wire.to_quiver()
}

/// Prints the JSON format on one line.
pub fn to_json(q: &Quiver) -> String {
    serde_json::to_string(&QuiverJson::from_quiver(q)).expect("quiver JSON is always serializable")
}

/// Picks the parser from the first non-whitespace character.
pub fn parse_any(input: &str) -> Result<Quiver> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}
