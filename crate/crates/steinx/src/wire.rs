//! JSON wire formats.
//!
//! Integers inside matrices are written as decimal strings; on input both
//! JSON numbers and decimal strings are accepted everywhere a big integer is
//! expected.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use steinx_core::families::{FamilyMember, ZnpSequence, MODEL_NOTE};
use steinx_core::genus::GenusOracle;
use steinx_core::intlinalg::IntegerMatrix;
use steinx_core::legendrian::FrontDiagram;
use steinx_core::stein::{GroupPresentation, SteinHandlebody, TwoHandle};
use steinx_core::BigInt;

#[derive(Debug, thiserror::Error)]
pub enum WireError {
    #[error("malformed JSON at {path}: {message}")]
    Json { path: String, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl WireError {
    fn invalid(path: impl Into<String>, message: impl fmt::Display) -> Self {
        WireError::Invalid {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

/// Parses `text` as `T`, reporting the JSON path of the first offending field.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, WireError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        WireError::Json {
            path: if path.is_empty() { String::from(".") } else { path },
            message: e.into_inner().to_string(),
        }
    })
}

/// A big integer given as a JSON number or a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dec(pub BigInt);

impl<'de> Deserialize<'de> for Dec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Dec;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Dec, E> {
                Ok(Dec(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Dec, E> {
                Ok(Dec(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Dec, E> {
                BigInt::from_str(v.trim())
                    .map(Dec)
                    .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// Integer as a JSON number when it fits in 64 bits, otherwise a string.
pub fn int(v: &BigInt) -> Value {
    if let Ok(i) = i64::try_from(v) {
        Value::from(i)
    } else {
        Value::String(v.to_string())
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn matrix(m: &IntegerMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

pub fn matrix_from_rows(rows: &[Vec<Dec>], path: &str) -> Result<IntegerMatrix, WireError> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    let mut entries = Vec::with_capacity(n * cols);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(WireError::invalid(
                format!("{path}[{i}]"),
                format!("row has {} entries, expected {cols}", r.len()),
            ));
        }
        entries.extend(r.iter().map(|d| d.0.clone()));
    }
    IntegerMatrix::new(n, cols, entries).map_err(|e| WireError::invalid(path, e))
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FrontDoc {
    pub crossings: Vec<i8>,
    pub up_cusps: u32,
    pub down_cusps: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandleDoc {
    pub tb: Option<i64>,
    pub rot: Option<i64>,
    #[serde(default)]
    pub word: Vec<i64>,
    pub front: Option<FrontDoc>,
}

/// Canonical handlebody record. Diagonal linking entries may be `null` and
/// the whole matrix may be omitted; missing diagonal entries are tb − 1 and
/// a missing matrix has zero off-diagonal entries.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandlebodyDoc {
    #[serde(default)]
    pub one_handles: usize,
    #[serde(default)]
    pub handles: Vec<HandleDoc>,
    pub linking: Option<Vec<Vec<Option<Dec>>>>,
    #[serde(default)]
    pub note: Option<String>,
}

impl HandlebodyDoc {
    pub fn into_model(self) -> Result<SteinHandlebody, WireError> {
        let n = self.handles.len();
        let mut handles = Vec::with_capacity(n);
        for (i, h) in self.handles.into_iter().enumerate() {
            let path = format!("handles[{i}]");
            let handle = match (h.tb, h.rot, h.front) {
                (Some(tb), Some(rot), front) => {
                    let mut t = TwoHandle::new(tb, rot);
                    t.front = front.map(|f| FrontDiagram::new(f.crossings, f.up_cusps, f.down_cusps));
                    t
                }
                (tb, rot, Some(f)) => {
                    let front = FrontDiagram::new(f.crossings, f.up_cusps, f.down_cusps);
                    let t = TwoHandle::from_front(front)
                        .map_err(|e| WireError::invalid(format!("{path}.front"), e))?;
                    if tb.is_some_and(|v| v != t.tb) || rot.is_some_and(|v| v != t.rot) {
                        return Err(WireError::invalid(path, "tb/rot disagree with the front"));
                    }
                    t
                }
                _ => return Err(WireError::invalid(path, "needs tb and rot, or a front")),
            };
            handles.push(handle.with_word(h.word));
        }
        let mut linking = IntegerMatrix::zeros(n, n);
        if let Some(rows) = self.linking {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(WireError::invalid(
                    "linking",
                    format!("expected a {n}x{n} matrix for {n} handles"),
                ));
            }
            for (i, r) in rows.into_iter().enumerate() {
                for (j, v) in r.into_iter().enumerate() {
                    match v {
                        Some(d) => linking[(i, j)] = d.0,
                        None if i == j => linking[(i, j)] = BigInt::from(handles[i].framing()),
                        None => {
                            return Err(WireError::invalid(
                                format!("linking[{i}][{j}]"),
                                "only diagonal entries may be omitted",
                            ))
                        }
                    }
                }
            }
        } else {
            for (i, h) in handles.iter().enumerate() {
                linking[(i, i)] = BigInt::from(h.framing());
            }
        }
        Ok(SteinHandlebody::new(self.one_handles, handles, linking))
    }
}

pub fn handlebody_json(x: &SteinHandlebody, note: Option<&str>) -> Value {
    let handles: Vec<Value> = x
        .handles
        .iter()
        .map(|h| {
            let mut o = serde_json::Map::new();
            o.insert("tb".into(), h.tb.into());
            o.insert("rot".into(), h.rot.into());
            o.insert("word".into(), h.word.clone().into());
            if let Some(f) = &h.front {
                o.insert(
                    "front".into(),
                    serde_json::to_value(FrontDoc {
                        crossings: f.crossings.clone(),
                        up_cusps: f.up_cusps,
                        down_cusps: f.down_cusps,
                    })
                    .expect("plain data"),
                );
            }
            Value::Object(o)
        })
        .collect();
    let mut o = serde_json::Map::new();
    o.insert("one_handles".into(), x.one_handles.into());
    o.insert("handles".into(), handles.into());
    o.insert("linking".into(), matrix(&x.linking));
    if let Some(n) = note {
        o.insert("note".into(), n.into());
    }
    Value::Object(o)
}

pub fn model_note() -> &'static str {
    MODEL_NOTE
}

pub fn parse_handlebody(text: &str) -> Result<SteinHandlebody, WireError> {
    parse::<HandlebodyDoc>(text)?.into_model()
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub generators: usize,
    pub relators: Vec<Vec<i64>>,
}

pub fn parse_presentation(text: &str) -> Result<GroupPresentation, WireError> {
    let d: PresentationDoc = parse(text)?;
    GroupPresentation::new(d.generators, d.relators).map_err(|e| WireError::invalid("relators", e))
}

pub fn presentation_json(p: &GroupPresentation) -> Value {
    serde_json::to_value(PresentationDoc {
        generators: p.generators(),
        relators: p.relators().to_vec(),
    })
    .expect("plain data")
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleEntryDoc {
    pub class: Vec<Dec>,
    pub genus_ub: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleDoc {
    pub entries: Vec<OracleEntryDoc>,
    /// Optional explicit bases, each a list of class vectors.
    #[serde(default)]
    pub bases: Vec<Vec<Vec<Dec>>>,
}

pub struct Oracle {
    pub oracle: GenusOracle,
    pub bases: Vec<Vec<Vec<BigInt>>>,
}

pub fn parse_oracle(text: &str) -> Result<Oracle, WireError> {
    let d: OracleDoc = parse(text)?;
    let mut oracle = GenusOracle::new();
    for (i, e) in d.entries.into_iter().enumerate() {
        oracle
            .insert(e.class.into_iter().map(|c| c.0).collect(), e.genus_ub)
            .map_err(|err| WireError::invalid(format!("entries[{i}].class"), err))?;
    }
    let bases = d
        .bases
        .into_iter()
        .map(|b| b.into_iter().map(|v| v.into_iter().map(|c| c.0).collect()).collect())
        .collect();
    Ok(Oracle { oracle, bases })
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberDoc {
    pub id: Option<String>,
    pub handlebody: HandlebodyDoc,
}

/// Z_{n, start + step·i} for i < len.
#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub n: usize,
    pub start: u32,
    pub step: u32,
    pub len: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    #[serde(default)]
    pub members: Vec<MemberDoc>,
    pub generator: Option<GeneratorDoc>,
    pub q: Option<Vec<Vec<Dec>>>,
    #[serde(default)]
    pub note: Option<String>,
}

pub struct Family {
    pub members: Vec<FamilyMember>,
    pub generator: Option<ZnpSequence>,
    pub q: Option<IntegerMatrix>,
}

pub fn parse_family(text: &str) -> Result<Family, WireError> {
    let d: FamilyDoc = parse(text)?;
    let mut members = Vec::new();
    for (i, m) in d.members.into_iter().enumerate() {
        let x = m.handlebody.into_model().map_err(|e| match e {
            WireError::Invalid { path, message } => WireError::Invalid {
                path: format!("members[{i}].handlebody.{path}"),
                message,
            },
            other => other,
        })?;
        members.push(FamilyMember {
            id: m.id.unwrap_or_else(|| format!("m{i}")),
            handlebody: x,
        });
    }
    let generator = match d.generator {
        Some(g) => {
            let s = ZnpSequence::new(g.n, g.start, g.step)
                .map_err(|e| WireError::invalid("generator.n", e))?;
            members.extend(s.prefix(g.len));
            Some(s)
        }
        None => None,
    };
    let q = d.q.map(|rows| matrix_from_rows(&rows, "q")).transpose()?;
    Ok(Family {
        members,
        generator,
        q,
    })
}

pub fn family_json(members: &[FamilyMember], generator: Option<GeneratorDoc>) -> Value {
    let mut o = serde_json::Map::new();
    o.insert(
        "members".into(),
        members
            .iter()
            .map(|m| {
                serde_json::json!({
                    "id": m.id,
                    "handlebody": handlebody_json(&m.handlebody, None),
                })
            })
            .collect::<Vec<_>>()
            .into(),
    );
    if let Some(g) = generator {
        o.insert("generator".into(), serde_json::to_value(g).expect("plain data"));
    }
    o.insert("note".into(), MODEL_NOTE.into());
    Value::Object(o)
}
