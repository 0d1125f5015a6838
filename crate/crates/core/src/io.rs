//! Text formats: signatures, signature sets and grids as JSON documents
//! whose scalars are literals of the scalar grammar.
//!
//! ```text
//! signature := {"kind":"dense","arity":n,"entries":[s, ...]}
//!            | {"kind":"symmetric","arity":n,"values":[s, ...]}
//!            | [s, ...]                       (symmetric shorthand)
//! set       := {"signatures":[signature | {"name":..., "sig":signature}, ...]}
//! grid      := {"edges":m, "signatures":[...]?,
//!               "vertices":[{"sig":signature | index, "incident":[e, ...]}, ...],
//!               "bipartite":{"left":[...], "right":[...]}?}
//! ```
//!
//! A scalar is a JSON string literal or integer. A document may declare one
//! radical with `"radical": "y^k = <expr>"` and `"branch": j`; its literals
//! may then use `y`.

use crate::holant::{Bipartition, GridVertex, SignatureGrid};
use crate::scalars::{format_radical, format_scalar, parse_radical, parse_scalar_with, ParseError, Radical, Scalar};
use crate::signatures::{DenseSignature, NamedSignature, Signature, SignatureSet, SymmetricSignature, Transform};
use serde_json::{json, Map, Value};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Format(String),
}

fn format_err<T>(m: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Format(m.into()))
}

/// Parses JSON text.
pub fn parse_json(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}

/// The radical declared at the top of a document, if any.
pub fn document_radical(doc: &Value, max_precision: u32) -> Result<Option<Arc<Radical>>, IoError> {
    let Some(decl) = doc.get("radical") else {
        return Ok(None);
    };
    let decl = decl.as_str().ok_or_else(|| IoError::Format("\"radical\" must be a string".into()))?;
    let branch = match doc.get("branch") {
        None => 0,
        Some(b) => b
            .as_u64()
            .and_then(|b| u32::try_from(b).ok())
            .ok_or_else(|| IoError::Format("\"branch\" must be a small non-negative integer".into()))?,
    };
    let r = parse_radical(decl, branch)?;
    Ok(Some(Arc::new(Radical::with_precision(
        r.degree(),
        r.value().clone(),
        r.branch(),
        max_precision,
    ))))
}

pub fn scalar_from_json(v: &Value, radical: Option<&Arc<Radical>>) -> Result<Scalar, IoError> {
    match v {
        Value::String(s) => Ok(parse_scalar_with(s, radical.cloned())?),
        Value::Number(n) => match n.as_i64() {
            Some(k) => Ok(Scalar::from(k)),
            None => format_err(format!("{n} is not an integer; write non-integers as literal strings")),
        },
        other => format_err(format!("expected a scalar, found {other}")),
    }
}

fn scalars(v: &Value, key: &str, radical: Option<&Arc<Radical>>) -> Result<Vec<Scalar>, IoError> {
    let list = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::Format(format!("missing array {key:?}")))?;
    list.iter().map(|x| scalar_from_json(x, radical)).collect()
}

fn check_arity(v: &Value, got: usize) -> Result<(), IoError> {
    if let Some(a) = v.get("arity") {
        if a.as_u64() != Some(got as u64) {
            return format_err(format!("declared arity {a} does not match {got}"));
        }
    }
    Ok(())
}

pub fn signature_from_json(v: &Value, radical: Option<&Arc<Radical>>) -> Result<Signature, IoError> {
    if let Value::Array(list) = v {
        let values = list.iter().map(|x| scalar_from_json(x, radical)).collect::<Result<_, _>>()?;
        return symmetric(values);
    }
    match v.get("kind").and_then(Value::as_str) {
        Some("dense") => {
            let entries = scalars(v, "entries", radical)?;
            let d = DenseSignature::from_entries(entries).map_err(|e| IoError::Format(e.to_string()))?;
            check_arity(v, d.arity())?;
            Ok(Signature::Dense(d))
        }
        Some("symmetric") => {
            let s = symmetric(scalars(v, "values", radical)?)?;
            check_arity(v, s.arity())?;
            Ok(s)
        }
        _ => format_err("a signature needs \"kind\": \"dense\" or \"symmetric\""),
    }
}

fn symmetric(values: Vec<Scalar>) -> Result<Signature, IoError> {
    SymmetricSignature::new(values)
        .map(Signature::Symmetric)
        .map_err(|e| IoError::Format(e.to_string()))
}

/// Splits `[a, b, ...]` at top-level commas.
fn bracket_items(text: &str) -> Option<Vec<&str>> {
    let inner = text.trim().strip_prefix('[')?.strip_suffix(']')?;
    let mut items = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    items.push(&inner[start..]);
    Some(items)
}

/// A signature given as `[s, ...]` literal shorthand or as a JSON document.
pub fn parse_signature_text(text: &str, max_precision: u32) -> Result<Signature, IoError> {
    if let Some(items) = bracket_items(text) {
        if let Ok(doc) = parse_json(text) {
            return signature_from_json(&doc, None);
        }
        let values = items
            .iter()
            .map(|s| parse_scalar_with(s.trim(), None))
            .collect::<Result<_, _>>()?;
        return symmetric(values);
    }
    let doc = parse_json(text)?;
    let radical = document_radical(&doc, max_precision)?;
    signature_from_json(&doc, radical.as_ref())
}

pub fn parse_set_text(text: &str, max_precision: u32) -> Result<SignatureSet, IoError> {
    let doc = parse_json(text)?;
    let radical = document_radical(&doc, max_precision)?;
    let list = doc
        .get("signatures")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::Format("a set needs a \"signatures\" array".into()))?;
    let mut members = Vec::new();
    for (i, item) in list.iter().enumerate() {
        let (name, sig) = match item.get("sig") {
            Some(sig) => {
                let name = item
                    .get("name")
                    .and_then(Value::as_str)
                    .map(str::to_string)
                    .unwrap_or_else(|| format!("f{}", i + 1));
                (name, sig)
            }
            None => (format!("f{}", i + 1), item),
        };
        members.push(NamedSignature {
            name,
            sig: signature_from_json(sig, radical.as_ref())?,
        });
    }
    Ok(SignatureSet::new(members))
}

fn index_list(v: &Value, what: &str) -> Result<Vec<usize>, IoError> {
    v.as_array()
        .ok_or_else(|| IoError::Format(format!("{what} must be an array")))?
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| IoError::Format(format!("{what} must hold non-negative integers")))
        })
        .collect()
}

pub fn parse_grid_text(text: &str, max_precision: u32) -> Result<SignatureGrid, IoError> {
    let doc = parse_json(text)?;
    let radical = document_radical(&doc, max_precision)?;
    let edges = doc
        .get("edges")
        .and_then(Value::as_u64)
        .ok_or_else(|| IoError::Format("a grid needs an integer \"edges\"".into()))? as usize;
    let table: Vec<DenseSignature> = match doc.get("signatures").and_then(Value::as_array) {
        Some(list) => list
            .iter()
            .map(|s| signature_from_json(s, radical.as_ref()).map(|s| s.to_dense()))
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let list = doc
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::Format("a grid needs a \"vertices\" array".into()))?;
    let mut vertices = Vec::new();
    for (i, v) in list.iter().enumerate() {
        let sig = v.get("sig").ok_or_else(|| IoError::Format(format!("vertex {i} has no \"sig\"")))?;
        let signature = match sig.as_u64() {
            Some(k) => table
                .get(k as usize)
                .cloned()
                .ok_or_else(|| IoError::Format(format!("vertex {i} names missing signature {k}")))?,
            None => signature_from_json(sig, radical.as_ref())?.to_dense(),
        };
        let incident = index_list(
            v.get("incident").unwrap_or(&Value::Null),
            &format!("vertex {i} \"incident\""),
        )?;
        vertices.push(GridVertex { signature, incident });
    }
    let bipartite = match doc.get("bipartite") {
        None | Some(Value::Null) => None,
        Some(b) => Some(Bipartition {
            left: index_list(b.get("left").unwrap_or(&Value::Null), "\"left\"")?,
            right: index_list(b.get("right").unwrap_or(&Value::Null), "\"right\"")?,
        }),
    };
    Ok(SignatureGrid {
        edges,
        vertices,
        bipartite,
    })
}

/// Parses four scalar literals as `[[a, b], [c, d]]`.
pub fn parse_matrix(entries: &[String]) -> Result<Transform, IoError> {
    if entries.len() != 4 {
        return format_err(format!("a matrix needs 4 entries, got {}", entries.len()));
    }
    let s = entries
        .iter()
        .map(|e| parse_scalar_with(e, None))
        .collect::<Result<Vec<_>, _>>()?;
    let [a, b, c, d]: [Scalar; 4] = s.try_into().expect("four entries");
    Ok(Transform::new(a, b, c, d))
}

pub fn scalar_json(s: &Scalar) -> Value {
    Value::String(format_scalar(s))
}

/// Adds `"radical"` and `"branch"` when any of `xs` lives over a radical.
fn radical_fields<'a>(out: &mut Map<String, Value>, xs: impl IntoIterator<Item = &'a Scalar>) {
    if let Some(r) = xs.into_iter().find_map(|s| s.radical().cloned()) {
        out.insert("radical".into(), Value::String(format_radical(&r)));
        out.insert("branch".into(), json!(r.branch()));
    }
}

pub fn transform_json(t: &Transform) -> Value {
    let mut out = Map::new();
    out.insert(
        "matrix".into(),
        json!(t.m.iter().map(|r| r.iter().map(scalar_json).collect::<Vec<_>>()).collect::<Vec<_>>()),
    );
    out.insert("determinant".into(), scalar_json(&t.det()));
    radical_fields(&mut out, t.m.iter().flatten());
    Value::Object(out)
}

pub fn dense_json(f: &DenseSignature) -> Value {
    json!({
        "kind": "dense",
        "arity": f.arity(),
        "entries": f.entries().iter().map(scalar_json).collect::<Vec<_>>(),
    })
}

pub fn symmetric_json(f: &SymmetricSignature) -> Value {
    json!({
        "kind": "symmetric",
        "arity": f.arity(),
        "values": f.values().iter().map(scalar_json).collect::<Vec<_>>(),
    })
}

pub fn grid_json(g: &SignatureGrid) -> Value {
    let mut out = Map::new();
    out.insert("edges".into(), json!(g.edges));
    out.insert(
        "vertices".into(),
        Value::Array(
            g.vertices
                .iter()
                .map(|v| json!({"sig": dense_json(&v.signature), "incident": v.incident}))
                .collect(),
        ),
    );
    if let Some(b) = &g.bipartite {
        out.insert("bipartite".into(), json!({"left": b.left, "right": b.right}));
    }
    radical_fields(&mut out, g.vertices.iter().flat_map(|v| v.signature.entries()));
    Value::Object(out)
}
