//! Text digraph format (`.dg`) and bound files (`.bounds.json`).
//!
//! `.dg`: first non-comment line `n m`, then exactly `m` lines `tail head [weight]`,
//! where `weight` is a non-negative number or `inf`. Lines whose first
//! non-blank character is `#` and blank lines are ignored.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Arc, Digraph, DigraphError};
use crate::ext::ExtendedValue;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("header announces {expected} arcs, found {found}")]
    ArcCount { expected: usize, found: usize },
    #[error("missing header line `n m`")]
    MissingHeader,
    #[error("invalid digraph: {0}")]
    Invalid(#[from] DigraphError),
    #[error("bounds: {0}")]
    Bounds(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

/// Tokenized arc line: endpoints and optional signed weight.
type RawArc = (usize, usize, Option<ExtendedValue>);

fn parse_lines(text: &str) -> Result<(usize, Vec<RawArc>), ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = head.as_slice() else {
        return Err(syntax(hl, "header must be `n m`"));
    };
    let n: usize = n.parse().map_err(|_| syntax(hl, "vertex count is not an integer"))?;
    let m: usize = m.parse().map_err(|_| syntax(hl, "arc count is not an integer"))?;
    let mut arcs = Vec::with_capacity(m);
    for (ln, line) in lines {
        let tok: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&tok.len()) {
            return Err(syntax(ln, "arc line must be `tail head [weight]`"));
        }
        let tail = tok[0].parse().map_err(|_| syntax(ln, "tail is not a vertex id"))?;
        let head = tok[1].parse().map_err(|_| syntax(ln, "head is not a vertex id"))?;
        let weight = match tok.get(2) {
            None => None,
            Some(w) => {
                let v: ExtendedValue = w.parse().map_err(|_| syntax(ln, "bad weight"))?;
                if v.is_neg_inf() {
                    return Err(syntax(ln, "weight -inf is not allowed"));
                }
                Some(v)
            }
        };
        arcs.push((tail, head, weight));
    }
    if arcs.len() != m {
        return Err(ParseError::ArcCount { expected: m, found: arcs.len() });
    }
    Ok((n, arcs))
}

/// Strict parse; rejects loops, out-of-range ids and negative weights.
pub fn parse_dg(text: &str) -> Result<Digraph, ParseError> {
    let (n, raw) = parse_lines(text)?;
    let arcs = raw.into_iter().map(|(t, h, w)| Arc { tail: t, head: h, weight: w }).collect();
    Ok(Digraph::new(n, arcs)?)
}

/// Parse that also admits negative finite weights. The structure is returned
/// unweighted together with the per-arc signed weights (missing weight = 1).
pub fn parse_dg_signed(text: &str) -> Result<(Digraph, Vec<ExtendedValue>), ParseError> {
    let (n, raw) = parse_lines(text)?;
    let weights = raw.iter().map(|&(_, _, w)| w.unwrap_or(ExtendedValue::ONE)).collect();
    let arcs = raw.into_iter().map(|(t, h, _)| Arc::new(t, h)).collect();
    Ok((Digraph::new(n, arcs)?, weights))
}

/// Serializes in `.dg` form; weights are written only when present.
pub fn write_dg(d: &Digraph) -> String {
    write_dg_with(d, |i| d.arc(i).weight)
}

/// Serializes with an explicit per-arc weight column (may be negative).
pub fn write_dg_signed(d: &Digraph, weights: &[ExtendedValue]) -> String {
    write_dg_with(d, |i| Some(weights[i]))
}

fn write_dg_with(d: &Digraph, weight: impl Fn(usize) -> Option<ExtendedValue>) -> String {
    let mut s = format!("{} {}\n", d.n(), d.m());
    for (i, a) in d.arcs().iter().enumerate() {
        match weight(i) {
            Some(w) => s.push_str(&format!("{} {} {}\n", a.tail, a.head, w)),
            None => s.push_str(&format!("{} {}\n", a.tail, a.head)),
        }
    }
    s
}

/// Raw `.bounds.json` content. Keys map vertex-id strings to extended values.
///
/// `f_rho` and `g_rho` carry right-indegree bounds for the simultaneous
/// solvers; `f`/`g` double as left-outdegree bounds there. `w_default[v]`
/// replaces the implicit weight 1 of arcs leaving `v` that carry no weight.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<BTreeMap<String, ExtendedValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<BTreeMap<String, ExtendedValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_delta: Option<BTreeMap<String, ExtendedValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_rho: Option<BTreeMap<String, ExtendedValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_rho: Option<BTreeMap<String, ExtendedValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_rho: Option<BTreeMap<String, ExtendedValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_default: Option<BTreeMap<String, ExtendedValue>>,
}

impl BoundsFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::Bounds(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bounds serialize")
    }

    /// Builds a map from a dense per-vertex vector, omitting entries equal to `skip`.
    pub fn map_from(values: &[ExtendedValue], skip: Option<ExtendedValue>) -> BTreeMap<String, ExtendedValue> {
        values
            .iter()
            .enumerate()
            .filter(|(_, &v)| Some(v) != skip)
            .map(|(i, &v)| (i.to_string(), v))
            .collect()
    }

    /// Dense lower-bound vector; missing vertices get `-inf`.
    pub fn lower(map: &Option<BTreeMap<String, ExtendedValue>>, n: usize, key: &str) -> Result<Vec<ExtendedValue>, ParseError> {
        let v = dense(map, n, key, ExtendedValue::NEG_INF)?;
        if let Some(i) = v.iter().position(|x| x.is_pos_inf()) {
            return Err(ParseError::Bounds(format!("{key}[{i}] is inf; lower bounds must be below inf")));
        }
        Ok(v)
    }

    /// Dense upper-bound vector; missing vertices get `inf`.
    pub fn upper(map: &Option<BTreeMap<String, ExtendedValue>>, n: usize, key: &str) -> Result<Vec<ExtendedValue>, ParseError> {
        let v = dense(map, n, key, ExtendedValue::POS_INF)?;
        if let Some(i) = v.iter().position(|x| x.is_neg_inf()) {
            return Err(ParseError::Bounds(format!("{key}[{i}] is -inf; upper bounds must be above -inf")));
        }
        Ok(v)
    }

    /// Dense exact-count vector; every vertex must be present with a
    /// non-negative integer.
    pub fn exact(map: &Option<BTreeMap<String, ExtendedValue>>, n: usize, key: &str) -> Result<Vec<usize>, ParseError> {
        let map = map
            .as_ref()
            .ok_or_else(|| ParseError::Bounds(format!("missing key `{key}`")))?;
        let v = dense(&Some(map.clone()), n, key, ExtendedValue::NEG_INF)?;
        v.iter()
            .enumerate()
            .map(|(i, x)| match x.as_integer() {
                Some(c) if c >= 0 => Ok(c as usize),
                _ => Err(ParseError::Bounds(format!("{key}[{i}] must be a non-negative integer"))),
            })
            .collect()
    }

    /// Applies `w_default` to arcs without an explicit weight.
    pub fn apply_weight_defaults(&self, d: &Digraph) -> Result<Digraph, ParseError> {
        let Some(map) = &self.w_default else {
            return Ok(d.clone());
        };
        let per_vertex = dense(&Some(map.clone()), d.n(), "w_default", ExtendedValue::ONE)?;
        if per_vertex.iter().any(|w| *w < ExtendedValue::ZERO) {
            return Err(ParseError::Bounds("w_default values must be non-negative".into()));
        }
        let arcs = d
            .arcs()
            .iter()
            .map(|a| Arc { weight: Some(a.weight.unwrap_or(per_vertex[a.tail])), ..*a })
            .collect();
        Ok(Digraph::new(d.n(), arcs)?)
    }
}

fn dense(
    map: &Option<BTreeMap<String, ExtendedValue>>,
    n: usize,
    key: &str,
    default: ExtendedValue,
) -> Result<Vec<ExtendedValue>, ParseError> {
    let mut v = vec![default; n];
    if let Some(map) = map {
        for (k, &x) in map {
            let i: usize = k
                .parse()
                .map_err(|_| ParseError::Bounds(format!("{key}: `{k}` is not a vertex id")))?;
            if i >= n {
                return Err(ParseError::Bounds(format!("{key}: vertex {i} out of range")));
            }
            v[i] = x;
        }
    }
    Ok(v)
}
