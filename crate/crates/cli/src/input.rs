//! Network and function documents, and the builtin examples.
//!
//! A network document is a JSON object:
//!
//! ```json
//! { "nodes": ["s1", "s2", "r"], "edges": [["s1", "r"], ["s2", "r"]],
//!   "sources": ["s1", "s2"], "receiver": "r", "alphabet": 2 }
//! ```
//!
//! A function document names a `kind` and whatever parameters it takes:
//! `{"kind": "mod_sum", "r": 3}`, `{"kind": "linear", "coeffs": [1, 2]}`,
//! `{"kind": "table", "values": [...]}`, with an optional boolean
//! `divisible`.

use std::fmt;

use netfuncap_core::bounds::build_nml;
use netfuncap_core::{catalog, Budget, FunctionKind, Network, NetworkSpec, TargetFunction};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum InputError {
    /// A document is malformed; the payload names the offending key.
    Parse(String),
    Validation(netfuncap_core::Error),
    UnknownExample(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Parse(key) => write!(f, "parse error at `{key}`"),
            InputError::Validation(e) => write!(f, "validation error: {e}"),
            InputError::UnknownExample(name) => write!(f, "unknown example `{name}`"),
        }
    }
}

impl std::error::Error for InputError {}

impl From<netfuncap_core::Error> for InputError {
    fn from(e: netfuncap_core::Error) -> Self {
        InputError::Validation(e)
    }
}

type Result<T> = std::result::Result<T, InputError>;

fn object(text: &str) -> Result<Map<String, Value>> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(map)) => Ok(map),
        _ => Err(InputError::Parse("document".into())),
    }
}

fn string_list(map: &Map<String, Value>, key: &str) -> Result<Vec<String>> {
    let bad = || InputError::Parse(key.into());
    map.get(key)
        .and_then(Value::as_array)
        .ok_or_else(bad)?
        .iter()
        .map(|v| v.as_str().map(str::to_string).ok_or_else(bad))
        .collect()
}

fn int_list(map: &Map<String, Value>, key: &str) -> Result<Vec<u64>> {
    let bad = || InputError::Parse(key.into());
    map.get(key)
        .and_then(Value::as_array)
        .ok_or_else(bad)?
        .iter()
        .map(|v| v.as_u64().ok_or_else(bad))
        .collect()
}

fn int(map: &Map<String, Value>, key: &str) -> Result<u64> {
    map.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| InputError::Parse(key.into()))
}

/// Parses a network document. Structural problems (cycles, unknown nodes,
/// unreachable receiver) surface as [`InputError::Validation`].
pub fn parse_network(text: &str) -> Result<NetworkSpec> {
    let map = object(text)?;
    let nodes = string_list(&map, "nodes")?;
    let edges = map
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| InputError::Parse("edges".into()))?
        .iter()
        .map(|pair| match pair.as_array().map(|p| p.as_slice()) {
            Some([Value::String(t), Value::String(h)]) => Ok((t.clone(), h.clone())),
            _ => Err(InputError::Parse("edges".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    let sources = string_list(&map, "sources")?;
    let receiver = map
        .get("receiver")
        .and_then(Value::as_str)
        .ok_or_else(|| InputError::Parse("receiver".into()))?
        .to_string();
    let alphabet = int(&map, "alphabet")?;
    let spec = NetworkSpec {
        nodes,
        edges,
        sources,
        receiver,
        alphabet,
    };
    Network::compile(spec.clone())?;
    Ok(spec)
}

pub fn emit_network(spec: &NetworkSpec) -> String {
    let edges: Vec<Value> = spec.edges.iter().map(|(t, h)| json!([t, h])).collect();
    let doc = json!({
        "nodes": spec.nodes,
        "edges": edges,
        "sources": spec.sources,
        "receiver": spec.receiver,
        "alphabet": spec.alphabet,
    });
    serde_json::to_string_pretty(&doc).expect("plain JSON value")
}

/// Accepts a JSON document, or a bare kind name with an optional
/// parenthesised parameter list: `maximum`, `mod_sum(3)`, `linear(1,2)`.
/// The function table is checked against `budget`.
pub fn parse_function(text: &str, s: usize, q: u64, budget: &Budget) -> Result<TargetFunction> {
    let text = text.trim();
    let map = if text.starts_with('{') {
        object(text)?
    } else {
        shorthand(text)?
    };
    let kind_name = map
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| InputError::Parse("kind".into()))?;
    let kind = match kind_name {
        "identity" => FunctionKind::Identity,
        "arithmetic_sum" => FunctionKind::ArithmeticSum,
        "mod_sum" => FunctionKind::ModSum(int(&map, "r")?),
        "histogram" => FunctionKind::Histogram,
        "linear" => FunctionKind::Linear(int_list(&map, "coeffs")?),
        "maximum" => FunctionKind::Maximum,
        "minimum" => FunctionKind::Minimum,
        "table" => FunctionKind::Table(int_list(&map, "values")?),
        _ => return Err(InputError::Parse("kind".into())),
    };
    let mut f = TargetFunction::with_budget(kind, s, q, budget)?;
    if let Some(d) = map.get("divisible") {
        let d = d
            .as_bool()
            .ok_or_else(|| InputError::Parse("divisible".into()))?;
        f = f.with_divisible(d);
    }
    Ok(f)
}

fn shorthand(text: &str) -> Result<Map<String, Value>> {
    let (name, params) = match text.split_once('(') {
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| InputError::Parse("kind".into()))?;
            let params = inner
                .split(',')
                .map(|p| p.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| InputError::Parse(name.into()))?;
            (name, params)
        }
        None => (text, Vec::new()),
    };
    let mut map = Map::new();
    map.insert("kind".into(), json!(name));
    match (name, params.as_slice()) {
        (_, []) => {}
        ("mod_sum", [r]) => {
            map.insert("r".into(), json!(r));
        }
        ("linear", coeffs) => {
            map.insert("coeffs".into(), json!(coeffs));
        }
        ("table", values) => {
            map.insert("values".into(), json!(values));
        }
        _ => return Err(InputError::Parse(name.into())),
    }
    Ok(map)
}

pub fn emit_function(f: &TargetFunction) -> String {
    let mut map = Map::new();
    map.insert("kind".into(), json!(f.kind().name()));
    match f.kind() {
        FunctionKind::ModSum(r) => {
            map.insert("r".into(), json!(r));
        }
        FunctionKind::Linear(c) => {
            map.insert("coeffs".into(), json!(c));
        }
        FunctionKind::Table(v) => {
            map.insert("values".into(), json!(v));
        }
        _ => {}
    }
    map.insert("divisible".into(), json!(f.declared_divisible()));
    Value::Object(map).to_string()
}

/// Parameters of the parametrised examples.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExampleParams {
    pub q: Option<u64>,
    pub s: Option<usize>,
    pub m: Option<usize>,
    pub l: Option<usize>,
}

/// The builtin topology `name` with the arithmetic sum over its sources.
pub fn builtin_example(
    name: &str,
    params: ExampleParams,
    budget: &Budget,
) -> Result<(NetworkSpec, TargetFunction)> {
    let mut spec = match name.to_ascii_lowercase().as_str() {
        "n2" => catalog::n2(),
        "n3" => catalog::n3(),
        "diamond" => catalog::diamond(),
        "nml" => {
            let (m, l) = (params.m.unwrap_or(3), params.l.unwrap_or(2));
            if m == 0 || l == 0 {
                return Err(InputError::Parse("M/L".into()));
            }
            build_nml(m, l)
        }
        "line" => {
            let s = params.s.unwrap_or(3);
            if s == 0 {
                return Err(InputError::Parse("s".into()));
            }
            catalog::line(s)
        }
        "single_edge" => catalog::single_edge(2),
        _ => return Err(InputError::UnknownExample(name.into())),
    };
    if let Some(q) = params.q {
        spec.alphabet = q;
    }
    let f = TargetFunction::with_budget(
        FunctionKind::ArithmeticSum,
        spec.sources.len(),
        spec.alphabet,
        budget,
    )?;
    Ok((spec, f))
}
