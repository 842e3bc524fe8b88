//! JSON document form of a [`NetworkCode`].
//!
//! ```json
//! {
//!   "format": "netfuncap-code/v1",
//!   "alphabet": 2, "k": 1, "n": 1,
//!   "encoders": [ { "edge": 0, "input_symbols": 1, "table": ["0", "1"] } ],
//!   "decoder": { "input_symbols": 1, "table": [[0], [1]] },
//!   "outputs": ["0", "1"]
//! }
//! ```
//!
//! Encoder tables list the outputs for every input in lexicographic order of
//! the input tuple, each as an `n`-digit base-q string (digits `0-9a-z`).
//! Decoder entries list `k` indices into `outputs`.

use serde::{Deserialize, Serialize};

use crate::codes::NetworkCode;
use crate::error::{sat_pow, Error, Result};
use crate::function::{digits, Value};

pub const FORMAT: &str = "netfuncap-code/v1";
const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Serialize, Deserialize)]
struct EncoderDoc {
    edge: usize,
    input_symbols: usize,
    table: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct DecoderDoc {
    input_symbols: usize,
    table: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct CodeDoc {
    format: String,
    alphabet: u64,
    k: usize,
    n: usize,
    encoders: Vec<EncoderDoc>,
    decoder: DecoderDoc,
    outputs: Vec<String>,
}

fn symbols_for(len: usize, q: u64) -> Result<usize> {
    let mut t = 0;
    while sat_pow(q, t) < len as u128 {
        t += 1;
    }
    if sat_pow(q, t) != len as u128 {
        return Err(Error::CodeFormat(format!(
            "table length {len} is not a power of {q}"
        )));
    }
    Ok(t)
}

fn to_digits(v: u64, q: u64, n: usize) -> String {
    digits(v, q, n)
        .into_iter()
        .map(|d| DIGITS[d as usize] as char)
        .collect()
}

fn from_digits(s: &str, q: u64, n: usize) -> Result<u64> {
    if s.len() != n {
        return Err(Error::CodeFormat(format!("`{s}` does not have {n} digits")));
    }
    s.chars().try_fold(0u64, |acc, c| {
        let d = c
            .to_digit(36)
            .filter(|&d| (d as u64) < q)
            .ok_or_else(|| Error::CodeFormat(format!("bad digit `{c}` in `{s}`")))?;
        Ok(acc * q + d as u64)
    })
}

pub fn to_json(code: &NetworkCode) -> Result<String> {
    let q = code.alphabet;
    if q > 36 {
        return Err(Error::CodeFormat(
            "alphabets above 36 are not serializable".into(),
        ));
    }
    let encoders = code
        .encoders
        .iter()
        .enumerate()
        .map(|(edge, t)| {
            Ok(EncoderDoc {
                edge,
                input_symbols: symbols_for(t.len(), q)?,
                table: t.iter().map(|&v| to_digits(v, q, code.n)).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let entries = code.decoder.len() / code.k.max(1);
    let doc = CodeDoc {
        format: FORMAT.into(),
        alphabet: q,
        k: code.k,
        n: code.n,
        encoders,
        decoder: DecoderDoc {
            input_symbols: symbols_for(entries, q)?,
            table: code.decoder.chunks(code.k).map(|c| c.to_vec()).collect(),
        },
        outputs: code.outputs.iter().map(|v| v.to_string()).collect(),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::CodeFormat(e.to_string()))
}

pub fn from_json(text: &str) -> Result<NetworkCode> {
    let doc: CodeDoc = serde_json::from_str(text).map_err(|e| Error::CodeFormat(e.to_string()))?;
    if doc.format != FORMAT {
        return Err(Error::CodeFormat(format!(
            "unknown format `{}`",
            doc.format
        )));
    }
    let q = doc.alphabet;
    if !(2..=36).contains(&q) {
        return Err(Error::CodeFormat(format!("unsupported alphabet {q}")));
    }
    if doc.k == 0 || doc.n == 0 {
        return Err(Error::CodeFormat("block lengths must be positive".into()));
    }
    let mut encoders = Vec::with_capacity(doc.encoders.len());
    for (i, e) in doc.encoders.into_iter().enumerate() {
        if e.edge != i {
            return Err(Error::CodeFormat(format!(
                "encoder {i} is labelled edge {}",
                e.edge
            )));
        }
        if sat_pow(q, e.input_symbols) != e.table.len() as u128 {
            return Err(Error::CodeFormat(format!(
                "encoder {i} has {} entries for {} input symbols",
                e.table.len(),
                e.input_symbols
            )));
        }
        encoders.push(
            e.table
                .iter()
                .map(|s| from_digits(s, q, doc.n))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if sat_pow(q, doc.decoder.input_symbols) != doc.decoder.table.len() as u128 {
        return Err(Error::CodeFormat(
            "decoder size does not match its input symbols".into(),
        ));
    }
    let mut decoder = Vec::with_capacity(doc.decoder.table.len() * doc.k);
    for entry in &doc.decoder.table {
        if entry.len() != doc.k {
            return Err(Error::CodeFormat(format!(
                "decoder entry has {} components",
                entry.len()
            )));
        }
        decoder.extend_from_slice(entry);
    }
    let outputs = doc
        .outputs
        .iter()
        .map(|s| s.parse::<Value>())
        .collect::<Result<Vec<_>>>()?;
    Ok(NetworkCode {
        alphabet: q,
        k: doc.k,
        n: doc.n,
        encoders,
        decoder,
        outputs,
    })
}
