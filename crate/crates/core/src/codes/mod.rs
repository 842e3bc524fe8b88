//! Explicit `(k, n)` network codes and their exhaustive verification.
//!
//! Every table is indexed by a base-q numeral, most significant symbol
//! first. The input of the encoder for edge `e` is the concatenation of the
//! `n`-symbol vectors on the in-edges of `tail(e)`, in in-edge order,
//! followed by the `k`-symbol message block when the tail is a source. Its
//! output is the numeral of the `n` symbols sent on `e`. The decoder input
//! is the concatenation of the vectors on the receiver's in-edges, and each
//! decoder entry lists `k` indices into [`NetworkCode::outputs`].

pub mod diamond;
pub mod search;
pub mod serial;
pub mod simulate;
pub mod tree;
pub mod xor;

pub use diamond::{
    diamond_block_length, diamond_capacity, diamond_code, diamond_counting_feasible,
};
pub use search::{search_code, SearchOutcome};
pub use simulate::simulate_alphabet;
pub use tree::{tree_code, tree_rate_bound};
pub use xor::reverse_butterfly_xor_code;

use crate::error::{check_budget, sat_pow, Error, Result};
use crate::function::{digits, numeral, TargetFunction, Value};
use crate::network::Network;
use crate::Budget;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkCode {
    pub alphabet: u64,
    pub k: usize,
    pub n: usize,
    /// One table per edge, in edge index order.
    pub encoders: Vec<Vec<u64>>,
    /// Flat table: entry `y` occupies `decoder[y*k .. (y+1)*k]`.
    pub decoder: Vec<u32>,
    pub outputs: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationOutcome {
    pub pass: bool,
    /// Message block of every source for the first failing generator.
    pub counterexample: Option<Vec<Vec<u64>>>,
    pub checked_count: u64,
}

impl NetworkCode {
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn decode(&self, received: u64) -> &[u32] {
        let y = received as usize;
        &self.decoder[y * self.k..(y + 1) * self.k]
    }
}

/// Number of symbols in the encoder input for edges leaving `v`.
pub(crate) fn input_symbols(net: &Network, v: usize, k: usize, n: usize) -> usize {
    net.in_edges(v).len() * n + if net.source_index(v).is_some() { k } else { 0 }
}

pub(crate) fn checked_domain(
    what: &'static str,
    q: u64,
    symbols: usize,
    budget: &Budget,
) -> Result<u64> {
    let size = sat_pow(q, symbols);
    check_budget(what, size, budget.generators as u128)?;
    Ok(size as u64)
}

/// Splits an encoder input numeral into the in-edge values and the message.
pub(crate) fn split_input(x: u64, parts: usize, q_n: u64, q_k: Option<u64>) -> (Vec<u64>, u64) {
    let mut rest = x;
    let msg = match q_k {
        Some(qk) => {
            let m = rest % qk;
            rest /= qk;
            m
        }
        None => 0,
    };
    let mut vals = vec![0; parts];
    for slot in vals.iter_mut().rev() {
        *slot = rest % q_n;
        rest /= q_n;
    }
    (vals, msg)
}

/// Inverse of [`split_input`].
pub(crate) fn join_input(vals: &[u64], q_n: u64, msg: Option<(u64, u64)>) -> u64 {
    let mut x = vals.iter().fold(0, |acc, &v| acc * q_n + v);
    if let Some((m, qk)) = msg {
        x = x * qk + m;
    }
    x
}

/// Checks table sizes and ranges against the network.
pub fn check_shape(net: &Network, code: &NetworkCode) -> Result<()> {
    let q = code.alphabet;
    if code.k == 0 || code.n == 0 {
        return Err(Error::CodeShape("block lengths must be positive".into()));
    }
    if code.encoders.len() != net.edge_count() {
        return Err(Error::CodeShape(format!(
            "{} encoder tables for {} edges",
            code.encoders.len(),
            net.edge_count()
        )));
    }
    let q_n = sat_pow(q, code.n);
    for (e, table) in code.encoders.iter().enumerate() {
        let tail = net.edge(e).tail;
        let want = sat_pow(q, input_symbols(net, tail, code.k, code.n));
        if table.len() as u128 != want {
            return Err(Error::CodeShape(format!(
                "encoder for edge {} has {} entries, expected {want}",
                net.edge_label(e),
                table.len()
            )));
        }
        if let Some(v) = table.iter().find(|&&v| v as u128 >= q_n) {
            return Err(Error::CodeShape(format!(
                "encoder for edge {} emits {v}, beyond {} symbols",
                net.edge_label(e),
                code.n
            )));
        }
    }
    let want = sat_pow(q, net.in_edges(net.receiver()).len() * code.n) * code.k as u128;
    if code.decoder.len() as u128 != want {
        return Err(Error::CodeShape(format!(
            "decoder has {} entries, expected {want}",
            code.decoder.len()
        )));
    }
    if let Some(v) = code
        .decoder
        .iter()
        .find(|&&v| v as usize >= code.outputs.len())
    {
        return Err(Error::CodeShape(format!(
            "decoder refers to missing output {v}"
        )));
    }
    Ok(())
}

/// Edge values for one assignment of source messages, in edge order.
pub fn propagate(net: &Network, code: &NetworkCode, messages: &[u64]) -> Vec<u64> {
    let q = code.alphabet;
    let q_n = q.pow(code.n as u32);
    let q_k = q.pow(code.k as u32);
    let mut z = vec![0u64; net.edge_count()];
    for &v in net.topo_order() {
        if v == net.receiver() {
            continue;
        }
        let vals: Vec<u64> = net.in_edges(v).iter().map(|&e| z[e]).collect();
        let msg = net.source_index(v).map(|i| (messages[i], q_k));
        let x = join_input(&vals, q_n, msg);
        for &e in net.out_edges(v) {
            z[e] = code.encoders[e][x as usize];
        }
    }
    z
}

/// Exhaustively checks that the receiver recovers `f` componentwise for
/// every assignment of source messages. Generators are visited in
/// lexicographic order with source 1 most significant.
pub fn verify_code(
    net: &Network,
    f: &TargetFunction,
    code: &NetworkCode,
    budget: &Budget,
) -> Result<VerificationOutcome> {
    if f.arity() != net.source_count() {
        return Err(Error::ArityMismatch {
            function: f.arity(),
            expected: net.source_count(),
        });
    }
    if code.alphabet != f.alphabet() {
        return Err(Error::CodeShape(format!(
            "code alphabet {} differs from function alphabet {}",
            code.alphabet,
            f.alphabet()
        )));
    }
    check_shape(net, code)?;
    let q = code.alphabet;
    let (k, n, s) = (code.k, code.n, net.source_count());
    let total = sat_pow(q, k * s);
    check_budget(
        "code verification (generators)",
        total,
        budget.generators as u128,
    )?;
    let q_n = q.pow(n as u32);
    let q_k = q.pow(k as u32);
    let output_ids: Vec<Option<u32>> = code.outputs.iter().map(|v| f.value_id_of(v)).collect();
    let rho_in = net.in_edges(net.receiver());

    let mut messages = vec![0u64; s];
    for g in 0..total as u64 {
        let mut rest = g;
        for slot in messages.iter_mut().rev() {
            *slot = rest % q_k;
            rest /= q_k;
        }
        let z = propagate(net, code, &messages);
        let received: Vec<u64> = rho_in.iter().map(|&e| z[e]).collect();
        let decoded = code.decode(join_input(&received, q_n, None));
        let blocks: Vec<Vec<u64>> = messages.iter().map(|&m| digits(m, q, k)).collect();
        let ok = (0..k).all(|j| {
            let x: Vec<u64> = blocks.iter().map(|b| b[j]).collect();
            output_ids[decoded[j] as usize] == Some(f.value_id(numeral(&x, q)))
        });
        if !ok {
            return Ok(VerificationOutcome {
                pass: false,
                counterexample: Some(blocks),
                checked_count: g + 1,
            });
        }
    }
    Ok(VerificationOutcome {
        pass: true,
        counterexample: None,
        checked_count: total as u64,
    })
}

/// Runs `code` on `c` consecutive blocks, giving a `(ck, cn)` code.
pub fn repeat_code(
    net: &Network,
    code: &NetworkCode,
    c: usize,
    budget: &Budget,
) -> Result<NetworkCode> {
    check_shape(net, code)?;
    if c == 0 {
        return Err(Error::PreconditionViolated(
            "repetition factor must be positive".into(),
        ));
    }
    let q = code.alphabet;
    let (k, n) = (code.k, code.n);
    let (q_n, q_k) = (q.pow(n as u32), q.pow(k as u32));
    let (big_n, big_k) = (sat_pow(q, c * n) as u64, sat_pow(q, c * k) as u64);
    let blocks = |v: u64, base: u64| -> Vec<u64> { digits(v, base, c) };
    let mut encoders = Vec::with_capacity(net.edge_count());
    for e in 0..net.edge_count() {
        let tail = net.edge(e).tail;
        let parts = net.in_edges(tail).len();
        let is_source = net.source_index(tail).is_some();
        let size = checked_domain(
            "repeated encoder table",
            q,
            input_symbols(net, tail, c * k, c * n),
            budget,
        )?;
        let table = (0..size)
            .map(|x| {
                let (vals, msg) = split_input(x, parts, big_n, is_source.then_some(big_k));
                let val_blocks: Vec<Vec<u64>> = vals.iter().map(|&v| blocks(v, q_n)).collect();
                let msg_blocks = blocks(msg, q_k);
                let out: Vec<u64> = (0..c)
                    .map(|b| {
                        let inner: Vec<u64> = val_blocks.iter().map(|vb| vb[b]).collect();
                        let m = is_source.then_some((msg_blocks[b], q_k));
                        code.encoders[e][join_input(&inner, q_n, m) as usize]
                    })
                    .collect();
                numeral(&out, q_n)
            })
            .collect();
        encoders.push(table);
    }
    let parts = net.in_edges(net.receiver()).len();
    let size = checked_domain("repeated decoder table", q, parts * c * n, budget)?;
    check_budget(
        "repeated decoder entries",
        size as u128 * (c * k) as u128,
        budget.generators as u128,
    )?;
    let mut decoder = Vec::with_capacity(size as usize * c * k);
    for y in 0..size {
        let (vals, _) = split_input(y, parts, big_n, None);
        let val_blocks: Vec<Vec<u64>> = vals.iter().map(|&v| blocks(v, q_n)).collect();
        for b in 0..c {
            let inner: Vec<u64> = val_blocks.iter().map(|vb| vb[b]).collect();
            decoder.extend_from_slice(code.decode(join_input(&inner, q_n, None)));
        }
    }
    Ok(NetworkCode {
        alphabet: q,
        k: c * k,
        n: c * n,
        encoders,
        decoder,
        outputs: code.outputs.clone(),
    })
}

/// The code that forwards every source's block unchanged along a single
/// edge into the receiver. Needs `k <= n`; decodes the identity function.
pub fn forwarding_code(
    net: &Network,
    f: &TargetFunction,
    k: usize,
    n: usize,
) -> Result<NetworkCode> {
    if k > n {
        return Err(Error::BlockTooSmall { k, n });
    }
    let rho = net.receiver();
    let direct = (0..net.source_count()).all(|i| {
        let v = net.source_node(i);
        net.in_edges(v).is_empty()
            && net.out_edges(v).iter().all(|&e| net.edge(e).head == rho)
            && !net.out_edges(v).is_empty()
    });
    if !direct {
        return Err(Error::PreconditionViolated(
            "forwarding needs every source to feed only the receiver".into(),
        ));
    }
    let q = f.alphabet();
    let q_k = q.pow(k as u32);
    let encoders = (0..net.edge_count()).map(|_| (0..q_k).collect()).collect();
    let rho_in = net.in_edges(rho);
    let q_n = q.pow(n as u32);
    let size = sat_pow(q_n, rho_in.len()) as u64;
    let mut decoder = Vec::with_capacity(size as usize * k);
    for y in 0..size {
        let (vals, _) = split_input(y, rho_in.len(), q_n, None);
        // first in-edge from each source carries its block
        let mut blocks = vec![vec![0u64; k]; net.source_count()];
        let mut seen = vec![false; net.source_count()];
        for (&e, &v) in rho_in.iter().zip(&vals) {
            let i = net.source_index(net.edge(e).tail).unwrap();
            if !seen[i] {
                seen[i] = true;
                blocks[i] = digits(v % q_k, q, k);
            }
        }
        for j in 0..k {
            let x: Vec<u64> = blocks.iter().map(|b| b[j]).collect();
            decoder.push(f.value_id(numeral(&x, q)));
        }
    }
    Ok(NetworkCode {
        alphabet: q,
        k,
        n,
        encoders,
        decoder,
        outputs: f.codomain().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::function::FunctionKind;

    fn net(spec: crate::NetworkSpec) -> Network {
        Network::compile(spec).unwrap()
    }

    #[test]
    fn forwarding_single_edge_passes() {
        let n = net(catalog::single_edge(2));
        let id = TargetFunction::new(FunctionKind::Identity, 1, 2).unwrap();
        let code = forwarding_code(&n, &id, 1, 1).unwrap();
        let out = verify_code(&n, &id, &code, &Budget::default()).unwrap();
        assert!(out.pass);
        assert_eq!(out.checked_count, 2);
    }

    #[test]
    fn diamond_forwarding_attempt_fails() {
        // s3 sends its bit, s1 and s2 forward their own bits and ignore s3
        let n = net(catalog::diamond());
        let f = TargetFunction::new(FunctionKind::ArithmeticSum, 3, 2).unwrap();
        let own_bit = vec![0, 1, 0, 1];
        let code = NetworkCode {
            alphabet: 2,
            k: 1,
            n: 1,
            encoders: vec![vec![0, 1], vec![0, 1], own_bit.clone(), own_bit],
            decoder: vec![0, 1, 1, 2],
            outputs: f.codomain().to_vec(),
        };
        let out = verify_code(&n, &f, &code, &Budget::default()).unwrap();
        assert!(!out.pass);
        assert_eq!(out.counterexample, Some(vec![vec![0], vec![0], vec![1]]));
        assert_eq!(out.checked_count, 2);
    }

    #[test]
    fn shape_errors() {
        let n = net(catalog::single_edge(2));
        let id = TargetFunction::new(FunctionKind::Identity, 1, 2).unwrap();
        let mut code = forwarding_code(&n, &id, 1, 1).unwrap();
        code.encoders[0].pop();
        assert!(matches!(
            verify_code(&n, &id, &code, &Budget::default()),
            Err(Error::CodeShape(_))
        ));
    }

    #[test]
    fn repetition_preserves_validity() {
        let n = net(catalog::two_sources(2));
        let f = TargetFunction::new(FunctionKind::Identity, 2, 2).unwrap();
        let code = forwarding_code(&n, &f, 1, 1).unwrap();
        for c in [2, 3] {
            let rep = repeat_code(&n, &code, c, &Budget::default()).unwrap();
            assert_eq!((rep.k, rep.n), (c, c));
            assert!(verify_code(&n, &f, &rep, &Budget::default()).unwrap().pass);
        }
    }

    #[test]
    fn split_join_round_trip() {
        for x in 0..2u64.pow(7) {
            let (vals, msg) = split_input(x, 2, 4, Some(8));
            assert_eq!(join_input(&vals, 4, Some((msg, 8))), x);
        }
    }
}
