//! Running a code built over a larger alphabet on a network whose edges
//! carry symbols of a smaller one. The inner code is repeated `c` times and
//! each of its `cn`-symbol edge vectors, read as a base-`q'` numeral, is
//! sent as the same integer written with `m` base-`q` symbols, where `m` is
//! the least length with `q^m >= q'^{cn}`. Source messages over `{0..q-1}`
//! are fed to the inner code unchanged, which needs `q <= q'` and the inner
//! function to agree with the target on `{0..q-1}^s`.

use crate::codes::{
    checked_domain, input_symbols, join_input, repeat_code, split_input, NetworkCode,
};
use crate::error::{check_budget, sat_pow, Error, Result};
use crate::function::{digits, numeral, TargetFunction};
use crate::network::Network;
use crate::Budget;

/// Least `m` with `q^m >= big^len`.
pub fn simulated_length(q: u64, big: u64, len: usize) -> usize {
    let target = sat_pow(big, len);
    let mut m = 0;
    while sat_pow(q, m) < target {
        m += 1;
    }
    m
}

pub fn simulate_alphabet(
    net: &Network,
    f: &TargetFunction,
    inner: &NetworkCode,
    inner_f: &TargetFunction,
    c: usize,
    budget: &Budget,
) -> Result<NetworkCode> {
    let q = f.alphabet();
    let big = inner.alphabet;
    if q > big {
        return Err(Error::IncompatibleEmbedding(format!(
            "target alphabet {q} is larger than the code alphabet {big}"
        )));
    }
    if inner_f.alphabet() != big || inner_f.arity() != f.arity() {
        return Err(Error::IncompatibleEmbedding(
            "inner function does not match the inner code".into(),
        ));
    }
    let s = f.arity();
    let points = sat_pow(q, s);
    check_budget("embedding check", points, budget.states as u128)?;
    for x in 0..points as u64 {
        let args = digits(x, q, s);
        if inner_f.evaluate(&args)? != f.evaluate(&args)? {
            return Err(Error::IncompatibleEmbedding(format!(
                "inner function differs from the target at {args:?}"
            )));
        }
    }

    let code = if c == 1 {
        inner.clone()
    } else {
        repeat_code(net, inner, c, budget)?
    };
    let (k, n) = (code.k, code.n);
    let m = simulated_length(q, big, n);
    let big_n = big.pow(n as u32);
    let big_k = big.pow(k as u32);
    let q_m = q.pow(m as u32);
    let q_k = q.pow(k as u32);

    let mut encoders = Vec::with_capacity(net.edge_count());
    for e in 0..net.edge_count() {
        let tail = net.edge(e).tail;
        let parts = net.in_edges(tail).len();
        let is_source = net.source_index(tail).is_some();
        let size = checked_domain(
            "simulated encoder table",
            q,
            input_symbols(net, tail, k, m),
            budget,
        )?;
        let table = (0..size)
            .map(|x| {
                let (vals, msg) = split_input(x, parts, q_m, is_source.then_some(q_k));
                if vals.iter().any(|&v| v >= big_n) {
                    return 0;
                }
                let msg = is_source.then(|| (numeral(&digits(msg, q, k), big), big_k));
                code.encoders[e][join_input(&vals, big_n, msg) as usize]
            })
            .collect();
        encoders.push(table);
    }

    let parts = net.in_edges(net.receiver()).len();
    let size = checked_domain("simulated decoder table", q, parts * m, budget)?;
    check_budget(
        "simulated decoder entries",
        size as u128 * k as u128,
        budget.generators as u128,
    )?;
    let mut decoder = Vec::with_capacity(size as usize * k);
    for y in 0..size {
        let (vals, _) = split_input(y, parts, q_m, None);
        if vals.iter().any(|&v| v >= big_n) {
            decoder.extend(std::iter::repeat_n(0, k));
        } else {
            decoder.extend_from_slice(code.decode(join_input(&vals, big_n, None)));
        }
    }
    Ok(NetworkCode {
        alphabet: q,
        k,
        n: m,
        encoders,
        decoder,
        outputs: code.outputs.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::codes::{tree_code, verify_code};
    use crate::function::FunctionKind;

    #[test]
    fn lengths() {
        assert_eq!(simulated_length(2, 5, 1), 3);
        assert_eq!(simulated_length(2, 3, 3), 5);
        assert_eq!(simulated_length(3, 3, 4), 4);
    }

    #[test]
    fn arithmetic_sum_through_prime_field() {
        // the binary sum of three sources equals their sum mod 5
        let mut spec = catalog::n3();
        spec.alphabet = 5;
        let big_net = Network::compile(spec).unwrap();
        let net = Network::compile(catalog::n3()).unwrap();
        let mod5 = TargetFunction::new(FunctionKind::ModSum(5), 3, 5).unwrap();
        let sum = TargetFunction::new(FunctionKind::ArithmeticSum, 3, 2).unwrap();
        let b = Budget::default();
        let inner = tree_code(&big_net, &mod5, 1, 1, &b).unwrap();
        let code = simulate_alphabet(&net, &sum, &inner, &mod5, 1, &b).unwrap();
        assert_eq!((code.k, code.n), (1, 3));
        assert!(verify_code(&net, &sum, &code, &b).unwrap().pass);
    }

    #[test]
    fn same_alphabet_keeps_lengths() {
        let net = Network::compile(catalog::n3()).unwrap();
        let sum = TargetFunction::new(FunctionKind::ArithmeticSum, 3, 2).unwrap();
        let b = Budget::default();
        let inner = tree_code(&net, &sum, 1, 2, &b).unwrap();
        let code = simulate_alphabet(&net, &sum, &inner, &sum, 1, &b).unwrap();
        assert_eq!(code, inner);
    }

    #[test]
    fn rejects_bad_embedding() {
        let mut spec = catalog::n3();
        spec.alphabet = 3;
        let big_net = Network::compile(spec).unwrap();
        let net = Network::compile(catalog::n3()).unwrap();
        let mod3 = TargetFunction::new(FunctionKind::ModSum(3), 3, 3).unwrap();
        let sum = TargetFunction::new(FunctionKind::ArithmeticSum, 3, 2).unwrap();
        let b = Budget::default();
        let inner = tree_code(&big_net, &mod3, 1, 1, &b).unwrap();
        assert!(matches!(
            simulate_alphabet(&net, &sum, &inner, &mod3, 1, &b),
            Err(Error::IncompatibleEmbedding(_))
        ));
    }
}
