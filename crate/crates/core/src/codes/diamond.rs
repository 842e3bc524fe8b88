//! The diamond network: `s3` feeds `s1` and `s2`, each of which has a single
//! edge into the receiver, which computes the binary arithmetic sum.
//!
//! With `k` even, `s3` forwards its block to both neighbours. `s1` adds the
//! first half of `s3`'s block into its own, `s2` adds the second half, so
//! each sends one of `3^{k/2} 2^{k/2}` possible vectors, and the receiver
//! adds what it gets. Any `(k, n)` solution needs `4^n >= 6^k`, so the rate
//! approaches `2 / (1 + log2 3)` and no code does better.

use num_bigint::BigUint;

use crate::codes::{checked_domain, split_input, NetworkCode};
use crate::error::{check_budget, Error, Result};
use crate::function::{digits, FunctionKind, TargetFunction, Value};
use crate::network::Network;
use crate::Budget;

pub fn diamond_capacity() -> f64 {
    2.0 / (1.0 + 3f64.log2())
}

/// Smallest `n` with `2^n >= 3^{k/2} 2^{k/2}`.
pub fn diamond_block_length(k: usize) -> Result<usize> {
    if k % 2 == 1 {
        return Err(Error::OddK(k));
    }
    let need = BigUint::from(6u32).pow((k / 2) as u32);
    let mut n = 0;
    while BigUint::from(2u32).pow(n as u32) < need {
        n += 1;
    }
    Ok(n)
}

/// Counting condition `4^n >= 6^k` necessary for any `(k, n)` solution.
pub fn diamond_counting_feasible(k: usize, n: usize) -> bool {
    BigUint::from(4u32).pow(n as u32) >= BigUint::from(6u32).pow(k as u32)
}

/// Mixed-radix index of `y`, first component most significant.
fn pack(y: &[u64], radix: &[u64]) -> u64 {
    y.iter().zip(radix).fold(0, |acc, (&v, &r)| acc * r + v)
}

fn unpack(mut x: u64, radix: &[u64]) -> Option<Vec<u64>> {
    let mut out = vec![0; radix.len()];
    for (slot, &r) in out.iter_mut().zip(radix).rev() {
        *slot = x % r;
        x /= r;
    }
    (x == 0).then_some(out)
}

/// The `(k, n)` diamond code with `n` from [`diamond_block_length`], laid out
/// on the builtin diamond topology (edges `s3->s1`, `s3->s2`, `s1->r`,
/// `s2->r`).
pub fn diamond_code(k: usize, budget: &Budget) -> Result<NetworkCode> {
    let n = diamond_block_length(k)?;
    if k == 0 {
        return Err(Error::PreconditionViolated("k must be positive".into()));
    }
    if k > n {
        return Err(Error::BlockTooSmall { k, n });
    }
    let half = k / 2;
    let q_n = 1u64 << n;
    let q_k = 1u64 << k;
    // s1 carries ternary digits in the first half, s2 in the second half
    let radix1: Vec<u64> = (0..k).map(|i| if i < half { 3 } else { 2 }).collect();
    let radix2: Vec<u64> = (0..k).map(|i| if i < half { 2 } else { 3 }).collect();

    let forward: Vec<u64> = (0..q_k).collect();
    let side = |radix: &[u64], mixed_first_half: bool| -> Result<Vec<u64>> {
        let size = checked_domain("diamond encoder table", 2, n + k, budget)?;
        Ok((0..size)
            .map(|x| {
                let (vals, own) = split_input(x, 1, q_n, Some(q_k));
                if vals[0] >= q_k {
                    return 0;
                }
                let w3 = digits(vals[0], 2, k);
                let w = digits(own, 2, k);
                let y: Vec<u64> = (0..k)
                    .map(|i| {
                        let mixed = (i < half) == mixed_first_half;
                        w[i] + if mixed { w3[i] } else { 0 }
                    })
                    .collect();
                pack(&y, radix)
            })
            .collect())
    };
    let e_s1 = side(&radix1, true)?;
    let e_s2 = side(&radix2, false)?;

    let size = checked_domain("diamond decoder table", 2, 2 * n, budget)?;
    check_budget(
        "diamond decoder entries",
        size as u128 * k as u128,
        budget.generators as u128,
    )?;
    let mut decoder = Vec::with_capacity(size as usize * k);
    for y in 0..size {
        let (vals, _) = split_input(y, 2, q_n, None);
        match (unpack(vals[0], &radix1), unpack(vals[1], &radix2)) {
            (Some(a), Some(b)) => decoder.extend(a.iter().zip(&b).map(|(x, y)| (x + y) as u32)),
            _ => decoder.extend(std::iter::repeat_n(0, k)),
        }
    }
    Ok(NetworkCode {
        alphabet: 2,
        k,
        n,
        encoders: vec![forward.clone(), forward, e_s1, e_s2],
        decoder,
        outputs: (0..=3).map(Value::scalar).collect(),
    })
}

/// True when `net` has the builtin diamond layout (up to node names).
pub fn is_diamond(net: &Network) -> bool {
    if net.source_count() != 3 || net.edge_count() != 4 {
        return false;
    }
    let (s1, s2, s3) = (net.source_node(0), net.source_node(1), net.source_node(2));
    let rho = net.receiver();
    let want = [(s3, s1), (s3, s2), (s1, rho), (s2, rho)];
    (0..4).all(|e| {
        let edge = net.edge(e);
        (edge.tail, edge.head) == want[e]
    })
}

/// The arithmetic sum over three binary sources.
pub fn diamond_function() -> TargetFunction {
    TargetFunction::new(FunctionKind::ArithmeticSum, 3, 2).expect("valid builtin function")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::codes::verify_code;

    #[test]
    fn block_lengths() {
        assert_eq!(diamond_block_length(2).unwrap(), 3);
        assert_eq!(diamond_block_length(4).unwrap(), 6);
        assert_eq!(diamond_block_length(8).unwrap(), 11);
        assert_eq!(diamond_block_length(3), Err(Error::OddK(3)));
    }

    #[test]
    fn counting() {
        assert!(!diamond_counting_feasible(1, 1));
        assert!(diamond_counting_feasible(2, 3));
        for k in (2..40).step_by(2) {
            let n = diamond_block_length(k).unwrap();
            assert!(diamond_counting_feasible(k, n));
            assert!(k as f64 / n as f64 <= diamond_capacity() + 1e-12);
        }
    }

    #[test]
    fn small_codes_verify() {
        let net = Network::compile(catalog::diamond()).unwrap();
        assert!(is_diamond(&net));
        let f = diamond_function();
        let b = Budget::default();
        for k in [2, 4] {
            let code = diamond_code(k, &b).unwrap();
            let out = verify_code(&net, &f, &code, &b).unwrap();
            assert!(out.pass, "k={k}");
            assert_eq!(out.checked_count, 1 << (3 * k));
        }
    }

    #[test]
    fn large_k_hits_budget() {
        assert!(matches!(
            diamond_code(16, &Budget::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
