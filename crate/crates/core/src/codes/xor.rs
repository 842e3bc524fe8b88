//! A `(2, 1)` code computing the binary mod-2 sum on the reverse butterfly.
//! With messages `a = (a1, a2)` at `s1` and `b = (b1, b2)` at `s2`:
//!
//! | edge     | carries             |
//! |----------|---------------------|
//! | s1 -> n1 | a1 + a2             |
//! | s1 -> n4 | a2                  |
//! | s2 -> n2 | b1 + b2             |
//! | s2 -> n4 | b1                  |
//! | n4 -> n3 | a2 + b1             |
//! | n3 -> n1 | forwarded           |
//! | n3 -> n2 | forwarded           |
//! | n1 -> r  | a1 + b1             |
//! | n2 -> r  | a2 + b2             |

use crate::codes::NetworkCode;
use crate::function::Value;

/// Laid out on the builtin reverse butterfly edge order.
pub fn reverse_butterfly_xor_code() -> NetworkCode {
    let bits = |x: u64| (x >> 1 & 1, x & 1);
    // source tables take the 2-bit message numeral
    let first_plus_second: Vec<u64> = (0..4)
        .map(|m| {
            let (x, y) = bits(m);
            x ^ y
        })
        .collect();
    let second: Vec<u64> = (0..4).map(|m| bits(m).1).collect();
    let first: Vec<u64> = (0..4).map(|m| bits(m).0).collect();
    // relays with two in-edges take the 2-bit numeral of their inputs
    let xor: Vec<u64> = (0..4)
        .map(|m| {
            let (x, y) = bits(m);
            x ^ y
        })
        .collect();
    let forward = vec![0, 1];
    NetworkCode {
        alphabet: 2,
        k: 2,
        n: 1,
        encoders: vec![
            first_plus_second.clone(),
            second,
            first_plus_second,
            first,
            xor.clone(),
            forward.clone(),
            forward,
            xor.clone(),
            xor,
        ],
        // received (a1+b1, a2+b2) is already the answer
        decoder: vec![0, 0, 0, 1, 1, 0, 1, 1],
        outputs: vec![Value::scalar(0), Value::scalar(1)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::codes::{propagate, verify_code};
    use crate::function::{FunctionKind, TargetFunction};
    use crate::network::Network;
    use crate::Budget;

    #[test]
    fn verifies_on_n2() {
        let net = Network::compile(catalog::n2()).unwrap();
        let f = TargetFunction::new(FunctionKind::ModSum(2), 2, 2).unwrap();
        let code = reverse_butterfly_xor_code();
        let out = verify_code(&net, &f, &code, &Budget::default()).unwrap();
        assert!(out.pass);
        assert_eq!(out.checked_count, 16);
        assert_eq!(code.rate(), 2.0);
    }

    #[test]
    fn hand_propagation() {
        let net = Network::compile(catalog::n2()).unwrap();
        let code = reverse_butterfly_xor_code();
        // a = (1,0), b = (0,1)
        let z = propagate(&net, &code, &[0b10, 0b01]);
        assert_eq!((z[7], z[8]), (1, 1));
        let z = propagate(&net, &code, &[0, 0]);
        assert_eq!((z[7], z[8]), (0, 0));
    }
}
