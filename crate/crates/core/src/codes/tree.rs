//! Codes for multi-edge trees. Every node forwards, for each of the `k`
//! message components, the equivalence class of the sources below it. The
//! `k` class indices are packed as a mixed-radix numeral and spread over the
//! node's `n * |E_o(v)|` outgoing symbols, most significant first.

use num_bigint::BigUint;

use crate::bounds::cutset::check_compatible;
use crate::codes::{checked_domain, input_symbols, split_input, NetworkCode};
use crate::error::{check_budget, Error, Result};
use crate::function::{digits, numeral, FootprintResult, TargetFunction};
use crate::network::{Network, SourceSet};
use crate::Budget;

fn check_tree(net: &Network) -> Result<()> {
    if net.is_multi_edge_tree() {
        return Ok(());
    }
    let v = (0..net.node_count())
        .find(|&v| {
            let mut heads = net.out_edges(v).iter().map(|&e| net.edge(e).head);
            let first = heads.next();
            heads.any(|h| Some(h) != first)
        })
        .unwrap();
    Err(Error::NotTree(net.node_name(v).into()))
}

/// Sources whose only route to the receiver passes through `v`.
fn below(net: &Network, v: usize) -> SourceSet {
    net.classify_cut(net.out_edges(v))
        .map(|c| c.separated)
        .unwrap_or(SourceSet::EMPTY)
}

/// `(value, |E_o(v)|, R)` at the bottleneck node `v`.
pub(crate) fn tree_rate_parts(net: &Network, f: &TargetFunction) -> Result<(f64, usize, u64)> {
    check_tree(net)?;
    check_compatible(net, f)?;
    let q = f.alphabet() as f64;
    let mut best = (f64::INFINITY, 0, 0);
    for &v in net.topo_order() {
        if v == net.receiver() {
            continue;
        }
        let d = net.out_edges(v).len();
        let r = f.footprint(below(net, v))?.class_count;
        let value = d as f64 / ((r as f64).ln() / q.ln());
        if value < best.0 - 1e-12 {
            best = (value, d, r);
        }
    }
    Ok(best)
}

/// `min over non-receiver v of |E_o(v)| / log_q R(I_{E_o(v)}, f)`.
pub fn tree_rate_bound(net: &Network, f: &TargetFunction) -> Result<f64> {
    Ok(tree_rate_parts(net, f)?.0)
}

struct NodeInfo {
    sources: SourceSet,
    classes: FootprintResult,
}

/// A `(k, n)` code for `f` on a multi-edge tree, provided
/// `q^{n |E_o(v)|} >= R_v^k` at every node.
pub fn tree_code(
    net: &Network,
    f: &TargetFunction,
    k: usize,
    n: usize,
    budget: &Budget,
) -> Result<NetworkCode> {
    check_tree(net)?;
    check_compatible(net, f)?;
    if k == 0 || n == 0 {
        return Err(Error::PreconditionViolated(
            "block lengths must be positive".into(),
        ));
    }
    let q = f.alphabet();
    let rho = net.receiver();
    let mut info: Vec<Option<NodeInfo>> = (0..net.node_count()).map(|_| None).collect();
    let mut violators = Vec::new();
    for &v in net.topo_order() {
        if v == rho {
            continue;
        }
        let sources = below(net, v);
        let classes = f.footprint(sources)?;
        let d = net.out_edges(v).len();
        let capacity = BigUint::from(q).pow((n * d) as u32);
        if capacity < BigUint::from(classes.class_count).pow(k as u32) {
            let slack = d as f64 / (classes.class_count as f64).log(q as f64);
            violators.push((slack, v));
        }
        info[v] = Some(NodeInfo { sources, classes });
    }
    // Report the bottleneck among the nodes that cannot carry the rate.
    if let Some(&(_, v)) = violators
        .iter()
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
    {
        return Err(Error::RateInfeasible {
            node: net.node_name(v).into(),
            k,
            n,
        });
    }

    let q_n = q.pow(n as u32);
    let q_k = q.pow(k as u32);

    // Class tuples of the children of `v`, recovered from its in-edge values,
    // combined into the class tuple on `target` (own message included).
    let recover = |v: usize, x: u64, target: &FootprintResult| -> Option<Vec<Vec<u64>>> {
        let parts = net.in_edges(v).len();
        let own = net.source_index(v);
        let (vals, msg) = split_input(x, parts, q_n, own.map(|_| q_k));
        let members: Vec<usize> = target.index_set.indices().collect();
        // assignment of the sources in `target` for each component
        let mut assign = vec![vec![0u64; members.len()]; k];
        if let Some(i) = own {
            let pos = members.iter().position(|&m| m == i)?;
            for (l, d) in digits(msg, q, k).into_iter().enumerate() {
                assign[l][pos] = d;
            }
        }
        let in_edges = net.in_edges(v);
        let mut children: Vec<usize> = Vec::new();
        for &e in in_edges {
            let t = net.edge(e).tail;
            if !children.contains(&t) {
                children.push(t);
            }
        }
        for child in children {
            let child_info = info[child].as_ref().expect("children precede parents");
            let r = child_info.classes.class_count;
            let child_vals: Vec<u64> = in_edges
                .iter()
                .zip(&vals)
                .filter(|(&e, _)| net.edge(e).tail == child)
                .map(|(_, &z)| z)
                .collect();
            let tuple = unpack_classes(numeral(&child_vals, q_n), r, k)?;
            let child_members: Vec<usize> = child_info.sources.indices().collect();
            for (l, &c) in tuple.iter().enumerate() {
                let rep = child_info.classes.representatives[(c - 1) as usize];
                let rep_digits = digits(rep, q, child_members.len());
                for (&m, &dg) in child_members.iter().zip(&rep_digits) {
                    let pos = members.iter().position(|&x| x == m)?;
                    assign[l][pos] = dg;
                }
            }
        }
        Some(assign)
    };

    let mut encoders = vec![Vec::new(); net.edge_count()];
    for &v in net.topo_order() {
        if v == rho {
            continue;
        }
        let node = info[v].as_ref().unwrap();
        let outs = net.out_edges(v);
        let d = outs.len();
        let size = checked_domain(
            "tree code encoder table",
            q,
            input_symbols(net, v, k, n),
            budget,
        )?;
        let mut tables = vec![Vec::with_capacity(size as usize); d];
        for x in 0..size {
            let symbols = match recover(v, x, &node.classes) {
                Some(assign) => {
                    let tuple: Vec<u64> = assign
                        .iter()
                        .map(|a| node.classes.class(numeral(a, q)) as u64)
                        .collect();
                    let packed = pack_classes(&tuple, node.classes.class_count);
                    digits(packed, q_n, d)
                }
                None => vec![0; d],
            };
            for (t, s) in tables.iter_mut().zip(symbols) {
                t.push(s);
            }
        }
        for (&e, t) in outs.iter().zip(tables) {
            encoders[e] = t;
        }
    }

    let all = FootprintResult {
        index_set: net.all_sources(),
        class_count: 0,
        class_of: Vec::new(),
        representatives: Vec::new(),
    };
    let size = checked_domain(
        "tree code decoder table",
        q,
        net.in_edges(rho).len() * n,
        budget,
    )?;
    check_budget(
        "tree code decoder entries",
        size as u128 * k as u128,
        budget.generators as u128,
    )?;
    let mut decoder = Vec::with_capacity(size as usize * k);
    for y in 0..size {
        match recover(rho, y, &all) {
            Some(assign) => {
                decoder.extend(assign.iter().map(|a| f.value_id(numeral(a, q))));
            }
            None => decoder.extend(std::iter::repeat_n(0, k)),
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

/// Class indices `1..=r`, first component most significant.
fn pack_classes(tuple: &[u64], r: u64) -> u64 {
    tuple.iter().fold(0, |acc, &c| acc * r + (c - 1))
}

fn unpack_classes(packed: u64, r: u64, k: usize) -> Option<Vec<u64>> {
    let mut rest = packed;
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = rest % r + 1;
        rest /= r;
    }
    (rest == 0).then_some(out)
}

/// Largest `k/n` with `n <= max_n` that passes the per-node capacity check.
pub fn best_tree_rate(
    net: &Network,
    f: &TargetFunction,
    max_n: usize,
) -> Result<Option<(usize, usize)>> {
    check_tree(net)?;
    check_compatible(net, f)?;
    let q = f.alphabet();
    let nodes: Vec<(usize, u64)> = net
        .topo_order()
        .iter()
        .filter(|&&v| v != net.receiver())
        .map(|&v| {
            Ok((
                net.out_edges(v).len(),
                f.footprint(below(net, v))?.class_count,
            ))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(usize, usize)> = None;
    for n in 1..=max_n {
        let mut k = 0;
        while nodes.iter().all(|&(d, r)| {
            BigUint::from(q).pow((n * d) as u32) >= BigUint::from(r).pow((k + 1) as u32)
        }) {
            k += 1;
        }
        if k > 0 && best.is_none_or(|(bk, bn)| k * bn > bk * n) {
            best = Some((k, n));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::codes::verify_code;
    use crate::function::FunctionKind;

    fn net(spec: crate::NetworkSpec) -> Network {
        Network::compile(spec).unwrap()
    }

    #[test]
    fn rate_bound_examples() {
        let sum3 = TargetFunction::new(FunctionKind::ArithmeticSum, 3, 2).unwrap();
        assert!((tree_rate_bound(&net(catalog::n3()), &sum3).unwrap() - 0.5).abs() < 1e-12);
        let id = TargetFunction::new(FunctionKind::Identity, 1, 2).unwrap();
        assert_eq!(
            tree_rate_bound(&net(catalog::single_edge(2)), &id).unwrap(),
            1.0
        );
        assert_eq!(
            tree_rate_bound(&net(catalog::parallel_pair(2)), &id).unwrap(),
            2.0
        );
        assert!(matches!(
            tree_rate_bound(&net(catalog::diamond()), &sum3),
            Err(Error::NotTree(_))
        ));
    }

    #[test]
    fn n3_codes() {
        let n3 = net(catalog::n3());
        let sum3 = TargetFunction::new(FunctionKind::ArithmeticSum, 3, 2).unwrap();
        let b = Budget::default();
        let code = tree_code(&n3, &sum3, 1, 2, &b).unwrap();
        assert!(verify_code(&n3, &sum3, &code, &b).unwrap().pass);
        assert_eq!(
            tree_code(&n3, &sum3, 2, 3, &b),
            Err(Error::RateInfeasible {
                node: "s3".into(),
                k: 2,
                n: 3
            })
        );
        assert_eq!(best_tree_rate(&n3, &sum3, 6).unwrap(), Some((1, 2)));
    }

    #[test]
    fn identity_forwarding() {
        let n = net(catalog::single_edge(2));
        let id = TargetFunction::new(FunctionKind::Identity, 1, 2).unwrap();
        let b = Budget::default();
        let code = tree_code(&n, &id, 1, 1, &b).unwrap();
        assert_eq!(code.encoders[0], vec![0, 1]);
        assert!(verify_code(&n, &id, &code, &b).unwrap().pass);
        let pair = net(catalog::parallel_pair(2));
        let code = tree_code(&pair, &id, 2, 1, &b).unwrap();
        assert!(verify_code(&pair, &id, &code, &b).unwrap().pass);
    }

    #[test]
    fn ternary_line() {
        let mut spec = catalog::line(2);
        spec.alphabet = 3;
        let n = net(spec);
        let b = Budget::default();
        for kind in [
            FunctionKind::ArithmeticSum,
            FunctionKind::Maximum,
            FunctionKind::ModSum(3),
        ] {
            let f = TargetFunction::new(kind, 2, 3).unwrap();
            let (k, nn) = best_tree_rate(&n, &f, 3).unwrap().unwrap();
            let code = tree_code(&n, &f, k, nn, &b).unwrap();
            assert!(verify_code(&n, &f, &code, &b).unwrap().pass);
        }
    }
}
