//! Exhaustive search for a `(k, n)` code.
//!
//! Nodes are assigned in topological order. A node's encoders only matter on
//! the inputs it can actually see, so the search assigns values to each
//! distinct input signature rather than to whole tables. Relabeling the
//! values of one edge is absorbed by whatever reads that edge, so each
//! edge's value sequence is kept in restricted-growth form (a new value is
//! at most one more than the largest used so far).
//!
//! After a node is assigned, every generator is summarized by its frontier:
//! the values on edges leaving assigned nodes toward unassigned ones (the
//! receiver included) and the messages of sources not yet assigned. All
//! later computation is a function of the frontier, so two generators with
//! equal frontiers but different target values make the branch hopeless.

use std::collections::HashMap;

use crate::codes::{checked_domain, input_symbols, join_input, split_input, NetworkCode};
use crate::error::{check_budget, sat_pow, Error, Result};
use crate::function::{digits, numeral, TargetFunction};
use crate::network::Network;
use crate::Budget;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(NetworkCode),
    /// The whole space was exhausted without a solution.
    Infeasible,
    BudgetExhausted {
        explored: u64,
    },
}

struct Search<'a> {
    net: &'a Network,
    k: usize,
    q_n: u64,
    q_k: u64,
    gens: usize,
    /// Message numeral of each source, per generator.
    messages: Vec<Vec<u64>>,
    /// Interned target value tuple, per generator.
    target: Vec<u32>,
    order: Vec<usize>,
    /// Edge values per generator; meaningful for assigned tails only.
    z: Vec<Vec<u64>>,
    /// Per node: signature of each generator and the chosen out-edge values
    /// for each signature.
    sig_of: Vec<Vec<u32>>,
    signatures: Vec<Vec<Vec<u64>>>,
    chosen: Vec<Vec<Vec<u64>>>,
    explored: u64,
    limit: u64,
}

enum Step {
    Done,
    Exhausted,
    Continue,
}

impl Search<'_> {
    fn signature(&self, v: usize, g: usize) -> Vec<u64> {
        let mut sig: Vec<u64> = self.net.in_edges(v).iter().map(|&e| self.z[e][g]).collect();
        if let Some(i) = self.net.source_index(v) {
            sig.push(self.messages[i][g]);
        }
        sig
    }

    fn frontier_consistent(&self, depth: usize) -> bool {
        let mut assigned = vec![false; self.net.node_count()];
        for &v in &self.order[..=depth] {
            assigned[v] = true;
        }
        let edges: Vec<usize> = (0..self.net.edge_count())
            .filter(|&e| assigned[self.net.edge(e).tail] && !assigned[self.net.edge(e).head])
            .collect();
        let pending: Vec<usize> = (0..self.net.source_count())
            .filter(|&i| !assigned[self.net.source_node(i)])
            .collect();
        let mut seen: HashMap<Vec<u64>, u32> = HashMap::with_capacity(self.gens);
        for g in 0..self.gens {
            let key: Vec<u64> = edges
                .iter()
                .map(|&e| self.z[e][g])
                .chain(pending.iter().map(|&i| self.messages[i][g]))
                .collect();
            match seen.entry(key) {
                std::collections::hash_map::Entry::Occupied(o) => {
                    if *o.get() != self.target[g] {
                        return false;
                    }
                }
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(self.target[g]);
                }
            }
        }
        true
    }

    fn enter_node(&mut self, depth: usize) -> Step {
        if depth == self.order.len() {
            return Step::Done;
        }
        let v = self.order[depth];
        let mut index: HashMap<Vec<u64>, u32> = HashMap::new();
        let mut sigs = Vec::new();
        let mut sig_of = Vec::with_capacity(self.gens);
        for g in 0..self.gens {
            let sig = self.signature(v, g);
            let next = index.len() as u32;
            let id = *index.entry(sig.clone()).or_insert_with(|| {
                sigs.push(sig);
                next
            });
            sig_of.push(id);
        }
        let d = self.net.out_edges(v).len();
        self.chosen[v] = vec![vec![0; d]; sigs.len()];
        self.signatures[v] = sigs;
        self.sig_of[v] = sig_of;
        let mut max_used = vec![None; d];
        self.assign(depth, 0, &mut max_used)
    }

    /// Chooses the value of out-edge `pos % d` for signature `pos / d`.
    fn assign(&mut self, depth: usize, pos: usize, max_used: &mut Vec<Option<u64>>) -> Step {
        let v = self.order[depth];
        let d = self.net.out_edges(v).len();
        let total = self.signatures[v].len() * d;
        if pos == total {
            let outs = self.net.out_edges(v).to_vec();
            for (j, &e) in outs.iter().enumerate() {
                for g in 0..self.gens {
                    self.z[e][g] = self.chosen[v][self.sig_of[v][g] as usize][j];
                }
            }
            if !self.frontier_consistent(depth) {
                return Step::Continue;
            }
            return self.enter_node(depth + 1);
        }
        let (sig, j) = (pos / d, pos % d);
        let ceiling = match max_used[j] {
            None => 0,
            Some(m) => (m + 1).min(self.q_n - 1),
        };
        for value in 0..=ceiling {
            self.explored += 1;
            if self.explored > self.limit {
                return Step::Exhausted;
            }
            self.chosen[v][sig][j] = value;
            let previous = max_used[j];
            max_used[j] = Some(previous.map_or(value, |m| m.max(value)));
            let step = self.assign(depth, pos + 1, max_used);
            max_used[j] = previous;
            match step {
                Step::Continue => {}
                other => return other,
            }
        }
        Step::Continue
    }
}

pub fn search_code(
    net: &Network,
    f: &TargetFunction,
    k: usize,
    n: usize,
    budget: &Budget,
) -> Result<SearchOutcome> {
    crate::bounds::cutset::check_compatible(net, f)?;
    if k == 0 || n == 0 {
        return Err(Error::PreconditionViolated(
            "block lengths must be positive".into(),
        ));
    }
    let q = f.alphabet();
    let s = net.source_count();
    let total = sat_pow(q, k * s);
    check_budget("code search (generators)", total, budget.generators as u128)?;
    let gens = total as usize;
    let q_k = q.pow(k as u32);
    let q_n = sat_pow(q, n).min(u64::MAX as u128) as u64;

    let mut messages = vec![vec![0u64; gens]; s];
    let mut interned: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut target = Vec::with_capacity(gens);
    for g in 0..gens {
        let mut rest = g as u64;
        for i in (0..s).rev() {
            messages[i][g] = rest % q_k;
            rest /= q_k;
        }
        let blocks: Vec<Vec<u64>> = (0..s).map(|i| digits(messages[i][g], q, k)).collect();
        let values: Vec<u32> = (0..k)
            .map(|j| {
                let x: Vec<u64> = blocks.iter().map(|b| b[j]).collect();
                f.value_id(numeral(&x, q))
            })
            .collect();
        let next = interned.len() as u32;
        target.push(*interned.entry(values).or_insert(next));
    }

    let order: Vec<usize> = net
        .topo_order()
        .iter()
        .copied()
        .filter(|&v| v != net.receiver())
        .collect();
    let nodes = net.node_count();
    let mut search = Search {
        net,
        k,
        q_n,
        q_k,
        gens,
        messages,
        target,
        order,
        z: vec![vec![0; gens]; net.edge_count()],
        sig_of: vec![Vec::new(); nodes],
        signatures: vec![Vec::new(); nodes],
        chosen: vec![Vec::new(); nodes],
        explored: 0,
        limit: budget.search_nodes,
    };
    match search.enter_node(0) {
        Step::Continue => Ok(SearchOutcome::Infeasible),
        Step::Exhausted => Ok(SearchOutcome::BudgetExhausted {
            explored: search.explored,
        }),
        Step::Done => Ok(SearchOutcome::Found(search.into_code(f, n, budget)?)),
    }
}

impl Search<'_> {
    fn into_code(self, f: &TargetFunction, n: usize, budget: &Budget) -> Result<NetworkCode> {
        let net = self.net;
        let q = f.alphabet();
        let k = self.k;
        let mut encoders = vec![Vec::new(); net.edge_count()];
        for &v in &self.order {
            let lookup: HashMap<&Vec<u64>, usize> = self.signatures[v]
                .iter()
                .enumerate()
                .map(|(i, s)| (s, i))
                .collect();
            let parts = net.in_edges(v).len();
            let own = net.source_index(v).is_some();
            let size = checked_domain(
                "searched encoder table",
                q,
                input_symbols(net, v, k, n),
                budget,
            )?;
            for (j, &e) in net.out_edges(v).iter().enumerate() {
                encoders[e] = (0..size)
                    .map(|x| {
                        let (mut sig, msg) =
                            split_input(x, parts, self.q_n, own.then_some(self.q_k));
                        if own {
                            sig.push(msg);
                        }
                        lookup.get(&sig).map_or(0, |&i| self.chosen[v][i][j])
                    })
                    .collect();
            }
        }
        let rho_in = net.in_edges(net.receiver());
        let size = checked_domain("searched decoder table", q, rho_in.len() * n, budget)?;
        check_budget(
            "searched decoder entries",
            size as u128 * k as u128,
            budget.generators as u128,
        )?;
        let mut decoder = vec![0u32; size as usize * k];
        for g in 0..self.gens {
            let received: Vec<u64> = rho_in.iter().map(|&e| self.z[e][g]).collect();
            let y = join_input(&received, self.q_n, None) as usize;
            let blocks: Vec<Vec<u64>> = self.messages.iter().map(|m| digits(m[g], q, k)).collect();
            for j in 0..k {
                let x: Vec<u64> = blocks.iter().map(|b| b[j]).collect();
                decoder[y * k + j] = f.value_id(numeral(&x, q));
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

    fn found(outcome: SearchOutcome) -> NetworkCode {
        match outcome {
            SearchOutcome::Found(c) => c,
            other => panic!("expected a code, got {other:?}"),
        }
    }

    #[test]
    fn diamond_unit_rate_is_infeasible() {
        let d = net(catalog::diamond());
        let f = TargetFunction::new(FunctionKind::ArithmeticSum, 3, 2).unwrap();
        assert_eq!(
            search_code(&d, &f, 1, 1, &Budget::default()).unwrap(),
            SearchOutcome::Infeasible
        );
    }

    #[test]
    fn finds_codes() {
        let b = Budget::default();
        let single = net(catalog::single_edge(2));
        let id = TargetFunction::new(FunctionKind::Identity, 1, 2).unwrap();
        let code = found(search_code(&single, &id, 1, 1, &b).unwrap());
        assert!(verify_code(&single, &id, &code, &b).unwrap().pass);

        let n3 = net(catalog::n3());
        let sum = TargetFunction::new(FunctionKind::ArithmeticSum, 3, 2).unwrap();
        let code = found(search_code(&n3, &sum, 1, 2, &b).unwrap());
        assert!(verify_code(&n3, &sum, &code, &b).unwrap().pass);
        assert_eq!(
            search_code(&n3, &sum, 1, 1, &b).unwrap(),
            SearchOutcome::Infeasible
        );
    }

    #[test]
    fn diamond_rate_two_thirds_found() {
        let d = net(catalog::diamond());
        let f = TargetFunction::new(FunctionKind::ArithmeticSum, 3, 2).unwrap();
        let b = Budget::default();
        let code = found(search_code(&d, &f, 1, 2, &b).unwrap());
        assert!(verify_code(&d, &f, &code, &b).unwrap().pass);
    }

    #[test]
    fn tiny_budget_is_reported() {
        let n3 = net(catalog::n3());
        let sum = TargetFunction::new(FunctionKind::ArithmeticSum, 3, 2).unwrap();
        let b = Budget {
            search_nodes: 3,
            ..Budget::default()
        };
        assert!(matches!(
            search_code(&n3, &sum, 1, 2, &b).unwrap(),
            SearchOutcome::BudgetExhausted { .. }
        ));
    }
}
