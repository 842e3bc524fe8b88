//! Directed Steiner trees and the fractional Steiner tree packing LP.
//!
//! A Steiner tree is a minimal subgraph in which every source has a path to
//! the receiver. Minimality forces every non-receiver node of the tree to
//! keep exactly one out-edge, and conversely any choice of one out-edge per
//! node reachable from the sources yields a minimal tree, so the trees are
//! enumerated as such choice functions.

use crate::bounds::lp;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::Budget;

#[derive(Clone, Debug, PartialEq)]
pub struct SteinerPacking {
    /// Sorted edge lists, one per tree.
    pub trees: Vec<Vec<usize>>,
    pub weights: Vec<f64>,
    pub value: f64,
}

impl SteinerPacking {
    /// `sum of u_i over trees containing e`, per edge.
    pub fn edge_loads(&self, edge_count: usize) -> Vec<f64> {
        let mut load = vec![0.0; edge_count];
        for (t, &u) in self.trees.iter().zip(&self.weights) {
            for &e in t {
                load[e] += u;
            }
        }
        load
    }
}

pub fn enumerate_steiner_trees(net: &Network, budget: &Budget) -> Result<Vec<Vec<usize>>> {
    if net.edge_count() > budget.edges {
        return Err(Error::BudgetExceeded {
            what: "Steiner tree enumeration (edges)",
            needed: net.edge_count() as u128,
            budget: budget.edges as u128,
        });
    }
    let mut state = Search {
        net,
        limit: budget.trees,
        in_tree: vec![false; net.node_count()],
        chosen: Vec::new(),
        trees: Vec::new(),
    };
    for i in 0..net.source_count() {
        state.in_tree[net.source_node(i)] = true;
    }
    state.in_tree[net.receiver()] = true;
    let mut pending: Vec<usize> = (0..net.source_count())
        .map(|i| net.source_node(i))
        .collect();
    pending.sort_unstable();
    state.extend(&mut pending)?;
    let mut trees = state.trees;
    for t in trees.iter_mut() {
        t.sort_unstable();
    }
    trees.sort();
    Ok(trees)
}

struct Search<'a> {
    net: &'a Network,
    limit: usize,
    in_tree: Vec<bool>,
    chosen: Vec<usize>,
    trees: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// `pending` holds tree nodes still needing an out-edge; the smallest
    /// node index is expanded first.
    fn extend(&mut self, pending: &mut Vec<usize>) -> Result<()> {
        let Some(v) = pending.iter().copied().min() else {
            if self.trees.len() >= self.limit {
                return Err(Error::BudgetExceeded {
                    what: "Steiner trees",
                    needed: self.limit as u128 + 1,
                    budget: self.limit as u128,
                });
            }
            self.trees.push(self.chosen.clone());
            return Ok(());
        };
        let pos = pending.iter().position(|&p| p == v).unwrap();
        pending.swap_remove(pos);
        for &e in self.net.out_edges(v) {
            let head = self.net.edge(e).head;
            let fresh = !self.in_tree[head];
            if fresh {
                self.in_tree[head] = true;
                pending.push(head);
            }
            self.chosen.push(e);
            self.extend(pending)?;
            self.chosen.pop();
            if fresh {
                self.in_tree[head] = false;
                let p = pending.iter().position(|&x| x == head).unwrap();
                pending.swap_remove(p);
            }
        }
        pending.push(v);
        Ok(())
    }
}

/// Maximizes `sum u_i r_i` subject to unit edge loads over the given trees.
pub fn weighted_packing(
    net: &Network,
    trees: &[Vec<usize>],
    rates: &[f64],
    tol: f64,
) -> Result<(f64, Vec<f64>)> {
    if rates.len() != trees.len() {
        return Err(Error::PreconditionViolated(format!(
            "{} rates for {} trees",
            rates.len(),
            trees.len()
        )));
    }
    let mut a = vec![vec![0.0; trees.len()]; net.edge_count()];
    for (i, t) in trees.iter().enumerate() {
        for &e in t {
            a[e][i] = 1.0;
        }
    }
    let b = vec![1.0; net.edge_count()];
    let sol = lp::maximize(rates, &a, &b, tol)
        .map_err(|e| Error::PreconditionViolated(format!("packing LP failed: {e:?}")))?;
    Ok((sol.value, sol.x))
}

/// The fractional Steiner tree packing number and an optimal packing.
pub fn steiner_packing(net: &Network, budget: &Budget) -> Result<SteinerPacking> {
    let trees = enumerate_steiner_trees(net, budget)?;
    let ones = vec![1.0; trees.len()];
    let (value, weights) = weighted_packing(net, &trees, &ones, 1e-9)?;
    Ok(SteinerPacking {
        trees,
        weights,
        value,
    })
}

/// The network restricted to one Steiner tree.
pub fn tree_network(net: &Network, tree: &[usize]) -> Result<Network> {
    net.subnetwork(tree)
}
