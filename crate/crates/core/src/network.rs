//! Single-receiver directed acyclic multigraphs and their cuts.
//!
//! A [`NetworkSpec`] is the user-facing description (opaque node names, an
//! edge list where repetition encodes parallel edges). [`Network::compile`]
//! validates it and builds the adjacency lists, a deterministic topological
//! order and stable edge indices that every other module works with.
//!
//! Cuts are identified by the set of sources they separate from the
//! receiver. [`Network::enumerate_cuts`] returns the cuts that are minimal
//! for their separated set: no proper subset separates the same sources.
//! Every min-expression over cuts in this crate is of the form
//! `g(|C|, I_C)` with `g` increasing in `|C|`, and every cut contains a
//! minimal cut with the same `I_C`, so restricting to minimal cuts never
//! changes the optimum.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_budget, Error, Result};
use crate::Budget;

/// Set of source indices, stored as a bitmask over 0-based positions.
/// Displayed 1-based, matching the usual `σ_1..σ_s` numbering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceSet(pub u64);

impl SourceSet {
    pub const EMPTY: SourceSet = SourceSet(0);

    pub fn full(s: usize) -> Self {
        if s >= 64 {
            SourceSet(u64::MAX)
        } else {
            SourceSet((1u64 << s) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        SourceSet(1 << i)
    }

    /// Builds a set from 0-based indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        SourceSet(it.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: SourceSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SourceSet) -> SourceSet {
        SourceSet(self.0 | other.0)
    }

    /// 0-based indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    /// All nonempty subsets of `{0..s-1}` in increasing bitmask order.
    pub fn nonempty_subsets(s: usize) -> impl Iterator<Item = SourceSet> {
        (1..=SourceSet::full(s).0).map(SourceSet)
    }
}

impl fmt::Display for SourceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub sources: Vec<String>,
    pub receiver: String,
    pub alphabet: u64,
}

impl NetworkSpec {
    /// Convenience constructor from string slices.
    pub fn new(
        nodes: &[&str],
        edges: &[(&str, &str)],
        sources: &[&str],
        receiver: &str,
        alphabet: u64,
    ) -> Self {
        NetworkSpec {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            sources: sources.iter().map(|s| s.to_string()).collect(),
            receiver: receiver.to_string(),
            alphabet,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

/// Compiled, validated network. Immutable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    spec: NetworkSpec,
    edges: Vec<Edge>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
    topo: Vec<usize>,
    sources: Vec<usize>,
    source_index: Vec<Option<usize>>,
    receiver: usize,
}

/// An edge set together with the sources it separates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    pub edges: Vec<usize>,
    pub separated: SourceSet,
}

impl Cut {
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

impl Network {
    pub fn compile(spec: NetworkSpec) -> Result<Network> {
        if spec.alphabet < 2 {
            return Err(Error::InvalidNetwork(format!(
                "alphabet size must be at least 2, got {}",
                spec.alphabet
            )));
        }
        if spec.sources.is_empty() {
            return Err(Error::InvalidNetwork(
                "at least one source is required".into(),
            ));
        }
        if spec.sources.len() > 63 {
            return Err(Error::InvalidNetwork(
                "at most 63 sources are supported".into(),
            ));
        }
        let lookup = |name: &str| -> Result<usize> {
            spec.nodes
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownNode(name.to_string()))
        };
        for (i, n) in spec.nodes.iter().enumerate() {
            if spec.nodes[..i].contains(n) {
                return Err(Error::DuplicateNode(n.clone()));
            }
        }
        let node_count = spec.nodes.len();
        let receiver = lookup(&spec.receiver)?;
        let mut sources = Vec::with_capacity(spec.sources.len());
        let mut source_index = vec![None; node_count];
        for (i, name) in spec.sources.iter().enumerate() {
            let v = lookup(name)?;
            if source_index[v].is_some() {
                return Err(Error::InvalidNetwork(format!(
                    "source `{name}` listed twice"
                )));
            }
            if v == receiver {
                return Err(Error::ReceiverIsSource(name.clone()));
            }
            source_index[v] = Some(i);
            sources.push(v);
        }
        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut in_edges = vec![Vec::new(); node_count];
        let mut out_edges = vec![Vec::new(); node_count];
        for (idx, (t, h)) in spec.edges.iter().enumerate() {
            let tail = lookup(t)?;
            let head = lookup(h)?;
            if tail == head {
                return Err(Error::CyclicGraph(t.clone()));
            }
            edges.push(Edge { tail, head });
            out_edges[tail].push(idx);
            in_edges[head].push(idx);
        }

        // Kahn's algorithm; ties go to the lowest node index.
        let mut indeg: Vec<usize> = in_edges.iter().map(Vec::len).collect();
        let mut heap: BinaryHeap<Reverse<usize>> = (0..node_count)
            .filter(|&v| indeg[v] == 0)
            .map(Reverse)
            .collect();
        let mut topo = Vec::with_capacity(node_count);
        while let Some(Reverse(v)) = heap.pop() {
            topo.push(v);
            for &e in &out_edges[v] {
                let h = edges[e].head;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    heap.push(Reverse(h));
                }
            }
        }
        if topo.len() < node_count {
            let stuck = (0..node_count).find(|&v| indeg[v] > 0).unwrap();
            return Err(Error::CyclicGraph(spec.nodes[stuck].clone()));
        }

        let mut reaches = vec![false; node_count];
        reaches[receiver] = true;
        for &v in topo.iter().rev() {
            if out_edges[v].iter().any(|&e| reaches[edges[e].head]) {
                reaches[v] = true;
            }
        }
        if let Some(v) = (0..node_count).find(|&v| !reaches[v]) {
            return Err(Error::UnreachableReceiver(spec.nodes[v].clone()));
        }
        if let Some(v) =
            (0..node_count).find(|&v| in_edges[v].is_empty() && source_index[v].is_none())
        {
            return Err(Error::SourcelessLeaf(spec.nodes[v].clone()));
        }

        Ok(Network {
            spec,
            edges,
            in_edges,
            out_edges,
            topo,
            sources,
            source_index,
            receiver,
        })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> u64 {
        self.spec.alphabet
    }

    pub fn node_count(&self) -> usize {
        self.spec.nodes.len()
    }

    pub fn node_name(&self, v: usize) -> &str {
        &self.spec.nodes[v]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `"tail->head"` label for an edge.
    pub fn edge_label(&self, e: usize) -> String {
        let Edge { tail, head } = self.edges[e];
        format!("{}->{}", self.spec.nodes[tail], self.spec.nodes[head])
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn source_count(&self) -> usize {
        self.sources.len()
    }

    /// Node index of source `i` (0-based).
    pub fn source_node(&self, i: usize) -> usize {
        self.sources[i]
    }

    /// Source position of node `v`, if it is a source.
    pub fn source_index(&self, v: usize) -> Option<usize> {
        self.source_index[v]
    }

    pub fn receiver(&self) -> usize {
        self.receiver
    }

    pub fn all_sources(&self) -> SourceSet {
        SourceSet::full(self.sources.len())
    }

    /// Sources with no path to the receiver once the edges flagged in
    /// `removed` are deleted.
    pub fn separated_by(&self, removed: impl Fn(usize) -> bool) -> SourceSet {
        let mut reaches = vec![false; self.node_count()];
        reaches[self.receiver] = true;
        for &v in self.topo.iter().rev() {
            if v == self.receiver {
                continue;
            }
            reaches[v] = self.out_edges[v]
                .iter()
                .any(|&e| !removed(e) && reaches[self.edges[e].head]);
        }
        let mut set = SourceSet::EMPTY;
        for (i, &v) in self.sources.iter().enumerate() {
            if !reaches[v] {
                set.insert(i);
            }
        }
        set
    }

    /// Classifies an edge set. Returns `None` when it separates no source.
    pub fn classify_cut(&self, edge_set: &[usize]) -> Option<Cut> {
        let mut removed = vec![false; self.edge_count()];
        for &e in edge_set {
            removed[e] = true;
        }
        let separated = self.separated_by(|e| removed[e]);
        if separated.is_empty() {
            return None;
        }
        let mut edges = edge_set.to_vec();
        edges.sort_unstable();
        edges.dedup();
        Some(Cut { edges, separated })
    }

    /// All cuts minimal for their separated set, in lexicographic order of
    /// their sorted edge lists.
    pub fn enumerate_cuts(&self, budget: &Budget) -> Result<Vec<Cut>> {
        let m = self.edge_count();
        check_budget("cut enumeration (edges)", m as u128, budget.edges as u128)?;
        if m >= 40 {
            return Err(Error::BudgetExceeded {
                what: "cut enumeration (edges)",
                needed: m as u128,
                budget: 39,
            });
        }
        let total = 1usize << m;
        let mut separated = vec![0u64; total];
        for (mask, slot) in separated.iter_mut().enumerate() {
            *slot = self.separated_by(|e| mask >> e & 1 == 1).0;
        }
        let mut cuts = Vec::new();
        for mask in 1..total {
            let sep = separated[mask];
            if sep == 0 {
                continue;
            }
            let minimal = (0..m)
                .filter(|e| mask >> e & 1 == 1)
                .all(|e| separated[mask ^ (1 << e)] != sep);
            if minimal {
                cuts.push(Cut {
                    edges: (0..m).filter(|e| mask >> e & 1 == 1).collect(),
                    separated: SourceSet(sep),
                });
            }
        }
        cuts.sort_by(|a, b| a.edges.cmp(&b.edges));
        Ok(cuts)
    }

    /// Minimum number of edges disconnecting every source in `j` from the
    /// receiver, with an optimal witness cut. Unit-capacity max-flow from a
    /// virtual super-source; augmenting paths explore lower edge indices
    /// first, so the witness is reproducible.
    pub fn min_edge_cut(&self, j: SourceSet) -> Result<(usize, Cut)> {
        if j.is_empty() {
            return Err(Error::PreconditionViolated(
                "min_edge_cut needs a nonempty source set".into(),
            ));
        }
        let n = self.node_count();
        let mut flow = vec![false; self.edge_count()];
        let starts: Vec<usize> = j.indices().map(|i| self.sources[i]).collect();
        let mut value = 0;
        loop {
            let mut visited = vec![false; n];
            let mut path = Vec::new();
            let found = starts
                .iter()
                .any(|&s| self.augment(s, &mut visited, &mut flow, &mut path));
            if !found {
                break;
            }
            for &(e, forward) in &path {
                flow[e] = forward;
            }
            value += 1;
        }
        // Residual reachability from the super-source.
        let mut reach = vec![false; n];
        let mut stack: Vec<usize> = starts.clone();
        for &s in &starts {
            reach[s] = true;
        }
        while let Some(v) = stack.pop() {
            for &e in &self.out_edges[v] {
                let h = self.edges[e].head;
                if !flow[e] && !reach[h] {
                    reach[h] = true;
                    stack.push(h);
                }
            }
            for &e in &self.in_edges[v] {
                let t = self.edges[e].tail;
                if flow[e] && !reach[t] {
                    reach[t] = true;
                    stack.push(t);
                }
            }
        }
        let witness_edges: Vec<usize> = (0..self.edge_count())
            .filter(|&e| reach[self.edges[e].tail] && !reach[self.edges[e].head])
            .collect();
        debug_assert_eq!(witness_edges.len(), value);
        let witness = self
            .classify_cut(&witness_edges)
            .expect("max-flow witness separates the requested sources");
        debug_assert!(j.is_subset(witness.separated));
        Ok((value, witness))
    }

    fn augment(
        &self,
        v: usize,
        visited: &mut [bool],
        flow: &mut [bool],
        path: &mut Vec<(usize, bool)>,
    ) -> bool {
        if visited[v] {
            return false;
        }
        visited[v] = true;
        if v == self.receiver {
            return true;
        }
        // Merge forward and backward residual arcs by edge index.
        let mut arcs: Vec<(usize, bool)> = self.out_edges[v]
            .iter()
            .filter(|&&e| !flow[e])
            .map(|&e| (e, true))
            .chain(
                self.in_edges[v]
                    .iter()
                    .filter(|&&e| flow[e])
                    .map(|&e| (e, false)),
            )
            .collect();
        arcs.sort_unstable();
        for (e, forward) in arcs {
            let next = if forward {
                self.edges[e].head
            } else {
                self.edges[e].tail
            };
            path.push((e, forward));
            if self.augment(next, visited, flow, path) {
                return true;
            }
            path.pop();
        }
        false
    }

    /// True when every non-receiver node sends all its out-edges to a
    /// single node.
    pub fn is_multi_edge_tree(&self) -> bool {
        (0..self.node_count())
            .filter(|&v| v != self.receiver)
            .all(|v| {
                let heads = self.out_edges[v].iter().map(|&e| self.edges[e].head);
                let mut heads = heads.peekable();
                match heads.peek().copied() {
                    Some(first) => heads.all(|h| h == first),
                    None => true,
                }
            })
    }

    /// True when every non-receiver node is a source.
    pub fn all_non_receivers_are_sources(&self) -> Option<usize> {
        (0..self.node_count()).find(|&v| v != self.receiver && self.source_index[v].is_none())
    }

    /// The network restricted to `edge_set`, keeping the nodes those edges
    /// touch plus every source and the receiver. Node and edge order follow
    /// the parent network.
    pub fn subnetwork(&self, edge_set: &[usize]) -> Result<Network> {
        let mut keep = vec![false; self.node_count()];
        keep[self.receiver] = true;
        for &s in &self.sources {
            keep[s] = true;
        }
        let mut sorted = edge_set.to_vec();
        sorted.sort_unstable();
        for &e in &sorted {
            keep[self.edges[e].tail] = true;
            keep[self.edges[e].head] = true;
        }
        let spec = NetworkSpec {
            nodes: (0..self.node_count())
                .filter(|&v| keep[v])
                .map(|v| self.spec.nodes[v].clone())
                .collect(),
            edges: sorted.iter().map(|&e| self.spec.edges[e].clone()).collect(),
            sources: self.spec.sources.clone(),
            receiver: self.spec.receiver.clone(),
            alphabet: self.spec.alphabet,
        };
        Network::compile(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn exhaustive_min_cut(net: &Network, j: SourceSet) -> usize {
        let m = net.edge_count();
        (0..1usize << m)
            .filter(|mask| j.is_subset(net.separated_by(|e| mask >> e & 1 == 1)))
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn single_edge_compiles() {
        let net = Network::compile(catalog::single_edge(2)).unwrap();
        assert_eq!(net.out_edges(0), &[0]);
        assert_eq!(net.in_edges(net.receiver()), &[0]);
        assert_eq!(net.topo_order(), &[0, 1]);
    }

    #[test]
    fn diamond_compiles() {
        let net = Network::compile(catalog::diamond()).unwrap();
        assert_eq!(net.edge_count(), 4);
        assert_eq!(net.source_count(), 3);
        // σ3 has no in-edges and comes first.
        assert_eq!(net.node_name(net.topo_order()[0]), "s3");
    }

    #[test]
    fn compile_errors() {
        let cyc = NetworkSpec::new(&["s1", "r"], &[("s1", "r"), ("r", "s1")], &["s1"], "r", 2);
        assert!(matches!(Network::compile(cyc), Err(Error::CyclicGraph(_))));

        let dangling = NetworkSpec::new(
            &["s1", "x", "r"],
            &[("s1", "r"), ("s1", "x")],
            &["s1"],
            "r",
            2,
        );
        assert_eq!(
            Network::compile(dangling),
            Err(Error::UnreachableReceiver("x".into()))
        );

        let leaf = NetworkSpec::new(
            &["s1", "x", "r"],
            &[("s1", "r"), ("x", "r")],
            &["s1"],
            "r",
            2,
        );
        assert_eq!(
            Network::compile(leaf),
            Err(Error::SourcelessLeaf("x".into()))
        );

        let rs = NetworkSpec::new(&["s1", "r"], &[("s1", "r")], &["s1", "r"], "r", 2);
        assert_eq!(
            Network::compile(rs),
            Err(Error::ReceiverIsSource("r".into()))
        );

        let unknown = NetworkSpec::new(&["s1", "r"], &[("s1", "z")], &["s1"], "r", 2);
        assert_eq!(
            Network::compile(unknown),
            Err(Error::UnknownNode("z".into()))
        );
    }

    #[test]
    fn classify_on_diamond() {
        let net = Network::compile(catalog::diamond()).unwrap();
        // edges: 0 s3->s1, 1 s3->s2, 2 s1->r, 3 s2->r
        let c = net.classify_cut(&[2, 3]).unwrap();
        assert_eq!(c.separated, SourceSet::full(3));
        assert!(net.classify_cut(&[0]).is_none());
        let single = Network::compile(catalog::single_edge(2)).unwrap();
        assert_eq!(
            single.classify_cut(&[0]).unwrap().separated,
            SourceSet::singleton(0)
        );
    }

    #[test]
    fn enumerate_small_networks() {
        let single = Network::compile(catalog::single_edge(2)).unwrap();
        let cuts = single.enumerate_cuts(&Budget::default()).unwrap();
        assert_eq!(
            cuts,
            vec![Cut {
                edges: vec![0],
                separated: SourceSet::singleton(0)
            }]
        );

        let diamond = Network::compile(catalog::diamond()).unwrap();
        let cuts = diamond.enumerate_cuts(&Budget::default()).unwrap();
        assert!(cuts.contains(&Cut {
            edges: vec![2, 3],
            separated: SourceSet::full(3)
        }));
        assert!(cuts.contains(&Cut {
            edges: vec![2],
            separated: SourceSet::singleton(0)
        }));

        let n3 = Network::compile(catalog::n3()).unwrap();
        let cuts = n3.enumerate_cuts(&Budget::default()).unwrap();
        let last = n3.in_edges(n3.receiver())[0];
        assert!(cuts.contains(&Cut {
            edges: vec![last],
            separated: SourceSet::full(3)
        }));
    }

    #[test]
    fn enumeration_respects_budget() {
        let net = Network::compile(catalog::diamond()).unwrap();
        let budget = Budget {
            edges: 3,
            ..Budget::default()
        };
        assert!(matches!(
            net.enumerate_cuts(&budget),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn min_edge_cut_examples() {
        let diamond = Network::compile(catalog::diamond()).unwrap();
        let (size, witness) = diamond.min_edge_cut(SourceSet::full(3)).unwrap();
        assert_eq!(size, 2);
        assert_eq!(witness.edges, vec![2, 3]);
        assert_eq!(size, exhaustive_min_cut(&diamond, SourceSet::full(3)));

        let n2 = Network::compile(catalog::n2()).unwrap();
        assert_eq!(n2.min_edge_cut(SourceSet::full(2)).unwrap().0, 2);

        let n3 = Network::compile(catalog::n3()).unwrap();
        assert_eq!(n3.min_edge_cut(SourceSet::singleton(2)).unwrap().0, 1);
    }

    #[test]
    fn min_edge_cut_matches_exhaustive_on_corpus() {
        for spec in catalog::corpus() {
            let net = Network::compile(spec).unwrap();
            for j in SourceSet::nonempty_subsets(net.source_count()) {
                let (size, witness) = net.min_edge_cut(j).unwrap();
                assert_eq!(size, exhaustive_min_cut(&net, j));
                assert_eq!(witness.size(), size);
                assert!(j.is_subset(witness.separated));
            }
        }
    }

    #[test]
    fn multi_edge_tree_detection() {
        assert!(Network::compile(catalog::n3())
            .unwrap()
            .is_multi_edge_tree());
        assert!(!Network::compile(catalog::diamond())
            .unwrap()
            .is_multi_edge_tree());
        assert!(Network::compile(catalog::single_edge(2))
            .unwrap()
            .is_multi_edge_tree());
    }

    #[test]
    fn source_set_display() {
        assert_eq!(SourceSet::from_indices([0, 2]).to_string(), "{1,3}");
        assert_eq!(SourceSet::EMPTY.to_string(), "{}");
    }
}
