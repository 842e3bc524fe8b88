//! Builtin example networks and random generators for property runs.
//!
//! Node names are ASCII: `s1..ss` for sources, `r` for the receiver,
//! `n1..` for relays, `s0` for the shared relay of the N(M,L) family.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bounds::nml::build_nml;
use crate::network::NetworkSpec;

/// `s1 -> r`.
pub fn single_edge(q: u64) -> NetworkSpec {
    NetworkSpec::new(&["s1", "r"], &[("s1", "r")], &["s1"], "r", q)
}

/// `s1 -> r` twice.
pub fn parallel_pair(q: u64) -> NetworkSpec {
    NetworkSpec::new(&["s1", "r"], &[("s1", "r"), ("s1", "r")], &["s1"], "r", q)
}

/// Two sources each with one edge into the receiver.
pub fn two_sources(q: u64) -> NetworkSpec {
    NetworkSpec::new(
        &["s1", "s2", "r"],
        &[("s1", "r"), ("s2", "r")],
        &["s1", "s2"],
        "r",
        q,
    )
}

/// The diamond network: `s3` feeds `s1` and `s2`, which each have one edge
/// into the receiver.
pub fn diamond() -> NetworkSpec {
    NetworkSpec::new(
        &["s1", "s2", "s3", "r"],
        &[("s3", "s1"), ("s3", "s2"), ("s1", "r"), ("s2", "r")],
        &["s1", "s2", "s3"],
        "r",
        2,
    )
}

/// Reverse butterfly: the edge reversal of the classic butterfly with two
/// sources and one receiver.
pub fn n2() -> NetworkSpec {
    NetworkSpec::new(
        &["s1", "s2", "n1", "n2", "n3", "n4", "r"],
        &[
            ("s1", "n1"),
            ("s1", "n4"),
            ("s2", "n2"),
            ("s2", "n4"),
            ("n4", "n3"),
            ("n3", "n1"),
            ("n3", "n2"),
            ("n1", "r"),
            ("n2", "r"),
        ],
        &["s1", "s2"],
        "r",
        2,
    )
}

/// Line `s1 -> s2 -> s3 -> r`.
pub fn n3() -> NetworkSpec {
    line(3)
}

/// Line `s1 -> s2 -> ... -> ss -> r`.
pub fn line(s: usize) -> NetworkSpec {
    let names: Vec<String> = (1..=s).map(|i| format!("s{i}")).collect();
    let mut nodes = names.clone();
    nodes.push("r".into());
    let edges = nodes
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    NetworkSpec {
        nodes,
        edges,
        sources: names,
        receiver: "r".into(),
        alphabet: 2,
    }
}

/// Every builtin topology used by the consistency sweeps.
pub fn corpus() -> Vec<NetworkSpec> {
    let mut out = vec![
        single_edge(2),
        parallel_pair(2),
        two_sources(2),
        diamond(),
        n2(),
        n3(),
        line(2),
        line(4),
    ];
    for m in 1..=3 {
        for l in 1..=2 {
            out.push(build_nml(m, l));
        }
    }
    out
}

/// Random single-receiver DAG with at most `max_edges` edges and between 1
/// and `max_sources` sources, binary alphabet.
pub fn random_dag<R: Rng>(rng: &mut R, max_sources: usize, max_edges: usize) -> NetworkSpec {
    loop {
        let s = rng.gen_range(1..=max_sources);
        let relays = rng.gen_range(0..=2);
        let mut order: Vec<String> = (1..=s)
            .map(|i| format!("s{i}"))
            .chain((1..=relays).map(|i| format!("n{i}")))
            .collect();
        order.shuffle(rng);
        // A relay cannot come first: it would have no in-edges.
        if order[0].starts_with('n') {
            let pos = order.iter().position(|x| x.starts_with('s')).unwrap();
            order.swap(0, pos);
        }
        order.push("r".into());
        let last = order.len() - 1;
        let mut edges: Vec<(String, String)> = Vec::new();
        for i in 0..last {
            let j = rng.gen_range(i + 1..=last);
            edges.push((order[i].clone(), order[j].clone()));
            if order[i].starts_with('n') {
                let k = rng.gen_range(0..i);
                edges.push((order[k].clone(), order[i].clone()));
            }
        }
        if edges.len() > max_edges {
            continue;
        }
        let extra = rng.gen_range(0..=max_edges - edges.len());
        for _ in 0..extra {
            let i = rng.gen_range(0..last);
            let j = rng.gen_range(i + 1..=last);
            edges.push((order[i].clone(), order[j].clone()));
        }
        let mut nodes: Vec<String> = (1..=s).map(|i| format!("s{i}")).collect();
        nodes.extend((1..=relays).map(|i| format!("n{i}")));
        nodes.push("r".into());
        return NetworkSpec {
            nodes,
            edges,
            sources: (1..=s).map(|i| format!("s{i}")).collect(),
            receiver: "r".into(),
            alphabet: 2,
        };
    }
}

/// Random multi-edge tree with at most `max_nodes` non-receiver nodes and
/// at most `max_sources` sources over alphabet `q`.
pub fn random_multi_edge_tree<R: Rng>(
    rng: &mut R,
    max_nodes: usize,
    max_sources: usize,
    q: u64,
) -> NetworkSpec {
    loop {
        let m = rng.gen_range(1..=max_nodes);
        let parent: Vec<usize> = (0..m).map(|v| rng.gen_range(v + 1..=m)).collect();
        let mut has_child = vec![false; m + 1];
        for &p in &parent {
            has_child[p] = true;
        }
        let leaves: Vec<usize> = (0..m).filter(|&v| !has_child[v]).collect();
        if leaves.len() > max_sources {
            continue;
        }
        let mut is_source = vec![false; m];
        for &v in &leaves {
            is_source[v] = true;
        }
        let mut count = leaves.len();
        for v in 0..m {
            if !is_source[v] && count < max_sources && rng.gen_bool(0.4) {
                is_source[v] = true;
                count += 1;
            }
        }
        let name = |v: usize| {
            if v == m {
                "r".to_string()
            } else {
                format!("v{v}")
            }
        };
        let mut edges = Vec::new();
        for v in 0..m {
            let mult = rng.gen_range(1..=2);
            for _ in 0..mult {
                edges.push((name(v), name(parent[v])));
            }
        }
        return NetworkSpec {
            nodes: (0..=m).map(name).collect(),
            edges,
            sources: (0..m).filter(|&v| is_source[v]).map(name).collect(),
            receiver: "r".into(),
            alphabet: q,
        };
    }
}
