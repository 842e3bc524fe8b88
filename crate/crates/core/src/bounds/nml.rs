//! The N(M,L) family: `M` binary sources with a direct edge each to the
//! receiver and `L` parallel edges each into a shared relay `s0`, which in
//! turn has `L` parallel edges to the receiver. Its cut-set bound grows
//! without limit in `M` while its arithmetic-sum capacity stays near 1.

use crate::network::NetworkSpec;
use crate::sumset::gamma;

/// Edge order: the direct edges `(si, r)`, then the `L` copies of
/// `(si, s0)` for each `i`, then the `L` copies of `(s0, r)`.
pub fn build_nml(m: usize, l: usize) -> NetworkSpec {
    assert!(m >= 1 && l >= 1, "N(M,L) needs M, L >= 1");
    let sources: Vec<String> = (1..=m).map(|i| format!("s{i}")).collect();
    let mut nodes = sources.clone();
    nodes.push("s0".into());
    nodes.push("r".into());
    let mut edges = Vec::with_capacity(m + m * l + l);
    for s in &sources {
        edges.push((s.clone(), "r".to_string()));
    }
    for s in &sources {
        for _ in 0..l {
            edges.push((s.clone(), "s0".to_string()));
        }
    }
    for _ in 0..l {
        edges.push(("s0".to_string(), "r".to_string()));
    }
    NetworkSpec {
        nodes,
        edges,
        sources,
        receiver: "r".into(),
        alphabet: 2,
    }
}

/// `min over 1 <= m <= M of (L+m)/log2(m+1)` and the smallest minimizing `m`.
pub fn mincut_nml_closed_form(m: usize, l: usize) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for j in 1..=m {
        let v = (l + j) as f64 / ((j + 1) as f64).log2();
        if v < best.0 - 1e-12 {
            best = (v, j);
        }
    }
    best
}

/// Largest `r >= 1` with `r * gamma(r) <= L / log2(M+1)`: an upper bound on
/// the arithmetic-sum capacity of N(M,L) whenever that capacity exceeds 1.
pub fn rate_upper_nml(m: usize, l: usize) -> f64 {
    let target = l as f64 / ((m + 1) as f64).log2();
    let g = |r: f64| r * gamma(r).expect("r >= 1");
    let mut lo = 1.0;
    let mut hi = 2.0;
    while g(hi) <= target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
