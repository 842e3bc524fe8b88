use std::collections::BTreeSet;

use netfuncap_core::bounds::{bounds_report, min_cut_f};
use netfuncap_core::codes::serial::{from_json, to_json};
use netfuncap_core::codes::tree::best_tree_rate;
use netfuncap_core::codes::{tree_code, tree_rate_bound, verify_code};
use netfuncap_core::sumset::{binary_entropy, compress, gamma, phi_j, q_sumset};
use netfuncap_core::{
    catalog, BlockFamily, Budget, FunctionKind, Network, SourceSet, TargetFunction, DEFAULT_TOL,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table_function() -> impl Strategy<Value = TargetFunction> {
    (1usize..=3, 2u64..=3)
        .prop_flat_map(|(s, q)| {
            let size = q.pow(s as u32) as usize;
            (Just(s), Just(q), prop::collection::vec(0u64..4, size))
        })
        .prop_filter_map("function ignores an argument", |(s, q, values)| {
            TargetFunction::new(FunctionKind::Table(values), s, q).ok()
        })
}

fn builtin_function() -> impl Strategy<Value = FunctionKind> {
    prop_oneof![
        Just(FunctionKind::ArithmeticSum),
        Just(FunctionKind::ModSum(2)),
        Just(FunctionKind::Maximum),
        Just(FunctionKind::Minimum),
        Just(FunctionKind::Identity),
        Just(FunctionKind::Histogram),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Classes agree with the pairwise definition: `a ~ b` iff they give
    /// the same value against every completion.
    #[test]
    fn classes_match_pairwise_definition(f in table_function()) {
        let (s, q) = (f.arity(), f.alphabet());
        for set in SourceSet::nonempty_subsets(s) {
            let fp = f.footprint(set).unwrap();
            let inside: Vec<usize> = set.indices().collect();
            let outside: Vec<usize> = (0..s).filter(|i| !set.contains(*i)).collect();
            let spread = |a: u64, c: u64| {
                let mut x = vec![0; s];
                let (mut a, mut c) = (a, c);
                for &i in inside.iter().rev() { x[i] = a % q; a /= q; }
                for &i in outside.iter().rev() { x[i] = c % q; c /= q; }
                x
            };
            let na = q.pow(inside.len() as u32);
            let nc = q.pow(outside.len() as u32);
            for a in 0..na {
                for b in 0..na {
                    let same = (0..nc).all(|c| {
                        f.evaluate(&spread(a, c)).unwrap() == f.evaluate(&spread(b, c)).unwrap()
                    });
                    prop_assert_eq!(same, fp.class(a) == fp.class(b));
                }
            }
            let distinct: BTreeSet<u32> = fp.class_of.iter().copied().collect();
            prop_assert_eq!(distinct.len() as u64, fp.class_count);
        }
    }

    /// On multi-edge trees the best tree code verifies, never beats the
    /// cut-set bound, and the tree rate meets it.
    #[test]
    fn tree_codes_meet_the_cut_bound(seed in any::<u64>(), kind in builtin_function()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = catalog::random_multi_edge_tree(&mut rng, 4, 3, 2);
        let net = Network::compile(spec).unwrap();
        let b = Budget::default();
        let f = TargetFunction::new(kind, net.source_count(), 2).unwrap();
        let upper = min_cut_f(&net, &f, &b).unwrap().value;
        let tree = tree_rate_bound(&net, &f).unwrap();
        prop_assert!((upper - tree).abs() < 1e-9, "upper {} tree {}", upper, tree);
        if let Some((k, n)) = best_tree_rate(&net, &f, 3).unwrap() {
            prop_assert!(k as f64 / n as f64 <= upper + 1e-9);
            let code = tree_code(&net, &f, k, n, &b).unwrap();
            prop_assert!(verify_code(&net, &f, &code, &b).unwrap().pass);
            prop_assert_eq!(from_json(&to_json(&code).unwrap()).unwrap(), code);
        }
    }

    #[test]
    fn lower_bounds_never_exceed_upper(seed in any::<u64>(), kind in builtin_function()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = catalog::random_dag(&mut rng, 3, 9);
        let net = Network::compile(spec).unwrap();
        let f = TargetFunction::new(kind, net.source_count(), 2).unwrap();
        let r = bounds_report(&net, &f, &Budget::default(), DEFAULT_TOL).unwrap();
        for l in &r.lowers {
            prop_assert!(l.value <= r.upper + DEFAULT_TOL, "{} {} > {}", l.tag, l.value, r.upper);
        }
        prop_assert!(r.best_lower <= r.upper + DEFAULT_TOL);
        prop_assert!(r.packing >= 1.0 - 1e-9);
    }

    #[test]
    fn compression_preserves_size_and_is_idempotent(
        k in 1usize..=4,
        raw in prop::collection::vec(prop::collection::btree_set(0u32..16, 1..8), 1..=3),
    ) {
        let sets: Vec<BTreeSet<u32>> = raw
            .into_iter()
            .map(|a| a.into_iter().map(|v| v & ((1 << k) - 1)).collect())
            .collect();
        let fam = BlockFamily::new(k, sets).unwrap();
        for a in &fam.sets {
            for j in 1..=k {
                prop_assert_eq!(phi_j(a, j).len(), a.len());
            }
        }
        let once = compress(&fam);
        prop_assert_eq!(compress(&once), once.clone());
        let b = Budget::default();
        prop_assert!(q_sumset(&once, &b).unwrap().len() <= q_sumset(&fam, &b).unwrap().len());
    }

    #[test]
    fn gamma_inverts_entropy(x in 1.0f64..50.0) {
        let y = gamma(x).unwrap();
        prop_assert!((0.0..=0.5).contains(&y));
        prop_assert!((binary_entropy(y) - 0.5 * (1.0 - 1.0 / x)).abs() < 1e-10);
    }
}

#[test]
fn gamma_on_grid() {
    let mut prev = -1.0;
    for i in 0..=90 {
        let x = 1.0 + i as f64 * 0.1;
        let y = gamma(x).unwrap();
        assert!((binary_entropy(y) - 0.5 * (1.0 - 1.0 / x)).abs() < 1e-10);
        assert!(y > prev);
        prev = y;
    }
}
