//! Shared inputs for the criterion benches.

use netfuncap_core::{catalog, FunctionKind, Network, NetworkSpec, TargetFunction};

/// A compiled builtin network with the binary arithmetic sum of its sources.
pub fn with_sum(spec: NetworkSpec) -> (Network, TargetFunction) {
    let net = Network::compile(spec).expect("builtin network compiles");
    let f = TargetFunction::new(
        FunctionKind::ArithmeticSum,
        net.source_count(),
        net.alphabet(),
    )
    .expect("arithmetic sum is valid");
    (net, f)
}

/// Named workloads for the bound computations.
pub fn bound_cases() -> Vec<(&'static str, Network, TargetFunction)> {
    vec![
        ("n2", catalog::n2()),
        ("n3", catalog::n3()),
        ("diamond", catalog::diamond()),
        ("nml_3_2", netfuncap_core::bounds::build_nml(3, 2)),
        ("nml_4_3", netfuncap_core::bounds::build_nml(4, 3)),
    ]
    .into_iter()
    .map(|(name, spec)| {
        let (net, f) = with_sum(spec);
        (name, net, f)
    })
    .collect()
}
