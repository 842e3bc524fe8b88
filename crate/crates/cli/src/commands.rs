use std::fmt::Write as _;
use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use netfuncap_core::bounds::{
    bounds_report, build_nml, min_cut_f, mincut_nml_closed_form, rate_upper_nml, steiner_packing,
};
use netfuncap_core::codes::diamond::{diamond_function, is_diamond};
use netfuncap_core::codes::serial::{from_json, to_json};
use netfuncap_core::codes::tree::best_tree_rate;
use netfuncap_core::codes::{
    diamond_block_length, diamond_capacity, diamond_code, reverse_butterfly_xor_code, search_code,
    tree_code, SearchOutcome,
};
use netfuncap_core::sumset::appendix_suite;
use netfuncap_core::{
    codes, Budget, FunctionKind, Network, NetworkCode, NetworkSpec, SourceSet, TargetFunction,
    VerificationOutcome,
};
use serde_json::{json, Value};

use crate::args::{Args, Command};
use crate::input::{
    builtin_example, emit_function, emit_network, parse_function, parse_network, ExampleParams,
};

/// A finished report: both renderings are built before anything is printed.
pub struct Report {
    pub text: String,
    pub data: Value,
}

/// Largest `n` tried when `tree-code` picks the rate itself.
const TREE_MAX_N: usize = 12;

/// Validated run configuration.
pub struct RunConfig {
    pub args: Args,
    pub budget: Budget,
}

impl RunConfig {
    pub fn new(args: Args) -> Result<Self> {
        if !(args.tol > 0.0 && args.tol <= 1e-3) {
            bail!("--tol must be in (0, 1e-3], got {}", args.tol);
        }
        let mut budget = Budget::default();
        if let Some(e) = args.budget_edges {
            if e == 0 {
                bail!("--budget-edges must be positive");
            }
            budget.edges = e;
        }
        if let Some(s) = args.budget_states {
            if s == 0 {
                bail!("--budget-states must be positive");
            }
            budget.states = s;
        }
        Ok(RunConfig { args, budget })
    }
}

struct Problem {
    label: String,
    net: Network,
    f: TargetFunction,
}

fn example_params(args: &Args) -> ExampleParams {
    ExampleParams {
        q: args.q,
        s: args.s,
        m: args.m,
        l: args.l,
    }
}

/// Network and function from the flags, falling back to `default_example`
/// and `default_function` when none are given.
fn load_problem(
    cfg: &RunConfig,
    default_example: Option<&str>,
    default_function: Option<&str>,
) -> Result<Problem> {
    let args = &cfg.args;
    let (label, spec, f) = if let Some(path) = &args.network {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading network {}", path.display()))?;
        let spec = parse_network(&text)?;
        (path.display().to_string(), spec, None)
    } else {
        let name = args
            .example
            .as_deref()
            .or(default_example)
            .ok_or_else(|| anyhow!("give --example or --network"))?;
        let (spec, f) = builtin_example(name, example_params(args), &cfg.budget)?;
        (name.to_string(), spec, Some(f))
    };
    let (s, q) = (spec.sources.len(), spec.alphabet);
    let f = match args.function.as_deref().or(default_function) {
        Some(text) => function_from_flag(text, s, q, &cfg.budget)?,
        None => match f {
            Some(f) => f,
            None => TargetFunction::with_budget(FunctionKind::ArithmeticSum, s, q, &cfg.budget)?,
        },
    };
    let net = Network::compile(spec)?;
    Ok(Problem { label, net, f })
}

fn function_from_flag(text: &str, s: usize, q: u64, budget: &Budget) -> Result<TargetFunction> {
    let path = std::path::Path::new(text);
    if !text.trim_start().starts_with('{') && path.is_file() {
        let doc = fs::read_to_string(path)?;
        return Ok(parse_function(&doc, s, q, budget)?);
    }
    Ok(parse_function(text, s, q, budget)?)
}

fn describe(p: &Problem) -> (String, Value) {
    let net = &p.net;
    let text = format!(
        "network:  {} ({} nodes, {} edges, {} sources, q={})\nfunction: {}\n",
        p.label,
        net.node_count(),
        net.edge_count(),
        net.source_count(),
        net.alphabet(),
        emit_function(&p.f),
    );
    let data = json!({
        "name": p.label,
        "nodes": net.node_count(),
        "edges": net.edge_count(),
        "sources": net.source_count(),
        "alphabet": net.alphabet(),
        "function": p.f.kind().name(),
    });
    (text, data)
}

fn edge_list(net: &Network, edges: &[usize]) -> Vec<String> {
    edges.iter().map(|&e| net.edge_label(e)).collect()
}

fn envelope(command: &str, problem: Option<Value>, result: Value) -> Value {
    let mut data = json!({ "schema": "v1", "command": command, "result": result });
    if let Some(p) = problem {
        data["problem"] = p;
    }
    data
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    match cfg.args.command {
        Command::Bounds => bounds(cfg),
        Command::Footprint => footprint(cfg),
        Command::Steiner => steiner(cfg),
        Command::TreeCode => tree(cfg),
        Command::DiamondCode => diamond(cfg),
        Command::XorCode => xor(cfg),
        Command::SearchCode => search(cfg),
        Command::VerifyCode => verify(cfg),
        Command::Gap => gap(cfg),
        Command::AppendixCheck { families } => appendix(cfg, families),
        Command::Export => export(cfg),
    }
}

fn bounds(cfg: &RunConfig) -> Result<Report> {
    let p = load_problem(cfg, None, None)?;
    let mut r = bounds_report(&p.net, &p.f, &cfg.budget, cfg.args.tol)?;
    if is_diamond(&p.net) && p.f.kind() == diamond_function().kind() && p.f.alphabet() == 2 {
        r.add_construction(
            diamond_capacity(),
            "2/(1+log2(3))",
            "diamond code family, rate k/n approaches this from below",
        )?;
    }
    let (mut text, problem) = describe(&p);
    let witness = edge_list(&p.net, &r.witness.edges);
    writeln!(text, "upper:    {:.6}  {}", r.upper, r.upper_symbolic)?;
    writeln!(
        text,
        "witness:  [{}] separating {} with footprint {}",
        witness.join(", "),
        r.witness.separated,
        r.witness_footprint
    )?;
    writeln!(text, "flow diagnostic: {:.6}", r.flow_diagnostic)?;
    writeln!(text, "classic min-cut: {:.6}", r.classic_min_cut)?;
    writeln!(text, "steiner packing: {:.6}", r.packing)?;
    writeln!(
        text,
        "min |C|: {}  max R(I_C,f): {}",
        r.min_cut_size, r.max_footprint
    )?;
    writeln!(text, "lower bounds:")?;
    for l in &r.lowers {
        let cite = if l.citation_backed { "  [cited]" } else { "" };
        writeln!(
            text,
            "  {:<17} {:.6}  {}  ({}){}",
            l.tag, l.value, l.symbolic, l.note, cite
        )?;
    }
    if !r.skipped.is_empty() {
        writeln!(text, "not applicable:")?;
        for s in &r.skipped {
            writeln!(text, "  {:<17} {}", s.tag, s.reason)?;
        }
    }
    writeln!(text, "best lower: {:.6} ({})", r.best_lower, r.best_tag)?;
    writeln!(text, "gap:        {:.6}", r.gap())?;
    writeln!(text, "certified:  {}", r.certified)?;

    let lowers: Vec<Value> = r
        .lowers
        .iter()
        .map(|l| {
            json!({
                "tag": l.tag,
                "value": l.value,
                "symbolic": l.symbolic,
                "note": l.note,
                "citation_backed": l.citation_backed,
            })
        })
        .collect();
    let skipped: Vec<Value> = r
        .skipped
        .iter()
        .map(|s| json!({ "tag": s.tag, "reason": s.reason }))
        .collect();
    let result = json!({
        "upper": r.upper,
        "upper_symbolic": r.upper_symbolic,
        "witness": { "edges": witness, "separated": r.witness.separated.to_string(), "footprint": r.witness_footprint },
        "flow_diagnostic": r.flow_diagnostic,
        "classic_min_cut": r.classic_min_cut,
        "packing": r.packing,
        "min_cut_size": r.min_cut_size,
        "max_footprint": r.max_footprint,
        "lowers": lowers,
        "skipped": skipped,
        "best_lower": r.best_lower,
        "best_tag": r.best_tag,
        "gap": r.gap(),
        "certified": r.certified,
        "tol": r.tol,
    });
    Ok(Report {
        text,
        data: envelope("bounds", Some(problem), result),
    })
}

fn footprint(cfg: &RunConfig) -> Result<Report> {
    let p = load_problem(cfg, None, None)?;
    let (mut text, problem) = describe(&p);
    let sizes = p.f.footprint_sizes();
    writeln!(text, "{:<12} R(I,f)", "I")?;
    let mut rows = Vec::new();
    for set in SourceSet::nonempty_subsets(p.f.arity()) {
        let r = sizes[set.0 as usize];
        writeln!(text, "{:<12} {}", set.to_string(), r)?;
        rows.push(json!({ "set": set.to_string(), "footprint": r }));
    }
    let (lexp, at_exp) = p.f.lambda_exponential_index();
    let (lbdd, at_bdd) = p.f.lambda_bounded_index();
    writeln!(text, "range |f(A^s)|: {}", p.f.range_size())?;
    writeln!(text, "lambda exp: {:.6} at {}", lexp, at_exp)?;
    writeln!(text, "lambda bdd: {:.6} at {}", lbdd, at_bdd)?;
    writeln!(text, "symmetric: {}", p.f.is_symmetric())?;
    let result = json!({
        "rows": rows,
        "range": p.f.range_size(),
        "lambda_exp": { "value": lexp, "at": at_exp.to_string() },
        "lambda_bdd": { "value": lbdd, "at": at_bdd.to_string() },
        "symmetric": p.f.is_symmetric(),
    });
    Ok(Report {
        text,
        data: envelope("footprint", Some(problem), result),
    })
}

fn steiner(cfg: &RunConfig) -> Result<Report> {
    let p = load_problem(cfg, None, None)?;
    let packing = steiner_packing(&p.net, &cfg.budget)?;
    let (mut text, problem) = describe(&p);
    writeln!(text, "trees: {}", packing.trees.len())?;
    writeln!(text, "packing: {:.6}", packing.value)?;
    let mut trees = Vec::new();
    for (t, &w) in packing.trees.iter().zip(&packing.weights) {
        let edges = edge_list(&p.net, t);
        if w > 1e-12 {
            writeln!(text, "  {:.6}  [{}]", w, edges.join(", "))?;
        }
        trees.push(json!({ "edges": edges, "weight": w }));
    }
    let result = json!({ "value": packing.value, "trees": trees });
    Ok(Report {
        text,
        data: envelope("steiner", Some(problem), result),
    })
}

/// Verifies `code`, writes it to `--out` if asked, and renders both.
fn code_report(
    cfg: &RunConfig,
    command: &str,
    p: &Problem,
    code: &NetworkCode,
    mut extra: Vec<(&str, Value, String)>,
) -> Result<Report> {
    let outcome = codes::verify_code(&p.net, &p.f, code, &cfg.budget)?;
    if let Some(path) = &cfg.args.out {
        fs::write(path, to_json(code)?).with_context(|| format!("writing {}", path.display()))?;
        extra.push((
            "written_to",
            json!(path.display().to_string()),
            path.display().to_string(),
        ));
    }
    let (mut text, problem) = describe(p);
    writeln!(
        text,
        "code:     k={} n={} rate {:.6}",
        code.k,
        code.n,
        code.rate()
    )?;
    for (key, _, shown) in &extra {
        writeln!(text, "{key}: {shown}")?;
    }
    render_outcome(&mut text, &outcome)?;
    let mut result = json!({
        "k": code.k,
        "n": code.n,
        "rate": code.rate(),
        "verification": outcome_json(&outcome),
    });
    for (key, value, _) in extra {
        result[key] = value;
    }
    if !outcome.pass {
        return Err(anyhow!("{text}verification failed"));
    }
    Ok(Report {
        text,
        data: envelope(command, Some(problem), result),
    })
}

fn render_outcome(text: &mut String, o: &VerificationOutcome) -> std::fmt::Result {
    writeln!(
        text,
        "verify:   {} over {} generators",
        if o.pass { "pass" } else { "FAIL" },
        o.checked_count
    )?;
    if let Some(cx) = &o.counterexample {
        writeln!(text, "counterexample: {cx:?}")?;
    }
    Ok(())
}

fn outcome_json(o: &VerificationOutcome) -> Value {
    json!({
        "pass": o.pass,
        "checked": o.checked_count,
        "counterexample": o.counterexample,
    })
}

fn tree(cfg: &RunConfig) -> Result<Report> {
    let p = load_problem(cfg, None, None)?;
    let (k, n, chosen) = match (cfg.args.k, cfg.args.n) {
        (Some(k), Some(n)) => (k, n, false),
        (None, None) => {
            let (k, n) = best_tree_rate(&p.net, &p.f, TREE_MAX_N)?
                .ok_or_else(|| anyhow!("no feasible rate with n <= {TREE_MAX_N}"))?;
            (k, n, true)
        }
        _ => bail!("give both --k and --n, or neither"),
    };
    let bound = codes::tree_rate_bound(&p.net, &p.f)?;
    let code = tree_code(&p.net, &p.f, k, n, &cfg.budget)?;
    let extra = vec![
        ("rate_bound", json!(bound), format!("{bound:.6}")),
        ("rate_chosen", json!(chosen), chosen.to_string()),
    ];
    code_report(cfg, "tree-code", &p, &code, extra)
}

fn diamond(cfg: &RunConfig) -> Result<Report> {
    let p = load_problem(cfg, Some("diamond"), None)?;
    if !is_diamond(&p.net) {
        bail!("diamond-code needs the diamond network");
    }
    let k = cfg.args.k.unwrap_or(2);
    let n = diamond_block_length(k)?;
    let code = diamond_code(k, &cfg.budget)?;
    let cap = diamond_capacity();
    let extra = vec![
        ("block_length", json!(n), n.to_string()),
        ("capacity", json!(cap), format!("{cap:.6}  2/(1+log2(3))")),
    ];
    code_report(cfg, "diamond-code", &p, &code, extra)
}

fn xor(cfg: &RunConfig) -> Result<Report> {
    let p = load_problem(cfg, Some("N2"), Some("mod_sum(2)"))?;
    let code = reverse_butterfly_xor_code();
    let upper = min_cut_f(&p.net, &p.f, &cfg.budget)?;
    let extra = vec![(
        "upper",
        json!(upper.value),
        format!("{:.6}  {}", upper.value, upper.symbolic),
    )];
    code_report(cfg, "xor-code", &p, &code, extra)
}

fn search(cfg: &RunConfig) -> Result<Report> {
    let p = load_problem(cfg, None, None)?;
    let (k, n) = match (cfg.args.k, cfg.args.n) {
        (Some(k), Some(n)) => (k, n),
        _ => bail!("search-code needs --k and --n"),
    };
    let outcome = search_code(&p.net, &p.f, k, n, &cfg.budget)?;
    let (mut text, problem) = describe(&p);
    let result = match &outcome {
        SearchOutcome::Found(code) => {
            let v = codes::verify_code(&p.net, &p.f, code, &cfg.budget)?;
            writeln!(text, "search ({k}, {n}): found")?;
            render_outcome(&mut text, &v)?;
            if let Some(path) = &cfg.args.out {
                fs::write(path, to_json(code)?)?;
                writeln!(text, "written_to: {}", path.display())?;
            }
            json!({ "k": k, "n": n, "outcome": "found", "verification": outcome_json(&v) })
        }
        SearchOutcome::Infeasible => {
            writeln!(text, "search ({k}, {n}): infeasible")?;
            json!({ "k": k, "n": n, "outcome": "infeasible" })
        }
        SearchOutcome::BudgetExhausted { explored } => {
            writeln!(
                text,
                "search ({k}, {n}): budget exhausted after {explored} nodes"
            )?;
            json!({ "k": k, "n": n, "outcome": "budget_exhausted", "explored": explored })
        }
    };
    Ok(Report {
        text,
        data: envelope("search-code", Some(problem), result),
    })
}

fn verify(cfg: &RunConfig) -> Result<Report> {
    let path = cfg
        .args
        .code
        .as_ref()
        .ok_or_else(|| anyhow!("verify-code needs --code"))?;
    let text =
        fs::read_to_string(path).with_context(|| format!("reading code {}", path.display()))?;
    let code = from_json(&text)?;
    let p = load_problem(cfg, None, None)?;
    let outcome = codes::verify_code(&p.net, &p.f, &code, &cfg.budget)?;
    let (mut text, problem) = describe(&p);
    writeln!(
        text,
        "code:     k={} n={} rate {:.6}",
        code.k,
        code.n,
        code.rate()
    )?;
    render_outcome(&mut text, &outcome)?;
    if !outcome.pass {
        return Err(anyhow!("{text}verification failed"));
    }
    let result = json!({
        "k": code.k,
        "n": code.n,
        "rate": code.rate(),
        "verification": outcome_json(&outcome),
    });
    Ok(Report {
        text,
        data: envelope("verify-code", Some(problem), result),
    })
}

/// Enumerated cut-set bound, when N(M,L) is small enough to enumerate.
fn enumerated_nml(m: usize, l: usize, budget: &Budget) -> Result<Option<f64>> {
    let spec: NetworkSpec = build_nml(m, l);
    if spec.edges.len() > budget.edges || (m as u32) >= 63 || (1u64 << m) > budget.states {
        return Ok(None);
    }
    let f = TargetFunction::with_budget(FunctionKind::ArithmeticSum, m, 2, budget)?;
    Ok(Some(min_cut_f(&Network::compile(spec)?, &f, budget)?.value))
}

fn gap(cfg: &RunConfig) -> Result<Report> {
    let l = cfg.args.l.unwrap_or(2);
    let ms = match cfg.args.m {
        Some(m) => vec![m],
        None => vec![1, 3, 7, 15, 31],
    };
    if l == 0 || ms.contains(&0) {
        bail!("--M and --L must be positive");
    }
    let mut text = format!(
        "{:>4} {:>3} {:>10} {:>4} {:>11} {:>10} {:>8}\n",
        "M", "L", "min-cut", "m*", "enumerated", "rate-upper", "ratio"
    );
    let mut rows = Vec::new();
    for &m in &ms {
        let (cut, m_star) = mincut_nml_closed_form(m, l);
        let enumerated = enumerated_nml(m, l, &cfg.budget)?;
        let upper = rate_upper_nml(m, l);
        let ratio = cut / upper;
        let shown = enumerated.map_or("-".to_string(), |v| format!("{v:.6}"));
        writeln!(
            text,
            "{m:>4} {l:>3} {cut:>10.6} {m_star:>4} {shown:>11} {upper:>10.6} {ratio:>8.4}"
        )?;
        rows.push(json!({
            "M": m,
            "L": l,
            "min_cut": cut,
            "m_star": m_star,
            "enumerated": enumerated,
            "rate_upper": upper,
            "ratio": ratio,
        }));
    }
    Ok(Report {
        text,
        data: envelope("gap", None, json!({ "rows": rows })),
    })
}

fn appendix(cfg: &RunConfig, families: usize) -> Result<Report> {
    let s = appendix_suite(cfg.args.seed, families, &cfg.budget)?;
    let mut text = String::new();
    writeln!(text, "seed: {}", s.seed)?;
    writeln!(text, "families: {}", s.families)?;
    writeln!(text, "invariance:       {}/{}", s.invariance, s.families)?;
    writeln!(text, "sumset shrink:    {}/{}", s.shrink, s.families)?;
    writeln!(text, "downward closure: {}/{}", s.downward, s.families)?;
    writeln!(text, "sumset bound:     {}/{}", s.sumset_bound, s.families)?;
    writeln!(
        text,
        "product bound:    {}/{}",
        s.product_holds, s.product_cases
    )?;
    writeln!(
        text,
        "hamming ball:     {}/{}",
        s.hamming_holds, s.hamming_cases
    )?;
    writeln!(text, "all hold: {}", s.all_hold())?;
    if !s.all_hold() {
        return Err(anyhow!("{text}a check failed"));
    }
    let result = json!({
        "seed": s.seed,
        "families": s.families,
        "invariance": s.invariance,
        "shrink": s.shrink,
        "downward_closure": s.downward,
        "sumset_bound": s.sumset_bound,
        "product": { "cases": s.product_cases, "holds": s.product_holds },
        "hamming": { "cases": s.hamming_cases, "holds": s.hamming_holds },
        "all_hold": true,
    });
    Ok(Report {
        text,
        data: envelope("appendix-check", None, result),
    })
}

fn export(cfg: &RunConfig) -> Result<Report> {
    let p = load_problem(cfg, None, None)?;
    let network = emit_network(p.net.spec());
    let function = emit_function(&p.f);
    if let Some(path) = &cfg.args.out {
        fs::write(path, &network).with_context(|| format!("writing {}", path.display()))?;
    }
    let text = format!("{network}\n{function}\n");
    let result = json!({
        "network": serde_json::from_str::<Value>(&network)?,
        "function": serde_json::from_str::<Value>(&function)?,
    });
    Ok(Report {
        text,
        data: envelope("export", None, result),
    })
}
