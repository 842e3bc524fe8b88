//! The cut-set upper bound on computing capacity and the lower bounds that
//! bracket it, consolidated in a [`BoundsReport`].
//!
//! Every lower bound is gated on the structural condition it needs (tree
//! topology, symmetry, divisibility, all relays being sources, ...). Bounds
//! whose condition fails are listed as skipped with the reason. A lower
//! bound exceeding the upper bound is a hard error, since it would mean one
//! of the computations is wrong.

pub mod cutset;
pub mod lp;
pub mod nml;
pub mod steiner;
pub mod symbolic;

pub use cutset::{min_cut_classic, min_cut_f, min_cut_f_by_flow, min_cut_size, CutSetBound};
pub use nml::{build_nml, mincut_nml_closed_form, rate_upper_nml};
pub use steiner::{enumerate_steiner_trees, steiner_packing, SteinerPacking};

use crate::codes::tree::tree_rate_parts;
use crate::error::{Error, Result};
use crate::function::{is_prime, FunctionKind, TargetFunction};
use crate::network::{Cut, Network};
use crate::Budget;
use symbolic::Ratio;

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBound {
    pub tag: String,
    pub value: f64,
    pub symbolic: String,
    pub note: String,
    /// The value rests on a known result rather than a computation here.
    pub citation_backed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkippedBound {
    pub tag: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub upper: f64,
    pub upper_symbolic: String,
    pub witness: Cut,
    pub witness_footprint: u64,
    /// `min over J of mincut(J)/log_q R(J,f)` by max-flow. Informational.
    pub flow_diagnostic: f64,
    pub classic_min_cut: f64,
    pub packing: f64,
    pub min_cut_size: usize,
    pub max_footprint: u64,
    pub lowers: Vec<LowerBound>,
    pub skipped: Vec<SkippedBound>,
    pub best_lower: f64,
    pub best_tag: String,
    pub certified: bool,
    pub tol: f64,
}

impl BoundsReport {
    /// Records the rate of an explicit code family as a further lower bound.
    pub fn add_construction(&mut self, value: f64, symbolic: &str, note: &str) -> Result<()> {
        self.push(LowerBound {
            tag: "construction".into(),
            value,
            symbolic: symbolic.into(),
            note: note.into(),
            citation_backed: false,
        })?;
        self.refresh();
        Ok(())
    }

    pub fn gap(&self) -> f64 {
        self.upper - self.best_lower
    }

    pub fn lower(&self, tag: &str) -> Option<&LowerBound> {
        self.lowers.iter().find(|l| l.tag == tag)
    }

    fn push(&mut self, bound: LowerBound) -> Result<()> {
        if bound.value > self.upper + self.tol {
            return Err(Error::BoundViolation {
                tag: bound.tag,
                lower: bound.value,
                upper: self.upper,
            });
        }
        self.lowers.push(bound);
        Ok(())
    }

    fn skip(&mut self, tag: &str, reason: impl Into<String>) {
        self.skipped.push(SkippedBound {
            tag: tag.into(),
            reason: reason.into(),
        });
    }

    fn refresh(&mut self) {
        let mut best: Option<&LowerBound> = None;
        for l in &self.lowers {
            if best.is_none_or(|b| l.value > b.value + 1e-12) {
                best = Some(l);
            }
        }
        if let Some(b) = best {
            self.best_lower = b.value;
            self.best_tag = b.tag.clone();
        }
        self.certified = self.best_lower >= self.upper - self.tol;
    }
}

/// Smallest prime strictly greater than `x`.
pub fn smallest_prime_greater(x: u64) -> u64 {
    let mut p = x + 1;
    while !is_prime(p) {
        p += 1;
    }
    p
}

fn log_q(q: u64, x: f64) -> f64 {
    x.ln() / (q as f64).ln()
}

fn ratio_or_decimal(x: f64) -> String {
    match Ratio::approx(x, 64, 1e-9) {
        Some(r) if r.den == 1 => r.to_string(),
        Some(r) => format!("({r})"),
        None => format!("{x:.6}"),
    }
}

/// `Pi(N) / log_q(max over cuts of R(I_C, f))`.
pub fn lower_bound_general(
    net: &Network,
    f: &TargetFunction,
    budget: &Budget,
) -> Result<LowerBound> {
    cutset::check_compatible(net, f)?;
    let packing = steiner_packing(net, budget)?.value;
    let max_r = cutset::max_cut_footprint(net, f, budget)?;
    let symbolic = match Ratio::approx(packing, 64, 1e-9) {
        Some(r) => symbolic::over_log(r, f.alphabet(), max_r),
        None => format!("{packing:.6}/log{}({max_r})", f.alphabet()),
    };
    Ok(LowerBound {
        tag: "steiner-general".into(),
        value: packing / log_q(f.alphabet(), max_r as f64),
        symbolic,
        note: format!(
            "packing number {} over max cut footprint {max_r}",
            symbolic::number(packing)
        ),
        citation_backed: false,
    })
}

/// Optimum of `sum u_i r_i` over Steiner packings.
pub fn lower_bound_weighted(
    net: &Network,
    rates: &[f64],
    budget: &Budget,
    tol: f64,
) -> Result<f64> {
    let trees = enumerate_steiner_trees(net, budget)?;
    Ok(steiner::weighted_packing(net, &trees, rates, tol)?.0)
}

/// Per-tree rates `min-cut(t_i, f)`, each achievable on its tree alone.
pub fn default_tree_rates(
    net: &Network,
    f: &TargetFunction,
    budget: &Budget,
) -> Result<(Vec<Vec<usize>>, Vec<f64>)> {
    cutset::check_compatible(net, f)?;
    let trees = enumerate_steiner_trees(net, budget)?;
    let rates = trees
        .iter()
        .map(|t| Ok(min_cut_f(&net.subnetwork(t)?, f, budget)?.value))
        .collect::<Result<Vec<_>>>()?;
    Ok((trees, rates))
}

/// `min |C| / log_q P`, `P` the smallest prime above `s(q-1)`.
pub fn lower_bound_arith_sum(
    net: &Network,
    q: u64,
    s: usize,
    budget: &Budget,
) -> Result<LowerBound> {
    let (min_c, _) = min_cut_size(net, budget)?;
    let p = smallest_prime_greater(s as u64 * (q - 1));
    Ok(LowerBound {
        tag: "arith-sum".into(),
        value: min_c as f64 / log_q(q, p as f64),
        symbolic: symbolic::over_log(Ratio::int(min_c as u64), q, p),
        note: format!("min |C| = {min_c}, prime field of size {p}"),
        citation_backed: false,
    })
}

/// `min |C| / ((q-1) log_q P(s))` for symmetric `f`.
pub fn lower_bound_symmetric(
    net: &Network,
    f: &TargetFunction,
    budget: &Budget,
) -> Result<LowerBound> {
    cutset::check_compatible(net, f)?;
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let (min_c, _) = min_cut_size(net, budget)?;
    let q = f.alphabet();
    let p = smallest_prime_greater(f.arity() as u64);
    Ok(LowerBound {
        tag: "symmetric".into(),
        value: min_c as f64 / ((q - 1) as f64 * log_q(q, p as f64)),
        symbolic: symbolic::over_log(Ratio::new(min_c as u64, q - 1), q, p),
        note: format!("min |C| = {min_c}, histogram over prime {p}"),
        citation_backed: false,
    })
}

/// Upper bound scaled by a rational factor, in symbolic form.
fn scaled_upper(upper: &CutSetBound, factor: Ratio, q: u64) -> String {
    symbolic::over_log(
        factor.mul(Ratio::int(upper.witness.size() as u64)),
        q,
        upper.footprint,
    )
}

/// `(Pi(N) / |E_i(rho)|) * min-cut(N, f)` for divisible `f`.
pub fn lower_bound_divisible(
    net: &Network,
    f: &TargetFunction,
    budget: &Budget,
) -> Result<LowerBound> {
    cutset::check_compatible(net, f)?;
    if !f.declared_divisible() {
        return Err(Error::NotDivisible("not declared divisible".into()));
    }
    if !f.divisible_necessary_check() {
        return Err(Error::NotDivisible(
            "some footprint size exceeds the range size".into(),
        ));
    }
    let upper = min_cut_f(net, f, budget)?;
    let packing = steiner_packing(net, budget)?.value;
    let fan_in = net.in_edges(net.receiver()).len();
    let factor = packing / fan_in as f64;
    let symbolic = match Ratio::approx(packing, 64, 1e-9) {
        Some(r) => scaled_upper(&upper, r.mul(Ratio::new(1, fan_in as u64)), f.alphabet()),
        None => format!("{:.6}*{}", factor, upper.symbolic),
    };
    Ok(LowerBound {
        tag: "divisible".into(),
        value: factor * upper.value,
        symbolic,
        note: format!(
            "packing number {} over {fan_in} receiver in-edges",
            symbolic::number(packing)
        ),
        citation_backed: false,
    })
}

/// `lambda * min-cut(N, f)` with `lambda` the exponential index of `f`.
pub fn lower_bound_lambda_exp(
    net: &Network,
    f: &TargetFunction,
    budget: &Budget,
) -> Result<LowerBound> {
    cutset::check_compatible(net, f)?;
    let upper = min_cut_f(net, f, budget)?;
    let (lambda, at) = f.lambda_exponential_index();
    let r = f.footprint(at)?.class_count;
    let q = f.alphabet();
    let symbolic = if r == upper.footprint {
        symbolic::fraction(upper.witness.size() as u64, at.len() as u64)
    } else {
        symbolic::times(
            &symbolic::times_log(Ratio::new(1, at.len() as u64), q, r),
            &upper.symbolic,
        )
    };
    Ok(LowerBound {
        tag: "lambda-exp".into(),
        value: lambda * upper.value,
        symbolic,
        note: format!("lambda = {lambda:.6} attained at I = {at}"),
        citation_backed: false,
    })
}

/// `(log_q R_min / lambda) * min-cut(N, f)` with `lambda` the bounded index
/// of `f`, valid when every non-receiver node is a source.
pub fn lower_bound_lambda_bdd(
    net: &Network,
    f: &TargetFunction,
    budget: &Budget,
) -> Result<LowerBound> {
    cutset::check_compatible(net, f)?;
    if let Some(v) = net.all_non_receivers_are_sources() {
        return Err(Error::NotAllSources(net.node_name(v).into()));
    }
    let upper = min_cut_f(net, f, budget)?;
    let (lambda, _) = f.lambda_bounded_index();
    let r_min = f.min_footprint();
    let factor = log_q(f.alphabet(), r_min as f64) / lambda;
    Ok(LowerBound {
        tag: "lambda-bdd".into(),
        value: factor * upper.value,
        symbolic: symbolic::times(&ratio_or_decimal(factor), &upper.symbolic),
        note: format!("lambda = {lambda:.6}, smallest footprint {r_min}"),
        citation_backed: false,
    })
}

fn is_linear_over_field(f: &TargetFunction) -> bool {
    match f.kind() {
        FunctionKind::Linear(_) => true,
        FunctionKind::ModSum(r) => *r == f.alphabet() && is_prime(f.alphabet()),
        _ => false,
    }
}

/// Upper bound and every applicable lower bound for `(net, f)`.
pub fn bounds_report(
    net: &Network,
    f: &TargetFunction,
    budget: &Budget,
    tol: f64,
) -> Result<BoundsReport> {
    cutset::check_compatible(net, f)?;
    let upper = min_cut_f(net, f, budget)?;
    let packing = steiner_packing(net, budget)?;
    let (min_c, _) = min_cut_size(net, budget)?;
    let mut report = BoundsReport {
        upper: upper.value,
        upper_symbolic: upper.symbolic.clone(),
        witness: upper.witness.clone(),
        witness_footprint: upper.footprint,
        flow_diagnostic: min_cut_f_by_flow(net, f)?,
        classic_min_cut: min_cut_classic(net, budget)?.value,
        packing: packing.value,
        min_cut_size: min_c,
        max_footprint: cutset::max_cut_footprint(net, f, budget)?,
        lowers: Vec::new(),
        skipped: Vec::new(),
        best_lower: 0.0,
        best_tag: String::new(),
        certified: false,
        tol,
    };
    let q = f.alphabet();

    if matches!(f.kind(), FunctionKind::Identity) {
        report.push(LowerBound {
            tag: "identity".into(),
            value: upper.value,
            symbolic: upper.symbolic.clone(),
            note: "routing capacity of the identity function equals the cut bound".into(),
            citation_backed: true,
        })?;
    } else {
        report.skip("identity", "function is not the identity");
    }

    if is_linear_over_field(f) {
        report.push(LowerBound {
            tag: "linear-field".into(),
            value: upper.value,
            symbolic: upper.symbolic.clone(),
            note: "linear functions over a prime field meet the cut bound".into(),
            citation_backed: true,
        })?;
    } else {
        report.skip("linear-field", "function is not linear over a prime field");
    }

    if net.is_multi_edge_tree() {
        let (value, degree, r) = tree_rate_parts(net, f)?;
        report.push(LowerBound {
            tag: "tree".into(),
            value,
            symbolic: symbolic::over_log(Ratio::int(degree as u64), q, r),
            note: "multi-edge tree code".into(),
            citation_backed: false,
        })?;
    } else {
        report.skip("tree", "network is not a multi-edge tree");
    }

    report.push(lower_bound_general(net, f, budget)?)?;

    let (_, rates) = default_tree_rates(net, f, budget)?;
    let weighted = lower_bound_weighted(net, &rates, budget, tol)?;
    report.push(LowerBound {
        tag: "steiner-weighted".into(),
        value: weighted,
        symbolic: symbolic::number(weighted),
        note: format!("{} trees, each at its own cut-set rate", rates.len()),
        citation_backed: false,
    })?;

    if matches!(f.kind(), FunctionKind::ArithmeticSum) {
        report.push(lower_bound_arith_sum(net, q, f.arity(), budget)?)?;
    } else {
        report.skip("arith-sum", "function is not the arithmetic sum");
    }

    match lower_bound_symmetric(net, f, budget) {
        Ok(b) => report.push(b)?,
        Err(Error::NotSymmetric) => report.skip("symmetric", "function is not symmetric"),
        Err(e) => return Err(e),
    }

    match lower_bound_divisible(net, f, budget) {
        Ok(b) => report.push(b)?,
        Err(Error::NotDivisible(why)) => report.skip("divisible", why),
        Err(e) => return Err(e),
    }

    report.push(lower_bound_lambda_exp(net, f, budget)?)?;

    match lower_bound_lambda_bdd(net, f, budget) {
        Ok(b) => report.push(b)?,
        Err(Error::NotAllSources(v)) => {
            report.skip("lambda-bdd", format!("node `{v}` is not a source"))
        }
        Err(e) => return Err(e),
    }

    let is_maxmin = matches!(f.kind(), FunctionKind::Maximum | FunctionKind::Minimum);
    match (is_maxmin, net.all_non_receivers_are_sources()) {
        (true, None) => report.push(LowerBound {
            tag: "maxmin".into(),
            value: upper.value,
            symbolic: upper.symbolic.clone(),
            note: "maximum or minimum with every relay a source".into(),
            citation_backed: false,
        })?,
        (false, _) => report.skip("maxmin", "function is not the maximum or minimum"),
        (true, Some(v)) => report.skip(
            "maxmin",
            format!("node `{}` is not a source", net.node_name(v)),
        ),
    }

    report.refresh();
    Ok(report)
}
