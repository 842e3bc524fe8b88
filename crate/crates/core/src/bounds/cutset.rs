//! Cut-set quantities: `min |C|/|I_C|`, `min |C|/log_q R(I_C, f)` and
//! `min |C|`.

use std::collections::HashMap;

use crate::bounds::symbolic;
use crate::error::{Error, Result};
use crate::function::TargetFunction;
use crate::network::{Cut, Network, SourceSet};
use crate::Budget;

const TIE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CutSetBound {
    pub value: f64,
    pub witness: Cut,
    /// Footprint size of the witness's separated set (`|I_C|` for the
    /// classic min-cut).
    pub footprint: u64,
    pub symbolic: String,
}

pub(crate) fn check_compatible(net: &Network, f: &TargetFunction) -> Result<()> {
    if f.arity() != net.source_count() {
        return Err(Error::ArityMismatch {
            function: f.arity(),
            expected: net.source_count(),
        });
    }
    if f.alphabet() != net.alphabet() {
        return Err(Error::InvalidFunction(format!(
            "function alphabet {} differs from network alphabet {}",
            f.alphabet(),
            net.alphabet()
        )));
    }
    Ok(())
}

/// Minimum over cuts of `value(cut)`; ties keep the earliest cut in
/// enumeration order, which is lexicographic.
fn argmin(cuts: &[Cut], mut value: impl FnMut(&Cut) -> f64) -> (f64, &Cut) {
    let mut best: Option<(f64, &Cut)> = None;
    for c in cuts {
        let v = value(c);
        if best.is_none_or(|(b, _)| v < b - TIE) {
            best = Some((v, c));
        }
    }
    best.expect("every network has at least one cut")
}

/// `min |C| / |I_C|`.
pub fn min_cut_classic(net: &Network, budget: &Budget) -> Result<CutSetBound> {
    let cuts = net.enumerate_cuts(budget)?;
    let (value, witness) = argmin(&cuts, |c| c.size() as f64 / c.separated.len() as f64);
    Ok(CutSetBound {
        value,
        witness: witness.clone(),
        footprint: witness.separated.len() as u64,
        symbolic: symbolic::fraction(witness.size() as u64, witness.separated.len() as u64),
    })
}

/// Footprint sizes for every source subset, computed on demand.
pub(crate) struct FootprintCache<'a> {
    f: &'a TargetFunction,
    sizes: HashMap<SourceSet, u64>,
}

impl<'a> FootprintCache<'a> {
    pub fn new(f: &'a TargetFunction) -> Self {
        FootprintCache {
            f,
            sizes: HashMap::new(),
        }
    }

    pub fn get(&mut self, set: SourceSet) -> u64 {
        let f = self.f;
        *self.sizes.entry(set).or_insert_with(|| {
            f.footprint(set)
                .expect("index set within arity")
                .class_count
        })
    }
}

/// The cut-set upper bound `min |C| / log_q R(I_C, f)`, by exhaustive
/// enumeration of minimal cuts.
pub fn min_cut_f(net: &Network, f: &TargetFunction, budget: &Budget) -> Result<CutSetBound> {
    check_compatible(net, f)?;
    let cuts = net.enumerate_cuts(budget)?;
    let q = f.alphabet() as f64;
    let mut cache = FootprintCache::new(f);
    let (value, witness) = argmin(&cuts, |c| {
        c.size() as f64 / ((cache.get(c.separated) as f64).ln() / q.ln())
    });
    let footprint = cache.get(witness.separated);
    Ok(CutSetBound {
        value,
        witness: witness.clone(),
        footprint,
        symbolic: symbolic::over_log(
            symbolic::Ratio::int(witness.size() as u64),
            f.alphabet(),
            footprint,
        ),
    })
}

/// Diagnostic second route: `min over J of mincut(J) / log_q R(J, f)`
/// using max-flow per source subset. It upper bounds [`min_cut_f`] only
/// when footprints behave monotonically, so it is reported, never trusted.
pub fn min_cut_f_by_flow(net: &Network, f: &TargetFunction) -> Result<f64> {
    check_compatible(net, f)?;
    let q = f.alphabet() as f64;
    let mut best = f64::INFINITY;
    for j in SourceSet::nonempty_subsets(net.source_count()) {
        let (size, _) = net.min_edge_cut(j)?;
        let r = f.footprint(j)?.class_count as f64;
        best = best.min(size as f64 / (r.ln() / q.ln()));
    }
    Ok(best)
}

/// `min |C|` over cuts, with the lexicographically least witness.
pub fn min_cut_size(net: &Network, budget: &Budget) -> Result<(usize, Cut)> {
    let cuts = net.enumerate_cuts(budget)?;
    let (v, c) = argmin(&cuts, |c| c.size() as f64);
    Ok((v as usize, c.clone()))
}

/// `max R(I_C, f)` over cuts.
pub fn max_cut_footprint(net: &Network, f: &TargetFunction, budget: &Budget) -> Result<u64> {
    check_compatible(net, f)?;
    let cuts = net.enumerate_cuts(budget)?;
    let mut cache = FootprintCache::new(f);
    Ok(cuts.iter().map(|c| cache.get(c.separated)).max().unwrap())
}
