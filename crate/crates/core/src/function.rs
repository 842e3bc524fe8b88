//! Target functions over `{0..q-1}^s` and their footprint sizes.
//!
//! Two inputs `a, b` on the coordinates `I` are equivalent when
//! `f(a, c) = f(b, c)` for every completion `c` of the remaining
//! coordinates. The number of classes is the footprint size `R(I, f)`; it
//! is the number of distinct messages a node holding `x_I` must be able to
//! send for the receiver to finish the computation.
//!
//! Every function is tabulated once at construction (value ids indexed by
//! the base-q numeral of `x`, `x_1` most significant), so footprints and
//! classification are plain table scans.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_budget, sat_pow, Error, Result};
use crate::network::SourceSet;
use crate::Budget;

/// A value in the function's codomain. Scalar kinds produce one component;
/// identity and histogram produce vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Value(pub Vec<u64>);

impl Value {
    pub fn scalar(v: u64) -> Self {
        Value(vec![v])
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [v] = self.0.as_slice() {
            return write!(f, "{v}");
        }
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for Value {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form: `3` or `(1,1,2)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::CodeFormat(format!("malformed value `{s}`"));
        let s = s.trim();
        let inner = match s.strip_prefix('(') {
            Some(rest) => rest.strip_suffix(')').ok_or_else(bad)?,
            None => s,
        };
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        if parts.len() > 1 && !s.starts_with('(') {
            return Err(bad());
        }
        Ok(Value(parts))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctionKind {
    Identity,
    ArithmeticSum,
    /// Sum modulo `r`, `2 <= r <= q`.
    ModSum(u64),
    /// Symbol counts `(c_0, .., c_{q-1})`.
    Histogram,
    /// `sum a_i x_i` over the prime field of size `q`.
    Linear(Vec<u64>),
    Maximum,
    Minimum,
    /// Explicit value table of length `q^s`, indexed by the base-q numeral
    /// of `x` with `x_1` most significant.
    Table(Vec<u64>),
}

impl FunctionKind {
    pub fn name(&self) -> &'static str {
        match self {
            FunctionKind::Identity => "identity",
            FunctionKind::ArithmeticSum => "arithmetic_sum",
            FunctionKind::ModSum(_) => "mod_sum",
            FunctionKind::Histogram => "histogram",
            FunctionKind::Linear(_) => "linear",
            FunctionKind::Maximum => "maximum",
            FunctionKind::Minimum => "minimum",
            FunctionKind::Table(_) => "table",
        }
    }

    fn divisible_by_default(&self) -> bool {
        !matches!(self, FunctionKind::Table(_))
    }
}

#[derive(Clone, Debug)]
pub struct TargetFunction {
    arity: usize,
    alphabet: u64,
    kind: FunctionKind,
    declared_divisible: bool,
    table: Vec<u32>,
    codomain: Vec<Value>,
}

/// Equivalence classes of inputs on an index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FootprintResult {
    pub index_set: SourceSet,
    pub class_count: u64,
    /// Class (1-based) of every `a` in `A^|I|`, indexed by the base-q
    /// numeral of `a` with the lowest index in `I` most significant.
    pub class_of: Vec<u32>,
    /// Numeral of the first input seen in each class; `representatives[c-1]`
    /// belongs to class `c`.
    pub representatives: Vec<u64>,
}

impl FootprintResult {
    pub fn class(&self, a: u64) -> u32 {
        self.class_of[a as usize]
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Digits of `x` in base `q`, most significant first, `len` digits.
pub(crate) fn digits(mut x: u64, q: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = x % q;
        x /= q;
    }
    out
}

/// Base-q numeral of `digits`, most significant first.
pub(crate) fn numeral(digits: &[u64], q: u64) -> u64 {
    digits.iter().fold(0, |acc, &d| acc * q + d)
}

impl TargetFunction {
    pub fn new(kind: FunctionKind, arity: usize, alphabet: u64) -> Result<Self> {
        Self::with_budget(kind, arity, alphabet, &Budget::default())
    }

    pub fn with_budget(
        kind: FunctionKind,
        arity: usize,
        alphabet: u64,
        budget: &Budget,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidFunction("arity must be at least 1".into()));
        }
        if alphabet < 2 {
            return Err(Error::InvalidFunction(format!(
                "alphabet size must be at least 2, got {alphabet}"
            )));
        }
        let states = sat_pow(alphabet, arity);
        check_budget("function table (q^s)", states, budget.states as u128)?;
        match &kind {
            FunctionKind::ModSum(r) if *r < 2 || *r > alphabet => {
                return Err(Error::InvalidFunction(format!(
                    "mod-r sum needs 2 <= r <= q, got r={r}, q={alphabet}"
                )));
            }
            FunctionKind::Linear(coeffs) => {
                if !is_prime(alphabet) {
                    return Err(Error::NonPrimeFieldForLinear(alphabet));
                }
                if coeffs.len() != arity {
                    return Err(Error::ArityMismatch {
                        function: coeffs.len(),
                        expected: arity,
                    });
                }
                if let Some(c) = coeffs.iter().find(|&&c| c >= alphabet) {
                    return Err(Error::InvalidFunction(format!(
                        "coefficient {c} is not a field element"
                    )));
                }
            }
            FunctionKind::Table(values) if values.len() as u128 != states => {
                return Err(Error::InvalidFunction(format!(
                    "table has {} entries, expected q^s = {states}",
                    values.len()
                )));
            }
            _ => {}
        }
        let declared_divisible = kind.divisible_by_default();
        let mut f = TargetFunction {
            arity,
            alphabet,
            kind,
            declared_divisible,
            table: Vec::new(),
            codomain: Vec::new(),
        };
        let raw: Vec<Value> = (0..states as u64)
            .map(|x| f.formula(&digits(x, alphabet, arity)))
            .collect();
        let mut codomain = raw.clone();
        codomain.sort();
        codomain.dedup();
        let ids: HashMap<&Value, u32> = codomain
            .iter()
            .enumerate()
            .map(|(i, v)| (v, i as u32))
            .collect();
        f.table = raw.iter().map(|v| ids[v]).collect();
        f.codomain = codomain;
        if let Some(i) = f.constant_argument() {
            return Err(Error::InvalidFunction(format!(
                "function does not depend on argument {}",
                i + 1
            )));
        }
        Ok(f)
    }

    pub fn with_divisible(mut self, divisible: bool) -> Self {
        self.declared_divisible = divisible;
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn declared_divisible(&self) -> bool {
        self.declared_divisible
    }

    /// Distinct values of `f`, sorted.
    pub fn codomain(&self) -> &[Value] {
        &self.codomain
    }

    /// Id of `f(x)` in [`codomain`](Self::codomain), `x` given as a numeral.
    pub fn value_id(&self, x: u64) -> u32 {
        self.table[x as usize]
    }

    pub fn value_id_of(&self, v: &Value) -> Option<u32> {
        self.codomain.binary_search(v).ok().map(|i| i as u32)
    }

    fn formula(&self, x: &[u64]) -> Value {
        let q = self.alphabet;
        match &self.kind {
            FunctionKind::Identity => Value(x.to_vec()),
            FunctionKind::ArithmeticSum => Value::scalar(x.iter().sum()),
            FunctionKind::ModSum(r) => Value::scalar(x.iter().sum::<u64>() % r),
            FunctionKind::Histogram => {
                let mut counts = vec![0; q as usize];
                for &xi in x {
                    counts[xi as usize] += 1;
                }
                Value(counts)
            }
            FunctionKind::Linear(a) => {
                Value::scalar(a.iter().zip(x).map(|(a, x)| a * x % q).sum::<u64>() % q)
            }
            FunctionKind::Maximum => Value::scalar(*x.iter().max().unwrap()),
            FunctionKind::Minimum => Value::scalar(*x.iter().min().unwrap()),
            FunctionKind::Table(t) => Value::scalar(t[numeral(x, q) as usize]),
        }
    }

    pub fn evaluate(&self, x: &[u64]) -> Result<Value> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch {
                function: self.arity,
                expected: x.len(),
            });
        }
        if let Some((position, &symbol)) = x.iter().enumerate().find(|(_, &v)| v >= self.alphabet) {
            return Err(Error::OutOfAlphabet {
                position,
                symbol,
                alphabet: self.alphabet,
            });
        }
        Ok(self.formula(x))
    }

    fn weight(&self, i: usize) -> u64 {
        self.alphabet.pow((self.arity - 1 - i) as u32)
    }

    /// Offsets contributed by every assignment of the coordinates in `set`,
    /// in ascending numeral order of the assignment.
    fn offsets(&self, set: SourceSet) -> Vec<u64> {
        let positions: Vec<usize> = set.indices().filter(|&i| i < self.arity).collect();
        let count = self.alphabet.pow(positions.len() as u32);
        (0..count)
            .map(|a| {
                digits(a, self.alphabet, positions.len())
                    .iter()
                    .zip(&positions)
                    .map(|(&d, &p)| d * self.weight(p))
                    .sum()
            })
            .collect()
    }

    fn check_index_set(&self, set: SourceSet) -> Result<()> {
        if !set.is_subset(SourceSet::full(self.arity)) {
            return Err(Error::PreconditionViolated(format!(
                "index set {set} is not within 1..{}",
                self.arity
            )));
        }
        Ok(())
    }

    /// Equivalence classes on the coordinates `set`.
    pub fn footprint(&self, set: SourceSet) -> Result<FootprintResult> {
        self.check_index_set(set)?;
        let complement = SourceSet(SourceSet::full(self.arity).0 & !set.0);
        let inner = self.offsets(set);
        let outer = self.offsets(complement);
        let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut class_of = Vec::with_capacity(inner.len());
        let mut representatives = Vec::new();
        for (a, &base) in inner.iter().enumerate() {
            let fingerprint: Vec<u32> = outer
                .iter()
                .map(|&c| self.table[(base + c) as usize])
                .collect();
            let next = seen.len() as u32 + 1;
            let class = *seen.entry(fingerprint).or_insert_with(|| {
                representatives.push(a as u64);
                next
            });
            class_of.push(class);
        }
        Ok(FootprintResult {
            index_set: set,
            class_count: seen.len() as u64,
            class_of,
            representatives,
        })
    }

    /// `R(I, f)` for every `I`, indexed by bitmask (entry 0 is the empty set).
    pub fn footprint_sizes(&self) -> Vec<u64> {
        (0..=SourceSet::full(self.arity).0)
            .map(|m| self.footprint(SourceSet(m)).unwrap().class_count)
            .collect()
    }

    pub fn range_size(&self) -> usize {
        self.codomain.len()
    }

    /// Checked over all inputs and adjacent transpositions, which generate
    /// the symmetric group.
    pub fn is_symmetric(&self) -> bool {
        let q = self.alphabet;
        (0..self.table.len() as u64).all(|x| {
            let d = digits(x, q, self.arity);
            (0..self.arity.saturating_sub(1)).all(|i| {
                let mut swapped = d.clone();
                swapped.swap(i, i + 1);
                self.table[x as usize] == self.table[numeral(&swapped, q) as usize]
            })
        })
    }

    /// Largest `λ` with `R(I,f) >= q^{λ|I|}` for all nonempty `I`, and the
    /// index set attaining it.
    pub fn lambda_exponential_index(&self) -> (f64, SourceSet) {
        let q = self.alphabet as f64;
        let sizes = self.footprint_sizes();
        let mut best = (f64::INFINITY, SourceSet::EMPTY);
        for set in SourceSet::nonempty_subsets(self.arity) {
            let v = (sizes[set.0 as usize] as f64).ln() / q.ln() / set.len() as f64;
            if v < best.0 - 1e-12 {
                best = (v, set);
            }
        }
        best
    }

    /// Smallest `λ` with `R(I,f) <= q^λ` for all `I`, and the index set
    /// attaining it.
    pub fn lambda_bounded_index(&self) -> (f64, SourceSet) {
        let q = self.alphabet as f64;
        let sizes = self.footprint_sizes();
        let mut best = (f64::NEG_INFINITY, SourceSet::EMPTY);
        for set in SourceSet::nonempty_subsets(self.arity) {
            let v = (sizes[set.0 as usize] as f64).ln() / q.ln();
            if v > best.0 + 1e-12 {
                best = (v, set);
            }
        }
        best
    }

    /// `min` of `R(I,f)` over nonempty `I`.
    pub fn min_footprint(&self) -> u64 {
        let sizes = self.footprint_sizes();
        SourceSet::nonempty_subsets(self.arity)
            .map(|s| sizes[s.0 as usize])
            .min()
            .unwrap()
    }

    /// Necessary condition for divisibility: `R(I,f) <= |f(A^s)|` for every
    /// nonempty `I`. A `true` result does not prove divisibility.
    pub fn divisible_necessary_check(&self) -> bool {
        let range = self.range_size() as u64;
        let sizes = self.footprint_sizes();
        SourceSet::nonempty_subsets(self.arity).all(|s| sizes[s.0 as usize] <= range)
    }

    fn constant_argument(&self) -> Option<usize> {
        let q = self.alphabet;
        (0..self.arity).find(|&i| {
            let w = self.weight(i);
            (0..self.table.len() as u64).all(|x| {
                let digit = x / w % q;
                if digit != 0 {
                    return true;
                }
                (1..q).all(|d| self.table[x as usize] == self.table[(x + d * w) as usize])
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(kind: FunctionKind, s: usize, q: u64) -> TargetFunction {
        TargetFunction::new(kind, s, q).unwrap()
    }

    fn set(idx: &[usize]) -> SourceSet {
        SourceSet::from_indices(idx.iter().map(|i| i - 1))
    }

    /// Pairwise application of the definition: `a ~ b` iff every completion
    /// agrees.
    fn brute_equivalent(func: &TargetFunction, index: SourceSet, a: &[u64], b: &[u64]) -> bool {
        let s = func.arity();
        let q = func.alphabet();
        let free: Vec<usize> = (0..s).filter(|i| !index.contains(*i)).collect();
        let fixed: Vec<usize> = index.indices().collect();
        (0..q.pow(free.len() as u32)).all(|c| {
            let cd = digits(c, q, free.len());
            let mut xa = vec![0; s];
            let mut xb = vec![0; s];
            for (k, &p) in fixed.iter().enumerate() {
                xa[p] = a[k];
                xb[p] = b[k];
            }
            for (k, &p) in free.iter().enumerate() {
                xa[p] = cd[k];
                xb[p] = cd[k];
            }
            func.evaluate(&xa).unwrap() == func.evaluate(&xb).unwrap()
        })
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(
            f(FunctionKind::ArithmeticSum, 3, 2)
                .evaluate(&[1, 1, 1])
                .unwrap(),
            Value::scalar(3)
        );
        assert_eq!(
            f(FunctionKind::ModSum(2), 3, 2)
                .evaluate(&[1, 1, 0])
                .unwrap(),
            Value::scalar(0)
        );
        assert_eq!(
            f(FunctionKind::Histogram, 4, 3)
                .evaluate(&[0, 2, 2, 1])
                .unwrap(),
            Value(vec![1, 1, 2])
        );
        assert!(matches!(
            f(FunctionKind::Maximum, 2, 2).evaluate(&[0, 2]),
            Err(Error::OutOfAlphabet { position: 1, .. })
        ));
    }

    #[test]
    fn table_is_msb_first() {
        // f(x1, x2) = x1 as a table: entries 0,0,1,1 would ignore x2, so use
        // x1 - x2 shifted.
        let t = f(FunctionKind::Table(vec![0, 1, 2, 3]), 2, 2);
        assert_eq!(t.evaluate(&[1, 0]).unwrap(), Value::scalar(2));
        assert_eq!(t.evaluate(&[0, 1]).unwrap(), Value::scalar(1));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            TargetFunction::new(FunctionKind::Linear(vec![1, 1]), 2, 4).unwrap_err(),
            Error::NonPrimeFieldForLinear(4)
        );
        assert!(TargetFunction::new(FunctionKind::ModSum(3), 2, 2).is_err());
        assert!(TargetFunction::new(FunctionKind::Table(vec![0, 0, 1, 1]), 2, 2).is_err());
        assert!(TargetFunction::new(FunctionKind::Linear(vec![1, 0]), 2, 3).is_err());
        assert!(TargetFunction::new(FunctionKind::Table(vec![0; 3]), 2, 2).is_err());
        let small = Budget {
            states: 7,
            ..Budget::default()
        };
        assert!(matches!(
            TargetFunction::with_budget(FunctionKind::Identity, 3, 2, &small),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn footprint_examples() {
        let sum = f(FunctionKind::ArithmeticSum, 3, 2);
        assert_eq!(sum.footprint(set(&[1, 2])).unwrap().class_count, 3);
        let id = f(FunctionKind::Identity, 3, 2);
        assert_eq!(id.footprint(set(&[1, 2])).unwrap().class_count, 4);
        let max = f(FunctionKind::Maximum, 2, 3);
        assert_eq!(max.footprint(set(&[1])).unwrap().class_count, 3);
        assert_eq!(sum.footprint(SourceSet::EMPTY).unwrap().class_count, 1);
        assert_eq!(
            sum.footprint(SourceSet::full(3)).unwrap().class_count,
            sum.range_size() as u64
        );
    }

    #[test]
    fn footprint_classes_match_pairwise_definition() {
        let kinds = [
            FunctionKind::ArithmeticSum,
            FunctionKind::Maximum,
            FunctionKind::ModSum(2),
            FunctionKind::Histogram,
            FunctionKind::Linear(vec![1, 2, 1]),
        ];
        for kind in kinds {
            let func = f(kind, 3, 3);
            for index in SourceSet::nonempty_subsets(3) {
                let fp = func.footprint(index).unwrap();
                let width = index.len();
                let n = 3u64.pow(width as u32);
                for a in 0..n {
                    for b in 0..n {
                        let same = fp.class(a) == fp.class(b);
                        let da = digits(a, 3, width);
                        let db = digits(b, 3, width);
                        assert_eq!(same, brute_equivalent(&func, index, &da, &db));
                    }
                }
                // contiguous from 1, first-seen order
                let mut max = 0;
                for &c in &fp.class_of {
                    assert!(c <= max + 1);
                    max = max.max(c);
                }
                assert_eq!(max as u64, fp.class_count);
            }
        }
    }

    #[test]
    fn range_sizes() {
        assert_eq!(f(FunctionKind::ArithmeticSum, 3, 2).range_size(), 4);
        assert_eq!(f(FunctionKind::ModSum(2), 3, 2).range_size(), 2);
        assert_eq!(f(FunctionKind::Identity, 2, 2).range_size(), 4);
    }

    #[test]
    fn symmetry() {
        assert!(f(FunctionKind::ArithmeticSum, 3, 2).is_symmetric());
        assert!(!f(FunctionKind::Identity, 2, 2).is_symmetric());
        assert!(!f(FunctionKind::Linear(vec![1, 2]), 2, 3).is_symmetric());
        assert!(f(FunctionKind::Histogram, 3, 3).is_symmetric());
    }

    #[test]
    fn lambda_indices() {
        let (l, _) = f(FunctionKind::Identity, 3, 2).lambda_exponential_index();
        assert!((l - 1.0).abs() < 1e-12);
        let (l, at) = f(FunctionKind::Maximum, 3, 2).lambda_exponential_index();
        assert!((l - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(at, SourceSet::full(3));
        let (l, at) = f(FunctionKind::ArithmeticSum, 2, 2).lambda_exponential_index();
        assert!((l - 3f64.log2() / 2.0).abs() < 1e-12);
        assert_eq!(at, SourceSet::full(2));

        for q in 2..=4 {
            let (l, _) = f(FunctionKind::Maximum, 3, q).lambda_bounded_index();
            assert!((l - 1.0).abs() < 1e-12);
        }
        let (l, _) = f(FunctionKind::ModSum(2), 3, 4).lambda_bounded_index();
        assert!((l - 0.5).abs() < 1e-12);
        let (l, _) = f(FunctionKind::Identity, 3, 2).lambda_bounded_index();
        assert!((l - 3.0).abs() < 1e-12);
    }

    #[test]
    fn divisibility_necessary_condition() {
        assert!(f(FunctionKind::ArithmeticSum, 3, 2).divisible_necessary_check());
        assert!(f(FunctionKind::Identity, 2, 2).divisible_necessary_check());
        // Equality indicator on two ternary inputs: R({1}) = 3 > |range| = 2.
        let eq = f(FunctionKind::Table(vec![1, 0, 0, 0, 1, 0, 0, 0, 1]), 2, 3);
        assert!(!eq.divisible_necessary_check());
    }

    #[test]
    fn random_table_search_finds_violators() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut found = None;
        for _ in 0..1000 {
            let values: Vec<u64> = (0..9).map(|_| rng.gen_range(0..2)).collect();
            let Ok(func) = TargetFunction::new(FunctionKind::Table(values.clone()), 2, 3) else {
                continue;
            };
            if !func.divisible_necessary_check() {
                found = Some(values);
                break;
            }
        }
        assert!(found.is_some());
    }

    #[test]
    fn footprint_bounded_by_alphabet_power() {
        let func = f(FunctionKind::Histogram, 3, 3);
        let sizes = func.footprint_sizes();
        assert_eq!(sizes[0], 1);
        for index in SourceSet::nonempty_subsets(3) {
            assert!(sizes[index.0 as usize] <= 3u64.pow(index.len() as u32));
        }
    }
}
