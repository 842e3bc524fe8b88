//! Display forms such as `2/log2(3)` or `(3/2)/log2(5)` for bound values.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn int(v: u64) -> Self {
        Ratio { num: v, den: 1 }
    }

    /// Best rational with denominator at most `max_den` within `tol` of
    /// `x`, if one exists.
    pub fn approx(x: f64, max_den: u64, tol: f64) -> Option<Self> {
        if !x.is_finite() || x < 0.0 {
            return None;
        }
        (1..=max_den).find_map(|den| {
            let num = (x * den as f64).round();
            ((num / den as f64 - x).abs() <= tol).then(|| Ratio::new(num as u64, den))
        })
    }

    pub fn mul(self, other: Ratio) -> Ratio {
        Ratio::new(self.num * other.num, self.den * other.den)
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn grouped(self) -> String {
        if self.den == 1 {
            self.num.to_string()
        } else {
            format!("({self})")
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

pub fn fraction(num: u64, den: u64) -> String {
    Ratio::new(num, den).to_string()
}

/// `Some(t)` when `r = q^t`.
fn exact_log(q: u64, r: u64) -> Option<u64> {
    let mut t = 0;
    let mut p = 1u64;
    while p < r {
        p = p.checked_mul(q)?;
        t += 1;
    }
    (p == r).then_some(t)
}

/// `ratio / log_q(r)`, simplified when `r` is a power of `q`.
pub fn over_log(ratio: Ratio, q: u64, r: u64) -> String {
    match exact_log(q, r) {
        Some(0) => "inf".into(),
        Some(t) => ratio.mul(Ratio::new(1, t)).to_string(),
        None => format!("{}/log{q}({r})", ratio.grouped()),
    }
}

/// `ratio * log_q(r)`, simplified when `r` is a power of `q`.
pub fn times_log(ratio: Ratio, q: u64, r: u64) -> String {
    match exact_log(q, r) {
        Some(t) => ratio.mul(Ratio::int(t)).to_string(),
        None if ratio == Ratio::int(1) => format!("log{q}({r})"),
        None => format!("{}*log{q}({r})", ratio.grouped()),
    }
}

/// `a*b`, dropping a factor of one.
pub fn times(a: &str, b: &str) -> String {
    match (a, b) {
        (a, "1") => a
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(a)
            .to_string(),
        ("1", b) => b.to_string(),
        (a, b) => format!("{a}*{b}"),
    }
}

/// A numeric value shown as a fraction when it is one with a small
/// denominator, otherwise in decimal.
pub fn number(x: f64) -> String {
    match Ratio::approx(x, 64, 1e-9) {
        Some(r) => r.to_string(),
        None => format!("{x:.6}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(over_log(Ratio::int(2), 2, 3), "2/log2(3)");
        assert_eq!(over_log(Ratio::int(1), 2, 4), "1/2");
        assert_eq!(over_log(Ratio::new(3, 2), 2, 3), "(3/2)/log2(3)");
        assert_eq!(over_log(Ratio::int(3), 2, 2), "3");
        assert_eq!(times_log(Ratio::int(1), 4, 2), "log4(2)");
        assert_eq!(fraction(4, 2), "2");
        assert_eq!(times("(1/2)", "1"), "1/2");
        assert_eq!(times("1", "2/log2(3)"), "2/log2(3)");
        assert_eq!(times("2", "2/log2(3)"), "2*2/log2(3)");
        assert_eq!(number(1.5), "3/2");
        assert_eq!(number(2f64.sqrt()), "1.414214");
    }

    #[test]
    fn approx_recovers_small_fractions() {
        assert_eq!(Ratio::approx(0.75, 16, 1e-12), Some(Ratio::new(3, 4)));
        assert_eq!(
            Ratio::approx(1.0 / 3.0 + 1e-11, 16, 1e-9),
            Some(Ratio::new(1, 3))
        );
        assert_eq!(Ratio::approx(std::f64::consts::PI, 8, 1e-9), None);
    }
}
