//! Dense tableau simplex for `max c.x` subject to `A x <= b`, `x >= 0`,
//! with `b >= 0` so the slack basis is feasible from the start.
//!
//! Bland's rule picks the lowest-index improving column and breaks ratio
//! ties by lowest basic variable, which rules out cycling.

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpError {
    Unbounded,
    InfeasibleStart,
    IterationLimit,
}

pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64], tol: f64) -> Result<LpSolution, LpError> {
    let n = c.len();
    let m = b.len();
    if b.iter().any(|&v| v < -tol) {
        return Err(LpError::InfeasibleStart);
    }
    let width = n + m + 1;
    // rows 0..m are constraints, row m is the objective (stored negated)
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..n].copy_from_slice(&a[i][..n]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let max_iter = 50 * (n + m + 1).pow(2);
    for _ in 0..max_iter {
        let Some(enter) = (0..n + m).find(|&j| t[m][j] < -tol) else {
            let mut x = vec![0.0; n];
            for (i, &bv) in basis.iter().enumerate() {
                if bv < n {
                    x[bv] = t[i][width - 1];
                }
            }
            return Ok(LpSolution {
                value: t[m][width - 1],
                x,
            });
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let coef = t[i][enter];
            if coef > tol {
                let ratio = t[i][width - 1] / coef;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - tol || (ratio <= lr + tol && basis[i] < basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        let Some((row, _)) = leave else {
            return Err(LpError::Unbounded);
        };
        let pivot = t[row][enter];
        for v in t[row].iter_mut() {
            *v /= pivot;
        }
        let pivot_row = t[row].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[enter];
            if factor.abs() > 0.0 {
                for (v, p) in r.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
            }
        }
        basis[row] = enter;
    }
    Err(LpError::IterationLimit)
}
