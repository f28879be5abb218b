//! Elementary symmetric polynomials and their leave-one-out variants.
//!
//! All routines use the one-pass dynamic program `e_m += t · e_{m-1}`
//! (descending in `m`), which is subtraction-free for nonnegative inputs.
//! Leave-one-out values are obtained by rerunning the program without the
//! excluded entry rather than by downdating.

use crate::error::{check_range, Result};

/// `e_0 .. e_{max_m}` of `values`. Fails if `max_m > values.len()`.
pub fn elementary_all(values: &[f64], max_m: usize) -> Result<Vec<f64>> {
    check_range("max_m", max_m, 0, values.len())?;
    Ok(elementary_dp(values.iter().copied(), max_m))
}

fn elementary_dp<I: IntoIterator<Item = f64>>(values: I, max_m: usize) -> Vec<f64> {
    let mut e = vec![0.0; max_m + 1];
    e[0] = 1.0;
    let mut seen = 0usize;
    for t in values {
        seen += 1;
        let top = seen.min(max_m);
        for m in (1..=top).rev() {
            e[m] += t * e[m - 1];
        }
    }
    e
}

/// `s_m` of `values` with entry `index` removed.
pub fn leave_one_out(values: &[f64], m: usize, index: usize) -> Result<f64> {
    let n = values.len();
    check_range("index", index, 0, n.saturating_sub(1))?;
    if n == 0 {
        return Err(crate::Error::EmptyDimension);
    }
    check_range("m", m, 0, n - 1)?;
    Ok(leave_one_out_row(values, m, index)[m])
}

fn leave_one_out_row(values: &[f64], max_m: usize, index: usize) -> Vec<f64> {
    let rest = values
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != index)
        .map(|(_, &t)| t);
    elementary_dp(rest, max_m)
}

/// Full and leave-one-out elementary symmetric values of a fixed input.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTable {
    values: Vec<f64>,
    full: Vec<f64>,
    loo: Vec<Vec<f64>>,
}

impl SymmetricTable {
    /// Builds `e_0..e_n` and `loo[i][0..=max_m]` for every `i`.
    /// Requires `max_m ≤ n - 1`.
    pub fn new(values: &[f64], max_m: usize) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(crate::Error::EmptyDimension);
        }
        check_range("max_m", max_m, 0, n - 1)?;
        let full = elementary_dp(values.iter().copied(), n);
        let loo = (0..n)
            .map(|i| leave_one_out_row(values, max_m, i))
            .collect();
        Ok(SymmetricTable {
            values: values.to_vec(),
            full,
            loo,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `e_m` of the full input, `0 ≤ m ≤ n`.
    pub fn full(&self, m: usize) -> f64 {
        self.full[m]
    }

    /// `s_m` of the input without entry `i`.
    pub fn loo(&self, i: usize, m: usize) -> f64 {
        self.loo[i][m]
    }

    pub fn max_m(&self) -> usize {
        self.loo[0].len() - 1
    }
}

/// `t_i · s_{m}(t without i)` for each `i`: the per-axis coefficients that
/// multiply the elliptic integrals in the intrinsic-volume formula (with
/// `m = k - 1` and `t = a²`).
pub fn weighted_leave_one_out(values: &[f64], m: usize) -> Result<Vec<f64>> {
    let table = SymmetricTable::new(values, m)?;
    Ok(values
        .iter()
        .enumerate()
        .map(|(i, &t)| t * table.loo(i, m))
        .collect())
}
