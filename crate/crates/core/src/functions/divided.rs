//! Divided differences and iterated (equal-step) differences.
//!
//! The recursive triangular scheme is the primary evaluation path; the
//! symmetric-sum formula `sum_j f(x_j) / prod_{k != j} (x_j - x_k)` is kept as
//! an independent cross-check because its conditioning degrades much faster
//! when nodes cluster.

use crate::error::{Error, Result};

/// Nodes closer than `span * MIN_GAP_FACTOR` are rejected as duplicates.
pub const MIN_GAP_FACTOR: f64 = 1e-10;

/// Triangular table of divided differences over a sorted node set.
///
/// `order(k)[i]` holds `[x_i, ..., x_{i+k}; f]`. Nodes are sorted internally,
/// which makes every derived quantity invariant under permutation of the
/// input nodes, bit for bit.
#[derive(Debug, Clone)]
pub struct DividedDifferenceTable {
    nodes: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl DividedDifferenceTable {
    pub fn build(nodes: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::PreconditionFailed("need at least one node".into()));
        }
        let mut sorted = nodes.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("nodes must not be NaN"));
        let span = sorted[sorted.len() - 1] - sorted[0];
        let guard = MIN_GAP_FACTOR * span;
        for i in 1..sorted.len() {
            if sorted[i] - sorted[i - 1] <= guard {
                return Err(Error::DuplicateNodes { i: i - 1, j: i });
            }
        }
        let mut rows = Vec::with_capacity(sorted.len());
        rows.push(sorted.iter().map(|&x| f(x)).collect::<Vec<_>>());
        for k in 1..sorted.len() {
            let prev = &rows[k - 1];
            let mut row = Vec::with_capacity(sorted.len() - k);
            for i in 0..sorted.len() - k {
                row.push((prev[i + 1] - prev[i]) / (sorted[i + k] - sorted[i]));
            }
            rows.push(row);
        }
        Ok(Self { nodes: sorted, rows })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// All divided differences of the given order (0 = raw values).
    pub fn order(&self, k: usize) -> &[f64] {
        &self.rows[k]
    }

    /// The single highest-order divided difference `[x_0, ..., x_n; f]`.
    pub fn top(&self) -> f64 {
        self.rows[self.rows.len() - 1][0]
    }
}

/// `[x_0, ..., x_n; f]` by the recursive scheme.
pub fn divided_difference(f: impl Fn(f64) -> f64, nodes: &[f64]) -> Result<f64> {
    Ok(DividedDifferenceTable::build(nodes, f)?.top())
}

/// `[x_0, ..., x_n; f]` by the symmetric-sum formula (cross-check path).
pub fn divided_difference_symmetric(f: impl Fn(f64) -> f64, nodes: &[f64]) -> Result<f64> {
    let table = DividedDifferenceTable::build(nodes, &f)?;
    let xs = table.nodes();
    let mut total = 0.0;
    for (j, &xj) in xs.iter().enumerate() {
        let mut denom = 1.0;
        for (k, &xk) in xs.iter().enumerate() {
            if k != j {
                denom *= xj - xk;
            }
        }
        total += f(xj) / denom;
    }
    Ok(total)
}

/// Binomial coefficient as f64; exact for every n used here (n <= 60).
pub fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k.min(n));
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Iterated equal-step difference
/// `(Delta_h)^n f(x) = sum_{k=0}^{n} (-1)^{n-k} C(n,k) f(x + k h)`.
///
/// Equals `n! * h^n * [x, x+h, ..., x+nh; f]`.
pub fn iterated_difference(
    f: impl Fn(f64) -> f64,
    x: f64,
    h: f64,
    n: usize,
    domain_upper: f64,
) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::PreconditionFailed(format!("x = {x} must be >= 0")));
    }
    if h <= 0.0 {
        return Err(Error::PreconditionFailed(format!("step h = {h} must be > 0")));
    }
    let top = x + n as f64 * h;
    if top > domain_upper {
        return Err(Error::DomainExceeded { x: top, upper: domain_upper });
    }
    let mut total = 0.0;
    for k in 0..=n {
        let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * binomial(n, k) * f(x + k as f64 * h);
    }
    Ok(total)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}
