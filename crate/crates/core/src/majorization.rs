//! Majorization predicates on nonnegative strings and the convex-sum
//! inequalities they induce.
//!
//! All comparisons run on decreasing rearrangements. `hlp_majorizes(x, y)`
//! asks whether `y` dominates `x` in the classical sense (every top-k sum of
//! `x` at most the corresponding sum of `y`, with equal totals);
//! `weak_majorizes` relaxes the total to `<=`. The *truncated* predicates
//! compare a long string `x` against a shorter `y`, checking top-k domination
//! only up to `|y| - 1` plus a one-sided total condition; the induced
//! inequalities pad the short side with `(n - m) f(0)`.
//!
//! Float policy: the exact comparisons of the underlying theorems are
//! implemented with relative slack `1e-12` (absolute floor `1e-300` on the
//! total-equality test), so ties survive rounding while genuine violations
//! of any visible size still fail.

use crate::error::{Error, Result};
use crate::functions::{audit_shape, SamplingPlan, ScalarFunction, ShapeFlags};
use crate::report::InequalityReport;
use crate::rng::Draw;
use serde::{Deserialize, Serialize};

const REL_EQ: f64 = 1e-12;
const ABS_FLOOR: f64 = 1e-300;
const ORACLE_MAX_LEN: usize = 8;

/// A string of nonnegative reals with a cached decreasing rearrangement.
#[derive(Debug, Clone, PartialEq)]
pub struct Str {
    values: Vec<f64>,
    sorted_desc: Vec<f64>,
}

impl Str {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::PreconditionFailed("string must be nonempty".into()));
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::PreconditionFailed(format!(
                    "entry {index} is not finite: {value}"
                )));
            }
            if value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let mut sorted_desc = values.clone();
        sorted_desc.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Self { values, sorted_desc })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sorted_desc(&self) -> &[f64] {
        &self.sorted_desc
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Sum of the `k` largest entries (the maximal k-term sum over distinct
    /// indices, by the rearrangement inequality).
    pub fn top_sum(&self, k: usize) -> f64 {
        self.sorted_desc[..k.min(self.len())].iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorizationKind {
    Hlp,
    Weak,
    TruncatedConvex,
    TruncatedConcave,
}

/// One strict-prefix comparison of the verdict ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub k: usize,
    pub top_x: f64,
    pub top_y: f64,
    pub ok: bool,
}

/// Outcome of a majorization test, with the per-k partial-sum ledger.
///
/// Rows cover `k = 1 .. K` where `K` is `|x| - 1` for same-length kinds and
/// `|y| - 1` for truncated kinds; the total-sum condition lives in
/// `total_x` / `total_y` and is folded into `holds` per the kind's rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub kind: MajorizationKind,
    pub holds: bool,
    pub ledger: Vec<LedgerRow>,
    pub total_x: f64,
    pub total_y: f64,
}

fn le_with_slack(a: f64, b: f64) -> bool {
    a <= b + REL_EQ * (1.0 + a.abs().max(b.abs()))
}

fn totals_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= (REL_EQ * a.abs().max(b.abs())).max(ABS_FLOOR)
}

fn prefix_ledger(x: &Str, y: &Str, upto: usize) -> (Vec<LedgerRow>, bool) {
    let mut rows = Vec::with_capacity(upto);
    let mut all_ok = true;
    for k in 1..=upto {
        let top_x = x.top_sum(k);
        let top_y = y.top_sum(k);
        let ok = le_with_slack(top_x, top_y);
        all_ok &= ok;
        rows.push(LedgerRow { k, top_x, top_y, ok });
    }
    (rows, all_ok)
}

/// Does `y` majorize `x` in the Hardy–Littlewood–Pólya sense?
pub fn hlp_majorizes(x: &Str, y: &Str) -> Result<MajorizationVerdict> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    let (ledger, prefixes_ok) = prefix_ledger(x, y, x.len() - 1);
    let (total_x, total_y) = (x.total(), y.total());
    Ok(MajorizationVerdict {
        kind: MajorizationKind::Hlp,
        holds: prefixes_ok && totals_equal(total_x, total_y),
        ledger,
        total_x,
        total_y,
    })
}

/// Does `y` weakly majorize `x` (totals relaxed to `<=`)?
pub fn weak_majorizes(x: &Str, y: &Str) -> Result<MajorizationVerdict> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    let (ledger, prefixes_ok) = prefix_ledger(x, y, x.len() - 1);
    let (total_x, total_y) = (x.total(), y.total());
    Ok(MajorizationVerdict {
        kind: MajorizationKind::Weak,
        holds: prefixes_ok && le_with_slack(total_x, total_y),
        ledger,
        total_x,
        total_y,
    })
}

fn truncated_sizes(x: &Str, y: &Str) -> Result<(usize, usize)> {
    let (n, m) = (x.len(), y.len());
    if m > n || m < 2 {
        return Err(Error::SizeOrder { n, m });
    }
    Ok((n, m))
}

/// Admissibility of `(x, y)` for the truncated *convex* comparison:
/// top-k sums of `x` at most those of `y` for `k < |y|`, and total of `x`
/// at most total of `y`.
pub fn truncated_convex_applicable(x: &Str, y: &Str) -> Result<MajorizationVerdict> {
    let (_, m) = truncated_sizes(x, y)?;
    let (ledger, prefixes_ok) = prefix_ledger(x, y, m - 1);
    let (total_x, total_y) = (x.total(), y.total());
    Ok(MajorizationVerdict {
        kind: MajorizationKind::TruncatedConvex,
        holds: prefixes_ok && le_with_slack(total_x, total_y),
        ledger,
        total_x,
        total_y,
    })
}

/// Admissibility for the truncated *concave* comparison: same prefix
/// domination, but the total of `x` must be at least the total of `y`.
pub fn truncated_concave_applicable(x: &Str, y: &Str) -> Result<MajorizationVerdict> {
    let (_, m) = truncated_sizes(x, y)?;
    let (ledger, prefixes_ok) = prefix_ledger(x, y, m - 1);
    let (total_x, total_y) = (x.total(), y.total());
    Ok(MajorizationVerdict {
        kind: MajorizationKind::TruncatedConcave,
        holds: prefixes_ok && le_with_slack(total_y, total_x),
        ledger,
        total_x,
        total_y,
    })
}

fn sum_of(f: &ScalarFunction, s: &Str) -> f64 {
    s.values().iter().map(|&v| f.eval(v)).sum()
}

fn majorization_inputs(f: &ScalarFunction, x: &Str, y: &Str) -> serde_json::Value {
    serde_json::json!({ "f": f.id(), "x": x.values(), "y": y.values() })
}

/// `sum f(x_i) <= sum f(y_j) + (n - m) f(0)` for audited nondecreasing
/// convex `f` on an admissible pair.
///
/// Returns `PreconditionFailed` when the pair is not admissible; a failed
/// function audit is reported as an inconclusive report instead (the margin
/// is still informative for diagnostics).
pub fn truncated_convex_inequality(
    f: &ScalarFunction,
    x: &Str,
    y: &Str,
) -> Result<InequalityReport> {
    let flags = audit_shape(f, &SamplingPlan::default())?;
    truncated_convex_inequality_audited(f, &flags, x, y)
}

/// Same as [`truncated_convex_inequality`] with a caller-supplied audit
/// (hoist the audit when evaluating many pairs against one function).
pub fn truncated_convex_inequality_audited(
    f: &ScalarFunction,
    audited: &ShapeFlags,
    x: &Str,
    y: &Str,
) -> Result<InequalityReport> {
    let verdict = truncated_convex_applicable(x, y)?;
    if !verdict.holds {
        return Err(Error::PreconditionFailed(
            "strings are not admissible for the truncated convex comparison".into(),
        ));
    }
    let (n, m) = (x.len(), y.len());
    let lhs = sum_of(f, x);
    let rhs = sum_of(f, y) + (n - m) as f64 * f.eval(0.0);
    Ok(InequalityReport::new(
        "truncated_convex",
        majorization_inputs(f, x, y),
        lhs,
        rhs,
        rhs - lhs,
    )
    .hypothesis("f audited nondecreasing", audited.nondecreasing)
    .hypothesis("f audited convex", audited.convex))
}

/// `sum f(x_i) >= sum f(y_j) + (n - m) f(0)` for audited nondecreasing
/// concave `f` on an admissible pair.
pub fn truncated_concave_inequality(
    f: &ScalarFunction,
    x: &Str,
    y: &Str,
) -> Result<InequalityReport> {
    let flags = audit_shape(f, &SamplingPlan::default())?;
    truncated_concave_inequality_audited(f, &flags, x, y)
}

/// Same as [`truncated_concave_inequality`] with a caller-supplied audit.
pub fn truncated_concave_inequality_audited(
    f: &ScalarFunction,
    audited: &ShapeFlags,
    x: &Str,
    y: &Str,
) -> Result<InequalityReport> {
    let verdict = truncated_concave_applicable(x, y)?;
    if !verdict.holds {
        return Err(Error::PreconditionFailed(
            "strings are not admissible for the truncated concave comparison".into(),
        ));
    }
    let (n, m) = (x.len(), y.len());
    let lhs = sum_of(f, x);
    let rhs = sum_of(f, y) + (n - m) as f64 * f.eval(0.0);
    Ok(InequalityReport::new(
        "truncated_concave",
        majorization_inputs(f, x, y),
        lhs,
        rhs,
        lhs - rhs,
    )
    .hypothesis("f audited nondecreasing", audited.nondecreasing)
    .hypothesis("f audited concave", audited.concave))
}

/// Six-number power comparison: if the q-th powers of `(r5, r6)` balance
/// those of `(r1..r4)` and `max(r1..r4) <= max(r5, r6)`, then for any
/// `p >= q` the p-th powers of the short side dominate.
pub fn enflo_check(r: [f64; 6], p: f64, q: f64) -> Result<InequalityReport> {
    if !(q > 0.0) || !(p >= q) {
        return Err(Error::PreconditionFailed(format!(
            "exponents must satisfy p >= q > 0, got p={p}, q={q}"
        )));
    }
    for (i, &v) in r.iter().enumerate() {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::PreconditionFailed(format!(
                "r[{i}] must be a positive real, got {v}"
            )));
        }
    }
    let long_max = r[..4].iter().fold(0.0_f64, |a, &b| a.max(b));
    let short_max = r[4].max(r[5]);
    if long_max > short_max {
        return Err(Error::PreconditionFailed(format!(
            "max of the four-term side ({long_max}) exceeds max of the two-term side ({short_max})"
        )));
    }
    let long_q: f64 = r[..4].iter().map(|&v| v.powf(q)).sum();
    let short_q = r[4].powf(q) + r[5].powf(q);
    if (long_q - short_q).abs() > 1e-9 * long_q.abs().max(short_q.abs()).max(1e-300) {
        return Err(Error::PreconditionFailed(format!(
            "q-th powers do not balance: {long_q} vs {short_q}"
        )));
    }
    let lhs: f64 = r[..4].iter().map(|&v| v.powf(p)).sum();
    let rhs = r[4].powf(p) + r[5].powf(p);
    Ok(InequalityReport::new(
        "enflo",
        serde_json::json!({ "r": r, "p": p, "q": q }),
        lhs,
        rhs,
        rhs - lhs,
    )
    .hypothesis("p >= q > 0", true)
    .hypothesis("q-th powers balance", true)
    .hypothesis("max(r1..r4) <= max(r5,r6)", true))
}

/// Independent oracle for the truncated inequalities: pad `y` with zeros to
/// the length of `x` and evaluate both sides by direct summation.
///
/// The margin is oriented the convex way (`sum f(padded y) - sum f(x)`);
/// the concave engine margin is its negation. No audits run here — this is
/// plumbing for cross-checks, not a theorem checker.
pub fn brute_force_oracle(f: &ScalarFunction, x: &Str, y: &Str) -> Result<InequalityReport> {
    let n = x.len();
    if n > ORACLE_MAX_LEN {
        return Err(Error::TooLarge { n, max: ORACLE_MAX_LEN });
    }
    truncated_sizes(x, y)?;
    let mut padded = y.values().to_vec();
    padded.resize(n, 0.0);
    let lhs = sum_of(f, x);
    let rhs: f64 = padded.iter().map(|&v| f.eval(v)).sum();
    Ok(InequalityReport::new(
        "brute_force_oracle",
        majorization_inputs(f, x, y),
        lhs,
        rhs,
        rhs - lhs,
    )
    .note("padded direct evaluation; margin oriented the convex way"))
}

/// Seeded generator of admissible pairs for the truncated *convex*
/// comparison: pad `y` with zeros, mix by random averaging transforms
/// (which only pull partial sums down), then shrink slightly.
pub fn random_convex_pair(draw: &mut Draw, n: usize, m: usize) -> (Str, Str) {
    assert!((2..=n).contains(&m), "need 2 <= m <= n");
    let y: Vec<f64> = (0..m).map(|_| draw.range(0.1, 10.0)).collect();
    let mut x = y.clone();
    x.resize(n, 0.0);
    for _ in 0..2 * n {
        let i = draw.index(n);
        let j = draw.index(n);
        if i == j {
            continue;
        }
        let lambda = draw.unit();
        let (a, b) = (x[i], x[j]);
        x[i] = lambda * a + (1.0 - lambda) * b;
        x[j] = (1.0 - lambda) * a + lambda * b;
    }
    let shrink = draw.range(0.9, 0.999);
    for v in &mut x {
        *v *= shrink;
    }
    (Str::new(x).unwrap(), Str::new(y).unwrap())
}

/// Seeded generator of admissible pairs for the truncated *concave*
/// comparison: lift the top `m - 1` entries of `x` into `y` with small
/// boosts, then give `y` a last entry small enough to keep its total below.
pub fn random_concave_pair(draw: &mut Draw, n: usize, m: usize) -> (Str, Str) {
    assert!((2..=n).contains(&m), "need 2 <= m <= n");
    let x = Str::new((0..n).map(|_| draw.range(0.1, 10.0)).collect()).unwrap();
    let slack = x.total() - x.top_sum(m - 1);
    let initial_budget = slack * draw.range(0.0, 0.9);
    let mut budget = initial_budget;
    let mut y = Vec::with_capacity(m);
    for j in 0..m - 1 {
        let boost = budget * draw.range(0.0, 0.5);
        y.push(x.sorted_desc()[j] + boost);
        budget -= boost;
    }
    // Whatever the boosts did not spend, plus the untouched part of the
    // slack, is the room left for the final entry of y under total(y) <=
    // total(x); take a strict fraction of it.
    let room = slack - (initial_budget - budget);
    y.push(room * draw.range(0.01, 0.99));
    (x, Str::new(y).unwrap())
}
