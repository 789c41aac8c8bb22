//! Grid audits that certify shape flags numerically.
//!
//! The decision procedure: order-k convexity holds iff every sampled
//! (k+1)-node divided difference is `>= -tau` (concavity: `<= tau`);
//! monotonicity is decided by pairwise value comparisons, nonnegativity by
//! grid values, and `vanishes_at_zero` by `|f(0)| <= tau`. The tolerance is
//! absolute on divided-difference values. Degenerate inputs (affine,
//! constant, quadratic) therefore report *both* flags of the relevant order,
//! which is the mathematically correct reading.

use super::{DividedDifferenceTable, ScalarFunction, ShapeFlags};
use crate::error::{Error, Result};
use crate::rng::Draw;

/// Fixed seed so audits are reproducible without configuration.
pub const DEFAULT_AUDIT_SEED: u64 = 0xA0D1_7000;

/// Sampling layout for [`audit_shape`].
#[derive(Debug, Clone, Copy)]
pub struct SamplingPlan {
    /// Lower end of the grid; kept strictly positive by default so functions
    /// with unbounded third derivatives near 0 stay evaluable.
    pub grid_start: f64,
    /// Upper end; `None` uses the function's domain hint.
    pub upper: Option<f64>,
    /// Uniform grid resolution (at least 50).
    pub grid_points: usize,
    /// Random quadruple draws (at least 200).
    pub quad_draws: usize,
    /// Absolute tolerance on divided-difference values.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            grid_start: 1e-6,
            upper: None,
            grid_points: 64,
            quad_draws: 256,
            tolerance: 1e-8,
            seed: DEFAULT_AUDIT_SEED,
        }
    }
}

impl SamplingPlan {
    pub fn with_upper(upper: f64) -> Self {
        Self { upper: Some(upper), ..Self::default() }
    }
}

/// Audit all seven shape flags of `f` on its (hinted) domain.
pub fn audit_shape(f: &ScalarFunction, plan: &SamplingPlan) -> Result<ShapeFlags> {
    if plan.grid_points < 50 {
        return Err(Error::PreconditionFailed(format!(
            "audit grid needs at least 50 points, got {}",
            plan.grid_points
        )));
    }
    if plan.quad_draws < 200 {
        return Err(Error::PreconditionFailed(format!(
            "audit needs at least 200 quadruple draws, got {}",
            plan.quad_draws
        )));
    }
    let lo = plan.grid_start.max(0.0);
    let hi = plan.upper.unwrap_or_else(|| f.domain_upper());
    if !(hi > lo) {
        return Err(Error::DegenerateInterval { a: lo, b: hi });
    }
    let tau = plan.tolerance;
    let n = plan.grid_points;
    let grid: Vec<f64> =
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&x| f.eval(x)).collect();

    let mut out = ShapeFlags {
        nonnegative: values.iter().all(|&v| v >= -tau),
        nondecreasing: values.windows(2).all(|w| w[1] - w[0] >= -tau),
        convex: true,
        concave: true,
        three_convex: true,
        three_concave: true,
        vanishes_at_zero: f.eval(0.0).abs() <= tau,
    };

    // Monotonicity sticks to value comparisons: slopes of clustered nodes
    // amplify rounding noise far beyond the audit tolerance.
    let mut absorb = |table: &DividedDifferenceTable| {
        for &d2 in table.order(2) {
            out.convex &= d2 >= -tau;
            out.concave &= d2 <= tau;
        }
        for &d3 in table.order(3) {
            out.three_convex &= d3 >= -tau;
            out.three_concave &= d3 <= tau;
        }
        let vals = table.order(0);
        for w in vals.windows(2) {
            out.nondecreasing &= w[1] - w[0] >= -tau;
        }
    };

    for w in grid.windows(4) {
        let table = DividedDifferenceTable::build(w, |x| f.eval(x))?;
        absorb(&table);
    }

    let mut draw = Draw::new(plan.seed);
    let min_sep = 1e-3 * (hi - lo);
    for _ in 0..plan.quad_draws {
        let nodes = draw_quadruple(&mut draw, lo, hi, min_sep);
        let table = DividedDifferenceTable::build(&nodes, |x| f.eval(x))?;
        absorb(&table);
    }
    Ok(out)
}

fn draw_quadruple(draw: &mut Draw, lo: f64, hi: f64, min_sep: f64) -> [f64; 4] {
    'retry: for _ in 0..64 {
        let mut nodes = [0.0; 4];
        for slot in &mut nodes {
            *slot = draw.range(lo, hi);
        }
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in nodes.windows(2) {
            if w[1] - w[0] < min_sep {
                continue 'retry;
            }
        }
        return nodes;
    }
    // Pathologically unlucky stream: fall back to a jittered uniform spread.
    let base = draw.range(lo, lo + (hi - lo) * 0.1);
    let step = (hi - base) / 4.0;
    [base, base + step, base + 2.0 * step, base + 3.0 * step]
}

/// Audit `f` and require every *declared* flag to be confirmed.
///
/// The check is one-sided: a flag declared `false` may still audit `true`
/// (tolerance bands make near-degenerate opposites indistinguishable), but a
/// declared `true` that fails the grid is an [`Error::AuditMismatch`].
pub fn verify_declared(f: &ScalarFunction, plan: &SamplingPlan) -> Result<ShapeFlags> {
    let audited = audit_shape(f, plan)?;
    let declared = f.declared();
    let pairs: [(&'static str, bool, bool); 7] = [
        ("nonnegative", declared.nonnegative, audited.nonnegative),
        ("nondecreasing", declared.nondecreasing, audited.nondecreasing),
        ("convex", declared.convex, audited.convex),
        ("concave", declared.concave, audited.concave),
        ("three_convex", declared.three_convex, audited.three_convex),
        ("three_concave", declared.three_concave, audited.three_concave),
        ("vanishes_at_zero", declared.vanishes_at_zero, audited.vanishes_at_zero),
    ];
    for (flag, wanted, got) in pairs {
        if wanted && !got {
            return Err(Error::AuditMismatch { flag });
        }
    }
    Ok(audited)
}

/// Audited membership in S_0 (nondecreasing, convex, 3-concave, f(0) = 0).
pub fn is_in_s0(f: &ScalarFunction, plan: &SamplingPlan) -> Result<bool> {
    Ok(audit_shape(f, plan)?.is_s0())
}
