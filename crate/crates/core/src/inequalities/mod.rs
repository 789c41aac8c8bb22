//! Checkers for the norm and functional inequalities under study.
//!
//! Every checker evaluates one inequality on concrete operands and returns an
//! [`InequalityReport`](crate::report::InequalityReport) whose margin is
//! oriented so that the inequality holds exactly when the margin clears
//! `-tolerance`. Hypotheses about the scalar function are established by
//! audit before any arithmetic happens: the [`Gate`] type runs the audits
//! once and replays the resulting rows into every report, so sweeps do not
//! pay the audit cost per trial. Operand-level conditions (positive cones,
//! matrix scopes) are recorded as per-report hypothesis rows instead; a
//! failed row downgrades the report to inconclusive rather than erroring.
//!
//! The checkers are grouped by operand shape:
//! - [`points`]: quadruple and parallelogram comparisons on points of a
//!   normed space,
//! - [`norms`]: Hanner/Clarkson-type and two-uniform-convexity families on
//!   pairs and quadruples,
//! - [`dets`]: determinant superadditivity on positive semidefinite
//!   matrices,
//! - [`euclid`]: Euclidean and positive-cone inequalities of
//!   Hornich–Hlawka type.

pub mod dets;
pub mod euclid;
pub mod norms;
pub mod points;

pub use dets::{
    serre_det, serre_functional, serre_functional_gated, zhang_det, zhang_functional,
    zhang_functional_gated, zhang_strengthened, zhang_strengthened_gated,
};
pub use euclid::{
    frechet_functional, frechet_functional_gated, frechet_functional_signed,
    frechet_functional_signed_gated, frechet_identity, hornich_hlawka, popoviciu_vec,
    popoviciu_vec_gated, popoviciu_vec_signed, popoviciu_vec_signed_gated, revhh_signed,
    revhh_signed_gated, strong_superadditivity,
};
pub use norms::{
    clarkson_scalar, clarkson_scalar_gated, easy_clarkson, hanner_classic, hanner_functional,
    hanner_functional_gated, hanner_gate, lp_quadruple, lp_quadruple_gated,
    two_unif_convexity_classic, two_unif_convexity_functional,
    two_unif_convexity_functional_gated, two_unif_functional_gate, two_unif_quadruple_p_ge_2,
    two_unif_quadruple_p_ge_2_gated, two_unif_translated, two_unif_translated_gated,
};
pub use points::{
    alfa_power, four_point_functional, four_point_functional_gated, functional_parallelogram,
    functional_parallelogram_gated, quadruple_norm, schotz_banach, schotz_banach_gated,
    schotz_inner, schotz_inner_gated,
};

use crate::functions::{audit_shape, compose_power, SamplingPlan, ScalarFunction, ShapeFlags};
use crate::report::{HypothesisCheck, InequalityReport};
use crate::spaces::{cnj_analytic, n_constant, SpaceKind};
use crate::{Error, Result};

/// Pre-verified hypothesis rows about a scalar function.
///
/// A `Gate` is built by auditing the function once; construction fails with
/// [`Error::HypothesisFailed`] when a required shape flag does not survive
/// its audit. A live gate therefore always carries all-passed rows, which
/// checkers replay into their reports for transparency.
#[derive(Debug, Clone, Default)]
pub struct Gate {
    rows: Vec<HypothesisCheck>,
}

impl Gate {
    /// The recorded hypothesis rows (all passed by construction).
    pub fn rows(&self) -> &[HypothesisCheck] {
        &self.rows
    }

    /// Replay the gate rows into a report.
    pub(crate) fn stamp(&self, mut report: InequalityReport) -> InequalityReport {
        for row in &self.rows {
            report = report.hypothesis(row.condition.clone(), row.passed);
        }
        report
    }

    fn require(&mut self, id: &str, what: &str, ok: bool) -> Result<()> {
        if !ok {
            return Err(Error::HypothesisFailed(format!(
                "function '{id}' failed its audit: expected {what}"
            )));
        }
        self.rows.push(HypothesisCheck {
            condition: format!("f = {id} audited {what}"),
            passed: true,
        });
        Ok(())
    }
}

fn audited(f: &ScalarFunction) -> Result<ShapeFlags> {
    audit_shape(f, &SamplingPlan::default())
}

/// Gate for membership in S_0: nondecreasing, convex, 3-concave, f(0) = 0.
pub fn s0_gate(f: &ScalarFunction) -> Result<Gate> {
    let flags = audited(f)?;
    let mut gate = Gate::default();
    gate.require(f.id(), "nondecreasing", flags.nondecreasing)?;
    gate.require(f.id(), "convex", flags.convex)?;
    gate.require(f.id(), "3-concave", flags.three_concave)?;
    gate.require(f.id(), "vanishing at zero", flags.vanishes_at_zero)?;
    Ok(gate)
}

/// Gate for nondecreasing convex functions.
pub fn monotone_convex_gate(f: &ScalarFunction) -> Result<Gate> {
    let flags = audited(f)?;
    let mut gate = Gate::default();
    gate.require(f.id(), "nondecreasing", flags.nondecreasing)?;
    gate.require(f.id(), "convex", flags.convex)?;
    Ok(gate)
}

/// Gate for nondecreasing concave functions.
pub fn monotone_concave_gate(f: &ScalarFunction) -> Result<Gate> {
    let flags = audited(f)?;
    let mut gate = Gate::default();
    gate.require(f.id(), "nondecreasing", flags.nondecreasing)?;
    gate.require(f.id(), "concave", flags.concave)?;
    Ok(gate)
}

/// Gate for nonnegative, nondecreasing, concave functions.
pub fn nonneg_monotone_concave_gate(f: &ScalarFunction) -> Result<Gate> {
    let flags = audited(f)?;
    let mut gate = Gate::default();
    gate.require(f.id(), "nonnegative", flags.nonnegative)?;
    gate.require(f.id(), "nondecreasing", flags.nondecreasing)?;
    gate.require(f.id(), "concave", flags.concave)?;
    Ok(gate)
}

/// Gate requiring f nondecreasing with f(0) = 0, optionally convex, and the
/// composition f(x^(1/p)) audited concave.
pub fn power_composite_gate(f: &ScalarFunction, p: f64, need_convex: bool) -> Result<Gate> {
    let flags = audited(f)?;
    let mut gate = Gate::default();
    gate.require(f.id(), "nondecreasing", flags.nondecreasing)?;
    gate.require(f.id(), "vanishing at zero", flags.vanishes_at_zero)?;
    if need_convex {
        gate.require(f.id(), "convex", flags.convex)?;
    }
    let composite = compose_power(f, 1.0 / p)?;
    let comp_flags = audited(&composite)?;
    gate.require(
        f.id(),
        &format!("concave after the substitution x -> x^(1/{p})"),
        comp_flags.concave,
    )?;
    Ok(gate)
}

/// Gate requiring f nondecreasing with f(0) = 0 and f(x^(1/2)) audited convex.
pub fn sqrt_composite_gate(f: &ScalarFunction) -> Result<Gate> {
    let flags = audited(f)?;
    let mut gate = Gate::default();
    gate.require(f.id(), "nondecreasing", flags.nondecreasing)?;
    gate.require(f.id(), "vanishing at zero", flags.vanishes_at_zero)?;
    let composite = compose_power(f, 0.5)?;
    let comp_flags = audited(&composite)?;
    gate.require(
        f.id(),
        "convex after the substitution x -> x^(1/2)",
        comp_flags.convex,
    )?;
    Ok(gate)
}

/// The coefficient N attached to a space: 2 C_NJ when that is an integer and
/// 4 otherwise.
pub(crate) fn space_n(space: &SpaceKind) -> Result<u32> {
    n_constant(cnj_analytic(space.p())?)
}

/// Evaluate coeff * [f(p0)+f(p1)+f(p2)+f(p3)] - [f(m0)+f(m1)] with a fixed
/// association order, so that checkers sharing this core agree bit for bit.
pub(crate) fn weighted_quadruple(
    f: &ScalarFunction,
    coeff: f64,
    plus: [f64; 4],
    minus: [f64; 2],
) -> (f64, f64, f64) {
    let bracket = ((f.eval(plus[0]) + f.eval(plus[1])) + f.eval(plus[2])) + f.eval(plus[3]);
    let lhs = coeff * bracket;
    let rhs = f.eval(minus[0]) + f.eval(minus[1]);
    (lhs, rhs, lhs - rhs)
}

/// Report a two-sided chain lower <= mid <= upper through its binding link:
/// the link with the smaller slack supplies lhs, rhs, and the margin, and a
/// note records which side bound. Ties bind to the lower link.
pub(crate) fn chain_report(
    check_id: &str,
    inputs: serde_json::Value,
    mid: f64,
    lower: f64,
    upper: f64,
) -> InequalityReport {
    let left = mid - lower;
    let right = upper - mid;
    if left <= right {
        InequalityReport::new(check_id, inputs, mid, lower, left).note("binding: lower link")
    } else {
        InequalityReport::new(check_id, inputs, upper, mid, right).note("binding: upper link")
    }
}
