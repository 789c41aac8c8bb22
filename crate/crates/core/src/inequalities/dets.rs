//! Determinantal inequalities on triples of positive semidefinite matrices.
//!
//! The strengthened variant `zhang_strengthened` replaces sums by averaged
//! matrices inside the determinants; that version is known to fail, and the
//! checker reports its negative margin faithfully (it appears in the
//! expected-false list of the suite).
//!
//! The square-root family (`serre_det`, `serre_functional`) carries a scope
//! row restricting the backed claim to 2x2 operands: on larger matrices the
//! comparison is evaluated but reported as inconclusive, because explicit
//! 3x3 counterexamples exist.

use nalgebra::DMatrix;
use serde_json::json;

use super::{monotone_convex_gate, nonneg_monotone_concave_gate, Gate};
use crate::functions::ScalarFunction;
use crate::report::InequalityReport;
use crate::spaces::PsdMatrix;
use crate::{Error, Result};

/// Band inside which a numerically negative determinant of a PSD sum is
/// treated as an exact zero before taking square roots.
const DET_CLIP_BAND: f64 = -1e-10;

fn require_same_dim(a: &PsdMatrix, b: &PsdMatrix, c: &PsdMatrix) -> Result<usize> {
    let n = a.dim();
    for other in [b.dim(), c.dim()] {
        if other != n {
            return Err(Error::DimensionMismatch { left: n, right: other });
        }
    }
    Ok(n)
}

fn mat_json(m: &DMatrix<f64>) -> serde_json::Value {
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    json!(rows)
}

fn triple_inputs(a: &PsdMatrix, b: &PsdMatrix, c: &PsdMatrix) -> serde_json::Value {
    json!({
        "A": mat_json(a.entries()),
        "B": mat_json(b.entries()),
        "C": mat_json(c.entries()),
    })
}

/// Square root of a determinant that is nonnegative in exact arithmetic;
/// values inside the clipping band count as zero, values below it error.
fn sqrt_det(m: &DMatrix<f64>) -> Result<f64> {
    let d = m.determinant();
    if d < DET_CLIP_BAND {
        return Err(Error::NegativeDeterminant(d));
    }
    Ok(d.max(0.0).sqrt())
}

/// Determinantal superadditivity with a reference term:
/// det(A+C) + det(B+C) ≤ det(A+B+C) + det(C).
pub fn zhang_det(a: &PsdMatrix, b: &PsdMatrix, c: &PsdMatrix) -> Result<InequalityReport> {
    require_same_dim(a, b, c)?;
    let d_abc = (a.entries() + b.entries() + c.entries()).determinant();
    let d_c = c.entries().determinant();
    let d_ac = (a.entries() + c.entries()).determinant();
    let d_bc = (b.entries() + c.entries()).determinant();
    let lhs = d_abc + d_c;
    let rhs = d_ac + d_bc;
    Ok(InequalityReport::new(
        "zhang_det",
        triple_inputs(a, b, c),
        lhs,
        rhs,
        lhs - rhs,
    ))
}

/// Functional form of [`zhang_det`] for a nondecreasing convex f. Two
/// displays are evaluated and the report carries the binding one:
/// (i)  f(det(A+C)) + f(det(B+C)) ≤ f(det(A+B+C)) + f(det C);
/// (ii) (2/3)[f(det(A+B)) + f(det(B+C)) + f(det(A+C))]
///        ≤ [f(det A) + f(det B) + f(det C)]/3 + f(det(A+B+C)).
pub fn zhang_functional(
    f: &ScalarFunction,
    a: &PsdMatrix,
    b: &PsdMatrix,
    c: &PsdMatrix,
) -> Result<InequalityReport> {
    let gate = monotone_convex_gate(f)?;
    zhang_functional_gated(f, &gate, a, b, c)
}

/// [`zhang_functional`] with a caller-supplied gate.
pub fn zhang_functional_gated(
    f: &ScalarFunction,
    gate: &Gate,
    a: &PsdMatrix,
    b: &PsdMatrix,
    c: &PsdMatrix,
) -> Result<InequalityReport> {
    require_same_dim(a, b, c)?;
    let d_a = a.entries().determinant();
    let d_b = b.entries().determinant();
    let d_c = c.entries().determinant();
    let d_ab = (a.entries() + b.entries()).determinant();
    let d_bc = (b.entries() + c.entries()).determinant();
    let d_ac = (a.entries() + c.entries()).determinant();
    let d_abc = (a.entries() + b.entries() + c.entries()).determinant();

    let lhs_i = f.eval(d_abc) + f.eval(d_c);
    let rhs_i = f.eval(d_ac) + f.eval(d_bc);
    let margin_i = lhs_i - rhs_i;

    let lhs_ii = ((f.eval(d_a) + f.eval(d_b)) + f.eval(d_c)) / 3.0 + f.eval(d_abc);
    let rhs_ii = (2.0 / 3.0) * ((f.eval(d_ab) + f.eval(d_bc)) + f.eval(d_ac));
    let margin_ii = lhs_ii - rhs_ii;

    let mut inputs = triple_inputs(a, b, c);
    inputs["f"] = json!(f.id());
    let (lhs, rhs, margin, which) = if margin_i <= margin_ii {
        (lhs_i, rhs_i, margin_i, "i")
    } else {
        (lhs_ii, rhs_ii, margin_ii, "ii")
    };
    let note = format!(
        "margin (i) = {margin_i}, margin (ii) = {margin_ii}; binding: ({which})"
    );
    Ok(gate.stamp(
        InequalityReport::new("zhang_functional", inputs, lhs, rhs, margin).note(note),
    ))
}

/// The mean-based strengthening of display (ii): determinants of averaged
/// matrices in place of determinants of sums,
/// (2/3)[f(det((A+B)/2)) + f(det((B+C)/2)) + f(det((A+C)/2))]
///   ≤ [f(det A) + f(det B) + f(det C)]/3 + f(det((A+B+C)/3)).
///
/// This mirrors the scalar three-point inequality for convex f literally,
/// but the determinant is not concave enough for it: the comparison fails
/// on explicit inputs and the checker reports that faithfully.
pub fn zhang_strengthened(
    f: &ScalarFunction,
    a: &PsdMatrix,
    b: &PsdMatrix,
    c: &PsdMatrix,
) -> Result<InequalityReport> {
    let gate = monotone_convex_gate(f)?;
    zhang_strengthened_gated(f, &gate, a, b, c)
}

/// [`zhang_strengthened`] with a caller-supplied gate.
pub fn zhang_strengthened_gated(
    f: &ScalarFunction,
    gate: &Gate,
    a: &PsdMatrix,
    b: &PsdMatrix,
    c: &PsdMatrix,
) -> Result<InequalityReport> {
    require_same_dim(a, b, c)?;
    let d_a = a.entries().determinant();
    let d_b = b.entries().determinant();
    let d_c = c.entries().determinant();
    let mean2 = |m: &DMatrix<f64>, n: &DMatrix<f64>| ((m + n) * 0.5).determinant();
    let d_ab = mean2(a.entries(), b.entries());
    let d_bc = mean2(b.entries(), c.entries());
    let d_ac = mean2(a.entries(), c.entries());
    let d_abc = ((a.entries() + b.entries() + c.entries()) / 3.0).determinant();

    let lhs = ((f.eval(d_a) + f.eval(d_b)) + f.eval(d_c)) / 3.0 + f.eval(d_abc);
    let rhs = (2.0 / 3.0) * ((f.eval(d_ab) + f.eval(d_bc)) + f.eval(d_ac));
    let mut inputs = triple_inputs(a, b, c);
    inputs["f"] = json!(f.id());
    Ok(gate.stamp(InequalityReport::new(
        "zhang_strengthened",
        inputs,
        lhs,
        rhs,
        lhs - rhs,
    )))
}

fn serre_scope_row(n: usize) -> (String, bool) {
    ("operands are 2x2 matrices".into(), n == 2)
}

/// Superadditivity pattern for the square-rooted determinant:
/// √det A + √det B + √det C + √det(A+B+C)
///   ≤ √det(A+B) + √det(B+C) + √det(C+A).
///
/// Backed for 2x2 operands only; on larger matrices the report is
/// inconclusive (counterexamples exist from dimension 3 on).
pub fn serre_det(a: &PsdMatrix, b: &PsdMatrix, c: &PsdMatrix) -> Result<InequalityReport> {
    let n = require_same_dim(a, b, c)?;
    let s_a = sqrt_det(a.entries())?;
    let s_b = sqrt_det(b.entries())?;
    let s_c = sqrt_det(c.entries())?;
    let s_ab = sqrt_det(&(a.entries() + b.entries()))?;
    let s_bc = sqrt_det(&(b.entries() + c.entries()))?;
    let s_ca = sqrt_det(&(c.entries() + a.entries()))?;
    let s_abc = sqrt_det(&(a.entries() + b.entries() + c.entries()))?;
    let lhs = (s_ab + s_bc) + s_ca;
    let rhs = ((s_a + s_b) + s_c) + s_abc;
    let (condition, passed) = serre_scope_row(n);
    Ok(
        InequalityReport::new("serre_det", triple_inputs(a, b, c), lhs, rhs, lhs - rhs)
            .hypothesis(condition, passed),
    )
}

/// Functional form of [`serre_det`] for a nonnegative nondecreasing concave
/// f: f(√det A + √det B + √det C) + f(√det(A+B+C))
///      ≤ f(√det(A+B)) + f(√det(B+C)) + f(√det(C+A)).
pub fn serre_functional(
    f: &ScalarFunction,
    a: &PsdMatrix,
    b: &PsdMatrix,
    c: &PsdMatrix,
) -> Result<InequalityReport> {
    let gate = nonneg_monotone_concave_gate(f)?;
    serre_functional_gated(f, &gate, a, b, c)
}

/// [`serre_functional`] with a caller-supplied gate.
pub fn serre_functional_gated(
    f: &ScalarFunction,
    gate: &Gate,
    a: &PsdMatrix,
    b: &PsdMatrix,
    c: &PsdMatrix,
) -> Result<InequalityReport> {
    let n = require_same_dim(a, b, c)?;
    let s_a = sqrt_det(a.entries())?;
    let s_b = sqrt_det(b.entries())?;
    let s_c = sqrt_det(c.entries())?;
    let s_ab = sqrt_det(&(a.entries() + b.entries()))?;
    let s_bc = sqrt_det(&(b.entries() + c.entries()))?;
    let s_ca = sqrt_det(&(c.entries() + a.entries()))?;
    let s_abc = sqrt_det(&(a.entries() + b.entries() + c.entries()))?;
    let lhs = (f.eval(s_ab) + f.eval(s_bc)) + f.eval(s_ca);
    let rhs = f.eval((s_a + s_b) + s_c) + f.eval(s_abc);
    let mut inputs = triple_inputs(a, b, c);
    inputs["f"] = json!(f.id());
    let (condition, passed) = serre_scope_row(n);
    Ok(gate
        .stamp(InequalityReport::new(
            "serre_functional",
            inputs,
            lhs,
            rhs,
            lhs - rhs,
        ))
        .hypothesis(condition, passed))
}
