//! Hanner-type, Clarkson-type, and two-uniform-convexity checkers on pairs
//! and quadruples of a p-normed space.
//!
//! Matrix operands carry extra scope rows: Hanner-type comparisons on
//! Schatten operands are only backed in the regimes (HS1) p ≤ 4/3 or (HS2)
//! u ± v positive semidefinite (for p ≤ 2), respectively p ≥ 4 or u, v
//! positive semidefinite (for p ≥ 2). Outside those regimes the report is
//! downgraded to inconclusive instead of erroring, so sweeps can count the
//! skipped cases.

use serde_json::json;

use super::{chain_report, power_composite_gate, s0_gate, sqrt_composite_gate, Gate};
use crate::functions::ScalarFunction;
use crate::report::InequalityReport;
use crate::spaces::{c_constant, c_tilde, floor_two_p_minus_one, Operand, PsdMatrix, SpaceKind};
use crate::{Error, Result};

fn require_finite_p_above_one(p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::BadP(p));
    }
    Ok(p)
}

/// Scope row for Hanner-type checks on matrix operands; `None` for vectors.
fn hanner_schatten_scope(p: f64, u: &Operand, v: &Operand) -> Option<(String, bool)> {
    let (mu, mv) = match (u, v) {
        (Operand::Matrix(mu), Operand::Matrix(mv)) => (mu, mv),
        _ => return None,
    };
    let psd = |m: &nalgebra::DMatrix<f64>| PsdMatrix::new(m.clone()).is_ok();
    if p <= 2.0 {
        let hs1 = p <= 4.0 / 3.0;
        let hs2 = psd(&(mu + mv)) && psd(&(mu - mv));
        Some((
            "schatten scope: p <= 4/3 (HS1) or u+v and u-v positive semidefinite (HS2)".into(),
            hs1 || hs2,
        ))
    } else {
        let hs1 = p >= 4.0;
        let hs2 = psd(mu) && psd(mv);
        Some((
            "schatten scope: p >= 4 (HS1) or u and v positive semidefinite (HS2)".into(),
            hs1 || hs2,
        ))
    }
}

/// Scalar Clarkson-type inequality for an S_0 member f:
/// f(|a|) + f(|b|) ≤ 2 f(|a−b|/2) + 2 f(|a+b|/2).
pub fn clarkson_scalar(f: &ScalarFunction, a: f64, b: f64) -> Result<InequalityReport> {
    let gate = s0_gate(f)?;
    clarkson_scalar_gated(f, &gate, a, b)
}

/// [`clarkson_scalar`] with a caller-supplied gate.
pub fn clarkson_scalar_gated(
    f: &ScalarFunction,
    gate: &Gate,
    a: f64,
    b: f64,
) -> Result<InequalityReport> {
    let lhs = 2.0 * f.eval((a - b).abs() / 2.0) + 2.0 * f.eval((a + b).abs() / 2.0);
    let rhs = f.eval(a.abs()) + f.eval(b.abs());
    let inputs = json!({ "f": f.id(), "a": a, "b": b });
    Ok(gate.stamp(InequalityReport::new(
        "clarkson_scalar",
        inputs,
        lhs,
        rhs,
        lhs - rhs,
    )))
}

/// Classic Hanner inequality on a p-normed space, orientation flipping at
/// p = 2: for p in (1, 2],
/// (‖u‖+‖v‖)^p + |‖u‖−‖v‖|^p ≤ ‖u+v‖^p + ‖u−v‖^p, reversed for p ≥ 2.
pub fn hanner_classic(space: &SpaceKind, u: &Operand, v: &Operand) -> Result<InequalityReport> {
    let p = require_finite_p_above_one(space.p())?;
    let nu = space.norm(u)?;
    let nv = space.norm(v)?;
    let vec_side = space.norm(&u.add(v)?)?.powf(p) + space.norm(&u.sub(v)?)?.powf(p);
    let sum_side = (nu + nv).powf(p) + (nu - nv).abs().powf(p);
    let (lhs, rhs) = if p <= 2.0 {
        (vec_side, sum_side)
    } else {
        (sum_side, vec_side)
    };
    let inputs = json!({
        "space": space.id(),
        "u": u.to_json(),
        "v": v.to_json(),
    });
    let mut report = InequalityReport::new("hanner_classic", inputs, lhs, rhs, lhs - rhs);
    if let Some((condition, passed)) = hanner_schatten_scope(p, u, v) {
        report = report.hypothesis(condition, passed);
    }
    Ok(report)
}

/// Gate for [`hanner_functional`]: f nondecreasing with f(0) = 0,
/// additionally convex when p ≤ 2, and f(x^(1/p)) audited concave.
pub fn hanner_gate(f: &ScalarFunction, p: f64) -> Result<Gate> {
    power_composite_gate(f, p, p <= 2.0)
}

/// Functional Hanner inequality: for p in (1, 2],
/// f(‖u‖+‖v‖) + f(|‖u‖−‖v‖|) ≤ f(‖u+v‖) + f(‖u−v‖), reversed for p ≥ 2.
pub fn hanner_functional(
    f: &ScalarFunction,
    space: &SpaceKind,
    u: &Operand,
    v: &Operand,
) -> Result<InequalityReport> {
    let p = require_finite_p_above_one(space.p())?;
    let gate = hanner_gate(f, p)?;
    hanner_functional_gated(f, &gate, space, u, v)
}

/// [`hanner_functional`] with a caller-supplied gate.
pub fn hanner_functional_gated(
    f: &ScalarFunction,
    gate: &Gate,
    space: &SpaceKind,
    u: &Operand,
    v: &Operand,
) -> Result<InequalityReport> {
    let p = require_finite_p_above_one(space.p())?;
    let nu = space.norm(u)?;
    let nv = space.norm(v)?;
    let vec_side = f.eval(space.norm(&u.add(v)?)?) + f.eval(space.norm(&u.sub(v)?)?);
    let sum_side = f.eval(nu + nv) + f.eval((nu - nv).abs());
    let (lhs, rhs) = if p <= 2.0 {
        (vec_side, sum_side)
    } else {
        (sum_side, vec_side)
    };
    let inputs = json!({
        "space": space.id(),
        "f": f.id(),
        "u": u.to_json(),
        "v": v.to_json(),
    });
    let mut report =
        gate.stamp(InequalityReport::new("hanner_functional", inputs, lhs, rhs, lhs - rhs));
    if let Some((condition, passed)) = hanner_schatten_scope(p, u, v) {
        report = report.hypothesis(condition, passed);
    }
    Ok(report)
}

/// The easy Clarkson chain: for p in (1, 2],
/// 2^(p−1)(‖u‖^p+‖v‖^p) ≤ ‖u−v‖^p+‖u+v‖^p ≤ 2(‖u‖^p+‖v‖^p),
/// with the constants 2^(p−1) and 2 swapped for p ≥ 2.
pub fn easy_clarkson(space: &SpaceKind, u: &Operand, v: &Operand) -> Result<InequalityReport> {
    let p = require_finite_p_above_one(space.p())?;
    let base = space.norm(u)?.powf(p) + space.norm(v)?.powf(p);
    let mid = space.norm(&u.sub(v)?)?.powf(p) + space.norm(&u.add(v)?)?.powf(p);
    let sharp = 2f64.powf(p - 1.0) * base;
    let loose = 2.0 * base;
    let (lower, upper) = if p <= 2.0 {
        (sharp, loose)
    } else {
        (loose, sharp)
    };
    let inputs = json!({
        "space": space.id(),
        "u": u.to_json(),
        "v": v.to_json(),
    });
    Ok(chain_report("easy_clarkson", inputs, mid, lower, upper))
}

/// Quadruple inequality on a p-normed space with coefficient 1 for
/// p in (1, 2] and C(p)/2 for p ≥ 2:
/// f(‖y−q‖) + f(‖z−r‖) ≤ coeff · [f(‖y−z‖)+f(‖r−q‖)+f(‖z−q‖)+f(‖y−r‖)].
pub fn lp_quadruple(
    f: &ScalarFunction,
    space: &SpaceKind,
    q: &Operand,
    r: &Operand,
    y: &Operand,
    z: &Operand,
) -> Result<InequalityReport> {
    let p = require_finite_p_above_one(space.p())?;
    let gate = power_composite_gate(f, p, true)?;
    lp_quadruple_gated(f, &gate, space, q, r, y, z)
}

/// [`lp_quadruple`] with a caller-supplied gate.
pub fn lp_quadruple_gated(
    f: &ScalarFunction,
    gate: &Gate,
    space: &SpaceKind,
    q: &Operand,
    r: &Operand,
    y: &Operand,
    z: &Operand,
) -> Result<InequalityReport> {
    let p = require_finite_p_above_one(space.p())?;
    let coeff = if p <= 2.0 { 1.0 } else { c_constant(p)? / 2.0 };
    let plus = [
        space.norm(&y.sub(z)?)?,
        space.norm(&r.sub(q)?)?,
        space.norm(&z.sub(q)?)?,
        space.norm(&y.sub(r)?)?,
    ];
    let minus = [space.norm(&y.sub(q)?)?, space.norm(&z.sub(r)?)?];
    let (lhs, rhs, margin) = super::weighted_quadruple(f, coeff, plus, minus);
    let inputs = json!({
        "space": space.id(),
        "f": f.id(),
        "coeff": coeff,
        "q": q.to_json(),
        "r": r.to_json(),
        "y": y.to_json(),
        "z": z.to_json(),
    });
    Ok(gate.stamp(InequalityReport::new(
        "lp_quadruple",
        inputs,
        lhs,
        rhs,
        margin,
    )))
}

/// The optimal two-uniform convexity inequality with squared p-norms:
/// for p in (1, 2],
/// 2‖(x+y)/2‖² + 2(p−1)‖(x−y)/2‖² ≤ ‖x‖² + ‖y‖², reversed for p ≥ 2.
pub fn two_unif_convexity_classic(
    space: &SpaceKind,
    x: &Operand,
    y: &Operand,
) -> Result<InequalityReport> {
    let p = require_finite_p_above_one(space.p())?;
    let sq = |t: f64| t * t;
    let base = sq(space.norm(x)?) + sq(space.norm(y)?);
    let modulus = 2.0 * sq(space.norm(&x.add(y)?.scale(0.5))?)
        + 2.0 * (p - 1.0) * sq(space.norm(&x.sub(y)?.scale(0.5))?);
    let (lhs, rhs) = if p <= 2.0 {
        (base, modulus)
    } else {
        (modulus, base)
    };
    let inputs = json!({
        "space": space.id(),
        "x": x.to_json(),
        "y": y.to_json(),
    });
    Ok(InequalityReport::new(
        "two_unif_convexity_classic",
        inputs,
        lhs,
        rhs,
        lhs - rhs,
    ))
}

/// Gate for [`two_unif_convexity_functional`]: the p ≤ 2 branch needs f
/// nondecreasing with f(0) = 0 and f(x^(1/2)) audited convex; the p ≥ 2
/// branch needs f in S_0.
pub fn two_unif_functional_gate(f: &ScalarFunction, p: f64) -> Result<Gate> {
    if p <= 2.0 {
        sqrt_composite_gate(f)
    } else {
        s0_gate(f)
    }
}

/// Functional two-uniform convexity. For p in (1, 2]:
/// 2 f(‖(x+y)/2‖) + ⌊2(p−1)⌋ f(‖(x−y)/2‖) ≤ f(‖x‖) + f(‖y‖);
/// for p ≥ 2: f(‖x‖) + f(‖y‖) ≤ 2 f(‖(x+y)/2‖) + 2 C̃(p) f(‖(x−y)/2‖).
pub fn two_unif_convexity_functional(
    f: &ScalarFunction,
    space: &SpaceKind,
    x: &Operand,
    y: &Operand,
) -> Result<InequalityReport> {
    let p = require_finite_p_above_one(space.p())?;
    let gate = two_unif_functional_gate(f, p)?;
    two_unif_convexity_functional_gated(f, &gate, space, x, y)
}

/// [`two_unif_convexity_functional`] with a caller-supplied gate.
pub fn two_unif_convexity_functional_gated(
    f: &ScalarFunction,
    gate: &Gate,
    space: &SpaceKind,
    x: &Operand,
    y: &Operand,
) -> Result<InequalityReport> {
    let p = require_finite_p_above_one(space.p())?;
    let fx = f.eval(space.norm(x)?);
    let fy = f.eval(space.norm(y)?);
    let f_mid = f.eval(space.norm(&x.add(y)?.scale(0.5))?);
    let f_hd = f.eval(space.norm(&x.sub(y)?.scale(0.5))?);
    let inputs = json!({
        "space": space.id(),
        "f": f.id(),
        "x": x.to_json(),
        "y": y.to_json(),
    });
    let report = if p <= 2.0 {
        let k = floor_two_p_minus_one(p)?;
        let lhs = fx + fy;
        let rhs = 2.0 * f_mid + f64::from(k) * f_hd;
        let mut report =
            InequalityReport::new("two_unif_convexity_functional", inputs, lhs, rhs, lhs - rhs);
        if k == 0 {
            report = report.note(
                "degenerate coefficient: floor(2(p-1)) = 0, the comparison reduces to midpoint convexity",
            );
        }
        report
    } else {
        let ct = c_tilde(p)?;
        let lhs = 2.0 * f_mid + (2.0 * ct) * f_hd;
        let rhs = fx + fy;
        InequalityReport::new("two_unif_convexity_functional", inputs, lhs, rhs, lhs - rhs)
    };
    Ok(gate.stamp(report))
}

/// Quadruple form of two-uniform convexity for p ≥ 2 and f in S_0:
/// f(‖y−q‖) + f(‖z−r‖) ≤ f(‖z−q‖) + f(‖y−r‖) + C̃(p)[f(‖y−z‖) + f(‖r−q‖)].
pub fn two_unif_quadruple_p_ge_2(
    f: &ScalarFunction,
    space: &SpaceKind,
    q: &Operand,
    r: &Operand,
    y: &Operand,
    z: &Operand,
) -> Result<InequalityReport> {
    let gate = s0_gate(f)?;
    two_unif_quadruple_p_ge_2_gated(f, &gate, space, q, r, y, z)
}

/// [`two_unif_quadruple_p_ge_2`] with a caller-supplied gate.
pub fn two_unif_quadruple_p_ge_2_gated(
    f: &ScalarFunction,
    gate: &Gate,
    space: &SpaceKind,
    q: &Operand,
    r: &Operand,
    y: &Operand,
    z: &Operand,
) -> Result<InequalityReport> {
    let p = space.p();
    let ct = c_tilde(p)?;
    let lhs = ((f.eval(space.norm(&z.sub(q)?)?) + f.eval(space.norm(&y.sub(r)?)?))
        + ct * f.eval(space.norm(&y.sub(z)?)?))
        + ct * f.eval(space.norm(&r.sub(q)?)?);
    let rhs = f.eval(space.norm(&y.sub(q)?)?) + f.eval(space.norm(&z.sub(r)?)?);
    let inputs = json!({
        "space": space.id(),
        "f": f.id(),
        "c_tilde": ct,
        "q": q.to_json(),
        "r": r.to_json(),
        "y": y.to_json(),
        "z": z.to_json(),
    });
    Ok(gate.stamp(InequalityReport::new(
        "two_unif_quadruple_p_ge_2",
        inputs,
        lhs,
        rhs,
        lhs - rhs,
    )))
}

/// Translated form of two-uniform convexity for p ≥ 2 and f in S_0:
/// f(‖x‖) + f(‖y‖) ≤ f(‖v‖) + f(‖x+y+v‖) + C̃(p)[f(‖x+u‖) + f(‖y+u‖)].
///
/// The source statement quantifies only one translation; both readings are
/// exposed: `equal_translations` ties v to u.
pub fn two_unif_translated(
    f: &ScalarFunction,
    space: &SpaceKind,
    x: &Operand,
    y: &Operand,
    u: &Operand,
    v: &Operand,
    equal_translations: bool,
) -> Result<InequalityReport> {
    let gate = s0_gate(f)?;
    two_unif_translated_gated(f, &gate, space, x, y, u, v, equal_translations)
}

/// [`two_unif_translated`] with a caller-supplied gate.
#[allow(clippy::too_many_arguments)]
pub fn two_unif_translated_gated(
    f: &ScalarFunction,
    gate: &Gate,
    space: &SpaceKind,
    x: &Operand,
    y: &Operand,
    u: &Operand,
    v: &Operand,
    equal_translations: bool,
) -> Result<InequalityReport> {
    let p = space.p();
    let ct = c_tilde(p)?;
    let veff = if equal_translations { u } else { v };
    let lhs = ((f.eval(space.norm(veff)?) + f.eval(space.norm(&x.add(y)?.add(veff)?)?))
        + ct * f.eval(space.norm(&x.add(u)?)?))
        + ct * f.eval(space.norm(&y.add(u)?)?);
    let rhs = f.eval(space.norm(x)?) + f.eval(space.norm(y)?);
    let inputs = json!({
        "space": space.id(),
        "f": f.id(),
        "c_tilde": ct,
        "equal_translations": equal_translations,
        "x": x.to_json(),
        "y": y.to_json(),
        "u": u.to_json(),
        "v": v.to_json(),
    });
    let mode = if equal_translations {
        "translations: equal (v = u)"
    } else {
        "translations: independent u, v"
    };
    Ok(gate.stamp(
        InequalityReport::new("two_unif_translated", inputs, lhs, rhs, lhs - rhs).note(mode),
    ))
}
