//! Quadruple and parallelogram-type comparisons on points of a normed space.

use serde_json::json;

use super::{chain_report, s0_gate, space_n, weighted_quadruple, Gate};
use crate::functions::ScalarFunction;
use crate::report::InequalityReport;
use crate::spaces::{Operand, SpaceKind};
use crate::{Error, Result};

/// The norm quadruple inequality: for any four points of a normed space,
/// ‖p−x‖ + ‖y−z‖ ≤ ‖p−y‖ + ‖x−z‖ + ‖p−z‖ + ‖x−y‖.
pub fn quadruple_norm(
    space: &SpaceKind,
    p: &Operand,
    x: &Operand,
    y: &Operand,
    z: &Operand,
) -> Result<InequalityReport> {
    let n_py = space.norm(&p.sub(y)?)?;
    let n_xz = space.norm(&x.sub(z)?)?;
    let n_pz = space.norm(&p.sub(z)?)?;
    let n_xy = space.norm(&x.sub(y)?)?;
    let n_px = space.norm(&p.sub(x)?)?;
    let n_yz = space.norm(&y.sub(z)?)?;
    let lhs = ((n_py + n_xz) + n_pz) + n_xy;
    let rhs = n_px + n_yz;
    let inputs = json!({
        "space": space.id(),
        "p": p.to_json(),
        "x": x.to_json(),
        "y": y.to_json(),
        "z": z.to_json(),
    });
    Ok(InequalityReport::new(
        "quadruple_norm",
        inputs,
        lhs,
        rhs,
        lhs - rhs,
    ))
}

/// Shared arithmetic for the functional quadruple family, phrased over the
/// points (y, z, q, r). Coefficient, term order, and association are fixed
/// here so every caller agrees bit for bit.
fn quadruple_core(
    f: &ScalarFunction,
    coeff: f64,
    space: &SpaceKind,
    y: &Operand,
    z: &Operand,
    q: &Operand,
    r: &Operand,
) -> Result<(f64, f64, f64)> {
    let plus = [
        space.norm(&y.sub(z)?)?,
        space.norm(&r.sub(q)?)?,
        space.norm(&z.sub(q)?)?,
        space.norm(&y.sub(r)?)?,
    ];
    let minus = [space.norm(&y.sub(q)?)?, space.norm(&z.sub(r)?)?];
    Ok(weighted_quadruple(f, coeff, plus, minus))
}

/// Inner-product-space quadruple inequality for an S_0 member f:
/// f(‖p−x‖) + f(‖y−z‖) ≤ f(‖p−y‖) + f(‖x−z‖) + f(‖p−z‖) + f(‖x−y‖).
///
/// Evaluates through the same core as [`schotz_banach`] at N = 2, so the two
/// checkers agree bit for bit on identical Euclidean operands.
pub fn schotz_inner(
    f: &ScalarFunction,
    space: &SpaceKind,
    x: &Operand,
    y: &Operand,
    z: &Operand,
    p: &Operand,
) -> Result<InequalityReport> {
    let gate = s0_gate(f)?;
    schotz_inner_gated(f, &gate, space, x, y, z, p)
}

/// [`schotz_inner`] with a caller-supplied gate, for sweeps.
pub fn schotz_inner_gated(
    f: &ScalarFunction,
    gate: &Gate,
    space: &SpaceKind,
    x: &Operand,
    y: &Operand,
    z: &Operand,
    p: &Operand,
) -> Result<InequalityReport> {
    if !space.is_euclidean() {
        return Err(Error::NotInnerProduct(space.id()));
    }
    // (y, z, q, r) = (p, y, x, z) reproduces the display terms exactly.
    let (lhs, rhs, margin) = quadruple_core(f, 2.0 / 2.0, space, p, y, x, z)?;
    let inputs = json!({
        "space": space.id(),
        "f": f.id(),
        "x": x.to_json(),
        "y": y.to_json(),
        "z": z.to_json(),
        "p": p.to_json(),
    });
    Ok(gate.stamp(InequalityReport::new(
        "schotz_inner",
        inputs,
        lhs,
        rhs,
        margin,
    )))
}

/// Functional parallelogram inequality with the space coefficient N:
/// f(‖u‖) + f(‖v‖) ≤ N f(‖(u−v)/2‖) + N f(‖(u+v)/2‖) for f in S_0.
pub fn functional_parallelogram(
    f: &ScalarFunction,
    space: &SpaceKind,
    u: &Operand,
    v: &Operand,
) -> Result<InequalityReport> {
    let gate = s0_gate(f)?;
    functional_parallelogram_gated(f, &gate, space, u, v)
}

/// [`functional_parallelogram`] with a caller-supplied gate.
pub fn functional_parallelogram_gated(
    f: &ScalarFunction,
    gate: &Gate,
    space: &SpaceKind,
    u: &Operand,
    v: &Operand,
) -> Result<InequalityReport> {
    let n = space_n(space)? as f64;
    let half_diff = space.norm(&u.sub(v)?.scale(0.5))?;
    let half_sum = space.norm(&u.add(v)?.scale(0.5))?;
    let lhs = n * f.eval(half_diff) + n * f.eval(half_sum);
    let rhs = f.eval(space.norm(u)?) + f.eval(space.norm(v)?);
    let inputs = json!({
        "space": space.id(),
        "f": f.id(),
        "n": n,
        "u": u.to_json(),
        "v": v.to_json(),
    });
    Ok(gate.stamp(InequalityReport::new(
        "functional_parallelogram",
        inputs,
        lhs,
        rhs,
        lhs - rhs,
    )))
}

/// Translated four-point form of the functional parallelogram inequality:
/// f(‖u‖) + f(‖v‖) ≤ (N/2)[f(‖u+x‖) + f(‖v+x‖) + f(‖x‖) + f(‖u+v+x‖)].
pub fn four_point_functional(
    f: &ScalarFunction,
    space: &SpaceKind,
    u: &Operand,
    v: &Operand,
    x: &Operand,
) -> Result<InequalityReport> {
    let gate = s0_gate(f)?;
    four_point_functional_gated(f, &gate, space, u, v, x)
}

/// [`four_point_functional`] with a caller-supplied gate.
pub fn four_point_functional_gated(
    f: &ScalarFunction,
    gate: &Gate,
    space: &SpaceKind,
    u: &Operand,
    v: &Operand,
    x: &Operand,
) -> Result<InequalityReport> {
    let n = space_n(space)? as f64;
    let plus = [
        space.norm(&u.add(x)?)?,
        space.norm(&v.add(x)?)?,
        space.norm(x)?,
        space.norm(&u.add(v)?.add(x)?)?,
    ];
    let minus = [space.norm(u)?, space.norm(v)?];
    let (lhs, rhs, margin) = weighted_quadruple(f, n / 2.0, plus, minus);
    let inputs = json!({
        "space": space.id(),
        "f": f.id(),
        "n": n,
        "u": u.to_json(),
        "v": v.to_json(),
        "x": x.to_json(),
    });
    Ok(gate.stamp(InequalityReport::new(
        "four_point_functional",
        inputs,
        lhs,
        rhs,
        margin,
    )))
}

/// Banach-space quadruple inequality for an S_0 member f:
/// f(‖y−q‖) + f(‖z−r‖) ≤ (N/2)[f(‖y−z‖) + f(‖r−q‖) + f(‖z−q‖) + f(‖y−r‖)].
pub fn schotz_banach(
    f: &ScalarFunction,
    space: &SpaceKind,
    y: &Operand,
    z: &Operand,
    q: &Operand,
    r: &Operand,
) -> Result<InequalityReport> {
    let gate = s0_gate(f)?;
    schotz_banach_gated(f, &gate, space, y, z, q, r)
}

/// [`schotz_banach`] with a caller-supplied gate.
pub fn schotz_banach_gated(
    f: &ScalarFunction,
    gate: &Gate,
    space: &SpaceKind,
    y: &Operand,
    z: &Operand,
    q: &Operand,
    r: &Operand,
) -> Result<InequalityReport> {
    let n = space_n(space)? as f64;
    let (lhs, rhs, margin) = quadruple_core(f, n / 2.0, space, y, z, q, r)?;
    let inputs = json!({
        "space": space.id(),
        "f": f.id(),
        "n": n,
        "y": y.to_json(),
        "z": z.to_json(),
        "q": q.to_json(),
        "r": r.to_json(),
    });
    Ok(gate.stamp(InequalityReport::new(
        "schotz_banach",
        inputs,
        lhs,
        rhs,
        margin,
    )))
}

/// Two-sided power comparison with exponent α in [1, 2]:
/// ‖u‖^α + ‖v‖^α ≤ N(‖(u−v)/2‖^α + ‖(u+v)/2‖^α) ≤ N²(‖u‖^α + ‖v‖^α).
pub fn alfa_power(
    space: &SpaceKind,
    u: &Operand,
    v: &Operand,
    alpha: f64,
) -> Result<InequalityReport> {
    if !(1.0..=2.0).contains(&alpha) {
        return Err(Error::BadAlpha(alpha));
    }
    let n = space_n(space)? as f64;
    let base = space.norm(u)?.powf(alpha) + space.norm(v)?.powf(alpha);
    let half_diff = space.norm(&u.sub(v)?.scale(0.5))?;
    let half_sum = space.norm(&u.add(v)?.scale(0.5))?;
    let mid = n * (half_diff.powf(alpha) + half_sum.powf(alpha));
    let upper = (n * n) * base;
    let inputs = json!({
        "space": space.id(),
        "alpha": alpha,
        "n": n,
        "u": u.to_json(),
        "v": v.to_json(),
    });
    Ok(chain_report("alfa_power", inputs, mid, base, upper))
}
