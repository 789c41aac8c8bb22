//! Euclidean three-point inequalities: the quadratic identity, the
//! Hornich-Hlawka family, and its functional complements on the positive
//! cone.
//!
//! The `_signed` variants lift the positive-cone restriction so that search
//! routines can probe whether a cone-backed comparison survives on
//! arbitrary operands; their reports carry a note recording the lifted
//! hypothesis. The square-root instance with signs lifted has the fixed id
//! `revhh_signed` and is a known failure (it sits in the expected-false
//! list of the suite).

use nalgebra::DVector;
use serde_json::json;

use super::{monotone_concave_gate, sqrt_composite_gate, Gate};
use crate::functions::{catalog, ScalarFunction};
use crate::report::InequalityReport;
use crate::spaces::lp_norm;
use crate::{Error, Result};

const SIGNED_NOTE: &str = "signed operands: positive-cone restriction lifted";

fn require_same_len(x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> Result<()> {
    for other in [y.len(), z.len()] {
        if other != x.len() {
            return Err(Error::DimensionMismatch { left: x.len(), right: other });
        }
    }
    Ok(())
}

fn require_cone(vectors: &[&DVector<f64>]) -> Result<()> {
    for v in vectors {
        for (index, &value) in v.iter().enumerate() {
            if value < 0.0 {
                return Err(Error::NotInPositiveCone { index, value });
            }
        }
    }
    Ok(())
}

fn sq(v: &DVector<f64>) -> f64 {
    v.dot(v)
}

fn enorm(v: &DVector<f64>) -> f64 {
    lp_norm(2.0, v.as_slice())
}

fn triple_inputs(x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> serde_json::Value {
    json!({
        "x": x.as_slice(),
        "y": y.as_slice(),
        "z": z.as_slice(),
    })
}

/// The quadratic three-point identity
/// ‖x‖² + ‖y‖² + ‖z‖² + ‖x+y+z‖² = ‖x+y‖² + ‖y+z‖² + ‖z+x‖²,
/// checked as an equality: margin = −|lhs − rhs|.
pub fn frechet_identity(
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    require_same_len(x, y, z)?;
    let lhs = ((sq(x) + sq(y)) + sq(z)) + sq(&(x + y + z));
    let rhs = (sq(&(x + y)) + sq(&(y + z))) + sq(&(z + x));
    Ok(InequalityReport::new(
        "frechet_identity",
        triple_inputs(x, y, z),
        lhs,
        rhs,
        -(lhs - rhs).abs(),
    ))
}

/// The Hornich-Hlawka inequality applied to the β-th power of the norm with
/// β = 1/2^`n_power`:
/// ‖x+y‖^β + ‖y+z‖^β + ‖z+x‖^β ≤ ‖x‖^β + ‖y‖^β + ‖z‖^β + ‖x+y+z‖^β.
/// Signed operands are admissible.
pub fn hornich_hlawka(
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    n_power: u32,
) -> Result<InequalityReport> {
    require_same_len(x, y, z)?;
    let beta = 0.5f64.powi(n_power as i32);
    let pw = |v: &DVector<f64>| enorm(v).powf(beta);
    let lhs = ((pw(x) + pw(y)) + pw(z)) + pw(&(x + y + z));
    let rhs = (pw(&(x + y)) + pw(&(y + z))) + pw(&(z + x));
    let mut inputs = triple_inputs(x, y, z);
    inputs["n_power"] = json!(n_power);
    inputs["beta"] = json!(beta);
    Ok(InequalityReport::new(
        "hornich_hlawka",
        inputs,
        lhs,
        rhs,
        lhs - rhs,
    ))
}

fn frechet_core(
    check_id: &'static str,
    f: &ScalarFunction,
    gate: &Gate,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    require_same_len(x, y, z)?;
    let lhs = (f.eval(sq(&(x + y))) + f.eval(sq(&(y + z)))) + f.eval(sq(&(z + x)));
    let rhs = (f.eval((sq(x) + sq(y)) + sq(z)) + f.eval(sq(&(x + y + z)))) + f.eval(0.0);
    let mut inputs = triple_inputs(x, y, z);
    inputs["f"] = json!(f.id());
    Ok(gate.stamp(InequalityReport::new(check_id, inputs, lhs, rhs, lhs - rhs)))
}

/// Functional complement of [`hornich_hlawka`] on the positive cone, for a
/// nondecreasing concave f:
/// f(‖x‖²+‖y‖²+‖z‖²) + f(‖x+y+z‖²) + f(0)
///   ≤ f(‖x+y‖²) + f(‖y+z‖²) + f(‖z+x‖²).
pub fn frechet_functional(
    f: &ScalarFunction,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    let gate = monotone_concave_gate(f)?;
    frechet_functional_gated(f, &gate, x, y, z)
}

/// [`frechet_functional`] with a caller-supplied gate.
pub fn frechet_functional_gated(
    f: &ScalarFunction,
    gate: &Gate,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    require_cone(&[x, y, z])?;
    frechet_core("frechet_functional", f, gate, x, y, z)
}

/// [`frechet_functional`] on arbitrary signed operands (open-problem probe).
pub fn frechet_functional_signed(
    f: &ScalarFunction,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    let gate = monotone_concave_gate(f)?;
    frechet_functional_signed_gated(f, &gate, x, y, z)
}

/// [`frechet_functional_signed`] with a caller-supplied gate.
pub fn frechet_functional_signed_gated(
    f: &ScalarFunction,
    gate: &Gate,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    Ok(frechet_core("frechet_functional_signed", f, gate, x, y, z)?.note(SIGNED_NOTE))
}

/// The square-root instance of [`frechet_functional_signed`]: the reversed
/// Hornich-Hlawka comparison with the sign restriction lifted. Known to
/// fail; kept as a named check so suites can pin its negative margin.
pub fn revhh_signed(
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    let f = catalog("sqrt")?;
    let gate = monotone_concave_gate(&f)?;
    revhh_signed_gated(&f, &gate, x, y, z)
}

/// [`revhh_signed`] with a caller-supplied function and gate; the named
/// comparison corresponds to f = sqrt.
pub fn revhh_signed_gated(
    f: &ScalarFunction,
    gate: &Gate,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    Ok(frechet_core("revhh_signed", f, gate, x, y, z)?.note(SIGNED_NOTE))
}

fn popoviciu_core(
    check_id: &'static str,
    f: &ScalarFunction,
    gate: &Gate,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    require_same_len(x, y, z)?;
    let lhs = ((f.eval(enorm(x)) + f.eval(enorm(y))) + f.eval(enorm(z))) / 3.0
        + f.eval(enorm(&(x + y + z)));
    let rhs = (2.0 / 3.0)
        * ((f.eval(enorm(&(x + y))) + f.eval(enorm(&(y + z)))) + f.eval(enorm(&(z + x))));
    let mut inputs = triple_inputs(x, y, z);
    inputs["f"] = json!(f.id());
    Ok(gate.stamp(InequalityReport::new(check_id, inputs, lhs, rhs, lhs - rhs)))
}

/// Three-point comparison on the positive cone for f nondecreasing with
/// f(0) = 0 and f(√x) convex:
/// (2/3)[f(‖x+y‖) + f(‖y+z‖) + f(‖z+x‖)]
///   ≤ [f(‖x‖) + f(‖y‖) + f(‖z‖)]/3 + f(‖x+y+z‖).
pub fn popoviciu_vec(
    f: &ScalarFunction,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    let gate = sqrt_composite_gate(f)?;
    popoviciu_vec_gated(f, &gate, x, y, z)
}

/// [`popoviciu_vec`] with a caller-supplied gate.
pub fn popoviciu_vec_gated(
    f: &ScalarFunction,
    gate: &Gate,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    require_cone(&[x, y, z])?;
    popoviciu_core("popoviciu_vec", f, gate, x, y, z)
}

/// [`popoviciu_vec`] on arbitrary signed operands (open-problem probe).
pub fn popoviciu_vec_signed(
    f: &ScalarFunction,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    let gate = sqrt_composite_gate(f)?;
    popoviciu_vec_signed_gated(f, &gate, x, y, z)
}

/// [`popoviciu_vec_signed`] with a caller-supplied gate.
pub fn popoviciu_vec_signed_gated(
    f: &ScalarFunction,
    gate: &Gate,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    Ok(popoviciu_core("popoviciu_vec_signed", f, gate, x, y, z)?.note(SIGNED_NOTE))
}

/// Strong superadditivity of the squared norm on the positive cone:
/// ‖x+z‖² + ‖y+z‖² ≤ ‖x+y+z‖² + ‖z‖².
pub fn strong_superadditivity(
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<InequalityReport> {
    require_same_len(x, y, z)?;
    require_cone(&[x, y, z])?;
    let lhs = sq(&(x + y + z)) + sq(z);
    let rhs = sq(&(x + z)) + sq(&(y + z));
    Ok(InequalityReport::new(
        "strong_superadditivity",
        triple_inputs(x, y, z),
        lhs,
        rhs,
        lhs - rhs,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Draw;
    use approx::assert_relative_eq;

    const TOL: f64 = 1e-12;

    fn dv(coords: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(coords)
    }

    fn random_vector(draw: &mut Draw, dim: usize, cone: bool) -> DVector<f64> {
        DVector::from_fn(dim, |_, _| {
            let t = draw.range(-1.0, 1.0);
            if cone {
                t.abs()
            } else {
                t
            }
        })
    }

    #[test]
    fn frechet_identity_frozen_and_sweep() {
        let zero = dv(&[0.0, 0.0]);
        let trivial = frechet_identity(&zero, &zero, &zero).unwrap();
        assert_eq!(trivial.margin, 0.0);
        assert!(trivial.holds);

        // x=(1,0), y=(0,1), z=(1,1): both sides equal 12.
        let report = frechet_identity(&dv(&[1.0, 0.0]), &dv(&[0.0, 1.0]), &dv(&[1.0, 1.0])).unwrap();
        assert_eq!(report.lhs, 12.0);
        assert_eq!(report.rhs, 12.0);
        assert_eq!(report.margin, 0.0);

        for trial in 0..10_000u64 {
            let mut draw = Draw::split(0xF4E0, trial);
            let x = random_vector(&mut draw, 6, false);
            let y = random_vector(&mut draw, 6, false);
            let z = random_vector(&mut draw, 6, false);
            let row = frechet_identity(&x, &y, &z).unwrap();
            assert!(row.holds, "identity drift: margin {}", row.margin);
        }
    }

    #[test]
    fn frechet_identity_dimension_mismatch() {
        let x = dv(&[1.0, 2.0]);
        let y = dv(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            frechet_identity(&x, &y, &x),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn hornich_hlawka_frozen_values() {
        // x=(1,0), y=(0,1), z=(1,1), beta=1:
        // lhs = 1 + 1 + sqrt(2) + 2 sqrt(2), rhs = sqrt(2) + 2 sqrt(5).
        let report = hornich_hlawka(&dv(&[1.0, 0.0]), &dv(&[0.0, 1.0]), &dv(&[1.0, 1.0]), 0).unwrap();
        assert_relative_eq!(report.lhs, 2.0 + 3.0 * 2f64.sqrt(), max_relative = TOL);
        assert_relative_eq!(report.rhs, 2f64.sqrt() + 2.0 * 5f64.sqrt(), max_relative = TOL);
        assert_relative_eq!(
            report.margin,
            2.0 + 3.0 * 2f64.sqrt() - 2f64.sqrt() - 2.0 * 5f64.sqrt(),
            max_relative = TOL
        );
        assert!(report.holds);

        // x = y = z: margin vanishes for beta = 1.
        let x = dv(&[0.3, -0.4, 0.5]);
        let same = hornich_hlawka(&x, &x, &x, 0).unwrap();
        assert_relative_eq!(same.margin, 0.0, epsilon = TOL);
    }

    #[test]
    fn hornich_hlawka_signed_sweeps_iterated_exponents() {
        for n_power in [0u32, 1, 2] {
            let mut worst = f64::INFINITY;
            for trial in 0..10_000u64 {
                let mut draw = Draw::split(0x44A0 + u64::from(n_power), trial);
                let x = random_vector(&mut draw, 5, false);
                let y = random_vector(&mut draw, 5, false);
                let z = random_vector(&mut draw, 5, false);
                let report = hornich_hlawka(&x, &y, &z, n_power).unwrap();
                worst = worst.min(report.margin);
            }
            assert!(worst >= -1e-9, "n_power={n_power} worst {worst}");
        }
    }

    #[test]
    fn hornich_hlawka_degenerate_sum() {
        // z = -x-y zeroes the ‖x+y+z‖ term; the inequality still holds.
        for trial in 0..2_000u64 {
            let mut draw = Draw::split(0x44B0, trial);
            let x = random_vector(&mut draw, 4, false);
            let y = random_vector(&mut draw, 4, false);
            let z = -(&x + &y);
            let report = hornich_hlawka(&x, &y, &z, 0).unwrap();
            assert!(report.margin >= -1e-9, "margin {}", report.margin);
        }
    }

    #[test]
    fn frechet_functional_frozen_value() {
        let f = catalog("sqrt").unwrap();
        let report = frechet_functional(
            &f,
            &dv(&[1.0, 0.0]),
            &dv(&[0.0, 1.0]),
            &dv(&[1.0, 1.0]),
        )
        .unwrap();
        let expected = (2f64.sqrt() + 2.0 * 5f64.sqrt()) - (2.0 + 2.0 * 2f64.sqrt());
        assert_relative_eq!(report.margin, expected, max_relative = TOL);
        assert!(report.holds);
    }

    #[test]
    fn frechet_functional_rejects_cone_violations_and_convex_f() {
        let f = catalog("sqrt").unwrap();
        let bad = dv(&[0.5, -0.1]);
        let ok = dv(&[0.2, 0.3]);
        assert!(matches!(
            frechet_functional(&f, &ok, &bad, &ok),
            Err(Error::NotInPositiveCone { index: 1, .. })
        ));
        let convex = catalog("pow:2").unwrap();
        assert!(matches!(
            frechet_functional(&convex, &ok, &ok, &ok),
            Err(Error::HypothesisFailed(_))
        ));
    }

    #[test]
    fn frechet_functional_cone_sweeps() {
        for id in ["sqrt", "log1p"] {
            let f = catalog(id).unwrap();
            let gate = monotone_concave_gate(&f).unwrap();
            let mut worst = f64::INFINITY;
            for trial in 0..10_000u64 {
                let mut draw = Draw::split(0xF4EC, trial);
                let x = random_vector(&mut draw, 4, true);
                let y = random_vector(&mut draw, 4, true);
                let z = random_vector(&mut draw, 4, true);
                let report = frechet_functional_gated(&f, &gate, &x, &y, &z).unwrap();
                worst = worst.min(report.margin);
            }
            assert!(worst >= -1e-9, "f={id} worst {worst}");
        }
    }

    #[test]
    fn revhh_signed_witness_is_negative() {
        // x=(1,0), y=(-1,0), z=(0.6,0): lhs = 0 + 0.4 + 1.6 = 2,
        // rhs = sqrt(2.36) + 0.6.
        let report = revhh_signed(&dv(&[1.0, 0.0]), &dv(&[-1.0, 0.0]), &dv(&[0.6, 0.0])).unwrap();
        let expected = 2.0 - (2.36f64.sqrt() + 0.6);
        assert_relative_eq!(report.margin, expected, max_relative = TOL);
        assert!(report.margin < -0.13);
        assert!(!report.holds);
        assert!(!report.inconclusive, "hypothesis rows all pass; the comparison itself fails");
        assert_eq!(report.check_id, "revhh_signed");
        assert!(report.notes.as_deref().unwrap().contains("positive-cone restriction lifted"));
    }

    #[test]
    fn revhh_signed_agrees_with_frechet_functional_on_the_cone() {
        let f = catalog("sqrt").unwrap();
        let gate = monotone_concave_gate(&f).unwrap();
        for trial in 0..500u64 {
            let mut draw = Draw::split(0xF4ED, trial);
            let x = random_vector(&mut draw, 3, true);
            let y = random_vector(&mut draw, 3, true);
            let z = random_vector(&mut draw, 3, true);
            let signed = revhh_signed(&x, &y, &z).unwrap();
            let coned = frechet_functional_gated(&f, &gate, &x, &y, &z).unwrap();
            assert_eq!(signed.margin.to_bits(), coned.margin.to_bits());
            assert!(signed.holds);
        }
    }

    #[test]
    fn popoviciu_vec_frozen_value() {
        // f = x^2, x=(1,0), y=(0,1), z=(1,1):
        // (1 + 1 + 2)/3 + 8 - (2/3)(2 + 5 + 5) = 4/3.
        let f = catalog("pow:2").unwrap();
        let report =
            popoviciu_vec(&f, &dv(&[1.0, 0.0]), &dv(&[0.0, 1.0]), &dv(&[1.0, 1.0])).unwrap();
        assert_relative_eq!(report.margin, 4.0 / 3.0, max_relative = 1e-12);
        assert!(report.holds);
    }

    #[test]
    fn popoviciu_vec_gate_and_cone() {
        // sqrt fails the composite audit: sqrt(sqrt(x)) is concave.
        let f = catalog("sqrt").unwrap();
        let ok = dv(&[0.4, 0.1]);
        assert!(matches!(
            popoviciu_vec(&f, &ok, &ok, &ok),
            Err(Error::HypothesisFailed(_))
        ));
        let sq = catalog("pow:2").unwrap();
        let bad = dv(&[-0.4, 0.1]);
        assert!(matches!(
            popoviciu_vec(&sq, &bad, &ok, &ok),
            Err(Error::NotInPositiveCone { index: 0, .. })
        ));
    }

    #[test]
    fn popoviciu_vec_cone_sweeps() {
        let f = catalog("pow:2").unwrap();
        let gate = sqrt_composite_gate(&f).unwrap();
        let mut worst = f64::INFINITY;
        for trial in 0..10_000u64 {
            let mut draw = Draw::split(0x90B0, trial);
            let x = random_vector(&mut draw, 4, true);
            let y = random_vector(&mut draw, 4, true);
            let z = random_vector(&mut draw, 4, true);
            let report = popoviciu_vec_gated(&f, &gate, &x, &y, &z).unwrap();
            worst = worst.min(report.margin);
        }
        assert!(worst >= -1e-9, "worst {worst}");
    }

    #[test]
    fn popoviciu_vec_signed_runs_and_can_fail() {
        // With f = x^2 the signed margin reduces (via the quadratic
        // identity) to (2/3)(<x,y> + <y,z> + <z,x>), negative here.
        let f = catalog("pow:2").unwrap();
        let report = popoviciu_vec_signed(
            &f,
            &dv(&[1.0, 0.0]),
            &dv(&[-1.0, 0.0]),
            &dv(&[0.0, 0.0]),
        )
        .unwrap();
        assert_relative_eq!(report.margin, -2.0 / 3.0, max_relative = 1e-12);
        assert!(!report.holds);
        assert!(report.notes.as_deref().unwrap().contains("positive-cone restriction lifted"));
    }

    #[test]
    fn strong_superadditivity_frozen_and_sweeps() {
        // x=(1,0), y=(0,1), z=(1,1): 8 + 2 - 5 - 5 = 0.
        let report = strong_superadditivity(&dv(&[1.0, 0.0]), &dv(&[0.0, 1.0]), &dv(&[1.0, 1.0]))
            .unwrap();
        assert_eq!(report.margin, 0.0);
        assert!(report.holds);

        // z = 0 reduces the margin to 2<x, y> >= 0 on the cone.
        let x = dv(&[0.3, 0.7]);
        let y = dv(&[0.5, 0.2]);
        let zero = dv(&[0.0, 0.0]);
        let reduced = strong_superadditivity(&x, &y, &zero).unwrap();
        assert_relative_eq!(reduced.margin, 2.0 * x.dot(&y), max_relative = 1e-12);

        let mut worst = f64::INFINITY;
        for trial in 0..10_000u64 {
            let mut draw = Draw::split(0x55AD, trial);
            let a = random_vector(&mut draw, 5, true);
            let b = random_vector(&mut draw, 5, true);
            let c = random_vector(&mut draw, 5, true);
            worst = worst.min(strong_superadditivity(&a, &b, &c).unwrap().margin);
        }
        assert!(worst >= -1e-9, "worst {worst}");

        assert!(matches!(
            strong_superadditivity(&dv(&[-0.1, 0.0]), &x, &y),
            Err(Error::NotInPositiveCone { .. })
        ));
    }
}
