//! Geometric constants of the classical sequence and Schatten spaces.
//!
//! Integer-detection policy: the constants `N(X)`, `C(p)`, `C-tilde(p)` are
//! defined case-wise on whether an expression is an integer. Floats get an
//! absolute snap tolerance of `1e-9`; anything farther from an integer falls
//! to the "not an integer" branch, which always yields the *larger*
//! constant — over-estimating never falsifies a true inequality.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const INT_SNAP: f64 = 1e-9;

fn near_integer(x: f64) -> Option<f64> {
    let r = x.round();
    ((x - r).abs() <= INT_SNAP).then_some(r)
}

/// The von Neumann–Jordan constant of `l^p` / `L^p` / Schatten-p:
/// `2^{2/t - 1}` with `t = min(p, p/(p-1))`; the endpoints `p = 1` and the
/// max-norm sentinel both give 2.
pub fn cnj_analytic(p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::BadP(p));
    }
    if p == 1.0 || p.is_infinite() {
        return Ok(2.0);
    }
    let t = p.min(p / (p - 1.0));
    Ok(2.0_f64.powf(2.0 / t - 1.0))
}

/// `N(X) = 2 C_NJ(X)` when that is an integer, else 4.
pub fn n_constant(cnj: f64) -> Result<u32> {
    if !(1.0 - INT_SNAP..=2.0 + INT_SNAP).contains(&cnj) {
        return Err(Error::OutOfRange { value: cnj, lo: 1.0, hi: 2.0 });
    }
    Ok(match near_integer(2.0 * cnj) {
        Some(v) => v as u32,
        None => 4,
    })
}

/// `C(p) = 2^{p-1}` when that is an integer, else `floor(2^{p-1} + 1)`.
pub fn c_constant(p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::BadP(p));
    }
    let raw = 2.0_f64.powf(p - 1.0);
    Ok(match near_integer(raw) {
        Some(v) => v,
        None => (raw + 1.0).floor(),
    })
}

/// `C-tilde(p) = (p-1)/2` when that is an integer, else `floor((p-1)/2 + 1)`.
pub fn c_tilde(p: f64) -> Result<f64> {
    if p.is_nan() || p < 2.0 {
        return Err(Error::BadP(p));
    }
    let raw = (p - 1.0) / 2.0;
    Ok(match near_integer(raw) {
        Some(v) => v,
        None => (raw + 1.0).floor(),
    })
}

/// `floor(2(p - 1))` for `1 < p <= 2`, snapped onto exact integers first;
/// takes values in {0, 1, 2}.
pub fn floor_two_p_minus_one(p: f64) -> Result<u32> {
    if p.is_nan() || p <= 1.0 || p > 2.0 {
        return Err(Error::BadP(p));
    }
    let raw = 2.0 * (p - 1.0);
    let v = match near_integer(raw) {
        Some(v) => v,
        None => raw.floor(),
    };
    Ok(v as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantSource {
    Analytic,
    Sampled,
}

/// A `C_NJ` value bundled with the induced `N(X)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricConstants {
    pub cnj: f64,
    pub n_of_x: u32,
    pub source: ConstantSource,
}

impl GeometricConstants {
    pub fn from_cnj(cnj: f64, source: ConstantSource) -> Result<Self> {
        Ok(Self { cnj, n_of_x: n_constant(cnj)?, source })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cnj_analytic_frozen_values() {
        assert_abs_diff_eq!(cnj_analytic(2.0).unwrap(), 1.0);
        assert_abs_diff_eq!(cnj_analytic(1.0).unwrap(), 2.0);
        assert_abs_diff_eq!(cnj_analytic(f64::INFINITY).unwrap(), 2.0);
        assert_abs_diff_eq!(
            cnj_analytic(1.5).unwrap(),
            2.0_f64.powf(1.0 / 3.0),
            epsilon = 1e-15
        );
        assert!(cnj_analytic(0.5).is_err());
    }

    #[test]
    fn cnj_is_dual_invariant() {
        for p in [1.1, 1.37, 1.9, 2.4, 3.0, 7.5] {
            let q = p / (p - 1.0);
            assert_abs_diff_eq!(
                cnj_analytic(p).unwrap(),
                cnj_analytic(q).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn n_constant_frozen_values() {
        assert_eq!(n_constant(1.0).unwrap(), 2);
        // p = 2 log 2 / log 3 makes C_NJ = 3/2, so N = 3.
        let p = 2.0 * 2.0_f64.ln() / 3.0_f64.ln();
        let cnj = cnj_analytic(p).unwrap();
        assert_abs_diff_eq!(cnj, 1.5, epsilon = 1e-12);
        assert_eq!(n_constant(cnj).unwrap(), 3);
        assert_eq!(n_constant(2.0_f64.powf(1.0 / 3.0)).unwrap(), 4);
        assert_eq!(n_constant(2.0).unwrap(), 4);
        assert!(n_constant(0.9).is_err());
        assert!(n_constant(2.2).is_err());
    }

    #[test]
    fn c_constant_frozen_values() {
        assert_abs_diff_eq!(c_constant(2.0).unwrap(), 2.0);
        assert_abs_diff_eq!(c_constant(3.0).unwrap(), 4.0);
        assert_abs_diff_eq!(c_constant(2.5).unwrap(), 3.0);
        assert_abs_diff_eq!(c_constant(1.0).unwrap(), 1.0);
        assert!(c_constant(0.8).is_err());
    }

    #[test]
    fn c_tilde_frozen_values() {
        assert_abs_diff_eq!(c_tilde(3.0).unwrap(), 1.0);
        assert_abs_diff_eq!(c_tilde(2.0).unwrap(), 1.0);
        assert_abs_diff_eq!(c_tilde(5.0).unwrap(), 2.0);
        assert_abs_diff_eq!(c_tilde(4.0).unwrap(), 2.0);
        assert!(c_tilde(1.5).is_err());
    }

    #[test]
    fn floor_constant_frozen_values() {
        assert_eq!(floor_two_p_minus_one(2.0).unwrap(), 2);
        assert_eq!(floor_two_p_minus_one(1.5).unwrap(), 1);
        assert_eq!(floor_two_p_minus_one(1.2).unwrap(), 0);
        assert!(floor_two_p_minus_one(1.0).is_err());
        assert!(floor_two_p_minus_one(2.5).is_err());
    }

    #[test]
    fn knife_edge_values_snap_to_the_integer() {
        // 2 * cnj within 1e-9 of 3 counts as the integer 3.
        assert_eq!(n_constant(1.5 + 4e-10).unwrap(), 3);
        // …but clearly off-integer values fall to 4.
        assert_eq!(n_constant(1.5 + 1e-6).unwrap(), 4);
    }

    #[test]
    fn bundle_carries_the_induced_n() {
        let g = GeometricConstants::from_cnj(1.0, ConstantSource::Analytic).unwrap();
        assert_eq!(g.n_of_x, 2);
        let s = GeometricConstants::from_cnj(1.5, ConstantSource::Sampled).unwrap();
        assert_eq!(s.n_of_x, 3);
    }
}
