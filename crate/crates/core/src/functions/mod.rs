//! Scalar test functions on `[0, A]` and their convexity-shape machinery.
//!
//! The crate works with four nested convexity orders: order 0 (nonnegative),
//! order 1 (nondecreasing), order 2 (convex/concave) and order 3 (3-convex /
//! 3-concave, i.e. the divided differences of order 3 keep a sign). The class
//! `S_0` — nondecreasing, convex, 3-concave, vanishing at 0 — drives most of
//! the functional inequalities in [`crate::inequalities`].
//!
//! Every function carries *declared* flags (what is known analytically) and
//! can be *audited* on a grid ([`audit_shape`]) to certify the flags
//! numerically.

mod audit;
mod bernstein;
mod divided;

pub use audit::{audit_shape, is_in_s0, verify_declared, SamplingPlan, DEFAULT_AUDIT_SEED};
pub use bernstein::{bernstein, BernsteinApproximant};
pub use divided::{
    binomial, divided_difference, divided_difference_symmetric, factorial,
    iterated_difference, DividedDifferenceTable, MIN_GAP_FACTOR,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Audited or declared shape information for a scalar function.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeFlags {
    pub nonnegative: bool,
    pub nondecreasing: bool,
    pub convex: bool,
    pub concave: bool,
    pub three_convex: bool,
    pub three_concave: bool,
    pub vanishes_at_zero: bool,
}

impl ShapeFlags {
    /// Membership in S_0: nondecreasing, convex, 3-concave, f(0) = 0.
    pub fn is_s0(&self) -> bool {
        self.nondecreasing && self.convex && self.three_concave && self.vanishes_at_zero
    }
}

impl fmt::Display for ShapeFlags {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = Vec::new();
        if self.nonnegative {
            names.push("nonnegative");
        }
        if self.nondecreasing {
            names.push("nondecreasing");
        }
        if self.convex {
            names.push("convex");
        }
        if self.concave {
            names.push("concave");
        }
        if self.three_convex {
            names.push("three_convex");
        }
        if self.three_concave {
            names.push("three_concave");
        }
        if self.vanishes_at_zero {
            names.push("vanishes_at_zero");
        }
        write!(out, "{{{}}}", names.join(", "))
    }
}

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A scalar function on `[0, domain_upper]` with declared shape flags and an
/// optional closed-form derivative.
#[derive(Clone)]
pub struct ScalarFunction {
    id: String,
    eval: EvalFn,
    deriv: Option<EvalFn>,
    declared: ShapeFlags,
    domain_upper: f64,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.debug_struct("ScalarFunction")
            .field("id", &self.id)
            .field("declared", &self.declared)
            .field("domain_upper", &self.domain_upper)
            .finish()
    }
}

impl ScalarFunction {
    pub fn new(
        id: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        declared: ShapeFlags,
        domain_upper: f64,
    ) -> Self {
        Self { id: id.into(), eval: Arc::new(eval), deriv: None, declared, domain_upper }
    }

    pub fn with_deriv(mut self, deriv: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(deriv));
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn declared(&self) -> ShapeFlags {
        self.declared
    }

    pub fn domain_upper(&self) -> f64 {
        self.domain_upper
    }

    pub fn has_closed_form_deriv(&self) -> bool {
        self.deriv.is_some()
    }

    /// Derivative at `x`: closed form when available, otherwise a central
    /// difference (one-sided at the domain ends).
    pub fn deriv_at(&self, x: f64) -> f64 {
        if let Some(d) = &self.deriv {
            return d(x);
        }
        let h = 1e-6 * (1.0 + x.abs());
        let lo = (x - h).max(0.0);
        let hi = (x + h).min(self.domain_upper);
        (self.eval(hi) - self.eval(lo)) / (hi - lo)
    }
}

/// Default audit domain for catalog entries without a natural bound.
const DEFAULT_DOMAIN_UPPER: f64 = 100.0;
/// Exponential-family entries get a tighter hint to keep magnitudes sane.
const EXP_DOMAIN_UPPER: f64 = 30.0;

fn flags(
    nonnegative: bool,
    nondecreasing: bool,
    convex: bool,
    concave: bool,
    three_convex: bool,
    three_concave: bool,
    vanishes_at_zero: bool,
) -> ShapeFlags {
    ShapeFlags {
        nonnegative,
        nondecreasing,
        convex,
        concave,
        three_convex,
        three_concave,
        vanishes_at_zero,
    }
}

fn power_flags(a: f64) -> ShapeFlags {
    flags(true, true, a >= 1.0, a <= 1.0, a <= 1.0 || a >= 2.0, (1.0..=2.0).contains(&a), true)
}

fn parse_param(id: &str, raw: &str) -> Result<f64> {
    raw.parse::<f64>().map_err(|_| Error::BadParam {
        id: id.to_string(),
        reason: format!("`{raw}` is not a real number"),
    })
}

/// Look up a catalog function by id.
///
/// Parametrized ids take `id:value` form, e.g. `pow:1.5`, `sqshift:1`,
/// `xfrac:2`, `one_minus_exp:0.5`, `pow_shift:1.5`.
pub fn catalog(spec: &str) -> Result<ScalarFunction> {
    let (id, param) = match spec.split_once(':') {
        Some((id, raw)) => (id, Some(raw)),
        None => (spec, None),
    };
    let need = |name: &str| -> Result<f64> {
        match param {
            Some(raw) => parse_param(name, raw),
            None => Err(Error::BadParam {
                id: name.to_string(),
                reason: "missing parameter, expected id:value".into(),
            }),
        }
    };
    if param.is_some() && !matches!(id, "pow" | "sqshift" | "xfrac" | "one_minus_exp" | "pow_shift")
    {
        return Err(Error::BadParam {
            id: id.to_string(),
            reason: "this id takes no parameter".into(),
        });
    }
    match id {
        "sqrt" => Ok(ScalarFunction::new(
            "sqrt",
            |x: f64| x.sqrt(),
            flags(true, true, false, true, true, false, true),
            DEFAULT_DOMAIN_UPPER,
        )),
        "pow" => {
            let a = need("pow")?;
            if a <= 0.0 {
                return Err(Error::BadParam {
                    id: "pow".into(),
                    reason: format!("exponent must be positive, got {a}"),
                });
            }
            Ok(ScalarFunction::new(
                format!("pow:{a}"),
                move |x: f64| x.powf(a),
                power_flags(a),
                DEFAULT_DOMAIN_UPPER,
            )
            .with_deriv(move |x: f64| a * x.powf(a - 1.0)))
        }
        "log1p" => Ok(ScalarFunction::new(
            "log1p",
            |x: f64| x.ln_1p(),
            flags(true, true, false, true, true, false, true),
            DEFAULT_DOMAIN_UPPER,
        )
        .with_deriv(|x: f64| 1.0 / (1.0 + x))),
        "xlog1p" => Ok(ScalarFunction::new(
            "xlog1p",
            |x: f64| x * x.ln_1p(),
            flags(true, true, true, false, false, true, true),
            DEFAULT_DOMAIN_UPPER,
        )),
        "logcosh" => Ok(ScalarFunction::new(
            "logcosh",
            |x: f64| x.cosh().ln(),
            flags(true, true, true, false, false, true, true),
            DEFAULT_DOMAIN_UPPER,
        )
        .with_deriv(|x: f64| x.tanh())),
        "sqshift" => {
            let a = need("sqshift")?;
            if a <= 0.0 {
                return Err(Error::BadParam {
                    id: "sqshift".into(),
                    reason: format!("coefficient must be positive, got {a}"),
                });
            }
            Ok(ScalarFunction::new(
                format!("sqshift:{a}"),
                move |x: f64| (1.0 + a * x * x).sqrt() - 1.0,
                flags(true, true, true, false, false, true, true),
                DEFAULT_DOMAIN_UPPER,
            ))
        }
        "exp_neg" => Ok(ScalarFunction::new(
            "exp_neg",
            |x: f64| (-x).exp(),
            flags(true, false, true, false, false, true, false),
            DEFAULT_DOMAIN_UPPER,
        )
        .with_deriv(|x: f64| -(-x).exp())),
        "inv1p" => Ok(ScalarFunction::new(
            "inv1p",
            |x: f64| 1.0 / (1.0 + x),
            flags(true, false, true, false, false, true, false),
            DEFAULT_DOMAIN_UPPER,
        )
        .with_deriv(|x: f64| -1.0 / ((1.0 + x) * (1.0 + x)))),
        "xfrac" => {
            let r = need("xfrac")?;
            if r < 0.0 {
                return Err(Error::BadParam {
                    id: "xfrac".into(),
                    reason: format!("offset must be nonnegative, got {r}"),
                });
            }
            let declared = if r > 0.0 {
                flags(true, true, false, true, true, false, true)
            } else {
                flags(true, true, true, true, true, true, false)
            };
            Ok(ScalarFunction::new(
                format!("xfrac:{r}"),
                move |x: f64| if x == 0.0 && r == 0.0 { 1.0 } else { x / (x + r) },
                declared,
                DEFAULT_DOMAIN_UPPER,
            ))
        }
        "one_minus_exp" => {
            let t = need("one_minus_exp")?;
            if t <= 0.0 {
                return Err(Error::BadParam {
                    id: "one_minus_exp".into(),
                    reason: format!("rate must be positive, got {t}"),
                });
            }
            Ok(ScalarFunction::new(
                format!("one_minus_exp:{t}"),
                move |x: f64| -(-t * x).exp_m1(),
                flags(true, true, false, true, true, false, true),
                DEFAULT_DOMAIN_UPPER,
            )
            .with_deriv(move |x: f64| t * (-t * x).exp()))
        }
        "neg_xlogx" => Ok(ScalarFunction::new(
            "neg_xlogx",
            |x: f64| if x == 0.0 { 0.0 } else { -(x * x.ln()) },
            flags(false, false, false, true, true, false, true),
            DEFAULT_DOMAIN_UPPER,
        )),
        "pow_shift" => {
            let a = need("pow_shift")?;
            if a <= 0.0 {
                return Err(Error::BadParam {
                    id: "pow_shift".into(),
                    reason: format!("exponent must be positive, got {a}"),
                });
            }
            let mut declared = power_flags(a);
            declared.vanishes_at_zero = true;
            Ok(ScalarFunction::new(
                format!("pow_shift:{a}"),
                move |x: f64| (1.0 + x).powf(a) - 1.0,
                declared,
                DEFAULT_DOMAIN_UPPER,
            ))
        }
        "exp" => Ok(ScalarFunction::new(
            "exp",
            |x: f64| x.exp(),
            flags(true, true, true, false, true, false, false),
            EXP_DOMAIN_UPPER,
        )
        .with_deriv(|x: f64| x.exp())),
        "expm1" => Ok(ScalarFunction::new(
            "expm1",
            |x: f64| x.exp_m1(),
            flags(true, true, true, false, true, false, true),
            EXP_DOMAIN_UPPER,
        )
        .with_deriv(|x: f64| x.exp())),
        "sinh" => Ok(ScalarFunction::new(
            "sinh",
            |x: f64| x.sinh(),
            flags(true, true, true, false, true, false, true),
            EXP_DOMAIN_UPPER,
        )
        .with_deriv(|x: f64| x.cosh())),
        "cosh" => Ok(ScalarFunction::new(
            "cosh",
            |x: f64| x.cosh(),
            flags(true, true, true, false, true, false, false),
            EXP_DOMAIN_UPPER,
        )
        .with_deriv(|x: f64| x.sinh())),
        other => Err(Error::UnknownFunction(other.to_string())),
    }
}

/// Catalog ids accepted by [`catalog`], with parameter syntax where needed.
pub fn catalog_ids() -> &'static [&'static str] {
    &[
        "sqrt",
        "pow:<alpha>",
        "log1p",
        "xlog1p",
        "logcosh",
        "sqshift:<alpha>",
        "exp_neg",
        "inv1p",
        "xfrac:<r>",
        "one_minus_exp:<t>",
        "neg_xlogx",
        "pow_shift:<alpha>",
        "exp",
        "expm1",
        "sinh",
        "cosh",
    ]
}

/// `g(x) = f(x^alpha)`, with flags declared only when a composition rule
/// certifies them:
///
/// * `f` nondecreasing and unambiguously 3-concave, `alpha <= 1/2` — `g` is
///   nondecreasing and concave;
/// * `f` convex, unambiguously 3-convex, with `f'(0) <= 0`, `alpha <= 1/2` —
///   `g` is convex.
///
/// Boundary cases (both third-order flags declared) are left for the audit.
pub fn compose_power(f: &ScalarFunction, alpha: f64) -> Result<ScalarFunction> {
    if alpha <= 0.0 {
        return Err(Error::BadAlpha(alpha));
    }
    let d = f.declared();
    let mut declared = ShapeFlags::default();
    if alpha <= 0.5 {
        if d.nondecreasing && d.three_concave && !d.three_convex {
            declared.nondecreasing = true;
            declared.concave = true;
        } else if d.convex && d.three_convex && !d.three_concave && f.deriv_at(0.0) <= 1e-12 {
            declared.convex = true;
        }
    }
    let inner = f.clone();
    let upper = f.domain_upper().powf(1.0 / alpha).min(1e12);
    Ok(ScalarFunction::new(
        format!("{}(x^{alpha})", f.id()),
        move |x: f64| inner.eval(x.powf(alpha)),
        declared,
        upper,
    ))
}

/// `g(x) = f(x)^alpha` for nonnegative `f`. When `f` is 3-convex,
/// nondecreasing and concave, those three flags survive every
/// `alpha` in `(0, 1]` and are declared; otherwise flags are left
/// for the audit.
pub fn power_of(f: &ScalarFunction, alpha: f64) -> Result<ScalarFunction> {
    if alpha <= 0.0 || alpha > 1.0 {
        return Err(Error::BadAlpha(alpha));
    }
    let d = f.declared();
    let mut declared = ShapeFlags::default();
    declared.nonnegative = d.nonnegative;
    declared.vanishes_at_zero = d.vanishes_at_zero;
    if d.three_convex && d.nondecreasing && d.concave {
        declared.three_convex = true;
        declared.nondecreasing = true;
        declared.concave = true;
    }
    let inner = f.clone();
    Ok(ScalarFunction::new(
        format!("({})^{alpha}", f.id()),
        move |x: f64| inner.eval(x).powf(alpha),
        declared,
        f.domain_upper(),
    ))
}

/// Shift a completely monotone `f` by a linear term: `g(x) = f(x) + alpha x`
/// on `[0, upper]`.
///
/// Requires `alpha >= -inf f'` (estimated on a grid; closed-form derivative
/// used when available). The result is declared nonnegative, nondecreasing,
/// convex and 3-concave.
pub fn completely_monotone_shift(
    f: &ScalarFunction,
    upper: f64,
    alpha: f64,
) -> Result<ScalarFunction> {
    if upper <= 0.0 {
        return Err(Error::DegenerateInterval { a: 0.0, b: upper });
    }
    const GRID: usize = 257;
    let mut inf_slope = f64::INFINITY;
    for i in 0..GRID {
        let x = upper * i as f64 / (GRID - 1) as f64;
        inf_slope = inf_slope.min(f.deriv_at(x));
    }
    let bound = -inf_slope;
    if alpha < bound - 1e-12 {
        return Err(Error::SlopeTooSmall { alpha, bound });
    }
    let inner = f.clone();
    Ok(ScalarFunction::new(
        format!("{}+{alpha}x", f.id()),
        move |x: f64| inner.eval(x) + alpha * x,
        flags(true, true, true, false, false, true, false),
        upper,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_rejects_unknown_ids() {
        assert!(matches!(catalog("warp"), Err(Error::UnknownFunction(_))));
        assert!(matches!(catalog("pow"), Err(Error::BadParam { .. })));
        assert!(matches!(catalog("pow:0"), Err(Error::BadParam { .. })));
        assert!(matches!(catalog("sqrt:2"), Err(Error::BadParam { .. })));
    }

    #[test]
    fn catalog_values_match_hand_arithmetic() {
        assert_eq!(catalog("sqrt").unwrap().eval(4.0), 2.0);
        assert_eq!(catalog("pow:2").unwrap().eval(3.0), 9.0);
        assert!((catalog("log1p").unwrap().eval(1.0) - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(catalog("xfrac:1").unwrap().eval(1.0), 0.5);
        assert_eq!(catalog("inv1p").unwrap().eval(1.0), 0.5);
        assert_eq!(catalog("expm1").unwrap().eval(0.0), 0.0);
        assert_eq!(catalog("neg_xlogx").unwrap().eval(0.0), 0.0);
        assert!((catalog("pow_shift:2").unwrap().eval(1.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn composition_rule_declares_concave_for_three_concave_base() {
        let f = catalog("pow:1.5").unwrap();
        let g = compose_power(&f, 0.5).unwrap();
        assert!(g.declared().nondecreasing);
        assert!(g.declared().concave);
        assert!(!g.declared().convex);
        assert!((g.eval(4.0) - 2.0f64.sqrt().powi(3)).abs() < 1e-12);
    }

    #[test]
    fn composition_rule_defers_boundary_case_to_audit() {
        // x^2 is both 3-convex and 3-concave; no flag may be declared.
        let f = catalog("pow:2").unwrap();
        let g = compose_power(&f, 0.5).unwrap();
        assert_eq!(g.declared(), ShapeFlags::default());
    }

    #[test]
    fn composition_rule_declares_convex_when_slope_at_zero_allows() {
        // expm1 is convex, unambiguously 3-convex, but f'(0) = 1 > 0: no declaration.
        let f = catalog("expm1").unwrap();
        let g = compose_power(&f, 0.5).unwrap();
        assert!(!g.declared().convex);
        // x^3 has f'(0) = 0 and qualifies.
        let f = catalog("pow:3").unwrap();
        let g = compose_power(&f, 0.5).unwrap();
        assert!(g.declared().convex);
    }

    #[test]
    fn monotone_shift_requires_enough_slope() {
        let f = catalog("exp_neg").unwrap();
        let err = completely_monotone_shift(&f, 1.0, 0.0).unwrap_err();
        match err {
            Error::SlopeTooSmall { bound, .. } => assert!((bound - 1.0).abs() < 1e-12),
            other => panic!("expected SlopeTooSmall, got {other:?}"),
        }
        let g = completely_monotone_shift(&f, 1.0, 1.0).unwrap();
        assert!(g.declared().nondecreasing);
        assert!((g.eval(1.0) - ((-1.0f64).exp() + 1.0)).abs() < 1e-15);
    }
}
