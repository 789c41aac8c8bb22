//! Bernstein polynomial approximants on a closed interval.
//!
//! Evaluation goes through de Casteljau's recurrence, which is numerically
//! stable and interpolates the endpoint samples exactly (bitwise): at the
//! left endpoint the recurrence returns `samples[0]`, at the right endpoint
//! `samples[degree]`, with no arithmetic on them.

use super::{ScalarFunction, ShapeFlags};
use crate::error::{Error, Result};

const MIN_WIDTH: f64 = 1e-12;

/// Degree-n Bernstein approximant of a function sampled on `[a, b]`.
#[derive(Debug, Clone)]
pub struct BernsteinApproximant {
    source_id: String,
    degree: usize,
    a: f64,
    b: f64,
    samples: Vec<f64>,
}

impl BernsteinApproximant {
    /// Sample `f` at the `degree + 1` equispaced nodes of `[a, b]`.
    pub fn new(
        source_id: &str,
        f: impl Fn(f64) -> f64,
        degree: usize,
        a: f64,
        b: f64,
    ) -> Result<Self> {
        if !(b - a >= MIN_WIDTH) {
            return Err(Error::DegenerateInterval { a, b });
        }
        if degree == 0 {
            return Err(Error::PreconditionFailed(
                "Bernstein degree must be at least 1".into(),
            ));
        }
        let samples = (0..=degree)
            .map(|i| f(a + (b - a) * i as f64 / degree as f64))
            .collect();
        Ok(Self { source_id: source_id.to_string(), degree, a, b, samples })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Evaluate by de Casteljau's recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        let t = (x - self.a) / (self.b - self.a);
        let mut beta = self.samples.clone();
        for round in 1..=self.degree {
            for i in 0..=(self.degree - round) {
                beta[i] = beta[i] * (1.0 - t) + beta[i + 1] * t;
            }
        }
        beta[0]
    }

    /// Package the approximant as a catalog-style function.
    ///
    /// No shape flags are declared: the approximant's shape is established by
    /// auditing, not by inheritance.
    pub fn as_function(&self) -> ScalarFunction {
        let me = self.clone();
        ScalarFunction::new(
            format!("bernstein:{}:{}", self.source_id, self.degree),
            move |x| me.eval(x),
            ShapeFlags::default(),
            self.b,
        )
    }
}

/// Bernstein approximant of a catalog function on `[a, b]`.
pub fn bernstein(f: &ScalarFunction, degree: usize, a: f64, b: f64) -> Result<BernsteinApproximant> {
    BernsteinApproximant::new(f.id(), |x| f.eval(x), degree, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{audit_shape, catalog, SamplingPlan};
    use crate::rng::Draw;

    /// Direct binomial-sum evaluation, used as an independent oracle.
    fn binomial_eval(samples: &[f64], t: f64) -> f64 {
        let n = samples.len() - 1;
        let mut acc = 0.0;
        for (i, &s) in samples.iter().enumerate() {
            let mut coeff = 1.0;
            for j in 0..i {
                coeff *= (n - j) as f64 / (j + 1) as f64;
            }
            acc += coeff * t.powi(i as i32) * (1.0 - t).powi((n - i) as i32) * s;
        }
        acc
    }

    #[test]
    fn endpoints_interpolate_bitwise() {
        let f = catalog("exp").unwrap();
        let b = bernstein(&f, 7, 0.0, 3.0).unwrap();
        assert_eq!(b.eval(0.0).to_bits(), f.eval(0.0).to_bits());
        assert_eq!(b.eval(3.0).to_bits(), f.eval(3.0).to_bits());
    }

    #[test]
    fn tent_function_midpoint_value() {
        // Degree-4 approximant of |x - 1/2| on [0, 1] at x = 1/2:
        // samples (1/2, 1/4, 0, 1/4, 1/2), weights C(4,i)/16 = (1,4,6,4,1)/16,
        // value = (0.5 + 1.0 + 0 + 1.0 + 0.5)/16 = 3/16.
        let tent =
            BernsteinApproximant::new("tent", |x| (x - 0.5).abs(), 4, 0.0, 1.0).unwrap();
        let got = tent.eval(0.5);
        assert!((got - 0.1875).abs() <= 1e-15, "got {got}");
        let oracle = binomial_eval(tent.samples(), 0.5);
        assert!((got - oracle).abs() <= 1e-15);
    }

    #[test]
    fn affine_functions_are_reproduced() {
        for (a, b) in [(0.0, 1.0), (1.0, 4.0)] {
            let approx =
                BernsteinApproximant::new("affine", |x| 0.75 * x + 0.3, 20, a, b).unwrap();
            for k in 0..=100 {
                let x = a + (b - a) * k as f64 / 100.0;
                let want = 0.75 * x + 0.3;
                assert!(
                    (approx.eval(x) - want).abs() <= 1e-12,
                    "x={x}: {} vs {want}",
                    approx.eval(x)
                );
            }
        }
    }

    #[test]
    fn de_casteljau_matches_binomial_expansion() {
        let f = catalog("log1p").unwrap();
        let b = bernstein(&f, 12, 0.0, 10.0).unwrap();
        let mut draw = Draw::new(0xBE57);
        for _ in 0..200 {
            let x = draw.range(0.0, 10.0);
            let fast = b.eval(x);
            let slow = binomial_eval(b.samples(), x / 10.0);
            assert!(
                (fast - slow).abs() <= 1e-12 * (1.0 + fast.abs()),
                "x={x}: {fast} vs {slow}"
            );
        }
    }

    #[test]
    fn uniform_error_shrinks_for_smooth_functions() {
        let f = catalog("exp").unwrap();
        let worst = |degree: usize| {
            let b = bernstein(&f, degree, 0.0, 1.0).unwrap();
            (0..=200)
                .map(|k| {
                    let x = k as f64 / 200.0;
                    (b.eval(x) - f.eval(x)).abs()
                })
                .fold(0.0, f64::max)
        };
        let e50 = worst(50);
        assert!(e50 <= 0.01, "degree-50 error {e50}");
        assert!(worst(200) < e50);
    }

    #[test]
    fn rejects_degenerate_intervals_and_degree_zero() {
        let f = catalog("sqrt").unwrap();
        assert!(matches!(
            bernstein(&f, 4, 2.0, 2.0),
            Err(Error::DegenerateInterval { .. })
        ));
        assert!(bernstein(&f, 0, 0.0, 1.0).is_err());
    }

    #[test]
    fn shape_flags_survive_bernstein_approximation() {
        // For every declared flag of the source, the audited approximant on
        // [0, 1] reports the same flag, across several degrees.
        let plan = SamplingPlan::with_upper(1.0);
        for id in [
            "sqrt",
            "pow:1.5",
            "pow:2",
            "pow:3",
            "log1p",
            "xlog1p",
            "logcosh",
            "sqshift:1",
            "exp_neg",
            "inv1p",
            "xfrac:1",
            "one_minus_exp:1",
            "neg_xlogx",
            "exp",
            "cosh",
        ] {
            let f = catalog(id).unwrap();
            let declared = f.declared();
            for degree in [5_usize, 10, 20] {
                let approx = bernstein(&f, degree, 0.0, 1.0).unwrap().as_function();
                let audited = audit_shape(&approx, &plan).unwrap();
                let pairs = [
                    ("nonnegative", declared.nonnegative, audited.nonnegative),
                    ("nondecreasing", declared.nondecreasing, audited.nondecreasing),
                    ("convex", declared.convex, audited.convex),
                    ("concave", declared.concave, audited.concave),
                    ("three_convex", declared.three_convex, audited.three_convex),
                    ("three_concave", declared.three_concave, audited.three_concave),
                    ("vanishes_at_zero", declared.vanishes_at_zero, audited.vanishes_at_zero),
                ];
                for (flag, wanted, got) in pairs {
                    assert!(
                        !wanted || got,
                        "B_{degree}({id}) lost declared flag {flag}"
                    );
                }
            }
        }
    }
}
