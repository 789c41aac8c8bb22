//! Release gate: one integration test per acceptance criterion, each
//! printing a single `[criterion N] PASS/FAIL — detail` line (visible under
//! `--nocapture`, or in the failure output) before asserting. The
//! tolerances are pinned here on purpose: loosening one is a contract
//! change, not a test tweak.

use std::time::Instant;

use serde_json::json;

use ineqlab::functions::{
    audit_shape, bernstein, catalog, divided_difference, divided_difference_symmetric,
    factorial, is_in_s0, iterated_difference, BernsteinApproximant, SamplingPlan,
};
use ineqlab::majorization::{
    brute_force_oracle, random_concave_pair, random_convex_pair,
    truncated_concave_inequality_audited, truncated_convex_inequality_audited,
};
use ineqlab::rng::Draw;
use ineqlab::search::{
    falsify_strengthened_zhang, probe_open_problem, probe_with_stats, reevaluate,
    zhang_falsifier_pair, ProbeConfig,
};
use ineqlab::spaces::{c_constant, c_tilde, cnj_analytic, cnj_sampled, n_constant, SpaceKind};
use ineqlab::suite::{battery_passes, run_battery, SuiteConfig};

/// Margin floor shared by every randomized theorem-backed sweep.
const MARGIN_TOL: f64 = 1e-9;
/// Relative agreement demanded of two independent evaluation paths.
const CROSS_REL_TOL: f64 = 1e-12;
/// Relative agreement for the divided-difference cross-checks.
const DD_REL_TOL: f64 = 1e-9;
/// Absolute band for hand-frozen exact values.
const EXACT_TOL: f64 = 1e-10;

fn criterion(n: usize, body: impl FnOnce() -> Result<String, String>) {
    match body() {
        Ok(detail) => println!("[criterion {n}] PASS — {detail}"),
        Err(detail) => {
            println!("[criterion {n}] FAIL — {detail}");
            panic!("criterion {n} failed: {detail}");
        }
    }
}

fn ctx<T, E: std::fmt::Display>(result: Result<T, E>, what: &str) -> Result<T, String> {
    result.map_err(|e| format!("{what}: {e}"))
}

#[test]
fn criterion_01_catalog_membership_audits() {
    criterion(1, || {
        let start = Instant::now();
        let plan = SamplingPlan::default();

        let s0_members = ["sqshift:1", "pow:1", "pow:1.5", "pow:2", "xlog1p", "logcosh"];
        for id in s0_members {
            let f = ctx(catalog(id), id)?;
            if !ctx(is_in_s0(&f, &plan), id)? {
                return Err(format!("{id} failed the S0 membership audit"));
            }
        }

        let three_convex_members =
            ["pow:0.5", "pow:2", "pow:3", "xfrac:1", "log1p", "sinh", "cosh"];
        for id in three_convex_members {
            let f = ctx(catalog(id), id)?;
            let flags = ctx(audit_shape(&f, &plan), id)?;
            if !flags.three_convex {
                return Err(format!("{id} failed the 3-convexity audit"));
            }
        }

        let secs = start.elapsed().as_secs_f64();
        if secs >= 10.0 {
            return Err(format!("audits took {secs:.1} s, budget is 10 s"));
        }
        Ok(format!(
            "{} S0 members and {} 3-convex members certified in {secs:.2} s",
            s0_members.len(),
            three_convex_members.len()
        ))
    });
}

#[test]
fn criterion_02_divided_difference_identities() {
    criterion(2, || {
        // (a) Recursive table vs symmetric-sum formula on 10^3 seeded node
        // sets with enforced separation.
        let f = |x: f64| (1.0 + x).ln() + x.sqrt();
        let mut draw = Draw::new(0x5EED);
        let mut worst_rel = 0.0_f64;
        for _ in 0..1_000 {
            let n = 2 + draw.index(4);
            let mut nodes: Vec<f64> = Vec::with_capacity(n);
            'outer: while nodes.len() < n {
                let candidate = draw.range(0.0, 10.0);
                for &x in &nodes {
                    if (candidate - x).abs() < 1e-2 {
                        continue 'outer;
                    }
                }
                nodes.push(candidate);
            }
            let a = ctx(divided_difference(f, &nodes), "recursive table")?;
            let b = ctx(divided_difference_symmetric(f, &nodes), "symmetric sum")?;
            let rel = (a - b).abs() / a.abs().max(b.abs()).max(1e-12);
            worst_rel = worst_rel.max(rel);
            if rel > DD_REL_TOL {
                return Err(format!(
                    "recursion {a} vs symmetric {b} disagree (rel {rel:.3e}) on nodes {nodes:?}"
                ));
            }
        }

        // (b) Iterated forward difference = n! h^n [x, x+h, ..., x+nh; f].
        let g = |x: f64| x * (1.0 + x).ln();
        let mut draw = Draw::new(0xD1FF);
        for _ in 0..500 {
            let x = draw.range(0.0, 5.0);
            let h = draw.range(0.3, 2.0);
            let n = 1 + draw.index(4);
            let nodes: Vec<f64> = (0..=n).map(|k| x + k as f64 * h).collect();
            let lhs = ctx(iterated_difference(g, x, h, n, 100.0), "iterated difference")?;
            let dd = ctx(divided_difference(g, &nodes), "stepped divided difference")?;
            let rhs = factorial(n) * h.powi(n as i32) * dd;
            let scale = lhs.abs().max(rhs.abs()).max(1e-12);
            if (lhs - rhs).abs() > DD_REL_TOL * scale {
                return Err(format!(
                    "iterated difference {lhs} vs n! h^n [..] {rhs} at x={x}, h={h}, n={n}"
                ));
            }
        }

        // (c) Third divided difference of a monic cubic is its leading
        // coefficient, 1, for any node set.
        let canonical = [0.3, 1.1, 2.7, 4.0];
        let dd = ctx(
            divided_difference(|x| x * x * x, &canonical),
            "monic cubic, canonical nodes",
        )?;
        if (dd - 1.0).abs() > EXACT_TOL {
            return Err(format!("third difference of x^3 came out {dd}"));
        }
        let mut draw = Draw::new(0xC0B1C);
        for _ in 0..50 {
            let (a2, a1, a0) = (draw.range(-3.0, 3.0), draw.range(-3.0, 3.0), draw.range(-9.0, 9.0));
            let cubic = move |x: f64| x * x * x + a2 * x * x + a1 * x + a0;
            let mut nodes = [0.0_f64; 4];
            let mut x = draw.range(0.0, 2.0);
            for slot in &mut nodes {
                *slot = x;
                x += draw.range(0.3, 2.5);
            }
            let dd = ctx(divided_difference(cubic, &nodes), "monic cubic, seeded nodes")?;
            if (dd - 1.0).abs() > EXACT_TOL {
                return Err(format!(
                    "third difference of a monic cubic came out {dd} on nodes {nodes:?}"
                ));
            }
        }

        Ok(format!(
            "recursion/symmetric-sum worst rel {worst_rel:.2e} over 10^3 node sets; \
             iterated-difference identity and monic-cubic normalization confirmed"
        ))
    });
}

#[test]
fn criterion_03_bernstein_shape_preservation() {
    criterion(3, || {
        let plan = SamplingPlan::default();
        for id in ["exp", "pow:3"] {
            let f = ctx(catalog(id), id)?;
            for degree in [5, 10, 20] {
                let approx = ctx(bernstein(&f, degree, 0.0, 1.0), id)?;
                let g = approx.as_function();
                let flags = ctx(audit_shape(&g, &plan), g.id())?;
                if !flags.convex {
                    return Err(format!("B_{degree} of {id} failed the convexity audit"));
                }
                if !flags.three_convex {
                    return Err(format!("B_{degree} of {id} failed the 3-convexity audit"));
                }
            }
        }

        // Affine reproduction: degree-n operators fix a + bx exactly.
        let mut worst = 0.0_f64;
        for degree in [5, 10, 20] {
            let approx = ctx(
                BernsteinApproximant::new("affine", |x| 0.25 + 0.75 * x, degree, 0.0, 1.0),
                "affine approximant",
            )?;
            for k in 0..=200 {
                let x = k as f64 / 200.0;
                let err = (approx.eval(x) - (0.25 + 0.75 * x)).abs();
                worst = worst.max(err);
                if err > 1e-12 {
                    return Err(format!(
                        "affine reproduction off by {err:.3e} at x={x}, degree {degree}"
                    ));
                }
            }
        }

        Ok(format!(
            "degrees 5/10/20 preserve convexity and 3-convexity for exp and x^3; \
             affine reproduction error {worst:.2e}"
        ))
    });
}

#[test]
fn criterion_04_truncated_majorization_engine_vs_oracle() {
    criterion(4, || {
        let plan = SamplingPlan::default();

        // (a) Engine vs padded brute-force oracle on 10^4 seeded admissible
        // pairs, n <= 6, both orientations.
        let convex_f = ctx(catalog("pow:2"), "pow:2")?;
        let convex_flags = ctx(audit_shape(&convex_f, &plan), "pow:2 audit")?;
        let concave_f = ctx(catalog("sqrt"), "sqrt")?;
        let concave_flags = ctx(audit_shape(&concave_f, &plan), "sqrt audit")?;
        for i in 0..5_000_u64 {
            let mut draw = Draw::split(0x7A11, i);
            let n = 2 + draw.index(5);
            let m = 2 + draw.index(n - 1);
            let (x, y) = random_convex_pair(&mut draw, n, m);
            let engine = ctx(
                truncated_convex_inequality_audited(&convex_f, &convex_flags, &x, &y),
                "convex engine",
            )?;
            let oracle = ctx(brute_force_oracle(&convex_f, &x, &y), "convex oracle")?;
            let scale = engine.margin.abs().max(oracle.margin.abs()).max(1.0);
            if (engine.margin - oracle.margin).abs() > CROSS_REL_TOL * scale {
                return Err(format!(
                    "convex engine margin {} vs oracle {} on x={:?}, y={:?}",
                    engine.margin,
                    oracle.margin,
                    x.values(),
                    y.values()
                ));
            }
            if engine.margin < -MARGIN_TOL {
                return Err(format!("convex comparison dipped to {}", engine.margin));
            }
        }
        for i in 0..5_000_u64 {
            let mut draw = Draw::split(0x7A12, i);
            let n = 2 + draw.index(5);
            let m = 2 + draw.index(n - 1);
            let (x, y) = random_concave_pair(&mut draw, n, m);
            let engine = ctx(
                truncated_concave_inequality_audited(&concave_f, &concave_flags, &x, &y),
                "concave engine",
            )?;
            let oracle = ctx(brute_force_oracle(&concave_f, &x, &y), "concave oracle")?;
            // The oracle margin is oriented the convex way; the concave
            // engine reports its negation.
            let scale = engine.margin.abs().max(oracle.margin.abs()).max(1.0);
            if (engine.margin + oracle.margin).abs() > CROSS_REL_TOL * scale {
                return Err(format!(
                    "concave engine margin {} vs oracle {} on x={:?}, y={:?}",
                    engine.margin,
                    oracle.margin,
                    x.values(),
                    y.values()
                ));
            }
            if engine.margin < -MARGIN_TOL {
                return Err(format!("concave comparison dipped to {}", engine.margin));
            }
        }

        // (b) Both truncated inequalities across every qualifying catalog
        // function: audit once, then sweep seeded admissible pairs.
        let exemplars = [
            "sqrt", "pow:0.5", "pow:1", "pow:1.5", "pow:2", "pow:3", "log1p", "xlog1p",
            "logcosh", "sqshift:1", "exp_neg", "inv1p", "xfrac:1", "one_minus_exp:1",
            "neg_xlogx", "pow_shift:1.5", "exp", "expm1", "sinh", "cosh",
        ];
        let mut convex_members = 0_usize;
        let mut concave_members = 0_usize;
        for (idx, id) in exemplars.iter().enumerate() {
            let f = ctx(catalog(id), id)?;
            let flags = ctx(audit_shape(&f, &plan), id)?;
            if flags.nondecreasing && flags.convex {
                convex_members += 1;
                let mut draw = Draw::split(0x7B00, idx as u64);
                for _ in 0..300 {
                    let n = 2 + draw.index(5);
                    let m = 2 + draw.index(n - 1);
                    let (x, y) = random_convex_pair(&mut draw, n, m);
                    let report = ctx(
                        truncated_convex_inequality_audited(&f, &flags, &x, &y),
                        id,
                    )?;
                    if report.inconclusive || report.margin < -MARGIN_TOL {
                        return Err(format!(
                            "convex comparison for {id}: margin {}, inconclusive {}",
                            report.margin, report.inconclusive
                        ));
                    }
                }
            }
            if flags.nondecreasing && flags.concave {
                concave_members += 1;
                let mut draw = Draw::split(0x7B01, idx as u64);
                for _ in 0..300 {
                    let n = 2 + draw.index(5);
                    let m = 2 + draw.index(n - 1);
                    let (x, y) = random_concave_pair(&mut draw, n, m);
                    let report = ctx(
                        truncated_concave_inequality_audited(&f, &flags, &x, &y),
                        id,
                    )?;
                    if report.inconclusive || report.margin < -MARGIN_TOL {
                        return Err(format!(
                            "concave comparison for {id}: margin {}, inconclusive {}",
                            report.margin, report.inconclusive
                        ));
                    }
                }
            }
        }
        if convex_members < 8 || concave_members < 5 {
            return Err(format!(
                "audit gated too few catalog functions in ({convex_members} convex, \
                 {concave_members} concave)"
            ));
        }

        Ok(format!(
            "engine matches the padded oracle on 10^4 pairs; margins stayed above \
             -1e-9 for {convex_members} convex and {concave_members} concave \
             catalog functions"
        ))
    });
}

#[test]
fn criterion_05_geometric_constants() {
    criterion(5, || {
        let c2 = ctx(cnj_analytic(2.0), "cnj_analytic(2)")?;
        if (c2 - 1.0).abs() > CROSS_REL_TOL {
            return Err(format!("cnj_analytic(2) = {c2}, expected 1"));
        }
        let c15 = ctx(cnj_analytic(1.5), "cnj_analytic(1.5)")?;
        let cbrt2 = 2.0_f64.powf(1.0 / 3.0);
        if (c15 - cbrt2).abs() > CROSS_REL_TOL {
            return Err(format!("cnj_analytic(1.5) = {c15}, expected 2^(1/3) = {cbrt2}"));
        }

        let euclid8 = ctx(SpaceKind::parse("euclid:8"), "euclid:8")?;
        let sampled = ctx(cnj_sampled(&euclid8, 10_000, 42), "cnj_sampled on euclid:8")?;
        if sampled > 1.0 + CROSS_REL_TOL {
            return Err(format!("sampled constant on euclid:8 reached {sampled}"));
        }

        let l1_2 = ctx(SpaceKind::parse("lp:1:2"), "lp:1:2")?;
        let extremal = ctx(cnj_sampled(&l1_2, 2_000, 42), "cnj_sampled on lp:1:2")?;
        if extremal != 2.0 {
            return Err(format!(
                "sampled constant on lp:1:2 is {extremal}, expected exactly 2"
            ));
        }

        if ctx(n_constant(1.0), "n_constant(1)")? != 2 {
            return Err("n_constant(1) != 2".into());
        }
        let p3 = 2.0 * 2.0_f64.ln() / 3.0_f64.ln();
        let cnj3 = ctx(cnj_analytic(p3), "cnj_analytic(2 ln 2 / ln 3)")?;
        if ctx(n_constant(cnj3), "n_constant at the three-point exponent")? != 3 {
            return Err(format!("n_constant({cnj3}) != 3"));
        }
        if ctx(n_constant(cbrt2), "n_constant(2^(1/3))")? != 4 {
            return Err("n_constant(2^(1/3)) != 4".into());
        }

        if ctx(c_constant(2.5), "c_constant(2.5)")? != 3.0 {
            return Err("c_constant(2.5) != 3".into());
        }
        if ctx(c_tilde(2.0), "c_tilde(2)")? != 1.0 {
            return Err("c_tilde(2) != 1".into());
        }

        Ok(format!(
            "analytic values at p=2 and p=1.5, sampled bounds on euclid:8 (<= 1 + 1e-12) \
             and lp:1:2 (= 2 exactly), and the integer maps all check out"
        ))
    });
}

#[test]
fn criterion_06_generalized_parallelogram_sweep() {
    criterion(6, || {
        let start = Instant::now();
        let mut details = Vec::new();
        for spec in ["lp:1:8", "lp:1.5:8", "lp:2:8", "lp:3:8", "lp:inf:8"] {
            let space = ctx(SpaceKind::parse(spec), spec)?;
            let config = ProbeConfig::new("functional_parallelogram", space);
            let (result, inconclusive) =
                ctx(probe_with_stats(&config, 10_000, 42), spec)?;
            if inconclusive != 0 {
                return Err(format!("{spec}: {inconclusive} inconclusive probes"));
            }
            if result.worst_margin < -MARGIN_TOL {
                return Err(format!("{spec}: worst margin {}", result.worst_margin));
            }
            details.push(format!("{spec} {:.2e}", result.worst_margin));
        }
        let secs = start.elapsed().as_secs_f64();
        if secs >= 30.0 {
            return Err(format!("sweep took {secs:.1} s, budget is 30 s"));
        }
        Ok(format!(
            "worst margins per space: {}; {secs:.1} s total",
            details.join(", ")
        ))
    });
}

#[test]
fn criterion_07_full_battery() {
    criterion(7, || {
        let config = SuiteConfig::default();
        let start = Instant::now();
        let rows = ctx(run_battery(&config), "battery")?;
        let secs = start.elapsed().as_secs_f64();

        for row in &rows {
            if !row.ok(config.tolerance) {
                return Err(format!(
                    "row {} on {} failed: min margin {}, inconclusive {}, expected_false {}",
                    row.check_id,
                    row.space,
                    row.min_margin,
                    row.inconclusive_count,
                    row.expected_false
                ));
            }
        }
        if !battery_passes(&rows, config.tolerance) {
            return Err("battery verdict is false despite clean rows".into());
        }

        // Spot-check the roster: every named family must be present, the
        // two-space and two-regime entries twice, the iterated comparison
        // three times.
        let count = |id: &str| rows.iter().filter(|r| r.check_id == id).count();
        let singles = [
            "quadruple_norm", "schotz_inner", "functional_parallelogram",
            "four_point_functional", "schotz_banach", "alfa_power", "clarkson_scalar",
            "two_unif_quadruple_p_ge_2", "zhang_det", "zhang_functional",
            "frechet_identity", "frechet_functional", "popoviciu_vec", "serre_det",
            "serre_functional", "strong_superadditivity",
        ];
        for id in singles {
            if count(id) == 0 {
                return Err(format!("battery is missing {id}"));
            }
        }
        for id in [
            "hanner_classic", "hanner_functional", "easy_clarkson", "lp_quadruple",
            "two_unif_convexity_classic", "two_unif_convexity_functional",
        ] {
            if count(id) < 2 {
                return Err(format!("battery runs {id} only {} time(s)", count(id)));
            }
        }
        if count("hornich_hlawka") < 3 {
            return Err("battery runs hornich_hlawka fewer than 3 times".into());
        }
        let falsified = rows.iter().filter(|r| r.expected_false).count();
        if falsified != 2 {
            return Err(format!("expected 2 falsified rows, found {falsified}"));
        }

        if secs >= 300.0 {
            return Err(format!("battery took {secs:.0} s, budget is 300 s"));
        }
        let worst = rows
            .iter()
            .filter(|r| !r.expected_false)
            .map(|r| r.min_margin)
            .fold(f64::INFINITY, f64::min);
        Ok(format!(
            "{} rows at 10^4 trials each in {secs:.0} s; worst theorem-backed margin {worst:.2e}; \
             both pinned counterexamples falsified",
            rows.len()
        ))
    });
}

#[test]
fn criterion_08_determinantal_falsifier() {
    criterion(8, || {
        let report = falsify_strengthened_zhang();
        let expected_lhs = 2.0 + (14.0 / 9.0) * (14.0 / 9.0); // 358/81
        let expected_rhs = 55.0 / 12.0;
        let expected_margin = -53.0 / 324.0;
        if (report.lhs - expected_lhs).abs() > MARGIN_TOL {
            return Err(format!("lhs {} vs expected {expected_lhs}", report.lhs));
        }
        if (report.rhs - expected_rhs).abs() > MARGIN_TOL {
            return Err(format!("rhs {} vs expected {expected_rhs}", report.rhs));
        }
        if (report.margin - expected_margin).abs() > MARGIN_TOL {
            return Err(format!("margin {} vs expected {expected_margin}", report.margin));
        }
        if report.holds || report.inconclusive {
            return Err(format!(
                "falsifier should conclusively fail, got holds={}, inconclusive={}",
                report.holds, report.inconclusive
            ));
        }

        let (_, control) = zhang_falsifier_pair();
        if (control.margin - 123.0).abs() > MARGIN_TOL {
            return Err(format!("control margin {} vs expected 123", control.margin));
        }
        if !control.holds || control.inconclusive {
            return Err("the unstrengthened control must hold conclusively".into());
        }

        Ok(format!(
            "strengthened comparison falsified with margin {} (= -53/324); \
             unstrengthened control margin {} with f(x) = x^2",
            report.margin, control.margin
        ))
    });
}

#[test]
fn criterion_09_signed_three_point_violation() {
    criterion(9, || {
        let result = ctx(
            probe_open_problem("frechet_functional_signed", 100_000, 42),
            "signed probe",
        )?;
        if result.worst_margin > -0.1 {
            return Err(format!(
                "10^5 trials only reached margin {}, wanted <= -0.1",
                result.worst_margin
            ));
        }
        if result.witness.is_none() {
            return Err("probe reported no witness".into());
        }

        // The analytic witness in the plane, evaluated directly.
        let mut config = ProbeConfig::new(
            "frechet_functional_signed",
            ctx(SpaceKind::parse("euclid:2"), "euclid:2")?,
        );
        config.f_id = Some("sqrt".to_string());
        let witness = json!([[1.0, 0.0], [-1.0, 0.0], [0.6, 0.0]]);
        let report = ctx(reevaluate(&config, &witness), "analytic witness")?;
        let expected = 1.4 - 2.36_f64.sqrt(); // ≈ -0.13623
        if (report.margin - expected).abs() > CROSS_REL_TOL {
            return Err(format!(
                "analytic witness margin {} vs direct evaluation {expected}",
                report.margin
            ));
        }
        if report.holds || report.inconclusive {
            return Err("analytic witness must be a conclusive failure".into());
        }

        Ok(format!(
            "probe reached margin {:.4} in 10^5 trials; analytic witness evaluates to \
             {expected:.6}",
            result.worst_margin
        ))
    });
}
