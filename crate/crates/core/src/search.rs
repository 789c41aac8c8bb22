//! Seeded randomized probing plus derivative-free local refinement.
//!
//! Probing confirms theorem-backed checks at scale, reproduces the fixed
//! determinantal falsifier, and gathers evidence on the open-ended signed
//! variants. A probe draws operand sets from four mixed generator styles
//! (uniform, heavy-tailed, sparse, near-collinear — 40/20/20/20), tracks the
//! minimum margin, and keeps the witness. Probe `i` of seed `s` uses the
//! split stream `s ⊕ hash(i)`, so serial and parallel runs visit identical
//! operand sets and results are reproducible bit-for-bit.
//!
//! Refinement is a pattern search over the witness's raw coordinates
//! (symmetric matrices move by mirrored lower-triangle coordinates), so a
//! refined witness is still a concrete operand set. Candidate moves whose
//! evaluation errors (a matrix drifting off the positive semidefinite cone,
//! a vector leaving the positive cone) are rejected, which keeps the search
//! inside the checker's admissible domain.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Value};

use crate::functions::{catalog, ScalarFunction};
use crate::inequalities::{
    self, monotone_concave_gate, monotone_convex_gate, nonneg_monotone_concave_gate,
    power_composite_gate, s0_gate, sqrt_composite_gate, two_unif_functional_gate,
};
use crate::report::InequalityReport;
use crate::rng::Draw;
use crate::spaces::{
    psd_project, random_psd, random_symmetric, Operand, PsdMatrix, SampleStyle, SpaceKind,
};
use crate::{Error, Result};

/// Outcome of a randomized probe or a refinement pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub check_id: String,
    pub probes: u64,
    /// Minimum margin seen; +∞ (serialized as null) when `probes` is 0.
    pub worst_margin: f64,
    /// Operand list of the worst probe (vectors as arrays, matrices as row
    /// arrays); `None` when no probe ran.
    pub witness: Option<Value>,
    pub seed: u64,
    pub refined: bool,
}

/// Everything needed to rebuild a checker closure: the check, its ambient
/// space, the test function, and the per-check scalar parameters.
#[derive(Debug, Clone)]
pub struct ProbeConfig {
    pub check_id: String,
    pub space: SpaceKind,
    /// Catalog id; `None` selects a per-check default.
    pub f_id: Option<String>,
    /// Exponent selector for the iterated Hornich-Hlawka check (β = 1/2^n).
    pub n_power: u32,
    /// Exponent for the power-mean chain check.
    pub alpha: f64,
    /// Translation mode for the translated two-uniform-convexity check.
    pub equal_translations: bool,
}

impl ProbeConfig {
    pub fn new(check_id: &str, space: SpaceKind) -> Self {
        ProbeConfig {
            check_id: check_id.to_string(),
            space,
            f_id: None,
            n_power: 0,
            alpha: 1.5,
            equal_translations: false,
        }
    }
}

/// Check ids accepted by [`probe`], grouped by operand family.
pub fn registered_checks() -> &'static [&'static str] {
    &[
        "quadruple_norm",
        "schotz_inner",
        "functional_parallelogram",
        "four_point_functional",
        "schotz_banach",
        "alfa_power",
        "clarkson_scalar",
        "hanner_classic",
        "hanner_functional",
        "easy_clarkson",
        "lp_quadruple",
        "two_unif_convexity_classic",
        "two_unif_convexity_functional",
        "two_unif_quadruple_p_ge_2",
        "two_unif_translated",
        "zhang_det",
        "zhang_functional",
        "zhang_strengthened",
        "serre_det",
        "serre_functional",
        "frechet_identity",
        "hornich_hlawka",
        "frechet_functional",
        "frechet_functional_signed",
        "revhh_signed",
        "popoviciu_vec",
        "popoviciu_vec_signed",
        "strong_superadditivity",
    ]
}

// ---------------------------------------------------------------------------
// Witnesses: flat coordinates plus shape tags, JSON round-trippable.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Vector(usize),
    Matrix { n: usize, symmetric: bool },
}

#[derive(Debug, Clone, PartialEq)]
struct Witness {
    shapes: Vec<Shape>,
    coords: Vec<f64>,
}

impl Witness {
    fn from_operands(ops: &[Operand]) -> Self {
        let mut w = Witness { shapes: Vec::new(), coords: Vec::new() };
        for op in ops {
            match op {
                Operand::Vector(v) => {
                    w.shapes.push(Shape::Vector(v.len()));
                    w.coords.extend(v.iter());
                }
                Operand::Matrix(m) => {
                    let n = m.nrows();
                    let symmetric = *m == m.transpose();
                    w.shapes.push(Shape::Matrix { n, symmetric });
                    if symmetric {
                        for i in 0..n {
                            for j in 0..=i {
                                w.coords.push(m[(i, j)]);
                            }
                        }
                    } else {
                        for i in 0..n {
                            for j in 0..n {
                                w.coords.push(m[(i, j)]);
                            }
                        }
                    }
                }
            }
        }
        w
    }

    fn operands(&self) -> Vec<Operand> {
        let mut out = Vec::with_capacity(self.shapes.len());
        let mut k = 0usize;
        for shape in &self.shapes {
            match shape {
                Shape::Vector(n) => {
                    out.push(Operand::Vector(DVector::from_row_slice(
                        &self.coords[k..k + n],
                    )));
                    k += n;
                }
                Shape::Matrix { n, symmetric: true } => {
                    let mut m = DMatrix::zeros(*n, *n);
                    for i in 0..*n {
                        for j in 0..=i {
                            m[(i, j)] = self.coords[k];
                            m[(j, i)] = self.coords[k];
                            k += 1;
                        }
                    }
                    out.push(Operand::Matrix(m));
                }
                Shape::Matrix { n, symmetric: false } => {
                    let mut m = DMatrix::zeros(*n, *n);
                    for i in 0..*n {
                        for j in 0..*n {
                            m[(i, j)] = self.coords[k];
                            k += 1;
                        }
                    }
                    out.push(Operand::Matrix(m));
                }
            }
        }
        out
    }

    fn to_json(&self) -> Value {
        json!(self.operands().iter().map(Operand::to_json).collect::<Vec<_>>())
    }

    fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::PreconditionFailed(format!("witness: {what}"));
        let items = v.as_array().ok_or_else(|| bad("expected an operand array"))?;
        let mut ops = Vec::with_capacity(items.len());
        for item in items {
            let entries = item.as_array().ok_or_else(|| bad("operand must be an array"))?;
            if entries.is_empty() {
                return Err(bad("operand must be nonempty"));
            }
            if entries[0].is_array() {
                let mut rows: Vec<Vec<f64>> = Vec::with_capacity(entries.len());
                for row in entries {
                    let cells = row.as_array().ok_or_else(|| bad("matrix row must be an array"))?;
                    let mut out = Vec::with_capacity(cells.len());
                    for cell in cells {
                        out.push(cell.as_f64().ok_or_else(|| bad("matrix entry must be a number"))?);
                    }
                    rows.push(out);
                }
                ops.push(Operand::matrix_from_rows(&rows)?);
            } else {
                let mut coords = Vec::with_capacity(entries.len());
                for cell in entries {
                    coords.push(cell.as_f64().ok_or_else(|| bad("coordinate must be a number"))?);
                }
                ops.push(Operand::vector(coords));
            }
        }
        Ok(Witness::from_operands(&ops))
    }
}

// ---------------------------------------------------------------------------
// Operand generators.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
enum ProbeStyle {
    Plain(SampleStyle),
    NearCollinear,
}

fn pick_style(draw: &mut Draw) -> ProbeStyle {
    let t = draw.unit();
    if t < 0.4 {
        ProbeStyle::Plain(SampleStyle::Uniform)
    } else if t < 0.6 {
        ProbeStyle::Plain(SampleStyle::HeavyTail)
    } else if t < 0.8 {
        ProbeStyle::Plain(SampleStyle::Sparse)
    } else {
        ProbeStyle::NearCollinear
    }
}

/// `count` operands of `space`; near-collinear mode derives the later
/// operands from the first one, since margins are tight near degenerate
/// configurations.
fn gen_space_ops(space: &SpaceKind, count: usize, draw: &mut Draw, style: ProbeStyle) -> Vec<Operand> {
    match style {
        ProbeStyle::Plain(s) => (0..count).map(|_| space.random_operand(draw, s)).collect(),
        ProbeStyle::NearCollinear => {
            let base = space.random_operand(draw, SampleStyle::Uniform);
            let mut ops = Vec::with_capacity(count);
            ops.push(base.clone());
            for _ in 1..count {
                let t = draw.range(-1.0, 1.0);
                let noise = space.random_operand(draw, SampleStyle::Uniform).scale(0.05);
                ops.push(base.scale(t).add(&noise).expect("generated operands share a shape"));
            }
            ops
        }
    }
}

fn clamp_to_cone(ops: &mut [Operand]) {
    for op in ops {
        if let Operand::Vector(v) = op {
            for c in v.iter_mut() {
                *c = c.abs();
            }
        }
    }
}

fn vector_dim(space: &SpaceKind) -> Result<usize> {
    match space {
        SpaceKind::Euclid { dim } | SpaceKind::Lp { dim, .. } => Ok(*dim),
        SpaceKind::Schatten { .. } => Err(Error::PreconditionFailed(
            "this check needs a coordinate-vector space".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy)]
enum MatDim {
    Fixed(usize),
    /// No matrix size pinned by the space: cycle through 2..=5 per probe.
    Cycle,
}

fn psd_dim(space: &SpaceKind) -> MatDim {
    match space {
        SpaceKind::Schatten { m, .. } => MatDim::Fixed(*m),
        _ => MatDim::Cycle,
    }
}

fn gen_psd_one(draw: &mut Draw, m: usize, style: SampleStyle) -> PsdMatrix {
    match style {
        SampleStyle::Uniform => random_psd(draw, m, 1.0),
        SampleStyle::HeavyTail => {
            let scale = 0.5 + draw.heavy(4.0).abs();
            random_psd(draw, m, scale)
        }
        SampleStyle::Sparse => {
            // Rank-one Gram matrix: determinant-degenerate configurations.
            let v: Vec<f64> = (0..m).map(|_| draw.range(-1.0, 1.0)).collect();
            PsdMatrix::new(DMatrix::from_fn(m, m, |i, j| v[i] * v[j]))
                .expect("a Gram matrix is positive semidefinite")
        }
    }
}

fn gen_psd_near(draw: &mut Draw, base: &PsdMatrix) -> PsdMatrix {
    let m = base.dim();
    let t = draw.unit();
    let candidate = base.entries() * t + random_symmetric(draw, m, 0.05);
    psd_project(&candidate).unwrap_or_else(|_| random_psd(draw, m, 1.0))
}

fn gen_psd_triple(mdim: MatDim, draw: &mut Draw, style: ProbeStyle) -> Vec<Operand> {
    let m = match mdim {
        MatDim::Fixed(m) => m,
        MatDim::Cycle => 2 + draw.index(4),
    };
    let mats: Vec<PsdMatrix> = match style {
        ProbeStyle::Plain(s) => (0..3).map(|_| gen_psd_one(draw, m, s)).collect(),
        ProbeStyle::NearCollinear => {
            let base = random_psd(draw, m, 1.0);
            let second = gen_psd_near(draw, &base);
            let third = gen_psd_near(draw, &base);
            vec![base, second, third]
        }
    };
    mats.into_iter().map(|p| Operand::Matrix(p.entries().clone())).collect()
}

/// Hanner-type operand pair. On Schatten spaces outside the unrestricted
/// exponent ranges, the pair is built to satisfy the positive-semidefinite
/// scope rows (u ± v PSD below p = 2, u and v PSD above), so sweeps stay
/// conclusive.
fn gen_hanner_pair(space: &SpaceKind, draw: &mut Draw, style: ProbeStyle) -> Vec<Operand> {
    let SpaceKind::Schatten { p, m } = space else {
        return gen_space_ops(space, 2, draw, style);
    };
    let unrestricted = if *p <= 2.0 { *p <= 4.0 / 3.0 } else { *p >= 4.0 };
    if unrestricted {
        return gen_space_ops(space, 2, draw, style);
    }
    let plain = match style {
        ProbeStyle::Plain(s) => s,
        ProbeStyle::NearCollinear => SampleStyle::Uniform,
    };
    let first = gen_psd_one(draw, *m, plain);
    let second = match style {
        ProbeStyle::NearCollinear => gen_psd_near(draw, &first),
        _ => gen_psd_one(draw, *m, plain),
    };
    if *p <= 2.0 {
        let u = (first.entries() + second.entries()) * 0.5;
        let v = (first.entries() - second.entries()) * 0.5;
        vec![Operand::Matrix(u), Operand::Matrix(v)]
    } else {
        vec![
            Operand::Matrix(first.entries().clone()),
            Operand::Matrix(second.entries().clone()),
        ]
    }
}

// ---------------------------------------------------------------------------
// Runner registry.
// ---------------------------------------------------------------------------

struct Runner {
    gen: Box<dyn Fn(&mut Draw, ProbeStyle) -> Witness>,
    eval: Box<dyn Fn(&Witness) -> Result<InequalityReport>>,
}

fn as_vector(op: &Operand) -> Result<DVector<f64>> {
    match op {
        Operand::Vector(v) => Ok(v.clone()),
        Operand::Matrix(_) => Err(Error::PreconditionFailed(
            "expected a vector operand".into(),
        )),
    }
}

fn as_psd(op: &Operand) -> Result<PsdMatrix> {
    match op {
        Operand::Matrix(m) => PsdMatrix::new(m.clone()),
        Operand::Vector(_) => Err(Error::PreconditionFailed(
            "expected a matrix operand".into(),
        )),
    }
}

fn resolve_f(config: &ProbeConfig) -> Result<ScalarFunction> {
    if let Some(id) = &config.f_id {
        return catalog(id);
    }
    let default = match config.check_id.as_str() {
        "schotz_inner" | "schotz_banach" | "functional_parallelogram"
        | "four_point_functional" | "clarkson_scalar" | "two_unif_quadruple_p_ge_2"
        | "two_unif_translated" => "pow:1.5".to_string(),
        "hanner_functional" | "lp_quadruple" => format!("pow:{}", config.space.p()),
        "two_unif_convexity_functional" => {
            if config.space.p() <= 2.0 {
                "pow:2".to_string()
            } else {
                "pow:1.5".to_string()
            }
        }
        "zhang_functional" | "zhang_strengthened" | "popoviciu_vec" | "popoviciu_vec_signed" => {
            "pow:2".to_string()
        }
        "serre_functional" | "frechet_functional" | "frechet_functional_signed"
        | "revhh_signed" => "sqrt".to_string(),
        other => {
            return Err(Error::PreconditionFailed(format!(
                "check `{other}` takes no function"
            )))
        }
    };
    catalog(&default)
}

/// The catalog id a probe of this configuration will actually use: the
/// explicit `f_id` when set, the per-check default otherwise, `None` for
/// checks that take no scalar function.
pub fn resolved_function_id(config: &ProbeConfig) -> Option<String> {
    resolve_f(config).ok().map(|f| f.id().to_string())
}

fn require_finite_p(space: &SpaceKind) -> Result<f64> {
    let p = space.p();
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::BadP(p));
    }
    Ok(p)
}

fn space_pair_runner(
    space: SpaceKind,
    eval: impl Fn(&Operand, &Operand) -> Result<InequalityReport> + 'static,
) -> Runner {
    Runner {
        gen: Box::new(move |draw, style| Witness::from_operands(&gen_space_ops(&space, 2, draw, style))),
        eval: Box::new(move |w| {
            let ops = w.operands();
            eval(&ops[0], &ops[1])
        }),
    }
}

fn space_quad_runner(
    space: SpaceKind,
    eval: impl Fn(&Operand, &Operand, &Operand, &Operand) -> Result<InequalityReport> + 'static,
) -> Runner {
    Runner {
        gen: Box::new(move |draw, style| Witness::from_operands(&gen_space_ops(&space, 4, draw, style))),
        eval: Box::new(move |w| {
            let ops = w.operands();
            eval(&ops[0], &ops[1], &ops[2], &ops[3])
        }),
    }
}

fn euclid_triple_runner(
    dim: usize,
    cone: bool,
    eval: impl Fn(&DVector<f64>, &DVector<f64>, &DVector<f64>) -> Result<InequalityReport> + 'static,
) -> Runner {
    let space = SpaceKind::Euclid { dim };
    Runner {
        gen: Box::new(move |draw, style| {
            let mut ops = gen_space_ops(&space, 3, draw, style);
            if cone {
                clamp_to_cone(&mut ops);
            }
            Witness::from_operands(&ops)
        }),
        eval: Box::new(move |w| {
            let ops = w.operands();
            eval(&as_vector(&ops[0])?, &as_vector(&ops[1])?, &as_vector(&ops[2])?)
        }),
    }
}

fn psd_triple_runner(
    mdim: MatDim,
    eval: impl Fn(&PsdMatrix, &PsdMatrix, &PsdMatrix) -> Result<InequalityReport> + 'static,
) -> Runner {
    Runner {
        gen: Box::new(move |draw, style| Witness::from_operands(&gen_psd_triple(mdim, draw, style))),
        eval: Box::new(move |w| {
            let ops = w.operands();
            eval(&as_psd(&ops[0])?, &as_psd(&ops[1])?, &as_psd(&ops[2])?)
        }),
    }
}

fn build_runner(config: &ProbeConfig) -> Result<Runner> {
    let space = config.space;
    match config.check_id.as_str() {
        "quadruple_norm" => Ok(space_quad_runner(space, move |a, b, c, d| {
            inequalities::quadruple_norm(&space, a, b, c, d)
        })),
        "schotz_inner" => {
            if !space.is_euclidean() {
                return Err(Error::NotInnerProduct(space.id()));
            }
            let f = resolve_f(config)?;
            let gate = s0_gate(&f)?;
            Ok(space_quad_runner(space, move |x, y, z, p| {
                inequalities::schotz_inner_gated(&f, &gate, &space, x, y, z, p)
            }))
        }
        "functional_parallelogram" => {
            let f = resolve_f(config)?;
            let gate = s0_gate(&f)?;
            Ok(space_pair_runner(space, move |u, v| {
                inequalities::functional_parallelogram_gated(&f, &gate, &space, u, v)
            }))
        }
        "four_point_functional" => {
            let f = resolve_f(config)?;
            let gate = s0_gate(&f)?;
            Ok(Runner {
                gen: Box::new(move |draw, style| {
                    Witness::from_operands(&gen_space_ops(&space, 3, draw, style))
                }),
                eval: Box::new(move |w| {
                    let ops = w.operands();
                    inequalities::four_point_functional_gated(
                        &f, &gate, &space, &ops[0], &ops[1], &ops[2],
                    )
                }),
            })
        }
        "schotz_banach" => {
            let f = resolve_f(config)?;
            let gate = s0_gate(&f)?;
            Ok(space_quad_runner(space, move |y, z, q, r| {
                inequalities::schotz_banach_gated(&f, &gate, &space, y, z, q, r)
            }))
        }
        "alfa_power" => {
            if !(1.0..=2.0).contains(&config.alpha) {
                return Err(Error::BadAlpha(config.alpha));
            }
            let alpha = config.alpha;
            Ok(space_pair_runner(space, move |u, v| {
                inequalities::alfa_power(&space, u, v, alpha)
            }))
        }
        "clarkson_scalar" => {
            let f = resolve_f(config)?;
            let gate = s0_gate(&f)?;
            Ok(Runner {
                gen: Box::new(move |draw, style| {
                    let (a, b) = match style {
                        ProbeStyle::Plain(SampleStyle::Uniform) => {
                            (draw.range(-2.0, 2.0), draw.range(-2.0, 2.0))
                        }
                        ProbeStyle::Plain(SampleStyle::HeavyTail) => {
                            (draw.heavy(100.0), draw.heavy(100.0))
                        }
                        ProbeStyle::Plain(SampleStyle::Sparse) => {
                            let a = if draw.unit() < 0.5 { 0.0 } else { draw.range(-2.0, 2.0) };
                            let b = if draw.unit() < 0.5 { 0.0 } else { draw.range(-2.0, 2.0) };
                            (a, b)
                        }
                        ProbeStyle::NearCollinear => {
                            let a = draw.range(-2.0, 2.0);
                            (a, a * draw.range(-1.0, 1.0) + 0.05 * draw.range(-1.0, 1.0))
                        }
                    };
                    Witness::from_operands(&[Operand::vector(vec![a, b])])
                }),
                eval: Box::new(move |w| {
                    let ops = w.operands();
                    let v = as_vector(&ops[0])?;
                    inequalities::clarkson_scalar_gated(&f, &gate, v[0], v[1])
                }),
            })
        }
        "hanner_classic" => {
            require_finite_p(&space)?;
            Ok(Runner {
                gen: Box::new(move |draw, style| {
                    Witness::from_operands(&gen_hanner_pair(&space, draw, style))
                }),
                eval: Box::new(move |w| {
                    let ops = w.operands();
                    inequalities::hanner_classic(&space, &ops[0], &ops[1])
                }),
            })
        }
        "hanner_functional" => {
            let p = require_finite_p(&space)?;
            let f = resolve_f(config)?;
            let gate = inequalities::hanner_gate(&f, p)?;
            Ok(Runner {
                gen: Box::new(move |draw, style| {
                    Witness::from_operands(&gen_hanner_pair(&space, draw, style))
                }),
                eval: Box::new(move |w| {
                    let ops = w.operands();
                    inequalities::hanner_functional_gated(&f, &gate, &space, &ops[0], &ops[1])
                }),
            })
        }
        "easy_clarkson" => {
            require_finite_p(&space)?;
            Ok(space_pair_runner(space, move |u, v| {
                inequalities::easy_clarkson(&space, u, v)
            }))
        }
        "lp_quadruple" => {
            let p = require_finite_p(&space)?;
            let f = resolve_f(config)?;
            let gate = power_composite_gate(&f, p, true)?;
            Ok(space_quad_runner(space, move |q, r, y, z| {
                inequalities::lp_quadruple_gated(&f, &gate, &space, q, r, y, z)
            }))
        }
        "two_unif_convexity_classic" => {
            require_finite_p(&space)?;
            Ok(space_pair_runner(space, move |x, y| {
                inequalities::two_unif_convexity_classic(&space, x, y)
            }))
        }
        "two_unif_convexity_functional" => {
            let p = require_finite_p(&space)?;
            let f = resolve_f(config)?;
            let gate = two_unif_functional_gate(&f, p)?;
            Ok(space_pair_runner(space, move |x, y| {
                inequalities::two_unif_convexity_functional_gated(&f, &gate, &space, x, y)
            }))
        }
        "two_unif_quadruple_p_ge_2" => {
            crate::spaces::c_tilde(space.p())?;
            let f = resolve_f(config)?;
            let gate = s0_gate(&f)?;
            Ok(space_quad_runner(space, move |q, r, y, z| {
                inequalities::two_unif_quadruple_p_ge_2_gated(&f, &gate, &space, q, r, y, z)
            }))
        }
        "two_unif_translated" => {
            crate::spaces::c_tilde(space.p())?;
            let f = resolve_f(config)?;
            let gate = s0_gate(&f)?;
            let equal = config.equal_translations;
            Ok(space_quad_runner(space, move |x, y, u, v| {
                inequalities::two_unif_translated_gated(&f, &gate, &space, x, y, u, v, equal)
            }))
        }
        "zhang_det" => Ok(psd_triple_runner(psd_dim(&space), |a, b, c| {
            inequalities::zhang_det(a, b, c)
        })),
        "zhang_functional" => {
            let f = resolve_f(config)?;
            let gate = monotone_convex_gate(&f)?;
            Ok(psd_triple_runner(psd_dim(&space), move |a, b, c| {
                inequalities::zhang_functional_gated(&f, &gate, a, b, c)
            }))
        }
        "zhang_strengthened" => {
            let f = resolve_f(config)?;
            let gate = monotone_convex_gate(&f)?;
            Ok(psd_triple_runner(psd_dim(&space), move |a, b, c| {
                inequalities::zhang_strengthened_gated(&f, &gate, a, b, c)
            }))
        }
        "serre_det" => Ok(psd_triple_runner(psd_dim(&space), |a, b, c| {
            inequalities::serre_det(a, b, c)
        })),
        "serre_functional" => {
            let f = resolve_f(config)?;
            let gate = nonneg_monotone_concave_gate(&f)?;
            Ok(psd_triple_runner(psd_dim(&space), move |a, b, c| {
                inequalities::serre_functional_gated(&f, &gate, a, b, c)
            }))
        }
        "frechet_identity" => {
            let dim = vector_dim(&space)?;
            Ok(euclid_triple_runner(dim, false, |x, y, z| {
                inequalities::frechet_identity(x, y, z)
            }))
        }
        "hornich_hlawka" => {
            let dim = vector_dim(&space)?;
            let n_power = config.n_power;
            Ok(euclid_triple_runner(dim, false, move |x, y, z| {
                inequalities::hornich_hlawka(x, y, z, n_power)
            }))
        }
        "frechet_functional" => {
            let dim = vector_dim(&space)?;
            let f = resolve_f(config)?;
            let gate = monotone_concave_gate(&f)?;
            Ok(euclid_triple_runner(dim, true, move |x, y, z| {
                inequalities::frechet_functional_gated(&f, &gate, x, y, z)
            }))
        }
        "frechet_functional_signed" => {
            let dim = vector_dim(&space)?;
            let f = resolve_f(config)?;
            let gate = monotone_concave_gate(&f)?;
            Ok(euclid_triple_runner(dim, false, move |x, y, z| {
                inequalities::frechet_functional_signed_gated(&f, &gate, x, y, z)
            }))
        }
        "revhh_signed" => {
            let dim = vector_dim(&space)?;
            let f = resolve_f(config)?;
            let gate = monotone_concave_gate(&f)?;
            Ok(euclid_triple_runner(dim, false, move |x, y, z| {
                inequalities::revhh_signed_gated(&f, &gate, x, y, z)
            }))
        }
        "popoviciu_vec" => {
            let dim = vector_dim(&space)?;
            let f = resolve_f(config)?;
            let gate = sqrt_composite_gate(&f)?;
            Ok(euclid_triple_runner(dim, true, move |x, y, z| {
                inequalities::popoviciu_vec_gated(&f, &gate, x, y, z)
            }))
        }
        "popoviciu_vec_signed" => {
            let dim = vector_dim(&space)?;
            let f = resolve_f(config)?;
            let gate = sqrt_composite_gate(&f)?;
            Ok(euclid_triple_runner(dim, false, move |x, y, z| {
                inequalities::popoviciu_vec_signed_gated(&f, &gate, x, y, z)
            }))
        }
        "strong_superadditivity" => {
            let dim = vector_dim(&space)?;
            Ok(euclid_triple_runner(dim, true, |x, y, z| {
                inequalities::strong_superadditivity(x, y, z)
            }))
        }
        other => Err(Error::UnknownCheck(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// Probing, re-evaluation, refinement.
// ---------------------------------------------------------------------------

/// Randomized sweep with per-check default function and parameters.
pub fn probe(
    check_id: &str,
    space: &SpaceKind,
    f_id: Option<&str>,
    trials: u64,
    seed: u64,
) -> Result<SearchResult> {
    if trials == 0 {
        return Err(Error::PreconditionFailed("probe needs at least one trial".into()));
    }
    let mut config = ProbeConfig::new(check_id, *space);
    config.f_id = f_id.map(str::to_string);
    probe_with(&config, trials, seed)
}

/// Randomized sweep with an explicit configuration. `trials = 0` yields the
/// empty result (`probes = 0`, no witness).
pub fn probe_with(config: &ProbeConfig, trials: u64, seed: u64) -> Result<SearchResult> {
    Ok(probe_with_stats(config, trials, seed)?.0)
}

/// As [`probe_with`], also counting how many probes came back inconclusive
/// (a failed operand-level hypothesis row). Sweep summaries need the count:
/// a clean minimum margin over mostly-inconclusive probes is evidence of
/// nothing.
pub fn probe_with_stats(config: &ProbeConfig, trials: u64, seed: u64) -> Result<(SearchResult, u64)> {
    let runner = build_runner(config)?;
    let mut worst = f64::INFINITY;
    let mut best: Option<Witness> = None;
    let mut inconclusive = 0u64;
    for index in 0..trials {
        let mut draw = Draw::split(seed, index);
        let style = pick_style(&mut draw);
        let witness = (runner.gen)(&mut draw, style);
        let report = (runner.eval)(&witness)?;
        if report.inconclusive {
            inconclusive += 1;
        }
        if best.is_none() || report.margin < worst {
            worst = report.margin;
            best = Some(witness);
        }
    }
    let result = SearchResult {
        check_id: config.check_id.clone(),
        probes: trials,
        worst_margin: worst,
        witness: best.map(|w| w.to_json()),
        seed,
        refined: false,
    };
    Ok((result, inconclusive))
}

/// Re-runs the configured checker on a serialized witness.
pub fn reevaluate(config: &ProbeConfig, witness: &Value) -> Result<InequalityReport> {
    let runner = build_runner(config)?;
    let w = Witness::from_json(witness)?;
    (runner.eval)(&w)
}

/// Evaluate `trials` seeded operand sets and return every report in order.
/// Trial `i` sees exactly the operands that [`probe_with`] would give it, so
/// a report emitted here can be cross-checked against a probe of the same
/// seed.
pub fn evaluate_reports(
    config: &ProbeConfig,
    trials: u64,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    if trials == 0 {
        return Err(Error::PreconditionFailed("need at least one trial".into()));
    }
    let runner = build_runner(config)?;
    (0..trials)
        .map(|index| {
            let mut draw = Draw::split(seed, index);
            let style = pick_style(&mut draw);
            let witness = (runner.gen)(&mut draw, style);
            (runner.eval)(&witness)
        })
        .collect()
}

/// Derivative-free pattern search over the witness coordinates: each move
/// perturbs one coordinate by ± the current step, accepting strictly better
/// margins; the step starts at 0.1× the largest coordinate magnitude,
/// halves after every pass without improvement, and the search stops below
/// step 1e-6 or when the evaluation budget runs out. The result is never
/// worse than the input; budget 0 returns the input unchanged.
pub fn refine(config: &ProbeConfig, result: &SearchResult, budget: u64) -> Result<SearchResult> {
    let witness_json = result.witness.as_ref().ok_or_else(|| {
        Error::PreconditionFailed("refine needs a witness to start from".into())
    })?;
    if budget == 0 {
        return Ok(result.clone());
    }
    let runner = build_runner(config)?;
    let mut current = Witness::from_json(witness_json)?;
    let mut best = (runner.eval)(&current)?.margin;
    let scale = current.coords.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    let mut step = 0.1 * if scale > 0.0 { scale } else { 1.0 };
    let mut evals = 0u64;
    'search: while step >= 1e-6 && evals < budget {
        let mut improved = false;
        for i in 0..current.coords.len() {
            for dir in [1.0f64, -1.0] {
                if evals >= budget {
                    break 'search;
                }
                let mut candidate = current.clone();
                candidate.coords[i] += dir * step;
                evals += 1;
                if let Ok(report) = (runner.eval)(&candidate) {
                    if report.margin.is_finite() && report.margin < best {
                        best = report.margin;
                        current = candidate;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(SearchResult {
        check_id: result.check_id.clone(),
        probes: result.probes,
        worst_margin: best,
        witness: Some(current.to_json()),
        seed: result.seed,
        refined: true,
    })
}

// ---------------------------------------------------------------------------
// Fixed falsifier and open-problem probes.
// ---------------------------------------------------------------------------

fn falsifier_matrices() -> (PsdMatrix, PsdMatrix, PsdMatrix) {
    let a = PsdMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]])
        .expect("identity is positive semidefinite");
    let b = PsdMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]])
        .expect("diagonal (1, 2) is positive semidefinite");
    let c = PsdMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 2.0]])
        .expect("[[1,1],[1,2]] is positive semidefinite");
    (a, b, c)
}

/// The fixed counterexample to the mean-strengthened determinantal
/// comparison: f(x) = x² on A = I, B = diag(1, 2), C = [[1, 1], [1, 2]]
/// gives lhs = 2 + (14/9)², rhs = 55/12, margin = −53/324 ≈ −0.16358,
/// holds = false.
pub fn falsify_strengthened_zhang() -> InequalityReport {
    zhang_falsifier_pair().0
}

/// The strengthened (failing) report together with its unstrengthened
/// control on the same matrices (margin exactly 123 with f(x) = x²).
pub fn zhang_falsifier_pair() -> (InequalityReport, InequalityReport) {
    let (a, b, c) = falsifier_matrices();
    let f = catalog("pow:2").expect("the catalog provides pow:2");
    let strengthened = inequalities::zhang_strengthened(&f, &a, &b, &c)
        .expect("fixed falsifier inputs are admissible");
    let control = inequalities::zhang_functional(&f, &a, &b, &c)
        .expect("fixed falsifier inputs are admissible");
    (strengthened, control)
}

/// Evidence sweep for the open question whether the positive-cone
/// three-point comparisons survive on arbitrary signed operands. Runs in
/// the plane with the canonical function for each family (square root for
/// the additive form, square for the norm form); reports whatever it finds.
pub fn probe_open_problem(which: &str, trials: u64, seed: u64) -> Result<SearchResult> {
    let f_id = match which {
        "frechet_functional_signed" => "sqrt",
        "popoviciu_vec_signed" => "pow:2",
        other => return Err(Error::UnknownCheck(other.to_string())),
    };
    let mut config = ProbeConfig::new(which, SpaceKind::Euclid { dim: 2 });
    config.f_id = Some(f_id.to_string());
    probe_with(&config, trials, seed)
}
