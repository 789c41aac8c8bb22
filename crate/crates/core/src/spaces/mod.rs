//! Finite-dimensional normed spaces and their geometric constants.
//!
//! Infinite-dimensional `L^p(mu)` is modeled by `l^p_n` under counting
//! measure — a genuine `L^p` space, so every theorem applies verbatim —
//! and the Schatten-p classes by real square matrices whose singular values
//! come from a dense decomposition. The max-norm is reached through the
//! sentinel `p = f64::INFINITY`.

mod constants;
mod psd;

pub use constants::{
    c_constant, c_tilde, cnj_analytic, floor_two_p_minus_one, n_constant, ConstantSource,
    GeometricConstants,
};
pub use psd::{psd_project, random_orthogonal, random_psd, random_symmetric, PsdMatrix};

use crate::error::{Error, Result};
use crate::rng::Draw;
use nalgebra::{DMatrix, DVector};

/// `(sum |v_i|^p)^{1/p}`, max-norm at the infinity sentinel.
pub fn lp_norm(p: f64, coords: &[f64]) -> f64 {
    if p.is_infinite() {
        coords.iter().fold(0.0_f64, |acc, &c| acc.max(c.abs()))
    } else if p == 1.0 {
        coords.iter().map(|c| c.abs()).sum()
    } else if p == 2.0 {
        coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    } else {
        coords.iter().map(|c| c.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Schatten p-norm: the `l^p` norm of the singular-value vector.
pub fn schatten_norm(entries: &DMatrix<f64>, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(Error::BadP(p));
    }
    let svd = entries
        .clone()
        .try_svd(false, false, 1e-12, 10_000)
        .ok_or(Error::SvdFailure { rows: entries.nrows(), cols: entries.ncols() })?;
    Ok(lp_norm(p, svd.singular_values.as_slice()))
}

/// The space `l^p_dim` (`p = f64::INFINITY` for the max-norm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpSpace {
    p: f64,
    dim: usize,
}

impl LpSpace {
    pub fn new(p: f64, dim: usize) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::BadP(p));
        }
        if dim == 0 {
            return Err(Error::PreconditionFailed("dimension must be at least 1".into()));
        }
        Ok(Self { p, dim })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self, coords: &[f64]) -> Result<f64> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: coords.len() });
        }
        Ok(lp_norm(self.p, coords))
    }
}

/// A vector bound to its `l^p` space.
#[derive(Debug, Clone, PartialEq)]
pub struct LpVector {
    space: LpSpace,
    coords: Vec<f64>,
}

impl LpVector {
    pub fn new(space: LpSpace, coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::PreconditionFailed("coordinates must be finite".into()));
        }
        space.norm(&coords)?;
        Ok(Self { space, coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        lp_norm(self.space.p, &self.coords)
    }
}

/// A square real matrix viewed as a member of the Schatten-p class.
#[derive(Debug, Clone, PartialEq)]
pub struct SchattenOperand {
    entries: DMatrix<f64>,
    p: f64,
}

impl SchattenOperand {
    pub fn new(entries: DMatrix<f64>, p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 || p.is_infinite() {
            return Err(Error::BadP(p));
        }
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                left: entries.nrows(),
                right: entries.ncols(),
            });
        }
        if entries.iter().any(|c| !c.is_finite()) {
            return Err(Error::PreconditionFailed("entries must be finite".into()));
        }
        Ok(Self { entries, p })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn norm(&self) -> Result<f64> {
        schatten_norm(&self.entries, self.p)
    }
}

/// Coordinate styles used when sampling operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleStyle {
    Uniform,
    HeavyTail,
    Sparse,
}

/// A point of one of the supported spaces: a coordinate vector or a square
/// matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Vector(DVector<f64>),
    Matrix(DMatrix<f64>),
}

impl Operand {
    pub fn vector(coords: Vec<f64>) -> Self {
        Operand::Vector(DVector::from_vec(coords))
    }

    pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::PreconditionFailed(
                "matrix operand needs square, nonempty rows".into(),
            ));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Ok(Operand::Matrix(DMatrix::from_row_slice(n, n, &flat)))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        match (self, other) {
            (Operand::Vector(a), Operand::Vector(b)) if a.len() == b.len() => Ok(()),
            (Operand::Matrix(a), Operand::Matrix(b)) if a.nrows() == b.nrows() => Ok(()),
            (Operand::Vector(a), Operand::Vector(b)) => {
                Err(Error::DimensionMismatch { left: a.len(), right: b.len() })
            }
            (Operand::Matrix(a), Operand::Matrix(b)) => {
                Err(Error::DimensionMismatch { left: a.nrows(), right: b.nrows() })
            }
            _ => Err(Error::PreconditionFailed(
                "cannot mix vector and matrix operands".into(),
            )),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(match (self, other) {
            (Operand::Vector(a), Operand::Vector(b)) => Operand::Vector(a + b),
            (Operand::Matrix(a), Operand::Matrix(b)) => Operand::Matrix(a + b),
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(match (self, other) {
            (Operand::Vector(a), Operand::Vector(b)) => Operand::Vector(a - b),
            (Operand::Matrix(a), Operand::Matrix(b)) => Operand::Matrix(a - b),
            _ => unreachable!(),
        })
    }

    pub fn scale(&self, t: f64) -> Self {
        match self {
            Operand::Vector(a) => Operand::Vector(a * t),
            Operand::Matrix(a) => Operand::Matrix(a * t),
        }
    }

    /// Euclidean/Frobenius inner product of same-shape operands.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(match (self, other) {
            (Operand::Vector(a), Operand::Vector(b)) => a.dot(b),
            (Operand::Matrix(a), Operand::Matrix(b)) => a.dot(b),
            _ => unreachable!(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Operand::Vector(a) => serde_json::json!(a.as_slice()),
            Operand::Matrix(a) => {
                let rows: Vec<Vec<f64>> =
                    a.row_iter().map(|r| r.iter().copied().collect()).collect();
                serde_json::json!(rows)
            }
        }
    }
}

/// One of the supported ambient spaces.
///
/// Text form (CLI and battery configs): `lp:<p>:<dim>`, `schatten:<p>:<m>`,
/// `euclid:<dim>`; `<p>` accepts `inf` for the max-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceKind {
    Lp { p: f64, dim: usize },
    Schatten { p: f64, m: usize },
    Euclid { dim: usize },
}

impl SpaceKind {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::BadSpaceSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = spec.split(':').collect();
        let parse_p = |raw: &str| -> Result<f64> {
            if matches!(raw, "inf" | "Inf" | "infinity" | "oo") {
                return Ok(f64::INFINITY);
            }
            raw.parse::<f64>().map_err(|_| bad("exponent is not a number"))
        };
        let parse_dim = |raw: &str| -> Result<usize> {
            let d: usize = raw.parse().map_err(|_| bad("dimension is not a positive integer"))?;
            if d == 0 {
                return Err(bad("dimension must be at least 1"));
            }
            Ok(d)
        };
        match parts.as_slice() {
            ["lp", p, dim] => {
                let p = parse_p(p)?;
                if p.is_nan() || p < 1.0 {
                    return Err(bad("p must be at least 1 (or inf)"));
                }
                Ok(SpaceKind::Lp { p, dim: parse_dim(dim)? })
            }
            ["schatten", p, m] => {
                let p = parse_p(p)?;
                if p.is_nan() || p < 1.0 || p.is_infinite() {
                    return Err(bad("Schatten exponent must be finite and at least 1"));
                }
                Ok(SpaceKind::Schatten { p, m: parse_dim(m)? })
            }
            ["euclid", dim] => Ok(SpaceKind::Euclid { dim: parse_dim(dim)? }),
            _ => Err(bad("expected lp:<p>:<dim>, schatten:<p>:<m>, or euclid:<dim>")),
        }
    }

    pub fn id(&self) -> String {
        match self {
            SpaceKind::Lp { p, dim } if p.is_infinite() => format!("lp:inf:{dim}"),
            SpaceKind::Lp { p, dim } => format!("lp:{p}:{dim}"),
            SpaceKind::Schatten { p, m } => format!("schatten:{p}:{m}"),
            SpaceKind::Euclid { dim } => format!("euclid:{dim}"),
        }
    }

    /// The norm exponent (2 for the Euclidean kind).
    pub fn p(&self) -> f64 {
        match self {
            SpaceKind::Lp { p, .. } | SpaceKind::Schatten { p, .. } => *p,
            SpaceKind::Euclid { .. } => 2.0,
        }
    }

    /// Does the norm come from an inner product?
    pub fn is_euclidean(&self) -> bool {
        (self.p() - 2.0).abs() <= 1e-12
    }

    pub fn norm(&self, op: &Operand) -> Result<f64> {
        match (self, op) {
            (SpaceKind::Lp { p, dim }, Operand::Vector(v)) => {
                if v.len() != *dim {
                    return Err(Error::DimensionMismatch { left: *dim, right: v.len() });
                }
                Ok(lp_norm(*p, v.as_slice()))
            }
            (SpaceKind::Euclid { dim }, Operand::Vector(v)) => {
                if v.len() != *dim {
                    return Err(Error::DimensionMismatch { left: *dim, right: v.len() });
                }
                Ok(lp_norm(2.0, v.as_slice()))
            }
            (SpaceKind::Schatten { p, m }, Operand::Matrix(t)) => {
                if t.nrows() != *m || t.ncols() != *m {
                    return Err(Error::DimensionMismatch { left: *m, right: t.nrows() });
                }
                schatten_norm(t, *p)
            }
            (SpaceKind::Schatten { .. }, Operand::Vector(_)) => Err(Error::PreconditionFailed(
                "Schatten spaces take matrix operands".into(),
            )),
            (_, Operand::Matrix(_)) => Err(Error::PreconditionFailed(
                "sequence spaces take vector operands".into(),
            )),
        }
    }

    /// Seeded operand of this space in the given coordinate style.
    pub fn random_operand(&self, draw: &mut Draw, style: SampleStyle) -> Operand {
        match self {
            SpaceKind::Lp { dim, .. } | SpaceKind::Euclid { dim } => {
                Operand::Vector(DVector::from_vec(random_coords(draw, *dim, style)))
            }
            SpaceKind::Schatten { m, .. } => {
                let flat = random_coords(draw, m * m, style);
                Operand::Matrix(DMatrix::from_row_slice(*m, *m, &flat))
            }
        }
    }
}

/// Seeded coordinate block: uniform on [-1, 1], heavy-tailed (capped), or
/// sparse with uniform survivors.
pub fn random_coords(draw: &mut Draw, n: usize, style: SampleStyle) -> Vec<f64> {
    match style {
        SampleStyle::Uniform => (0..n).map(|_| draw.range(-1.0, 1.0)).collect(),
        SampleStyle::HeavyTail => (0..n).map(|_| draw.heavy(100.0)).collect(),
        SampleStyle::Sparse => {
            let mut coords: Vec<f64> = (0..n)
                .map(|_| if draw.unit() < 0.25 { draw.range(-1.0, 1.0) } else { 0.0 })
                .collect();
            if coords.iter().all(|&c| c == 0.0) {
                coords[draw.index(n)] = draw.range(-1.0, 1.0);
            }
            coords
        }
    }
}

fn nj_ratio(space: &SpaceKind, u: &Operand, v: &Operand) -> Result<Option<f64>> {
    let nu = space.norm(u)?;
    let nv = space.norm(v)?;
    let denominator = 2.0 * (nu * nu + nv * nv);
    if denominator < 1e-30 {
        return Ok(None);
    }
    let np = space.norm(&u.add(v)?)?;
    let nm = space.norm(&u.sub(v)?)?;
    Ok(Some((np * np + nm * nm) / denominator))
}

/// The deterministic pairs known to stress the von Neumann–Jordan ratio:
/// two "basis" elements, and their sum/difference. Between them they attain
/// the analytic constant of every `l^p` and Schatten-p space.
fn extremal_pairs(space: &SpaceKind) -> Vec<(Operand, Operand)> {
    let basis_pair = |dim: usize| -> Vec<(Vec<f64>, Vec<f64>)> {
        if dim == 1 {
            return vec![(vec![1.0], vec![0.0])];
        }
        let mut e1 = vec![0.0; dim];
        let mut e2 = vec![0.0; dim];
        e1[0] = 1.0;
        e2[1] = 1.0;
        let mut sum = vec![0.0; dim];
        let mut diff = vec![0.0; dim];
        sum[0] = 1.0;
        sum[1] = 1.0;
        diff[0] = 1.0;
        diff[1] = -1.0;
        vec![(e1, e2), (sum, diff)]
    };
    match space {
        SpaceKind::Lp { dim, .. } | SpaceKind::Euclid { dim } => basis_pair(*dim)
            .into_iter()
            .map(|(a, b)| (Operand::vector(a), Operand::vector(b)))
            .collect(),
        SpaceKind::Schatten { m, .. } => {
            let as_diag = |d: Vec<f64>| {
                let mut mat = DMatrix::zeros(*m, *m);
                for (i, value) in d.into_iter().enumerate() {
                    mat[(i, i)] = value;
                }
                Operand::Matrix(mat)
            };
            basis_pair(*m).into_iter().map(|(a, b)| (as_diag(a), as_diag(b))).collect()
        }
    }
}

/// Sampled lower bound for the von Neumann–Jordan constant: the max ratio
/// `(‖u+v‖² + ‖u-v‖²) / (2‖u‖² + 2‖v‖²)` over seeded pairs plus the
/// deterministic extremal pairs. Reported as a lower bound only — no
/// convergence is claimed.
pub fn cnj_sampled(space: &SpaceKind, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::PreconditionFailed("need at least one trial".into()));
    }
    let mut best = f64::NEG_INFINITY;
    for (u, v) in extremal_pairs(space) {
        if let Some(r) = nj_ratio(space, &u, &v)? {
            best = best.max(r);
        }
    }
    let mut draw = Draw::new(seed);
    for trial in 0..trials {
        let style = match trial % 5 {
            0 | 1 | 2 => SampleStyle::Uniform,
            3 => SampleStyle::HeavyTail,
            _ => SampleStyle::Sparse,
        };
        let u = space.random_operand(&mut draw, style);
        let v = space.random_operand(&mut draw, style);
        if let Some(r) = nj_ratio(space, &u, &v)? {
            best = best.max(r);
        }
    }
    Ok(best)
}
