//! Positive semidefinite matrices: validation, projection, and seeded
//! generators for the determinantal checkers.

use crate::error::{Error, Result};
use crate::rng::Draw;
use nalgebra::DMatrix;

/// Relative eigenvalue band below zero that still counts as PSD.
const PSD_BAND: f64 = 1e-10;

fn symmetry_defect(m: &DMatrix<f64>) -> Option<(usize, usize, f64)> {
    let scale = 1.0 + m.amax();
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            let delta = (m[(i, j)] - m[(j, i)]).abs();
            if delta > 1e-12 * scale {
                return Some((i, j, delta));
            }
        }
    }
    None
}

fn require_square(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { left: m.nrows(), right: m.ncols() });
    }
    Ok(m.nrows())
}

/// A validated symmetric positive semidefinite real matrix.
///
/// "Positive semidefinite" is enforced up to floating point: the smallest
/// eigenvalue may dip to `-1e-10` times the spectral radius, which absorbs
/// the rounding of honest constructions like `G * G^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix {
    entries: DMatrix<f64>,
}

impl PsdMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        require_square(&entries)?;
        if let Some((i, j, delta)) = symmetry_defect(&entries) {
            return Err(Error::NotSymmetric { i, j, delta });
        }
        let eigenvalues = entries.clone().symmetric_eigen().eigenvalues;
        let radius = eigenvalues.amax();
        let min = eigenvalues.min();
        if min < -PSD_BAND * radius {
            return Err(Error::NotPsd { eigenvalue: min });
        }
        Ok(Self { entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: rows.iter().map(|r| r.len()).find(|&l| l != n).unwrap_or(n),
            });
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(DMatrix::from_row_slice(n, n, &flat))
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.entries.clone().symmetric_eigen().eigenvalues.min()
    }
}

/// Project a symmetric matrix onto the PSD cone by eigenvalue clipping.
pub fn psd_project(m: &DMatrix<f64>) -> Result<PsdMatrix> {
    require_square(m)?;
    if let Some((i, j, delta)) = symmetry_defect(m) {
        return Err(Error::NotSymmetric { i, j, delta });
    }
    let eigen = m.clone().symmetric_eigen();
    let clipped = eigen.eigenvalues.map(|l| l.max(0.0));
    let q = eigen.eigenvectors;
    let rebuilt = &q * DMatrix::from_diagonal(&clipped) * q.transpose();
    // Symmetrize away the rounding of the triple product before validating.
    let symmetric = (&rebuilt + rebuilt.transpose()) * 0.5;
    PsdMatrix::new(symmetric)
}

/// Seeded symmetric matrix with entries of size about `scale`.
pub fn random_symmetric(draw: &mut Draw, m: usize, scale: f64) -> DMatrix<f64> {
    let raw = DMatrix::from_fn(m, m, |_, _| draw.range(-scale, scale));
    (&raw + raw.transpose()) * 0.5
}

/// Seeded PSD matrix built as `G * G^T` (Wishart-style).
pub fn random_psd(draw: &mut Draw, m: usize, scale: f64) -> PsdMatrix {
    let g = DMatrix::from_fn(m, m, |_, _| draw.range(-scale, scale));
    let prod = &g * g.transpose();
    let symmetric = (&prod + prod.transpose()) * 0.5;
    PsdMatrix::new(symmetric).expect("G * G^T is positive semidefinite")
}

/// Seeded orthogonal matrix (Q factor of a random square matrix).
pub fn random_orthogonal(draw: &mut Draw, m: usize) -> DMatrix<f64> {
    let raw = DMatrix::from_fn(m, m, |_, _| draw.normal());
    raw.qr().q()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_projects_to_itself() {
        let id = DMatrix::<f64>::identity(3, 3);
        let p = psd_project(&id).unwrap();
        assert!((p.entries() - id).amax() <= 1e-14);
    }

    #[test]
    fn indefinite_diagonal_clips_at_zero() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        let p = psd_project(&m).unwrap();
        let want = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0]));
        assert!((p.entries() - want).amax() <= 1e-12);
    }

    #[test]
    fn wishart_matrices_are_fixed_points() {
        let mut draw = Draw::new(0x51D);
        for m in 2..=5 {
            let w = random_psd(&mut draw, m, 1.0);
            let p = psd_project(w.entries()).unwrap();
            assert!((p.entries() - w.entries()).amax() <= 1e-10);
        }
    }

    #[test]
    fn asymmetry_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(psd_project(&m), Err(Error::NotSymmetric { .. })));
        assert!(matches!(PsdMatrix::new(m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn indefinite_matrices_fail_validation() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        assert!(matches!(PsdMatrix::new(m), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(PsdMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0]]).is_err());
    }

    #[test]
    fn determinant_of_diagonal() {
        let p = PsdMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        assert!((p.determinant() - 6.0).abs() <= 1e-12);
    }

    #[test]
    fn random_orthogonal_has_orthonormal_columns() {
        let mut draw = Draw::new(0x0A7B);
        for m in 2..=6 {
            let q = random_orthogonal(&mut draw, m);
            let gram = q.transpose() * &q;
            assert!((gram - DMatrix::<f64>::identity(m, m)).amax() <= 1e-10);
        }
    }
}
