//! Small dense symmetric helpers (eigenvalues through nalgebra, Sturm
//! bisection for symmetric tridiagonal matrices).

use alloc::vec::Vec;

use libm::fabs;
use nalgebra::DMatrix;

use crate::mat2::PsdTolerance;

/// Smallest eigenvalue of a symmetric matrix (0 for an empty matrix).
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone().symmetric_eigenvalues().min()
}

/// `(lambda_min, band)` of a symmetric matrix under `tol`.
pub fn psd_margin(m: &DMatrix<f64>, tol: PsdTolerance) -> (f64, f64) {
    (min_eigenvalue(m), tol.band_for_norm(m.norm()))
}

/// Principal square root of a symmetric PSD matrix via eigendecomposition
/// (negative eigenvalues inside rounding are clamped to zero).
pub fn sqrt_sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let vals = eig.eigenvalues.map(|v| libm::sqrt(v.max(0.0)));
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&vals) * v.transpose()
}

/// Number of eigenvalues strictly below `x` of the symmetric tridiagonal
/// matrix with diagonal `diag` and off-diagonal `off`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0_f64;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = if i == 0 { diag[0] - x } else { diag[i] - x - b2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (1.0 + fabs(diag[i]) + fabs(x));
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix by bisection.
pub fn tridiag_min_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    if n == 0 {
        return 0.0;
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = (if i > 0 { fabs(off[i - 1]) } else { 0.0 })
            + (if i + 1 < n { fabs(off[i]) } else { 0.0 });
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = fabs(lo).max(fabs(hi)).max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * scale {
            break;
        }
        if sturm_count(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Dense symmetric tridiagonal matrix.
pub fn tridiag_to_dense(diag: &[f64], off: &[f64]) -> DMatrix<f64> {
    let n = diag.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    })
}

/// Frobenius norm of a symmetric tridiagonal matrix.
pub fn tridiag_norm(diag: &[f64], off: &[f64]) -> f64 {
    let s: f64 = diag.iter().map(|v| v * v).sum::<f64>() + 2.0 * off.iter().map(|v| v * v).sum::<f64>();
    libm::sqrt(s)
}

/// Permutes rows and columns: `out[i][j] = m[p[i]][p[j]]`.
pub fn permute(m: &DMatrix<f64>, p: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(p.len(), p.len(), |i, j| m[(p[i], p[j])])
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(fabs(*v)))
}

pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_matches_dense() {
        let diag = [2.0, -1.0, 3.0, 0.5, 0.0];
        let off = [1.0, 0.3, -2.0, 0.7];
        let dense = tridiag_to_dense(&diag, &off);
        let a = tridiag_min_eigenvalue(&diag, &off);
        let b = min_eigenvalue(&dense);
        assert!((a - b).abs() < 1e-13, "{a} vs {b}");
    }

    #[test]
    fn bisection_with_zero_rows() {
        let diag = [0.0, 0.0, 1.0];
        let off = [0.0, 0.0];
        assert!(tridiag_min_eigenvalue(&diag, &off).abs() < 1e-15);
    }

    #[test]
    fn dense_sqrt_squares_back() {
        let m = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, 2.0]);
        let s = sqrt_sym(&m);
        assert!(max_abs(&(&s * &s - &m)) < 1e-13);
    }
}
