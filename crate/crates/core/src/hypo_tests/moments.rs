use alloc::vec::Vec;

use libm::sqrt;
use nalgebra::DMatrix;

use crate::dense::psd_margin;
use crate::mat2::PsdTolerance;
use crate::shift_model::{moments, EmbeddingSpec, MomentTable, Point, WeightDiagram};

use super::{finish, resolve_cap, Settings, TestError, TestVerdict, Witness};

/// Outcome of the order-`k` moment test.
#[derive(Debug, Clone, PartialEq)]
pub struct KHypoReport {
    pub order: usize,
    /// Base points `u` checked, with the smallest eigenvalue of the
    /// diagonally normalized `M_u(order)`.
    pub points: Vec<(Point, f64)>,
    /// Side length of each `M_u(order)`: `(order + 1)(order + 2) / 2`.
    pub matrix_dim: usize,
    pub verdict: TestVerdict,
}

/// `D^{-1/2} M D^{-1/2}` for the Gram-type matrix `M_ij = g(i + j)`; scaling
/// by a positive diagonal does not change positivity.
fn normalized(dim: usize, entry: impl Fn(usize, usize) -> f64) -> DMatrix<f64> {
    let diag: Vec<f64> = (0..dim).map(|i| sqrt(entry(i, i))).collect();
    DMatrix::from_fn(dim, dim, |i, j| entry(i, j) / (diag[i] * diag[j]))
}

pub(crate) fn moment_matrix(t: &MomentTable, u: Point, index: &[Point]) -> DMatrix<f64> {
    normalized(index.len(), |i, j| {
        let (v, w) = (index[i], index[j]);
        t.at(u.offset(v.k1 + w.k1, v.k2 + w.k2))
    })
}

/// Positivity of `M_u(k) = (gamma_{u + v + w})_{|v|,|w| <= k}` at every base
/// point `u` with `|u| <= cap`.
pub fn moment_matrix_test(d: &WeightDiagram, order: usize, s: &Settings) -> Result<KHypoReport, TestError> {
    if order == 0 {
        return Err(TestError::InvalidOrder(order));
    }
    let cap = resolve_cap(d, s.cap)?;
    let reach = cap.level + 2 * order;
    let t = moments(d, reach, reach)?;
    let index: Vec<Point> = Point::up_to_degree(order).collect();
    let mut points = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut witness = None;
    for u in Point::up_to_degree(cap.level) {
        let (lambda_min, band) = psd_margin(&moment_matrix(&t, u, &index), s.tol);
        points.push((u, lambda_min));
        min_margin = min_margin.min(lambda_min);
        if lambda_min < -band {
            witness = Some(Witness::MomentMatrix { u, order, lambda_min });
            break;
        }
    }
    let levels = points.last().map_or(0, |(u, _)| u.degree() + 1);
    Ok(KHypoReport {
        order,
        matrix_dim: index.len(),
        points,
        verdict: finish(witness, cap, levels, min_margin, false),
    })
}

/// Moment tests of orders `1..=kmax`.
pub fn k_hypo_profile(d: &WeightDiagram, kmax: usize, s: &Settings) -> Result<Vec<KHypoReport>, TestError> {
    (1..=kmax).map(|k| moment_matrix_test(d, k, s)).collect()
}

/// One-variable order-`k` test of the weight sequence `omega`: the Hankel
/// matrices `(gamma_{p+i+j})_{0 <= i,j <= k}` are PSD for `p <= p_max`.
/// Returns the first failing `p` with its smallest eigenvalue, if any.
pub fn hankel_test(e: &EmbeddingSpec, order: usize, p_max: usize, tol: PsdTolerance) -> Option<(usize, f64)> {
    let g: Vec<f64> = (0..=p_max + 2 * order).map(|j| e.omega_moment(j)).collect();
    (0..=p_max).find_map(|p| {
        let m = normalized(order + 1, |i, j| g[p + i + j]);
        let (lambda_min, band) = psd_margin(&m, tol);
        (lambda_min < -band).then_some((p, lambda_min))
    })
}
