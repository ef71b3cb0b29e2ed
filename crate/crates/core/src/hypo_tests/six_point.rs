use crate::mat2::{is_psd, Sym2};
use crate::shift_model::{Point, WeightDiagram};

use super::{finish, resolve_cap, Settings, TestError, TestVerdict, Witness};

/// Local matrix of the six-point test at `k`:
/// `[[a^2_(k+e1) - a^2_k, a_(k+e2) b_(k+e1) - a_k b_k], [., b^2_(k+e2) - b^2_k]]`.
pub fn six_point_matrix(d: &WeightDiagram, k: Point) -> Sym2 {
    let sq = |v: f64| v * v;
    let (ak, bk) = (d.alpha(k), d.beta(k));
    Sym2::raw(
        sq(d.alpha(k.right())) - sq(ak),
        d.alpha(k.up()) * d.beta(k.right()) - ak * bk,
        sq(d.beta(k.up())) - sq(bk),
    )
}

/// Joint hyponormality through the six-point matrices at every `k` with
/// `k1 + k2 <= cap`.
pub fn six_point_test(d: &WeightDiagram, s: &Settings) -> Result<TestVerdict, TestError> {
    let cap = resolve_cap(d, s.cap)?;
    let mut min_margin = f64::INFINITY;
    for k in Point::up_to_degree(cap.level) {
        let c = is_psd(&six_point_matrix(d, k), s.tol);
        min_margin = min_margin.min(c.lambda_min);
        if !c.psd {
            let w = Witness::SixPoint { k, lambda_min: c.lambda_min };
            return Ok(finish(Some(w), cap, k.degree() + 1, min_margin, false));
        }
    }
    Ok(finish(None, cap, cap.level + 1, min_margin, false))
}
