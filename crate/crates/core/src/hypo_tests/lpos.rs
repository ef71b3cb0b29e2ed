use alloc::vec::Vec;

use libm::fabs;

use crate::blockdecomp::blocks;
use crate::mat2::is_psd;
use crate::shift_model::{moments, Point, WeightDiagram};

use super::{finish, resolve_cap, Settings, TestError, TestVerdict, Witness};

/// One evaluation of `alpha_k beta_(k+e1-e2) <= beta_k alpha_(k+e1-e2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LInequalityRow {
    pub k: Point,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn slack_ok(lhs: f64, rhs: f64, rel: f64) -> bool {
    lhs <= rhs + rel * fabs(lhs).max(fabs(rhs))
}

/// Weight form of `L >= 0` at every `k` with `k2 >= 1` and `|k| <= cap`.
pub fn l_inequality_scan(d: &WeightDiagram, s: &Settings) -> Result<Vec<LInequalityRow>, TestError> {
    let cap = resolve_cap(d, s.cap)?;
    Ok(Point::up_to_degree(cap.level)
        .filter(|k| k.k2 >= 1)
        .map(|k| {
            let j = Point::new(k.k1 + 1, k.k2 - 1);
            let lhs = d.alpha(k) * d.beta(j);
            let rhs = d.beta(k) * d.alpha(j);
            LInequalityRow { k, lhs, rhs, holds: slack_ok(lhs, rhs, s.tol.rel()) }
        })
        .collect())
}

/// `L >= 0` through the moment inequalities
/// `gamma_{m+e1+e2}^2 <= gamma_{m+2e1} gamma_{m+2e2}` for `|m| < cap`.
/// A failure at `m` is reported in weight form at `k = m + e2`.
pub fn l_positivity_test(d: &WeightDiagram, s: &Settings) -> Result<TestVerdict, TestError> {
    let cap = resolve_cap(d, s.cap)?;
    let t = moments(d, cap.level + 1, cap.level + 1)?;
    let mut min_margin = f64::INFINITY;
    for m in Point::up_to_degree(cap.level.saturating_sub(1)) {
        let g11 = t.at(m.offset(1, 1));
        let lhs = g11 * g11;
        let rhs = t.at(m.offset(2, 0)) * t.at(m.offset(0, 2));
        let scale = lhs.max(rhs);
        min_margin = min_margin.min(if scale > 0.0 { (rhs - lhs) / scale } else { 0.0 });
        if !slack_ok(lhs, rhs, s.tol.rel()) {
            let k = m.up();
            let j = m.right();
            let w = Witness::LInequality {
                k,
                lhs: d.alpha(k) * d.beta(j),
                rhs: d.beta(k) * d.alpha(j),
            };
            return Ok(finish(Some(w), cap, m.degree() + 2, min_margin, false));
        }
    }
    Ok(finish(None, cap, cap.level + 1, min_margin, false))
}

/// `L >= 0` through the level blocks: heads, tails and every `l_mid` PSD.
pub fn l_positivity_by_blocks(d: &WeightDiagram, s: &Settings) -> Result<TestVerdict, TestError> {
    let cap = resolve_cap(d, s.cap)?;
    let mut min_margin = f64::INFINITY;
    for n in 0..=cap.level {
        let pair = blocks(d, n)?;
        min_margin = min_margin.min(pair.l_head).min(pair.l_tail);
        for (i, b) in pair.l_mid.iter().enumerate() {
            let c = is_psd(b, s.tol);
            min_margin = min_margin.min(c.lambda_min);
            if !c.psd {
                let w = Witness::LBlock { n, i: i + 1, lambda_min: c.lambda_min };
                return Ok(finish(Some(w), cap, n + 1, min_margin, false));
            }
        }
    }
    Ok(finish(None, cap, cap.level + 1, min_margin, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypo_tests::Outcome;
    use crate::shift_model::{build_axy, build_ex215, build_helton_howe};

    #[test]
    fn ex215_fails_only_at_zero_one() {
        let d = build_ex215(0.5, 0.8).unwrap();
        let s = Settings::default();
        let v = l_positivity_test(&d, &s).unwrap();
        match v.witness {
            Some(Witness::LInequality { k, lhs, rhs }) => {
                assert_eq!(k, Point::new(0, 1));
                assert!((lhs - 0.16).abs() < 1e-15 && (rhs - 0.0625).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad: Vec<Point> = l_inequality_scan(&d, &s).unwrap().iter().filter(|r| !r.holds).map(|r| r.k).collect();
        assert_eq!(bad, [Point::new(0, 1)]);
        assert!(l_positivity_by_blocks(&d, &s).unwrap().failed());
    }

    #[test]
    fn family_and_helton_howe_pass() {
        let s = Settings::default();
        for d in [build_axy(0.7, 0.4, 0.5).unwrap(), build_helton_howe()] {
            assert_eq!(l_positivity_test(&d, &s).unwrap().outcome, Outcome::Pass);
            assert_eq!(l_positivity_by_blocks(&d, &s).unwrap().outcome, Outcome::Pass);
        }
    }
}
