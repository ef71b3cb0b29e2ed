use alloc::vec::Vec;

use crate::blockdecomp::blocks;
use crate::mat2::{sqrt_diff_psd, SqrtDiff};
use crate::shift_model::WeightDiagram;

use super::{finish, l_positivity_test, resolve_cap, Settings, TestError, TestVerdict, Witness};

/// `sqrt(l_mid[i]) - sqrt(r_mid[i])` for every block of level `n`.
pub fn semi_hypo_level(d: &WeightDiagram, n: usize, s: &Settings) -> Result<Vec<SqrtDiff>, TestError> {
    let pair = blocks(d, n)?;
    pair.l_mid
        .iter()
        .zip(pair.r_mid.iter())
        .map(|(l, r)| sqrt_diff_psd(l, r, s.tol).map_err(TestError::from))
        .collect()
}

/// `L >= 0` and `sqrt(L) >= sqrt(R)`, level by level. The heads of `L` are
/// squares and the matching entries of `R` vanish, so only the 2×2 blocks
/// carry information.
pub fn semi_hypo_test(d: &WeightDiagram, s: &Settings) -> Result<TestVerdict, TestError> {
    let lpos = l_positivity_test(d, s)?;
    if lpos.failed() {
        return Ok(lpos);
    }
    let cap = resolve_cap(d, s.cap)?;
    let mut min_margin = f64::INFINITY;
    for n in 0..=cap.level {
        for (i, sd) in semi_hypo_level(d, n, s)?.iter().enumerate() {
            min_margin = min_margin.min(sd.lambda_min);
            if !sd.psd {
                let w = Witness::SqrtDiff { n, i: i + 1, trace: sd.trace, det: sd.det, lambda_min: sd.lambda_min };
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
    use crate::shift_model::{build_drury_arveson, build_ex216, build_helton_howe};

    #[test]
    fn drury_arveson_fails_on_level_one() {
        let v = semi_hypo_test(&build_drury_arveson(8).unwrap(), &Settings::with_cap(6)).unwrap();
        match v.witness {
            Some(Witness::SqrtDiff { n, i, det, .. }) => {
                assert_eq!((n, i), (1, 1));
                assert!((det - (libm::sqrt(3.0) / 2.0 - 1.0)).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ex216_passes() {
        let v = semi_hypo_test(&build_ex216(1.05, 1.05).unwrap(), &Settings::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
    }

    #[test]
    fn helton_howe_difference_vanishes() {
        let d = build_helton_howe();
        let s = Settings::default();
        for n in 1..5 {
            for sd in semi_hypo_level(&d, n, &s).unwrap() {
                assert!(sd.diff.max_abs_diff(&crate::mat2::Sym2::ZERO) < 1e-15);
            }
        }
        assert_eq!(semi_hypo_test(&d, &s).unwrap().outcome, Outcome::Pass);
    }
}
