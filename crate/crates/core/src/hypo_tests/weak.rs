//! Weak hyponormality: `C(lambda) = A + lambda B + conj(lambda) B^T + |lambda|^2 D`
//! must be PSD on every level for every complex `lambda`.
//!
//! `B` has only a superdiagonal on `K(n)`, so conjugating by
//! `diag(1, e^{i theta}, e^{2 i theta}, ...)` turns `C(r e^{i theta})` into the
//! real tridiagonal `C(r)`. The angle is therefore irrelevant and the search
//! runs over radii only, unless [`LambdaGrid::reduce_angles`] is off.

use alloc::vec::Vec;

use libm::{cos, exp, fabs, log, sin, sqrt};
use nalgebra::DMatrix;

use crate::blockdecomp::{commutator_blocks, CommutatorBlocks};
use crate::dense::{min_eigenvalue, tridiag_min_eigenvalue, tridiag_norm};
use crate::mat2::{PsdTolerance, Sym2};
use crate::shift_model::{Point, WeightDiagram};

use super::{finish, resolve_cap, Settings, TestError, TestVerdict, Witness};

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
    /// Use the diagonal-unitary reduction and scan radii only.
    pub reduce_angles: bool,
    /// Golden-section steps spent refining around the worst grid radius.
    pub refine_steps: usize,
}

impl Default for LambdaGrid {
    fn default() -> Self {
        LambdaGrid::log_spaced(1e-3, 1e3, 33, 64)
    }
}

impl LambdaGrid {
    pub fn log_spaced(r_min: f64, r_max: f64, n_radii: usize, angles: usize) -> Self {
        let (l0, l1) = (log(r_min), log(r_max));
        let radii = (0..n_radii)
            .map(|i| {
                let t = if n_radii > 1 { i as f64 / (n_radii - 1) as f64 } else { 0.0 };
                exp(l0 + t * (l1 - l0))
            })
            .collect();
        LambdaGrid { radii, angles, reduce_angles: true, refine_steps: 40 }
    }
}

/// Verdict for one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPencil {
    pub n: usize,
    /// Decided by the closed-form discriminant (dimension at most 2).
    pub exact: bool,
    pub margin: f64,
    pub witness: Option<Witness>,
}

/// Smallest eigenvalue of `C(lambda)|K(n)` through the real embedding
/// `[[Re C, -Im C], [Im C, Re C]]`; no structural shortcut.
pub fn pencil_min_eigenvalue(cb: &CommutatorBlocks, re: f64, im: f64) -> f64 {
    let a = cb.a_matrix();
    let d = cb.d_matrix();
    let b = cb.b_matrix();
    let bt = b.transpose();
    let r2 = re * re + im * im;
    let x = &a + (&b + &bt) * re + &d * r2;
    let y = (&b - &bt) * im;
    let dim = cb.dim();
    let emb = DMatrix::from_fn(2 * dim, 2 * dim, |i, j| match (i < dim, j < dim) {
        (true, true) => x[(i, j)],
        (true, false) => -y[(i, j - dim)],
        (false, true) => y[(i - dim, j)],
        (false, false) => x[(i - dim, j - dim)],
    });
    min_eigenvalue(&emb)
}

fn tridiag_at(cb: &CommutatorBlocks, r: f64) -> (Vec<f64>, Vec<f64>) {
    let diag = cb.a.iter().zip(cb.d.iter()).map(|(a, d)| a + r * r * d).collect();
    let off = cb.b.iter().map(|b| r * b).collect();
    (diag, off)
}

fn radial(cb: &CommutatorBlocks, r: f64, tol: PsdTolerance) -> (f64, f64) {
    let (diag, off) = tridiag_at(cb, r);
    (tridiag_min_eigenvalue(&diag, &off), tol.band_for_norm(tridiag_norm(&diag, &off)))
}

/// Two-dimensional level: `C(lambda) >= 0` for all `lambda` iff
/// `d1 d2 u^2 + (a1 d2 + a2 d1 - b^2) u + a1 a2 >= 0` for all `u = |lambda|^2 >= 0`.
/// The diagonal `a_i + u d_i` must stay nonnegative as well, which holds iff
/// every `a_i`, `d_i` is nonnegative; that is checked first.
fn exact_level(cb: &CommutatorBlocks, tol: PsdTolerance) -> Result<LevelPencil, TestError> {
    for i in 0..2 {
        let lp = single_level(cb.n, cb.a[i], cb.d[i], tol);
        if lp.witness.is_some() {
            return Ok(lp);
        }
    }
    let (a1, a2, d1, d2, b) = (cb.a[0], cb.a[1], cb.d[0], cb.d[1], cb.b[0]);
    let m = a1 * d2 + a2 * d1 - b * b;
    let disc_pass = m >= 0.0 || m * m <= 4.0 * a1 * a2 * d1 * d2;
    // with u = t / (1 - t) the quartic times (1 - t)^2 becomes a quadratic on [0, 1]
    let (qa, qc) = (d1 * d2, a1 * a2);
    let q2 = qa - m + qc;
    let q1 = m - 2.0 * qc;
    let h = |t: f64| (q2 * t + q1) * t + qc;
    let mut t_min = if qa < qc { 1.0 } else { 0.0 };
    let mut h_min = qa.min(qc);
    if q2 > 0.0 {
        let t = -q1 / (2.0 * q2);
        if t > 0.0 && t < 1.0 && h(t) < h_min {
            t_min = t;
            h_min = h(t);
        }
    }
    let scale = (fabs(a1) + fabs(d1) + fabs(b)) * (fabs(a2) + fabs(d2) + fabs(b));
    let band = tol.band_for_norm(scale);
    let pass = h_min >= -band;
    if (disc_pass && h_min < -band) || (!disc_pass && h_min > band) {
        return Err(TestError::Inconsistent(alloc::format!(
            "level {}: discriminant and minimum disagree (m = {m:e}, h_min = {h_min:e})",
            cb.n
        )));
    }
    let witness = if pass {
        None
    } else {
        let t = t_min.min(1.0 - 1e-9);
        let u = t / (1.0 - t);
        let r = sqrt(u);
        let (lambda_min, _) = Sym2::raw(a1 + u * d1, r * b, a2 + u * d2).eigenvalues();
        Some(Witness::Pencil { n: cb.n, lambda_re: r, lambda_im: 0.0, lambda_min })
    };
    Ok(LevelPencil { n: cb.n, exact: true, margin: h_min, witness })
}

fn grid_level(cb: &CommutatorBlocks, grid: &LambdaGrid, tol: PsdTolerance) -> LevelPencil {
    let n = cb.n;
    let fail = |r: f64, theta: f64, lambda_min: f64| LevelPencil {
        n,
        exact: false,
        margin: lambda_min,
        witness: Some(Witness::Pencil { n, lambda_re: r * cos(theta), lambda_im: r * sin(theta), lambda_min }),
    };
    let mut margin = f64::INFINITY;
    if !grid.reduce_angles {
        let na = grid.angles.max(1);
        for &r in &grid.radii {
            for j in 0..na {
                let theta = core::f64::consts::TAU * j as f64 / na as f64;
                let lm = pencil_min_eigenvalue(cb, r * cos(theta), r * sin(theta));
                let (_, band) = radial(cb, r, tol);
                margin = margin.min(lm);
                if lm < -band {
                    return fail(r, theta, lm);
                }
            }
        }
        return LevelPencil { n, exact: false, margin, witness: None };
    }
    let mut worst = (f64::INFINITY, 0usize);
    for (idx, &r) in grid.radii.iter().enumerate() {
        let (lm, band) = radial(cb, r, tol);
        margin = margin.min(lm);
        if lm < -band {
            return fail(r, 0.0, lm);
        }
        let normalized = lm / (1.0 + r * r);
        if normalized < worst.0 {
            worst = (normalized, idx);
        }
    }
    if grid.radii.len() >= 2 && grid.refine_steps > 0 {
        let i = worst.1;
        let lo = log(grid.radii[i.saturating_sub(1)]);
        let hi = log(grid.radii[(i + 1).min(grid.radii.len() - 1)]);
        let f = |s: f64| {
            let r = exp(s);
            let (lm, band) = radial(cb, r, tol);
            (lm / (1.0 + r * r), lm, band, r)
        };
        let g = 0.5 * (sqrt(5.0) - 1.0);
        let (mut x0, mut x1) = (lo, hi);
        let mut c = x1 - g * (x1 - x0);
        let mut e = x0 + g * (x1 - x0);
        let (mut fc, mut fe) = (f(c), f(e));
        for _ in 0..grid.refine_steps {
            for probe in [fc, fe] {
                margin = margin.min(probe.1);
                if probe.1 < -probe.2 {
                    return fail(probe.3, 0.0, probe.1);
                }
            }
            if fc.0 < fe.0 {
                x1 = e;
                e = c;
                fe = fc;
                c = x1 - g * (x1 - x0);
                fc = f(c);
            } else {
                x0 = c;
                c = e;
                fc = fe;
                e = x0 + g * (x1 - x0);
                fe = f(e);
            }
        }
    }
    LevelPencil { n, exact: false, margin, witness: None }
}

/// One-dimensional chain: `a + |lambda|^2 d >= 0` for every `lambda`.
fn single_level(n: usize, a: f64, d: f64, tol: PsdTolerance) -> LevelPencil {
    let band = tol.band_for_norm(fabs(a) + fabs(d));
    let witness = if a < -band {
        Some(Witness::Pencil { n, lambda_re: 0.0, lambda_im: 0.0, lambda_min: a })
    } else if d < -band {
        let r = sqrt((a.max(0.0) + 1.0) / -d);
        Some(Witness::Pencil { n, lambda_re: r, lambda_im: 0.0, lambda_min: a + r * r * d })
    } else {
        None
    };
    LevelPencil { n, exact: true, margin: a.min(d), witness }
}

/// One level of the weak hyponormality test.
///
/// The reduced pencil is tridiagonal, so it splits into independent chains
/// wherever a coupling `b` vanishes. Chains of length one or two are decided
/// exactly; longer chains go to the radial search on `grid`.
pub fn weak_hypo_level(cb: &CommutatorBlocks, grid: &LambdaGrid, tol: PsdTolerance) -> Result<LevelPencil, TestError> {
    let dim = cb.dim();
    let mut exact = true;
    let mut margin = f64::INFINITY;
    let mut start = 0;
    for end in 1..=dim {
        if end < dim && cb.b[end - 1] != 0.0 {
            continue;
        }
        let lp = match end - start {
            1 => single_level(cb.n, cb.a[start], cb.d[start], tol),
            len => {
                let part = CommutatorBlocks {
                    n: cb.n,
                    a: cb.a[start..end].to_vec(),
                    d: cb.d[start..end].to_vec(),
                    b: cb.b[start..end - 1].to_vec(),
                };
                if len == 2 {
                    exact_level(&part, tol)?
                } else {
                    grid_level(&part, grid, tol)
                }
            }
        };
        exact &= lp.exact;
        margin = margin.min(lp.margin);
        if lp.witness.is_some() {
            return Ok(LevelPencil { n: cb.n, exact, margin, witness: lp.witness });
        }
        start = end;
    }
    Ok(LevelPencil { n: cb.n, exact, margin, witness: None })
}

/// `T1`, `T2` hyponormal and every `T1 + lambda T2` hyponormal, checked on
/// levels `0..=cap`. Levels of dimension above 2 are searched on `grid`,
/// so a clean run there is reported as [`Outcome::PassByGrid`](super::Outcome).
pub fn weak_hypo_test(d: &WeightDiagram, s: &Settings, grid: &LambdaGrid) -> Result<TestVerdict, TestError> {
    let cap = resolve_cap(d, s.cap)?;
    let levels: Vec<CommutatorBlocks> =
        (0..=cap.level).map(|n| commutator_blocks(d, n)).collect::<Result<_, _>>()?;
    let mut min_margin = f64::INFINITY;
    for cb in &levels {
        let pts: Vec<Point> = Point::level(cb.n).collect();
        for (j, k) in pts.iter().enumerate() {
            for (op, value, w_prev) in [
                (1u8, cb.a[j], k.left().map_or(0.0, |p| d.alpha(p))),
                (2u8, cb.d[j], k.down().map_or(0.0, |p| d.beta(p))),
            ] {
                let w = if op == 1 { d.alpha(*k) } else { d.beta(*k) };
                let band = s.tol.band_for_norm(w * w + w_prev * w_prev);
                min_margin = min_margin.min(value);
                if value < -band {
                    let wit = Witness::SelfCommutator { op, k: *k, value };
                    return Ok(finish(Some(wit), cap, cb.n + 1, min_margin, false));
                }
            }
        }
    }
    let mut by_grid = false;
    for cb in &levels {
        let lp = weak_hypo_level(cb, grid, s.tol)?;
        by_grid |= !lp.exact;
        min_margin = min_margin.min(lp.margin);
        if lp.witness.is_some() {
            return Ok(finish(lp.witness, cap, cb.n + 1, min_margin, false));
        }
    }
    Ok(finish(None, cap, cap.level + 1, min_margin, by_grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypo_tests::Outcome;
    use crate::shift_model::{build_axy, build_helton_howe};

    fn y_weak(a: f64, x: f64) -> f64 {
        x * sqrt(1.0 - x * x) / fabs(2.0 * a * a - x * x)
    }

    #[test]
    fn helton_howe_passes_exactly() {
        // no coupling anywhere: every level splits into one-dimensional chains
        let v = weak_hypo_test(&build_helton_howe(), &Settings::default(), &LambdaGrid::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
    }

    #[test]
    fn long_chains_fall_back_to_the_grid() {
        let e = crate::shift_model::EmbeddingSpec::scaled(alloc::vec![0.5, 0.8, 1.0], 1.0).unwrap();
        let d = crate::shift_model::build_embedding(&e).unwrap();
        let v = weak_hypo_test(&d, &Settings::default(), &LambdaGrid::default()).unwrap();
        assert_eq!(v.outcome, Outcome::PassByGrid);
    }

    #[test]
    fn family_inside_f_branch_passes() {
        // y <= sqrt((1 - x^2) / (1 - 2 a^2))
        // couplings vanish away from the axes, so every chain is short
        let d = build_axy(0.5, 0.6, 0.95).unwrap();
        let v = weak_hypo_test(&d, &Settings::default(), &LambdaGrid::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
    }

    #[test]
    fn family_beyond_bound_fails_with_witness() {
        let (a, x, y) = (0.3_f64, 0.95_f64, 0.8_f64);
        assert!(y > y_weak(a, x) && y * y > (1.0 - x * x) / (1.0 - 2.0 * a * a));
        let d = build_axy(a, x, y).unwrap();
        let v = weak_hypo_test(&d, &Settings::default(), &LambdaGrid::default()).unwrap();
        match v.witness {
            Some(Witness::Pencil { n: 1, lambda_re, lambda_im, lambda_min }) => {
                assert!(lambda_min < 0.0);
                let cb = commutator_blocks(&d, 1).unwrap();
                assert!(pencil_min_eigenvalue(&cb, lambda_re, lambda_im) < 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn angle_is_irrelevant() {
        let d = build_axy(0.3, 0.8, 0.97).unwrap();
        for n in 1..5 {
            let cb = commutator_blocks(&d, n).unwrap();
            for r in [0.1, 0.7, 2.0] {
                let base = pencil_min_eigenvalue(&cb, r, 0.0);
                for j in 1..8 {
                    let th = j as f64 * 0.7;
                    let v = pencil_min_eigenvalue(&cb, r * cos(th), r * sin(th));
                    assert!(fabs(v - base) < 1e-12, "n = {n}, r = {r}");
                }
                let (diag, off) = tridiag_at(&cb, r);
                assert!(fabs(tridiag_min_eigenvalue(&diag, &off) - base) < 1e-12);
            }
        }
    }

    #[test]
    fn single_operator_failure_first() {
        // ex216 with a > 1 makes [T1*, T1] negative at (1,0)
        let d = crate::shift_model::build_ex216(1.05, 1.05).unwrap();
        let v = weak_hypo_test(&d, &Settings::default(), &LambdaGrid::default()).unwrap();
        assert!(matches!(v.witness, Some(Witness::SelfCommutator { op: 1, k: Point { k1: 1, k2: 0 }, .. })));
    }
}
