//! Closed-form region predicates for the family `W(a,x,y)` and the six-way
//! classification of the open unit cube.

use alloc::format;
use alloc::string::String;
use core::fmt;

use libm::{fabs, sqrt};

use crate::blockdecomp::blocks;
use crate::hypo_tests::{
    moment_matrix_test, semi_hypo_test, six_point_test, weak_hypo_test, LambdaGrid, Settings, TestError,
};
use crate::mat2::{sqrt_diff_psd, PsdTolerance};
use crate::shift_model::build_axy;

/// Margins with absolute value below this are on a region boundary.
pub const BOUNDARY_BAND: f64 = 1e-9;

/// Moment order used as the subnormality proxy.
pub const SUBNORMAL_ORDER: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub enum RegionError {
    OutOfClass(String),
    FormulaMismatch { a: f64, x: f64, y: f64, closed_form: bool, direct: bool, lambda_min: f64 },
    InconsistentLattice { a: f64, x: f64, y: f64, detail: String },
    Test(TestError),
}

impl fmt::Display for RegionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionError::OutOfClass(m) => write!(f, "point outside the class: {m}"),
            RegionError::FormulaMismatch { a, x, y, closed_form, direct, lambda_min } => write!(
                f,
                "semi-hyponormal closed form ({closed_form}) disagrees with the direct block route ({direct}, lambda_min = {lambda_min:e}) at ({a}, {x}, {y})"
            ),
            RegionError::InconsistentLattice { a, x, y, detail } => {
                write!(f, "implication lattice violated at ({a}, {x}, {y}): {detail}")
            }
            RegionError::Test(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for RegionError {}

impl From<TestError> for RegionError {
    fn from(e: TestError) -> Self {
        RegionError::Test(e)
    }
}

/// Parameter triple with `0 < a, x, y < 1` and `ay < x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxyPoint {
    a: f64,
    x: f64,
    y: f64,
}

impl AxyPoint {
    pub fn new(a: f64, x: f64, y: f64) -> Result<Self, RegionError> {
        for (name, v) in [("a", a), ("x", x), ("y", y)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(RegionError::OutOfClass(format!("{name} = {v} is not in (0,1)")));
            }
        }
        if a * y >= x {
            return Err(RegionError::OutOfClass(format!("ay >= x ({} >= {x})", a * y)));
        }
        Ok(AxyPoint { a, x, y })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Truth value with a signed slack (positive inside the region).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Predicate {
    pub holds: bool,
    pub margin: f64,
}

/// Hyponormality bound on `y`: `x sqrt((1 - x^2) / (x^2 - 2a^2 x^2 + a^4))`.
pub fn y_hyponormal(a: f64, x: f64) -> f64 {
    let (a2, x2) = (a * a, x * x);
    x * sqrt((1.0 - x2) / (x2 - 2.0 * a2 * x2 + a2 * a2))
}

/// Subnormality bound on `y`: `sqrt((1 - x^2) / (1 - a^2))`.
pub fn y_subnormal(a: f64, x: f64) -> f64 {
    sqrt((1.0 - x * x) / (1.0 - a * a))
}

/// Weak hyponormality bound on `y` (`+inf` when it holds for every `y`).
pub fn y_weakly_hyponormal(a: f64, x: f64) -> f64 {
    let (a2, x2) = (a * a, x * x);
    if 2.0 * a2 >= 1.0 {
        return f64::INFINITY;
    }
    let y_f = sqrt((1.0 - x2) / (1.0 - 2.0 * a2));
    let q = x2 * (1.0 - x2);
    let p = q + (2.0 * a2 - x2) * (2.0 * a2 - x2);
    y_f.max(sqrt(q / p))
}

pub fn is_hyponormal_cf(p: &AxyPoint) -> Predicate {
    let bound = y_hyponormal(p.a, p.x);
    let holds = p.y <= bound;
    // the same determinant condition written as a two-sided bound on a^2
    let (x2, y) = (p.x * p.x, p.y);
    let w = p.x * sqrt((1.0 - x2) * (1.0 - y * y));
    let a2y = p.a * p.a * y;
    let alt = x2 * y - w <= a2y && a2y <= x2 * y + w;
    debug_assert!(fabs(bound - p.y) < BOUNDARY_BAND || alt == holds, "hyponormal forms disagree at {p:?}");
    Predicate { holds, margin: bound - p.y }
}

pub fn is_subnormal_cf(p: &AxyPoint) -> Predicate {
    let bound = y_subnormal(p.a, p.x);
    let holds = p.y <= bound;
    let alt = (p.x * p.x + p.y * p.y - 1.0) / (p.y * p.y) <= p.a * p.a;
    debug_assert!(fabs(bound - p.y) < BOUNDARY_BAND || alt == holds, "subnormal forms disagree at {p:?}");
    debug_assert!(p.x * p.x + p.y * p.y >= 1.0 || holds);
    Predicate { holds, margin: bound - p.y }
}

/// The polynomial of the first semi-hyponormality clause, with the quartic
/// term `-y^4` (`quartic = true`) or `-y^3`.
fn clause1_rhs(x: f64, y: f64, quartic: bool) -> f64 {
    let (x2, y2) = (x * x, y * y);
    let last = if quartic { y2 * y2 } else { y2 * y };
    let poly = 4.0 * x2 - x2 * x2 + 4.0 * x2 * x * y + 4.0 * y2 - 6.0 * x2 * y2 + 4.0 * x * y2 * y - last;
    x * poly / (4.0 * y * (x2 + y2))
}

fn clause2_slack(a: f64, x: f64, y: f64) -> f64 {
    let a2y = a * a * y;
    let lhs = sqrt((x * x + y * y) * (x + a2y) / x);
    let d = x - y;
    let rhs = 0.5 * (x + y) * (x + y) + sqrt((x + a2y) * d * d * d * d / (4.0 * (x - a2y)));
    lhs - rhs
}

/// Closed-form semi-hyponormality with the text's `-y^3` term in the first clause.
pub fn e3_as_printed(p: &AxyPoint) -> bool {
    p.a * p.a <= clause1_rhs(p.x, p.y, false) && clause2_slack(p.a, p.x, p.y) >= 0.0
}

/// Semi-hyponormality through `sqrt(L|K(1)) - sqrt(R|K(1)) >= 0`: smallest
/// eigenvalue of the difference.
pub fn sh_direct_lambda_min(p: &AxyPoint, tol: PsdTolerance) -> Result<f64, RegionError> {
    let d = build_axy(p.a, p.x, p.y).map_err(|e| RegionError::OutOfClass(format!("{e}")))?;
    let pair = blocks(&d, 1).map_err(TestError::from)?;
    let sd = sqrt_diff_psd(&pair.l_mid[0], &pair.r_mid[0], tol).map_err(TestError::from)?;
    Ok(sd.lambda_min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiHypoCf {
    pub holds: bool,
    /// `min` of the two clause slacks.
    pub margin: f64,
    pub clause1_margin: f64,
    pub clause2_margin: f64,
    /// Smallest eigenvalue of the level-one difference of square roots.
    pub direct_lambda_min: f64,
}

/// Closed form (first clause read with `-y^4`) audited against the direct
/// level-one square-root difference.
pub fn is_semihypo_cf(p: &AxyPoint, tol: PsdTolerance) -> Result<SemiHypoCf, RegionError> {
    let clause1_margin = clause1_rhs(p.x, p.y, true) - p.a * p.a;
    let clause2_margin = clause2_slack(p.a, p.x, p.y);
    let holds = clause1_margin >= 0.0 && clause2_margin >= 0.0;
    let margin = clause1_margin.min(clause2_margin);
    let direct_lambda_min = sh_direct_lambda_min(p, tol)?;
    let direct = direct_lambda_min >= -tol.band_for_norm(2.0);
    let near = fabs(direct_lambda_min) < BOUNDARY_BAND || fabs(margin) < BOUNDARY_BAND;
    if holds != direct && !near {
        return Err(RegionError::FormulaMismatch {
            a: p.a,
            x: p.x,
            y: p.y,
            closed_form: holds,
            direct,
            lambda_min: direct_lambda_min,
        });
    }
    Ok(SemiHypoCf { holds, margin, clause1_margin, clause2_margin, direct_lambda_min })
}

/// `a^2 >= 1/2`, or `f = (1 - x^2 - y^2 + 2a^2 y^2) x^2 >= 0`, or
/// `P y^2 <= Q` with `P = x^2 (1 - x^2) + (2a^2 - x^2)^2`, `Q = x^2 (1 - x^2)`.
pub fn is_weakhypo_cf(p: &AxyPoint) -> Predicate {
    let (a2, x2, y2) = (p.a * p.a, p.x * p.x, p.y * p.y);
    if 2.0 * a2 >= 1.0 {
        return Predicate { holds: true, margin: 1.0 - x2 - y2 + 2.0 * a2 * y2 };
    }
    let f = (1.0 - x2 - y2 + 2.0 * a2 * y2) * x2;
    let q = x2 * (1.0 - x2);
    let pp = q + (2.0 * a2 - x2) * (2.0 * a2 - x2);
    let holds = f >= 0.0 || pp * y2 - q <= 0.0;
    Predicate { holds, margin: y_weakly_hyponormal(p.a, p.x) - p.y }
}

/// Minimum over `t > 0` of the biquadratic `A t^4 + m t^2 + C`, scaled by
/// `(1 + t^2)^2`, for the level-one pencil of the family. Nonnegative iff
/// weakly hyponormal (numerical cross-check of [`is_weakhypo_cf`]).
pub fn weakhypo_biquadratic_min(p: &AxyPoint) -> f64 {
    let (a2, x2, y2) = (p.a * p.a, p.x * p.x, p.y * p.y);
    let (a1, a2_, d1, d2) = (a2, 1.0 - x2, 1.0 - y2, a2 * y2 / x2);
    let b = a2 * p.y / p.x - p.x * p.y;
    let m = a1 * d2 + a2_ * d1 - b * b;
    let mut best = d1 * d2;
    for i in 0..4000 {
        let s = i as f64 / 4000.0;
        let u = s / (1.0 - s);
        best = best.min((d1 * d2 * u * u + m * u + a1 * a2_) * (1.0 - s) * (1.0 - s));
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionLabel {
    Subnormal,
    HypoNotSub,
    ShAndWhNotH,
    ShNotWh,
    WhNotSh,
    Neither,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 6] = [
        RegionLabel::Subnormal,
        RegionLabel::HypoNotSub,
        RegionLabel::ShAndWhNotH,
        RegionLabel::ShNotWh,
        RegionLabel::WhNotSh,
        RegionLabel::Neither,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::Subnormal => "SUBNORMAL",
            RegionLabel::HypoNotSub => "HYPO_NOT_SUB",
            RegionLabel::ShAndWhNotH => "SH_AND_WH_NOT_H",
            RegionLabel::ShNotWh => "SH_NOT_WH",
            RegionLabel::WhNotSh => "WH_NOT_SH",
            RegionLabel::Neither => "NEITHER",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        RegionLabel::ALL.into_iter().find(|l| l.as_str() == s)
    }

    pub fn from_predicates(sub: bool, hypo: bool, sh: bool, wh: bool) -> Self {
        match (sub, hypo, sh, wh) {
            (true, _, _, _) => RegionLabel::Subnormal,
            (false, true, _, _) => RegionLabel::HypoNotSub,
            (false, false, true, true) => RegionLabel::ShAndWhNotH,
            (false, false, true, false) => RegionLabel::ShNotWh,
            (false, false, false, true) => RegionLabel::WhNotSh,
            (false, false, false, false) => RegionLabel::Neither,
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Direct,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Direct => "direct",
        }
    }
}

/// Signed margins, one per predicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margins {
    pub sub: f64,
    pub hypo: f64,
    pub sh: f64,
    pub wh: f64,
}

impl Margins {
    fn min_abs(&self) -> f64 {
        fabs(self.sub).min(fabs(self.hypo)).min(fabs(self.sh)).min(fabs(self.wh))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub point: AxyPoint,
    pub label: RegionLabel,
    pub subnormal: bool,
    pub hyponormal: bool,
    pub semi_hyponormal: bool,
    pub weakly_hyponormal: bool,
    pub margins: Margins,
    /// Some closed-form margin lies within [`BOUNDARY_BAND`] of zero.
    pub boundary: bool,
    pub method: Method,
}

fn closed_form_parts(p: &AxyPoint, tol: PsdTolerance) -> Result<([bool; 4], Margins), RegionError> {
    let sub = is_subnormal_cf(p);
    let hypo = is_hyponormal_cf(p);
    let sh = is_semihypo_cf(p, tol)?;
    let wh = is_weakhypo_cf(p);
    Ok((
        [sub.holds, hypo.holds, sh.holds, wh.holds],
        Margins { sub: sub.margin, hypo: hypo.margin, sh: sh.margin, wh: wh.margin },
    ))
}

/// Evaluates the four predicates and maps them to a label. The direct method
/// runs the block tests on the built diagram; its margins are the smallest
/// eigenvalues met by each test, and the boundary flag always comes from the
/// closed-form margins (the geometric distance to the region curves).
pub fn classify(p: &AxyPoint, method: Method, tol: PsdTolerance) -> Result<Classification, RegionError> {
    let (cf, cf_margins) = closed_form_parts(p, tol)?;
    let boundary = cf_margins.min_abs() < BOUNDARY_BAND;
    let (preds, margins) = match method {
        Method::ClosedForm => (cf, cf_margins),
        Method::Direct => {
            let d = build_axy(p.a, p.x, p.y).map_err(|e| RegionError::OutOfClass(format!("{e}")))?;
            let s = Settings { cap: None, tol };
            let sub = moment_matrix_test(&d, SUBNORMAL_ORDER, &s)?.verdict;
            let hypo = six_point_test(&d, &s)?;
            let sh = semi_hypo_test(&d, &s)?;
            let wh = weak_hypo_test(&d, &s, &LambdaGrid::default())?;
            (
                [sub.passed(), hypo.passed(), sh.passed(), wh.passed()],
                Margins { sub: sub.min_margin, hypo: hypo.min_margin, sh: sh.min_margin, wh: wh.min_margin },
            )
        }
    };
    let [sub, hypo, sh, wh] = preds;
    if !boundary {
        if sub && !hypo {
            return Err(RegionError::InconsistentLattice {
                a: p.a,
                x: p.x,
                y: p.y,
                detail: String::from("subnormal but not hyponormal"),
            });
        }
        if hypo && !(sh && wh) {
            return Err(RegionError::InconsistentLattice {
                a: p.a,
                x: p.x,
                y: p.y,
                detail: format!("hyponormal but semi-hyponormal = {sh}, weakly hyponormal = {wh}"),
            });
        }
    }
    Ok(Classification {
        point: *p,
        label: RegionLabel::from_predicates(sub, hypo, sh, wh),
        subnormal: sub,
        hyponormal: hypo,
        semi_hyponormal: sh,
        weakly_hyponormal: wh,
        margins,
        boundary,
        method,
    })
}

/// Smallest `y` in `[y_lo, y_hi]` where the semi-hyponormal closed form
/// switches value, found by scanning `steps` cells and bisecting.
pub fn semihypo_switch_y(a: f64, x: f64, y_lo: f64, y_hi: f64, steps: usize) -> Option<f64> {
    let eval = |y: f64| -> Option<bool> {
        AxyPoint::new(a, x, y).ok()?;
        Some(clause1_rhs(x, y, true) - a * a >= 0.0 && clause2_slack(a, x, y) >= 0.0)
    };
    let mut prev_y = y_lo;
    let mut prev = eval(y_lo)?;
    for i in 1..=steps {
        let y = y_lo + (y_hi - y_lo) * i as f64 / steps as f64;
        let cur = eval(y)?;
        if cur != prev {
            let (mut lo, mut hi) = (prev_y, y);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if eval(mid)? == prev {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = cur;
        prev_y = y;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: f64, x: f64, y: f64) -> AxyPoint {
        AxyPoint::new(a, x, y).unwrap()
    }

    #[test]
    fn class_constraint() {
        assert!(matches!(AxyPoint::new(0.9, 0.5, 0.9), Err(RegionError::OutOfClass(_))));
        assert!(AxyPoint::new(0.5, 1.0, 0.5).is_err());
    }

    #[test]
    fn inside_disc_is_subnormal() {
        let c = classify(&pt(0.5, 0.5, 0.6), Method::ClosedForm, PsdTolerance::default()).unwrap();
        assert_eq!(c.label, RegionLabel::Subnormal);
        assert!(is_hyponormal_cf(&pt(0.5, 0.5, 0.6)).holds);
    }

    #[test]
    fn subnormal_arithmetic() {
        // (x^2 + y^2 - 1) / y^2 = 0.2927 > a^2 = 0.25
        assert!(!is_subnormal_cf(&pt(0.5, 0.6, 0.95)).holds);
        assert!(!is_hyponormal_cf(&pt(0.5, 0.55, 0.9999)).holds);
    }

    #[test]
    fn boundary_margins_vanish() {
        let (a, x) = (0.5, 0.6);
        let y = y_subnormal(a, x);
        assert!(fabs(is_subnormal_cf(&pt(a, x, y)).margin) < 1e-15);
        let y = y_hyponormal(a, x);
        assert!(fabs(is_hyponormal_cf(&pt(a, x, y)).margin) < 1e-15);
    }

    #[test]
    fn weak_hypo_large_a_always() {
        for (x, y) in [(0.9, 0.99), (0.85, 0.5), (0.99, 0.99)] {
            assert!(is_weakhypo_cf(&pt(0.8, x, y)).holds);
        }
    }

    #[test]
    fn weak_hypo_singular_ratio() {
        // x^2 = 2a^2 makes the bound sqrt(Q/P) equal to 1
        let a = 0.5_f64;
        let x = a * libm::sqrt(2.0);
        for y in [0.3, 0.9, 0.999] {
            assert!(is_weakhypo_cf(&pt(a, x, y)).holds);
        }
    }

    #[test]
    fn weak_hypo_matches_biquadratic() {
        for &(a, x, y) in &[(0.3, 0.95, 0.8), (0.2, 0.9, 0.95), (0.5, 0.6, 0.97), (0.1, 0.5, 0.99)] {
            let p = pt(a, x, y);
            let cf = is_weakhypo_cf(&p);
            let bq = weakhypo_biquadratic_min(&p);
            assert_eq!(cf.holds, bq >= -1e-12, "{a} {x} {y}: {bq}");
        }
    }

    #[test]
    fn printed_and_corrected_agree_in_window() {
        let p = pt(0.5, 0.55, 0.97);
        assert_eq!(e3_as_printed(&p), is_semihypo_cf(&p, PsdTolerance::default()).unwrap().holds);
    }

    #[test]
    fn label_lattice_mapping() {
        assert_eq!(RegionLabel::from_predicates(false, false, true, false), RegionLabel::ShNotWh);
        assert_eq!(RegionLabel::from_predicates(false, false, false, false), RegionLabel::Neither);
        for l in RegionLabel::ALL {
            assert_eq!(RegionLabel::parse(l.as_str()), Some(l));
        }
    }
}
