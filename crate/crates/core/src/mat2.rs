//! Closed-form arithmetic on real symmetric 2×2 matrices.
//!
//! Every local block of the pair operators is a symmetric 2×2 matrix, so the
//! positivity and square-root questions reduce to trace/determinant algebra.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use libm::{fabs, fma, hypot, sqrt};

/// Real symmetric matrix `[[a11, a12], [a12, a22]]` with finite entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    a11: f64,
    a12: f64,
    a22: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mat2Error {
    NonFinite,
    NotPsd { lambda_min: f64, band: f64 },
}

impl fmt::Display for Mat2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mat2Error::NonFinite => write!(f, "matrix has a non-finite entry"),
            Mat2Error::NotPsd { lambda_min, band } => write!(
                f,
                "matrix is not positive semidefinite (lambda_min = {lambda_min:e}, tolerance band = {band:e})"
            ),
        }
    }
}

impl core::error::Error for Mat2Error {}

/// `a*d - b*c` with one rounding error (Kahan's algorithm).
pub(crate) fn diff_of_products(a: f64, d: f64, b: f64, c: f64) -> f64 {
    let w = b * c;
    let e = fma(-b, c, w);
    let f = fma(a, d, -w);
    f + e
}

impl Sym2 {
    pub const ZERO: Sym2 = Sym2 { a11: 0.0, a12: 0.0, a22: 0.0 };
    pub const IDENTITY: Sym2 = Sym2 { a11: 1.0, a12: 0.0, a22: 1.0 };

    pub fn new(a11: f64, a12: f64, a22: f64) -> Result<Self, Mat2Error> {
        if a11.is_finite() && a12.is_finite() && a22.is_finite() {
            Ok(Sym2 { a11, a12, a22 })
        } else {
            Err(Mat2Error::NonFinite)
        }
    }

    /// Crate-internal constructor for entries already known to be finite.
    pub(crate) fn raw(a11: f64, a12: f64, a22: f64) -> Self {
        debug_assert!(a11.is_finite() && a12.is_finite() && a22.is_finite());
        Sym2 { a11, a12, a22 }
    }

    pub fn diag(a11: f64, a22: f64) -> Result<Self, Mat2Error> {
        Self::new(a11, 0.0, a22)
    }

    pub fn a11(&self) -> f64 {
        self.a11
    }

    pub fn a12(&self) -> f64 {
        self.a12
    }

    pub fn a22(&self) -> f64 {
        self.a22
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        diff_of_products(self.a11, self.a22, self.a12, self.a12)
    }

    pub fn frobenius(&self) -> f64 {
        sqrt(self.a11 * self.a11 + 2.0 * self.a12 * self.a12 + self.a22 * self.a22)
    }

    /// Eigenvalues `(lambda_min, lambda_max)`.
    ///
    /// The eigenvalue of larger magnitude comes from `(tr ± disc) / 2` without
    /// cancellation; the other one is recovered as `det` divided by it.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let tr = self.trace();
        let disc = hypot(self.a11 - self.a22, 2.0 * self.a12);
        if tr >= 0.0 {
            let hi = 0.5 * (tr + disc);
            let lo = if hi > 0.0 { self.det() / hi } else { 0.0 };
            (lo, hi)
        } else {
            let lo = 0.5 * (tr - disc);
            (lo, self.det() / lo)
        }
    }

    /// `self * self` (the square of a symmetric matrix is symmetric).
    pub fn square(&self) -> Sym2 {
        Sym2 {
            a11: self.a11 * self.a11 + self.a12 * self.a12,
            a12: self.a12 * (self.a11 + self.a22),
            a22: self.a12 * self.a12 + self.a22 * self.a22,
        }
    }

    pub fn scale(&self, s: f64) -> Sym2 {
        Sym2 { a11: s * self.a11, a12: s * self.a12, a22: s * self.a22 }
    }

    pub fn max_abs_diff(&self, other: &Sym2) -> f64 {
        fabs(self.a11 - other.a11)
            .max(fabs(self.a12 - other.a12))
            .max(fabs(self.a22 - other.a22))
    }

    pub fn is_zero(&self) -> bool {
        self.a11 == 0.0 && self.a12 == 0.0 && self.a22 == 0.0
    }
}

impl Add for Sym2 {
    type Output = Sym2;
    fn add(self, o: Sym2) -> Sym2 {
        Sym2 { a11: self.a11 + o.a11, a12: self.a12 + o.a12, a22: self.a22 + o.a22 }
    }
}

impl Sub for Sym2 {
    type Output = Sym2;
    fn sub(self, o: Sym2) -> Sym2 {
        Sym2 { a11: self.a11 - o.a11, a12: self.a12 - o.a12, a22: self.a22 - o.a22 }
    }
}

impl Neg for Sym2 {
    type Output = Sym2;
    fn neg(self) -> Sym2 {
        Sym2 { a11: -self.a11, a12: -self.a12, a22: -self.a22 }
    }
}

impl Mul<f64> for Sym2 {
    type Output = Sym2;
    fn mul(self, s: f64) -> Sym2 {
        self.scale(s)
    }
}

/// Relative tolerance for positivity decisions.
///
/// A matrix `M` counts as PSD when `lambda_min(M) >= -rel * (1 + ||M||_F)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdTolerance {
    rel: f64,
}

impl Default for PsdTolerance {
    fn default() -> Self {
        PsdTolerance { rel: 1e-10 }
    }
}

impl PsdTolerance {
    pub fn new(rel: f64) -> Option<Self> {
        (rel.is_finite() && rel >= 0.0).then_some(PsdTolerance { rel })
    }

    pub fn rel(&self) -> f64 {
        self.rel
    }

    /// Absolute band for a matrix of Frobenius norm `norm`.
    pub fn band_for_norm(&self, norm: f64) -> f64 {
        self.rel * (1.0 + norm)
    }

    pub fn band(&self, m: &Sym2) -> f64 {
        self.band_for_norm(m.frobenius())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    pub lambda_min: f64,
    pub band: f64,
}

pub fn is_psd(m: &Sym2, tol: PsdTolerance) -> PsdCheck {
    let (lambda_min, _) = m.eigenvalues();
    let band = tol.band(m);
    PsdCheck { psd: lambda_min >= -band, lambda_min, band }
}

/// Principal square root via `sqrt(M) = (M + s I) / sqrt(tr M + 2 s)`, `s = sqrt(det M)`.
pub fn sqrt_psd(m: &Sym2, tol: PsdTolerance) -> Result<Sym2, Mat2Error> {
    let check = is_psd(m, tol);
    if !check.psd {
        return Err(Mat2Error::NotPsd { lambda_min: check.lambda_min, band: check.band });
    }
    Ok(sqrt_unchecked(m))
}

/// Below this multiple of `eps * ||M||_F` the smallest eigenvalue is rounding
/// noise, and `sqrt(det)` would blow it up to about `sqrt(eps)`.
const SINGULAR_ULPS: f64 = 32.0;

/// Square root formula without the positivity gate. A determinant that is
/// negative inside the band, or zero to working precision, takes the
/// singular branch `sqrt(M) = M / sqrt(tr M)`.
pub(crate) fn sqrt_unchecked(m: &Sym2) -> Sym2 {
    if m.is_zero() {
        return Sym2::ZERO;
    }
    let (lo, _) = m.eigenvalues();
    let singular = lo <= SINGULAR_ULPS * f64::EPSILON * m.frobenius();
    let s = if singular { 0.0 } else { sqrt(m.det()) };
    let t2 = m.trace() + 2.0 * s;
    if t2 <= 0.0 {
        return Sym2::ZERO;
    }
    let t = sqrt(t2);
    Sym2 { a11: (m.a11 + s) / t, a12: m.a12 / t, a22: (m.a22 + s) / t }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtDiff {
    pub diff: Sym2,
    pub psd: bool,
    pub trace: f64,
    pub det: f64,
    pub lambda_min: f64,
}

/// Whether `sqrt(l) - sqrt(r)` is PSD, together with its trace and determinant.
pub fn sqrt_diff_psd(l: &Sym2, r: &Sym2, tol: PsdTolerance) -> Result<SqrtDiff, Mat2Error> {
    let sl = sqrt_psd(l, tol)?;
    let sr = sqrt_psd(r, tol)?;
    let diff = sl - sr;
    let check = is_psd(&diff, tol);
    Ok(SqrtDiff {
        diff,
        psd: check.psd,
        trace: diff.trace(),
        det: diff.det(),
        lambda_min: check.lambda_min,
    })
}

/// Returns the weight `w` when `m = [[a11, a11 w], [a11 w, a11 w^2]]` with `a11 > 0`,
/// i.e. when `m` is rank one up to the tolerance band.
pub fn flat_extension_check(m: &Sym2, tol: PsdTolerance) -> Option<f64> {
    if m.a11 <= 0.0 {
        return None;
    }
    let (lo, _) = m.eigenvalues();
    (fabs(lo) <= tol.band(m)).then(|| m.a12 / m.a11)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(a: f64, b: f64, c: f64) -> Sym2 {
        Sym2::new(a, b, c).unwrap()
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(Sym2::new(f64::NAN, 0.0, 1.0), Err(Mat2Error::NonFinite));
        assert_eq!(Sym2::new(1.0, f64::INFINITY, 1.0), Err(Mat2Error::NonFinite));
    }

    #[test]
    fn zero_is_psd_with_zero_root() {
        let tol = PsdTolerance::default();
        assert!(is_psd(&Sym2::ZERO, tol).psd);
        assert_eq!(sqrt_psd(&Sym2::ZERO, tol).unwrap(), Sym2::ZERO);
    }

    #[test]
    fn rank_one_root() {
        let tol = PsdTolerance::default();
        let m = sym(1.0, 1.0, 1.0);
        let s = sqrt_psd(&m, tol).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!(s.max_abs_diff(&sym(h, h, h)) < 1e-15);
    }

    #[test]
    fn diagonal_root() {
        let s = sqrt_psd(&sym(4.0, 0.0, 9.0), PsdTolerance::default()).unwrap();
        assert!(s.max_abs_diff(&sym(2.0, 0.0, 3.0)) < 1e-15);
    }

    #[test]
    fn indefinite_rejected() {
        let err = sqrt_psd(&sym(1.0, 2.0, 1.0), PsdTolerance::default()).unwrap_err();
        match err {
            Mat2Error::NotPsd { lambda_min, .. } => assert!((lambda_min + 1.0).abs() < 1e-14),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sqrt_diff_of_ones_and_half() {
        let l = sym(1.0, 0.5, 1.0);
        let r = sym(1.0, 1.0, 1.0);
        let d = sqrt_diff_psd(&l, &r, PsdTolerance::default()).unwrap();
        assert!(!d.psd);
        assert!((d.det + 0.133_974_596_215_561_35).abs() < 1e-12);
    }

    #[test]
    fn flat_extension_weight() {
        let tol = PsdTolerance::default();
        assert_eq!(flat_extension_check(&sym(2.0, 6.0, 18.0), tol), Some(3.0));
        assert_eq!(flat_extension_check(&sym(2.0, 1.0, 18.0), tol), None);
        assert_eq!(flat_extension_check(&sym(0.0, 0.0, 1.0), tol), None);
    }

    #[test]
    fn small_eigenvalue_without_cancellation() {
        // eigenvalues 1e-12 and 2 along the diagonal rotated by 45 degrees
        let (lo_t, hi_t) = (1e-12, 2.0);
        let m = sym(0.5 * (lo_t + hi_t), 0.5 * (hi_t - lo_t), 0.5 * (lo_t + hi_t));
        let (lo, hi) = m.eigenvalues();
        assert!((hi - hi_t).abs() < 1e-15);
        assert!((lo - lo_t).abs() < 1e-15);
    }

    #[test]
    fn tolerance_constructor() {
        assert!(PsdTolerance::new(-1.0).is_none());
        assert!(PsdTolerance::new(f64::NAN).is_none());
        assert_eq!(PsdTolerance::new(1e-8).unwrap().rel(), 1e-8);
    }
}
