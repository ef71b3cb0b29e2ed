//! Decision procedures for the hyponormality-type properties of a
//! [`WeightDiagram`], plus structural predicates (entries of `L`/`R`
//! commuting, quasinormality, canonical embeddings).
//!
//! Every infinite family of checks ("for all k", "for all n") is cut at a
//! level cap. Constant-tail diagrams repeat their local data beyond the
//! stabilization level, so the default cap decides the property; formula
//! tails need an explicit cap and a pass there is reported as inconclusive.

use alloc::string::String;
use core::fmt;

use crate::blockdecomp::{stabilization_level, BlockError};
use crate::mat2::{Mat2Error, PsdTolerance};
use crate::shift_model::{ModelError, Point, Tail, WeightDiagram, WeightKind};

mod lpos;
mod moments;
mod semi;
mod six_point;
mod structure;
mod weak;

pub use lpos::{l_inequality_scan, l_positivity_by_blocks, l_positivity_test, LInequalityRow};
pub use moments::{hankel_test, k_hypo_profile, moment_matrix_test, KHypoReport};
pub use semi::{semi_hypo_level, semi_hypo_test};
pub use six_point::{six_point_matrix, six_point_test};
pub use structure::{
    embedding_equivalence_audit, entries_commute_test, quasinormal_by_operators, quasinormal_test,
    EmbeddingAudit, EntriesCommute,
};
pub use weak::{pencil_min_eigenvalue, weak_hypo_level, weak_hypo_test, LambdaGrid, LevelPencil};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// No counterexample on the finite lambda grid.
    PassByGrid,
    Fail,
    /// Every check passed up to a user cap on a diagram that never stabilizes.
    Inconclusive,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::PassByGrid => "PASS (grid)",
            Outcome::Fail => "FAIL",
            Outcome::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Evidence attached to a failing verdict; each variant names the exact
/// lattice point, level or pencil parameter to re-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness {
    /// Six-point matrix at `k` has eigenvalue `lambda_min`.
    SixPoint { k: Point, lambda_min: f64 },
    /// Normalized moment matrix `M_u(order)`.
    MomentMatrix { u: Point, order: usize, lambda_min: f64 },
    /// `alpha_k beta_(k+e1-e2) <= beta_k alpha_(k+e1-e2)` fails at `k`.
    LInequality { k: Point, lhs: f64, rhs: f64 },
    /// Block `i` (1-based) of `L|K(n)` is not PSD.
    LBlock { n: usize, i: usize, lambda_min: f64 },
    /// `sqrt(l_mid[i]) - sqrt(r_mid[i])` on level `n`.
    SqrtDiff { n: usize, i: usize, trace: f64, det: f64, lambda_min: f64 },
    /// Diagonal entry of `[T_op^*, T_op]` at `k`.
    SelfCommutator { op: u8, k: Point, value: f64 },
    /// `[(T1 + lambda T2)^*, T1 + lambda T2]|K(n)` has eigenvalue `lambda_min`.
    Pencil { n: usize, lambda_re: f64, lambda_im: f64, lambda_min: f64 },
    /// Two weights that should agree do not.
    WeightMismatch { kind: WeightKind, k: Point, value: f64, other: Point, other_value: f64 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Witness::SixPoint { k, lambda_min } => write!(f, "six-point matrix at k = {k}: lambda_min = {lambda_min:.6e}"),
            Witness::MomentMatrix { u, order, lambda_min } => {
                write!(f, "M_u({order}) at u = {u}: lambda_min = {lambda_min:.6e}")
            }
            Witness::LInequality { k, lhs, rhs } => write!(f, "weight inequality at k = {k}: {lhs:.6} > {rhs:.6}"),
            Witness::LBlock { n, i, lambda_min } => write!(f, "L block {i} on level {n}: lambda_min = {lambda_min:.6e}"),
            Witness::SqrtDiff { n, i, trace, det, lambda_min } => write!(
                f,
                "sqrt(L) - sqrt(R) block {i} on level {n}: tr = {trace:.6}, det = {det:.6}, lambda_min = {lambda_min:.6e}"
            ),
            Witness::SelfCommutator { op, k, value } => write!(f, "[T{op}*, T{op}] at k = {k}: {value:.6e}"),
            Witness::Pencil { n, lambda_re, lambda_im, lambda_min } => write!(
                f,
                "level {n}, lambda = {lambda_re:.6}{lambda_im:+.6}i: lambda_min = {lambda_min:.6e}"
            ),
            Witness::WeightMismatch { kind, k, value, other, other_value } => {
                write!(f, "{kind} at {k} = {value:.6} but at {other} = {other_value:.6}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestVerdict {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    /// Levels (or degrees of lattice points) scanned: `0..levels_checked`.
    pub levels_checked: usize,
    /// Smallest eigenvalue (or signed slack) met during the scan.
    pub min_margin: f64,
}

impl TestVerdict {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, Outcome::Pass | Outcome::PassByGrid)
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestError {
    NoStabilization,
    CapTooSmall { requested: usize, needed: usize },
    InvalidOrder(usize),
    Model(ModelError),
    Numerical(Mat2Error),
    /// Two routes that must agree did not.
    Inconsistent(String),
}

impl fmt::Display for TestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestError::NoStabilization => write!(f, "{}", BlockError::NoStabilization),
            TestError::CapTooSmall { requested, needed } => {
                write!(f, "level cap {requested} is below the stabilization bound {needed}")
            }
            TestError::InvalidOrder(k) => write!(f, "invalid moment order {k}"),
            TestError::Model(e) => write!(f, "{e}"),
            TestError::Numerical(e) => write!(f, "{e}"),
            TestError::Inconsistent(m) => write!(f, "internal inconsistency: {m}"),
        }
    }
}

impl core::error::Error for TestError {}

impl From<ModelError> for TestError {
    fn from(e: ModelError) -> Self {
        TestError::Model(e)
    }
}

impl From<Mat2Error> for TestError {
    fn from(e: Mat2Error) -> Self {
        TestError::Numerical(e)
    }
}

impl From<BlockError> for TestError {
    fn from(e: BlockError) -> Self {
        match e {
            BlockError::NoStabilization => TestError::NoStabilization,
            BlockError::LevelOutOfRange { n, max } => TestError::CapTooSmall { requested: n, needed: max },
        }
    }
}

/// Shared knobs of every test.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Settings {
    /// Level cap; `None` means the stabilization default (constant tails only).
    pub cap: Option<usize>,
    pub tol: PsdTolerance,
}

impl Settings {
    pub fn with_cap(cap: usize) -> Self {
        Settings { cap: Some(cap), ..Settings::default() }
    }
}

/// Resolved level cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cap {
    pub level: usize,
    /// Whether a clean scan up to `level` decides the property.
    pub conclusive: bool,
}

/// Constant tails: stabilization level + 2 (a larger request is honoured, a
/// smaller one is an error). Formula tails: the requested cap, inconclusive.
pub fn resolve_cap(d: &WeightDiagram, requested: Option<usize>) -> Result<Cap, TestError> {
    match d.tail() {
        Tail::Constant => {
            let needed = stabilization_level(d)? + 2;
            match requested {
                None => Ok(Cap { level: needed, conclusive: true }),
                Some(c) if c >= needed => Ok(Cap { level: c, conclusive: true }),
                Some(c) => Err(TestError::CapTooSmall { requested: c, needed }),
            }
        }
        Tail::Formula(_) => match requested {
            Some(c) => Ok(Cap { level: c, conclusive: false }),
            None => Err(TestError::NoStabilization),
        },
    }
}

pub(crate) fn finish(
    witness: Option<Witness>,
    cap: Cap,
    levels_checked: usize,
    min_margin: f64,
    by_grid: bool,
) -> TestVerdict {
    let outcome = match (witness.is_some(), cap.conclusive, by_grid) {
        (true, _, _) => Outcome::Fail,
        (false, false, _) => Outcome::Inconclusive,
        (false, true, true) => Outcome::PassByGrid,
        (false, true, false) => Outcome::Pass,
    };
    TestVerdict { outcome, witness, levels_checked, min_margin }
}

/// `|lhs - rhs| <= 1e-12 * max(|lhs|, |rhs|)`
pub(crate) fn rel_eq(lhs: f64, rhs: f64) -> bool {
    libm::fabs(lhs - rhs) <= crate::shift_model::COMMUTE_TOL * libm::fabs(lhs).max(libm::fabs(rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift_model::{build_axy, build_drury_arveson, build_helton_howe};

    #[test]
    fn cap_policy() {
        let d = build_axy(0.5, 0.5, 0.5).unwrap();
        assert_eq!(resolve_cap(&d, None), Ok(Cap { level: 8, conclusive: true }));
        assert_eq!(resolve_cap(&d, Some(12)), Ok(Cap { level: 12, conclusive: true }));
        assert_eq!(resolve_cap(&d, Some(3)), Err(TestError::CapTooSmall { requested: 3, needed: 8 }));
        assert_eq!(resolve_cap(&build_helton_howe(), None).unwrap().level, 4);
        let da = build_drury_arveson(4).unwrap();
        assert_eq!(resolve_cap(&da, None), Err(TestError::NoStabilization));
        assert_eq!(resolve_cap(&da, Some(6)), Ok(Cap { level: 6, conclusive: false }));
    }
}
