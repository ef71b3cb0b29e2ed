//! Finitely presented 2-variable weighted shifts.
//!
//! A [`WeightDiagram`] stores the weights `alpha_k`, `beta_k` on an `n1 × n2`
//! core. Outside the core either the nearest core value applies
//! ([`Tail::Constant`]) or a closed-form law takes over ([`Tail::Formula`]).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use libm::{fabs, sqrt};

/// Lattice point `(k1, k2)` of `Z_+^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub k1: usize,
    pub k2: usize,
}

impl Point {
    pub const ORIGIN: Point = Point { k1: 0, k2: 0 };

    pub const fn new(k1: usize, k2: usize) -> Self {
        Point { k1, k2 }
    }

    pub const fn degree(&self) -> usize {
        self.k1 + self.k2
    }

    /// `k + eps1`
    pub const fn right(&self) -> Point {
        Point { k1: self.k1 + 1, k2: self.k2 }
    }

    /// `k + eps2`
    pub const fn up(&self) -> Point {
        Point { k1: self.k1, k2: self.k2 + 1 }
    }

    /// `k - eps1`, if it stays in the lattice.
    pub fn left(&self) -> Option<Point> {
        self.k1.checked_sub(1).map(|k1| Point { k1, k2: self.k2 })
    }

    /// `k - eps2`, if it stays in the lattice.
    pub fn down(&self) -> Option<Point> {
        self.k2.checked_sub(1).map(|k2| Point { k1: self.k1, k2 })
    }

    pub const fn offset(&self, d1: usize, d2: usize) -> Point {
        Point { k1: self.k1 + d1, k2: self.k2 + d2 }
    }

    /// All points of degree `n`, ordered by increasing `k1` (so `(0, n)` first).
    pub fn level(n: usize) -> impl Iterator<Item = Point> {
        (0..=n).map(move |j| Point { k1: j, k2: n - j })
    }

    /// All points with `k1 + k2 <= cap`, by degree then `k1`.
    pub fn up_to_degree(cap: usize) -> impl Iterator<Item = Point> {
        (0..=cap).flat_map(Point::level)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k1, self.k2)
    }
}

/// Closed-form weight laws for diagrams that are not eventually constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaTail {
    DruryArveson,
}

impl FormulaTail {
    pub fn id(&self) -> &'static str {
        match self {
            FormulaTail::DruryArveson => "drury-arveson",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        match id {
            "drury-arveson" => Some(FormulaTail::DruryArveson),
            _ => None,
        }
    }

    pub fn alpha(&self, k: Point) -> f64 {
        match self {
            FormulaTail::DruryArveson => {
                sqrt((k.k1 as f64 + 1.0) / (k.degree() as f64 + 1.0))
            }
        }
    }

    pub fn beta(&self, k: Point) -> f64 {
        match self {
            FormulaTail::DruryArveson => {
                sqrt((k.k2 as f64 + 1.0) / (k.degree() as f64 + 1.0))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// Beyond the core, the nearest core cell's weight applies.
    Constant,
    Formula(FormulaTail),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Alpha,
    Beta,
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightKind::Alpha => "alpha",
            WeightKind::Beta => "beta",
        })
    }
}

/// One failure of `beta_{k+e1} alpha_k = alpha_{k+e2} beta_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorViolation {
    pub k: Point,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    Shape(String),
    NonPositiveWeight { kind: WeightKind, k: Point, value: f64 },
    NonCommuting { violations: Vec<CommutatorViolation>, worst: f64, count: usize },
    OutOfClass(String),
    Domain(String),
    MomentOverflow { k: Point },
    InvalidEmbedding(String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Shape(m) => write!(f, "malformed weight arrays: {m}"),
            ModelError::NonPositiveWeight { kind, k, value } => {
                write!(f, "{kind} weight at {k} is not a positive finite number ({value})")
            }
            ModelError::NonCommuting { violations, worst, count } => {
                write!(f, "weights do not commute at {count} lattice point(s), worst relative violation {worst:e}; first at")?;
                for v in violations {
                    write!(f, " {}", v.k)?;
                }
                Ok(())
            }
            ModelError::OutOfClass(m) => write!(f, "parameters outside the class: {m}"),
            ModelError::Domain(m) => write!(f, "parameter domain violation: {m}"),
            ModelError::MomentOverflow { k } => {
                write!(f, "moment at {k} leaves the floating-point range")
            }
            ModelError::InvalidEmbedding(m) => write!(f, "invalid embedding: {m}"),
        }
    }
}

impl core::error::Error for ModelError {}

/// Relative tolerance of the commutativity check.
pub const COMMUTE_TOL: f64 = 1e-12;
const MAX_REPORTED_VIOLATIONS: usize = 10;

/// Weight diagram of a commuting 2-variable weighted shift.
///
/// Construction through [`WeightDiagram::new`] or a builder guarantees
/// positive finite weights and commutativity on the core plus one tail ring.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDiagram {
    name: String,
    n1: usize,
    n2: usize,
    /// `alpha[k1 * n2 + k2]`
    alpha: Vec<f64>,
    beta: Vec<f64>,
    tail: Tail,
}

impl WeightDiagram {
    /// `alpha[k1][k2]`, `beta[k1][k2]` on an `n1 × n2` core.
    pub fn new(
        name: impl Into<String>,
        alpha: Vec<Vec<f64>>,
        beta: Vec<Vec<f64>>,
        tail: Tail,
    ) -> Result<Self, ModelError> {
        let n1 = alpha.len();
        if n1 == 0 || beta.len() != n1 {
            return Err(ModelError::Shape(format!(
                "alpha has {} rows and beta has {} rows",
                n1,
                beta.len()
            )));
        }
        let n2 = alpha[0].len();
        if n2 == 0 {
            return Err(ModelError::Shape("empty rows".to_string()));
        }
        for (i, (ra, rb)) in alpha.iter().zip(beta.iter()).enumerate() {
            if ra.len() != n2 || rb.len() != n2 {
                return Err(ModelError::Shape(format!(
                    "row {i} has lengths {} / {}, expected {n2}",
                    ra.len(),
                    rb.len()
                )));
            }
        }
        let mut d = WeightDiagram {
            name: name.into(),
            n1,
            n2,
            alpha: alpha.into_iter().flatten().collect(),
            beta: beta.into_iter().flatten().collect(),
            tail,
        };
        d.check_positive()?;
        d.validate()?;
        d.name.shrink_to_fit();
        Ok(d)
    }

    /// Core from a weight law evaluated on `[0, n1) × [0, n2)`.
    pub fn from_fn(
        name: impl Into<String>,
        n1: usize,
        n2: usize,
        alpha: impl Fn(Point) -> f64,
        beta: impl Fn(Point) -> f64,
        tail: Tail,
    ) -> Result<Self, ModelError> {
        let grid = |f: &dyn Fn(Point) -> f64| -> Vec<Vec<f64>> {
            (0..n1).map(|k1| (0..n2).map(|k2| f(Point::new(k1, k2))).collect()).collect()
        };
        Self::new(name, grid(&alpha), grid(&beta), tail)
    }

    fn check_positive(&self) -> Result<(), ModelError> {
        for (kind, w) in [(WeightKind::Alpha, &self.alpha), (WeightKind::Beta, &self.beta)] {
            for (idx, &value) in w.iter().enumerate() {
                if !(value.is_finite() && value > 0.0) {
                    let k = Point::new(idx / self.n2, idx % self.n2);
                    return Err(ModelError::NonPositiveWeight { kind, k, value });
                }
            }
        }
        Ok(())
    }

    /// Re-checks commutativity on the core plus one ring (constant tail) or on
    /// the core plus one ring of the formula law.
    pub fn validate(&self) -> Result<(), ModelError> {
        let mut violations = Vec::new();
        let mut worst = 0.0_f64;
        let mut count = 0;
        for k1 in 0..=self.n1 {
            for k2 in 0..=self.n2 {
                let k = Point::new(k1, k2);
                let lhs = self.beta(k.right()) * self.alpha(k);
                let rhs = self.alpha(k.up()) * self.beta(k);
                let scale = fabs(lhs).max(fabs(rhs));
                let relative = if scale > 0.0 { fabs(lhs - rhs) / scale } else { 0.0 };
                // written so that a NaN ratio counts as a violation
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                let bad = !(relative <= COMMUTE_TOL);
                if bad {
                    count += 1;
                    worst = worst.max(relative);
                    if violations.len() < MAX_REPORTED_VIOLATIONS {
                        violations.push(CommutatorViolation { k, lhs, rhs, relative });
                    }
                }
            }
        }
        if count == 0 {
            Ok(())
        } else {
            Err(ModelError::NonCommuting { violations, worst, count })
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Core dimensions `(n1, n2)`.
    pub fn core_dims(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    fn core_index(&self, k: Point) -> usize {
        k.k1.min(self.n1 - 1) * self.n2 + k.k2.min(self.n2 - 1)
    }

    fn in_core(&self, k: Point) -> bool {
        k.k1 < self.n1 && k.k2 < self.n2
    }

    pub fn alpha(&self, k: Point) -> f64 {
        match self.tail {
            Tail::Formula(f) if !self.in_core(k) => f.alpha(k),
            _ => self.alpha[self.core_index(k)],
        }
    }

    pub fn beta(&self, k: Point) -> f64 {
        match self.tail {
            Tail::Formula(f) if !self.in_core(k) => f.beta(k),
            _ => self.beta[self.core_index(k)],
        }
    }

    pub fn weight(&self, kind: WeightKind, k: Point) -> f64 {
        match kind {
            WeightKind::Alpha => self.alpha(k),
            WeightKind::Beta => self.beta(k),
        }
    }

    /// Core arrays as rows indexed by `k1`.
    pub fn alpha_rows(&self) -> Vec<Vec<f64>> {
        self.alpha.chunks(self.n2).map(|r| r.to_vec()).collect()
    }

    pub fn beta_rows(&self) -> Vec<Vec<f64>> {
        self.beta.chunks(self.n2).map(|r| r.to_vec()).collect()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Moments `gamma_k` on `[0, k1_max] × [0, k2_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    k1_max: usize,
    k2_max: usize,
    gamma: Vec<f64>,
}

impl MomentTable {
    pub fn dims(&self) -> (usize, usize) {
        (self.k1_max, self.k2_max)
    }

    pub fn get(&self, k: Point) -> Option<f64> {
        (k.k1 <= self.k1_max && k.k2 <= self.k2_max)
            .then(|| self.gamma[k.k1 * (self.k2_max + 1) + k.k2])
    }

    /// Like [`MomentTable::get`] but panics outside the table.
    pub fn at(&self, k: Point) -> f64 {
        self.get(k).expect("moment index outside table")
    }
}

/// Moments along the canonical path (right along `k2 = 0`, then up).
pub fn moments(d: &WeightDiagram, k1_max: usize, k2_max: usize) -> Result<MomentTable, ModelError> {
    let w = k2_max + 1;
    let mut gamma = vec![0.0; (k1_max + 1) * w];
    let mut row_start = 1.0_f64;
    for k1 in 0..=k1_max {
        if k1 > 0 {
            let a = d.alpha(Point::new(k1 - 1, 0));
            row_start *= a * a;
        }
        let mut g = row_start;
        for k2 in 0..=k2_max {
            if k2 > 0 {
                let b = d.beta(Point::new(k1, k2 - 1));
                g *= b * b;
            }
            if !(g.is_finite() && g > 0.0) {
                return Err(ModelError::MomentOverflow { k: Point::new(k1, k2) });
            }
            gamma[k1 * w + k2] = g;
        }
    }
    let table = MomentTable { k1_max, k2_max, gamma };
    debug_assert!(path_consistent(d, &table).is_none());
    Ok(table)
}

/// Local step check: every unit step of every lattice path multiplies by the
/// right squared weight. Equivalent to path independence on the whole table.
/// Returns the first point where a step fails.
pub fn path_consistent(d: &WeightDiagram, t: &MomentTable) -> Option<Point> {
    let rel = |a: f64, b: f64| fabs(a - b) <= 1e-12 * fabs(a).max(fabs(b));
    for k1 in 0..=t.k1_max {
        for k2 in 0..=t.k2_max {
            let k = Point::new(k1, k2);
            let g = t.at(k);
            if k1 < t.k1_max {
                let a = d.alpha(k);
                if !rel(t.at(k.right()), g * a * a) {
                    return Some(k);
                }
            }
            if k2 < t.k2_max {
                let b = d.beta(k);
                if !rel(t.at(k.up()), g * b * b) {
                    return Some(k);
                }
            }
        }
    }
    None
}

/// Pair of unilateral weight sequences `(omega, eta)` with `eta = r * omega`.
/// Both sequences are eventually constant: the last entry repeats forever.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSpec {
    omega: Vec<f64>,
    eta: Vec<f64>,
}

impl EmbeddingSpec {
    pub fn new(mut omega: Vec<f64>, mut eta: Vec<f64>) -> Result<Self, ModelError> {
        if omega.is_empty() || eta.is_empty() {
            return Err(ModelError::InvalidEmbedding("empty sequence".to_string()));
        }
        if omega.iter().chain(eta.iter()).any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(ModelError::InvalidEmbedding("weights must be positive and finite".to_string()));
        }
        let m = omega.len().max(eta.len());
        let last_o = *omega.last().unwrap();
        let last_e = *eta.last().unwrap();
        omega.resize(m, last_o);
        eta.resize(m, last_e);
        for l in 0..m - 1 {
            let lhs = omega[l] * eta[l + 1];
            let rhs = omega[l + 1] * eta[l];
            if fabs(lhs - rhs) > COMMUTE_TOL * lhs.max(rhs) {
                return Err(ModelError::InvalidEmbedding(format!(
                    "omega_{l} eta_{} != omega_{} eta_{l}",
                    l + 1,
                    l + 1
                )));
            }
        }
        Ok(EmbeddingSpec { omega, eta })
    }

    /// `eta = r * omega`.
    pub fn scaled(omega: Vec<f64>, r: f64) -> Result<Self, ModelError> {
        let eta = omega.iter().map(|w| r * w).collect();
        Self::new(omega, eta)
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn ratio(&self) -> f64 {
        self.eta[0] / self.omega[0]
    }

    pub fn omega_at(&self, l: usize) -> f64 {
        self.omega[l.min(self.omega.len() - 1)]
    }

    pub fn eta_at(&self, l: usize) -> f64 {
        self.eta[l.min(self.eta.len() - 1)]
    }

    /// `gamma^(omega)_j = prod_{i<j} omega_i^2`.
    pub fn omega_moment(&self, j: usize) -> f64 {
        (0..j).map(|i| self.omega_at(i) * self.omega_at(i)).product()
    }
}

fn open_unit(name: &str, v: f64) -> Result<(), ModelError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(ModelError::OutOfClass(format!("{name} = {v} is not in (0,1)")))
    }
}

/// The family `W(a,x,y)`: `alpha_(0,0) = x`, `alpha_(0,j) = a` for `j >= 1`,
/// `beta_(0,0) = y`, `beta_(i,0) = ay/x` for `i >= 1`, all other weights 1.
pub fn build_axy(a: f64, x: f64, y: f64) -> Result<WeightDiagram, ModelError> {
    open_unit("a", a)?;
    open_unit("x", x)?;
    open_unit("y", y)?;
    if a * y >= x {
        return Err(ModelError::OutOfClass(format!("ay >= x ({} >= {x})", a * y)));
    }
    let b10 = a * y / x;
    WeightDiagram::from_fn(
        format!("axy:{a},{x},{y}"),
        3,
        3,
        |k| match (k.k1, k.k2) {
            (0, 0) => x,
            (0, _) => a,
            _ => 1.0,
        },
        |k| match (k.k1, k.k2) {
            (0, 0) => y,
            (_, 0) => b10,
            _ => 1.0,
        },
        Tail::Constant,
    )
}

/// Drury–Arveson weights on a `depth × depth` core with the exact formula tail.
pub fn build_drury_arveson(depth: usize) -> Result<WeightDiagram, ModelError> {
    if depth < 2 {
        return Err(ModelError::Domain(format!("depth {depth} < 2")));
    }
    let law = FormulaTail::DruryArveson;
    WeightDiagram::from_fn(
        "drury-arveson",
        depth,
        depth,
        |k| law.alpha(k),
        |k| law.beta(k),
        Tail::Formula(law),
    )
}

pub fn build_helton_howe() -> WeightDiagram {
    build_constant(1.0, 1.0).expect("unit weights").with_name("helton-howe")
}

/// All alpha weights equal `c1`, all beta weights equal `c2`.
pub fn build_constant(c1: f64, c2: f64) -> Result<WeightDiagram, ModelError> {
    WeightDiagram::new(format!("constant:{c1},{c2}"), vec![vec![c1]], vec![vec![c2]], Tail::Constant)
}

/// Weight pattern built from `a^2`, `ab`, `b^2` below the second diagonal
/// strip and 1 beyond it; requires `0 < a < b < 1`.
pub fn build_ex215(a: f64, b: f64) -> Result<WeightDiagram, ModelError> {
    if !(a > 0.0 && a < b && b < 1.0) {
        return Err(ModelError::Domain(format!("need 0 < a < b < 1, got a = {a}, b = {b}")));
    }
    let strip = |i: usize| match i {
        0 => a * a,
        1 => a * b,
        _ => b * b,
    };
    WeightDiagram::from_fn(
        format!("ex215:{a},{b}"),
        3,
        3,
        |k| if k.k1 <= 1 { strip(k.k2) } else { 1.0 },
        |k| if k.k2 <= 1 { strip(k.k1) } else { 1.0 },
        Tail::Constant,
    )
}

/// `alpha_(0,0) = a`, other alphas 1; `beta_(0,0) = b`, `beta_(i,0) = b/a`,
/// `beta_(i,j) = 2b` for `j >= 1`; requires `a > 1/2` and `b > 0`.
pub fn build_ex216(a: f64, b: f64) -> Result<WeightDiagram, ModelError> {
    if !(a > 0.5 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(ModelError::Domain(format!("need a > 1/2 and b > 0, got a = {a}, b = {b}")));
    }
    WeightDiagram::from_fn(
        format!("ex216:{a},{b}"),
        2,
        2,
        |k| if k == Point::ORIGIN { a } else { 1.0 },
        |k| match (k.k1, k.k2) {
            (0, 0) => b,
            (_, 0) => b / a,
            _ => 2.0 * b,
        },
        Tail::Constant,
    )
}

/// `alpha_k = omega_{k1+k2}`, `beta_k = eta_{k1+k2}`.
pub fn build_embedding(e: &EmbeddingSpec) -> Result<WeightDiagram, ModelError> {
    let m = e.omega.len();
    WeightDiagram::from_fn(
        "embedding",
        m,
        m,
        |k| e.omega_at(k.degree()),
        |k| e.eta_at(k.degree()),
        Tail::Constant,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        fabs(a - b) <= 1e-14 * (1.0 + fabs(a).max(fabs(b)))
    }

    #[test]
    fn axy_weights() {
        let d = build_axy(0.5, 0.5, 0.5).unwrap();
        assert_eq!(d.beta(Point::new(1, 0)), 0.5);
        let d = build_axy(0.3, 0.6, 0.9).unwrap();
        assert_eq!(d.alpha(Point::new(0, 0)), 0.6);
        assert_eq!(d.alpha(Point::new(0, 7)), 0.3);
        assert_eq!(d.alpha(Point::new(5, 0)), 1.0);
        assert_eq!(d.beta(Point::new(0, 0)), 0.9);
        assert!(close(d.beta(Point::new(9, 0)), 0.3 * 0.9 / 0.6));
        assert_eq!(d.beta(Point::new(9, 1)), 1.0);
        assert_eq!(d.beta(Point::new(0, 4)), 1.0);
    }

    #[test]
    fn axy_out_of_class() {
        assert!(matches!(build_axy(0.9, 0.5, 0.9), Err(ModelError::OutOfClass(_))));
        assert!(matches!(build_axy(0.0, 0.5, 0.3), Err(ModelError::OutOfClass(_))));
        assert!(matches!(build_axy(0.5, 1.0, 0.3), Err(ModelError::OutOfClass(_))));
    }

    #[test]
    fn non_commuting_rejected_at_origin() {
        let mut beta = vec![vec![1.0; 3]; 3];
        beta[0][0] = 2.0;
        let err = WeightDiagram::new("bad", vec![vec![1.0; 3]; 3], beta, Tail::Constant).unwrap_err();
        match err {
            ModelError::NonCommuting { violations, .. } => {
                assert_eq!(violations[0].k, Point::ORIGIN)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_positive_rejected() {
        let err = WeightDiagram::new("z", vec![vec![0.0]], vec![vec![1.0]], Tail::Constant).unwrap_err();
        assert!(matches!(err, ModelError::NonPositiveWeight { kind: WeightKind::Alpha, .. }));
        let err = WeightDiagram::new("s", vec![vec![1.0, 1.0]], vec![vec![1.0]], Tail::Constant).unwrap_err();
        assert!(matches!(err, ModelError::Shape(_)));
    }

    #[test]
    fn drury_arveson_entries() {
        let d = build_drury_arveson(6).unwrap();
        assert!(close(d.alpha(Point::new(2, 1)), sqrt(0.75)));
        assert!(close(d.alpha(Point::new(0, 1)), sqrt(0.5)));
        assert!(close(d.beta(Point::new(1, 0)), sqrt(0.5)));
        assert!(close(d.alpha(Point::new(1, 1)), sqrt(2.0 / 3.0)));
        assert!(close(d.beta(Point::new(0, 2)), 1.0));
        // beyond the core the law continues
        assert!(close(d.alpha(Point::new(10, 3)), sqrt(11.0 / 14.0)));
        assert!(build_drury_arveson(1).is_err());
    }

    #[test]
    fn moment_values() {
        let (a, x, y) = (0.4, 0.7, 0.8);
        let t = moments(&build_axy(a, x, y).unwrap(), 4, 4).unwrap();
        assert_eq!(t.at(Point::ORIGIN), 1.0);
        assert!(close(t.at(Point::new(1, 0)), x * x));
        assert!(close(t.at(Point::new(0, 1)), y * y));
        assert!(close(t.at(Point::new(1, 1)), a * a * y * y));

        let t = moments(&build_helton_howe(), 5, 5).unwrap();
        assert!(Point::up_to_degree(5).all(|k| t.at(k) == 1.0));

        let t = moments(&build_drury_arveson(4).unwrap(), 3, 3).unwrap();
        assert!(close(t.at(Point::new(1, 1)), 0.5));
    }

    #[test]
    fn moment_overflow_reported() {
        let d = build_constant(1e30, 1.0).unwrap();
        assert!(matches!(moments(&d, 20, 1), Err(ModelError::MomentOverflow { .. })));
    }

    #[test]
    fn ex215_and_ex216() {
        let d = build_ex215(0.5, 0.8).unwrap();
        assert!(close(d.alpha(Point::new(0, 1)), 0.4));
        assert!(close(d.alpha(Point::new(1, 5)), 0.64));
        assert!(close(d.beta(Point::new(4, 1)), 0.64));
        assert!(build_ex215(0.8, 0.5).is_err());

        let d = build_ex216(1.05, 1.05).unwrap();
        assert_eq!(d.alpha(Point::ORIGIN), 1.05);
        assert!(close(d.beta(Point::new(3, 0)), 1.0));
        assert!(close(d.beta(Point::new(0, 3)), 2.1));
        assert!(build_ex216(0.5, 1.0).is_err());
    }

    #[test]
    fn embedding_of_ones_is_helton_howe() {
        let e = EmbeddingSpec::new(vec![1.0], vec![1.0]).unwrap();
        let d = build_embedding(&e).unwrap();
        let hh = build_helton_howe();
        assert!(Point::up_to_degree(6).all(|k| d.alpha(k) == hh.alpha(k) && d.beta(k) == hh.beta(k)));
    }

    #[test]
    fn embedding_requires_proportional_sequences() {
        assert!(EmbeddingSpec::new(vec![0.5, 1.0], vec![1.0, 1.0]).is_err());
        let e = EmbeddingSpec::new(vec![0.5, 1.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(e.ratio(), 2.0);
        // padding with the last value keeps the tail proportional
        let e = EmbeddingSpec::new(vec![0.5, 0.7, 1.0], vec![1.0]);
        assert!(e.is_err());
    }

    #[test]
    fn level_order() {
        let pts: Vec<Point> = Point::level(2).collect();
        assert_eq!(pts, vec![Point::new(0, 2), Point::new(1, 1), Point::new(2, 0)]);
        assert_eq!(Point::up_to_degree(3).count(), 10);
    }
}
