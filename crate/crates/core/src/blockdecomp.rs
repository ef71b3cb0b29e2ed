//! Restriction of `L = (T_j^* T_i)` and `R = (T_i T_j^*)` to the level
//! spaces `K(n) = span{e_k : k1 + k2 = n}`.
//!
//! After a fixed permutation of `K(n) ⊕ K(n)` both operators become block
//! diagonal with the same block pattern `1 ⊕ (2×2)^n ⊕ 1`.

use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;

use crate::mat2::Sym2;
use crate::ops::{matrix_element, Op};
use crate::shift_model::{Point, Tail, WeightDiagram};

/// Largest level accepted by [`blocks`] and [`commutator_blocks`].
pub const MAX_LEVEL: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockError {
    LevelOutOfRange { n: usize, max: usize },
    NoStabilization,
}

impl fmt::Display for BlockError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockError::LevelOutOfRange { n, max } => write!(f, "level {n} exceeds the maximum {max}"),
            BlockError::NoStabilization => {
                write!(f, "diagram has a formula tail and never stabilizes; an explicit level cap is required")
            }
        }
    }
}

impl core::error::Error for BlockError {}

/// Blocks of `L|K(n)` and `R|K(n)`. The heads and tails of `R` vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPair {
    pub n: usize,
    /// `alpha_(0,n)^2`
    pub l_head: f64,
    /// `l_mid[i-1]` for `i = 1..=n`
    pub l_mid: Vec<Sym2>,
    /// `beta_(n,0)^2`
    pub l_tail: f64,
    pub r_mid: Vec<Sym2>,
}

fn check_level(n: usize) -> Result<(), BlockError> {
    if n > MAX_LEVEL {
        Err(BlockError::LevelOutOfRange { n, max: MAX_LEVEL })
    } else {
        Ok(())
    }
}

/// `l_mid[i] = [[a^2_(i,n-i), a_(i-1,n-i+1) b_(i,n-i)], [., b^2_(i-1,n-i+1)]]`,
/// `r_mid[i]` is the Gramian of `(a_(i-1,n-i), b_(i-1,n-i))`.
pub fn blocks(d: &WeightDiagram, n: usize) -> Result<BlockPair, BlockError> {
    check_level(n)?;
    let mut l_mid = Vec::with_capacity(n);
    let mut r_mid = Vec::with_capacity(n);
    for i in 1..=n {
        let p = Point::new(i, n - i);
        let q = Point::new(i - 1, n - i + 1);
        let s = Point::new(i - 1, n - i);
        let a_p = d.alpha(p);
        let b_q = d.beta(q);
        l_mid.push(Sym2::raw(a_p * a_p, d.alpha(q) * d.beta(p), b_q * b_q));
        let (a_s, b_s) = (d.alpha(s), d.beta(s));
        r_mid.push(Sym2::raw(a_s * a_s, a_s * b_s, b_s * b_s));
    }
    let a0 = d.alpha(Point::new(0, n));
    let b0 = d.beta(Point::new(n, 0));
    let pair = BlockPair { n, l_head: a0 * a0, l_mid, l_tail: b0 * b0, r_mid };
    #[cfg(debug_assertions)]
    if n <= 8 {
        debug_check_blocks(d, &pair);
    }
    Ok(pair)
}

/// Index of `(copy, j)` in `K(n) ⊕ K(n)`, where `j` is the position of
/// `e_(j, n-j)` inside `K(n)` and `copy` selects the summand.
fn full_index(n: usize, copy: usize, j: usize) -> usize {
    copy * (n + 1) + j
}

/// Permutation taking the natural basis of `K(n) ⊕ K(n)` to block order:
/// `(0,0)`, then `(0,i), (1,i-1)` for `i = 1..=n`, then `(1,n)`.
pub fn block_permutation(n: usize) -> Vec<usize> {
    let mut p = Vec::with_capacity(2 * n + 2);
    p.push(full_index(n, 0, 0));
    for i in 1..=n {
        p.push(full_index(n, 0, i));
        p.push(full_index(n, 1, i - 1));
    }
    p.push(full_index(n, 1, n));
    p
}

/// `L|K(n)` and `R|K(n)` assembled entry by entry from the operators, in the
/// natural basis `(copy, j)`.
pub fn full_restriction(d: &WeightDiagram, n: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let dim = 2 * (n + 1);
    let t = [Op::T1, Op::T2];
    let t_adj = [Op::T1Adj, Op::T2Adj];
    let pt = |j: usize| Point::new(j, n - j);
    let l = DMatrix::from_fn(dim, dim, |row, col| {
        let (r, i) = (row / (n + 1), row % (n + 1));
        let (c, j) = (col / (n + 1), col % (n + 1));
        matrix_element(d, &[t_adj[c], t[r]], pt(i), pt(j))
    });
    let rm = DMatrix::from_fn(dim, dim, |row, col| {
        let (r, i) = (row / (n + 1), row % (n + 1));
        let (c, j) = (col / (n + 1), col % (n + 1));
        matrix_element(d, &[t[r], t_adj[c]], pt(i), pt(j))
    });
    (l, rm)
}

impl BlockPair {
    /// Block-diagonal assembly of `L|K(n)` in block order.
    pub fn l_dense(&self) -> DMatrix<f64> {
        self.assemble(self.l_head, &self.l_mid, self.l_tail)
    }

    /// Block-diagonal assembly of `R|K(n)` in block order.
    pub fn r_dense(&self) -> DMatrix<f64> {
        self.assemble(0.0, &self.r_mid, 0.0)
    }

    fn assemble(&self, head: f64, mid: &[Sym2], tail: f64) -> DMatrix<f64> {
        let dim = 2 * (self.n + 1);
        let mut m = DMatrix::zeros(dim, dim);
        m[(0, 0)] = head;
        for (i, b) in mid.iter().enumerate() {
            let o = 1 + 2 * i;
            m[(o, o)] = b.a11();
            m[(o, o + 1)] = b.a12();
            m[(o + 1, o)] = b.a12();
            m[(o + 1, o + 1)] = b.a22();
        }
        m[(dim - 1, dim - 1)] = tail;
        m
    }
}

#[cfg(debug_assertions)]
fn debug_check_blocks(d: &WeightDiagram, pair: &BlockPair) {
    let p = block_permutation(pair.n);
    let (l, r) = full_restriction(d, pair.n);
    let l_perm = crate::dense::permute(&l, &p);
    let r_perm = crate::dense::permute(&r, &p);
    let scale = 1.0 + crate::dense::max_abs(&l).max(crate::dense::max_abs(&r));
    let el = crate::dense::max_abs(&(l_perm - pair.l_dense()));
    let er = crate::dense::max_abs(&(r_perm - pair.r_dense()));
    debug_assert!(el <= 1e-14 * scale && er <= 1e-14 * scale, "block mismatch at n = {}: {el:e} / {er:e}", pair.n);
}

/// Self-commutators and cross commutator on `K(n)` in the basis
/// `e_(0,n), e_(1,n-1), ..., e_(n,0)`.
///
/// `[T1^*, T1]` and `[T2^*, T2]` are diagonal there; `[T1^*, T2]` maps
/// `e_(j,n-j)` to a multiple of `e_(j-1,n-j+1)`, so only its superdiagonal
/// is populated.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorBlocks {
    pub n: usize,
    /// diagonal of `[T1^*, T1]|K(n)`
    pub a: Vec<f64>,
    /// diagonal of `[T2^*, T2]|K(n)`
    pub d: Vec<f64>,
    /// `b[j-1]` is entry `(j-1, j)` of `[T1^*, T2]|K(n)`
    pub b: Vec<f64>,
}

impl CommutatorBlocks {
    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.a))
    }

    pub fn d_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.d))
    }

    /// Matrix of `[T1^*, T2]|K(n)`; its transpose is `[T2^*, T1]|K(n)`.
    pub fn b_matrix(&self) -> DMatrix<f64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |i, j| if i + 1 == j { self.b[i] } else { 0.0 })
    }
}

pub fn commutator_blocks(d: &WeightDiagram, n: usize) -> Result<CommutatorBlocks, BlockError> {
    check_level(n)?;
    let sq = |v: f64| v * v;
    let mut a = Vec::with_capacity(n + 1);
    let mut dd = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n);
    for k in Point::level(n) {
        a.push(sq(d.alpha(k)) - k.left().map_or(0.0, |j| sq(d.alpha(j))));
        dd.push(sq(d.beta(k)) - k.down().map_or(0.0, |j| sq(d.beta(j))));
        if let Some(l) = k.left() {
            b.push(d.beta(k) * d.alpha(l.up()) - d.alpha(l) * d.beta(l));
        }
    }
    Ok(CommutatorBlocks { n, a, d: dd, b })
}

/// Level beyond which the block data of a constant-tail diagram repeats.
pub fn stabilization_level(d: &WeightDiagram) -> Result<usize, BlockError> {
    match d.tail() {
        Tail::Constant => {
            let (n1, n2) = d.core_dims();
            Ok(n1 + n2)
        }
        Tail::Formula(_) => Err(BlockError::NoStabilization),
    }
}
