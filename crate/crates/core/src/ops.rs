//! Action of `T1`, `T2` and their adjoints on basis vectors.
//!
//! Every word in these four operators maps a basis vector `e_k` to a scalar
//! multiple of another basis vector (or to zero), so compositions are exact
//! and cheap. This is the brute-force route used to cross-check the block
//! formulas.

use alloc::vec::Vec;

use crate::shift_model::{Point, WeightDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    T1,
    T2,
    T1Adj,
    T2Adj,
}

/// `coef * e_at`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mono {
    pub coef: f64,
    pub at: Point,
}

pub fn apply(d: &WeightDiagram, op: Op, v: Mono) -> Option<Mono> {
    let k = v.at;
    match op {
        Op::T1 => Some(Mono { coef: v.coef * d.alpha(k), at: k.right() }),
        Op::T2 => Some(Mono { coef: v.coef * d.beta(k), at: k.up() }),
        Op::T1Adj => k.left().map(|j| Mono { coef: v.coef * d.alpha(j), at: j }),
        Op::T2Adj => k.down().map(|j| Mono { coef: v.coef * d.beta(j), at: j }),
    }
}

/// `word[0] word[1] ... word[m-1] e_k` (rightmost factor acts first).
pub fn apply_word(d: &WeightDiagram, word: &[Op], k: Point) -> Option<Mono> {
    word.iter()
        .rev()
        .try_fold(Mono { coef: 1.0, at: k }, |v, &op| apply(d, op, v))
}

/// `<word e_j, e_i>`
pub fn matrix_element(d: &WeightDiagram, word: &[Op], i: Point, j: Point) -> f64 {
    match apply_word(d, word, j) {
        Some(m) if m.at == i => m.coef,
        _ => 0.0,
    }
}

/// `[X, Y] e_k = X Y e_k - Y X e_k` as a sparse vector with at most two terms.
pub fn commutator(d: &WeightDiagram, x: &[Op], y: &[Op], k: Point) -> Vec<(Point, f64)> {
    let mut xy = Vec::with_capacity(x.len() + y.len());
    xy.extend_from_slice(x);
    xy.extend_from_slice(y);
    let mut yx = Vec::with_capacity(x.len() + y.len());
    yx.extend_from_slice(y);
    yx.extend_from_slice(x);
    let mut out: Vec<(Point, f64)> = Vec::with_capacity(2);
    if let Some(m) = apply_word(d, &xy, k) {
        out.push((m.at, m.coef));
    }
    if let Some(m) = apply_word(d, &yx, k) {
        match out.iter_mut().find(|(p, _)| *p == m.at) {
            Some(entry) => entry.1 -= m.coef,
            None => out.push((m.at, -m.coef)),
        }
    }
    out
}
