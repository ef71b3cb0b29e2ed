//! Random commuting weight diagrams for property tests.
//!
//! Every generator draws from a caller-supplied uniform sampler on `[0, 1)`,
//! so the crate stays free of an RNG dependency.

use alloc::vec;
use alloc::vec::Vec;

use crate::shift_model::{
    build_axy, build_constant, build_embedding, EmbeddingSpec, Point, Tail, WeightDiagram,
};

pub fn uniform(u: &mut dyn FnMut() -> f64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * u()
}

fn index(u: &mut dyn FnMut() -> f64, n: usize) -> usize {
    ((u() * n as f64) as usize).min(n - 1)
}

/// Arbitrary commuting diagram on an `n1 × n2` core with constant tail.
///
/// Alphas are free except on the last core row `k1 = n1 - 1`, which must be
/// constant in `k2` for the tail to commute; betas on `k1 = 0` are free and
/// the rest follow from `beta_(k+e1) = alpha_(k+e2) beta_k / alpha_k`.
pub fn random_clamped(u: &mut dyn FnMut() -> f64, n1: usize, n2: usize) -> WeightDiagram {
    let mut alpha = vec![vec![0.0; n2]; n1];
    let last = uniform(u, 0.3, 1.5);
    for (k1, row) in alpha.iter_mut().enumerate() {
        for w in row.iter_mut() {
            *w = if k1 + 1 == n1 { last } else { uniform(u, 0.3, 1.5) };
        }
    }
    let mut beta = vec![vec![0.0; n2]; n1];
    for b in beta[0].iter_mut() {
        *b = uniform(u, 0.3, 1.5);
    }
    for k1 in 1..n1 {
        for k2 in 0..n2 {
            let up = alpha[k1 - 1][(k2 + 1).min(n2 - 1)];
            beta[k1][k2] = up * beta[k1 - 1][k2] / alpha[k1 - 1][k2];
        }
    }
    WeightDiagram::new("random", alpha, beta, Tail::Constant).expect("commuting by construction")
}

/// `alpha_k = omega_(k1)`, `beta_k = eta_(k2)` with nondecreasing sequences:
/// a doubly commuting pair of hyponormal shifts, hence jointly hyponormal.
pub fn random_product(u: &mut dyn FnMut() -> f64, n: usize) -> WeightDiagram {
    let omega = increasing(u, n);
    let eta = increasing(u, n);
    WeightDiagram::from_fn(
        "product",
        n,
        n,
        |k: Point| omega[k.k1],
        |k: Point| eta[k.k2],
        Tail::Constant,
    )
    .expect("product weights commute")
}

fn increasing(u: &mut dyn FnMut() -> f64, n: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(n);
    let mut w = uniform(u, 0.2, 0.9);
    for _ in 0..n {
        v.push(w);
        w += (1.0 - w) * u();
    }
    v
}

pub fn random_axy(u: &mut dyn FnMut() -> f64) -> WeightDiagram {
    loop {
        let a = uniform(u, 0.02, 0.98);
        let x = uniform(u, 0.02, 0.98);
        let y = uniform(u, 0.02, 0.98);
        if a * y < x {
            return build_axy(a, x, y).expect("in class");
        }
    }
}

/// Embedding with `m` free weights; `monotone` makes `omega` nondecreasing
/// (hyponormal), otherwise the weights are arbitrary.
pub fn random_embedding_spec(u: &mut dyn FnMut() -> f64, m: usize, monotone: bool) -> EmbeddingSpec {
    let omega = if monotone {
        increasing(u, m)
    } else {
        (0..m).map(|_| uniform(u, 0.3, 1.2)).collect()
    };
    let r = uniform(u, 0.25, 3.0);
    EmbeddingSpec::scaled(omega, r).expect("positive weights")
}

pub fn random_embedding(u: &mut dyn FnMut() -> f64, m: usize) -> WeightDiagram {
    let monotone = u() < 0.5;
    build_embedding(&random_embedding_spec(u, m, monotone)).expect("valid embedding")
}

pub fn random_constant(u: &mut dyn FnMut() -> f64) -> WeightDiagram {
    build_constant(uniform(u, 0.1, 2.0), uniform(u, 0.1, 2.0)).expect("positive weights")
}

/// Mixture of all generators, with cores of side 1 to 4.
pub fn random_diagram(u: &mut dyn FnMut() -> f64) -> WeightDiagram {
    let n = 1 + index(u, 4);
    match index(u, 5) {
        0 => {
            let n2 = 1 + index(u, 4);
            random_clamped(u, n, n2)
        }
        1 => random_product(u, n),
        2 => random_axy(u),
        3 => random_embedding(u, n),
        _ => random_constant(u),
    }
}
