use alloc::format;
use alloc::vec::Vec;

use libm::{fabs, pow};

use crate::ops::{commutator, Op};
use crate::shift_model::{build_embedding, moments, EmbeddingSpec, Point, Tail, WeightDiagram, WeightKind};

use super::{finish, hankel_test, moment_matrix_test, rel_eq, resolve_cap, Cap, Settings, TestError, TestVerdict, Witness};

/// Three routes to "the entries of `L` (resp. `R`) commute".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntriesCommute {
    /// `[T2^* T1, T1^* T1] = 0` and `[T1^* T2, T2^* T2] = 0`
    pub l: bool,
    /// `[T1 T2^*, T1 T1^*] = 0` and `[T2 T1^*, T2 T2^*] = 0` away from the axes
    pub r: bool,
    /// `alpha_(k+e2) = alpha_(k+e1)` and `beta_(k+e1) = beta_(k+e2)`
    pub weights: bool,
    /// First point where the weight condition fails.
    pub witness: Option<Witness>,
    pub levels_checked: usize,
}

fn vanishes(terms: &[(Point, f64)], scale: f64) -> bool {
    terms.iter().all(|(_, v)| fabs(*v) <= crate::shift_model::COMMUTE_TOL * scale)
}

fn op_scale(d: &WeightDiagram, k: Point) -> f64 {
    // products of four weights around k
    let mut s = 0.0_f64;
    for p in [k, k.right(), k.up(), k.right().up()] {
        s = s.max(d.alpha(p)).max(d.beta(p));
        if let Some(q) = p.left() {
            s = s.max(d.alpha(q)).max(d.beta(q));
        }
        if let Some(q) = p.down() {
            s = s.max(d.alpha(q)).max(d.beta(q));
        }
    }
    s * s * s * s
}

/// The weight route runs over `|m| <= cap`, the `L` route over `|k| <= cap + 1`
/// and the `R` route over interior points with `|k| <= cap + 2`; these ranges
/// involve the same weights. A disagreement is reported as an error.
///
/// On the axes `[T1 T2^*, T1 T1^*]` never vanishes for a weighted shift (one
/// of the two products kills `e_k`), so the `R` route is read on
/// `k1, k2 >= 1`.
pub fn entries_commute_test(d: &WeightDiagram, s: &Settings) -> Result<EntriesCommute, TestError> {
    let cap = resolve_cap(d, s.cap)?;
    let mut witness = None;
    for m in Point::up_to_degree(cap.level) {
        let checks = [
            (WeightKind::Alpha, m.up(), m.right()),
            (WeightKind::Beta, m.right(), m.up()),
        ];
        for (kind, p, q) in checks {
            let (vp, vq) = (d.weight(kind, p), d.weight(kind, q));
            if !rel_eq(vp, vq) {
                witness = Some(Witness::WeightMismatch { kind, k: p, value: vp, other: q, other_value: vq });
                break;
            }
        }
        if witness.is_some() {
            break;
        }
    }
    let weights = witness.is_none();

    let l = Point::up_to_degree(cap.level + 1).all(|k| {
        let sc = op_scale(d, k);
        vanishes(&commutator(d, &[Op::T2Adj, Op::T1], &[Op::T1Adj, Op::T1], k), sc)
            && vanishes(&commutator(d, &[Op::T1Adj, Op::T2], &[Op::T2Adj, Op::T2], k), sc)
    });
    let r = Point::up_to_degree(cap.level + 2)
        .filter(|k| k.k1 >= 1 && k.k2 >= 1)
        .all(|k| {
            let sc = op_scale(d, k);
            vanishes(&commutator(d, &[Op::T1, Op::T2Adj], &[Op::T1, Op::T1Adj], k), sc)
                && vanishes(&commutator(d, &[Op::T2, Op::T1Adj], &[Op::T2, Op::T2Adj], k), sc)
        });
    if l != weights || r != weights {
        return Err(TestError::Inconsistent(format!(
            "entries-commute routes disagree on {}: L = {l}, R = {r}, weights = {weights}",
            d.name()
        )));
    }
    Ok(EntriesCommute { l, r, weights, witness, levels_checked: cap.level + 1 })
}

fn all_equal(d: &WeightDiagram, kind: WeightKind, pts: &[Point]) -> Option<Witness> {
    let first = d.weight(kind, Point::ORIGIN);
    pts.iter().find_map(|&k| {
        let v = d.weight(kind, k);
        (!rel_eq(v, first)).then_some(Witness::WeightMismatch {
            kind,
            k,
            value: v,
            other: Point::ORIGIN,
            other_value: first,
        })
    })
}

/// Quasinormal iff every alpha equals one constant and every beta another.
/// For constant tails the core decides; formula tails are read on the core
/// plus one ring.
pub fn quasinormal_test(d: &WeightDiagram) -> TestVerdict {
    let (n1, n2) = d.core_dims();
    let (r1, r2) = match d.tail() {
        Tail::Constant => (n1, n2),
        Tail::Formula(_) => (n1 + 1, n2 + 1),
    };
    let pts: Vec<Point> = (0..r1).flat_map(|k1| (0..r2).map(move |k2| Point::new(k1, k2))).collect();
    let witness = all_equal(d, WeightKind::Alpha, &pts).or_else(|| all_equal(d, WeightKind::Beta, &pts));
    let cap = Cap { level: r1 + r2, conclusive: d.tail() == Tail::Constant || witness.is_some() };
    finish(witness, cap, r1 + r2 - 1, 0.0, false)
}

/// Operator route: `T_i` commutes with `T_j^* T_j` for `i, j in {1, 2}` on
/// every `e_k` with `|k| <= cap`.
pub fn quasinormal_by_operators(d: &WeightDiagram, s: &Settings) -> Result<TestVerdict, TestError> {
    let cap = resolve_cap(d, s.cap)?;
    let words: [(&[Op], &[Op]); 4] = [
        (&[Op::T1], &[Op::T1Adj, Op::T1]),
        (&[Op::T2], &[Op::T1Adj, Op::T1]),
        (&[Op::T1], &[Op::T2Adj, Op::T2]),
        (&[Op::T2], &[Op::T2Adj, Op::T2]),
    ];
    for k in Point::up_to_degree(cap.level) {
        let sc = op_scale(d, k);
        for (x, y) in words {
            let c = commutator(d, x, y, k);
            if !vanishes(&c, sc) {
                let (at, value) = c.iter().copied().fold((k, 0.0), |acc, t| if fabs(t.1) > fabs(acc.1) { t } else { acc });
                let kind = if y[0] == Op::T1Adj { WeightKind::Alpha } else { WeightKind::Beta };
                let w = Witness::WeightMismatch { kind, k, value: d.weight(kind, k), other: at, other_value: value };
                return Ok(finish(Some(w), cap, k.degree() + 1, 0.0, false));
            }
        }
    }
    Ok(finish(None, cap, cap.level + 1, 0.0, false))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingAudit {
    pub order: usize,
    /// One-variable Hankel test of `omega`.
    pub hankel_pass: bool,
    /// Moment-matrix test of the embedded pair.
    pub pair_pass: bool,
    pub agree: bool,
    /// Worst relative error of `gamma_(k,l) = r^l gamma^(omega)_(k+l)`.
    pub moment_identity_error: f64,
    pub pair_verdict: TestVerdict,
}

/// Compares the order-`k` moment test of the canonical embedding with the
/// Hankel test of `omega`, and checks the moment identity on the capped
/// lattice.
pub fn embedding_equivalence_audit(e: &EmbeddingSpec, order: usize, s: &Settings) -> Result<EmbeddingAudit, TestError> {
    let d = build_embedding(e)?;
    let cap = resolve_cap(&d, s.cap)?;
    let report = moment_matrix_test(&d, order, s)?;
    let hankel_pass = hankel_test(e, order, cap.level, s.tol).is_none();
    let t = moments(&d, cap.level, cap.level)?;
    let r2 = e.ratio() * e.ratio();
    let mut worst = 0.0_f64;
    for k in Point::up_to_degree(cap.level) {
        let direct = t.at(k);
        let via = pow(r2, k.k2 as f64) * e.omega_moment(k.degree());
        worst = worst.max(fabs(direct - via) / direct.max(via));
    }
    let pair_pass = report.verdict.passed();
    Ok(EmbeddingAudit {
        order,
        hankel_pass,
        pair_pass,
        agree: hankel_pass == pair_pass,
        moment_identity_error: worst,
        pair_verdict: report.verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypo_tests::Outcome;
    use crate::shift_model::{build_axy, build_constant, build_drury_arveson, build_helton_howe};
    use alloc::vec;

    #[test]
    fn embedding_entries_commute() {
        let e = EmbeddingSpec::scaled(vec![0.4, 0.6, 0.9, 1.0], 2.0).unwrap();
        let c = entries_commute_test(&build_embedding(&e).unwrap(), &Settings::default()).unwrap();
        assert!(c.l && c.r && c.weights);
    }

    #[test]
    fn family_entries_do_not_commute() {
        let c = entries_commute_test(&build_axy(0.5, 0.6, 0.7).unwrap(), &Settings::default()).unwrap();
        assert!(!c.l && !c.r && !c.weights);
        let hh = entries_commute_test(&build_helton_howe(), &Settings::default()).unwrap();
        assert!(hh.l && hh.r && hh.weights);
    }

    #[test]
    fn quasinormal_examples() {
        assert_eq!(quasinormal_test(&build_helton_howe()).outcome, Outcome::Pass);
        assert_eq!(quasinormal_test(&build_constant(0.7, 0.3).unwrap()).outcome, Outcome::Pass);
        assert_eq!(quasinormal_test(&build_drury_arveson(4).unwrap()).outcome, Outcome::Fail);
        let s = Settings::default();
        assert_eq!(quasinormal_by_operators(&build_constant(0.7, 0.3).unwrap(), &s).unwrap().outcome, Outcome::Pass);
        assert!(quasinormal_by_operators(&build_axy(0.5, 0.6, 0.7).unwrap(), &s).unwrap().failed());
    }

    #[test]
    fn embedding_audit_agrees() {
        let s = Settings::default();
        let ones = EmbeddingSpec::new(vec![1.0], vec![1.0]).unwrap();
        for k in 1..4 {
            let a = embedding_equivalence_audit(&ones, k, &s).unwrap();
            assert!(a.agree && a.pair_pass && a.moment_identity_error < 1e-12);
        }
        let bad = EmbeddingSpec::scaled(vec![0.9, 0.5], 2.0).unwrap();
        let a = embedding_equivalence_audit(&bad, 1, &s).unwrap();
        assert!(a.agree && !a.pair_pass && !a.hankel_pass);
    }
}
