//! Elementary step chains for the two constructive sandwich rewrites:
//! `σgσ → g′` when the sandwich is linear, and `σgσ → g′σg″` when it is
//! quadratic with proper base points.

use super::{collinear_triple_among, sandwich_eval, Editor, Move, RewriteCertificate, RewriteError};
use crate::cremap::{CreMap, LinClass, LinMap, ProjPoint};
use crate::scalar::{FieldMode, Scalar};
use crate::word::{Letter, Word};

/// The pencil-normalized form of a sandwich letter: permutations `τ₁, τ₂`
/// (in the de Jonquières stabilizer `{id, y↔z}`) and the entries of
/// `N = τ₁gτ₂ = [a₁x + a₂z : b₁y + b₂z : cz]`. `None` when `σ` and `σg` do
/// not share exactly two base points in the pattern this form needs; the
/// second component reports whether `a₂b₂ ≠ 0` (the all-proper-base-points
/// condition).
pub(crate) struct PencilForm {
    pub tau1: LinMap,
    pub tau2: LinMap,
    pub n_mat: LinMap,
    pub d1: LinMap,
    pub d2: Option<LinMap>,
    pub a2b2_nonzero: bool,
}

/// Computes the normalized form for a `g` whose sandwich `σgσ` is
/// quadratic. Returns `None` when the hypothesis `a₂b₂ ≠ 0` fails (the
/// collinear/infinitely-near case); the form itself is still computable
/// then, so `pencil_form` below exposes the full data.
pub(crate) fn normalized_pencil_form(g: &LinMap, mode: FieldMode) -> Option<PencilForm> {
    let f = pencil_form(g, mode)?;
    if f.a2b2_nonzero {
        Some(f)
    } else {
        None
    }
}

pub(crate) fn pencil_form(g: &LinMap, mode: FieldMode) -> Option<PencilForm> {
    if !g.fixes_p100() {
        return None;
    }
    let p: Vec<ProjPoint> = (0..3).map(|i| ProjPoint::coordinate(mode, i)).collect();
    // Second common base point of σ and σg: a coordinate point p_i (i ≥ 1)
    // with g(p_i) again a coordinate point.
    let mut found: Option<(usize, usize)> = None;
    for i in 1..3 {
        let img = g.apply(&p[i]);
        for j in 1..3 {
            if img == p[j] {
                if found.is_some() {
                    // Both map to coordinate points: g is monomial and the
                    // sandwich is linear, not quadratic.
                    return None;
                }
                found = Some((i, j));
            }
        }
    }
    let (i, j) = found?;
    let swap = LinMap::permutation(mode, [0, 2, 1]);
    let tau2 = if i == 1 {
        LinMap::identity(mode)
    } else {
        swap.clone()
    };
    let tau1 = if j == 1 { LinMap::identity(mode) } else { swap };
    let n_mat = tau1.mul(g).mul(&tau2);
    let r = n_mat.rows();
    // Shape check: columns 0 and 1 are coordinate axes.
    if !(r[1][0].is_zero()
        && r[2][0].is_zero()
        && r[0][1].is_zero()
        && r[2][1].is_zero()
        && !r[0][0].is_zero()
        && !r[1][1].is_zero()
        && !r[2][2].is_zero())
    {
        return None;
    }
    let (a1, a2) = (r[0][0].clone(), r[0][2].clone());
    let (b1, b2) = (r[1][1].clone(), r[1][2].clone());
    let c = r[2][2].clone();
    let a2b2_nonzero = !a2.is_zero() && !b2.is_zero();
    let d1 = LinMap::diag(pick_nonzero(&a2, mode), pick_nonzero(&b2, mode), c.clone()).ok()?;
    let d2 = if a2b2_nonzero {
        let m_a = a1.checked_div(&a2).ok()?.neg();
        let m_b = b1.checked_div(&b2).ok()?.neg();
        Some(LinMap::diag(m_a, m_b, mode.one()).ok()?)
    } else {
        None
    };
    Some(PencilForm {
        tau1,
        tau2,
        n_mat,
        d1,
        d2,
        a2b2_nonzero,
    })
}

fn pick_nonzero(s: &Scalar, mode: FieldMode) -> Scalar {
    if s.is_zero() {
        mode.one()
    } else {
        s.clone()
    }
}

/// `σgσ → g′` for monomial `g = dτ`: split, slide the permutation, collapse
/// the diagonal sandwich, merge.
pub(crate) fn deg1_chain(ed: &mut Editor, pos: usize) -> Result<LinMap, RewriteError> {
    let g = ed
        .lin_at(pos + 1)
        .cloned()
        .expect("deg1 chain expects σ·lin·σ");
    let (d, tau) = match g.classify() {
        LinClass::Diagonal { d } => (d, None),
        LinClass::Permutation { tau } => (LinMap::identity(g.mode()), Some(tau)),
        LinClass::DiagonalTimesPermutation { d, tau } => (d, Some(tau)),
        LinClass::General => {
            return Err(RewriteError::HypothesisFailed {
                reason: "σgσ is linear only for monomial g".to_string(),
            })
        }
    };
    match tau {
        None => {
            // [σ, d, σ] → [d⁻¹]
            let dinv = d.inverse();
            ed.apply(
                pos,
                Move::SigmaDiag,
                vec![d.clone(), dinv.clone()],
                vec![Letter::Sigma, Letter::lin(d), Letter::Sigma],
                vec![Letter::lin(dinv.clone())],
            )?;
            Ok(dinv)
        }
        Some(tau) => {
            // [σ, g, σ] → [σ, d, τ, σ] → [σ, d, σ, τ] → [d⁻¹, τ] → [d⁻¹τ]
            ed.apply(
                pos + 1,
                Move::MergeLin,
                vec![d.clone(), tau.clone()],
                vec![Letter::lin(g.clone())],
                vec![Letter::lin(d.clone()), Letter::lin(tau.clone())],
            )?;
            ed.apply(
                pos + 2,
                Move::SigmaPerm,
                vec![tau.clone()],
                vec![Letter::lin(tau.clone()), Letter::Sigma],
                vec![Letter::Sigma, Letter::lin(tau.clone())],
            )?;
            let dinv = d.inverse();
            ed.apply(
                pos,
                Move::SigmaDiag,
                vec![d.clone(), dinv.clone()],
                vec![Letter::Sigma, Letter::lin(d), Letter::Sigma],
                vec![Letter::lin(dinv.clone())],
            )?;
            let merged = dinv.mul(&tau);
            ed.apply(
                pos,
                Move::MergeLin,
                vec![dinv.clone(), tau.clone()],
                vec![Letter::lin(dinv), Letter::lin(tau)],
                vec![Letter::lin(merged.clone())],
            )?;
            Ok(merged)
        }
    }
}

/// `σgσ → g′σg″` through the factorization `τ₁gτ₂ = d₁hd₂`: insert the
/// permutations, slide them and the diagonals through `σ`, rewrite the
/// central `σhσ` to `hσh`, and merge. Emits roughly a dozen elementary
/// steps and returns `(g′, g″)`.
pub(crate) fn deg2_chain(ed: &mut Editor, pos: usize) -> Result<(LinMap, LinMap), RewriteError> {
    let g = ed
        .lin_at(pos + 1)
        .cloned()
        .expect("deg2 chain expects σ·lin·σ");
    let mode = g.mode();
    let form = pencil_form(&g, mode).ok_or_else(|| RewriteError::HypothesisFailed {
        reason: "σ and σg do not share exactly two proper base points".to_string(),
    })?;
    if !form.a2b2_nonzero {
        let triple = collinear_triple_among(&g, mode)
            .map(|t| format!("collinear triple: {}, {}, {}", t[0], t[1], t[2]))
            .unwrap_or_else(|| "a base point is infinitely near".to_string());
        return Err(RewriteError::HypothesisFailed { reason: triple });
    }
    let PencilForm {
        tau1,
        tau2,
        n_mat,
        d1,
        d2,
        ..
    } = form;
    let d2 = d2.expect("a2b2 nonzero implies d2 exists");
    let h = LinMap::h(mode);
    debug_assert_eq!(d1.mul(&h).mul(&d2), n_mat, "factorization N = d1 h d2");
    let t1i = tau1.inverse();
    let t2i = tau2.inverse();

    // [σ, g, σ] → [σ, τ₁⁻¹, N·τ₂⁻¹, σ]
    let n_t2i = n_mat.mul(&t2i);
    ed.apply(
        pos + 1,
        Move::MergeLin,
        vec![t1i.clone(), n_t2i.clone()],
        vec![Letter::lin(g.clone())],
        vec![Letter::lin(t1i.clone()), Letter::lin(n_t2i.clone())],
    )?;
    // → [σ, τ₁⁻¹, N, τ₂⁻¹, σ]
    ed.apply(
        pos + 2,
        Move::MergeLin,
        vec![n_mat.clone(), t2i.clone()],
        vec![Letter::lin(n_t2i)],
        vec![Letter::lin(n_mat.clone()), Letter::lin(t2i.clone())],
    )?;
    // → [σ, τ₁⁻¹, d₁, h·d₂, τ₂⁻¹, σ]
    let hd2 = h.mul(&d2);
    ed.apply(
        pos + 2,
        Move::MergeLin,
        vec![d1.clone(), hd2.clone()],
        vec![Letter::lin(n_mat)],
        vec![Letter::lin(d1.clone()), Letter::lin(hd2.clone())],
    )?;
    // → [σ, τ₁⁻¹, d₁, h, d₂, τ₂⁻¹, σ]
    ed.apply(
        pos + 3,
        Move::MergeLin,
        vec![h.clone(), d2.clone()],
        vec![Letter::lin(hd2)],
        vec![Letter::lin(h.clone()), Letter::lin(d2.clone())],
    )?;
    // Slide τ₁⁻¹ left: [σ, τ₁⁻¹] → [τ₁⁻¹, σ]
    ed.apply(
        pos,
        Move::SigmaPerm,
        vec![t1i.clone()],
        vec![Letter::Sigma, Letter::lin(t1i.clone())],
        vec![Letter::lin(t1i.clone()), Letter::Sigma],
    )?;
    // Slide d₁: [σ, d₁] → [d₁⁻¹, σ]
    let d1i = d1.inverse();
    ed.apply(
        pos + 1,
        Move::SigmaDiag,
        vec![d1.clone(), d1i.clone()],
        vec![Letter::Sigma, Letter::lin(d1)],
        vec![Letter::lin(d1i.clone()), Letter::Sigma],
    )?;
    // Slide τ₂⁻¹ right: [τ₂⁻¹, σ] → [σ, τ₂⁻¹]
    ed.apply(
        pos + 5,
        Move::SigmaPerm,
        vec![t2i.clone()],
        vec![Letter::lin(t2i.clone()), Letter::Sigma],
        vec![Letter::Sigma, Letter::lin(t2i.clone())],
    )?;
    // Slide d₂ right: [d₂, σ] → [σ, d₂⁻¹]
    let d2i = d2.inverse();
    ed.apply(
        pos + 4,
        Move::SigmaDiag,
        vec![d2.clone(), d2i.clone()],
        vec![Letter::lin(d2), Letter::Sigma],
        vec![Letter::Sigma, Letter::lin(d2i.clone())],
    )?;
    // Central rewrite: [σ, h, σ] → [h, σ, h]
    ed.apply(
        pos + 2,
        Move::SigmaH,
        vec![h.clone()],
        vec![Letter::Sigma, Letter::lin(h.clone()), Letter::Sigma],
        vec![Letter::lin(h.clone()), Letter::Sigma, Letter::lin(h.clone())],
    )?;
    // Merges: [τ₁⁻¹, d₁⁻¹, h, σ, h, d₂⁻¹, τ₂⁻¹] → [g′, σ, g″]
    let t1i_d1i = t1i.mul(&d1i);
    ed.apply(
        pos,
        Move::MergeLin,
        vec![t1i.clone(), d1i.clone()],
        vec![Letter::lin(t1i), Letter::lin(d1i)],
        vec![Letter::lin(t1i_d1i.clone())],
    )?;
    let gp = t1i_d1i.mul(&h);
    ed.apply(
        pos,
        Move::MergeLin,
        vec![t1i_d1i.clone(), h.clone()],
        vec![Letter::lin(t1i_d1i), Letter::lin(h.clone())],
        vec![Letter::lin(gp.clone())],
    )?;
    let h_d2i = h.mul(&d2i);
    ed.apply(
        pos + 2,
        Move::MergeLin,
        vec![h.clone(), d2i.clone()],
        vec![Letter::lin(h), Letter::lin(d2i)],
        vec![Letter::lin(h_d2i.clone())],
    )?;
    let gpp = h_d2i.mul(&t2i);
    ed.apply(
        pos + 2,
        Move::MergeLin,
        vec![h_d2i.clone(), t2i.clone()],
        vec![Letter::lin(h_d2i), Letter::lin(t2i)],
        vec![Letter::lin(gpp.clone())],
    )?;
    Ok((gp, gpp))
}

fn sandwich_word(g: &LinMap) -> Word {
    Word::new(vec![Letter::Sigma, Letter::lin(g.clone()), Letter::Sigma])
}

/// Certificate for `σgσ → g′` (linear sandwich), built from elementary
/// moves only.
pub fn rewrite_deg1(g: &LinMap) -> Result<RewriteCertificate, RewriteError> {
    let mode = g.mode();
    if !g.fixes_p100() {
        return Err(RewriteError::HypothesisFailed {
            reason: "g must preserve the pencil through [1:0:0]".to_string(),
        });
    }
    let sgs = sandwich_eval(g, mode)?;
    if sgs.degree() != 1 {
        return Err(RewriteError::HypothesisFailed {
            reason: format!("σgσ has degree {}, expected 1", sgs.degree()),
        });
    }
    let mut ed = Editor::new(sandwich_word(g));
    let out = deg1_chain(&mut ed, 0)?;
    debug_assert_eq!(CreMap::from_lin(&out), sgs);
    Ok(RewriteCertificate {
        initial: sandwich_word(g),
        steps: ed.steps,
        final_word: ed.word,
    })
}

/// Certificate for `σgσ → g′σg″` (quadratic sandwich with proper base
/// points), built from elementary moves only.
pub fn rewrite_deg2(g: &LinMap) -> Result<RewriteCertificate, RewriteError> {
    let mode = g.mode();
    if !g.fixes_p100() {
        return Err(RewriteError::HypothesisFailed {
            reason: "g must preserve the pencil through [1:0:0]".to_string(),
        });
    }
    let sgs = sandwich_eval(g, mode)?;
    if sgs.degree() != 2 {
        return Err(RewriteError::HypothesisFailed {
            reason: format!("σgσ has degree {}, expected 2", sgs.degree()),
        });
    }
    let mut ed = Editor::new(sandwich_word(g));
    let (gp, gpp) = deg2_chain(&mut ed, 0)?;
    debug_assert_eq!(
        CreMap::from_lin(&gp)
            .compose(&CreMap::sigma(mode))
            .unwrap()
            .compose(&CreMap::from_lin(&gpp))
            .unwrap(),
        sgs
    );
    Ok(RewriteCertificate {
        initial: sandwich_word(g),
        steps: ed.steps,
        final_word: ed.word,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::verify_certificate;

    const Q: FieldMode = FieldMode::Rational;

    #[test]
    fn deg1_on_a_diagonal() {
        let g = LinMap::diag(Q.one(), Q.from_i64(2), Q.from_i64(3)).unwrap();
        let cert = rewrite_deg1(&g).unwrap();
        assert!(verify_certificate(&cert, Q).ok);
        let expect = LinMap::diag(Q.one(), Q.from_ratio(1, 2).unwrap(), Q.from_ratio(1, 3).unwrap())
            .unwrap();
        assert_eq!(
            cert.final_word,
            Word::new(vec![Letter::lin(expect)])
        );
    }

    #[test]
    fn deg1_on_the_pencil_swap() {
        // g = [x : z : y] commutes with σ.
        let g = LinMap::permutation(Q, [0, 2, 1]);
        let cert = rewrite_deg1(&g).unwrap();
        assert!(verify_certificate(&cert, Q).ok);
        assert_eq!(cert.final_word, Word::new(vec![Letter::lin(g)]));
    }

    #[test]
    fn deg1_rejects_h() {
        let h = LinMap::h(Q);
        assert!(matches!(
            rewrite_deg1(&h),
            Err(RewriteError::HypothesisFailed { .. })
        ));
    }

    #[test]
    fn deg2_on_h_gives_h_sigma_h() {
        let h = LinMap::h(Q);
        let cert = rewrite_deg2(&h).unwrap();
        assert!(verify_certificate(&cert, Q).ok);
        assert_eq!(
            cert.final_word,
            Word::new(vec![
                Letter::lin(h.clone()),
                Letter::Sigma,
                Letter::lin(h)
            ])
        );
    }

    #[test]
    fn deg2_on_translation_like_map() {
        // g = [x+z : y+z : z]: d₂ = diag(−1,−1,1), d₁ = id (up to scaling).
        let g = LinMap::new([
            [Q.one(), Q.zero(), Q.one()],
            [Q.zero(), Q.one(), Q.one()],
            [Q.zero(), Q.zero(), Q.one()],
        ])
        .unwrap();
        let cert = rewrite_deg2(&g).unwrap();
        assert!(verify_certificate(&cert, Q).ok);
        // Output has shape Lin · Sigma · Lin.
        let letters = cert.final_word.letters();
        assert_eq!(letters.len(), 3);
        assert!(matches!(letters[0], Letter::Lin(_)));
        assert!(matches!(letters[1], Letter::Sigma));
        assert!(matches!(letters[2], Letter::Lin(_)));
        // Evaluation preserved.
        assert_eq!(
            cert.final_word.eval(Q).unwrap(),
            cert.initial.eval(Q).unwrap()
        );
    }

    #[test]
    fn deg2_reports_infinitely_near_case() {
        // b₂ = 0: σgσ quadratic but with an infinitely-near base point.
        let g = LinMap::new([
            [Q.one(), Q.zero(), Q.one()],
            [Q.zero(), Q.one(), Q.zero()],
            [Q.zero(), Q.zero(), Q.one()],
        ])
        .unwrap();
        match rewrite_deg2(&g) {
            Err(RewriteError::HypothesisFailed { reason }) => {
                assert!(reason.contains("collinear"), "reason: {reason}");
            }
            other => panic!("expected hypothesis failure, got {other:?}"),
        }
    }
}
