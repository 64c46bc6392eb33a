//! The square relation `σg₂σg₁ = g₄σg₃σ` for cubic diagonals, discharged by
//! inserting a mediating quadratic involution whose base points are shared
//! with the adjacent edges, then reducing what remains through the
//! identity-word engine.

use super::simplify::{run_engine, EngineStop};
use super::{
    no_three_collinear_with_triangle, Editor, Move, RewriteCertificate, RewriteError,
};
use crate::cremap::{any_three_collinear, CreMap, LinMap, ProjPoint};
use crate::scalar::FieldMode;
use crate::word::{Letter, Word};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Conjugated involution `[α, σ, α⁻¹]` where `α` sends the coordinate
/// points to `p, q, r`; evaluates to a quadratic involution with base
/// points exactly `{p, q, r}`.
pub fn make_quadratic_with_base_points(
    p: &ProjPoint,
    q: &ProjPoint,
    r: &ProjPoint,
) -> Result<Word, RewriteError> {
    if p == q || p == r || q == r {
        return Err(RewriteError::CollinearBasePoints);
    }
    let alpha = LinMap::from_columns(p, q, r).map_err(|_| RewriteError::CollinearBasePoints)?;
    Ok(Word::new(vec![
        Letter::lin(alpha.clone()),
        Letter::Sigma,
        Letter::lin(alpha.inverse()),
    ]))
}

/// Validates the square hypotheses: all letters pencil-preserving, both
/// sides evaluate equally with degree 3, and for each of `σg₁`, `σg₂` no
/// three base points taken together with the coordinate triangle are
/// collinear.
pub(crate) fn check_square_hypotheses(
    g1: &LinMap,
    g2: &LinMap,
    g3: &LinMap,
    g4: &LinMap,
    mode: FieldMode,
) -> Result<CreMap, RewriteError> {
    for (name, g) in [("g1", g1), ("g2", g2), ("g3", g3), ("g4", g4)] {
        if !g.fixes_p100() {
            return Err(RewriteError::HypothesisFailed {
                reason: format!("{name} must preserve the pencil through [1:0:0]"),
            });
        }
    }
    let s = CreMap::sigma(mode);
    let aside = s
        .compose(&CreMap::from_lin(g2))?
        .compose(&s)?
        .compose(&CreMap::from_lin(g1))?;
    let bside = CreMap::from_lin(g4)
        .compose(&s)?
        .compose(&CreMap::from_lin(g3))?
        .compose(&s)?;
    if aside != bside {
        return Err(RewriteError::HypothesisFailed {
            reason: "the two sides do not evaluate to the same map".to_string(),
        });
    }
    if aside.degree() != 3 {
        return Err(RewriteError::HypothesisFailed {
            reason: format!("common map has degree {}, expected 3", aside.degree()),
        });
    }
    for (name, g) in [("g1", g1), ("g2", g2)] {
        if !no_three_collinear_with_triangle(g, mode) {
            return Err(RewriteError::HypothesisFailed {
                reason: format!(
                    "three of the base points of σ{name} and σ are collinear"
                ),
            });
        }
    }
    Ok(aside)
}

/// Certificate transforming `[σ, g₂, σ, g₁]` into `[g₄, σ, g₃, σ]`.
///
/// Construction: pick a mediating quadratic with base points `[1:0:0]`, one
/// base point of `σg₁` and one of `σ` (resampled over the admissible
/// choices with the seed fixing the order), insert it against its own
/// inverse next to the right edge, reduce that triangle explicitly, and
/// discharge the remaining identity word with the engine.
pub fn rewrite_square(
    g1: &LinMap,
    g2: &LinMap,
    g3: &LinMap,
    g4: &LinMap,
    seed: u64,
) -> Result<RewriteCertificate, RewriteError> {
    let mode = g1.mode();
    check_square_hypotheses(g1, g2, g3, g4, mode)?;
    let a_word = Word::new(vec![
        Letter::Sigma,
        Letter::lin(g2.clone()),
        Letter::Sigma,
        Letter::lin(g1.clone()),
    ]);
    let b_word = Word::new(vec![
        Letter::lin(g4.clone()),
        Letter::Sigma,
        Letter::lin(g3.clone()),
        Letter::Sigma,
    ]);
    let p0 = ProjPoint::coordinate(mode, 0);
    let g1inv = g1.inverse();
    let bp_sg1 = [
        g1inv.apply(&ProjPoint::coordinate(mode, 1)),
        g1inv.apply(&ProjPoint::coordinate(mode, 2)),
    ];
    let sigma_bp = [
        ProjPoint::coordinate(mode, 1),
        ProjPoint::coordinate(mode, 2),
    ];
    let mut choices: Vec<(usize, usize)> = vec![(0, 0), (0, 1), (1, 0), (1, 1)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    choices.shuffle(&mut rng);
    let mut last = String::from("no admissible mediating base points");
    for (ia, ib) in choices {
        let a_pt = &bp_sg1[ia];
        let b_pt = &sigma_bp[ib];
        if a_pt == b_pt || *a_pt == p0 {
            continue;
        }
        if any_three_collinear(&[p0.clone(), a_pt.clone(), b_pt.clone()]) {
            last = "mediating base points are collinear".to_string();
            continue;
        }
        match try_mediation(&a_word, &b_word, a_pt, b_pt, mode) {
            Ok(cert) => return Ok(cert),
            Err(e) => {
                last = e;
            }
        }
    }
    Err(RewriteError::GenericityFailure { reason: last })
}

/// One mediation attempt; errors return the reason so the caller can
/// resample.
fn try_mediation(
    a_word: &Word,
    b_word: &Word,
    a_pt: &ProjPoint,
    b_pt: &ProjPoint,
    mode: FieldMode,
) -> Result<RewriteCertificate, String> {
    let p0 = ProjPoint::coordinate(mode, 0);
    let tau = make_quadratic_with_base_points(&p0, a_pt, b_pt).map_err(|e| e.to_string())?;
    let alpha = match &tau.letters()[0] {
        Letter::Lin(m) => m.clone(),
        _ => unreachable!(),
    };
    let alpha_inv = alpha.inverse();
    let mut ed = Editor::new(a_word.clone());
    // Insert τ·τ between the two edges (after position 2 = [σ, g₂, HERE σ, g₁]):
    // [] → [α, α⁻¹] → [α, σ, σ, α⁻¹] → [α, σ, id, σ, α⁻¹] → full τ·τ.
    let ins = 2;
    let id = LinMap::identity(mode);
    let step = |ed: &mut Editor, pos, mv, params, before: Vec<Letter>, after: Vec<Letter>| {
        ed.apply(pos, mv, params, before, after).map_err(|e| e.to_string())
    };
    step(&mut ed, ins, Move::MergeLin, vec![id.clone()], vec![], vec![Letter::lin(id.clone())])?;
    step(
        &mut ed,
        ins,
        Move::MergeLin,
        vec![alpha.clone(), alpha_inv.clone()],
        vec![Letter::lin(id.clone())],
        vec![Letter::lin(alpha.clone()), Letter::lin(alpha_inv.clone())],
    )?;
    step(
        &mut ed,
        ins + 1,
        Move::SigmaSigma,
        vec![],
        vec![],
        vec![Letter::Sigma, Letter::Sigma],
    )?;
    step(
        &mut ed,
        ins + 2,
        Move::MergeLin,
        vec![id.clone()],
        vec![],
        vec![Letter::lin(id.clone())],
    )?;
    step(
        &mut ed,
        ins + 2,
        Move::MergeLin,
        vec![alpha_inv.clone(), alpha.clone()],
        vec![Letter::lin(id.clone())],
        vec![Letter::lin(alpha_inv.clone()), Letter::lin(alpha.clone())],
    )?;
    // Word now: [σ, g₂, α, σ, α⁻¹, α, σ, α⁻¹, σ, g₁].
    // Reduce the right triangle [α, σ, α⁻¹, σ, g₁]: its inner sandwich
    // [σ, α⁻¹, σ] has degree ≤ 2 because α⁻¹ sends exactly one of the
    // coordinate base points of σ into the coordinate triangle.
    let sandwich_pos = ins + 4;
    let g = match ed.lin_at(sandwich_pos + 1) {
        Some(m) => m.clone(),
        None => return Err("mediation bookkeeping error".to_string()),
    };
    let deg = super::sandwich_eval(&g, mode)
        .map_err(|e| e.to_string())?
        .degree();
    match deg {
        1 => {
            super::chains::deg1_chain(&mut ed, sandwich_pos).map_err(|e| e.to_string())?;
        }
        2 => {
            super::chains::deg2_chain(&mut ed, sandwich_pos).map_err(|e| e.to_string())?;
        }
        d => return Err(format!("mediating sandwich has degree {d}")),
    }
    // Finish: prepend B·B⁻¹ and reduce the suffix B⁻¹·(current) to empty
    // with the engine; what stays is exactly B.
    let b_letters = b_word.letters().to_vec();
    let b_inv = b_word.inverse();
    prepend_with_inverse(&mut ed, &b_letters, mode).map_err(|e| e.to_string())?;
    let suffix_start = b_letters.len();
    let suffix = Word::new(ed.word.letters()[suffix_start..].to_vec());
    debug_assert!(suffix
        .eval(mode)
        .map(|m| m.is_identity())
        .unwrap_or(false));
    debug_assert_eq!(
        &suffix.letters()[..b_inv.len()],
        b_inv.letters(),
        "suffix starts with the inverse of the target"
    );
    let mut sub = Editor::new(suffix);
    sub.phase = ed.phase;
    let mut trace = Vec::new();
    match run_engine(&mut sub, mode, &mut trace) {
        Ok(()) => {}
        Err(EngineStop::Stuck { reason, detail, .. }) => {
            return Err(format!("engine stuck ({reason:?}): {detail}"))
        }
        Err(EngineStop::Rewrite(e)) => return Err(e.to_string()),
    }
    for mut s in sub.steps {
        s.position += suffix_start;
        ed.word = super::apply_move(&ed.word, &s).map_err(|e| e.to_string())?;
        ed.steps.push(s);
    }
    if ed.word != *b_word {
        return Err("reduction did not reach the target word".to_string());
    }
    Ok(RewriteCertificate {
        initial: a_word.clone(),
        steps: ed.steps,
        final_word: ed.word,
    })
}

/// Prepends `B · B⁻¹` at the front of the word by elementary insertions.
fn prepend_with_inverse(
    ed: &mut Editor,
    b: &[Letter],
    mode: FieldMode,
) -> Result<(), RewriteError> {
    // Build pairs outside-in: for letters b₀ b₁ … b_k, insert b₀·b₀⁻¹ at
    // the front, then b₁·b₁⁻¹ between them, and so on; after all insertions
    // the word starts with b₀…b_k b_k⁻¹…b₀⁻¹.
    let id = LinMap::identity(mode);
    for (depth, letter) in b.iter().enumerate() {
        match letter {
            Letter::Sigma => {
                ed.apply(
                    depth,
                    Move::SigmaSigma,
                    vec![],
                    vec![],
                    vec![Letter::Sigma, Letter::Sigma],
                )?;
            }
            Letter::Lin(m) => {
                ed.apply(
                    depth,
                    Move::MergeLin,
                    vec![id.clone()],
                    vec![],
                    vec![Letter::lin(id.clone())],
                )?;
                ed.apply(
                    depth,
                    Move::MergeLin,
                    vec![m.clone(), m.inverse()],
                    vec![Letter::lin(id.clone())],
                    vec![Letter::lin(m.clone()), Letter::lin(m.inverse())],
                )?;
            }
        }
    }
    Ok(())
}
