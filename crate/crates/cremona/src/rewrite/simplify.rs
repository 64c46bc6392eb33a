//! The identity-word simplifier.
//!
//! Given a word in `σ` and pencil-preserving linear maps that composes to
//! the identity, the engine repeatedly locates the letter `g_n` under the
//! leftmost degree peak of the partial-composition sequence and discharges
//! the sandwich `σg_nσ` according to its degree: linear sandwiches collapse
//! (`deg1`), quadratic sandwiches with proper base points restructure
//! (`deg2`), and cubic sandwiches split through an auxiliary linear map
//! whose sandwich shares base points with both neighbours, reducing to two
//! quadratic discharges. The pair `(max degree, leftmost peak)` strictly
//! decreases, so the loop terminates with the empty word. Configurations
//! needing infinitely-near or irrational base points halt with a structured
//! `Stuck` report instead.

use super::chains::{deg1_chain, deg2_chain, pencil_form};
use super::{
    sandwich_eval, Editor, Move, RewriteCertificate, RewriteError, StuckReason, StuckReport,
};
use crate::cremap::{any_three_collinear, CreMap, LinMap, ProjPoint};
use crate::scalar::FieldMode;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplifyOutcome {
    Done(SimplifyReport),
    Stuck(StuckReport),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplifyReport {
    pub certificate: RewriteCertificate,
    /// `(D, n)` at the start of each outer iteration: the maximal partial
    /// degree and the index (from the right, 1-based over linear letters)
    /// of its leftmost occurrence. Strictly decreasing lexicographically.
    pub dn_trace: Vec<(u32, usize)>,
}

/// Simplifies a word evaluating to the identity down to the empty word,
/// emitting a replayable certificate of elementary moves. The seed keeps
/// the signature deterministic-by-contract; the engine itself makes only
/// canonical choices.
pub fn simplify_identity_word(
    word: &Word,
    mode: FieldMode,
    _seed: u64,
) -> Result<SimplifyOutcome, RewriteError> {
    if !word.all_de_jonquieres() {
        return Err(RewriteError::NotDeJonquieres);
    }
    let eval = word.eval(mode)?;
    if !eval.is_identity() {
        return Err(RewriteError::NotIdentity);
    }
    let mut ed = Editor::new(word.clone());
    let mut trace = Vec::new();
    match run_engine(&mut ed, mode, &mut trace) {
        Ok(()) => Ok(SimplifyOutcome::Done(SimplifyReport {
            certificate: RewriteCertificate {
                initial: word.clone(),
                steps: ed.steps,
                final_word: ed.word,
            },
            dn_trace: trace,
        })),
        Err(EngineStop::Stuck { reason, index, detail }) => {
            Ok(SimplifyOutcome::Stuck(StuckReport {
                reason,
                index,
                detail,
                partial: RewriteCertificate {
                    initial: word.clone(),
                    steps: ed.steps,
                    final_word: ed.word,
                },
            }))
        }
        Err(EngineStop::Rewrite(e)) => Err(e),
    }
}

pub(crate) enum EngineStop {
    Stuck {
        reason: StuckReason,
        index: usize,
        detail: String,
    },
    Rewrite(RewriteError),
}

impl From<RewriteError> for EngineStop {
    fn from(e: RewriteError) -> EngineStop {
        EngineStop::Rewrite(e)
    }
}

/// Reduces the editor's word (which must evaluate to the identity) to the
/// empty word.
pub(crate) fn run_engine(
    ed: &mut Editor,
    mode: FieldMode,
    trace: &mut Vec<(u32, usize)>,
) -> Result<(), EngineStop> {
    for _ in 0..10_000 {
        ed.phase += 1;
        normalize(ed)?;
        if ed.word.is_empty() {
            return Ok(());
        }
        let partials = partial_maps(&ed.word, mode)?;
        let Some((d_max, t_star, n_index)) = peak(&ed.word, &partials) else {
            // No σ letters left: a single non-identity linear letter would
            // contradict the identity evaluation.
            return Err(EngineStop::Rewrite(RewriteError::NotIdentity));
        };
        trace.push((d_max, n_index));
        let g_n = ed.lin_at(t_star).cloned().expect("peak letter is linear");
        let sgs = sandwich_eval(&g_n, mode).map_err(RewriteError::from)?;
        match sgs.degree() {
            1 => {
                deg1_chain(ed, t_star - 1)?;
            }
            2 => {
                let form = pencil_form(&g_n, mode);
                match form {
                    Some(f) if f.a2b2_nonzero => {
                        deg2_chain(ed, t_star - 1)?;
                    }
                    _ => {
                        return Err(EngineStop::Stuck {
                            reason: StuckReason::InfinitelyNearBasePoint,
                            index: n_index,
                            detail: format!(
                                "quadratic sandwich at partial index {n_index} has a base point \
                                 infinitely near a coordinate point (a2*b2 = 0)"
                            ),
                        });
                    }
                }
            }
            3 => {
                split_cubic_sandwich(ed, mode, t_star, n_index, &partials)?;
            }
            d => {
                return Err(EngineStop::Rewrite(RewriteError::HypothesisFailed {
                    reason: format!("sandwich degree {d} out of range for pencil words"),
                }));
            }
        }
    }
    Err(EngineStop::Rewrite(RewriteError::GenericityFailure {
        reason: "iteration limit exceeded".to_string(),
    }))
}

/// Merges adjacent linear letters, drops identities, cancels `σσ`.
fn normalize(ed: &mut Editor) -> Result<(), RewriteError> {
    'outer: loop {
        let letters = ed.word.letters();
        for i in 0..letters.len() {
            match (&letters[i], letters.get(i + 1)) {
                (Letter::Lin(a), Some(Letter::Lin(b))) => {
                    let (a, b) = (a.clone(), b.clone());
                    let c = a.mul(&b);
                    ed.apply(
                        i,
                        Move::MergeLin,
                        vec![a.clone(), b.clone()],
                        vec![Letter::lin(a), Letter::lin(b)],
                        vec![Letter::lin(c)],
                    )?;
                    continue 'outer;
                }
                (Letter::Sigma, Some(Letter::Sigma)) => {
                    ed.apply(
                        i,
                        Move::SigmaSigma,
                        vec![],
                        vec![Letter::Sigma, Letter::Sigma],
                        vec![],
                    )?;
                    continue 'outer;
                }
                (Letter::Lin(a), _) if a.is_identity() => {
                    let a = a.clone();
                    ed.apply(i, Move::MergeLin, vec![a.clone()], vec![Letter::lin(a)], vec![])?;
                    continue 'outer;
                }
                _ => {}
            }
        }
        return Ok(());
    }
}

/// Partial compositions from the right: `out[j] = eval(word[j..])`, with
/// `out[len]` the identity.
fn partial_maps(word: &Word, mode: FieldMode) -> Result<Vec<CreMap>, RewriteError> {
    let n = word.len();
    let mut out = vec![CreMap::identity(mode); n + 1];
    for j in (0..n).rev() {
        let f = match &word.letters()[j] {
            Letter::Sigma => CreMap::sigma(mode),
            Letter::Lin(m) => CreMap::from_lin(m),
        };
        out[j] = f.compose(&out[j + 1]).map_err(RewriteError::from)?;
    }
    Ok(out)
}

/// The leftmost maximal-degree linear letter that is flanked by `σ` on both
/// sides: returns `(D, position, index-from-the-right)`.
fn peak(word: &Word, partials: &[CreMap]) -> Option<(u32, usize, usize)> {
    let letters = word.letters();
    let mut best: Option<(u32, usize)> = None;
    for (t, letter) in letters.iter().enumerate() {
        if !matches!(letter, Letter::Lin(_)) {
            continue;
        }
        let d = partials[t + 1].degree();
        match best {
            Some((bd, _)) if bd >= d => {}
            _ => best = Some((d, t)),
        }
    }
    let (d, t) = best?;
    if d == 1 {
        return None;
    }
    // Interior by the identity evaluation: a peak at the outer ends would
    // force a non-identity evaluation.
    debug_assert!(t > 0 && t + 1 < letters.len());
    debug_assert!(matches!(letters[t - 1], Letter::Sigma));
    debug_assert!(matches!(letters[t + 1], Letter::Sigma));
    let n_index = letters[t..]
        .iter()
        .filter(|l| matches!(l, Letter::Lin(_)))
        .count();
    Some((d, t, n_index))
}

/// Case of a cubic sandwich `σg_nσ`: choose a linear `g′` whose sandwich
/// shares base points with both neighbours (`σg′` based at `[1:0:0]`, a
/// simple base point `p_i` of the current system among the coordinate
/// points, and a simple base point `q` of `σg_n`), split
/// `g_n = (g_n g′⁻¹)·g′`, insert `σσ`, and discharge the two quadratic
/// sandwiches.
fn split_cubic_sandwich(
    ed: &mut Editor,
    mode: FieldMode,
    t_star: usize,
    n_index: usize,
    partials: &[CreMap],
) -> Result<(), EngineStop> {
    let g_n = ed.lin_at(t_star).cloned().expect("cubic peak letter");
    let lambda_n = &partials[t_star + 1];
    let p0 = ProjPoint::coordinate(mode, 0);
    let p = [
        ProjPoint::coordinate(mode, 1),
        ProjPoint::coordinate(mode, 2),
    ];
    // Base points of σ∘g_n besides [1:0:0], via the base-point solver.
    let sg = CreMap::sigma(mode)
        .compose(&CreMap::from_lin(&g_n))
        .map_err(RewriteError::from)?;
    let bps = match sg.proper_base_points() {
        Ok(b) => b,
        Err(crate::cremap::MapError::IrrationalBasePoint) => {
            return Err(EngineStop::Stuck {
                reason: StuckReason::IrrationalBasePoint,
                index: n_index,
                detail: format!(
                    "base points of the quadratic σg at partial index {n_index} live in an \
                     extension field"
                ),
            });
        }
        Err(e) => return Err(EngineStop::Rewrite(e.into())),
    };
    let qs: Vec<ProjPoint> = bps.into_iter().filter(|x| *x != p0).collect();
    if qs.len() != 2 {
        return Err(EngineStop::Stuck {
            reason: StuckReason::InfinitelyNearBasePoint,
            index: n_index,
            detail: format!(
                "σg at partial index {n_index} has {} proper base points besides [1:0:0], \
                 expected 2",
                qs.len()
            ),
        });
    }
    // Simple base points of the current system among the candidates.
    let mult = |pt: &ProjPoint| lambda_n.multiplicity_at(pt);
    let mut attempts: Vec<(usize, usize)> = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            attempts.push((i, j));
        }
    }
    let mut last_reason = String::new();
    for (i, j) in attempts {
        if mult(&p[i]) != 1 || mult(&qs[j]) != 1 {
            last_reason = format!(
                "multiplicities at candidate points are not 1 (p{}: {}, q{}: {})",
                i + 1,
                mult(&p[i]),
                j + 1,
                mult(&qs[j])
            );
            continue;
        }
        // Non-collinearity demanded by the two quadratic discharges:
        // no three of {p0, p1, p2, q_j} and none of {p0, p_i, q_1, q_2}.
        let quad1 = [p0.clone(), p[0].clone(), p[1].clone(), qs[j].clone()];
        let quad2 = [p0.clone(), p[i].clone(), qs[0].clone(), qs[1].clone()];
        if any_three_collinear(&quad1) || any_three_collinear(&quad2) {
            last_reason = "required point quadruples contain a collinear triple".to_string();
            continue;
        }
        // g′⁻¹ maps the coordinate triangle onto (p0, p_i, q_j).
        let c = match LinMap::from_columns(&p0, &p[i], &qs[j]) {
            Ok(c) => c,
            Err(_) => {
                last_reason = "auxiliary points are collinear".to_string();
                continue;
            }
        };
        let g_prime = c.inverse();
        let a = g_n.mul(&g_prime.inverse());
        // Both new sandwiches must be discharged without infinitely-near
        // points; check before editing.
        let ok_a = sandwich_dischargeable(&a, mode);
        let ok_g = sandwich_dischargeable(&g_prime, mode);
        if !(ok_a && ok_g) {
            last_reason = "auxiliary sandwich hypotheses failed".to_string();
            continue;
        }
        // Split g_n = a · g′ and insert σσ between them.
        ed.apply(
            t_star,
            Move::MergeLin,
            vec![a.clone(), g_prime.clone()],
            vec![Letter::lin(g_n.clone())],
            vec![Letter::lin(a.clone()), Letter::lin(g_prime.clone())],
        )
        .map_err(EngineStop::from)?;
        ed.apply(
            t_star + 1,
            Move::SigmaSigma,
            vec![],
            vec![],
            vec![Letter::Sigma, Letter::Sigma],
        )
        .map_err(EngineStop::from)?;
        // Discharge [σ, a, σ] at t*−1 and [σ, g′, σ] at t*+2.
        discharge(ed, mode, t_star - 1)?;
        // The first discharge may change length left of t*+2 only when it
        // was linear (length −2); recompute the second sandwich position.
        let shift = match sandwich_eval(&a, mode).map_err(RewriteError::from)?.degree() {
            1 => 2,
            _ => 0,
        };
        discharge(ed, mode, t_star + 2 - shift)?;
        return Ok(());
    }
    Err(EngineStop::Stuck {
        reason: StuckReason::InfinitelyNearBasePoint,
        index: n_index,
        detail: format!("no admissible auxiliary map at partial index {n_index}: {last_reason}"),
    })
}

/// Whether `σgσ` reduces by the linear or proper-quadratic chains.
fn sandwich_dischargeable(g: &LinMap, mode: FieldMode) -> bool {
    match sandwich_eval(g, mode).map(|m| m.degree()) {
        Ok(1) => true,
        Ok(2) => pencil_form(g, mode).map(|f| f.a2b2_nonzero).unwrap_or(false),
        _ => false,
    }
}

fn discharge(ed: &mut Editor, mode: FieldMode, pos: usize) -> Result<(), EngineStop> {
    let g = ed.lin_at(pos + 1).cloned().expect("sandwich letter");
    match sandwich_eval(&g, mode).map_err(RewriteError::from)?.degree() {
        1 => {
            deg1_chain(ed, pos)?;
            Ok(())
        }
        2 => {
            deg2_chain(ed, pos)?;
            Ok(())
        }
        d => Err(EngineStop::Rewrite(RewriteError::HypothesisFailed {
            reason: format!("unexpected sandwich degree {d} during discharge"),
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::verify_certificate;

    const Q: FieldMode = FieldMode::Rational;

    fn lin(m: LinMap) -> Letter {
        Letter::lin(m)
    }

    #[test]
    fn sigma_sigma_simplifies_in_one_move() {
        let w = Word::new(vec![Letter::Sigma, Letter::Sigma]);
        match simplify_identity_word(&w, Q, 0).unwrap() {
            SimplifyOutcome::Done(rep) => {
                assert!(rep.certificate.final_word.is_empty());
                assert_eq!(rep.certificate.steps.len(), 1);
                assert_eq!(rep.certificate.steps[0].mv, Move::SigmaSigma);
                assert!(verify_certificate(&rep.certificate, Q).ok);
            }
            other => panic!("expected success, got {other:?}"),
        }
    }

    #[test]
    fn relation_five_word_simplifies() {
        let h = LinMap::h(Q);
        let w = Word::new(vec![
            lin(h.clone()),
            Letter::Sigma,
            lin(h.clone()),
            Letter::Sigma,
            lin(h),
            Letter::Sigma,
        ]);
        match simplify_identity_word(&w, Q, 0).unwrap() {
            SimplifyOutcome::Done(rep) => {
                assert!(rep.certificate.final_word.is_empty());
                assert!(verify_certificate(&rep.certificate, Q).ok);
                // (D, n) strictly decreases.
                for pair in rep.dn_trace.windows(2) {
                    assert!(pair[1] < pair[0], "trace not decreasing: {:?}", rep.dn_trace);
                }
            }
            other => panic!("expected success, got {other:?}"),
        }
    }

    #[test]
    fn relation_four_word_simplifies() {
        let d = LinMap::diag(Q.from_i64(2), Q.from_i64(7), Q.one()).unwrap();
        let w = Word::new(vec![
            Letter::Sigma,
            lin(d.clone()),
            Letter::Sigma,
            lin(d),
        ]);
        match simplify_identity_word(&w, Q, 0).unwrap() {
            SimplifyOutcome::Done(rep) => {
                assert!(rep.certificate.final_word.is_empty());
                assert!(verify_certificate(&rep.certificate, Q).ok);
            }
            other => panic!("expected success, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_identity_words() {
        let w = Word::new(vec![Letter::Sigma]);
        assert!(matches!(
            simplify_identity_word(&w, Q, 0),
            Err(RewriteError::NotIdentity)
        ));
    }

    #[test]
    fn rejects_non_pencil_letters() {
        // [z : y : x] moves [1:0:0].
        let g = LinMap::permutation(Q, [2, 1, 0]);
        let w = Word::new(vec![lin(g.clone()), lin(g)]);
        assert!(matches!(
            simplify_identity_word(&w, Q, 0),
            Err(RewriteError::NotDeJonquieres)
        ));
    }
}
