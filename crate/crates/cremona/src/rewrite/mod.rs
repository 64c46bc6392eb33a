//! Rewriting of generator words by the defining relations, with replayable
//! certificates.
//!
//! The move catalogue has five elementary families (the relations) plus
//! three lemma-level macros accepted by the verifier:
//!
//! * `M1-merge-lin`  — merge/split adjacent linear letters, insert/drop the
//!   identity (products in PGL₃),
//! * `M2-sigma-sigma` — `σσ ↔ ε`,
//! * `M3-sigma-perm` — `στ ↔ τσ` for coordinate permutations `τ`,
//! * `M4-sigma-diag` — `σd ↔ d⁻¹σ` and `σdσ ↔ d⁻¹` for diagonal `d`,
//! * `M5-sigma-h`    — `σhσ ↔ hσh` for `h = [z−x : z−y : z]`,
//! * `L-deg1`, `L-deg2`, `L-square-triangle` — whole-lemma rewrites checked
//!   semantically.
//!
//! Every constructive rewrite in this crate emits only the elementary
//! families; the macros exist so third-party certificates using them still
//! verify.

mod chains;
mod simplify;
mod square;

pub use chains::{rewrite_deg1, rewrite_deg2};
pub use simplify::{simplify_identity_word, SimplifyOutcome, SimplifyReport};
pub use square::{make_quadratic_with_base_points, rewrite_square};

use crate::cremap::{any_three_collinear, CreMap, LinMap, MapError, ProjPoint};
use crate::scalar::FieldMode;
use crate::word::{Letter, Word};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("pattern mismatch at position {position}: {reason}")]
    PatternMismatch { position: usize, reason: String },
    #[error("hypothesis failed: {reason}")]
    HypothesisFailed { reason: String },
    #[error("genericity failure: {reason}")]
    GenericityFailure { reason: String },
    #[error("word does not evaluate to the identity")]
    NotIdentity,
    #[error("a linear letter does not preserve the pencil through [1:0:0]")]
    NotDeJonquieres,
    #[error("collinear base points")]
    CollinearBasePoints,
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Why the simplifier halted without finishing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StuckReason {
    /// Case `a₂b₂ = 0`: the quadratic sandwich at the peak has a base point
    /// infinitely near a coordinate point, which this toolkit does not
    /// resolve.
    InfinitelyNearBasePoint,
    /// A required base point exists only over an extension field.
    IrrationalBasePoint,
    /// No admissible choice satisfied the verified genericity conditions.
    GenericityFailure,
}

/// Structured halt report: the partial-composition index where progress
/// stopped (1 = rightmost linear letter, matching the degree sequence) and
/// the certificate of the steps performed so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StuckReport {
    pub reason: StuckReason,
    pub index: usize,
    pub detail: String,
    pub partial: RewriteCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    #[serde(rename = "M1-merge-lin")]
    MergeLin,
    #[serde(rename = "M2-sigma-sigma")]
    SigmaSigma,
    #[serde(rename = "M3-sigma-perm")]
    SigmaPerm,
    #[serde(rename = "M4-sigma-diag")]
    SigmaDiag,
    #[serde(rename = "M5-sigma-h")]
    SigmaH,
    #[serde(rename = "L-deg1")]
    Deg1,
    #[serde(rename = "L-deg2")]
    Deg2,
    #[serde(rename = "L-square-triangle")]
    SquareTriangle,
}

/// One rewrite: replace `before` by `after` at `position`. The `params`
/// carry the matrices the move consumes or produces (factors for merges,
/// the diagonal for `M4`, the lemma factorizations for the macros). The
/// `phase` tags the simplifier iteration that emitted the step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub position: usize,
    #[serde(rename = "move")]
    pub mv: Move,
    pub params: Vec<LinMap>,
    pub before: Word,
    pub after: Word,
    #[serde(default)]
    pub phase: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteCertificate {
    pub initial: Word,
    pub steps: Vec<RewriteStep>,
    #[serde(rename = "final")]
    pub final_word: Word,
}

impl RewriteCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization")
    }

    pub fn from_json(s: &str) -> Result<RewriteCertificate, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Applies a single move after validating the pattern and side conditions.
pub fn apply_move(word: &Word, step: &RewriteStep) -> Result<Word, RewriteError> {
    let pos = step.position;
    let blen = step.before.len();
    if pos + blen > word.len() {
        return Err(RewriteError::PatternMismatch {
            position: pos,
            reason: format!("span {}..{} exceeds word length {}", pos, pos + blen, word.len()),
        });
    }
    if word.letters()[pos..pos + blen] != *step.before.letters() {
        return Err(RewriteError::PatternMismatch {
            position: pos,
            reason: "before-span does not match the word".to_string(),
        });
    }
    check_move_instance(step)?;
    let mut letters = word.letters().to_vec();
    letters.splice(pos..pos + blen, step.after.letters().iter().cloned());
    Ok(Word::new(letters))
}

fn letters_mode(words: &[&Word]) -> FieldMode {
    for w in words {
        for l in w.letters() {
            if let Letter::Lin(m) = l {
                return m.mode();
            }
        }
    }
    FieldMode::Rational
}

fn lin_of(l: &Letter) -> Option<&LinMap> {
    match l {
        Letter::Lin(m) => Some(m),
        Letter::Sigma => None,
    }
}

fn mismatch(step: &RewriteStep, reason: &str) -> RewriteError {
    RewriteError::PatternMismatch {
        position: step.position,
        reason: format!("{:?}: {reason}", step.mv),
    }
}

/// Validates that `before → after` is an instance of the claimed move.
pub fn check_move_instance(step: &RewriteStep) -> Result<(), RewriteError> {
    let b = step.before.letters();
    let a = step.after.letters();
    let mode = letters_mode(&[&step.before, &step.after]);
    let fail = |r: &str| Err(mismatch(step, r));
    match step.mv {
        Move::MergeLin => {
            // Shapes: [a,b]↔[ab], [id]↔[], plus their reverses.
            let ok = match (b, a) {
                ([Letter::Lin(x), Letter::Lin(y)], [Letter::Lin(z)])
                | ([Letter::Lin(z)], [Letter::Lin(x), Letter::Lin(y)]) => x.mul(y) == *z,
                ([Letter::Lin(x)], []) | ([], [Letter::Lin(x)]) => x.is_identity(),
                _ => false,
            };
            if ok {
                Ok(())
            } else {
                fail("not a product/identity instance in PGL₃")
            }
        }
        Move::SigmaSigma => match (b, a) {
            ([Letter::Sigma, Letter::Sigma], []) | ([], [Letter::Sigma, Letter::Sigma]) => Ok(()),
            _ => fail("shape must be σσ ↔ ε"),
        },
        Move::SigmaPerm => {
            let ok = match (b, a) {
                ([Letter::Sigma, Letter::Lin(t)], [Letter::Lin(u), Letter::Sigma])
                | ([Letter::Lin(t), Letter::Sigma], [Letter::Sigma, Letter::Lin(u)]) => {
                    t == u && t.is_permutation()
                }
                _ => false,
            };
            if ok {
                Ok(())
            } else {
                fail("requires a coordinate permutation sliding through σ")
            }
        }
        Move::SigmaDiag => {
            let slide = |d: &LinMap, e: &LinMap| d.is_diagonal() && *e == d.inverse();
            let ok = match (b, a) {
                ([Letter::Sigma, Letter::Lin(d)], [Letter::Lin(e), Letter::Sigma])
                | ([Letter::Lin(d), Letter::Sigma], [Letter::Sigma, Letter::Lin(e)]) => {
                    slide(d, e)
                }
                ([Letter::Sigma, Letter::Lin(d), Letter::Sigma], [Letter::Lin(e)])
                | ([Letter::Lin(e)], [Letter::Sigma, Letter::Lin(d), Letter::Sigma]) => {
                    slide(d, e)
                }
                _ => false,
            };
            if ok {
                Ok(())
            } else {
                fail("requires a diagonal map and its inverse")
            }
        }
        Move::SigmaH => {
            let h = LinMap::h(mode);
            let ok = match (b, a) {
                (
                    [Letter::Sigma, Letter::Lin(x), Letter::Sigma],
                    [Letter::Lin(y), Letter::Sigma, Letter::Lin(z)],
                )
                | (
                    [Letter::Lin(y), Letter::Sigma, Letter::Lin(z)],
                    [Letter::Sigma, Letter::Lin(x), Letter::Sigma],
                ) => *x == h && *y == h && *z == h,
                _ => false,
            };
            if ok {
                Ok(())
            } else {
                fail("requires the specific involution h = [z-x : z-y : z]")
            }
        }
        Move::Deg1 => {
            let (g, gp) = match (b, a) {
                ([Letter::Sigma, Letter::Lin(g), Letter::Sigma], [Letter::Lin(gp)])
                | ([Letter::Lin(gp)], [Letter::Sigma, Letter::Lin(g), Letter::Sigma]) => (g, gp),
                _ => return fail("shape must be σgσ ↔ g′"),
            };
            if !g.fixes_p100() {
                return fail("g must fix [1:0:0]");
            }
            if !g.is_monomial() {
                return fail("σgσ is linear only for monomial g");
            }
            let sgs = sandwich_eval(g, mode)?;
            match sgs.to_lin() {
                Some(m) if m == *gp => Ok(()),
                _ => fail("g′ must equal σgσ"),
            }
        }
        Move::Deg2 => {
            let (g, g1, g2) = match (b, a) {
                (
                    [Letter::Sigma, Letter::Lin(g), Letter::Sigma],
                    [Letter::Lin(g1), Letter::Sigma, Letter::Lin(g2)],
                )
                | (
                    [Letter::Lin(g1), Letter::Sigma, Letter::Lin(g2)],
                    [Letter::Sigma, Letter::Lin(g), Letter::Sigma],
                ) => (g, g1, g2),
                _ => return fail("shape must be σgσ ↔ g′σg″"),
            };
            if !g.fixes_p100() || !g1.fixes_p100() || !g2.fixes_p100() {
                return fail("all linear letters must fix [1:0:0]");
            }
            let sgs = sandwich_eval(g, mode)?;
            if sgs.degree() != 2 {
                return fail("σgσ must be quadratic");
            }
            if chains::normalized_pencil_form(g, mode).is_none() {
                return fail("base points of σ and σg admit a collinear triple");
            }
            let rhs = CreMap::from_lin(g1)
                .compose(&CreMap::sigma(mode))?
                .compose(&CreMap::from_lin(g2))?;
            if rhs == sgs {
                Ok(())
            } else {
                fail("both sides must evaluate equally")
            }
        }
        Move::SquareTriangle => {
            let (aside, bside) = match (b, a) {
                (
                    [Letter::Sigma, Letter::Lin(g2), Letter::Sigma, Letter::Lin(g1)],
                    [Letter::Lin(g4), Letter::Sigma, Letter::Lin(g3), Letter::Sigma],
                ) => ((g1.clone(), g2.clone()), (g3.clone(), g4.clone())),
                (
                    [Letter::Lin(g4), Letter::Sigma, Letter::Lin(g3), Letter::Sigma],
                    [Letter::Sigma, Letter::Lin(g2), Letter::Sigma, Letter::Lin(g1)],
                ) => ((g1.clone(), g2.clone()), (g3.clone(), g4.clone())),
                _ => return fail("shape must be σg₂σg₁ ↔ g₄σg₃σ"),
            };
            let (g1, g2) = aside;
            let (g3, g4) = bside;
            square::check_square_hypotheses(&g1, &g2, &g3, &g4, mode)
                .map_err(|e| mismatch(step, &e.to_string()))?;
            Ok(())
        }
    }
}

/// `σ ∘ g ∘ σ` as a map.
pub(crate) fn sandwich_eval(g: &LinMap, mode: FieldMode) -> Result<CreMap, MapError> {
    let s = CreMap::sigma(mode);
    s.compose(&CreMap::from_lin(g))?.compose(&s)
}

/// Outcome of replaying a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    /// First failure, as (step index, diagnostic); `None` when `ok`.
    pub failure: Option<(usize, String)>,
}

/// Replays a certificate: every step must pattern-match, be a valid move
/// instance, and preserve the evaluation of the replaced span; the final
/// word must match. Failures are diagnostics, not errors.
pub fn verify_certificate(cert: &RewriteCertificate, mode: FieldMode) -> VerifyReport {
    let mut word = cert.initial.clone();
    for (i, step) in cert.steps.iter().enumerate() {
        // Evaluation preservation, checked independently of the move logic.
        let eb = step.before.eval(mode);
        let ea = step.after.eval(mode);
        match (eb, ea) {
            (Ok(x), Ok(y)) => {
                if x != y {
                    return VerifyReport {
                        ok: false,
                        failure: Some((i, "step does not preserve evaluation".to_string())),
                    };
                }
            }
            _ => {
                return VerifyReport {
                    ok: false,
                    failure: Some((i, "span evaluation failed".to_string())),
                }
            }
        }
        match apply_move(&word, step) {
            Ok(next) => word = next,
            Err(e) => {
                return VerifyReport {
                    ok: false,
                    failure: Some((i, e.to_string())),
                }
            }
        }
    }
    if word != cert.final_word {
        return VerifyReport {
            ok: false,
            failure: Some((cert.steps.len(), "final word does not match".to_string())),
        };
    }
    VerifyReport { ok: true, failure: None }
}

/// Finds a collinear triple among the base points of `σ` and `σg` for error
/// reporting.
pub(crate) fn collinear_triple_among(
    g: &LinMap,
    mode: FieldMode,
) -> Option<[ProjPoint; 3]> {
    let mut pts: Vec<ProjPoint> = (0..3).map(|i| ProjPoint::coordinate(mode, i)).collect();
    let ginv = g.inverse();
    for i in 0..3 {
        let p = ginv.apply(&ProjPoint::coordinate(mode, i));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if crate::cremap::det3(&pts[i], &pts[j], &pts[k]).is_zero() {
                    return Some([pts[i].clone(), pts[j].clone(), pts[k].clone()]);
                }
            }
        }
    }
    None
}

/// Hypothesis check shared by the square lemma: no three of the base points
/// of `σg` and `σ` are collinear.
pub(crate) fn no_three_collinear_with_triangle(g: &LinMap, mode: FieldMode) -> bool {
    let mut pts: Vec<ProjPoint> = (0..3).map(|i| ProjPoint::coordinate(mode, i)).collect();
    let ginv = g.inverse();
    for i in 0..3 {
        pts.push(ginv.apply(&ProjPoint::coordinate(mode, i)));
    }
    !any_three_collinear(&pts)
}

/// Editing context that accumulates validated steps.
pub(crate) struct Editor {
    pub word: Word,
    pub steps: Vec<RewriteStep>,
    pub phase: u32,
}

impl Editor {
    pub fn new(word: Word) -> Editor {
        Editor {
            word,
            steps: Vec::new(),
            phase: 0,
        }
    }

    pub fn apply(
        &mut self,
        position: usize,
        mv: Move,
        params: Vec<LinMap>,
        before: Vec<Letter>,
        after: Vec<Letter>,
    ) -> Result<(), RewriteError> {
        let step = RewriteStep {
            position,
            mv,
            params,
            before: Word::new(before),
            after: Word::new(after),
            phase: self.phase,
        };
        self.word = apply_move(&self.word, &step)?;
        self.steps.push(step);
        Ok(())
    }

    pub fn letter(&self, i: usize) -> &Letter {
        &self.word.letters()[i]
    }

    pub fn lin_at(&self, i: usize) -> Option<&LinMap> {
        lin_of(self.letter(i))
    }
}
