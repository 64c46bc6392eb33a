//! Scratch search for identity words that drive the simplifier into the
//! infinitely-near-base-point halt. Not part of the test suite.

use cremona::cremap::LinMap;
use cremona::parse::print_word;
use cremona::rewrite::{simplify_identity_word, SimplifyOutcome, StuckReason};
use cremona::sample::Sampler;
use cremona::scalar::FieldMode;
use cremona::word::{Letter, Word};
use rand::Rng;

fn main() {
    let mode = FieldMode::Rational;
    let mut found = 0;
    for seed in 0..4000u64 {
        let mut s = Sampler::new(mode, seed);
        // Conjugators biased toward column-degenerate pencil maps
        // (a2 = 0 shapes) so intermediate systems develop infinitely near
        // base points.
        let w = candidate(&mut s);
        if w.eval(mode).map(|m| m.is_identity()) != Ok(true) {
            continue;
        }
        if !w.all_de_jonquieres() {
            continue;
        }
        match simplify_identity_word(&w, mode, seed) {
            Ok(SimplifyOutcome::Stuck(rep)) if rep.reason == StuckReason::InfinitelyNearBasePoint => {
                found += 1;
                println!("seed {seed} stuck at index {} len {}:", rep.index, w.len());
                println!("{}", print_word(&w));
                if found >= 6 {
                    return;
                }
            }
            _ => {}
        }
    }
    println!("found {found}");
}

fn candidate(s: &mut Sampler) -> Word {
    let mode = s.mode;
    // N-form: [a1 x + a2 z : b1 y + b2 z : c z] with a2 = 0, b2 ≠ 0.
    let nform = |s: &mut Sampler| -> LinMap {
        loop {
            let m = LinMap::new([
                [s.nonzero_scalar(), mode.zero(), mode.zero()],
                [mode.zero(), s.nonzero_scalar(), s.nonzero_scalar()],
                [mode.zero(), mode.zero(), s.nonzero_scalar()],
            ]);
            if let Ok(m) = m {
                return m;
            }
        }
    };
    let style = s.rng().gen_range(0..3);
    match style {
        0 => {
            // u r u⁻¹ with u ending in an N-form letter next to the relator.
            let n = nform(s);
            let mut u = s.conjugator(3, true);
            u.letters_mut().push(Letter::lin(n));
            if s.rng().gen_bool(0.7) {
                u.letters_mut().push(Letter::Sigma);
            }
            let r = s.relator(true);
            u.concat(&r).concat(&u.inverse())
        }
        1 => {
            // [σ, N, σ] r [σ, N⁻¹, σ]
            let n = nform(s);
            let a = Word::new(vec![
                Letter::Sigma,
                Letter::lin(n.clone()),
                Letter::Sigma,
            ]);
            let r = s.relator(true);
            a.concat(&r).concat(&a.inverse())
        }
        _ => {
            // two relators conjugated by N-heavy words
            let n1 = nform(s);
            let u = Word::new(vec![Letter::Sigma, Letter::lin(n1)]);
            let r1 = s.relator(true);
            let r2 = s.relator(true);
            u.concat(&r1).concat(&u.inverse()).concat(&r2)
        }
    }
}
