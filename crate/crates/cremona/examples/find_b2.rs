use cremona::cremap::LinMap;
use cremona::rewrite::{simplify_identity_word, SimplifyOutcome, StuckReason};
use cremona::sample::Sampler;
use cremona::scalar::FieldMode;
use cremona::word::{Letter, Word};

fn b2_candidate(s: &mut Sampler) -> Word {
    let mode = s.mode;
    let n = loop {
        let m = LinMap::new([
            [s.nonzero_scalar(), mode.zero(), mode.zero()],
            [mode.zero(), s.nonzero_scalar(), s.nonzero_scalar()],
            [mode.zero(), mode.zero(), s.nonzero_scalar()],
        ]);
        if let Ok(m) = m {
            break m;
        }
    };
    let a = Word::new(vec![Letter::Sigma, Letter::lin(n), Letter::Sigma]);
    let r = s.relator(true);
    a.concat(&r).concat(&a.inverse())
}

fn main() {
    let mode = FieldMode::Rational;
    let mut hits = vec![];
    for seed in 0..300u64 {
        let mut s = Sampler::new(mode, seed);
        let w = b2_candidate(&mut s);
        if w.eval(mode).map(|m| m.is_identity()) != Ok(true) { continue; }
        match simplify_identity_word(&w, mode, seed) {
            Ok(SimplifyOutcome::Stuck(rep)) if rep.reason == StuckReason::InfinitelyNearBasePoint => {
                hits.push(seed);
                if hits.len() >= 10 { break; }
            }
            _ => {}
        }
    }
    println!("stuck seeds: {hits:?}");
}
