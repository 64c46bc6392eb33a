//! Seeded random generation of scalars, points, linear maps, de Jonquières
//! maps, and relator words. "General position" choices are sampled from a
//! bounded box and every genericity condition is verified by the consumer,
//! with bounded retry.

use crate::cremap::{CreMap, LinMap, ProjPoint};
use crate::scalar::{FieldMode, Scalar};
use crate::word::{Letter, Word};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    pub mode: FieldMode,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(mode: FieldMode, seed: u64) -> Sampler {
        Sampler {
            mode,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Small exact scalar: bounded numerators keep downstream coefficient
    /// growth manageable while staying generic after verification.
    pub fn scalar(&mut self) -> Scalar {
        match self.mode {
            FieldMode::Rational => {
                let num = self.rng.gen_range(-20i64..=20);
                self.mode.from_i64(num)
            }
            FieldMode::Prime(p) => {
                let v = self.rng.gen_range(0..p);
                Scalar::Fp { v, p }
            }
        }
    }

    pub fn nonzero_scalar(&mut self) -> Scalar {
        loop {
            let s = self.scalar();
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn point(&mut self) -> ProjPoint {
        loop {
            let coords = [self.scalar(), self.scalar(), self.scalar()];
            if let Some(p) = ProjPoint::new(coords) {
                return p;
            }
        }
    }

    pub fn linear(&mut self) -> LinMap {
        loop {
            let m = [
                [self.scalar(), self.scalar(), self.scalar()],
                [self.scalar(), self.scalar(), self.scalar()],
                [self.scalar(), self.scalar(), self.scalar()],
            ];
            if let Ok(l) = LinMap::new(m) {
                return l;
            }
        }
    }

    /// Random element of PGL₃ fixing `[1:0:0]`.
    pub fn j_linear(&mut self) -> LinMap {
        loop {
            let z = self.mode.zero();
            let m = [
                [self.nonzero_scalar(), self.scalar(), self.scalar()],
                [z.clone(), self.scalar(), self.scalar()],
                [z, self.scalar(), self.scalar()],
            ];
            if let Ok(l) = LinMap::new(m) {
                return l;
            }
        }
    }

    pub fn diagonal(&mut self) -> LinMap {
        LinMap::diag(
            self.nonzero_scalar(),
            self.nonzero_scalar(),
            self.nonzero_scalar(),
        )
        .expect("nonzero diagonal")
    }

    pub fn permutation(&mut self) -> LinMap {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let p = PERMS[self.rng.gen_range(0..6)];
        LinMap::permutation(self.mode, p)
    }

    /// Quadratic de Jonquières involution conjugate with base points
    /// `[1:0:0], p, q`, optionally post-composed with a pencil-preserving
    /// linear map for generality.
    pub fn dj_quadratic(&mut self) -> CreMap {
        let p0 = ProjPoint::coordinate(self.mode, 0);
        loop {
            let p = self.point();
            let q = self.point();
            let Ok(w) = crate::rewrite::make_quadratic_with_base_points(&p0, &p, &q) else {
                continue;
            };
            let quad = w.eval(self.mode).expect("involution word evaluates");
            if quad.degree() != 2 {
                continue;
            }
            let post = self.j_linear();
            let m = CreMap::from_lin(&post)
                .compose(&quad)
                .expect("linear postcomposition");
            if m.degree() == 2 && m.is_de_jonquieres() {
                return m;
            }
        }
    }

    /// De Jonquières map of exactly the requested degree with proper
    /// rational base points, built by composing quadratics upward.
    pub fn dj_map_of_degree(&mut self, target: u32) -> CreMap {
        'restart: loop {
            let mut f = CreMap::from_lin(&self.j_linear());
            let mut guard = 0;
            while f.degree() < target {
                guard += 1;
                if guard > 12 {
                    continue 'restart;
                }
                let tau = self.dj_quadratic();
                let g = match f.compose(&tau) {
                    Ok(g) => g,
                    Err(_) => continue 'restart,
                };
                if g.degree() > target {
                    continue 'restart;
                }
                f = g;
            }
            if f.degree() == target && f.is_de_jonquieres() {
                return f;
            }
        }
    }

    /// A defining relator word. With `j_only`, linear letters stay in the
    /// pencil stabilizer (so the word suits the simplifier).
    pub fn relator(&mut self, j_only: bool) -> Word {
        let kind = self.rng.gen_range(0..5);
        self.relator_kind(kind, j_only)
    }

    /// Relator of a fixed family: 0 product, 1 `σσ`, 2 permutation,
    /// 3 diagonal, 4 the order-three relator `(σh)³`.
    pub fn relator_kind(&mut self, kind: usize, j_only: bool) -> Word {
        let lin = |s: &mut Sampler| -> LinMap {
            if j_only {
                s.j_linear()
            } else {
                s.linear()
            }
        };
        match kind {
            // g₁ g₂ (g₁g₂)⁻¹
            0 => {
                let a = lin(self);
                let b = lin(self);
                let c = a.mul(&b).inverse();
                Word::new(vec![Letter::lin(a), Letter::lin(b), Letter::lin(c)])
            }
            // σσ
            1 => Word::new(vec![Letter::Sigma, Letter::Sigma]),
            // στστ⁻¹... στ(τσ)⁻¹ = στσ⁻¹τ⁻¹ = [σ, τ, σ, τ⁻¹]
            2 => {
                let tau = if j_only {
                    LinMap::permutation(self.mode, [0, 2, 1])
                } else {
                    self.permutation()
                };
                Word::new(vec![
                    Letter::Sigma,
                    Letter::lin(tau.clone()),
                    Letter::Sigma,
                    Letter::lin(tau.inverse()),
                ])
            }
            // σdσd
            3 => {
                let d = self.diagonal();
                Word::new(vec![
                    Letter::Sigma,
                    Letter::lin(d.clone()),
                    Letter::Sigma,
                    Letter::lin(d),
                ])
            }
            // (σh)³
            _ => {
                let h = Letter::lin(LinMap::h(self.mode));
                Word::new(vec![
                    Letter::Sigma,
                    h.clone(),
                    Letter::Sigma,
                    h.clone(),
                    Letter::Sigma,
                    h,
                ])
            }
        }
    }

    /// Random conjugating word of at most `max_len` letters (σ and linear
    /// letters, pencil-preserving when `j_only`).
    pub fn conjugator(&mut self, max_len: usize, j_only: bool) -> Word {
        let len = self.rng.gen_range(0..=max_len);
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            if self.rng.gen_bool(0.5) {
                letters.push(Letter::Sigma);
            } else {
                let m = if j_only { self.j_linear() } else { self.linear() };
                letters.push(Letter::lin(m));
            }
        }
        Word::new(letters)
    }

    /// Identity word built as a product of conjugated relators, subject to
    /// a letter budget and a cap on the intermediate partial degrees.
    pub fn identity_word(
        &mut self,
        max_letters: usize,
        max_degree: u32,
        j_only: bool,
    ) -> Word {
        loop {
            let pieces = self.rng.gen_range(1..=2);
            let mut w = Word::empty();
            for _ in 0..pieces {
                let u = self.conjugator(4, j_only);
                let r = self.relator(j_only);
                w = w.concat(&u).concat(&r).concat(&u.inverse());
            }
            if w.len() > max_letters || w.is_empty() {
                continue;
            }
            if j_only && !w.all_de_jonquieres() {
                continue;
            }
            // Partial degree cap keeps the engine workload bounded.
            let mut ok = true;
            let mut acc = CreMap::identity(self.mode);
            for letter in w.letters().iter().rev() {
                let f = match letter {
                    Letter::Sigma => CreMap::sigma(self.mode),
                    Letter::Lin(m) => CreMap::from_lin(m),
                };
                acc = match f.compose(&acc) {
                    Ok(a) => a,
                    Err(_) => {
                        ok = false;
                        break;
                    }
                };
                if acc.degree() > max_degree {
                    ok = false;
                    break;
                }
            }
            if !ok || !acc.is_identity() {
                continue;
            }
            return w;
        }
    }

    /// Random invertible symmetric matrix.
    pub fn symmetric_invertible(&mut self, n: usize) -> crate::giza::Mat {
        loop {
            let mut m = vec![vec![self.mode.zero(); n]; n];
            for i in 0..n {
                for j in 0..=i {
                    let s = self.scalar();
                    m[i][j] = s.clone();
                    m[j][i] = s;
                }
            }
            if crate::giza::invert(&m).is_some() {
                return m;
            }
        }
    }

    pub fn invertible_sym_triple(&mut self, n: usize) -> crate::giza::SymTriple {
        crate::giza::SymTriple::new(
            n,
            [
                self.symmetric_invertible(n),
                self.symmetric_invertible(n),
                self.symmetric_invertible(n),
            ],
        )
        .expect("constructed symmetric")
    }
}
