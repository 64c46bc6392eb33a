//! Elements of PGL₃ as canonically scaled invertible 3×3 matrices.

use super::point::ProjPoint;
use super::MapError;
use crate::scalar::{FieldMode, Scalar};
use std::fmt;

/// An invertible 3×3 matrix, scaled so the first nonzero entry in row-major
/// scan order is 1. Equality is therefore projective equality in PGL₃.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinMap {
    rows: [[Scalar; 3]; 3],
}

impl serde::Serialize for LinMap {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.rows.serialize(ser)
    }
}

impl<'de> serde::Deserialize<'de> for LinMap {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<LinMap, D::Error> {
        use serde::de::Error;
        let rows = <[[Scalar; 3]; 3]>::deserialize(de)?;
        LinMap::new(rows).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Structure of a linear map relative to the torus and coordinate
/// permutations: the factors of `g = d·τ` when `g` is monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinClass {
    Diagonal { d: LinMap },
    Permutation { tau: LinMap },
    DiagonalTimesPermutation { d: LinMap, tau: LinMap },
    General,
}

impl LinMap {
    pub fn new(rows: [[Scalar; 3]; 3]) -> Result<LinMap, MapError> {
        let m = LinMap { rows }.scaled();
        if m.det().is_zero() {
            return Err(MapError::SingularMatrix);
        }
        Ok(m)
    }

    fn scaled(mut self) -> LinMap {
        let lead = self
            .rows
            .iter()
            .flatten()
            .find(|c| !c.is_zero())
            .cloned();
        if let Some(c) = lead {
            let inv = c.inv().unwrap();
            for row in &mut self.rows {
                for e in row {
                    *e = e.checked_mul(&inv).expect("mixed fields");
                }
            }
        }
        self
    }

    pub fn identity(mode: FieldMode) -> LinMap {
        LinMap::diag(mode.one(), mode.one(), mode.one()).unwrap()
    }

    pub fn diag(a: Scalar, b: Scalar, c: Scalar) -> Result<LinMap, MapError> {
        let mode = a.mode();
        LinMap::new([
            [a, mode.zero(), mode.zero()],
            [mode.zero(), b, mode.zero()],
            [mode.zero(), mode.zero(), c],
        ])
    }

    /// Coordinate permutation: row `i` selects variable `perm[i]`, so the map
    /// is `[x_{perm[0]} : x_{perm[1]} : x_{perm[2]}]`.
    pub fn permutation(mode: FieldMode, perm: [usize; 3]) -> LinMap {
        let mut rows = [
            [mode.zero(), mode.zero(), mode.zero()],
            [mode.zero(), mode.zero(), mode.zero()],
            [mode.zero(), mode.zero(), mode.zero()],
        ];
        for i in 0..3 {
            rows[i][perm[i]] = mode.one();
        }
        LinMap::new(rows).expect("permutation matrices are invertible")
    }

    /// The involution `[z−x : z−y : z]`.
    pub fn h(mode: FieldMode) -> LinMap {
        let o = || mode.one();
        let z = || mode.zero();
        LinMap::new([
            [o().neg(), z(), o()],
            [z(), o().neg(), o()],
            [z(), z(), o()],
        ])
        .unwrap()
    }

    pub fn rows(&self) -> &[[Scalar; 3]; 3] {
        &self.rows
    }

    pub fn det(&self) -> Scalar {
        let m = &self.rows;
        let t = |a: &Scalar, b: &Scalar| a.checked_mul(b).expect("mixed");
        let mut acc = t(&m[0][0], &t(&m[1][1], &m[2][2]));
        acc = acc.checked_add(&t(&m[0][1], &t(&m[1][2], &m[2][0]))).unwrap();
        acc = acc.checked_add(&t(&m[0][2], &t(&m[1][0], &m[2][1]))).unwrap();
        acc = acc.checked_sub(&t(&m[0][2], &t(&m[1][1], &m[2][0]))).unwrap();
        acc = acc.checked_sub(&t(&m[0][0], &t(&m[1][2], &m[2][1]))).unwrap();
        acc = acc.checked_sub(&t(&m[0][1], &t(&m[1][0], &m[2][2]))).unwrap();
        acc
    }

    pub fn mul(&self, rhs: &LinMap) -> LinMap {
        let mode = self.rows[0][0].mode();
        let mut rows = [
            [mode.zero(), mode.zero(), mode.zero()],
            [mode.zero(), mode.zero(), mode.zero()],
            [mode.zero(), mode.zero(), mode.zero()],
        ];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = mode.zero();
                for k in 0..3 {
                    let t = self.rows[i][k].checked_mul(&rhs.rows[k][j]).expect("mixed");
                    acc = acc.checked_add(&t).unwrap();
                }
                rows[i][j] = acc;
            }
        }
        LinMap { rows }.scaled()
    }

    /// Inverse by adjugate; always defined since construction checks det.
    pub fn inverse(&self) -> LinMap {
        let m = &self.rows;
        let t = |a: &Scalar, b: &Scalar| a.checked_mul(b).expect("mixed");
        let cof = |r0: usize, c0: usize, r1: usize, c1: usize| -> Scalar {
            t(&m[r0][c0], &m[r1][c1])
                .checked_sub(&t(&m[r0][c1], &m[r1][c0]))
                .unwrap()
        };
        // Adjugate (transpose of cofactors); projective scaling absorbs det.
        let rows = [
            [cof(1, 1, 2, 2), cof(0, 2, 2, 1), cof(0, 1, 1, 2)],
            [cof(1, 2, 2, 0), cof(0, 0, 2, 2), cof(0, 2, 1, 0)],
            [cof(1, 0, 2, 1), cof(0, 1, 2, 0), cof(0, 0, 1, 1)],
        ];
        LinMap { rows }.scaled()
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let v = p.coords();
        let mode = v[0].mode();
        let mut out = [mode.zero(), mode.zero(), mode.zero()];
        for i in 0..3 {
            let mut acc = mode.zero();
            for k in 0..3 {
                let t = self.rows[i][k].checked_mul(&v[k]).expect("mixed");
                acc = acc.checked_add(&t).unwrap();
            }
            out[i] = acc;
        }
        ProjPoint::new(out).expect("invertible matrix maps nonzero to nonzero")
    }

    pub fn is_identity(&self) -> bool {
        self == &LinMap::identity(self.mode())
    }

    pub fn mode(&self) -> FieldMode {
        self.rows[0][0].mode()
    }

    /// True when the map fixes `[1:0:0]`, i.e. the first column is
    /// proportional to `(1,0,0)`. These are the linear maps preserving the
    /// pencil of lines through `[1:0:0]`.
    pub fn fixes_p100(&self) -> bool {
        self.rows[1][0].is_zero() && self.rows[2][0].is_zero() && !self.rows[0][0].is_zero()
    }

    /// Nonzero pattern check: exactly one nonzero entry per row and column.
    fn monomial_pattern(&self) -> Option<[usize; 3]> {
        let mut perm = [0usize; 3];
        let mut used = [false; 3];
        for i in 0..3 {
            let nz: Vec<usize> = (0..3).filter(|&j| !self.rows[i][j].is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            perm[i] = nz[0];
            if used[nz[0]] {
                return None;
            }
            used[nz[0]] = true;
        }
        Some(perm)
    }

    /// Factors `g = d·τ` (diagonal times coordinate permutation) when the
    /// matrix is monomial, with the classification of the factors.
    pub fn classify(&self) -> LinClass {
        let mode = self.mode();
        match self.monomial_pattern() {
            None => LinClass::General,
            Some(perm) => {
                let tau = LinMap::permutation(mode, perm);
                let entries: Vec<Scalar> = (0..3).map(|i| self.rows[i][perm[i]].clone()).collect();
                let d = LinMap::diag(entries[0].clone(), entries[1].clone(), entries[2].clone())
                    .expect("nonzero diagonal");
                let is_perm_identity = perm == [0, 1, 2];
                let is_diag_scalar = entries[0] == entries[1] && entries[1] == entries[2];
                match (is_diag_scalar, is_perm_identity) {
                    (true, true) | (false, true) => LinClass::Diagonal { d },
                    (true, false) => LinClass::Permutation { tau },
                    (false, false) => LinClass::DiagonalTimesPermutation { d, tau },
                }
            }
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.classify(), LinClass::Diagonal { .. })
    }

    pub fn is_permutation(&self) -> bool {
        match self.classify() {
            LinClass::Permutation { .. } => true,
            LinClass::Diagonal { d } => d.is_identity(),
            _ => false,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial_pattern().is_some()
    }

    /// Matrix with prescribed columns (as points), e.g. the map sending the
    /// coordinate points to `p, q, r`.
    pub fn from_columns(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<LinMap, MapError> {
        let (a, b, c) = (p.coords(), q.coords(), r.coords());
        LinMap::new([
            [a[0].clone(), b[0].clone(), c[0].clone()],
            [a[1].clone(), b[1].clone(), c[1].clone()],
            [a[2].clone(), b[2].clone(), c[2].clone()],
        ])
    }
}

impl fmt::Display for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[Scalar; 3]| format!("[{},{},{}]", r[0], r[1], r[2]);
        write!(
            f,
            "[{},{},{}]",
            row(&self.rows[0]),
            row(&self.rows[1]),
            row(&self.rows[2])
        )
    }
}
