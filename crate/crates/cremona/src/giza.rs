//! Rational action on triples of symmetric matrices: linear generators act
//! by the entrywise linear combinations of the three matrices, and the
//! quadratic involution acts by componentwise matrix inversion. Triples are
//! compared up to one common scalar, matching the scalar ambiguity of the
//! PGL₃ lift.

use crate::cremap::LinMap;
use crate::scalar::{FieldMode, Scalar};
use crate::word::{Letter, Word};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GizError {
    #[error("matrix {index} of the triple is not symmetric")]
    NotSymmetric { index: usize },
    #[error("matrix {index} has wrong shape")]
    BadShape { index: usize },
    #[error("component {index} is singular at word step {step}")]
    SingularComponent { index: usize, step: usize },
    #[error("input is singular: {0}")]
    SingularInput(&'static str),
    #[error("triples live over different fields or sizes")]
    Incompatible,
}

pub type Mat = Vec<Vec<Scalar>>;

/// An ordered triple of symmetric n×n matrices, canonically scaled so the
/// first nonzero entry in scan order (matrix, row, column) is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymTriple {
    n: usize,
    mats: [Mat; 3],
}

impl SymTriple {
    pub fn new(n: usize, mats: [Mat; 3]) -> Result<SymTriple, GizError> {
        for (index, m) in mats.iter().enumerate() {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(GizError::BadShape { index });
            }
            for i in 0..n {
                for j in 0..i {
                    if m[i][j] != m[j][i] {
                        return Err(GizError::NotSymmetric { index });
                    }
                }
            }
        }
        Ok(SymTriple { n, mats }.scaled())
    }

    fn scaled(mut self) -> SymTriple {
        let lead = self
            .mats
            .iter()
            .flat_map(|m| m.iter().flatten())
            .find(|c| !c.is_zero())
            .cloned();
        if let Some(c) = lead {
            let inv = c.inv().unwrap();
            for m in &mut self.mats {
                for row in m.iter_mut() {
                    for e in row.iter_mut() {
                        *e = e.checked_mul(&inv).expect("mixed fields");
                    }
                }
            }
        }
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mats(&self) -> &[Mat; 3] {
        &self.mats
    }

    pub fn mode(&self) -> FieldMode {
        self.mats[0]
            .first()
            .and_then(|r| r.first())
            .map(|c| c.mode())
            .unwrap_or(FieldMode::Rational)
    }

    /// Linear action: row `i` of `g` gives the coefficients of the linear
    /// combination forming the `i`-th output matrix.
    pub fn act_lin(&self, g: &LinMap) -> SymTriple {
        let mode = self.mode();
        let rows = g.rows();
        let mut out: Vec<Mat> = Vec::with_capacity(3);
        for i in 0..3 {
            let mut m = vec![vec![mode.zero(); self.n]; self.n];
            for (k, a) in self.mats.iter().enumerate() {
                let c = &rows[i][k];
                if c.is_zero() {
                    continue;
                }
                for r in 0..self.n {
                    for s in 0..self.n {
                        let t = a[r][s].checked_mul(c).expect("mixed");
                        m[r][s] = m[r][s].checked_add(&t).unwrap();
                    }
                }
            }
            out.push(m);
        }
        SymTriple {
            n: self.n,
            mats: [out[0].clone(), out[1].clone(), out[2].clone()],
        }
        .scaled()
    }

    /// The involution: componentwise inverse. Reports which component is
    /// singular (the rational action is undefined there).
    pub fn act_sigma(&self) -> Result<SymTriple, GizError> {
        let mut out: Vec<Mat> = Vec::with_capacity(3);
        for (index, m) in self.mats.iter().enumerate() {
            match invert(m) {
                Some(inv) => out.push(inv),
                None => return Err(GizError::SingularComponent { index, step: 0 }),
            }
        }
        Ok(SymTriple {
            n: self.n,
            mats: [out[0].clone(), out[1].clone(), out[2].clone()],
        }
        .scaled())
    }

    /// Applies a word right-to-left; singular steps report their index
    /// (counting applied letters from the right, starting at 0).
    pub fn act_word(&self, w: &Word) -> Result<SymTriple, GizError> {
        let mut t = self.clone();
        for (k, letter) in w.letters().iter().rev().enumerate() {
            t = match letter {
                Letter::Sigma => t.act_sigma().map_err(|e| match e {
                    GizError::SingularComponent { index, .. } => {
                        GizError::SingularComponent { index, step: k }
                    }
                    other => other,
                })?,
                Letter::Lin(g) => t.act_lin(g),
            };
        }
        Ok(t)
    }

    /// Equality up to one common scalar is structural equality of the
    /// canonical forms.
    pub fn projectively_equal(&self, rhs: &SymTriple) -> bool {
        self == rhs
    }

    /// Simultaneous congruence `(CA₁Cᵀ, CA₂Cᵀ, CA₃Cᵀ)`: the group operation
    /// the quotient of triples is taken by. Triples differing by a
    /// congruence are the same point of the quotient even when their
    /// canonical representatives differ.
    pub fn congruence(&self, c: &Mat) -> SymTriple {
        let ct = transpose(c);
        let mats = [
            mat_mul(c, &mat_mul(&self.mats[0], &ct)),
            mat_mul(c, &mat_mul(&self.mats[1], &ct)),
            mat_mul(c, &mat_mul(&self.mats[2], &ct)),
        ];
        SymTriple { n: self.n, mats }.scaled()
    }
}

fn transpose(a: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| a[j][i].clone()).collect())
        .collect()
}

impl fmt::Display for SymTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::print_triple(self))
    }
}

/// Dimension of the quotient of symmetric-matrix triples by simultaneous
/// congruence: `(n+1)(n+2)/2 − 1`.
pub fn giz_dim(n: u64) -> u64 {
    (n + 1) * (n + 2) / 2 - 1
}

/// Exact matrix inverse by fraction-free (Bareiss) elimination on the
/// augmented matrix, with a final exact division pass. `None` on singular
/// input.
pub fn invert(a: &Mat) -> Option<Mat> {
    let n = a.len();
    if n == 0 {
        return None;
    }
    let mode = a[0][0].mode();
    // Augmented [A | I].
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { mode.one() } else { mode.zero() });
            }
            r
        })
        .collect();
    let mut prev = mode.one();
    for k in 0..n {
        if m[k][k].is_zero() {
            // Pivot search below row k.
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero())?;
            m.swap(k, swap);
            // Row swap flips the determinant sign; absorb into the pivot row.
            for e in m[k].iter_mut() {
                *e = e.neg();
            }
        }
        let pivot = m[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let mik = m[i][k].clone();
            for j in 0..2 * n {
                let t1 = m[i][j].checked_mul(&pivot).expect("mixed");
                let t2 = mik.checked_mul(&m[k][j]).expect("mixed");
                let num = t1.checked_sub(&t2).unwrap();
                m[i][j] = num.checked_div(&prev).expect("Bareiss divisor nonzero");
            }
        }
        prev = pivot;
    }
    // Left block is diagonal; normalize each row by its pivot.
    let mut out = vec![vec![mode.zero(); n]; n];
    for i in 0..n {
        let inv = m[i][i].inv().ok()?;
        for j in 0..n {
            out[i][j] = m[i][n + j].checked_mul(&inv).expect("mixed");
        }
    }
    Some(out)
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mode = a[0][0].mode();
    let mut out = vec![vec![mode.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = mode.zero();
            for k in 0..n {
                let t = a[i][k].checked_mul(&b[k][j]).expect("mixed");
                acc = acc.checked_add(&t).unwrap();
            }
            out[i][j] = acc;
        }
    }
    out
}

fn mat_sub(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .map(|(x, y)| x.checked_sub(y).unwrap())
                .collect()
        })
        .collect()
}

/// Verifies `(A₃⁻¹ − A₁⁻¹)⁻¹ = A₃ − A₃(A₃ − A₁)⁻¹A₃` exactly; the two
/// sides compute the middle entry of the conjugated triple along the two
/// routes through the defining relations.
pub fn check_rel5_identity(a1: &Mat, a3: &Mat) -> Result<bool, GizError> {
    let a1_inv = invert(a1).ok_or(GizError::SingularInput("A1"))?;
    let a3_inv = invert(a3).ok_or(GizError::SingularInput("A3"))?;
    let diff = mat_sub(a3, a1);
    let diff_inv = invert(&diff).ok_or(GizError::SingularInput("A3 - A1"))?;
    let inv_diff = mat_sub(&a3_inv, &a1_inv);
    let lhs = invert(&inv_diff).ok_or(GizError::SingularInput("A3^-1 - A1^-1"))?;
    let rhs = mat_sub(a3, &mat_mul(a3, &mat_mul(&diff_inv, a3)));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldMode = FieldMode::Rational;

    fn scalar_triple(a: i64, b: i64, c: i64) -> SymTriple {
        SymTriple::new(
            1,
            [
                vec![vec![Q.from_i64(a)]],
                vec![vec![Q.from_i64(b)]],
                vec![vec![Q.from_i64(c)]],
            ],
        )
        .unwrap()
    }

    #[test]
    fn dim_formula() {
        assert_eq!(giz_dim(1), 2);
        assert_eq!(giz_dim(2), 5);
        assert_eq!(giz_dim(4), 14);
    }

    #[test]
    fn scalar_inversion_normalizes() {
        let t = scalar_triple(2, 3, 5);
        let s = t.act_sigma().unwrap();
        // (1/2, 1/3, 1/5) ~ (1, 2/3, 2/5)
        let expect = SymTriple::new(
            1,
            [
                vec![vec![Q.one()]],
                vec![vec![Q.from_ratio(2, 3).unwrap()]],
                vec![vec![Q.from_ratio(2, 5).unwrap()]],
            ],
        )
        .unwrap();
        assert!(s.projectively_equal(&expect));
    }

    #[test]
    fn singular_component_reported() {
        let t = SymTriple::new(
            1,
            [
                vec![vec![Q.from_i64(2)]],
                vec![vec![Q.zero()]],
                vec![vec![Q.from_i64(5)]],
            ],
        )
        .unwrap();
        assert_eq!(
            t.act_sigma(),
            Err(GizError::SingularComponent { index: 1, step: 0 })
        );
    }

    #[test]
    fn diagonal_2x2_inversion() {
        let i2 = vec![
            vec![Q.one(), Q.zero()],
            vec![Q.zero(), Q.one()],
        ];
        let d12 = vec![
            vec![Q.one(), Q.zero()],
            vec![Q.zero(), Q.from_i64(2)],
        ];
        let d31 = vec![
            vec![Q.from_i64(3), Q.zero()],
            vec![Q.zero(), Q.one()],
        ];
        let t = SymTriple::new(2, [i2.clone(), d12, d31]).unwrap();
        let s = t.act_sigma().unwrap();
        let expect = SymTriple::new(
            2,
            [
                i2,
                vec![
                    vec![Q.one(), Q.zero()],
                    vec![Q.zero(), Q.from_ratio(1, 2).unwrap()],
                ],
                vec![
                    vec![Q.from_ratio(1, 3).unwrap(), Q.zero()],
                    vec![Q.zero(), Q.one()],
                ],
            ],
        )
        .unwrap();
        assert!(s.projectively_equal(&expect));
    }

    #[test]
    fn swap_and_h_actions() {
        let t = scalar_triple(2, 3, 5);
        let swap = LinMap::permutation(Q, [1, 0, 2]);
        let swapped = t.act_lin(&swap);
        assert!(swapped.projectively_equal(&scalar_triple(3, 2, 5)));
        let h = LinMap::h(Q);
        // h = [z−x : z−y : z] → (C−A, C−B, C).
        let acted = t.act_lin(&h);
        assert!(acted.projectively_equal(&scalar_triple(3, 2, 5)));
    }

    #[test]
    fn rel5_relator_acts_by_congruence_with_the_third_matrix() {
        // (σh)³ sends (A,B,C) to (C⁻¹AC⁻¹, C⁻¹BC⁻¹, C⁻¹): the identity on
        // the congruence quotient, witnessed by C⁻¹. For n = 1 this is an
        // up-to-scalar fixpoint.
        let h = LinMap::h(Q);
        let w = crate::word::Word::new(vec![
            crate::word::Letter::Sigma,
            crate::word::Letter::lin(h.clone()),
            crate::word::Letter::Sigma,
            crate::word::Letter::lin(h.clone()),
            crate::word::Letter::Sigma,
            crate::word::Letter::lin(h),
        ]);
        let t1 = scalar_triple(2, 3, 5);
        assert!(t1.act_word(&w).unwrap().projectively_equal(&t1));
        let a = vec![
            vec![Q.from_i64(2), Q.from_i64(1)],
            vec![Q.from_i64(1), Q.from_i64(3)],
        ];
        let b = vec![
            vec![Q.from_i64(1), Q.zero()],
            vec![Q.zero(), Q.from_i64(4)],
        ];
        let c = vec![
            vec![Q.from_i64(5), Q.from_i64(2)],
            vec![Q.from_i64(2), Q.from_i64(1)],
        ];
        let t2 = SymTriple::new(2, [a, b, c.clone()]).unwrap();
        let acted = t2.act_word(&w).unwrap();
        let witness = t2.congruence(&invert(&c).unwrap());
        assert!(acted.projectively_equal(&witness));
    }

    #[test]
    fn rel5_identity_scalar_example() {
        // a1 = 1, a3 = 2: both routes give −2.
        let a1 = vec![vec![Q.one()]];
        let a3 = vec![vec![Q.from_i64(2)]];
        assert!(check_rel5_identity(&a1, &a3).unwrap());
        // a1 = a3 → A3 − A1 singular.
        assert_eq!(
            check_rel5_identity(&a1, &a1),
            Err(GizError::SingularInput("A3 - A1"))
        );
    }

    #[test]
    fn bareiss_inverse_matches_definition() {
        let m = vec![
            vec![Q.from_i64(2), Q.from_i64(1), Q.from_i64(1)],
            vec![Q.from_i64(1), Q.from_i64(3), Q.from_i64(1)],
            vec![Q.from_i64(1), Q.from_i64(1), Q.from_i64(4)],
        ];
        let inv = invert(&m).unwrap();
        let prod = mat_mul(&m, &inv);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[i][j], if i == j { Q.one() } else { Q.zero() });
            }
        }
        // Singular matrix refused.
        let sing = vec![
            vec![Q.one(), Q.one()],
            vec![Q.one(), Q.one()],
        ];
        assert!(invert(&sing).is_none());
    }
}
