//! Dense univariate polynomials over `Scalar`, used by the multivariate gcd
//! (contents and primitive parts) and by the base-point solver.

use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    pub coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> UniPoly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: Scalar) -> UniPoly {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial answers `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = rhs.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a.checked_add(b).expect("mixed fields"),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UniPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let zero = self.coeffs[0].mode().zero();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a.checked_mul(b).expect("mixed fields");
                out[i + j] = out[i + j].checked_add(&t).expect("mixed fields");
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|k| k.checked_mul(c).expect("mixed fields"))
                .collect(),
        }
    }

    /// Field division with remainder.
    pub fn divrem(&self, rhs: &UniPoly) -> (UniPoly, UniPoly) {
        let d = rhs.degree().expect("division by zero polynomial");
        let lead_inv = rhs.leading().unwrap().inv().expect("nonzero leading");
        let mut rem = self.coeffs.clone();
        if rem.len() < d + 1 {
            return (UniPoly::zero(), self.clone());
        }
        let zero = rhs.coeffs[0].mode().zero();
        let mut quot = vec![zero.clone(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = rem[i].checked_mul(&lead_inv).expect("mixed fields");
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = q.checked_mul(b).expect("mixed fields");
                rem[i - d + j] = rem[i - d + j].checked_sub(&t).expect("mixed fields");
            }
            quot[i - d] = q;
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    /// Exact division; `None` when the remainder is nonzero.
    pub fn exact_div(&self, rhs: &UniPoly) -> Option<UniPoly> {
        if self.is_zero() {
            return Some(UniPoly::zero());
        }
        let (q, r) = self.divrem(rhs);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Gcd by Euclid with canonical rescaling each step to keep the
    /// coefficients small (integer-primitive over Q, monic over F_p).
    /// The result is monic.
    pub fn gcd(&self, rhs: &UniPoly) -> UniPoly {
        let mut a = self.canon_scaled();
        let mut b = rhs.canon_scaled();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.canon_scaled();
        }
        if a.is_zero() {
            a
        } else {
            let inv = a.leading().unwrap().inv().unwrap();
            a.scale(&inv)
        }
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let mode = self.coeffs[0].mode();
        UniPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.checked_mul(&mode.from_i64(i as i64)).expect("mixed"))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mode = x.mode();
        let mut acc = mode.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(x).expect("mixed fields");
            acc = acc.checked_add(c).expect("mixed fields");
        }
        acc
    }

    /// Squarefree part `self / gcd(self, self')`.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) <= 1 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.clone()
        } else {
            self.exact_div(&g).expect("gcd divides")
        }
    }

    /// Unit-rescales: over Q, clears denominators and divides by the integer
    /// content (keeping the sign of the leading coefficient positive); over
    /// F_p, makes the polynomial monic.
    pub fn canon_scaled(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        match &self.coeffs[0] {
            Scalar::Fp { .. } => {
                let inv = self.leading().unwrap().inv().unwrap();
                self.scale(&inv)
            }
            Scalar::Rat(_) => {
                let (ints, _) = self.to_integer_coeffs();
                UniPoly {
                    coeffs: ints
                        .into_iter()
                        .map(|n| Scalar::Rat(BigRational::from(n)))
                        .collect(),
                }
            }
        }
    }

    /// Integer coefficient vector after clearing denominators and dividing by
    /// content; second component is the scaling factor applied (unused by
    /// callers needing only the primitive part). Rational mode only.
    pub fn to_integer_coeffs(&self) -> (Vec<BigInt>, BigRational) {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            if let Scalar::Rat(r) = c {
                lcm = lcm.lcm(r.denom());
            } else {
                panic!("to_integer_coeffs requires rational mode");
            }
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| match c {
                Scalar::Rat(r) => r.numer() * (&lcm / r.denom()),
                _ => unreachable!(),
            })
            .collect();
        let mut content = BigInt::zero();
        for n in &ints {
            content = content.gcd(n);
        }
        if content.is_zero() {
            content = BigInt::one();
        }
        if ints.last().map(|n| n.is_negative()).unwrap_or(false) {
            content = -content;
        }
        for n in &mut ints {
            *n /= &content;
        }
        (ints, BigRational::new(content, lcm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldMode;

    fn up(cs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(cs.iter().map(|&n| FieldMode::Rational.from_i64(n)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        // (t-1)(t-2) = t² - 3t + 2; gcd with (t-1)(t+5) is t-1 (monic).
        let a = up(&[2, -3, 1]);
        let b = up(&[-1, 1]).mul(&up(&[5, 1]));
        let g = a.gcd(&b);
        assert_eq!(g, up(&[-1, 1]));
        let (q, r) = a.divrem(&up(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, up(&[-2, 1]));
    }

    #[test]
    fn squarefree() {
        // (t-3)²(t+1) → squarefree part (t-3)(t+1).
        let f = up(&[-3, 1]).mul(&up(&[-3, 1])).mul(&up(&[1, 1]));
        let sf = f.squarefree_part();
        assert_eq!(sf.canon_scaled(), up(&[-3, 1]).mul(&up(&[1, 1])).canon_scaled());
    }
}
