//! Homogeneous polynomials in `x, y, z` over an exact field.
//!
//! Invariants: every stored coefficient is nonzero and every exponent triple
//! sums to the stated degree. The zero polynomial is the empty term map with
//! conventional degree 0. The monomial order is graded lexicographic with
//! `x > y > z`, which fixes printing, leading terms, and the canonical
//! normalization (leading coefficient scaled to 1).

mod gcd;
pub(crate) mod roots;
pub(crate) mod univar;

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
}

/// Exponent triple `(i, j, k)` for `x^i y^j z^k`.
///
/// The derived lexicographic `Ord` on `(i, j, k)` agrees with graded lex for
/// monomials of equal total degree, which is the only case the homogeneous
/// invariant allows inside one polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exp(pub u16, pub u16, pub u16);

impl Exp {
    pub fn total(&self) -> u32 {
        self.0 as u32 + self.1 as u32 + self.2 as u32
    }
}

/// A homogeneous polynomial in three variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPoly {
    degree: u32,
    terms: BTreeMap<Exp, Scalar>,
}

impl HPoly {
    pub fn zero() -> HPoly {
        HPoly {
            degree: 0,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from raw terms, dropping zero coefficients and
    /// checking homogeneity.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exp, Scalar)>) -> Result<HPoly, PolyError> {
        let mut map: BTreeMap<Exp, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.entry(e) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get().checked_add(&c).expect("mixed fields in polynomial");
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        }
        let mut degree = 0;
        for (i, e) in map.keys().enumerate() {
            if i == 0 {
                degree = e.total();
            } else if e.total() != degree {
                return Err(PolyError::DegreeMismatch(degree, e.total()));
            }
        }
        Ok(HPoly {
            degree: if map.is_empty() { 0 } else { degree },
            terms: map,
        })
    }

    pub fn monomial(e: Exp, c: Scalar) -> HPoly {
        if c.is_zero() {
            return HPoly::zero();
        }
        let mut terms = BTreeMap::new();
        let degree = e.total();
        terms.insert(e, c);
        HPoly { degree, terms }
    }

    /// The linear form `a·x + b·y + c·z`.
    pub fn linear_form(a: Scalar, b: Scalar, c: Scalar) -> HPoly {
        HPoly::from_terms([
            (Exp(1, 0, 0), a),
            (Exp(0, 1, 0), b),
            (Exp(0, 0, 1), c),
        ])
        .expect("linear form is homogeneous")
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term in graded lex (`x > y > z`).
    pub fn leading(&self) -> Option<(&Exp, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, e: &Exp) -> Option<&Scalar> {
        self.terms.get(e)
    }

    pub fn add(&self, rhs: &HPoly) -> Result<HPoly, PolyError> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != rhs.degree {
            return Err(PolyError::DegreeMismatch(self.degree, rhs.degree));
        }
        HPoly::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(e, c)| (*e, c.clone())),
        )
    }

    pub fn sub(&self, rhs: &HPoly) -> Result<HPoly, PolyError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> HPoly {
        HPoly {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> HPoly {
        if c.is_zero() {
            return HPoly::zero();
        }
        HPoly {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (*e, k.checked_mul(c).expect("mixed fields")))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &HPoly) -> HPoly {
        if self.is_zero() || rhs.is_zero() {
            return HPoly::zero();
        }
        let mut acc: BTreeMap<Exp, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = Exp(ea.0 + eb.0, ea.1 + eb.1, ea.2 + eb.2);
                let c = ca.checked_mul(cb).expect("mixed fields");
                match acc.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let s = o.get().checked_add(&c).expect("mixed fields");
                        if s.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = s;
                        }
                    }
                }
            }
        }
        HPoly {
            degree: if acc.is_empty() {
                0
            } else {
                self.degree + rhs.degree
            },
            terms: acc,
        }
    }

    pub fn pow(&self, n: u32) -> HPoly {
        let mut acc = HPoly::monomial(Exp(0, 0, 0), one_like(self));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitution `f(gx, gy, gz)` for `gx, gy, gz` homogeneous of one
    /// common degree. Result is homogeneous of degree `deg f · d`.
    pub fn substitute(&self, gx: &HPoly, gy: &HPoly, gz: &HPoly) -> Result<HPoly, PolyError> {
        let degs: Vec<u32> = [gx, gy, gz].iter().map(|g| g.degree()).collect();
        if !(gx.is_zero() && gy.is_zero() && gz.is_zero())
            && (degs[0] != degs[1] || degs[1] != degs[2])
        {
            // Zero components are allowed alongside nonzero ones only if the
            // stored conventional degrees agree; re-check pairwise on the
            // nonzero ones.
            let nz: Vec<u32> = [gx, gy, gz]
                .iter()
                .filter(|g| !g.is_zero())
                .map(|g| g.degree())
                .collect();
            if nz.windows(2).any(|w| w[0] != w[1]) {
                return Err(PolyError::DegreeMismatch(nz[0], nz[1]));
            }
        }
        if self.is_zero() {
            return Ok(HPoly::zero());
        }
        let d = self.degree as usize;
        // Power tables g^0 .. g^d for each argument.
        let table = |g: &HPoly| -> Vec<HPoly> {
            let mut v = Vec::with_capacity(d + 1);
            v.push(HPoly::monomial(Exp(0, 0, 0), one_like(self)));
            for i in 1..=d {
                let last = v[i - 1].mul(g);
                v.push(last);
            }
            v
        };
        let (px, py, pz) = (table(gx), table(gy), table(gz));
        let mut acc = HPoly::zero();
        for (e, c) in &self.terms {
            let term = px[e.0 as usize]
                .mul(&py[e.1 as usize])
                .mul(&pz[e.2 as usize])
                .scale(c);
            acc = merge_unchecked(acc, term);
        }
        Ok(acc)
    }

    /// Evaluates at a point given by three scalars.
    pub fn eval(&self, x: &Scalar, y: &Scalar, z: &Scalar) -> Scalar {
        let mut acc: Option<Scalar> = None;
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..e.0 {
                t = t.checked_mul(x).expect("mixed fields");
            }
            for _ in 0..e.1 {
                t = t.checked_mul(y).expect("mixed fields");
            }
            for _ in 0..e.2 {
                t = t.checked_mul(z).expect("mixed fields");
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a.checked_add(&t).expect("mixed fields"),
            });
        }
        acc.unwrap_or_else(|| x.mode().zero())
    }

    /// Vanishing order at the origin of the chart `axis = 1`: the minimal
    /// total degree in the two remaining variables among surviving monomials.
    pub fn order_at_origin(&self, axis: usize) -> Result<u32, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self
            .terms
            .keys()
            .map(|e| match axis {
                0 => e.1 as u32 + e.2 as u32,
                1 => e.0 as u32 + e.2 as u32,
                _ => e.0 as u32 + e.1 as u32,
            })
            .min()
            .unwrap())
    }

    /// Minimal exponent of a variable across all terms.
    pub fn min_exponent(&self, axis: usize) -> u32 {
        self.terms
            .keys()
            .map(|e| match axis {
                0 => e.0 as u32,
                1 => e.1 as u32,
                _ => e.2 as u32,
            })
            .min()
            .unwrap_or(0)
    }

    /// Divides by `x^i y^j z^k`; every term must be divisible.
    pub(crate) fn shift_down(&self, i: u16, j: u16, k: u16) -> HPoly {
        HPoly {
            degree: self.degree - (i as u32 + j as u32 + k as u32),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (Exp(e.0 - i, e.1 - j, e.2 - k), c.clone()))
                .collect(),
        }
    }

    /// Canonical normalization: leading coefficient scaled to 1.
    pub fn normalize(&self) -> HPoly {
        match self.leading() {
            None => HPoly::zero(),
            Some((_, c)) => {
                let inv = c.inv().expect("leading coefficient nonzero");
                self.scale(&inv)
            }
        }
    }

    /// A greatest common divisor, normalized monic in graded lex.
    pub fn gcd(&self, rhs: &HPoly) -> HPoly {
        gcd::hpoly_gcd(self, rhs)
    }

    /// Exact division; panics if `rhs` does not divide `self`.
    pub fn exact_div(&self, rhs: &HPoly) -> HPoly {
        gcd::hpoly_exact_div(self, rhs).expect("exact polynomial division")
    }

    pub(crate) fn sample_coeff(&self) -> Option<&Scalar> {
        self.terms.values().next()
    }
}

/// Adds term maps of equal degree without the public degree check; used in
/// substitution where homogeneity is structural.
fn merge_unchecked(a: HPoly, b: HPoly) -> HPoly {
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    let degree = a.degree;
    let mut terms = a.terms;
    for (e, c) in b.terms {
        match terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().checked_add(&c).expect("mixed fields");
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }
    if terms.is_empty() {
        HPoly::zero()
    } else {
        HPoly { degree, terms }
    }
}

pub(crate) fn one_like(p: &HPoly) -> Scalar {
    p.sample_coeff()
        .map(|c| c.mode().one())
        .unwrap_or_else(|| crate::scalar::FieldMode::Rational.one())
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Graded-lex descending: BTreeMap iterates ascending, so reverse.
        for (e, c) in self.terms.iter().rev() {
            let (neg, mag) = match c {
                Scalar::Rat(r) => {
                    use num_traits::Signed;
                    if r.is_negative() {
                        (true, Scalar::Rat(-r))
                    } else {
                        (false, c.clone())
                    }
                }
                Scalar::Fp { .. } => (false, c.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (e.0 == 0 && e.1 == 0 && e.2 == 0) {
                factors.push(format!("{mag}"));
            }
            for (v, n) in [("x", e.0), ("y", e.1), ("z", e.2)] {
                match n {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    _ => factors.push(format!("{v}^{n}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldMode;

    fn s(n: i64) -> Scalar {
        FieldMode::Rational.from_i64(n)
    }

    pub(crate) fn p(src: &str) -> HPoly {
        crate::parse::parse_poly(src, FieldMode::Rational).unwrap()
    }

    #[test]
    fn monomial_product() {
        assert_eq!(p("y*z").mul(&p("x*z")), p("x*y*z^2"));
    }

    #[test]
    fn linear_sum() {
        assert_eq!(p("z-x").add(&p("x")).unwrap(), p("z"));
    }

    #[test]
    fn expanded_product() {
        // (z−x)(z−y) = z² − xz − yz + xy, expanded by hand.
        assert_eq!(p("z-x").mul(&p("z-y")), p("z^2 - x*z - y*z + x*y"));
    }

    #[test]
    fn degree_mismatch_reported() {
        assert_eq!(
            p("x").add(&p("x^2")),
            Err(PolyError::DegreeMismatch(1, 2))
        );
    }

    #[test]
    fn substitute_examples() {
        let (gx, gy, gz) = (p("y*z"), p("x*z"), p("x*y"));
        assert_eq!(p("x*y").substitute(&gx, &gy, &gz).unwrap(), p("x*y*z^2"));
        assert_eq!(p("x").substitute(&gx, &gy, &gz).unwrap(), gx);
        assert_eq!(p("z-x").substitute(&gx, &gy, &gz).unwrap(), p("x*y - y*z"));
    }

    #[test]
    fn substitute_agrees_with_evaluation() {
        // Independent oracle: f(g(P)) = (f∘g)(P) at sample points.
        let f = p("x^2 - 2*y*z + 3*z^2");
        let (gx, gy, gz) = (p("y*z"), p("x*z - z^2"), p("x*y + y^2"));
        let sub = f.substitute(&gx, &gy, &gz).unwrap();
        for (a, b, c) in [(1i64, 2i64, 3i64), (-1, 5, 2), (0, 1, 1), (7, -3, 4)] {
            let (x, y, z) = (s(a), s(b), s(c));
            let via_sub = sub.eval(&x, &y, &z);
            let via_comp = f.eval(&gx.eval(&x, &y, &z), &gy.eval(&x, &y, &z), &gz.eval(&x, &y, &z));
            assert_eq!(via_sub, via_comp);
        }
    }

    #[test]
    fn order_at_origin_examples() {
        assert_eq!(p("y*z").order_at_origin(2).unwrap(), 1);
        assert_eq!(p("z^2").order_at_origin(2).unwrap(), 0);
        assert_eq!(p("x*y").order_at_origin(2).unwrap(), 2);
        assert_eq!(HPoly::zero().order_at_origin(2), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn display_round_trip_shape() {
        let f = p("x^2 - x*z + 2*y*z");
        assert_eq!(f.to_string(), "x^2 - x*z + 2*y*z");
        assert_eq!(p(&f.to_string()), f);
    }
}
