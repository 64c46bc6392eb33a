//! Gcd of homogeneous trivariate polynomials.
//!
//! A homogeneous polynomial with a `z`-free term dehomogenizes (`z := 1`) to
//! a bivariate polynomial of the same total degree, and homogenization is
//! multiplicative, so factorizations transfer both ways. The gcd therefore
//! reduces to: strip monomial content, dehomogenize, run a primitive
//! pseudo-remainder sequence in `(ℚ or F_p)[y][x]`, and rehomogenize.

use super::univar::UniPoly;
use super::{one_like, Exp, HPoly};
use crate::scalar::Scalar;

/// Bivariate polynomial in `(x, y)` as coefficients in `y` per `x`-power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BiPoly {
    /// `coeffs[i]` is the coefficient of `x^i`, a polynomial in `y`.
    pub coeffs: Vec<UniPoly>,
}

impl BiPoly {
    fn normalize(mut self) -> BiPoly {
        while self.coeffs.last().is_some_and(UniPoly::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn deg_x(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn scale(&self, c: &UniPoly) -> BiPoly {
        BiPoly {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    fn exact_div_content(&self, c: &UniPoly) -> BiPoly {
        BiPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| a.exact_div(c).expect("content divides"))
                .collect(),
        }
    }

    fn content_x(&self) -> UniPoly {
        let mut g = UniPoly::zero();
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() { c.canon_scaled() } else { g.gcd(c) };
            if g.degree() == Some(0) {
                break;
            }
        }
        g
    }

    fn primitive_part(&self) -> BiPoly {
        let c = self.content_x();
        if c.is_zero() || c.degree() == Some(0) {
            return self.clone().normalize();
        }
        self.exact_div_content(&c)
    }

    /// Pseudo-remainder of `self` by `rhs` in `x`.
    fn prem(&self, rhs: &BiPoly) -> BiPoly {
        let db = rhs.deg_x();
        let lb = rhs.coeffs.last().unwrap().clone();
        let mut rem = self.clone().normalize();
        while !rem.is_zero() && rem.deg_x() >= db {
            let da = rem.deg_x();
            let la = rem.coeffs.last().unwrap().clone();
            // rem := lb·rem − la·x^(da−db)·rhs
            let mut next = rem.scale(&lb);
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let idx = da - db + j;
                next.coeffs[idx] = next.coeffs[idx].sub(&la.mul(b));
            }
            rem = next.normalize();
            if rem.deg_x() == da && !rem.is_zero() {
                // leading must have cancelled
                debug_assert!(rem.coeffs.last().unwrap().is_zero());
                rem = rem.normalize();
            }
        }
        rem
    }

    fn gcd(&self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return rhs.primitive_part();
        }
        if rhs.is_zero() {
            return self.primitive_part();
        }
        let ca = self.content_x();
        let cb = rhs.content_x();
        let cg = ca.gcd(&cb);
        let mut a = self.exact_div_content(&ca);
        let mut b = rhs.exact_div_content(&cb);
        if a.deg_x() < b.deg_x() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.deg_x() == 0 {
                // Primitive with deg_x = 0 means a unit in x; gcd is 1.
                return BiPoly {
                    coeffs: vec![cg],
                }
                .normalize();
            }
            let r = a.prem(&b).primitive_part();
            a = std::mem::replace(&mut b, r);
        }
        a.primitive_part().scale(&cg).normalize()
    }
}

/// Dehomogenizes (z := 1) a polynomial with a z-free term.
fn dehomogenize(f: &HPoly) -> BiPoly {
    let mode = f.sample_coeff().expect("nonzero").mode();
    let dx = f.terms().map(|(e, _)| e.0).max().unwrap() as usize;
    let mut coeffs: Vec<Vec<Scalar>> = Vec::new();
    for _ in 0..=dx {
        coeffs.push(Vec::new());
    }
    for (e, c) in f.terms() {
        let row = &mut coeffs[e.0 as usize];
        let j = e.1 as usize;
        if row.len() <= j {
            row.resize(j + 1, mode.zero());
        }
        row[j] = c.clone();
    }
    BiPoly {
        coeffs: coeffs.into_iter().map(UniPoly::from_coeffs).collect(),
    }
    .normalize()
}

/// Homogenizes a bivariate polynomial to the given total degree with `z`.
fn homogenize(b: &BiPoly, degree: u32) -> HPoly {
    let mut terms: Vec<(Exp, Scalar)> = Vec::new();
    for (i, row) in b.coeffs.iter().enumerate() {
        for (j, c) in row.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = degree as usize - i - j;
            terms.push((Exp(i as u16, j as u16, k as u16), c.clone()));
        }
    }
    HPoly::from_terms(terms).expect("homogenization is homogeneous")
}

fn total_degree(b: &BiPoly) -> u32 {
    let mut d = 0;
    for (i, row) in b.coeffs.iter().enumerate() {
        if let Some(dj) = row.degree() {
            d = d.max((i + dj) as u32);
        }
    }
    d
}

pub(crate) fn hpoly_gcd(f: &HPoly, g: &HPoly) -> HPoly {
    if f.is_zero() {
        return g.normalize();
    }
    if g.is_zero() {
        return f.normalize();
    }
    // Shared monomial content.
    let (fx, fy, fz) = (f.min_exponent(0), f.min_exponent(1), f.min_exponent(2));
    let (gx, gy, gz) = (g.min_exponent(0), g.min_exponent(1), g.min_exponent(2));
    let shared = (
        fx.min(gx) as u16,
        fy.min(gy) as u16,
        fz.min(gz) as u16,
    );
    let f1 = f.shift_down(fx as u16, fy as u16, fz as u16);
    let g1 = g.shift_down(gx as u16, gy as u16, gz as u16);
    // Both now have a z-free term, so dehomogenization preserves degrees and
    // factorizations.
    let bf = dehomogenize(&f1);
    let bg = dehomogenize(&g1);
    let bh = bf.gcd(&bg);
    let h = homogenize(&bh, total_degree(&bh));
    let mono = HPoly::monomial(Exp(shared.0, shared.1, shared.2), one_like(f));
    h.mul(&mono).normalize()
}

/// Exact division of homogeneous polynomials; `None` if not divisible.
pub(crate) fn hpoly_exact_div(f: &HPoly, g: &HPoly) -> Option<HPoly> {
    if f.is_zero() {
        return Some(HPoly::zero());
    }
    if g.is_zero() {
        return None;
    }
    // Long division in graded lex: repeatedly cancel the leading term.
    let mut rem = f.clone();
    let mut quot_terms: Vec<(Exp, Scalar)> = Vec::new();
    let (ge, gc) = {
        let (e, c) = g.leading().unwrap();
        (*e, c.clone())
    };
    let gc_inv = gc.inv().expect("nonzero leading");
    while !rem.is_zero() {
        let (re, rc) = {
            let (e, c) = rem.leading().unwrap();
            (*e, c.clone())
        };
        if re.0 < ge.0 || re.1 < ge.1 || re.2 < ge.2 {
            return None;
        }
        let qe = Exp(re.0 - ge.0, re.1 - ge.1, re.2 - ge.2);
        let qc = rc.checked_mul(&gc_inv).expect("mixed fields");
        quot_terms.push((qe, qc.clone()));
        let t = HPoly::monomial(qe, qc).mul(g);
        rem = rem.sub(&t).expect("same degree");
    }
    let q = HPoly::from_terms(quot_terms).ok()?;
    Some(q)
}

#[cfg(test)]
mod tests {
    use crate::hpoly::HPoly;
    use crate::parse::parse_poly;
    use crate::scalar::FieldMode;

    fn p(src: &str) -> HPoly {
        parse_poly(src, FieldMode::Rational).unwrap()
    }

    #[test]
    fn monomial_gcd() {
        assert_eq!(p("x^2*y*z").gcd(&p("x*y^2*z")), p("x*y*z"));
    }

    #[test]
    fn coprime_linear_forms() {
        assert_eq!(p("z-x").gcd(&p("z-y")), p("1").scale(&FieldMode::Rational.one()));
        assert_eq!(p("z-x").gcd(&p("z-y")).degree(), 0);
    }

    #[test]
    fn gcd_of_equal_is_monic_self() {
        let f = p("2*x*z - 2*y*z");
        let g = f.gcd(&f);
        assert_eq!(g, p("x*z - y*z"));
    }

    #[test]
    fn gcd_divides_and_cofactors_coprime() {
        let a = p("x + 2*z");
        let b = p("y - z");
        let c = p("x^2 + y*z");
        let f = a.mul(&b).mul(&c);
        let g = a.mul(&c).mul(&p("x - y + z"));
        let h = f.gcd(&g);
        assert_eq!(h, a.mul(&c).normalize());
        let cf = f.exact_div(&h);
        let cg = g.exact_div(&h);
        assert_eq!(cf.gcd(&cg).degree(), 0);
    }

    #[test]
    fn gcd_over_prime_field() {
        let mode = FieldMode::prime(1_048_583).unwrap();
        let a = parse_poly("x + 2*z", mode).unwrap();
        let b = parse_poly("y - 5*z", mode).unwrap();
        let f = a.mul(&b);
        let g = a.mul(&parse_poly("x - y", mode).unwrap());
        assert_eq!(f.gcd(&g), a.normalize());
    }

    #[test]
    fn exact_div_rejects_nondivisor() {
        assert!(super::hpoly_exact_div(&p("x^2 + y*z"), &p("x + z")).is_none());
    }
}
