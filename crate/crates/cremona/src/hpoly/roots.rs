//! Exact root extraction for univariate polynomials over the working field.
//!
//! Rational mode finds all rational roots by Hensel-lifting the roots of the
//! squarefree part modulo a small prime and applying rational reconstruction;
//! candidates are verified exactly, so the routine never reports a spurious
//! root. Prime-field mode splits off the linear factors of `gcd(f, t^p − t)`
//! in the Cantor–Zassenhaus style with a deterministic shift sequence.

use super::univar::UniPoly;
use crate::scalar::{is_prime_u64, rational_reconstruct, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// All roots of `f` in the working field. `f` must be nonzero.
pub(crate) fn field_roots(f: &UniPoly) -> Vec<Scalar> {
    assert!(!f.is_zero(), "roots of the zero polynomial");
    match f.coeffs[0].mode() {
        crate::scalar::FieldMode::Rational => rational_roots(f),
        crate::scalar::FieldMode::Prime(p) => fp_roots(f, p),
    }
}

#[cfg(test)]
/// True when the squarefree part of `f` splits off a factor of degree ≥ 2
/// after removing all roots in the working field, i.e. `f` has irreducible
/// non-linear content whose roots live only in an extension field.
pub(crate) fn has_nonrational_factor(f: &UniPoly) -> bool {
    let sf = f.squarefree_part();
    let roots = field_roots(&sf);
    sf.degree().unwrap_or(0) > roots.len()
}

/// The cofactor of the squarefree part after dividing out all field roots.
pub(crate) fn nonrational_cofactor(f: &UniPoly) -> UniPoly {
    let mut sf = f.squarefree_part();
    for r in field_roots(&sf) {
        let mode = r.mode();
        let lin = UniPoly::from_coeffs(vec![r.neg(), mode.one()]);
        sf = sf.exact_div(&lin).expect("root divides");
    }
    sf
}

fn rational_roots(f: &UniPoly) -> Vec<Scalar> {
    let sf = f.squarefree_part();
    let deg = sf.degree().unwrap_or(0);
    if deg == 0 {
        return vec![];
    }
    let (ints, _) = sf.to_integer_coeffs();
    if deg == 1 {
        let r = BigRational::new(-ints[0].clone(), ints[1].clone());
        return vec![Scalar::Rat(r)];
    }
    // Root-candidate generation modulo a prime where sf stays squarefree.
    let height: BigInt = ints.iter().map(|c| c.abs()).max().unwrap();
    let mut p: u64 = 10007;
    let (p, residues) = loop {
        while !is_prime_u64(p) {
            p += 2;
        }
        if let Some(res) = roots_mod_p_if_squarefree(&ints, p) {
            break (p, res);
        }
        p += 2;
    };
    // Any rational root u/v of the primitive integer polynomial satisfies
    // u | a₀ and v | a_n, so |u|, |v| ≤ height. Lift until m > 2·height².
    let target: BigInt = BigInt::from(2) * &height * &height + 1;
    let mut out = Vec::new();
    'cand: for r0 in residues {
        let mut m = BigInt::from(p);
        let mut r = BigInt::from(r0);
        while m < target {
            // Newton step to modulus m².
            let m2 = &m * &m;
            let fr = eval_int_mod(&ints, &r, &m2);
            let dfr = eval_int_deriv_mod(&ints, &r, &m2);
            let inv = match mod_inverse(&dfr.mod_floor(&m), &m) {
                Some(i) => i,
                None => continue 'cand,
            };
            r = (&r - fr * inv).mod_floor(&m2);
            m = m2;
        }
        if let Some((u, v)) = rational_reconstruct(&r, &m, &height) {
            let cand = Scalar::Rat(BigRational::new(u, v));
            if sf.eval(&cand).is_zero() && !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out.sort();
    out
}

/// Roots of the integer polynomial mod p, or `None` when it degenerates
/// (leading coefficient vanishes or the reduction is not squarefree).
fn roots_mod_p_if_squarefree(ints: &[BigInt], p: u64) -> Option<Vec<u64>> {
    let pm = BigInt::from(p);
    let red: Vec<u64> = ints
        .iter()
        .map(|c| (c.mod_floor(&pm)).to_u64_digits().1.first().copied().unwrap_or(0))
        .collect();
    if *red.last().unwrap() == 0 {
        return None;
    }
    let mode = crate::scalar::FieldMode::Prime(p);
    let fp = UniPoly::from_coeffs(red.iter().map(|&v| Scalar::Fp { v, p }).collect());
    let g = fp.gcd(&fp.derivative());
    if g.degree() != Some(0) {
        return None;
    }
    // Brute force: p is chosen small (≈ 10⁴).
    let mut roots = Vec::new();
    for v in 0..p {
        if fp.eval(&mode.from_i64(v as i64)).is_zero() {
            roots.push(v);
        }
    }
    Some(roots)
}

fn eval_int_mod(ints: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in ints.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn eval_int_deriv_mod(ints: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, c) in ints.iter().enumerate().skip(1).rev() {
        acc = (acc * x + c * BigInt::from(i)).mod_floor(m);
    }
    acc
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Roots over F_p: strip to the product of distinct linear factors via
/// `gcd(f, t^p − t)`, then split with shifted half-power gcds.
fn fp_roots(f: &UniPoly, p: u64) -> Vec<Scalar> {
    let mode = crate::scalar::FieldMode::Prime(p);
    let monic = {
        let inv = f.leading().unwrap().inv().unwrap();
        f.scale(&inv)
    };
    if monic.degree() == Some(0) {
        return vec![];
    }
    // t^p mod f by square-and-multiply.
    let xp = pow_x_mod(p, &monic, p);
    let x = UniPoly::from_coeffs(vec![mode.zero(), mode.one()]);
    let lin_part = monic.gcd(&xp.sub(&x));
    let mut roots = Vec::new();
    split_linear(&lin_part, p, &mut roots);
    let mut out: Vec<Scalar> = roots.into_iter().map(|v| Scalar::Fp { v, p }).collect();
    out.sort();
    out.dedup();
    out
}

fn split_linear(g: &UniPoly, p: u64, out: &mut Vec<u64>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let c0 = &g.coeffs[0];
            let c1 = &g.coeffs[1];
            let r = c0.neg().checked_div(c1).unwrap();
            if let Scalar::Fp { v, .. } = r {
                out.push(v);
            }
        }
        Some(_) => {
            let mode = crate::scalar::FieldMode::Prime(p);
            // Deterministic shift sequence; each shift splits with
            // probability about 1/2 over the random-looking residues.
            for a in 1u64.. {
                let shifted = UniPoly::from_coeffs(vec![mode.from_i64(a as i64), mode.one()]);
                let h = poly_powmod(&shifted, (p - 1) / 2, g);
                let h1 = h.sub(&UniPoly::constant(mode.one()));
                let d = g.gcd(&h1);
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && dd < g.degree().unwrap() {
                    let other = g.exact_div(&d).expect("factor divides");
                    split_linear(&d, p, out);
                    split_linear(&other, p, out);
                    return;
                }
            }
        }
    }
}

fn poly_mulmod(a: &UniPoly, b: &UniPoly, m: &UniPoly) -> UniPoly {
    let (_, r) = a.mul(b).divrem(m);
    r
}

fn poly_powmod(base: &UniPoly, mut e: u64, m: &UniPoly) -> UniPoly {
    let mode = base.coeffs[0].mode();
    let mut acc = UniPoly::constant(mode.one());
    let mut b = {
        let (_, r) = base.divrem(m);
        r
    };
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m);
        }
        b = poly_mulmod(&b, &b, m);
        e >>= 1;
    }
    acc
}

fn pow_x_mod(e: u64, m: &UniPoly, p: u64) -> UniPoly {
    let mode = crate::scalar::FieldMode::Prime(p);
    let x = UniPoly::from_coeffs(vec![mode.zero(), mode.one()]);
    poly_powmod(&x, e, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldMode;

    fn up(cs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(cs.iter().map(|&n| FieldMode::Rational.from_i64(n)).collect())
    }

    #[test]
    fn rational_roots_of_factored_quartic() {
        // (t - 1/2)(t + 3)(2t - 5)(t + 7) expanded via UniPoly arithmetic.
        let f = up(&[-1, 2])
            .mul(&up(&[3, 1]))
            .mul(&up(&[-5, 2]))
            .mul(&up(&[7, 1]));
        let mut roots = rational_roots(&f);
        roots.sort();
        let expect: Vec<Scalar> = vec![
            FieldMode::Rational.from_i64(-7),
            FieldMode::Rational.from_i64(-3),
            FieldMode::Rational.from_ratio(1, 2).unwrap(),
            FieldMode::Rational.from_ratio(5, 2).unwrap(),
        ];
        let mut expect = expect;
        expect.sort();
        assert_eq!(roots, expect);
    }

    #[test]
    fn irrational_quadratic_has_no_roots() {
        let f = up(&[-2, 0, 1]); // t² − 2
        assert!(rational_roots(&f).is_empty());
        assert!(has_nonrational_factor(&f));
        assert_eq!(nonrational_cofactor(&f).degree(), Some(2));
    }

    #[test]
    fn mixed_factorization() {
        // (t² − 2)(t − 4): one rational root, one irrational quadratic.
        let f = up(&[-2, 0, 1]).mul(&up(&[-4, 1]));
        let roots = rational_roots(&f);
        assert_eq!(roots, vec![FieldMode::Rational.from_i64(4)]);
        assert!(has_nonrational_factor(&f));
    }

    #[test]
    fn repeated_roots_found_once() {
        let f = up(&[-1, 1]).mul(&up(&[-1, 1])).mul(&up(&[2, 1]));
        let roots = rational_roots(&f);
        assert_eq!(
            roots,
            vec![
                FieldMode::Rational.from_i64(-2),
                FieldMode::Rational.from_i64(1)
            ]
        );
    }

    #[test]
    fn fp_roots_match_brute_force() {
        let p = 1_048_583u64;
        let mode = FieldMode::Prime(p);
        // (t − 5)(t − 77)(t² + 1)… t²+1 may or may not split; build from roots.
        let f = UniPoly::from_coeffs(vec![mode.from_i64(-5), mode.one()])
            .mul(&UniPoly::from_coeffs(vec![mode.from_i64(-77), mode.one()]))
            .mul(&UniPoly::from_coeffs(vec![mode.from_i64(3), mode.zero(), mode.one()]));
        let roots = fp_roots(&f, p);
        for r in &roots {
            assert!(f.eval(r).is_zero());
        }
        assert!(roots.contains(&mode.from_i64(5)));
        assert!(roots.contains(&mode.from_i64(77)));
    }

    #[test]
    fn big_coefficient_roots() {
        // (t − 10^40)(t + 1): exercises the lifting bound with large height.
        let big = BigInt::from(10).pow(40);
        let f = UniPoly::from_coeffs(vec![
            Scalar::Rat(BigRational::from(-big.clone())),
            Scalar::Rat(BigRational::one()),
        ])
        .mul(&up(&[1, 1]));
        let roots = rational_roots(&f);
        assert!(roots.contains(&Scalar::Rat(BigRational::from(big))));
        assert!(roots.contains(&FieldMode::Rational.from_i64(-1)));
    }
}
