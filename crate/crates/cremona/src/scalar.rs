//! Exact field scalars: arbitrary-precision rationals or a prime field `F_p`.
//!
//! Every symbolic computation in this crate runs over one of the two field
//! variants. Rationals are always stored reduced with a positive denominator
//! (guaranteed by `num_rational::Ratio`). Prime-field elements carry their
//! modulus so that mixing elements of different fields is detectable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed field variants (rational vs F_p or different primes)")]
    MixedFields,
    #[error("modulus {0} is not a prime > 2^20")]
    BadPrime(u64),
}

/// Field selector fixed at configuration time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldMode {
    /// Arbitrary-precision rationals.
    Rational,
    /// Prime field `F_p`; the prime must exceed `2^20`.
    Prime(u64),
}

impl FieldMode {
    /// Validates a prime-field modulus: `p > 2^20` and `p` prime.
    pub fn prime(p: u64) -> Result<FieldMode, NumError> {
        if p > (1 << 20) && is_prime_u64(p) {
            Ok(FieldMode::Prime(p))
        } else {
            Err(NumError::BadPrime(p))
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldMode::Rational => Scalar::Rat(BigRational::zero()),
            FieldMode::Prime(p) => Scalar::Fp { v: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            FieldMode::Rational => Scalar::Rat(BigRational::one()),
            FieldMode::Prime(p) => Scalar::Fp { v: 1, p },
        }
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            FieldMode::Rational => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldMode::Prime(p) => Scalar::Fp {
                v: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    /// `num/den` in this field. Fails on `den = 0` (or `den ≡ 0 mod p`).
    pub fn from_ratio(self, num: i64, den: i64) -> Result<Scalar, NumError> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            FieldMode::Rational => Scalar::Rat(BigRational::from(n.clone())),
            FieldMode::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                let v = r.to_u64_digits().1.first().copied().unwrap_or(0);
                Scalar::Fp { v, p }
            }
        }
    }

    pub fn from_big_ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar, NumError> {
        self.from_bigint(num).checked_div(&self.from_bigint(den))
    }
}

/// An exact field element, tagged by its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn mode(&self) -> FieldMode {
        match self {
            Scalar::Rat(_) => FieldMode::Rational,
            Scalar::Fp { p, .. } => FieldMode::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    fn same_field(&self, rhs: &Scalar) -> Result<(), NumError> {
        match (self, rhs) {
            (Scalar::Rat(_), Scalar::Rat(_)) => Ok(()),
            (Scalar::Fp { p: a, .. }, Scalar::Fp { p: b, .. }) if a == b => Ok(()),
            _ => Err(NumError::MixedFields),
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        self.same_field(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: addmod(*a, *b, *p),
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        self.same_field(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: submod(*a, *b, *p),
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        self.same_field(rhs)?;
        Ok(match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: mulmod(*a, *b, *p),
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        self.checked_mul(&rhs.inv()?)
    }

    /// Multiplicative inverse; `DivisionByZero` on zero.
    pub fn inv(&self) -> Result<Scalar, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: invmod(*v, *p),
                p: *p,
            },
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }

    /// Integer square root test: `Some(r)` with `r² = self` when the scalar
    /// is a perfect square in its field (rational case only checks squares
    /// of rationals; `F_p` uses Euler's criterion plus search-free lifting).
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => {
                if r.is_negative() {
                    return None;
                }
                let num = r.numer().magnitude();
                let den = r.denom().magnitude();
                let sn = num.sqrt();
                let sd = den.sqrt();
                if &sn * &sn == *num && &sd * &sd == *den {
                    Some(Scalar::Rat(BigRational::new(
                        BigInt::from(sn),
                        BigInt::from(sd),
                    )))
                } else {
                    None
                }
            }
            Scalar::Fp { v, p } => fp_sqrt(*v, *p).map(|r| Scalar::Fp { v: r, p: *p }),
        }
    }
}

// Operator impls assume both operands live in the same field; the parsers and
// constructors establish that invariant, so a violation is a programming
// error and panics. Fallible code paths use the checked_* methods.
macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar arithmetic on mixed fields")
            }
        }
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}
scalar_binop!(Add, add, checked_add);
scalar_binop!(Sub, sub, checked_sub);
scalar_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}
impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

// Canonical string serialization: rationals as `-3` / `7/2`, prime-field
// elements as `v mod p`. Strings keep the JSON certificates bit-exact.
impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Rat(_) => ser.serialize_str(&self.to_string()),
            Scalar::Fp { v, p } => ser.serialize_str(&format!("{v} mod {p}")),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Scalar, D::Error> {
        use serde::de::Error;
        let s = String::deserialize(de)?;
        Scalar::from_canonical_str(&s).ok_or_else(|| D::Error::custom(format!("bad scalar: {s}")))
    }
}

impl Scalar {
    pub(crate) fn from_canonical_str(s: &str) -> Option<Scalar> {
        if let Some((v, p)) = s.split_once(" mod ") {
            let v: u64 = v.trim().parse().ok()?;
            let p: u64 = p.trim().parse().ok()?;
            if v < p {
                return Some(Scalar::Fp { v, p });
            }
            return None;
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            return Some(Scalar::Rat(BigRational::new(n, d)));
        }
        let n: BigInt = s.trim().parse().ok()?;
        Some(Scalar::Rat(BigRational::from(n)))
    }
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse mod p by the extended Euclidean algorithm. `v` must be nonzero.
fn invmod(v: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, v as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "modulus must be prime and v nonzero");
    t0.rem_euclid(p as i128) as u64
}

/// Square root in `F_p` (p odd) via Tonelli–Shanks; `None` for non-residues.
fn fp_sqrt(v: u64, p: u64) -> Option<u64> {
    if v == 0 {
        return Some(0);
    }
    if powmod(v, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod(v, (p + 1) / 4, p));
    }
    // Tonelli–Shanks for p ≡ 1 mod 4.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(v, q, p);
    let mut r = powmod(v, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// Deterministic Miller–Rabin for u64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Rational reconstruction: the unique `u/v` with `u ≡ r·v (mod m)`,
/// `|u| ≤ bound`, `0 < v ≤ bound`, provided `m > 2·bound²`.
pub(crate) fn rational_reconstruct(r: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let mut r0 = m.clone();
    let mut r1 = r.mod_floor(m);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while r1.magnitude() > bound.magnitude() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.magnitude() > bound.magnitude() {
        return None;
    }
    if t1.is_negative() {
        r1 = -r1;
        t1 = -t1;
    }
    if r1.gcd(&t1).is_one() {
        Some((r1, t1))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        FieldMode::Rational.from_ratio(n, d).unwrap()
    }

    #[test]
    fn rational_examples() {
        assert_eq!(q(2, 3).checked_add(&q(1, 6)).unwrap(), q(5, 6));
        assert_eq!(q(1, 2).checked_mul(&q(2, 1)).unwrap(), q(1, 1));
    }

    #[test]
    fn fp_inverse_example() {
        // Oracle: extended Euclid; 3 * 333333336 = 1000000008 ≡ 1.
        let mode = FieldMode::prime(1_000_000_007).unwrap();
        let three = mode.from_i64(3);
        let inv = three.inv().unwrap();
        assert_eq!(inv, mode.from_i64(333_333_336));
        assert!(three.checked_mul(&inv).unwrap().is_one());
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert_eq!(q(1, 1).checked_div(&q(0, 1)), Err(NumError::DivisionByZero));
        let mode = FieldMode::prime(1_048_583).unwrap();
        assert_eq!(mode.one().checked_div(&mode.zero()), Err(NumError::DivisionByZero));
    }

    #[test]
    fn mixed_fields_rejected() {
        let mode = FieldMode::prime(1_048_583).unwrap();
        assert_eq!(q(1, 1).checked_add(&mode.one()), Err(NumError::MixedFields));
        let other = FieldMode::prime(1_000_000_007).unwrap();
        assert_eq!(
            mode.one().checked_mul(&other.one()),
            Err(NumError::MixedFields)
        );
    }

    #[test]
    fn bad_primes_rejected() {
        assert!(FieldMode::prime(1_048_576).is_err()); // 2^20, too small and composite
        assert!(FieldMode::prime(1_048_585).is_err()); // composite
        assert!(FieldMode::prime(65_537).is_err()); // prime but ≤ 2^20
    }

    #[test]
    fn rationals_stay_reduced() {
        let a = q(4, 6);
        match &a {
            Scalar::Rat(r) => {
                assert_eq!(r.numer(), &BigInt::from(2));
                assert_eq!(r.denom(), &BigInt::from(3));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn fp_sqrt_agrees_with_squaring() {
        let p = 1_048_583;
        for v in [1u64, 2, 3, 4, 5, 100, 999, 123456] {
            let sq = mulmod(v, v, p);
            let r = fp_sqrt(sq, p).expect("square must have a root");
            assert_eq!(mulmod(r, r, p), sq);
        }
    }

    proptest! {
        #[test]
        fn field_axioms_rational(an in -50i64..50, ad in 1i64..20,
                                 bn in -50i64..50, bd in 1i64..20,
                                 cn in -50i64..50, cd in 1i64..20) {
            let (a, b, c) = (q(an, ad), q(bn, bd), q(cn, cd));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
            // Reduction invariant after arithmetic.
            if let Scalar::Rat(r) = &a * &b {
                prop_assert!(r.numer().gcd(r.denom()).is_one() || r.numer().is_zero());
            }
        }

        #[test]
        fn field_axioms_fp(a in 0u64..1_048_583, b in 0u64..1_048_583, c in 0u64..1_048_583) {
            let m = FieldMode::Prime(1_048_583);
            let (a, b, c) = (Scalar::Fp { v: a, p: 1_048_583 },
                             Scalar::Fp { v: b, p: 1_048_583 },
                             Scalar::Fp { v: c, p: 1_048_583 });
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
            prop_assert_eq!(&a - &a, m.zero());
        }
    }
}
