//! Points of the projective plane with exact coordinates.

use crate::scalar::{FieldMode, Scalar};
use std::fmt;

/// A point of P² as a coordinate triple, canonically scaled so that the
/// first nonzero coordinate is 1. Equality is projective equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: [Scalar; 3],
}

impl ProjPoint {
    /// Builds a point; `None` when all coordinates vanish.
    pub fn new(coords: [Scalar; 3]) -> Option<ProjPoint> {
        let lead = coords.iter().find(|c| !c.is_zero())?;
        let inv = lead.inv().expect("nonzero");
        Some(ProjPoint {
            coords: [
                coords[0].checked_mul(&inv).expect("mixed fields"),
                coords[1].checked_mul(&inv).expect("mixed fields"),
                coords[2].checked_mul(&inv).expect("mixed fields"),
            ],
        })
    }

    pub fn from_ints(mode: FieldMode, a: i64, b: i64, c: i64) -> ProjPoint {
        ProjPoint::new([mode.from_i64(a), mode.from_i64(b), mode.from_i64(c)])
            .expect("not all zero")
    }

    /// The coordinate points `[1:0:0]`, `[0:1:0]`, `[0:0:1]`.
    pub fn coordinate(mode: FieldMode, i: usize) -> ProjPoint {
        let mut v = [mode.zero(), mode.zero(), mode.zero()];
        v[i] = mode.one();
        ProjPoint { coords: v }
    }

    pub fn coords(&self) -> &[Scalar; 3] {
        &self.coords
    }

    /// Index of a nonzero coordinate (the first).
    pub fn pivot(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} : {} : {}]",
            self.coords[0], self.coords[1], self.coords[2]
        )
    }
}

/// Determinant test for collinearity of three points (not necessarily
/// distinct; callers wanting the geometric predicate must dedupe first).
pub fn det3(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Scalar {
    let a = p.coords();
    let b = q.coords();
    let c = r.coords();
    let m = |i: usize, j: usize, k: usize| -> Scalar {
        a[i].checked_mul(&b[j].checked_mul(&c[k]).expect("mixed"))
            .expect("mixed")
    };
    let pos = m(0, 1, 2).checked_add(&m(1, 2, 0)).unwrap().checked_add(&m(2, 0, 1)).unwrap();
    let neg = m(0, 2, 1).checked_add(&m(1, 0, 2)).unwrap().checked_add(&m(2, 1, 0)).unwrap();
    pos.checked_sub(&neg).unwrap()
}
