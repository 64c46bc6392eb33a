//! Proper base points of maps of degree ≤ 2: common rational zeros of the
//! component conics, by pairwise Sylvester resultants in `x` after a shear
//! that moves `[1:0:0]` off all components.
//!
//! Fibers with a rational `[y:z]` are resolved exactly (univariate gcd in
//! the fiber). A leftover factor of the resultant of degree ≥ 2 signals
//! intersection points over an extension field; it is reported as
//! `IrrationalBasePoint` when it is consistent with the remaining component
//! resultants (detection by resultant factorization degree).

use super::{CreMap, LinMap, MapError, ProjPoint};
use crate::hpoly::roots::{field_roots, nonrational_cofactor};
use crate::hpoly::univar::UniPoly;
use crate::hpoly::HPoly;
use crate::scalar::{FieldMode, Scalar};

pub(crate) fn proper_base_points(f: &CreMap) -> Result<Vec<ProjPoint>, MapError> {
    match f.degree() {
        1 => Ok(vec![]),
        2 => base_points_deg2(f),
        d => Err(MapError::UnsupportedDegree(d)),
    }
}

fn base_points_deg2(f: &CreMap) -> Result<Vec<ProjPoint>, MapError> {
    let mode = f.mode();
    let shear = find_shear(f.components(), mode);
    let sheared: Vec<HPoly> = f
        .components()
        .iter()
        .map(|c| substitute_lin(c, &shear))
        .collect();
    let (d0, d1, d2) = (&sheared[0], &sheared[1], &sheared[2]);

    let mut pts: Vec<ProjPoint> = Vec::new();
    let g = d0.gcd(d1);
    if g.degree() > 0 {
        // V(D0, D1) = V(g) ∪ V(D0/g, D1/g); intersect each part with D2.
        // Points on V(g) ∩ V(D2) vanish on the whole triple already.
        pts.extend(pair_intersections(&g, d2, &[], mode)?);
        let a = d0.exact_div(&g);
        let b = d1.exact_div(&g);
        pts.extend(pair_intersections(&a, &b, &[d2], mode)?);
    } else {
        pts.extend(pair_intersections(d0, d1, &[d2], mode)?);
    }

    // Map back through the shear, dedupe, sort for determinism.
    let mut out: Vec<ProjPoint> = pts.iter().map(|p| shear.apply(p)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// All rational common zeros of the coprime pair `(a, b)`, filtered so that
/// every polynomial in `consistency` vanishes as well. Both `a` and `b`
/// must not vanish at `[1:0:0]`.
fn pair_intersections(
    a: &HPoly,
    b: &HPoly,
    consistency: &[&HPoly],
    mode: FieldMode,
) -> Result<Vec<ProjPoint>, MapError> {
    let res = sylvester_resultant(a, b, mode);
    assert!(
        !res.is_zero(),
        "resultant of a coprime pair with nonzero leading x-coefficients"
    );
    let r = res.as_unipoly();
    let mut fibers: Vec<(Scalar, Scalar)> = Vec::new();
    if r.degree().map(|d| d < res.deg).unwrap_or(true) {
        // Top coefficient vanished: the fiber z = 0, i.e. [y:z] = [1:0].
        fibers.push((mode.one(), mode.zero()));
    }
    if !r.is_zero() {
        for root in field_roots(&r) {
            fibers.push((root, mode.one()));
        }
        // Leftover non-linear factor: candidate irrational fibers. Consistent
        // with the rest of the triple ⇒ a base point over an extension field.
        let cof = nonrational_cofactor(&r);
        if cof.degree().unwrap_or(0) > 0 {
            let consistent = consistency.iter().all(|c| {
                let rc = sylvester_resultant(a, c, mode);
                let rc2 = sylvester_resultant(b, c, mode);
                let both = |form: &BinForm| -> bool {
                    if form.is_zero() {
                        return true;
                    }
                    let u = form.as_unipoly();
                    if u.is_zero() {
                        return true;
                    }
                    cof.gcd(&u.squarefree_part()).degree().unwrap_or(0) > 0
                };
                both(&rc) && both(&rc2)
            });
            if consistent {
                return Err(MapError::IrrationalBasePoint);
            }
        }
    }
    let mut out = Vec::new();
    for (y0, z0) in fibers {
        let ax = specialize(a, &y0, &z0);
        let bx = specialize(b, &y0, &z0);
        let g = match (ax.is_zero(), bx.is_zero()) {
            (true, true) => unreachable!("coprime pair vanishing on a line"),
            (true, false) => bx,
            (false, true) => ax,
            (false, false) => ax.gcd(&bx),
        };
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut xs = field_roots(&g);
        // Irrational x in this fiber: exact check against the consistency
        // polynomials, which live on the same fiber.
        let cof = nonrational_cofactor(&g);
        if cof.degree().unwrap_or(0) > 0 {
            let consistent = consistency.iter().all(|c| {
                let cx = specialize(c, &y0, &z0);
                cx.is_zero() || cof.gcd(&cx.squarefree_part()).degree().unwrap_or(0) > 0
            });
            if consistent {
                return Err(MapError::IrrationalBasePoint);
            }
        }
        xs.sort();
        for x0 in xs {
            let all_vanish = consistency
                .iter()
                .all(|c| specialize(c, &y0, &z0).eval(&x0).is_zero());
            if all_vanish {
                out.push(
                    ProjPoint::new([x0, y0.clone(), z0.clone()]).expect("fiber coords nonzero"),
                );
            }
        }
    }
    Ok(out)
}

/// Homogeneous binary form in `(y, z)`: `c[i]` is the coefficient of
/// `y^i z^(deg−i)`. The zero form is canonical with empty coefficients.
#[derive(Debug, Clone)]
struct BinForm {
    deg: usize,
    c: Vec<Scalar>,
}

impl BinForm {
    fn zero() -> BinForm {
        BinForm { deg: 0, c: vec![] }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn canon(mut self) -> BinForm {
        if self.c.iter().all(Scalar::is_zero) {
            self.c.clear();
            self.deg = 0;
        }
        self
    }

    fn add(&self, rhs: &BinForm) -> BinForm {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.deg, rhs.deg, "binary forms of equal degree");
        BinForm {
            deg: self.deg,
            c: self
                .c
                .iter()
                .zip(&rhs.c)
                .map(|(a, b)| a.checked_add(b).expect("mixed"))
                .collect(),
        }
        .canon()
    }

    fn neg(&self) -> BinForm {
        BinForm {
            deg: self.deg,
            c: self.c.iter().map(Scalar::neg).collect(),
        }
    }

    fn mul(&self, rhs: &BinForm, mode: FieldMode) -> BinForm {
        if self.is_zero() || rhs.is_zero() {
            return BinForm::zero();
        }
        let deg = self.deg + rhs.deg;
        let mut c = vec![mode.zero(); deg + 1];
        for (i, ai) in self.c.iter().enumerate() {
            for (j, bj) in rhs.c.iter().enumerate() {
                let t = ai.checked_mul(bj).expect("mixed");
                c[i + j] = c[i + j].checked_add(&t).unwrap();
            }
        }
        BinForm { deg, c }.canon()
    }

    /// Dehomogenized `R(t, 1)`; degree drop encodes the root at `[1:0]`.
    fn as_unipoly(&self) -> UniPoly {
        UniPoly::from_coeffs(self.c.clone())
    }
}

/// Coefficients of `f` as a polynomial in `x`: entry `i` is a binary form
/// in `(y, z)` of degree `deg f − i`.
fn x_coefficients(f: &HPoly, mode: FieldMode) -> Vec<BinForm> {
    let d = f.degree() as usize;
    let mut out: Vec<BinForm> = (0..=d)
        .map(|i| BinForm {
            deg: d - i,
            c: vec![mode.zero(); d - i + 1],
        })
        .collect();
    for (e, c) in f.terms() {
        out[e.0 as usize].c[e.1 as usize] = c.clone();
    }
    out.into_iter().map(BinForm::canon).collect()
}

/// Sylvester resultant in `x` of two homogeneous polynomials whose leading
/// `x`-coefficients are nonzero (guaranteed by the shear).
fn sylvester_resultant(f: &HPoly, g: &HPoly, mode: FieldMode) -> BinForm {
    let fc = x_coefficients(f, mode);
    let gc = x_coefficients(g, mode);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    assert!(
        !fc[m].is_zero() && !gc[n].is_zero(),
        "leading x-coefficients must be nonzero"
    );
    let size = m + n;
    // Row-major Sylvester matrix: n rows of f-coefficients, m rows of g.
    let mut mat: Vec<Vec<BinForm>> = vec![vec![BinForm::zero(); size]; size];
    for r in 0..n {
        for (k, c) in fc.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in gc.iter().rev().enumerate() {
            mat[n + r][r + k] = c.clone();
        }
    }
    det_binform(&mat, mode)
}

/// Determinant by Laplace expansion along the first column; the matrices
/// here are at most 4×4.
fn det_binform(mat: &[Vec<BinForm>], mode: FieldMode) -> BinForm {
    let n = mat.len();
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut acc = BinForm::zero();
    for r in 0..n {
        if mat[r][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BinForm>> = mat
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let sub = det_binform(&minor, mode);
        let term = mat[r][0].mul(&sub, mode);
        acc = if r % 2 == 0 {
            acc.add(&term)
        } else {
            acc.add(&term.neg())
        };
    }
    acc
}

/// Specializes `f(x, y0, z0)` to a univariate polynomial in `x`.
fn specialize(f: &HPoly, y0: &Scalar, z0: &Scalar) -> UniPoly {
    let mode = y0.mode();
    let d = f.degree() as usize;
    let mut coeffs = vec![mode.zero(); d + 1];
    for (e, c) in f.terms() {
        let mut t = c.clone();
        for _ in 0..e.1 {
            t = t.checked_mul(y0).expect("mixed");
        }
        for _ in 0..e.2 {
            t = t.checked_mul(z0).expect("mixed");
        }
        coeffs[e.0 as usize] = coeffs[e.0 as usize].checked_add(&t).unwrap();
    }
    UniPoly::from_coeffs(coeffs)
}

/// A shear `x ↦ x, y ↦ y + s·x, z ↦ z + t·x` (as the column map sending
/// `e₀` to `(1, s, t)`) chosen so no component vanishes at `[1:0:0]`.
fn find_shear(comps: &[HPoly; 3], mode: FieldMode) -> LinMap {
    for k in 0i64.. {
        for s in 0..=k {
            for t in 0..=k {
                if s != k && t != k {
                    continue; // already tried in earlier rings
                }
                let (sv, tv) = (mode.from_i64(s), mode.from_i64(t));
                let ok = comps
                    .iter()
                    .all(|c| !c.eval(&mode.one(), &sv, &tv).is_zero());
                if ok {
                    let one = mode.one();
                    let zero = mode.zero();
                    return LinMap::new([
                        [one.clone(), zero.clone(), zero.clone()],
                        [sv.clone(), one.clone(), zero.clone()],
                        [tv.clone(), zero, one],
                    ])
                    .expect("unit lower-triangular");
                }
            }
        }
    }
    unreachable!("a conic triple cannot cover the plane")
}

fn substitute_lin(f: &HPoly, m: &LinMap) -> HPoly {
    let r = m.rows();
    let lin: Vec<HPoly> = (0..3)
        .map(|i| HPoly::linear_form(r[i][0].clone(), r[i][1].clone(), r[i][2].clone()))
        .collect();
    f.substitute(&lin[0], &lin[1], &lin[2])
        .expect("linear substitution of homogeneous input")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_map;
    use crate::scalar::FieldMode;

    const Q: FieldMode = FieldMode::Rational;

    fn pt(a: i64, b: i64, c: i64) -> ProjPoint {
        ProjPoint::from_ints(Q, a, b, c)
    }

    #[test]
    fn sigma_base_points_are_the_coordinate_triangle() {
        let s = CreMap::sigma(Q);
        let mut expect = vec![pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)];
        expect.sort();
        assert_eq!(s.proper_base_points().unwrap(), expect);
    }

    #[test]
    fn identity_has_no_base_points() {
        assert!(CreMap::identity(Q).proper_base_points().unwrap().is_empty());
    }

    #[test]
    fn sigma_h_base_points() {
        let s = CreMap::sigma(Q);
        let h = CreMap::from_lin(&LinMap::h(Q));
        let sh = s.compose(&h).unwrap();
        let mut expect = vec![pt(1, 0, 0), pt(0, 1, 0), pt(1, 1, 1)];
        expect.sort();
        assert_eq!(sh.proper_base_points().unwrap(), expect);
    }

    #[test]
    fn conjugated_involution_base_points() {
        // α maps the coordinate triangle to p, q, r; ασα⁻¹ has exactly
        // those base points.
        let p = pt(1, 0, 0);
        let q = pt(0, 1, 0);
        let r = pt(1, 1, 1);
        let alpha = LinMap::from_columns(&p, &q, &r).unwrap();
        let m = CreMap::from_lin(&alpha)
            .compose(&CreMap::sigma(Q))
            .unwrap()
            .compose(&CreMap::from_lin(&alpha.inverse()))
            .unwrap();
        let mut expect = vec![p, q, r];
        expect.sort();
        assert_eq!(m.proper_base_points().unwrap(), expect);
    }

    #[test]
    fn unsupported_degree_reported() {
        let g = LinMap::new([
            [Q.from_i64(1), Q.from_i64(2), Q.from_i64(3)],
            [Q.zero(), Q.from_i64(1), Q.from_i64(4)],
            [Q.zero(), Q.from_i64(5), Q.from_i64(1)],
        ])
        .unwrap();
        let s = CreMap::sigma(Q);
        let cubic = s
            .compose(&CreMap::from_lin(&g))
            .unwrap()
            .compose(&s)
            .unwrap();
        assert_eq!(cubic.degree(), 3);
        assert_eq!(
            cubic.proper_base_points(),
            Err(MapError::UnsupportedDegree(3))
        );
    }

    #[test]
    fn irrational_base_points_detected() {
        // Common zeros of (x² − 2z², x(y − z), y(y − z) + x² − 2z²) are
        // exactly [±√2 : 1 : 1]: rational over no subfield of ℚ.
        let m = parse_map("[x^2 - 2*z^2 : x*y - x*z : y^2 - y*z + x^2 - 2*z^2]", Q).unwrap();
        assert_eq!(m.proper_base_points(), Err(MapError::IrrationalBasePoint));
    }

    #[test]
    fn fp_mode_resolves_square_roots_when_they_exist() {
        // Over F_p with 2 a quadratic residue the same triple has rational
        // points. p = 1048583: check whether 2 is a QR; if not, the triple
        // stays irrational, so pick a prime where 2 is a residue (p ≡ ±1
        // mod 8), e.g. 1048609 ≡ 1 mod 8.
        let mode = FieldMode::prime(1_048_609).unwrap();
        let m = crate::parse::parse_map(
            "[x^2 - 2*z^2 : x*y - x*z : y^2 - y*z + x^2 - 2*z^2]",
            mode,
        )
        .unwrap();
        let pts = m.proper_base_points().unwrap();
        assert_eq!(pts.len(), 2);
        for p in pts {
            let c = p.coords();
            // x² = 2z², y = z.
            assert_eq!(c[1], c[2]);
            let x2 = c[0].checked_mul(&c[0]).unwrap();
            let z2 = c[2].checked_mul(&c[2]).unwrap();
            assert_eq!(x2, z2.checked_mul(&mode.from_i64(2)).unwrap());
        }
    }
}
