//! Birational maps of P² as normalized coprime triples of homogeneous
//! polynomials, with the degree, multiplicity, and base-point queries the
//! rewriting engine relies on.

mod basepoints;
mod linmap;
mod point;

pub use linmap::{LinClass, LinMap};
pub use point::{det3, ProjPoint};

use crate::hpoly::{Exp, HPoly};
use crate::scalar::FieldMode;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("component degrees differ: {0} vs {1}")]
    ComponentDegreeMismatch(u32, u32),
    #[error("degenerate composition: components all zero or constant")]
    DegenerateComposition,
    #[error("base-point extraction supports degree ≤ 2, got {0}")]
    UnsupportedDegree(u32),
    #[error("a base point exists only over an extension field")]
    IrrationalBasePoint,
    #[error("points must be pairwise distinct")]
    DuplicatePoints,
    #[error("degree-1 triple is not invertible")]
    NonInvertibleLinear,
    #[error("map is not de Jonquières")]
    NotDeJonquieres,
    #[error("expected a quadratic map with three proper base points")]
    BadQuadratic,
}

/// A plane birational map `[f₀ : f₁ : f₂]`: coprime homogeneous components
/// of one common degree, jointly scaled so the leading coefficient of the
/// first nonzero component is 1.
///
/// Construction normalizes but does not certify birationality in degree ≥ 2;
/// that is the caller's contract, as every map built here arises from the
/// generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CreMap {
    comps: [HPoly; 3],
    degree: u32,
}

impl CreMap {
    pub fn new(comps: [HPoly; 3]) -> Result<CreMap, MapError> {
        let nz: Vec<u32> = comps
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| f.degree())
            .collect();
        if nz.is_empty() {
            return Err(MapError::DegenerateComposition);
        }
        if nz.windows(2).any(|w| w[0] != w[1]) {
            return Err(MapError::ComponentDegreeMismatch(nz[0], nz[1]));
        }
        // Cancel the common factor.
        let mut g = comps[0].gcd(&comps[1]);
        if g.degree() > 0 {
            g = g.gcd(&comps[2]);
        }
        let reduced: Vec<HPoly> = if g.degree() > 0 {
            comps.iter().map(|f| f.exact_div(&g)).collect()
        } else {
            comps.to_vec()
        };
        let degree = reduced
            .iter()
            .find(|f| !f.is_zero())
            .map(|f| f.degree())
            .unwrap();
        if degree == 0 {
            return Err(MapError::DegenerateComposition);
        }
        // Joint canonical scaling by the first nonzero component's leading
        // coefficient.
        let lead = reduced
            .iter()
            .find_map(|f| f.leading().map(|(_, c)| c.clone()))
            .unwrap();
        let inv = lead.inv().expect("nonzero leading coefficient");
        let comps: Vec<HPoly> = reduced.iter().map(|f| f.scale(&inv)).collect();
        let m = CreMap {
            comps: [comps[0].clone(), comps[1].clone(), comps[2].clone()],
            degree,
        };
        if degree == 1 && m.to_lin().is_none() {
            return Err(MapError::NonInvertibleLinear);
        }
        Ok(m)
    }

    pub fn identity(mode: FieldMode) -> CreMap {
        CreMap::from_lin(&LinMap::identity(mode))
    }

    /// The standard quadratic involution `σ = [yz : xz : xy]`.
    pub fn sigma(mode: FieldMode) -> CreMap {
        let one = mode.one();
        CreMap::new([
            HPoly::monomial(Exp(0, 1, 1), one.clone()),
            HPoly::monomial(Exp(1, 0, 1), one.clone()),
            HPoly::monomial(Exp(1, 1, 0), one),
        ])
        .unwrap()
    }

    pub fn from_lin(g: &LinMap) -> CreMap {
        let r = g.rows();
        CreMap::new([
            HPoly::linear_form(r[0][0].clone(), r[0][1].clone(), r[0][2].clone()),
            HPoly::linear_form(r[1][0].clone(), r[1][1].clone(), r[1][2].clone()),
            HPoly::linear_form(r[2][0].clone(), r[2][1].clone(), r[2][2].clone()),
        ])
        .expect("invertible matrix yields a valid map")
    }

    /// Recovers the matrix of a degree-1 map; `None` if singular.
    pub fn to_lin(&self) -> Option<LinMap> {
        if self.degree != 1 {
            return None;
        }
        let mode = self.mode();
        let mut rows = [
            [mode.zero(), mode.zero(), mode.zero()],
            [mode.zero(), mode.zero(), mode.zero()],
            [mode.zero(), mode.zero(), mode.zero()],
        ];
        for (i, f) in self.comps.iter().enumerate() {
            for (e, c) in f.terms() {
                let j = match (e.0, e.1, e.2) {
                    (1, 0, 0) => 0,
                    (0, 1, 0) => 1,
                    _ => 2,
                };
                rows[i][j] = c.clone();
            }
        }
        LinMap::new(rows).ok()
    }

    pub fn components(&self) -> &[HPoly; 3] {
        &self.comps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mode(&self) -> FieldMode {
        self.comps
            .iter()
            .find_map(|f| f.sample_coeff())
            .map(|c| c.mode())
            .unwrap_or(FieldMode::Rational)
    }

    /// Composition `self ∘ rhs` by substitution and gcd cancellation.
    pub fn compose(&self, rhs: &CreMap) -> Result<CreMap, MapError> {
        let [gx, gy, gz] = rhs.components();
        let subbed: Vec<HPoly> = self
            .comps
            .iter()
            .map(|f| f.substitute(gx, gy, gz).expect("components homogeneous"))
            .collect();
        CreMap::new([subbed[0].clone(), subbed[1].clone(), subbed[2].clone()])
    }

    /// Image of a point, when defined; `None` exactly on base points.
    pub fn apply(&self, p: &ProjPoint) -> Option<ProjPoint> {
        let [x, y, z] = p.coords();
        let v = [
            self.comps[0].eval(x, y, z),
            self.comps[1].eval(x, y, z),
            self.comps[2].eval(x, y, z),
        ];
        ProjPoint::new(v)
    }

    /// Multiplicity of the defining linear system at `p`: move `p` to a
    /// chart origin and take the minimal vanishing order over the three
    /// components.
    pub fn multiplicity_at(&self, p: &ProjPoint) -> u32 {
        let mode = self.mode();
        let chart = p.pivot();
        // Column-substituted identity sends the chart origin e_chart to p.
        let mut cols = [
            ProjPoint::coordinate(mode, 0),
            ProjPoint::coordinate(mode, 1),
            ProjPoint::coordinate(mode, 2),
        ];
        cols[chart] = p.clone();
        let m = LinMap::from_columns(&cols[0], &cols[1], &cols[2])
            .expect("pivot column keeps the matrix invertible");
        let r = m.rows();
        let lin: Vec<HPoly> = (0..3)
            .map(|i| HPoly::linear_form(r[i][0].clone(), r[i][1].clone(), r[i][2].clone()))
            .collect();
        self.comps
            .iter()
            .map(|f| {
                let g = f
                    .substitute(&lin[0], &lin[1], &lin[2])
                    .expect("linear substitution");
                g.order_at_origin(chart).expect("components nonzero")
            })
            .min()
            .unwrap()
    }

    /// Projective equality of normalized triples.
    pub fn equal(&self, rhs: &CreMap) -> bool {
        self == rhs
    }

    pub fn is_identity(&self) -> bool {
        self.degree == 1
            && self
                .to_lin()
                .map(|m| m.is_identity())
                .unwrap_or(false)
    }

    /// All proper base points rational over the working field (degree ≤ 2).
    pub fn proper_base_points(&self) -> Result<Vec<ProjPoint>, MapError> {
        basepoints::proper_base_points(self)
    }

    /// De Jonquières test: the induced map on the pencil through `[1:0:0]`
    /// must be a Möbius transformation, i.e. the reduced fraction `f₁/f₂`
    /// has numerator and denominator linear in `y, z` alone and independent.
    pub fn is_de_jonquieres(&self) -> bool {
        let g = self.comps[1].gcd(&self.comps[2]);
        let num = if g.degree() > 0 {
            self.comps[1].exact_div(&g)
        } else {
            self.comps[1].clone()
        };
        let den = if g.degree() > 0 {
            self.comps[2].exact_div(&g)
        } else {
            self.comps[2].clone()
        };
        if num.degree() != 1 || den.degree() != 1 {
            return false;
        }
        let xfree = |f: &HPoly| f.terms().all(|(e, _)| e.0 == 0);
        if !xfree(&num) || !xfree(&den) {
            return false;
        }
        // Independence: (a b; c d) with ad − bc ≠ 0.
        let coeff = |f: &HPoly, e: Exp| f.coeff(&e).cloned().unwrap_or_else(|| self.mode().zero());
        let a = coeff(&num, Exp(0, 1, 0));
        let b = coeff(&num, Exp(0, 0, 1));
        let c = coeff(&den, Exp(0, 1, 0));
        let d = coeff(&den, Exp(0, 0, 1));
        let det = a.checked_mul(&d).unwrap().checked_sub(&b.checked_mul(&c).unwrap()).unwrap();
        !det.is_zero()
    }
}

impl fmt::Display for CreMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} : {} : {}]",
            self.comps[0], self.comps[1], self.comps[2]
        )
    }
}

/// Collinearity of three pairwise distinct points.
pub fn collinear(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<bool, MapError> {
    if p == q || p == r || q == r {
        return Err(MapError::DuplicatePoints);
    }
    Ok(det3(p, q, r).is_zero())
}

/// True when some three of the given points are collinear (points are
/// deduplicated first, so repeated entries do not trigger the predicate).
pub fn any_three_collinear(points: &[ProjPoint]) -> bool {
    let mut distinct: Vec<&ProjPoint> = Vec::new();
    for p in points {
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    let n = distinct.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if det3(distinct[i], distinct[j], distinct[k]).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Degree and multiplicity predictions for the composition `f ∘ τ` of de
/// Jonquières maps with `τ` quadratic, together with the data they came
/// from. All multiplicities refer to the base points of `τ` (`p1, p2`) and
/// of `τ⁻¹` (`q1, q2`), labelled so the pencil through `p_i` maps to the
/// pencil through `q_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DjCompositionData {
    pub deg: u32,
    pub mult_at_p0: u32,
    pub mult_at_p1: u32,
    pub mult_at_p2: u32,
    pub p: [ProjPoint; 2],
    pub q: [ProjPoint; 2],
}

/// Predicts `deg(f∘τ)`, `m_{[1:0:0]}(f∘τ)` and `m_{p_i}(f∘τ)` from the
/// multiplicities of `f` at the inverse base points of `τ`:
///
/// ```text
/// deg(fτ) = d + 1 − m_{q1}(f) − m_{q2}(f)
/// m_{[1:0:0]}(fτ) = d − m_{q1}(f) − m_{q2}(f)
/// m_{p_i}(fτ) = 1 − m_{q_j}(f),  i ≠ j
/// ```
pub fn dj_quadratic_composition_data(
    f: &CreMap,
    tau: &CreMap,
) -> Result<DjCompositionData, MapError> {
    if !f.is_de_jonquieres() || !tau.is_de_jonquieres() {
        return Err(MapError::NotDeJonquieres);
    }
    if tau.degree() != 2 {
        return Err(MapError::BadQuadratic);
    }
    let mode = f.mode();
    let p0 = ProjPoint::coordinate(mode, 0);
    let bps = tau.proper_base_points()?;
    if bps.len() != 3 || !bps.contains(&p0) {
        return Err(MapError::BadQuadratic);
    }
    let ps: Vec<ProjPoint> = bps.into_iter().filter(|p| *p != p0).collect();
    // q_i = τ(line(p0, p_j)), j ≠ i: the image of the contracted line
    // through p0 and the other base point is the inverse base point whose
    // pencil matches p_i (every image of a line through p_i passes through
    // both q_i and this contracted-line image, and distinct image lines meet
    // in one point).
    let q_for = |other: &ProjPoint| -> Result<ProjPoint, MapError> {
        contracted_image(tau, &p0, other)
    };
    let q1 = q_for(&ps[1])?;
    let q2 = q_for(&ps[0])?;
    let d = f.degree() as i64;
    let mq1 = f.multiplicity_at(&q1) as i64;
    let mq2 = f.multiplicity_at(&q2) as i64;
    // De Jonquières maps have multiplicity ≤ 1 away from [1:0:0], so the
    // predicted values stay non-negative.
    let nn = |v: i64| -> u32 {
        assert!(v >= 0, "composition formula out of range: {v}");
        v as u32
    };
    Ok(DjCompositionData {
        deg: nn(d + 1 - mq1 - mq2),
        mult_at_p0: nn(d - mq1 - mq2),
        mult_at_p1: nn(1 - mq2),
        mult_at_p2: nn(1 - mq1),
        p: [ps[0].clone(), ps[1].clone()],
        q: [q1, q2],
    })
}

/// The image point of the line through `a` and `b` under a quadratic map
/// contracting that line: evaluate at line points until defined.
fn contracted_image(f: &CreMap, a: &ProjPoint, b: &ProjPoint) -> Result<ProjPoint, MapError> {
    let mode = f.mode();
    for t in 0..8i64 {
        // a + t·b and b itself as the t = ∞ sample.
        let cand = if t < 7 {
            let tt = mode.from_i64(t);
            let coords = [
                a.coords()[0]
                    .checked_add(&tt.checked_mul(&b.coords()[0]).unwrap())
                    .unwrap(),
                a.coords()[1]
                    .checked_add(&tt.checked_mul(&b.coords()[1]).unwrap())
                    .unwrap(),
                a.coords()[2]
                    .checked_add(&tt.checked_mul(&b.coords()[2]).unwrap())
                    .unwrap(),
            ];
            match ProjPoint::new(coords) {
                Some(p) => p,
                None => continue,
            }
        } else {
            b.clone()
        };
        if let Some(img) = f.apply(&cand) {
            return Ok(img);
        }
    }
    Err(MapError::BadQuadratic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_map;

    const Q: FieldMode = FieldMode::Rational;

    fn pt(a: i64, b: i64, c: i64) -> ProjPoint {
        ProjPoint::from_ints(Q, a, b, c)
    }

    #[test]
    fn sigma_is_a_quadratic_involution() {
        let s = CreMap::sigma(Q);
        assert_eq!(s.degree(), 2);
        let ss = s.compose(&s).unwrap();
        assert!(ss.is_identity());
    }

    #[test]
    fn h_squares_to_identity() {
        let h = LinMap::h(Q);
        assert!(h.mul(&h).is_identity());
    }

    #[test]
    fn sigma_h_composition() {
        let s = CreMap::sigma(Q);
        let h = CreMap::from_lin(&LinMap::h(Q));
        let sh = s.compose(&h).unwrap();
        // (z−y)z, (z−x)z, (z−x)(z−y), expanded.
        let expect = parse_map("[z^2-y*z : z^2-x*z : z^2-x*z-y*z+x*y]", Q).unwrap();
        assert_eq!(sh, expect);
        assert_eq!(sh.degree(), 2);
    }

    #[test]
    fn relation_4_diagonal_conjugation() {
        let d = LinMap::diag(Q.from_i64(3), Q.from_i64(5), Q.one()).unwrap();
        let s = CreMap::sigma(Q);
        let sds = s.compose(&CreMap::from_lin(&d)).unwrap().compose(&s).unwrap();
        assert_eq!(sds, CreMap::from_lin(&d.inverse()));
        // σ d σ d = id
        let full = sds.compose(&CreMap::from_lin(&d)).unwrap();
        assert!(full.is_identity());
    }

    #[test]
    fn sigma_h_has_order_three_and_degree_two() {
        let s = CreMap::sigma(Q);
        let h = CreMap::from_lin(&LinMap::h(Q));
        let sh = s.compose(&h).unwrap();
        assert_eq!(sh.degree(), 2);
        let sh2 = sh.compose(&sh).unwrap();
        assert_eq!(sh2.degree(), 2);
        let sh3 = sh2.compose(&sh).unwrap();
        assert!(sh3.is_identity());
    }

    #[test]
    fn multiplicity_examples() {
        let s = CreMap::sigma(Q);
        assert_eq!(s.multiplicity_at(&pt(1, 0, 0)), 1);
        let id = CreMap::identity(Q);
        assert_eq!(id.multiplicity_at(&pt(1, 0, 0)), 0);
        assert_eq!(id.multiplicity_at(&pt(2, 3, 5)), 0);
    }

    #[test]
    fn degree_three_dejonquieres_multiplicity() {
        // σ∘g∘σ for generic g in PGL₃ ∩ J has degree 3 and multiplicity 2
        // at [1:0:0].
        let g = LinMap::new([
            [Q.from_i64(1), Q.from_i64(2), Q.from_i64(3)],
            [Q.zero(), Q.from_i64(1), Q.from_i64(4)],
            [Q.zero(), Q.from_i64(5), Q.from_i64(1)],
        ])
        .unwrap();
        assert!(g.fixes_p100());
        let s = CreMap::sigma(Q);
        let m = s
            .compose(&CreMap::from_lin(&g))
            .unwrap()
            .compose(&s)
            .unwrap();
        assert_eq!(m.degree(), 3);
        assert_eq!(m.multiplicity_at(&pt(1, 0, 0)), 2);
        assert!(m.is_de_jonquieres());
    }

    #[test]
    fn collinearity_examples() {
        assert!(!collinear(&pt(1, 0, 0), &pt(0, 1, 0), &pt(0, 0, 1)).unwrap());
        assert!(collinear(&pt(1, 0, 0), &pt(0, 1, 0), &pt(1, 1, 0)).unwrap());
        assert_eq!(
            collinear(&pt(1, 0, 0), &pt(1, 1, 1), &pt(2, 2, 2)),
            Err(MapError::DuplicatePoints)
        );
    }

    #[test]
    fn dejonquieres_examples() {
        assert!(CreMap::sigma(Q).is_de_jonquieres());
        assert!(CreMap::from_lin(&LinMap::h(Q)).is_de_jonquieres());
        let swap_xz = CreMap::from_lin(&LinMap::permutation(Q, [2, 1, 0]));
        assert!(!swap_xz.is_de_jonquieres());
    }

    #[test]
    fn classify_examples() {
        let d = LinMap::diag(Q.one(), Q.from_i64(2), Q.from_i64(3)).unwrap();
        assert!(matches!(d.classify(), LinClass::Diagonal { .. }));
        let swap = LinMap::permutation(Q, [1, 0, 2]);
        assert!(matches!(swap.classify(), LinClass::Permutation { .. }));
        assert!(matches!(LinMap::h(Q).classify(), LinClass::General));
        let dt = d.mul(&swap);
        match dt.classify() {
            LinClass::DiagonalTimesPermutation { d: dd, tau } => {
                assert_eq!(dd.mul(&tau), dt);
            }
            other => panic!("expected monomial, got {other:?}"),
        }
    }

    #[test]
    fn normalization_is_idempotent_and_projective() {
        let raw = parse_map("[2*y*z : 2*x*z : 2*x*y]", Q).unwrap();
        assert_eq!(raw, CreMap::sigma(Q));
        // Triple with a common factor normalizes down.
        let f = parse_map("[x^2*y : x*y^2 : x*y*z]", Q).unwrap();
        assert_eq!(f, CreMap::identity(Q));
    }

    #[test]
    fn dj_composition_data_for_sigma_squared() {
        let s = CreMap::sigma(Q);
        let data = dj_quadratic_composition_data(&s, &s).unwrap();
        assert_eq!(data.deg, 1);
        assert_eq!(data.mult_at_p0, 0);
        assert_eq!(data.mult_at_p1, 0);
        assert_eq!(data.mult_at_p2, 0);
        let actual = s.compose(&s).unwrap();
        assert_eq!(actual.degree(), 1);
    }

    #[test]
    fn dj_composition_data_identity_with_sigma() {
        let id = CreMap::identity(Q);
        let s = CreMap::sigma(Q);
        let data = dj_quadratic_composition_data(&id, &s).unwrap();
        assert_eq!(data.deg, 2);
        assert_eq!(data.mult_at_p0, 1);
    }
}
