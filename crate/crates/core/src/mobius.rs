//! Möbius and affine transformations of the projective line, classification
//! of commuting pairs and the quotient coordinates of non-linear affine
//! representations of ℤ².

use crate::complex::{ProjPoint, ONE, ZERO};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Below this |det| (on the max-entry normalized matrix) a map is degenerate.
pub const DET_TOLERANCE: f64 = 1e-12;

/// Default componentwise tolerance for equality in PGL(2, ℂ).
pub const EQ_TOLERANCE: f64 = 1e-10;

/// `z ↦ (az + b) / (cz + d)`, stored normalized so the largest entry is 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    m: [Complex64; 4],
}

fn normalize(m: [Complex64; 4]) -> [Complex64; 4] {
    let max = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // ties resolved by the first entry within rounding of the maximum
    let pivot = m.iter().find(|z| z.norm() >= max * (1.0 - 1e-12)).copied().unwrap_or(ONE);
    if pivot == ZERO {
        return m;
    }
    m.map(|z| z / pivot)
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = normalize([a, b, c, d]);
        let det = m[0] * m[3] - m[1] * m[2];
        if !det.norm().is_finite() || det.norm() < DET_TOLERANCE {
            return Err(Error::Degenerate { det: det.norm() });
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: [ONE, ZERO, ZERO, ONE] }
    }

    /// `z ↦ a z + b`
    pub fn affine(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(a, b, ZERO, ONE)
    }

    pub fn scaling(a: Complex64) -> Result<Self> {
        Self::affine(a, ZERO)
    }

    pub fn translation(b: Complex64) -> Self {
        Self::affine(ONE, b).expect("translations are invertible")
    }

    /// `z ↦ 1/z`
    pub fn inversion() -> Self {
        Self { m: [ZERO, ONE, ONE, ZERO] }
    }

    pub fn entries(&self) -> [Complex64; 4] {
        self.m
    }

    pub fn det(&self) -> Complex64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0] + self.m[3]
    }

    /// Matrix scaled to unit determinant (one of the two square roots).
    pub fn sl2_entries(&self) -> [Complex64; 4] {
        let s = self.det().sqrt();
        self.m.map(|z| z / s)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MobiusMap) -> Result<MobiusMap> {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        Self::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }

    pub fn inverse(&self) -> MobiusMap {
        let [a, b, c, d] = self.m;
        Self { m: normalize([d, -b, -c, a]) }
    }

    /// `self ∘ g ∘ self⁻¹`
    pub fn conjugate(&self, g: &MobiusMap) -> Result<MobiusMap> {
        self.compose(g)?.compose(&self.inverse())
    }

    pub fn apply(&self, z: ProjPoint) -> ProjPoint {
        let [a, b, c, d] = self.m;
        match z {
            ProjPoint::Infinity => {
                if c == ZERO {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(a / c)
                }
            }
            ProjPoint::Finite(z) => {
                let num = a * z + b;
                let den = c * z + d;
                if den == ZERO {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(num / den)
                }
            }
        }
    }

    /// Scale-free distance in PGL(2, ℂ): the largest 2×2 minor of the pair
    /// of normalized entry vectors. Zero iff the matrices are proportional.
    pub fn projective_distance(&self, other: &MobiusMap) -> f64 {
        let (x, y) = (self.m, other.m);
        let mut worst = 0f64;
        for i in 0..4 {
            for j in (i + 1)..4 {
                worst = worst.max((x[i] * y[j] - x[j] * y[i]).norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &MobiusMap, tol: f64) -> bool {
        self.projective_distance(other) <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&MobiusMap::identity(), tol)
    }

    /// Fixed points as eigenvector directions, one per eigenvalue.
    fn eigen_points(&self) -> [ProjPoint; 2] {
        let [a, b, c, d] = self.sl2_entries();
        let t = a + d;
        let disc = (t * t - 4.0).sqrt();
        let lambdas = [(t + disc) / 2.0, (t - disc) / 2.0];
        lambdas.map(|l| {
            let v1 = (b, l - a);
            let v2 = (l - d, c);
            let (x, y) = if v1.0.norm() + v1.1.norm() >= v2.0.norm() + v2.1.norm() { v1 } else { v2 };
            if y.norm() <= 1e-14 * x.norm() {
                ProjPoint::Infinity
            } else {
                ProjPoint::Finite(x / y)
            }
        })
    }
}

impl std::ops::Mul for MobiusMap {
    type Output = MobiusMap;
    fn mul(self, rhs: MobiusMap) -> MobiusMap {
        self.compose(&rhs).expect("product of nondegenerate maps")
    }
}

/// Normal forms of abelian subgroups of PGL(2, ℂ) generated by two maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RepClass {
    Trivial,
    /// Conjugate to `(z ↦ a1 z, z ↦ a_tau z)`.
    Linear { a1: Complex64, a_tau: Complex64 },
    /// Conjugate to `(z ↦ z + b1, z ↦ z + b_tau)`.
    Euclidean { b1: Complex64, b_tau: Complex64 },
    /// Conjugate to the group generated by `-z` and `1/z`.
    Dihedral,
}

impl RepClass {
    pub fn tag(&self) -> &'static str {
        match self {
            RepClass::Trivial => "trivial",
            RepClass::Linear { .. } => "linear",
            RepClass::Euclidean { .. } => "euclidean",
            RepClass::Dihedral => "dihedral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub class: RepClass,
    /// `C` with `C ∘ f ∘ C⁻¹`, `C ∘ g ∘ C⁻¹` in normal form.
    pub conjugator: MobiusMap,
}

#[derive(Debug, Clone, Copy)]
enum MapKind {
    Identity,
    Parabolic(ProjPoint),
    Semisimple(ProjPoint, ProjPoint),
}

fn map_kind(f: &MobiusMap, tol: f64) -> Result<MapKind> {
    if f.is_identity(tol) {
        return Ok(MapKind::Identity);
    }
    let [a, b, c, d] = f.sl2_entries();
    let t = a + d;
    let half = t / 2.0;
    let n_norm = [a - half, b, c, d - half].iter().map(|z| z.norm()).fold(0.0, f64::max);
    // eigenvalue separation relative to the traceless part: ≈ 2 for
    // diagonalizable maps, O(√ε) for parabolic ones
    let separation = (t * t - 4.0).norm().sqrt() / n_norm;
    let parabolic_below = tol.sqrt();
    if separation < parabolic_below {
        return Ok(MapKind::Parabolic(parabolic_fixed_point(a - half, b, c)));
    }
    if separation < 100.0 * parabolic_below {
        return Err(Error::Ambiguous(format!(
            "eigenvalue separation {separation:e} between parabolic and semisimple thresholds"
        )));
    }
    let [p, q] = f.eigen_points();
    Ok(MapKind::Semisimple(p, q))
}

/// Fixed point of a parabolic map from the kernel of its traceless part
/// `[[n, b], [c, -n]]`, which avoids the square root of a vanishing discriminant.
fn parabolic_fixed_point(n: Complex64, b: Complex64, c: Complex64) -> ProjPoint {
    let (x, y) = if b.norm() + n.norm() >= n.norm() + c.norm() { (b, -n) } else { (n, c) };
    if y.norm() <= 1e-12 * x.norm() {
        ProjPoint::Infinity
    } else {
        ProjPoint::Finite(x / y)
    }
}

/// Conjugator sending `p ↦ 0` and `q ↦ ∞`.
fn send_to_zero_infinity(p: ProjPoint, q: ProjPoint) -> Result<MobiusMap> {
    match (p, q) {
        (ProjPoint::Finite(p), ProjPoint::Infinity) => MobiusMap::new(ONE, -p, ZERO, ONE),
        (ProjPoint::Infinity, ProjPoint::Finite(q)) => MobiusMap::new(ZERO, ONE, ONE, -q),
        (ProjPoint::Finite(p), ProjPoint::Finite(q)) => MobiusMap::new(ONE, -p, ONE, -q),
        (ProjPoint::Infinity, ProjPoint::Infinity) => Err(Error::Degenerate { det: 0.0 }),
    }
}

fn order_fixed_points(p: ProjPoint, q: ProjPoint) -> (ProjPoint, ProjPoint) {
    match (p, q) {
        (ProjPoint::Infinity, _) => (q, p),
        (_, ProjPoint::Infinity) => (p, q),
        (ProjPoint::Finite(x), ProjPoint::Finite(y)) => {
            if y.norm() < x.norm() {
                (q, p)
            } else {
                (p, q)
            }
        }
    }
}

/// Classify the abelian group generated by two commuting Möbius maps.
///
/// Parabolic elements force the euclidean case (common fixed point, conjugated
/// to ∞). Otherwise the two fixed points of the first non-identity map are
/// sent to `0` and `∞`: the partner either fixes both (linear) or swaps them
/// (dihedral, in which case the partner is rescaled to `1/z`). Ordering of the
/// fixed points puts ∞ last and otherwise the smaller modulus first, so maps
/// already in normal form get the identity conjugator.
pub fn classify_commuting_pair(f: &MobiusMap, g: &MobiusMap, tol: f64) -> Result<Classification> {
    let fg = f.compose(g)?;
    let gf = g.compose(f)?;
    let distance = fg.projective_distance(&gf);
    if distance > tol {
        return Err(Error::NotCommuting { distance });
    }
    let kf = map_kind(f, tol)?;
    let kg = map_kind(g, tol)?;

    let parabolic_point = match (kf, kg) {
        (MapKind::Parabolic(p), _) | (_, MapKind::Parabolic(p)) => Some(p),
        _ => None,
    };
    if let Some(p) = parabolic_point {
        let conj = match p {
            ProjPoint::Infinity => MobiusMap::identity(),
            ProjPoint::Finite(p) if p.norm() <= 1.0 => MobiusMap::new(ZERO, ONE, ONE, -p)?,
            // z ↦ z / (z − p) keeps the normalized determinant of order 1/|p|
            ProjPoint::Finite(p) => MobiusMap::new(ONE, ZERO, ONE, -p)?,
        };
        let translation_part = |h: &MobiusMap| -> Result<Complex64> {
            let [a, b, c, d] = conj.conjugate(h)?.entries();
            if c.norm() > tol.sqrt() || (a - d).norm() > tol.sqrt() * a.norm().max(d.norm()) {
                return Err(Error::NotCommuting { distance: c.norm().max((a - d).norm()) });
            }
            Ok(b / d)
        };
        return Ok(Classification {
            class: RepClass::Euclidean { b1: translation_part(f)?, b_tau: translation_part(g)? },
            conjugator: conj,
        });
    }

    let (p, q) = match (kf, kg) {
        (MapKind::Identity, MapKind::Identity) => {
            return Ok(Classification { class: RepClass::Trivial, conjugator: MobiusMap::identity() })
        }
        (MapKind::Semisimple(p, q), _) | (MapKind::Identity, MapKind::Semisimple(p, q)) => (p, q),
        _ => unreachable!("parabolic handled above"),
    };
    let (p, q) = order_fixed_points(p, q);
    let conj = send_to_zero_infinity(p, q)?;
    let fc = conj.conjugate(f)?.entries();
    let gc = conj.conjugate(g)?.entries();
    let eps = tol.sqrt();
    let diagonal = |m: &[Complex64; 4]| m[1].norm() <= eps && m[2].norm() <= eps;
    let antidiagonal = |m: &[Complex64; 4]| m[0].norm() <= eps && m[3].norm() <= eps;

    if diagonal(&fc) && diagonal(&gc) {
        return Ok(Classification {
            class: RepClass::Linear { a1: fc[0] / fc[3], a_tau: gc[0] / gc[3] },
            conjugator: conj,
        });
    }
    // one map swaps 0 and ∞ (z ↦ k/z): rescale so it becomes 1/z
    let swap = if antidiagonal(&gc) && diagonal(&fc) {
        gc
    } else if antidiagonal(&fc) && diagonal(&gc) {
        fc
    } else {
        return Err(Error::Ambiguous("conjugated pair is neither diagonal nor dihedral".into()));
    };
    let k = swap[1] / swap[2];
    let rescale = MobiusMap::scaling(ONE / k.sqrt())?;
    Ok(Classification { class: RepClass::Dihedral, conjugator: rescale.compose(&conj)? })
}

/// Images of the generators `1, τ` under an affine representation:
/// `z ↦ a1 z + b1` and `z ↦ a_tau z + b_tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinePair {
    pub a1: Complex64,
    pub b1: Complex64,
    pub a_tau: Complex64,
    pub b_tau: Complex64,
}

impl AffinePair {
    pub fn new(a1: Complex64, b1: Complex64, a_tau: Complex64, b_tau: Complex64) -> Result<Self> {
        if a1 == ZERO || a_tau == ZERO {
            return Err(Error::Domain("affine multipliers must be nonzero".into()));
        }
        Ok(Self { a1, b1, a_tau, b_tau })
    }

    /// `(a1 - 1) b_tau - (a_tau - 1) b1`, zero iff the two maps commute.
    pub fn commutation_residual(&self) -> Complex64 {
        (self.a1 - 1.0) * self.b_tau - (self.a_tau - 1.0) * self.b1
    }

    pub fn maps(&self) -> (MobiusMap, MobiusMap) {
        (
            MobiusMap::affine(self.a1, self.b1).expect("a1 != 0"),
            MobiusMap::affine(self.a_tau, self.b_tau).expect("a_tau != 0"),
        )
    }
}

/// Coordinates `(a1, a_tau, [b1 : b_tau])` of a non-linear affine representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct B1Point {
    pub a1: Complex64,
    pub a_tau: Complex64,
    /// Homogeneous direction, scaled so that its larger component is 1.
    pub bdir: [Complex64; 2],
}

impl B1Point {
    pub fn new(a1: Complex64, a_tau: Complex64, b1: Complex64, b_tau: Complex64) -> Result<Self> {
        if b1 == ZERO && b_tau == ZERO {
            return Err(Error::ExcludedRepresentation);
        }
        let pivot = if b1.norm() >= b_tau.norm() { b1 } else { b_tau };
        Ok(Self { a1, a_tau, bdir: [b1 / pivot, b_tau / pivot] })
    }

    /// `(a1 - 1) b_tau - (a_tau - 1) b1` on the normalized direction.
    pub fn constraint_residual(&self) -> Complex64 {
        (self.a1 - 1.0) * self.bdir[1] - (self.a_tau - 1.0) * self.bdir[0]
    }

    /// Comparison metric: relative distance of the multipliers, chordal-type
    /// distance of the directions (`|b1 b'_tau - b_tau b'1|` on unit-max vectors).
    pub fn distance(&self, other: &B1Point) -> f64 {
        let da = crate::complex::rel_dist(self.a1, other.a1).max(crate::complex::rel_dist(self.a_tau, other.a_tau));
        let db = (self.bdir[0] * other.bdir[1] - self.bdir[1] * other.bdir[0]).norm();
        da.max(db)
    }
}

/// Parts below this modulus count as zero when deciding B1 membership.
pub const B_PART_TOLERANCE: f64 = 1e-13;

pub fn b1_from_affine_pair(p: &AffinePair) -> Result<B1Point> {
    if p.b1.norm() <= B_PART_TOLERANCE && p.b_tau.norm() <= B_PART_TOLERANCE {
        return Err(Error::ExcludedRepresentation);
    }
    B1Point::new(p.a1, p.a_tau, p.b1, p.b_tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{c, I};

    fn m(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> MobiusMap {
        MobiusMap::new(a, b, cc, d).unwrap()
    }

    #[test]
    fn compose_identity_and_expansion() {
        let f = m(c(2.0, 1.0), c(0.5, 0.0), c(0.0, 1.0), ONE);
        assert!(MobiusMap::identity().compose(&f).unwrap().approx_eq(&f, 1e-14));
        let dbl = MobiusMap::scaling(c(2.0, 0.0)).unwrap();
        let shift = MobiusMap::translation(ONE);
        let expect = MobiusMap::affine(c(2.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((dbl * shift).approx_eq(&expect, 1e-14));
    }

    #[test]
    fn minus_z_and_inversion_commute_projectively() {
        let neg = MobiusMap::scaling(-ONE).unwrap();
        let inv = MobiusMap::inversion();
        let a = neg * inv;
        let b = inv * neg;
        let target = m(ZERO, -ONE, ONE, ZERO);
        assert!(a.approx_eq(&target, 1e-14));
        assert!(b.approx_eq(&target, 1e-14));
        // as raw matrices they differ by the scalar -1
        assert!((a.entries()[1] - b.entries()[1]).norm() < 1e-14);
    }

    #[test]
    fn degenerate_map_rejected() {
        let err = MobiusMap::new(ONE, c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Degenerate { .. }));
    }

    #[test]
    fn apply_infinity_cases() {
        assert_eq!(MobiusMap::inversion().apply(ProjPoint::Infinity), ProjPoint::Finite(ZERO));
        let z = c(5.0, 2.0);
        assert_eq!(MobiusMap::identity().apply(z.into()), ProjPoint::Finite(z));
        let f = m(ONE, ONE, ONE, -ONE);
        assert_eq!(f.apply(ONE.into()), ProjPoint::Infinity);
        assert_eq!(f.apply(ProjPoint::Infinity), ProjPoint::Finite(ONE));
    }

    #[test]
    fn classify_normal_forms() {
        let tol = 1e-10;
        let lin = classify_commuting_pair(
            &MobiusMap::scaling(c(2.0, 0.0)).unwrap(),
            &MobiusMap::scaling(c(3.0, 0.0)).unwrap(),
            tol,
        )
        .unwrap();
        match lin.class {
            RepClass::Linear { a1, a_tau } => {
                assert!((a1 - 2.0).norm() < 1e-12 && (a_tau - 3.0).norm() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
        let euc = classify_commuting_pair(&MobiusMap::translation(ONE), &MobiusMap::translation(I), tol).unwrap();
        match euc.class {
            RepClass::Euclidean { b1, b_tau } => assert!((b1 - 1.0).norm() < 1e-12 && (b_tau - I).norm() < 1e-12),
            other => panic!("{other:?}"),
        }
        let dih = classify_commuting_pair(&MobiusMap::scaling(-ONE).unwrap(), &MobiusMap::inversion(), tol).unwrap();
        assert_eq!(dih.class, RepClass::Dihedral);
        let dih2 = classify_commuting_pair(&MobiusMap::inversion(), &MobiusMap::scaling(-ONE).unwrap(), tol).unwrap();
        assert_eq!(dih2.class, RepClass::Dihedral);
        let triv = classify_commuting_pair(&MobiusMap::identity(), &MobiusMap::identity(), tol).unwrap();
        assert_eq!(triv.class, RepClass::Trivial);
    }

    #[test]
    fn classify_rejects_noncommuting() {
        let err = classify_commuting_pair(&MobiusMap::translation(ONE), &MobiusMap::inversion(), 1e-10).unwrap_err();
        assert!(matches!(err, Error::NotCommuting { .. }));
    }

    #[test]
    fn classify_flags_near_parabolic() {
        // z ↦ z + 1 perturbed so its fixed points separate by ~1e-4
        let f = m(ONE, ONE, c(1e-8, 0.0), ONE);
        let err = classify_commuting_pair(&f, &MobiusMap::identity(), 1e-10).unwrap_err();
        assert!(matches!(err, Error::Ambiguous(_)), "{err:?}");
    }

    #[test]
    fn b1_examples() {
        let tau = c(0.3, 1.1);
        let p = b1_from_affine_pair(&AffinePair::new(ONE, ONE, ONE, tau).unwrap()).unwrap();
        let expect = B1Point::new(ONE, ONE, ONE, tau).unwrap();
        assert!(p.distance(&expect) < 1e-15);
        assert!((p.bdir[1] * tau.inv() - 1.0).norm() < 1e-15 || (p.bdir[0] - tau.inv()).norm() < 1e-15);

        // constraint (a1-1) b_tau = (a_tau-1) b1 with a = (2, 3) forces b_tau = 2 b1
        let b1 = c(0.7, -0.2);
        let pair = AffinePair::new(c(2.0, 0.0), b1, c(3.0, 0.0), 2.0 * b1).unwrap();
        let q = b1_from_affine_pair(&pair).unwrap();
        assert!((q.bdir[0] * 2.0 - q.bdir[1]).norm() < 1e-15);
        assert!(q.constraint_residual().norm() < 1e-15);

        let lin = AffinePair::new(c(2.0, 0.0), ZERO, c(3.0, 0.0), ZERO).unwrap();
        assert_eq!(b1_from_affine_pair(&lin).unwrap_err(), Error::ExcludedRepresentation);
    }
}
