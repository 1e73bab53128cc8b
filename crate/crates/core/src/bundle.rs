//! Integer intersection calculus on ruled surfaces, elementary
//! transformations, and classification of flat ℙ¹-bundles over a torus.

use crate::complex::{TWO_PI_I, ZERO};
use crate::error::{Error, Result};
use crate::mobius::RepClass;
use crate::weierstrass::Lattice;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

/// Genus of the base curve and the invariant e = −min σ·σ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceContext {
    pub g: i64,
    pub e: i64,
}

impl SurfaceContext {
    pub fn new(g: i64, e: i64) -> Result<Self> {
        if g < 0 {
            return Err(Error::Domain(format!("genus must be non-negative (got {g})")));
        }
        Ok(Self { g, e })
    }

    /// −g ≤ e ≤ 2g − 2, the range of e for undecomposable bundles.
    pub fn within_undecomposable_range(&self) -> bool {
        -self.g <= self.e && self.e <= 2 * self.g - 2
    }
}

/// The class m·σ₀ + n·f.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomologyClass {
    pub m: i64,
    pub n: i64,
}

impl HomologyClass {
    pub const fn new(m: i64, n: i64) -> Self {
        Self { m, n }
    }

    pub const fn fiber() -> Self {
        Self { m: 0, n: 1 }
    }

    pub const fn minimal_section() -> Self {
        Self { m: 1, n: 0 }
    }

    /// σ₀ + n·f
    pub const fn section(n: i64) -> Self {
        Self { m: 1, n }
    }
}

impl std::ops::Add for HomologyClass {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { m: self.m + o.m, n: self.n + o.n }
    }
}

impl std::ops::Mul<HomologyClass> for i64 {
    type Output = HomologyClass;
    fn mul(self, h: HomologyClass) -> HomologyClass {
        HomologyClass { m: self * h.m, n: self * h.n }
    }
}

/// Bilinear extension of σ₀·σ₀ = −e, σ₀·f = 1, f·f = 0.
pub fn intersect(ctx: &SurfaceContext, h1: HomologyClass, h2: HomologyClass) -> i64 {
    h1.m * h2.n + h2.m * h1.n - ctx.e * h1.m * h2.m
}

/// T_F = (2 − 2g − d)·f for a Riccati foliation with d invariant fibres.
pub fn tangent_bundle_class(g: i64, d: i64) -> Result<HomologyClass> {
    if g < 0 || d < 0 {
        return Err(Error::Domain(format!("need g >= 0 and d >= 0 (got g = {g}, d = {d})")));
    }
    Ok(HomologyClass::new(0, 2 - 2 * g - d))
}

/// Tang(F, σ) = σ·σ − T_F·σ for the section σ₀ + n·f.
pub fn tangency_count(ctx: &SurfaceContext, d: i64, section_n: i64) -> Result<i64> {
    let sigma = HomologyClass::section(section_n);
    let t = tangent_bundle_class(ctx.g, d)?;
    Ok(intersect(ctx, sigma, sigma) - intersect(ctx, t, sigma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rigidity {
    /// The transverse section is σ₀ + n·f on a bundle with invariant e.
    Solved { e: i64, n: i64, unique: bool },
    /// Genus 1: not decided by tangency counts; the classification of
    /// affine structures on the torus settles it.
    TorusCase,
    /// Genus 0.
    NotApplicable,
}

/// Solves Tang(σ) = 0 for a transverse section σ = σ₀ + n·f (n ≥ 0) of a
/// regular Riccati foliation together with Tang(σ₀) ≥ 0.
pub fn poincare_rigidity(g: i64) -> Result<Rigidity> {
    match g {
        g if g < 0 => return Err(Error::Domain(format!("genus must be non-negative (got {g})"))),
        0 => return Ok(Rigidity::NotApplicable),
        1 => return Ok(Rigidity::TorusCase),
        _ => {}
    }
    let mut solutions = Vec::new();
    // e ≥ −g always; Tang(σ₀) ≥ 0 caps e at 2g − 2
    for e in -g..=4 * g {
        let ctx = SurfaceContext { g, e };
        for n in 0..=4 * g {
            if tangency_count(&ctx, 0, n)? == 0 && tangency_count(&ctx, 0, 0)? >= 0 {
                solutions.push((e, n));
            }
        }
    }
    match solutions.as_slice() {
        [(e, n)] => Ok(Rigidity::Solved { e: *e, n: *n, unique: *e > 0 }),
        [] => Err(Error::Precondition(format!("no admissible (e, n) for g = {g}"))),
        many => {
            let (e, n) = many[0];
            Ok(Rigidity::Solved { e, n, unique: false })
        }
    }
}

/// Self-intersection of a section after one elementary transformation.
pub fn elm_section_effect(passes_through_center: bool, self_int: i64) -> i64 {
    if passes_through_center {
        self_int - 1
    } else {
        self_int + 1
    }
}

/// Self-intersections of a section along a sequence of elementary
/// transformations (`true`: the centre lies on the section).
pub fn elm_sequence(start: i64, through: &[bool]) -> Vec<i64> {
    let mut out = Vec::with_capacity(through.len() + 1);
    out.push(start);
    let mut s = start;
    for &t in through {
        s = elm_section_effect(t, s);
        out.push(s);
    }
    out
}

/// A point of the curve, ordered lexicographically by (re, im).
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint(pub Complex64);

impl PartialEq for CurvePoint {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}
impl Eq for CurvePoint {}
impl PartialOrd for CurvePoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for CurvePoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.re.total_cmp(&other.0.re).then(self.0.im.total_cmp(&other.0.im))
    }
}

/// Finite formal sum Σ nᵢ[xᵢ].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DivisorOnCurve {
    terms: BTreeMap<CurvePoint, i64>,
}

impl DivisorOnCurve {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(x: Complex64) -> Self {
        let mut d = Self::zero();
        d.add(x, 1);
        d
    }

    pub fn add(&mut self, x: Complex64, k: i64) {
        let entry = self.terms.entry(CurvePoint(x)).or_insert(0);
        *entry += k;
        if *entry == 0 {
            self.terms.remove(&CurvePoint(x));
        }
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn coefficient(&self, x: Complex64) -> i64 {
        self.terms.get(&CurvePoint(x)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Complex64, i64)> + '_ {
        self.terms.iter().map(|(p, k)| (p.0, *k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Σ nᵢ xᵢ, the image in the group ℂ/Λ (not reduced).
    pub fn abel_sum(&self) -> Complex64 {
        self.terms.iter().map(|(p, k)| p.0 * *k as f64).sum()
    }
}

impl fmt::Display for DivisorOnCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(p, k)| format!("{k}[{}{:+}i]", p.0.re, p.0.im)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Which of the two disjoint sections of the compactified line bundle
/// contains the centre of the transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineBundleSection {
    Zero,
    Infinity,
}

/// elm at the point over `x` of the given section of the compactification
/// of O(D): D − [x] on the zero section, D + [x] on the infinity section.
pub fn elm_on_line_bundle(d: &DivisorOnCurve, x: Complex64, section: LineBundleSection) -> DivisorOnCurve {
    let mut out = d.clone();
    match section {
        LineBundleSection::Zero => out.add(x, -1),
        LineBundleSection::Infinity => out.add(x, 1),
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuledBundleClass {
    Trivial,
    /// Compactified degree-0 line bundle O([u₀] − [0]); u₀ and −u₀ give the same bundle.
    LineBundleBar(Complex64),
    P0,
    Pminus1,
    /// Compactified line bundle of the given nonzero degree.
    DecomposableDeg(i64),
}

impl RuledBundleClass {
    pub fn tag(&self) -> &'static str {
        match self {
            RuledBundleClass::Trivial => "trivial",
            RuledBundleClass::LineBundleBar(_) => "line-bundle-bar",
            RuledBundleClass::P0 => "P0",
            RuledBundleClass::Pminus1 => "P-1",
            RuledBundleClass::DecomposableDeg(_) => "decomposable",
        }
    }

    /// Invariant e of the bundle.
    pub fn e(&self) -> i64 {
        match *self {
            RuledBundleClass::Trivial | RuledBundleClass::LineBundleBar(_) | RuledBundleClass::P0 => 0,
            RuledBundleClass::Pminus1 => -1,
            RuledBundleClass::DecomposableDeg(d) => d.abs(),
        }
    }

    /// Same class with the point of a line bundle reduced to its canonical
    /// representative of {u₀, −u₀} mod Λ.
    pub fn canonicalize(self, lattice: &Lattice) -> Self {
        match self {
            RuledBundleClass::LineBundleBar(u0) => RuledBundleClass::LineBundleBar(canonical_pm(lattice, u0)),
            other => other,
        }
    }
}

/// Representative of ±u₀ mod Λ in the upper half of the centered parallelogram
/// (Im-coordinate along τ positive, or zero with non-negative real coordinate).
pub fn canonical_pm(lattice: &Lattice, u0: Complex64) -> Complex64 {
    let tau = lattice.tau();
    let v = lattice.reduce(u0).reduced;
    let w = lattice.reduce(-v).reduced;
    // coordinates v = s + tτ
    let t_of = |z: Complex64| z.im / tau.im;
    let s_of = |z: Complex64| z.re - t_of(z) * tau.re;
    let key = |z: Complex64| {
        let t = t_of(z);
        let t = if t.abs() < 1e-12 { 0.0 } else { t };
        (t, s_of(z))
    };
    let (kv, kw) = (key(v), key(w));
    if kv.0 > kw.0 || (kv.0 == kw.0 && kv.1 >= kw.1) {
        v
    } else {
        w
    }
}

/// Location of the centre q of the second elementary transformation after
/// elm at (0, ∞) of the trivial bundle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SecondElmLocation {
    /// The point p̃ through which all +1 sections pass.
    SpecialPoint,
    /// (u₀, z₀) with u₀ ≠ 0, z₀ ≠ ∞.
    GenericOffFiber(Complex64),
    /// On the fibre over 0, neither p̃ nor on σ∞.
    SameFiberGeneric,
    /// On σ∞ over u₀.
    OnSigmaInfinity(Complex64),
}

fn class_of_divisor(d: &DivisorOnCurve) -> RuledBundleClass {
    match d.degree() {
        0 if d.is_zero() || d.abel_sum() == ZERO => RuledBundleClass::Trivial,
        0 => RuledBundleClass::LineBundleBar(d.abel_sum()),
        k => RuledBundleClass::DecomposableDeg(k),
    }
}

/// Bundle obtained by the second elementary transformation. In the fibre
/// coordinate z of the family, z = ∞ lies on the zero section of the line
/// bundle, so the first transformation produces O(−[0]).
pub fn case_analysis_second_elm(q: SecondElmLocation) -> RuledBundleClass {
    let first = elm_on_line_bundle(&DivisorOnCurve::zero(), ZERO, LineBundleSection::Zero);
    match q {
        SecondElmLocation::SpecialPoint => RuledBundleClass::Trivial,
        SecondElmLocation::SameFiberGeneric => RuledBundleClass::P0,
        SecondElmLocation::GenericOffFiber(u0) => {
            class_of_divisor(&elm_on_line_bundle(&first, u0, LineBundleSection::Infinity))
        }
        SecondElmLocation::OnSigmaInfinity(u0) => {
            class_of_divisor(&elm_on_line_bundle(&first, u0, LineBundleSection::Zero))
        }
    }
}

/// Result of classifying a suspension, with the lattice-membership diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuspensionClass {
    pub class: RuledBundleClass,
    /// For linear representations: u₀ = (log a_τ − τ log a₁)/2πi, the lattice point
    /// nearest to it and their distance.
    pub u0: Option<Complex64>,
    pub nearest: Option<Complex64>,
    pub distance: Option<f64>,
}

/// Bound on the lattice search |k|, |l|.
pub const LATTICE_SEARCH_BOUND: i64 = 50;
/// Distances in (tol, AMBIGUITY_FACTOR·tol] are reported as ambiguous.
pub const AMBIGUITY_FACTOR: f64 = 100.0;

fn nearest_by_search(tau: Complex64, z: Complex64) -> (Complex64, f64) {
    let mut best = (ZERO, f64::INFINITY);
    // search window around the rounded coordinates, clamped to the bound
    let l0 = (z.im / tau.im).round() as i64;
    let k0 = (z.re - l0 as f64 * tau.re).round() as i64;
    for l in (l0 - 2).max(-LATTICE_SEARCH_BOUND)..=(l0 + 2).min(LATTICE_SEARCH_BOUND) {
        for k in (k0 - 2).max(-LATTICE_SEARCH_BOUND)..=(k0 + 2).min(LATTICE_SEARCH_BOUND) {
            let p = tau * l as f64 + k as f64;
            let d = (z - p).norm();
            if d < best.1 {
                best = (p, d);
            }
        }
    }
    best
}

/// Bundle class of the suspension of a commuting pair in normal form.
pub fn classify_suspension(rep: &RepClass, tau: Complex64, tol: f64) -> Result<SuspensionClass> {
    let lattice = Lattice::new(tau)?;
    let plain = |class| SuspensionClass { class, u0: None, nearest: None, distance: None };
    match *rep {
        RepClass::Trivial => Ok(plain(RuledBundleClass::Trivial)),
        RepClass::Dihedral => Ok(plain(RuledBundleClass::Pminus1)),
        RepClass::Linear { a1, a_tau } => {
            if a1 == ZERO || a_tau == ZERO {
                return Err(Error::Domain("linear multipliers must be nonzero".into()));
            }
            // (a₁, a_τ) = (e^c, e^{cτ}) iff τ log a₁ − log a_τ ∈ 2πiΛ
            let u0 = (a_tau.ln() - tau * a1.ln()) / TWO_PI_I;
            let (nearest, d) = nearest_by_search(tau, u0);
            if d > tol && d <= AMBIGUITY_FACTOR * tol {
                return Err(Error::Ambiguous(format!(
                    "u0 = {u0} at distance {d:e} from lattice point {nearest}: trivial or line-bundle-bar({})",
                    canonical_pm(&lattice, u0)
                )));
            }
            let class = if d <= tol {
                RuledBundleClass::Trivial
            } else {
                RuledBundleClass::LineBundleBar(canonical_pm(&lattice, u0))
            };
            Ok(SuspensionClass { class, u0: Some(u0), nearest: Some(nearest), distance: Some(d) })
        }
        RepClass::Euclidean { b1, b_tau } => {
            let scale = b1.norm().max(b_tau.norm());
            if scale == 0.0 {
                return Ok(plain(RuledBundleClass::Trivial));
            }
            let d = (b_tau - tau * b1).norm() / scale;
            if d > tol && d <= AMBIGUITY_FACTOR * tol {
                return Err(Error::Ambiguous(format!(
                    "translation parts nearly proportional to (1, tau) (defect {d:e}): trivial or P0"
                )));
            }
            let class = if d <= tol { RuledBundleClass::Trivial } else { RuledBundleClass::P0 };
            Ok(SuspensionClass { class, u0: None, nearest: None, distance: Some(d) })
        }
    }
}
