//! The monodromy map M: A₀ → ℂ* × ℂ* of the linear family, its charts,
//! Jacobian, Newton inverse and the induced group law on connections.
//!
//! In the main chart (u₀, c) the generator γ has multiplier
//! exp(−u₀η_γ + ζ(u₀)γ + cγ). Near u₀ ≡ 0 the chart (u₀, c₀) with
//! c₀ = c + 1/u₀ replaces c, and the multiplier reads
//! exp(−u₀η_γ + (ζ(u₀) − 1/u₀)γ + c₀γ), which is regular at u₀ = 0.

use crate::complex::{nearest_branch, rel_dist, ONE, TWO_PI_I, ZERO};
use crate::error::{Error, Result, Singularity};
use crate::weierstrass::WeierstrassContext;
use num_complex::Complex64;

/// A point of A₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum A0Point {
    Main { u0: Complex64, c: Complex64 },
    /// `u0` is a small representative (|u0| below the outer chart radius),
    /// `u0 = 0` being the trivial line bundle.
    Zero { u0: Complex64, c0: Complex64 },
}

impl A0Point {
    pub fn main(u0: Complex64, c: Complex64) -> Self {
        A0Point::Main { u0, c }
    }

    /// Connection e^{c₀ u}-type point over the trivial bundle.
    pub fn zero(c0: Complex64) -> Self {
        A0Point::Zero { u0: ZERO, c0 }
    }

    pub fn u0(&self) -> Complex64 {
        match *self {
            A0Point::Main { u0, .. } | A0Point::Zero { u0, .. } => u0,
        }
    }

    pub fn chart_name(&self) -> &'static str {
        match self {
            A0Point::Main { .. } => "main",
            A0Point::Zero { .. } => "zero",
        }
    }
}

/// Radii of the chart overlap annulus around u₀ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartRadii {
    /// The main chart is refused below this distance from Λ.
    pub inner: f64,
    /// The zero chart is refused beyond this radius.
    pub outer: f64,
}

impl ChartRadii {
    /// 0.05 and 0.2 times the shortest period.
    pub fn for_context(ctx: &WeierstrassContext) -> Self {
        let l = ctx.lattice().shortest_vector();
        Self { inner: 0.05 * l, outer: 0.2 * l }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyPair {
    pub x: Complex64,
    pub y: Complex64,
}

impl MonodromyPair {
    pub fn new(x: Complex64, y: Complex64) -> Result<Self> {
        if x == ZERO || y == ZERO {
            return Err(Error::Domain("monodromy multipliers must be nonzero".into()));
        }
        Ok(Self { x, y })
    }

    pub fn logs(&self) -> [Complex64; 2] {
        [self.x.ln(), self.y.ln()]
    }

    pub fn on_unitary_torus(&self, tol: f64) -> bool {
        (self.x.norm() - 1.0).abs() <= tol && (self.y.norm() - 1.0).abs() <= tol
    }

    /// max over components of |self/other − 1|
    pub fn ratio_deviation(&self, other: &MonodromyPair) -> f64 {
        (self.x / other.x - 1.0).norm().max((self.y / other.y - 1.0).norm())
    }
}

fn check_main(ctx: &WeierstrassContext, u0: Complex64) -> Result<()> {
    let radii = ChartRadii::for_context(ctx);
    let (lambda, d) = ctx.lattice().nearest_point(u0);
    if d < radii.inner {
        return Err(Error::Chart(format!(
            "u0 = {u0} lies within {:.3e} of the lattice point {lambda}; use the zero chart (u0, c0 = c + 1/u0)",
            radii.inner
        )));
    }
    Ok(())
}

fn check_zero(ctx: &WeierstrassContext, u0: Complex64) -> Result<()> {
    let radii = ChartRadii::for_context(ctx);
    if u0.norm() > radii.outer {
        return Err(Error::Chart(format!("zero chart needs |u0| <= {:.3e} (got {u0})", radii.outer)));
    }
    Ok(())
}

/// Branch of (log x, log y) given by the formulas.
pub fn rh_log(ctx: &WeierstrassContext, p: &A0Point) -> Result<[Complex64; 2]> {
    let tau = ctx.tau();
    let (u0, k) = match *p {
        A0Point::Main { u0, c } => {
            check_main(ctx, u0)?;
            (u0, ctx.zeta(u0)? + c)
        }
        A0Point::Zero { u0, c0 } => {
            check_zero(ctx, u0)?;
            (u0, ctx.zeta_regular(u0)? + c0)
        }
    };
    Ok([-u0 * ctx.eta1() + k, -u0 * ctx.eta_tau() + k * tau])
}

pub fn rh_map(ctx: &WeierstrassContext, p: &A0Point) -> Result<MonodromyPair> {
    let [l1, lt] = rh_log(ctx, p)?;
    MonodromyPair::new(l1.exp(), lt.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartDirection {
    ToZero,
    ToMain,
}

/// Re-express `p` in the other chart; only allowed on the overlap annulus.
pub fn chart_transition(ctx: &WeierstrassContext, p: &A0Point, direction: ChartDirection) -> Result<A0Point> {
    let radii = ChartRadii::for_context(ctx);
    let in_annulus = |r: f64| r >= radii.inner && r <= radii.outer;
    match (*p, direction) {
        (A0Point::Main { u0, c }, ChartDirection::ToZero) => {
            let (lambda, d) = ctx.lattice().nearest_point(u0);
            if !in_annulus(d) {
                return Err(Error::Chart(format!("|u0| = {d:.4e} outside the overlap annulus")));
            }
            let v = u0 - lambda;
            Ok(A0Point::Zero { u0: v, c0: c + 1.0 / v })
        }
        (A0Point::Zero { u0, c0 }, ChartDirection::ToMain) => {
            if !in_annulus(u0.norm()) {
                return Err(Error::Chart(format!("|u0| = {:.4e} outside the overlap annulus", u0.norm())));
            }
            Ok(A0Point::Main { u0, c: c0 - 1.0 / u0 })
        }
        (q, _) => Ok(q),
    }
}

/// Jacobian of (log x, log y) with respect to the chart coordinates.
#[derive(Debug, Clone, Copy)]
pub struct Jacobian {
    /// Rows (log x, log y); columns (u₀, c).
    pub numeric: [[Complex64; 2]; 2],
    pub analytic: [[Complex64; 2]; 2],
    /// Descending.
    pub singular_values: [f64; 2],
}

/// Singular values of a complex 2×2 matrix, descending.
pub fn singular_values(m: &[[Complex64; 2]; 2]) -> [f64; 2] {
    let fro2: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let big = ((fro2 + disc) / 2.0).sqrt();
    let small = if big > 0.0 { det / big } else { 0.0 };
    [big, small]
}

/// Closed-form Jacobian [[−η₁ − ℘(u₀), 1], [−η_τ − ℘(u₀)τ, τ]] (℘ − 1/u₀² in the zero chart).
pub fn rh_jacobian_analytic(ctx: &WeierstrassContext, p: &A0Point) -> Result<[[Complex64; 2]; 2]> {
    let tau = ctx.tau();
    let w = match *p {
        A0Point::Main { u0, .. } => ctx.wp(u0)?,
        A0Point::Zero { u0, .. } => ctx.wp_regular(u0)?,
    };
    Ok([[-ctx.eta1() - w, ONE], [-ctx.eta_tau() - w * tau, tau]])
}

/// Fourth-order central-difference Jacobian at a main-chart point.
pub fn rh_jacobian(ctx: &WeierstrassContext, p: &A0Point, h: f64) -> Result<Jacobian> {
    let (u0, c) = match *p {
        A0Point::Main { u0, c } => (u0, c),
        A0Point::Zero { .. } => return Err(Error::Chart("Jacobian is taken in the main chart".into())),
    };
    check_main(ctx, u0)?;
    let radii = ChartRadii::for_context(ctx);
    let d = ctx.lattice().distance_to_lattice(u0);
    if d - 2.0 * h < radii.inner.min(d / 2.0) {
        return Err(Error::Stencil(format!("stencil of width {h:e} around u0 = {u0} reaches a lattice point")));
    }
    let stencil = |f: &dyn Fn(f64) -> Result<[Complex64; 2]>| -> Result<[Complex64; 2]> {
        let (m2, m1, p1, p2) = (f(-2.0 * h)?, f(-h)?, f(h)?, f(2.0 * h)?);
        let mut out = [ZERO; 2];
        for i in 0..2 {
            out[i] = (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h);
        }
        Ok(out)
    };
    let du = stencil(&|t| rh_log(ctx, &A0Point::Main { u0: u0 + t, c }))?;
    let dc = stencil(&|t| rh_log(ctx, &A0Point::Main { u0, c: c + t }))?;
    let numeric = [[du[0], dc[0]], [du[1], dc[1]]];
    Ok(Jacobian { numeric, analytic: rh_jacobian_analytic(ctx, p)?, singular_values: singular_values(&numeric) })
}

#[derive(Debug, Clone, Copy)]
pub struct InverseOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for InverseOptions {
    fn default() -> Self {
        Self { max_iterations: 50, tolerance: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct InverseResult {
    pub point: A0Point,
    pub iterations: usize,
    /// max |log-residual| at the returned point (seed branch).
    pub residual: f64,
    /// The target lies on |x| = |y| = 1.
    pub on_unitary_torus: bool,
}

/// Moves `p` into the chart appropriate for its u₀, reducing u₀ mod Λ.
fn rechart(ctx: &WeierstrassContext, p: A0Point) -> A0Point {
    let radii = ChartRadii::for_context(ctx);
    match p {
        A0Point::Main { u0, c } => {
            let (lambda, d) = ctx.lattice().nearest_point(u0);
            let v = u0 - lambda;
            if d < radii.inner && v != ZERO {
                A0Point::Zero { u0: v, c0: c + 1.0 / v }
            } else if d < radii.inner {
                A0Point::Zero { u0: ZERO, c0: c }
            } else {
                A0Point::Main { u0: ctx.lattice().reduce(u0).reduced, c }
            }
        }
        A0Point::Zero { u0, c0 } if u0.norm() > radii.outer => {
            let u = ctx.lattice().reduce(u0).reduced;
            A0Point::Main { u0: u, c: c0 - 1.0 / u0 }
        }
        q => q,
    }
}

/// Newton inverse of the monodromy map on (log x, log y), branches fixed
/// nearest the seed's logarithms.
pub fn rh_inverse(
    ctx: &WeierstrassContext,
    target: &MonodromyPair,
    seed: &A0Point,
    opts: &InverseOptions,
) -> Result<InverseResult> {
    if !matches!(seed, A0Point::Main { .. }) {
        return Err(Error::Chart("the Newton seed must be a main-chart point".into()));
    }
    let raw = target.logs();
    let mut p = *seed;
    let mut l = rh_log(ctx, &p)?;
    let mut t = [nearest_branch(raw[0], l[0]), nearest_branch(raw[1], l[1])];
    let residual_of = |l: &[Complex64; 2], t: &[Complex64; 2]| (l[0] - t[0]).norm().max((l[1] - t[1]).norm());
    let scale = 1f64.max(t[0].norm()).max(t[1].norm());
    let mut res = residual_of(&l, &t);
    for it in 0..opts.max_iterations {
        if res <= opts.tolerance * scale {
            return Ok(InverseResult {
                point: p,
                iterations: it,
                residual: res,
                on_unitary_torus: target.on_unitary_torus(1e-12),
            });
        }
        let j = rh_jacobian_analytic(ctx, &p)?;
        let r = [t[0] - l[0], t[1] - l[1]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let du = (r[0] * j[1][1] - r[1] * j[0][1]) / det;
        let dc = (j[0][0] * r[1] - j[1][0] * r[0]) / det;
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let trial = match p {
                A0Point::Main { u0, c } => A0Point::Main { u0: u0 + du * step, c: c + dc * step },
                A0Point::Zero { u0, c0 } => A0Point::Zero { u0: u0 + du * step, c0: c0 + dc * step },
            };
            let trial = rechart(ctx, trial);
            if let Ok(lt) = rh_log(ctx, &trial) {
                let tt = [nearest_branch(t[0], lt[0]), nearest_branch(t[1], lt[1])];
                let rt = residual_of(&lt, &tt);
                if rt < res || rt <= opts.tolerance * scale {
                    p = trial;
                    l = lt;
                    t = tt;
                    res = rt;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence { iterations: it + 1, residual: res });
        }
    }
    if res <= opts.tolerance * scale {
        return Ok(InverseResult {
            point: p,
            iterations: opts.max_iterations,
            residual: res,
            on_unitary_torus: target.on_unitary_torus(1e-12),
        });
    }
    Err(Error::NoConvergence { iterations: opts.max_iterations, residual: res })
}

/// Direct inverse in the main chart: u₀ = (T_τ − τT₁)/2πi, c = T₁ + u₀η₁ − ζ(u₀).
pub fn rh_inverse_closed_form(ctx: &WeierstrassContext, logs: [Complex64; 2]) -> Result<A0Point> {
    let u0 = (logs[1] - ctx.tau() * logs[0]) / TWO_PI_I;
    check_main(ctx, u0)?;
    Ok(A0Point::Main { u0, c: logs[0] + u0 * ctx.eta1() - ctx.zeta(u0)? })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChartRequest {
    #[default]
    Auto,
    Main,
}

/// Below this |u₂ − u₁| (mod Λ) the chord slope is replaced by the tangent slope.
pub const COINCIDENCE_RADIUS: f64 = 1e-5;

/// (℘′(u₂) − ℘′(u₁)) / (2(℘(u₂) − ℘(u₁))), or ℘″/(2℘′) at the midpoint
/// when u₁ ≡ u₂.
pub fn group_correction(ctx: &WeierstrassContext, u1: Complex64, u2: Complex64) -> Result<Complex64> {
    let lat = ctx.lattice();
    let (lambda, d) = lat.nearest_point(u2 - u1);
    if d < COINCIDENCE_RADIUS {
        let m = (u1 + u2 - lambda) / 2.0;
        let v = ctx.values(m)?;
        let w2 = 6.0 * v.wp * v.wp - ctx.g2() / 2.0;
        if v.wp_prime.norm() < 1e-300 {
            return Err(Error::Chart("tangent slope undefined at a half-period".into()));
        }
        return Ok(w2 / (2.0 * v.wp_prime));
    }
    let a = ctx.values(u1)?;
    let b = ctx.values(u2)?;
    Ok((b.wp_prime - a.wp_prime) / (2.0 * (b.wp - a.wp)))
}

/// Tensor product of the line bundles with connection: u₃ = u₁ + u₂,
/// c₃ = c₁ + c₂ − (℘′(u₂) − ℘′(u₁))/(2(℘(u₂) − ℘(u₁))).
pub fn group_law(ctx: &WeierstrassContext, p1: &A0Point, p2: &A0Point, request: ChartRequest) -> Result<A0Point> {
    let lat = ctx.lattice();
    let radii = ChartRadii::for_context(ctx);
    let as_main = |p: &A0Point| -> Result<Option<(Complex64, Complex64)>> {
        match *p {
            A0Point::Main { u0, c } => {
                check_main(ctx, u0)?;
                Ok(Some((u0, c)))
            }
            A0Point::Zero { u0, .. } if u0 == ZERO => Ok(None),
            A0Point::Zero { u0, c0 } => {
                check_zero(ctx, u0)?;
                Ok(Some((u0, c0 - 1.0 / u0)))
            }
        }
    };
    let shift = |p: &A0Point, by: Complex64| match *p {
        A0Point::Main { u0, c } => A0Point::Main { u0, c: c + by },
        A0Point::Zero { u0, c0 } => A0Point::Zero { u0, c0: c0 + by },
    };
    let out = match (as_main(p1)?, as_main(p2)?) {
        (None, _) => {
            let A0Point::Zero { c0, .. } = *p1 else { unreachable!() };
            shift(p2, c0)
        }
        (_, None) => {
            let A0Point::Zero { c0, .. } = *p2 else { unreachable!() };
            shift(p1, c0)
        }
        (Some((u1, c1)), Some((u2, c2))) => {
            let u1 = lat.reduce(u1).reduced;
            let u2 = lat.reduce(u2).reduced;
            let s = u1 + u2;
            let r = lat.reduce(s);
            let (lambda, d) = lat.nearest_point(s);
            if d < radii.inner {
                // L ⊗ L⁻¹ up to a small u₃: evaluate in the zero chart
                let v = s - lambda;
                let rl = lat.reduce(lambda);
                let c0 = c1 + c2 + ctx.zeta(u1)? + ctx.zeta(u2)? - ctx.eta(rl.m, rl.n) - ctx.zeta_regular(v)?;
                A0Point::Zero { u0: v, c0 }
            } else {
                let k = group_correction(ctx, u1, u2)?;
                A0Point::Main { u0: r.reduced, c: c1 + c2 - k }
            }
        }
    };
    if request == ChartRequest::Main {
        if let A0Point::Zero { u0, c0 } = out {
            if u0.norm() < radii.inner {
                return Err(Error::Chart(format!(
                    "u1 + u2 is within {:.3e} of the lattice; the product only exists in the zero chart",
                    radii.inner
                )));
            }
            return Ok(A0Point::Main { u0, c: c0 - 1.0 / u0 });
        }
    }
    Ok(out)
}

/// |M(p₁)·M(p₂)/M(p₃) − (1, 1)|
pub fn group_law_residual(ctx: &WeierstrassContext, p1: &A0Point, p2: &A0Point, p3: &A0Point) -> Result<f64> {
    let (a, b, c) = (rh_map(ctx, p1)?, rh_map(ctx, p2)?, rh_map(ctx, p3)?);
    Ok((a.x * b.x / c.x - 1.0).norm().max((a.y * b.y / c.y - 1.0).norm()))
}

/// Whether two points of A₀ define the same connection (same u₀ mod Λ, same c).
pub fn same_point(ctx: &WeierstrassContext, p: &A0Point, q: &A0Point, tol: f64) -> bool {
    let (lp, lq) = match (rh_log(ctx, p), rh_log(ctx, q)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return false,
    };
    // logs agree up to 2πi ℤ
    (0..2).all(|i| rel_dist(nearest_branch(lp[i], lq[i]), lq[i]) <= tol)
}

fn divisor_parts(ctx: &WeierstrassContext, u1: Complex64, u2: Complex64, u3: Complex64, u: Complex64) -> Result<(Complex64, Complex64)> {
    let lat = ctx.lattice();
    if lat.distance_to_lattice(u1 + u2 - u3) > 1e-9 {
        return Err(Error::Precondition("u3 must equal u1 + u2 modulo the lattice".into()));
    }
    for (z, kind) in [(ZERO, 0), (u1, 1), (u2, 1), (u3, 1), (-u3, 1)] {
        let (l, d) = lat.nearest_point(u - z);
        if d < 1e-3 {
            let at = if kind == 0 { Singularity::Lattice(l) } else { Singularity::ConnectionPole(z + l) };
            return Err(Error::Pole { at, distance: d });
        }
    }
    let slope = 2.0 * group_correction(ctx, u1, u2)?;
    let a = ctx.values(u)?;
    let b = ctx.values(u1)?;
    let w3 = ctx.wp(u3)?;
    let num = a.wp_prime - b.wp_prime - slope * (a.wp - b.wp);
    let den = a.wp - w3;
    let w2 = 6.0 * a.wp * a.wp - ctx.g2() / 2.0;
    let f = num / den;
    let dlog = (w2 - slope * a.wp_prime) / num - a.wp_prime / den;
    Ok((f, dlog))
}

/// f(u) = [℘′(u) − ℘′(u₁) − m(℘(u) − ℘(u₁))] / (℘(u) − ℘(u₃)), m the chord slope
/// through (℘, ℘′)(u₁) and (℘, ℘′)(u₂); divisor [u₁] + [u₂] − [u₃] − [0].
pub fn divisor_function(ctx: &WeierstrassContext, u1: Complex64, u2: Complex64, u: Complex64) -> Result<Complex64> {
    Ok(divisor_parts(ctx, u1, u2, u1 + u2, u)?.0)
}

/// f′/f − (A(u; u₁) + A(u; u₂) − A(u; u₃) + K), K the group-law correction.
pub fn divisor_witness(ctx: &WeierstrassContext, u1: Complex64, u2: Complex64, u3: Complex64, u: Complex64) -> Result<Complex64> {
    let (_, dlog) = divisor_parts(ctx, u1, u2, u3, u)?;
    let a = |w: Complex64| crate::riccati::coefficient_a(ctx, w, u);
    let k = group_correction(ctx, u1, u2)?;
    Ok(dlog - (a(u1)? + a(u2)? - a(u3)? + k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{c, I};

    fn ctx() -> WeierstrassContext {
        WeierstrassContext::new(I, 1e-13).unwrap()
    }

    #[test]
    fn zero_chart_values() {
        let k = ctx();
        let m = rh_map(&k, &A0Point::zero(ZERO)).unwrap();
        assert!((m.x - 1.0).norm() < 1e-15 && (m.y - 1.0).norm() < 1e-15);
        let c0 = c(0.5, 0.0);
        let m = rh_map(&k, &A0Point::zero(c0)).unwrap();
        assert!((m.x - c0.exp()).norm() < 1e-14 && (m.y - (c0 * I).exp()).norm() < 1e-14);
    }

    #[test]
    fn main_chart_refused_near_lattice() {
        let k = ctx();
        assert!(matches!(rh_map(&k, &A0Point::main(c(1.0, 1e-3), ONE)), Err(Error::Chart(_))));
    }

    #[test]
    fn chart_round_trip_and_coherence() {
        let k = ctx();
        let p = A0Point::main(c(0.08, 0.05), c(0.3, -0.2));
        let z = chart_transition(&k, &p, ChartDirection::ToZero).unwrap();
        let back = chart_transition(&k, &z, ChartDirection::ToMain).unwrap();
        let (A0Point::Main { u0, c: cc }, A0Point::Main { u0: u1, c: c1 }) = (p, back) else { panic!() };
        assert!((u0 - u1).norm() < 1e-12 && (cc - c1).norm() < 1e-12);
        assert!(rh_map(&k, &p).unwrap().ratio_deviation(&rh_map(&k, &z).unwrap()) < 1e-10);
        assert!(chart_transition(&k, &A0Point::main(c(0.4, 0.3), ONE), ChartDirection::ToZero).is_err());
    }

    #[test]
    fn limit_along_chart_curve() {
        let k = ctx();
        let c0 = c(0.2, 0.7);
        let target = rh_map(&k, &A0Point::zero(c0)).unwrap();
        let mut prev = f64::INFINITY;
        for e in [0.2, 0.1, 0.06] {
            let u0 = c(e, 0.3 * e);
            let m = rh_map(&k, &A0Point::main(u0, c0 - 1.0 / u0)).unwrap();
            let d = m.ratio_deviation(&target);
            assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn jacobian() {
        let k = WeierstrassContext::new(c(0.2, 0.9), 1e-13).unwrap();
        let p = A0Point::main(c(0.3, 0.2), c(0.1, 0.4));
        let j = rh_jacobian(&k, &p, 1e-3).unwrap();
        assert!((j.numeric[0][1] - 1.0).norm() < 1e-10 && (j.numeric[1][1] - k.tau()).norm() < 1e-10);
        for r in 0..2 {
            for col in 0..2 {
                assert!((j.numeric[r][col] - j.analytic[r][col]).norm() < 1e-8);
            }
        }
        let det = j.analytic[0][0] * j.analytic[1][1] - j.analytic[0][1] * j.analytic[1][0];
        assert!((det + TWO_PI_I).norm() < 1e-10);
        assert!(j.singular_values[1] > 1e-6);
    }

    #[test]
    fn inverse_round_trip() {
        let k = WeierstrassContext::new(c(0.2, 0.9), 1e-13).unwrap();
        let p = A0Point::main(c(0.3, 0.2), c(0.1, 0.4));
        let target = rh_map(&k, &p).unwrap();
        let r = rh_inverse(&k, &target, &A0Point::main(c(0.25, 0.25), c(0.0, 0.3)), &InverseOptions::default()).unwrap();
        assert!(same_point(&k, &r.point, &p, 1e-10));
        assert!(r.iterations <= 20);
        assert!(rh_map(&k, &r.point).unwrap().ratio_deviation(&target) < 1e-10);
        let cf = rh_inverse_closed_form(&k, rh_log(&k, &p).unwrap()).unwrap();
        assert!(same_point(&k, &cf, &p, 1e-12));
        let unit = MonodromyPair::new(c(0.3, 0.0).exp() * I, (I * 2.0).exp()).unwrap();
        let unit = MonodromyPair::new(unit.x / unit.x.norm(), unit.y).unwrap();
        let r = rh_inverse(&k, &unit, &A0Point::main(c(0.25, 0.25), ZERO), &InverseOptions::default()).unwrap();
        assert!(r.on_unitary_torus);
    }

    #[test]
    fn group_law_cases() {
        let k = WeierstrassContext::new(c(0.1, 1.1), 1e-13).unwrap();
        let p1 = A0Point::main(c(0.21, 0.13), c(0.3, 0.1));
        let p2 = A0Point::main(c(-0.34, 0.41), c(-0.2, 0.5));
        let p3 = group_law(&k, &p1, &p2, ChartRequest::Auto).unwrap();
        assert!(group_law_residual(&k, &p1, &p2, &p3).unwrap() < 1e-10);
        // identity
        let e = group_law(&k, &p1, &A0Point::zero(ZERO), ChartRequest::Auto).unwrap();
        assert_eq!(e, p1);
        // correction equals ζ(u₁+u₂) − ζ(u₁) − ζ(u₂)
        let (u1, u2) = (p1.u0(), p2.u0());
        let kz = k.zeta(u1 + u2).unwrap() - k.zeta(u1).unwrap() - k.zeta(u2).unwrap();
        assert!((group_correction(&k, u1, u2).unwrap() - kz).norm() < 1e-10);
        // inverse element
        let inv = A0Point::main(-u1, c(0.4, 0.0));
        let z = group_law(&k, &p1, &inv, ChartRequest::Auto).unwrap();
        assert!(matches!(z, A0Point::Zero { .. }));
        assert!(group_law_residual(&k, &p1, &inv, &z).unwrap() < 1e-10);
        assert!(matches!(group_law(&k, &p1, &inv, ChartRequest::Main), Err(Error::Chart(_))));
        // doubling, exact and nearly
        for eps in [ZERO, c(3e-6, 1e-6)] {
            let q = A0Point::main(u1 + eps, c(0.1, 0.0));
            let d = group_law(&k, &p1, &q, ChartRequest::Auto).unwrap();
            assert!(group_law_residual(&k, &p1, &q, &d).unwrap() < 1e-8);
        }
        // half-periods
        let h1 = A0Point::main(c(0.5, 0.0), ONE);
        let h2 = A0Point::main(k.tau() / 2.0, ZERO);
        let d = group_law(&k, &h1, &h2, ChartRequest::Auto).unwrap();
        assert!(group_law_residual(&k, &h1, &h2, &d).unwrap() < 1e-10);
        let dd = group_law(&k, &h1, &h1, ChartRequest::Auto).unwrap();
        assert!(group_law_residual(&k, &h1, &h1, &dd).unwrap() < 1e-10);
    }

    #[test]
    fn divisor() {
        let k = WeierstrassContext::new(c(0.1, 1.1), 1e-13).unwrap();
        let (u1, u2) = (c(0.21, 0.13), c(-0.34, 0.41));
        let u3 = u1 + u2;
        for u in [c(0.4, -0.2), c(-0.1, 0.3), c(0.33, 0.45)] {
            assert!(divisor_witness(&k, u1, u2, u3, u).unwrap().norm() < 1e-8);
        }
        for eps in [1e-2, 1e-3] {
            let e = c(eps, 0.0);
            let z = divisor_function(&k, u1, u2, u1 + e).unwrap().norm() / eps;
            assert!(z > 1e-3 && z < 1e3);
            let p = divisor_function(&k, u1, u2, u3 + 2.0 * e).unwrap().norm() * eps;
            assert!(p > 1e-3 && p < 1e3);
        }
    }
}
