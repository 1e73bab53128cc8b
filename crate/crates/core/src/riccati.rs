//! Transport of the linear family dz/du = (A(u) + c) z, with
//! A(u) = (℘′(u) + ℘′(u₀)) / (2(℘(u) − ℘(u₀))), and of general Riccati
//! equations dy/du + α y² + β y + γ = 0 along paths in the u-plane.

use crate::complex::{ProjPoint, ONE, ZERO};
use crate::error::{Error, Result, Singularity};
use crate::mobius::MobiusMap;
use crate::numerics::{dopri5, integrate, OdeOptions, QuadOptions};
use crate::path::{distance_to_poles, period_loops, DetourSide, PathSpec, Piece};
use crate::weierstrass::{WeierstrassContext, POLE_GUARD};
use num_complex::Complex64;

/// Within this distance of u ≡ −u₀ the coefficient is evaluated through ζ.
const ZETA_FORM_RADIUS: f64 = 1e-3;

/// Parameters (u₀, c) of the linear family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFamilyPoint {
    pub u0: Complex64,
    pub c: Complex64,
}

impl LinearFamilyPoint {
    pub fn new(ctx: &WeierstrassContext, u0: Complex64, c: Complex64) -> Result<Self> {
        let (lambda, d) = ctx.lattice().nearest_point(u0);
        if d < POLE_GUARD {
            return Err(Error::Pole { at: Singularity::Lattice(lambda), distance: d });
        }
        Ok(Self { u0, c })
    }
}

/// A(u); simple poles with residue −1 on Λ and +1 on u₀ + Λ.
pub fn coefficient_a(ctx: &WeierstrassContext, u0: Complex64, u: Complex64) -> Result<Complex64> {
    let lat = ctx.lattice();
    let (lambda, d0) = lat.nearest_point(u);
    if d0 < POLE_GUARD {
        return Err(Error::Pole { at: Singularity::Lattice(lambda), distance: d0 });
    }
    let (mu, d1) = lat.nearest_point(u - u0);
    if d1 < POLE_GUARD {
        return Err(Error::Pole { at: Singularity::ConnectionPole(u0 + mu), distance: d1 });
    }
    if lat.distance_to_lattice(u + u0) < ZETA_FORM_RADIUS {
        return coefficient_a_zeta(ctx, u0, u);
    }
    let a = ctx.values(u)?;
    let b = ctx.values(u0)?;
    Ok((a.wp_prime + b.wp_prime) / (2.0 * (a.wp - b.wp)))
}

/// ζ(u − u₀) − ζ(u) + ζ(u₀)
pub fn coefficient_a_zeta(ctx: &WeierstrassContext, u0: Complex64, u: Complex64) -> Result<Complex64> {
    Ok(ctx.zeta(u - u0)? - ctx.zeta(u)? + ctx.zeta(u0)?)
}

/// Result of integrating a closed-form 1-form along a path.
#[derive(Debug, Clone, Copy)]
pub struct LinearTransport {
    /// ∫ (A + c) du
    pub log: Complex64,
    pub multiplier: Complex64,
    /// Quadrature error estimate on `log`.
    pub error: f64,
}

fn quad_options(piece: &Piece) -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-13,
        max_panel: (0.1 / piece.length().max(1e-300)).min(1.0),
        max_panels: 20_000,
        min_width: 1e-14,
    }
}

/// ∫_path f(u) du by adaptive quadrature, piece by piece.
pub fn integrate_path<F>(path: &PathSpec, mut f: F) -> Result<(Complex64, f64)>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut total = ZERO;
    let mut err = 0.0;
    for (i, piece) in path.pieces().iter().enumerate() {
        let r = integrate(|t| Ok(f(piece.point(t))? * piece.velocity(t)), 0.0, 1.0, &quad_options(piece))
            .map_err(|e| with_piece(e, i))?;
        total += r.value;
        err += r.error;
    }
    Ok((total, err))
}

fn with_piece(e: Error, piece: usize) -> Error {
    match e {
        Error::Integration { t_start, t_end, reason, .. } => Error::Integration { piece, t_start, t_end, reason },
        other => other,
    }
}

/// Multiplier exp ∫_path (A + c) du.
pub fn transport_linear(ctx: &WeierstrassContext, p: &LinearFamilyPoint, path: &PathSpec) -> Result<LinearTransport> {
    let (log, error) = integrate_path(path, |u| Ok(coefficient_a(ctx, p.u0, u)? + p.c))?;
    Ok(LinearTransport { log, multiplier: log.exp(), error })
}

/// Multipliers of the generator loops 1 and τ.
#[derive(Debug, Clone, Copy)]
pub struct MonodromyResult {
    pub x: Complex64,
    pub y: Complex64,
    pub log_x: Complex64,
    pub log_y: Complex64,
    /// Quadrature error estimate on the logarithms.
    pub error: f64,
    pub base: Complex64,
    pub clearance: f64,
}

/// Default clearance: 0.05 shortest-period units, shrunk if the poles are close.
pub fn default_clearance(ctx: &WeierstrassContext, u0: Complex64) -> f64 {
    let lat = ctx.lattice();
    let sep = lat.distance_to_lattice(u0);
    (0.05 * lat.shortest_vector()).min(0.3 * sep)
}

/// Base point from an 8×8 grid of the fundamental domain whose two
/// generator segments stay farthest from the poles.
pub fn choose_base(ctx: &WeierstrassContext, poles: &[Complex64], clearance: f64) -> Complex64 {
    let lat = ctx.lattice();
    let tau = lat.tau();
    let mut best = (f64::NEG_INFINITY, ZERO);
    for i in 0..8 {
        for j in 0..8 {
            let base = (i as f64 + 0.5) / 8.0 - 0.5 + tau * ((j as f64 + 0.5) / 8.0 - 0.5);
            let db = distance_to_poles(lat, poles, base);
            if db < 2.0 * clearance {
                continue;
            }
            let mut score = f64::INFINITY;
            for gamma in [ONE, tau] {
                for k in 0..=32 {
                    let z = base + gamma * (k as f64 / 32.0);
                    score = score.min(distance_to_poles(lat, poles, z));
                }
            }
            if score > best.0 {
                best = (score, base);
            }
        }
    }
    best.1
}

/// Numerical monodromy of the linear family with automatic base point and clearance.
pub fn monodromy_numeric(ctx: &WeierstrassContext, p: &LinearFamilyPoint) -> Result<MonodromyResult> {
    let clearance = default_clearance(ctx, p.u0);
    let base = choose_base(ctx, &[ZERO, p.u0], clearance);
    monodromy_numeric_at(ctx, p, base, clearance, DetourSide::Ccw)
}

pub fn monodromy_numeric_at(
    ctx: &WeierstrassContext,
    p: &LinearFamilyPoint,
    base: Complex64,
    clearance: f64,
    side: DetourSide,
) -> Result<MonodromyResult> {
    let (l1, lt) = period_loops(ctx.lattice(), &[ZERO, p.u0], base, clearance, side)?;
    let a = transport_linear(ctx, p, &l1)?;
    let b = transport_linear(ctx, p, &lt)?;
    Ok(MonodromyResult {
        x: a.multiplier,
        y: b.multiplier,
        log_x: a.log,
        log_y: b.log,
        error: a.error.max(b.error),
        base,
        clearance,
    })
}

/// a·σ(u − u₀)/σ(u)·e^{(ζ(u₀) + c)u}, a solution of dz/du = (A + c) z.
pub fn closed_form_solution(ctx: &WeierstrassContext, p: &LinearFamilyPoint, a: Complex64, u: Complex64) -> Result<Complex64> {
    let (lambda, d) = ctx.lattice().nearest_point(u);
    if d < POLE_GUARD {
        return Err(Error::Pole { at: Singularity::Lattice(lambda), distance: d });
    }
    let log = ctx.ln_sigma(u - p.u0) - ctx.ln_sigma(u) + (ctx.zeta(p.u0)? + p.c) * u;
    Ok(a * log.exp())
}

/// Translation parts (b₁, b_τ) = (γ − η₁, γτ − η_τ) of dz/du = ℘(u) + γ.
pub fn euclidean_monodromy(ctx: &WeierstrassContext, gamma: Complex64) -> (Complex64, Complex64) {
    (gamma - ctx.eta1(), gamma * ctx.tau() - ctx.eta_tau())
}

/// Translation parts by quadrature of ℘ + γ along the generator loops.
#[derive(Debug, Clone, Copy)]
pub struct EuclideanNumeric {
    pub b1: Complex64,
    pub b_tau: Complex64,
    pub error: f64,
}

pub fn euclidean_monodromy_numeric(
    ctx: &WeierstrassContext,
    gamma: Complex64,
    base: Complex64,
    clearance: f64,
) -> Result<EuclideanNumeric> {
    let (l1, lt) = period_loops(ctx.lattice(), &[ZERO], base, clearance, DetourSide::Ccw)?;
    let (b1, e1) = integrate_path(&l1, |u| Ok(ctx.wp(u)? + gamma))?;
    let (bt, et) = integrate_path(&lt, |u| Ok(ctx.wp(u)? + gamma))?;
    Ok(EuclideanNumeric { b1, b_tau: bt, error: e1.max(et) })
}

/// Coefficients (α, β, γ) of dy/du + α y² + β y + γ = 0.
pub type RiccatiCoefficients<'a> = dyn Fn(Complex64) -> Result<[Complex64; 3]> + 'a;

/// Projective transport map of a Riccati equation along `path`, obtained
/// from the traceless lift Y′ = [[−β/2, −γ], [α, β/2]] Y with y = Y₁/Y₂.
pub fn transport_riccati_map(eq: &RiccatiCoefficients, path: &PathSpec) -> Result<MobiusMap> {
    let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, h_init: 1e-2, ..Default::default() };
    // row-major 2×2 fundamental matrix
    let mut y = [ONE, ZERO, ZERO, ONE];
    for (i, piece) in path.pieces().iter().enumerate() {
        let rhs = |t: f64, y: &[Complex64; 4]| -> Result<[Complex64; 4]> {
            let [al, be, ga] = eq(piece.point(t))?;
            let v = piece.velocity(t);
            let m = [-be / 2.0 * v, -ga * v, al * v, be / 2.0 * v];
            Ok([
                m[0] * y[0] + m[1] * y[2],
                m[0] * y[1] + m[1] * y[3],
                m[2] * y[0] + m[3] * y[2],
                m[2] * y[1] + m[3] * y[3],
            ])
        };
        let renormalize = |y: &mut [Complex64; 4]| {
            let det = y[0] * y[3] - y[1] * y[2];
            let s = det.sqrt();
            if s != ZERO {
                for e in y.iter_mut() {
                    *e /= s;
                }
            }
        };
        y = dopri5(rhs, 0.0, 1.0, y, &opts, renormalize).map_err(|e| with_piece(e, i))?.y;
    }
    MobiusMap::new(y[0], y[1], y[2], y[3])
}

/// Transport of the initial value `y0` (possibly ∞) along `path`.
pub fn transport_riccati(eq: &RiccatiCoefficients, path: &PathSpec, y0: ProjPoint) -> Result<ProjPoint> {
    Ok(transport_riccati_map(eq, path)?.apply(y0))
}

/// The linear family as a Riccati equation: α = γ = 0, β = −(A + c).
pub fn linear_family_riccati<'a>(ctx: &'a WeierstrassContext, p: &'a LinearFamilyPoint) -> impl Fn(Complex64) -> Result<[Complex64; 3]> + 'a {
    move |u| Ok([ZERO, -(coefficient_a(ctx, p.u0, u)? + p.c), ZERO])
}

/// dz/du = ℘(u) + γ as a Riccati equation.
pub fn euclidean_riccati(ctx: &WeierstrassContext, gamma: Complex64) -> impl Fn(Complex64) -> Result<[Complex64; 3]> + '_ {
    move |u| Ok([ZERO, ZERO, -(ctx.wp(u)? + gamma)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{c, I, TWO_PI_I};

    fn ctx() -> WeierstrassContext {
        WeierstrassContext::new(c(0.1, 1.05), 1e-13).unwrap()
    }

    #[test]
    fn coefficient_forms_agree() {
        let k = ctx();
        let u0 = c(0.31, 0.22);
        for u in [c(0.1, 0.4), c(-0.3, 0.1), c(0.45, -0.35)] {
            let a = coefficient_a(&k, u0, u).unwrap();
            let b = coefficient_a_zeta(&k, u0, u).unwrap();
            assert!((a - b).norm() < 1e-11);
        }
        // regular at u = −u₀
        assert!(coefficient_a(&k, u0, -u0).unwrap().norm() < 1e3);
        assert!(matches!(
            coefficient_a(&k, u0, u0 + 1.0),
            Err(Error::Pole { at: Singularity::ConnectionPole(_), .. })
        ));
    }

    #[test]
    fn residues() {
        let k = ctx();
        let p = LinearFamilyPoint::new(&k, c(0.3, 0.25), ZERO).unwrap();
        for (center, expect) in [(ZERO, -1.0), (p.u0, 1.0)] {
            let loop_ = PathSpec::circle(center, 0.05, false);
            let (v, _) = integrate_path(&loop_, |u| coefficient_a(&k, p.u0, u)).unwrap();
            assert!((v / TWO_PI_I - expect).norm() < 1e-10, "{v}");
            let t = transport_linear(&k, &p, &loop_).unwrap();
            assert!((t.multiplier - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn contractible_loop_is_trivial() {
        let k = ctx();
        let p = LinearFamilyPoint::new(&k, c(0.3, 0.25), c(0.4, 0.1)).unwrap();
        let sq = PathSpec::polyline(
            vec![c(-0.2, 0.4), c(0.1, 0.4), c(0.1, 0.6), c(-0.2, 0.6), c(-0.2, 0.4)],
            vec![],
            0.01,
            DetourSide::Ccw,
        )
        .unwrap();
        assert!((transport_linear(&k, &p, &sq).unwrap().multiplier - 1.0).norm() < 1e-10);
    }

    #[test]
    fn base_and_side_independence() {
        let k = ctx();
        let p = LinearFamilyPoint::new(&k, c(0.2, 0.4), c(0.3, -0.2)).unwrap();
        let a = monodromy_numeric(&k, &p).unwrap();
        let b = monodromy_numeric_at(&k, &p, c(-0.35, -0.1), 0.04, DetourSide::Cw).unwrap();
        assert!((a.x / b.x - 1.0).norm() < 1e-9);
        assert!((a.y / b.y - 1.0).norm() < 1e-9);
        // segment straight through the pole u₀ from a base on its row
        let base = p.u0 - 0.5;
        for side in [DetourSide::Ccw, DetourSide::Cw] {
            let r = monodromy_numeric_at(&k, &p, base, 0.04, side).unwrap();
            assert!((r.x / a.x - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn closed_form_solution_properties() {
        let k = ctx();
        let p = LinearFamilyPoint::new(&k, c(0.27, 0.33), c(0.5, 0.2)).unwrap();
        let u = c(0.12, -0.2);
        let h = 1e-4;
        let z = |w| closed_form_solution(&k, &p, ONE, w).unwrap();
        let dz = (z(u + h) - z(u - h)) / (2.0 * h);
        let resid = dz / z(u) - (coefficient_a(&k, p.u0, u).unwrap() + p.c);
        assert!(resid.norm() < 1e-6);
        let two = closed_form_solution(&k, &p, c(2.0, 0.0), u).unwrap();
        assert!((two - 2.0 * z(u)).norm() < 1e-14 * two.norm());
        let ratio = z(u + 1.0) / z(u);
        let expect = (-p.u0 * k.eta1() + k.zeta(p.u0).unwrap() + p.c).exp();
        assert!((ratio / expect - 1.0).norm() < 1e-10);
    }

    #[test]
    fn euclidean_family() {
        let k = ctx();
        let g = c(0.4, -0.3);
        let (b1, bt) = euclidean_monodromy(&k, g);
        assert!((bt - k.tau() * b1 - TWO_PI_I).norm() < 1e-11);
        let n = euclidean_monodromy_numeric(&k, g, c(0.2, 0.3), 0.05).unwrap();
        assert!((n.b1 - b1).norm() < 1e-9 && (n.b_tau - bt).norm() < 1e-9);
        let (l1, _) = period_loops(k.lattice(), &[ZERO], c(0.2, 0.3), 0.05, DetourSide::Ccw).unwrap();
        let eq = euclidean_riccati(&k, g);
        let m = transport_riccati_map(&eq, &l1).unwrap();
        let [a, b, cc, d] = m.entries();
        assert!(cc.norm() < 1e-10 && (a / d - 1.0).norm() < 1e-10);
        assert!((b / d - b1).norm() < 1e-8);
    }

    #[test]
    fn riccati_linear_cases() {
        let beta = c(0.3, -0.7);
        let eq = move |_u: Complex64| Ok([ZERO, beta, ZERO]);
        let seg = PathSpec::polyline(vec![ZERO, c(0.5, 0.4)], vec![], 0.1, DetourSide::Ccw).unwrap();
        let y = transport_riccati(&eq, &seg, ProjPoint::Finite(c(2.0, 1.0))).unwrap();
        let expect = c(2.0, 1.0) * (-beta * c(0.5, 0.4)).exp();
        assert!((y.finite().unwrap() - expect).norm() < 1e-11);
        assert!(transport_riccati(&eq, &seg, ProjPoint::Infinity).unwrap().is_infinity());
        // y' = −y² moves ∞ to a finite point: y = 1/(u + 1/y₀)
        let sq = |_u: Complex64| Ok([ONE, ZERO, ZERO]);
        let y = transport_riccati(&sq, &seg, ProjPoint::Infinity).unwrap();
        assert!((y.finite().unwrap() - 1.0 / c(0.5, 0.4)).norm() < 1e-11);
        let _ = I;
    }

    #[test]
    fn riccati_reproduces_linear_transport() {
        let k = ctx();
        let p = LinearFamilyPoint::new(&k, c(0.2, 0.4), c(0.3, -0.2)).unwrap();
        let (l1, _) = period_loops(k.lattice(), &[ZERO, p.u0], c(-0.3, -0.2), 0.04, DetourSide::Ccw).unwrap();
        let lin = transport_linear(&k, &p, &l1).unwrap().multiplier;
        let eq = linear_family_riccati(&k, &p);
        for y0 in [c(1.0, 0.0), c(-0.3, 2.0)] {
            let y = transport_riccati(&eq, &l1, ProjPoint::Finite(y0)).unwrap().finite().unwrap();
            assert!((y / y0 / lin - 1.0).norm() < 1e-9);
        }
    }
}
