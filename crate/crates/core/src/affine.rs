//! The versal family f_c(u) = (e^{cu} − 1)/c of affine structures on
//! ℂ/(ℤ + τℤ), its monodromy, Schwarzian derivatives and the scalar
//! equation z″ + (φ/2) z = 0.

use crate::complex::{expm1, ONE, ZERO};
use crate::error::{Error, Result, Singularity};
use crate::mobius::{b1_from_affine_pair, AffinePair, B1Point};
use crate::numerics::{dopri5, rk4, OdeOptions};
use num_complex::Complex64;

/// Below this |c·u| the developing map is summed as a power series.
pub const SERIES_THRESHOLD: f64 = 1e-4;
const SERIES_ORDER: usize = 8;

/// Default finite-difference step for Schwarzian derivatives.
pub const DEFAULT_STEP: f64 = 1e-2;

/// |f′| below this is treated as a critical point.
pub const CRITICAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineStructure {
    pub tau: Complex64,
    pub c: Complex64,
}

impl AffineStructure {
    pub fn new(tau: Complex64, c: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::Domain(format!("Im tau must be positive (got {tau})")));
        }
        Ok(Self { tau, c })
    }

    /// Constant φ of the quadratic differential φ du² with S(f_c) = φ.
    pub fn quadratic_differential(&self) -> Complex64 {
        -self.c * self.c / 2.0
    }

    pub fn developing_map(&self, u: Complex64) -> Complex64 {
        developing_map(self.c, u)
    }
}

/// F(c, u) = (e^{cu} − 1)/c, with F(0, u) = u.
pub fn developing_map(c: Complex64, u: Complex64) -> Complex64 {
    let x = c * u;
    if x.norm() < SERIES_THRESHOLD {
        // u Σ_{k<8} (cu)^k / (k+1)!
        let mut term = u;
        let mut sum = u;
        for k in 1..SERIES_ORDER {
            term *= x / (k as f64 + 1.0);
            sum += term;
        }
        sum
    } else {
        expm1(x) / c
    }
}

/// Generators 1, τ act by u ↦ e^{cγ} u + F(c, γ).
pub fn affine_monodromy(s: &AffineStructure) -> AffinePair {
    let a1 = (s.c).exp();
    let a_tau = (s.c * s.tau).exp();
    AffinePair::new(a1, developing_map(s.c, ONE), a_tau, developing_map(s.c, s.tau))
        .expect("exponentials are nonzero")
}

/// (e^c, e^{cτ}, [F(c,1) : F(c,τ)]).
pub fn monodromy_to_b1(s: &AffineStructure) -> Result<B1Point> {
    b1_from_affine_pair(&affine_monodromy(s))
}

/// Structures (τ, 2πi(mτ′+n)/(τ′−τ)) and (τ′, 2πi(mτ+n)/(τ′−τ)) with the same
/// image in B₁.
pub fn noninjective_pair(
    tau: Complex64,
    tau2: Complex64,
    m: i64,
    n: i64,
) -> Result<(AffineStructure, AffineStructure)> {
    if m == 0 && n == 0 {
        return Err(Error::Precondition("(m, n) must be nonzero".into()));
    }
    if tau == tau2 {
        return Err(Error::Precondition("tau and tau' must differ".into()));
    }
    let k = crate::complex::TWO_PI_I / (tau2 - tau);
    let c1 = k * (tau2 * m as f64 + n as f64);
    let c2 = k * (tau * m as f64 + n as f64);
    Ok((AffineStructure::new(tau, c1)?, AffineStructure::new(tau2, c2)?))
}

/// First three derivatives of `f` at `u` by central differences of order 4,
/// Richardson-combined over steps `h` and `h/2`.
pub fn derivatives(f: &dyn Fn(Complex64) -> Complex64, u: Complex64, h: f64) -> Result<[Complex64; 3]> {
    let once = |h: f64| -> Result<[Complex64; 3]> {
        let mut s = [ZERO; 7];
        for (i, slot) in s.iter_mut().enumerate() {
            let v = f(u + (i as f64 - 3.0) * h);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Stencil(format!("non-finite value at u + {}h", i as i32 - 3)));
            }
            *slot = v;
        }
        let [m3, m2, m1, z0, p1, p2, p3] = s;
        let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        let d2 = (-m2 + 16.0 * m1 - 30.0 * z0 + 16.0 * p1 - p2) / (12.0 * h * h);
        let d3 = (-p3 + 8.0 * p2 - 13.0 * p1 + 13.0 * m1 - 8.0 * m2 + m3) / (8.0 * h * h * h);
        Ok([d1, d2, d3])
    };
    let coarse = once(h)?;
    let fine = once(h / 2.0)?;
    let mut out = [ZERO; 3];
    for i in 0..3 {
        out[i] = (16.0 * fine[i] - coarse[i]) / 15.0;
    }
    Ok(out)
}

/// S(f) = f‴/f′ − (3/2)(f″/f′)² at `u`.
pub fn schwarzian_numeric(f: &dyn Fn(Complex64) -> Complex64, u: Complex64, h: f64) -> Result<Complex64> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(Error::Domain(format!("step {h:e} outside [1e-6, 1e-2]")));
    }
    let [d1, d2, d3] = derivatives(f, u, h)?;
    if d1.norm() < CRITICAL_TOLERANCE {
        return Err(Error::CriticalPoint { derivative: d1.norm() });
    }
    let r = d2 / d1;
    Ok(d3 / d1 - 1.5 * r * r)
}

/// S(f∘g)(u) − [S(f)(g(u)) g′(u)² + S(g)(u)].
pub fn schwarzian_composition_residual(
    f: &dyn Fn(Complex64) -> Complex64,
    g: &dyn Fn(Complex64) -> Complex64,
    u: Complex64,
    h: f64,
) -> Result<Complex64> {
    let fg = |z: Complex64| f(g(z));
    let lhs = schwarzian_numeric(&fg, u, h)?;
    let sg = schwarzian_numeric(g, u, h)?;
    let [g1, _, _] = derivatives(g, u, h)?;
    let sf = schwarzian_numeric(f, g(u), h)?;
    Ok(lhs - (sf * g1 * g1 + sg))
}

const RATIO_STEPS: usize = 2000;

/// z₁/z₂ at `v` for solutions of z″ + (φ/2) z = 0 with (z₁, z₁′)(0) = (0, 1)
/// and (z₂, z₂′)(0) = (1, 0), integrated along the segment [0, v].
pub fn ratio_of_linear_solutions(phi: Complex64, v: Complex64) -> Result<Complex64> {
    let half = phi / 2.0;
    let y = rk4(
        |_, y: &[Complex64; 4]| Ok([v * y[1], -v * half * y[0], v * y[3], -v * half * y[2]]),
        0.0,
        1.0,
        [ZERO, ONE, ONE, ZERO],
        RATIO_STEPS,
    )?;
    if y[2].norm() < 1e-12 * y[0].norm().max(1.0) {
        return Err(Error::Pole { at: Singularity::DevelopingMap(v), distance: y[2].norm() });
    }
    Ok(y[0] / y[2])
}

/// Affine map fitted to a continued germ: f(u + γ) ≈ a f(u) + b.
#[derive(Debug, Clone, Copy)]
pub struct ContinuationFit {
    pub a: Complex64,
    pub b: Complex64,
    /// Least-squares residual of the 3-point fit.
    pub residual: f64,
}

/// Continues the solution (f, f′) of f″ = c f′ from `start` to `end` in
/// `segments` straight pieces.
fn continue_germ(c: Complex64, start: Complex64, end: Complex64, germ: [Complex64; 2], segments: usize) -> Result<[Complex64; 2]> {
    let opts = OdeOptions { rtol: 1e-13, atol: 1e-15, ..Default::default() };
    let mut y = germ;
    for s in 0..segments {
        let a = start + (end - start) * (s as f64 / segments as f64);
        let b = start + (end - start) * ((s + 1) as f64 / segments as f64);
        let d = b - a;
        y = dopri5(|_, y: &[Complex64; 2]| Ok([d * y[1], d * c * y[1]]), 0.0, 1.0, y, &opts, |_| {})
            .map_err(|e| match e {
                Error::Integration { t_start, t_end, reason, .. } => Error::Integration {
                    piece: s,
                    t_start,
                    t_end,
                    reason,
                },
                other => other,
            })?
            .y;
    }
    Ok(y)
}

/// Analytic continuation of f_c along u ↦ u + γ from three base points,
/// followed by a least-squares fit of the affine map relating the germs.
pub fn continuation_fit(s: &AffineStructure, base: Complex64, gamma: Complex64) -> Result<ContinuationFit> {
    const SEGMENTS: usize = 32;
    let offsets = [ZERO, Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.1)];
    let mut before = [ZERO; 3];
    let mut after = [ZERO; 3];
    for (j, off) in offsets.iter().enumerate() {
        let u = base + off;
        let germ = [developing_map(s.c, u), (s.c * u).exp()];
        let end = continue_germ(s.c, u, u + gamma, germ, SEGMENTS)?;
        before[j] = germ[0];
        after[j] = end[0];
    }
    // normal equations for after ≈ a·before + b
    let n = 3.0;
    let sx: Complex64 = before.iter().sum();
    let sy: Complex64 = after.iter().sum();
    let sxx: f64 = before.iter().map(|x| x.norm_sqr()).sum();
    let sxy: Complex64 = before.iter().zip(&after).map(|(x, y)| x.conj() * y).sum();
    let det = n * sxx - sx.norm_sqr();
    if det.abs() < 1e-300 {
        return Err(Error::Degenerate { det });
    }
    let a = (n * sxy - sx.conj() * sy) / det;
    let b = (sy - a * sx) / n;
    let residual = before.iter().zip(&after).map(|(x, y)| (y - a * x - b).norm_sqr()).sum::<f64>().sqrt();
    Ok(ContinuationFit { a, b, residual })
}

/// Continuation fits along both generators.
pub fn continuation_monodromy(s: &AffineStructure, base: Complex64) -> Result<(ContinuationFit, ContinuationFit)> {
    Ok((continuation_fit(s, base, ONE)?, continuation_fit(s, base, s.tau)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{c, I, TWO_PI_I};
    use std::f64::consts::{E, PI};

    #[test]
    fn developing_map_values() {
        let u = c(0.3, 0.1);
        assert_eq!(developing_map(ZERO, u), u);
        assert_eq!(developing_map(ONE, ZERO), ZERO);
        let eps = c(1e-8, 0.0);
        assert!((developing_map(eps, u) - u - u * u / 2.0 * eps).norm() < 1e-15);
    }

    #[test]
    fn developing_map_smooth_across_threshold() {
        let u = c(0.7, -0.2);
        for t in [0.99, 1.0, 1.01] {
            let cc = c(t * SERIES_THRESHOLD / u.norm(), 0.0);
            let direct = ((cc * u).exp() - 1.0) / cc;
            assert!((developing_map(cc, u) - direct).norm() < 1e-11);
        }
    }

    #[test]
    fn monodromy_examples() {
        let p = affine_monodromy(&AffineStructure::new(I, ZERO).unwrap());
        assert_eq!((p.a1, p.b1, p.a_tau, p.b_tau), (ONE, ONE, ONE, I));
        let q = affine_monodromy(&AffineStructure::new(I, TWO_PI_I).unwrap());
        assert!((q.a1 - 1.0).norm() < 1e-14 && q.b1.norm() < 1e-15);
        let r = affine_monodromy(&AffineStructure::new(c(0.3, 0.8), c(0.4, -1.1)).unwrap());
        assert!(r.commutation_residual().norm() < 1e-12);
    }

    #[test]
    fn b1_examples() {
        let tau = c(0.2, 1.3);
        let p = monodromy_to_b1(&AffineStructure::new(tau, ZERO).unwrap()).unwrap();
        let expect = B1Point::new(ONE, ONE, ONE, tau).unwrap();
        assert!(p.distance(&expect) < 1e-15);
        let q = monodromy_to_b1(&AffineStructure::new(I, ONE).unwrap()).unwrap();
        let ei = I.exp();
        let expect = B1Point::new(c(E, 0.0), ei, c(E - 1.0, 0.0), ei - 1.0).unwrap();
        assert!(q.distance(&expect) < 1e-14);
        let z = monodromy_to_b1(&AffineStructure::new(I, TWO_PI_I).unwrap()).unwrap();
        assert!(z.bdir[0].norm() < 1e-14 && (z.bdir[1] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn noninjective_example() {
        let (s1, s2) = noninjective_pair(I, c(0.0, 2.0), 0, 1).unwrap();
        assert!((s1.c - 2.0 * PI).norm() < 1e-14 && (s2.c - 2.0 * PI).norm() < 1e-14);
        let d = monodromy_to_b1(&s1).unwrap().distance(&monodromy_to_b1(&s2).unwrap());
        assert!(d < 1e-10, "{d}");
        assert!(matches!(noninjective_pair(I, c(0.0, 2.0), 0, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn schwarzian_examples() {
        let mob = |z: Complex64| (c(2.0, 1.0) * z + 1.0) / (c(0.5, 0.0) * z + c(3.0, -1.0));
        assert!(schwarzian_numeric(&mob, c(0.3, 0.2), DEFAULT_STEP).unwrap().norm() < 1e-8);
        let cc = c(0.7, -0.4);
        let fc = |u| developing_map(cc, u);
        let s = schwarzian_numeric(&fc, c(0.1, 0.5), DEFAULT_STEP).unwrap();
        assert!((s + cc * cc / 2.0).norm() < 1e-6);
        let lam = c(0.6, 0.3);
        let ex = |v: Complex64| (2.0 * lam * v).exp();
        assert!((schwarzian_numeric(&ex, c(0.2, 0.1), DEFAULT_STEP).unwrap() + 2.0 * lam * lam).norm() < 1e-6);
        let square = |z: Complex64| z * z;
        assert!(matches!(schwarzian_numeric(&square, ZERO, 1e-3), Err(Error::CriticalPoint { .. })));
        assert!(schwarzian_numeric(&square, ONE, 0.5).is_err());
    }

    #[test]
    fn composition_rule() {
        let ex = |z: Complex64| z.exp();
        assert!(schwarzian_composition_residual(&ex, &ex, c(0.2, 0.1), DEFAULT_STEP).unwrap().norm() < 1e-5);
        let mob = |z: Complex64| 1.0 / (z + 3.0);
        let g = |z: Complex64| z * z * z + z;
        let r = schwarzian_composition_residual(&mob, &g, c(0.4, 0.3), DEFAULT_STEP).unwrap();
        assert!(r.norm() < 1e-5);
    }

    #[test]
    fn scalar_equation_ratio() {
        let v = c(0.4, 0.2);
        assert!((ratio_of_linear_solutions(ZERO, v).unwrap() - v).norm() < 1e-12);
        let lam = c(0.8, 0.0);
        let f = ratio_of_linear_solutions(-2.0 * lam * lam, v).unwrap();
        assert!((f - (lam * v).tanh() / lam).norm() < 1e-12);
        let phi = c(1.5, -0.7);
        let g = |w| ratio_of_linear_solutions(phi, w).unwrap();
        assert!((schwarzian_numeric(&g, v, DEFAULT_STEP).unwrap() - phi).norm() < 1e-5);
        // z₂ = cos(v) for φ = 2 vanishes at π/2
        assert!(matches!(
            ratio_of_linear_solutions(c(2.0, 0.0), c(PI / 2.0, 0.0)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn continuation_reproduces_monodromy() {
        let s = AffineStructure::new(c(0.3, 1.1), c(0.9, -0.6)).unwrap();
        let (f1, ft) = continuation_monodromy(&s, c(0.1, 0.05)).unwrap();
        let p = affine_monodromy(&s);
        assert!((f1.a - p.a1).norm() < 1e-9 && (f1.b - p.b1).norm() < 1e-9);
        assert!((ft.a - p.a_tau).norm() < 1e-9 && (ft.b - p.b_tau).norm() < 1e-9);
        assert!(f1.residual < 1e-9);
    }
}
