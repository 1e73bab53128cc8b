//! Quadrature and ODE integrators for complex-valued functions of a real
//! parameter.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Initial panels are at most this wide.
    pub max_panel: f64,
    pub max_panels: usize,
    /// Bisection below this width is reported as an integration failure.
    pub min_width: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-13, max_panel: 0.25, max_panels: 4000, min_width: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod panel: (K15 value, |K15 − G7|).
pub fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = half * XGK[j];
        let s = f(center - x)? + f(center + x)?;
        kronrod += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).norm()))
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`, refining the
/// panel with the largest error estimate first.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0 });
    }
    let n0 = (((b - a).abs() / opts.max_panel).ceil() as usize).max(1);
    let mut heap = BinaryHeap::with_capacity(2 * n0);
    for i in 0..n0 {
        let pa = a + (b - a) * i as f64 / n0 as f64;
        let pb = a + (b - a) * (i + 1) as f64 / n0 as f64;
        let (value, error) = gk15(&mut f, pa, pb)?;
        heap.push(Panel { a: pa, b: pb, value, error });
    }
    loop {
        let value: Complex64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.norm());
        if error <= target {
            return Ok(QuadResult { value, error, panels: heap.len() });
        }
        let worst = heap.pop().expect("non-empty panel set");
        if heap.len() + 2 > opts.max_panels || (worst.b - worst.a).abs() < opts.min_width {
            return Err(Error::Integration {
                piece: 0,
                t_start: worst.a,
                t_end: worst.b,
                reason: format!("quadrature error {error:e} above target {target:e}"),
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        for (pa, pb) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&mut f, pa, pb)?;
            heap.push(Panel { a: pa, b: pb, value, error });
        }
    }
}

/// Non-adaptive composite GK15 with `panels` equal panels.
pub fn integrate_fixed<F>(mut f: F, a: f64, b: f64, panels: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for i in 0..panels {
        let pa = a + (b - a) * i as f64 / panels as f64;
        let pb = a + (b - a) * (i + 1) as f64 / panels as f64;
        let (v, e) = gk15(&mut f, pa, pb)?;
        value += v;
        error += e;
    }
    Ok(QuadResult { value, error, panels })
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-13, h_init: 1e-2, h_min: 1e-12, max_steps: 200_000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OdeResult<const N: usize> {
    pub y: [Complex64; N],
    pub steps: usize,
    pub rejected: usize,
}

fn axpy<const N: usize>(y: &[Complex64; N], h: f64, terms: &[(f64, &[Complex64; N])]) -> [Complex64; N] {
    let mut out = *y;
    for (coef, k) in terms {
        if *coef == 0.0 {
            continue;
        }
        for i in 0..N {
            out[i] += k[i] * (h * coef);
        }
    }
    out
}

/// Dormand–Prince 5(4) on `y' = f(t, y)` from `t0` to `t1` (either direction).
/// `post_step` may renormalize the state after each accepted step.
pub fn dopri5<const N: usize, F, P>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: [Complex64; N],
    opts: &OdeOptions,
    mut post_step: P,
) -> Result<OdeResult<N>>
where
    F: FnMut(f64, &[Complex64; N]) -> Result<[Complex64; N]>,
    P: FnMut(&mut [Complex64; N]),
{
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A2: [f64; 1] = [0.2];
    const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
    const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
    const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
    const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
    const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
    const E: [f64; 7] =
        [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

    let span = t1 - t0;
    if span == 0.0 {
        return Ok(OdeResult { y: y0, steps: 0, rejected: 0 });
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.h_init.min(span.abs());
    let mut k1 = f(t, &y)?;
    let (mut steps, mut rejected) = (0usize, 0usize);
    while (t1 - t) * dir > 0.0 {
        if steps + rejected >= opts.max_steps {
            return Err(Error::Integration {
                piece: 0,
                t_start: t,
                t_end: t1,
                reason: format!("step budget {} exhausted", opts.max_steps),
            });
        }
        let remaining = (t1 - t).abs();
        let last = h >= remaining;
        let hs = if last { remaining } else { h } * dir;
        let k2 = f(t + C[1] * hs, &axpy(&y, hs, &[(A2[0], &k1)]))?;
        let k3 = f(t + C[2] * hs, &axpy(&y, hs, &[(A3[0], &k1), (A3[1], &k2)]))?;
        let k4 = f(t + C[3] * hs, &axpy(&y, hs, &[(A4[0], &k1), (A4[1], &k2), (A4[2], &k3)]))?;
        let k5 =
            f(t + C[4] * hs, &axpy(&y, hs, &[(A5[0], &k1), (A5[1], &k2), (A5[2], &k3), (A5[3], &k4)]))?;
        let k6 = f(
            t + C[5] * hs,
            &axpy(&y, hs, &[(A6[0], &k1), (A6[1], &k2), (A6[2], &k3), (A6[3], &k4), (A6[4], &k5)]),
        )?;
        let y_new = axpy(&y, hs, &[(B[0], &k1), (B[2], &k3), (B[3], &k4), (B[4], &k5), (B[5], &k6)]);
        let k7 = f(t + hs, &y_new)?;
        let mut err = 0.0;
        for i in 0..N {
            let e = (k1[i] * E[0] + k3[i] * E[2] + k4[i] * E[3] + k5[i] * E[4] + k6[i] * E[5] + k7[i] * E[6])
                * hs;
            let scale = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
            err += (e.norm() / scale).powi(2);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::Integration {
                piece: 0,
                t_start: t,
                t_end: t + hs,
                reason: "non-finite state".into(),
            });
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if err <= 1.0 {
            t = if last { t1 } else { t + hs };
            y = y_new;
            post_step(&mut y);
            k1 = f(t, &y)?;
            steps += 1;
            h = (hs.abs() * fac).max(opts.h_min);
        } else {
            rejected += 1;
            h = hs.abs() * fac.min(1.0);
            if h < opts.h_min {
                return Err(Error::Integration {
                    piece: 0,
                    t_start: t,
                    t_end: t + h * dir,
                    reason: format!("step size underflow (h = {h:e})"),
                });
            }
        }
    }
    Ok(OdeResult { y, steps, rejected })
}

/// Classical fixed-step RK4.
pub fn rk4<const N: usize, F>(mut f: F, t0: f64, t1: f64, y0: [Complex64; N], steps: usize) -> Result<[Complex64; N]>
where
    F: FnMut(f64, &[Complex64; N]) -> Result<[Complex64; N]>,
{
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    for s in 0..steps {
        let t = t0 + h * s as f64;
        let k1 = f(t, &y)?;
        let k2 = f(t + 0.5 * h, &axpy(&y, h, &[(0.5, &k1)]))?;
        let k3 = f(t + 0.5 * h, &axpy(&y, h, &[(0.5, &k2)]))?;
        let k4 = f(t + h, &axpy(&y, h, &[(1.0, &k3)]))?;
        y = axpy(&y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]);
    }
    Ok(y)
}
