//! Weierstrass data checked against computations that do not use the
//! q-expansions: lattice sums, Laurent series and contour integrals.

use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;
use torus_structures::WeierstrassContext;

const TAUS: [(f64, f64); 4] = [(0.0, 1.0), (0.5, 1.0), (0.5, 0.866_025_403_784_438_6), (-0.3, 1.7)];

fn tau(t: (f64, f64)) -> C {
    C::new(t.0, t.1)
}

/// Σ' λ^{-k} over the box max(|m|, |n|) ≤ n_max.
fn box_sum(tau: C, k: i32, n_max: i64) -> C {
    let mut s = C::new(0.0, 0.0);
    for m in -n_max..=n_max {
        for n in -n_max..=n_max {
            if m != 0 || n != 0 {
                s += (m as f64 + tau * n as f64).powi(-k);
            }
        }
    }
    s
}

/// Eisenstein sum G_k. For k = 4, 6 each row n is summed in closed form
/// (Σ_m (z+m)^{-4} = π⁴(s² − 2s/3), Σ_m (z+m)^{-6} = π⁶(s³ − s² + 2s/15),
/// s = csc²(πz)), so the row sums decay geometrically in n. Higher k use box sums.
fn eisenstein(tau: C, k: i32) -> C {
    let row = |z: C| {
        let s = (z * PI).sin().powi(-2);
        match k {
            4 => (s * s - s * (2.0 / 3.0)) * PI.powi(4),
            _ => (s * s * s - s * s + s * (2.0 / 15.0)) * PI.powi(6),
        }
    };
    match k {
        4 | 6 => {
            let zeta_k = if k == 4 { PI.powi(4) / 90.0 } else { PI.powi(6) / 945.0 };
            let mut g = C::new(2.0 * zeta_k, 0.0);
            for n in 1..=60 {
                g += row(tau * n as f64) + row(-tau * n as f64);
            }
            g
        }
        _ => box_sum(tau, k, 40),
    }
}

#[test]
fn invariants_match_lattice_sums() {
    for t in TAUS {
        let ctx = WeierstrassContext::new(tau(t), 1e-13).unwrap();
        let g2 = eisenstein(tau(t), 4) * 60.0;
        let g3 = eisenstein(tau(t), 6) * 140.0;
        assert!((ctx.g2() - g2).norm() <= 1e-11 * g2.norm().max(1.0), "g2 {t:?}: {} vs {}", ctx.g2(), g2);
        assert!((ctx.g3() - g3).norm() <= 1e-11 * g2.norm().max(1.0), "g3 {t:?}: {} vs {}", ctx.g3(), g3);
    }
}

#[test]
fn symmetric_lattices_have_vanishing_invariant() {
    let square = WeierstrassContext::new(C::new(0.0, 1.0), 1e-12).unwrap();
    assert!(square.g3().norm() <= 1e-12);
    assert!(eisenstein(C::new(0.0, 1.0), 6).norm() < 1e-9);
    let hex = WeierstrassContext::new(C::new(0.5, 3f64.sqrt() / 2.0), 1e-12).unwrap();
    assert!(hex.g2().norm() <= 1e-12 * 1e2, "g2 = {}", hex.g2());
    assert!(eisenstein(C::new(0.5, 3f64.sqrt() / 2.0), 4).norm() < 1e-8);
}

/// ℘(u) = u⁻² + Σ_{k≥1} (2k+1) G_{2k+2} u^{2k}, with G from lattice sums.
fn wp_laurent(tau: C, u: C, terms: i32) -> C {
    let mut s = u.powi(-2);
    for k in 1..=terms {
        s += eisenstein(tau, 2 * k + 2) * (2 * k + 1) as f64 * u.powi(2 * k);
    }
    s
}

#[test]
fn wp_matches_laurent_series_from_lattice_sums() {
    for t in TAUS {
        let ctx = WeierstrassContext::new(tau(t), 1e-13).unwrap();
        for u in [C::new(0.05, 0.02), C::new(-0.1, 0.07), C::new(0.12, -0.15)] {
            let oracle = wp_laurent(tau(t), u, 12);
            let got = ctx.wp(u).unwrap();
            assert!((got - oracle).norm() <= 1e-8 * oracle.norm(), "{t:?} u={u}: {got} vs {oracle}");
        }
    }
}

#[test]
fn wp_laurent_leading_coefficients() {
    // ℘ = u⁻² + g₂u²/20 + g₃u⁴/28 + O(u⁶)
    let ctx = WeierstrassContext::new(C::new(0.2, 1.1), 1e-13).unwrap();
    let u = C::new(0.01, 0.004);
    let approx = u.powi(-2) + ctx.g2() * u * u / 20.0 + ctx.g3() * u.powi(4) / 28.0;
    let err = (ctx.wp(u).unwrap() - approx).norm();
    assert!(err <= ctx.g2().norm().powi(2) / 1200.0 * u.norm().powi(6) * 2.0 + 1e-9, "err {err}");
}

/// Gauss–Legendre 20-point rule on each of `panels` subintervals of [0, 1].
fn gauss_line(f: impl Fn(f64) -> C, panels: usize) -> C {
    // nodes/weights for n = 20 on [-1, 1] computed by Newton on P_n
    let n = 20;
    let mut nodes = Vec::new();
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    let h = 1.0 / panels as f64;
    let mut s = C::new(0.0, 0.0);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for &(x, w) in &nodes {
            s += f(mid + 0.5 * h * x) * (w * 0.5 * h);
        }
    }
    s
}

#[test]
fn contour_integral_of_zeta_gives_legendre_relation() {
    for t in TAUS {
        let tau = tau(t);
        let ctx = WeierstrassContext::new(tau, 1e-13).unwrap();
        // parallelogram with corner a containing only the pole at 0
        let a = -(C::new(1.0, 0.0) + tau) * 0.5 + C::new(0.031, 0.017);
        let corners = [a, a + 1.0, a + 1.0 + tau, a + tau];
        let mut total = C::new(0.0, 0.0);
        for k in 0..4 {
            let (p, q) = (corners[k], corners[(k + 1) % 4]);
            total += gauss_line(|s| ctx.zeta(p + (q - p) * s).unwrap() * (q - p), 8);
        }
        let two_pi_i = C::new(0.0, 2.0 * PI);
        assert!((total - two_pi_i).norm() < 1e-11, "{t:?}: {total}");
        assert!((ctx.eta1() * tau - ctx.eta_tau() - total).norm() < 1e-11);
        assert!(ctx.legendre_residual().norm() <= 1e-13);
    }
}

#[test]
fn eta_from_zeta_increments() {
    let ctx = WeierstrassContext::new(C::new(0.5, 1.0), 1e-13).unwrap();
    for u in [C::new(0.2, 0.3), C::new(-0.4, 0.1)] {
        let d1 = ctx.zeta(u + 1.0).unwrap() - ctx.zeta(u).unwrap();
        let dt = ctx.zeta(u + ctx.tau()).unwrap() - ctx.zeta(u).unwrap();
        assert!((d1 - ctx.eta1()).norm() < 1e-12);
        assert!((dt - ctx.eta_tau()).norm() < 1e-12);
    }
}

#[test]
fn sigma_quasi_periodicity() {
    for t in TAUS {
        let ctx = WeierstrassContext::new(tau(t), 1e-13).unwrap();
        for u in [C::new(0.21, 0.13), C::new(-0.3, 0.4)] {
            let ratio = ctx.sigma(u + 1.0) / ctx.sigma(u);
            let expect = -(ctx.eta1() * (u + 0.5)).exp();
            assert!((ratio / expect - 1.0).norm() < 1e-11, "{t:?}: {ratio} vs {expect}");
        }
    }
}

#[test]
fn sigma_is_odd_with_unit_derivative() {
    let ctx = WeierstrassContext::new(C::new(0.1, 0.9), 1e-13).unwrap();
    let u = C::new(1e-4, 2e-4);
    assert!((ctx.sigma(u) / u - 1.0).norm() < 1e-7);
    let v = C::new(0.33, -0.21);
    assert!((ctx.sigma(-v) + ctx.sigma(v)).norm() < 1e-13);
}

#[test]
fn zeta_identity_at_half_period_and_near_minus_u0() {
    let ctx = WeierstrassContext::new(C::new(0.0, 1.0), 1e-13).unwrap();
    let w = C::new(0.5, 0.0);
    assert!(ctx.wp_prime(w).unwrap().norm() < 1e-10);
    let r = ctx.zeta_identity_residual(C::new(0.2, 0.3), w).unwrap();
    assert!(r.norm() <= 1e-9);
    // the quotient stays finite approaching u = −u₀
    let u0 = C::new(0.3, 0.2);
    for eps in [1e-2, 5e-3] {
        let r = ctx.zeta_identity_residual(-u0 + eps, u0).unwrap();
        assert!(r.norm() <= 1e-8, "eps {eps}: {r}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn differential_equation_holds(s in 0.05f64..0.95, t in 0.05f64..0.95, ti in 0usize..4) {
        let tau = tau(TAUS[ti]);
        let ctx = WeierstrassContext::new(tau, 1e-13).unwrap();
        let u = s + tau * t;
        prop_assume!(ctx.lattice().distance_to_lattice(u) > 0.2);
        let r = ctx.differential_equation_residual(u).unwrap();
        prop_assert!(r.norm() <= 1e-9, "residual {}", r);
    }

    #[test]
    fn wp_even_and_periodic(s in -2.0f64..2.0, t in -2.0f64..2.0, m in -3i64..3, n in -3i64..3) {
        let tau = C::new(0.3, 1.2);
        let ctx = WeierstrassContext::new(tau, 1e-13).unwrap();
        let u = s + tau * t;
        prop_assume!(ctx.lattice().distance_to_lattice(u) > 0.1);
        let a = ctx.wp(u).unwrap();
        let b = ctx.wp(u + ctx.lattice().point(m, n)).unwrap();
        let c = ctx.wp(-u).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
        prop_assert!((a - c).norm() <= 1e-9 * a.norm().max(1.0));
    }

    #[test]
    fn zeta_derivative_is_minus_wp(s in 0.1f64..0.9, t in 0.1f64..0.9) {
        let tau = C::new(-0.2, 0.8);
        let ctx = WeierstrassContext::new(tau, 1e-13).unwrap();
        let u = s + tau * t;
        prop_assume!(ctx.lattice().distance_to_lattice(u) > 0.15);
        let h = 1e-4;
        let d = (ctx.zeta(u + h).unwrap() * 8.0 - ctx.zeta(u - h).unwrap() * 8.0
            - ctx.zeta(u + 2.0 * h).unwrap() + ctx.zeta(u - 2.0 * h).unwrap()) / (12.0 * h);
        prop_assert!((d + ctx.wp(u).unwrap()).norm() <= 1e-7 * ctx.wp(u).unwrap().norm().max(1.0));
    }
}
