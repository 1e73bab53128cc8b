//! Small complex-number helpers shared across modules.

use num_complex::Complex64;
use std::f64::consts::PI;

pub type ComplexValue = Complex64;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// 2πi
pub const TWO_PI_I: Complex64 = Complex64 { re: 0.0, im: 2.0 * PI };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A point of the projective line; infinity is a marker, never a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjPoint {
    Finite(Complex64),
    Infinity,
}

impl ProjPoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            ProjPoint::Finite(z) => Some(z),
            ProjPoint::Infinity => None,
        }
    }

    pub fn is_infinity(self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    /// Chordal distance on the Riemann sphere, in [0, 1].
    pub fn chordal_distance(self, other: ProjPoint) -> f64 {
        match (self, other) {
            (ProjPoint::Infinity, ProjPoint::Infinity) => 0.0,
            (ProjPoint::Finite(z), ProjPoint::Infinity) | (ProjPoint::Infinity, ProjPoint::Finite(z)) => {
                1.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (ProjPoint::Finite(z), ProjPoint::Finite(w)) => {
                (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }
}

impl From<Complex64> for ProjPoint {
    fn from(z: Complex64) -> Self {
        ProjPoint::Finite(z)
    }
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let half = (0.5 * y).sin();
    // e^x cos y - 1 = expm1(x) cos y - 2 sin²(y/2)
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin())
}

/// Relative distance `|a - b| / max(1, |a|, |b|)`.
pub fn rel_dist(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// Shift `z` by a multiple of 2πi so that it lies closest to `reference`.
pub fn nearest_branch(z: Complex64, reference: Complex64) -> Complex64 {
    let k = ((reference.im - z.im) / (2.0 * PI)).round();
    z + TWO_PI_I * k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm1_small_and_large() {
        let z = c(1e-12, -2e-12);
        assert!((expm1(z) - (z + z * z / 2.0)).norm() < 1e-26);
        let w = c(0.7, 2.1);
        assert!((expm1(w) - (w.exp() - 1.0)).norm() < 1e-14);
    }

    #[test]
    fn chordal_distance_infinity() {
        assert_eq!(ProjPoint::Infinity.chordal_distance(ProjPoint::Infinity), 0.0);
        assert!((ProjPoint::Finite(ZERO).chordal_distance(ProjPoint::Infinity) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn branch_shift() {
        let z = c(0.3, 0.1);
        let r = c(0.0, 4.0 * PI + 0.2);
        let s = nearest_branch(z, r);
        assert!((s - c(0.3, 0.1 + 4.0 * PI)).norm() < 1e-14);
    }
}
