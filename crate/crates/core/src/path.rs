//! Piecewise paths in the u-plane that keep a fixed clearance from a set of
//! poles, with circular detours around poles close to a straight segment.

use crate::error::{Error, Result};
use crate::weierstrass::Lattice;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Which side of the path a bypassed pole ends up on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetourSide {
    /// Pole on the left: the detour turns counterclockwise around it.
    #[default]
    Ccw,
    /// Pole on the right.
    Cw,
}

impl DetourSide {
    pub fn flipped(self) -> Self {
        match self {
            DetourSide::Ccw => DetourSide::Cw,
            DetourSide::Cw => DetourSide::Ccw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Line { from: Complex64, to: Complex64 },
    /// `center + radius·e^{i(start + t·sweep)}`, t ∈ [0, 1]; positive sweep is counterclockwise.
    Arc { center: Complex64, radius: f64, start: f64, sweep: f64 },
}

impl Piece {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Line { from, to } => from + (to - from) * t,
            Piece::Arc { center, radius, start, sweep } => center + Complex64::from_polar(radius, start + t * sweep),
        }
    }

    /// du/dt
    pub fn velocity(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Line { from, to } => to - from,
            Piece::Arc { radius, start, sweep, .. } => {
                Complex64::new(0.0, sweep) * Complex64::from_polar(radius, start + t * sweep)
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        match *self {
            Piece::Line { to, .. } => to,
            _ => self.point(1.0),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Piece::Line { from, to } => (to - from).norm(),
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Euclidean distance from `z` to the piece.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        match *self {
            Piece::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (z - from).norm();
                }
                let t = (((z - from) * d.conj()).re / len2).clamp(0.0, 1.0);
                (z - (from + d * t)).norm()
            }
            Piece::Arc { center, radius, start, sweep } => {
                let w = z - center;
                let ends = (z - self.start()).norm().min((z - self.end()).norm());
                if w.norm() == 0.0 {
                    return radius;
                }
                // is arg(w) inside the swept range?
                let rel = if sweep >= 0.0 { (w.arg() - start).rem_euclid(TAU) } else { (start - w.arg()).rem_euclid(TAU) };
                if rel <= sweep.abs() {
                    (w.norm() - radius).abs()
                } else {
                    ends
                }
            }
        }
    }
}

/// A path assembled from lines and arcs, with the poles it was built to avoid.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pub vertices: Vec<Complex64>,
    pub poles: Vec<Complex64>,
    pub clearance: f64,
    pieces: Vec<Piece>,
}

impl PathSpec {
    /// Polyline through `vertices`, detouring around every pole within
    /// `clearance` of a segment by an arc of radius `clearance`.
    pub fn polyline(vertices: Vec<Complex64>, poles: Vec<Complex64>, clearance: f64, side: DetourSide) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Geometry("a path needs at least two vertices".into()));
        }
        if !(clearance > 0.0) {
            return Err(Error::Geometry(format!("clearance must be positive (got {clearance})")));
        }
        let mut pieces = Vec::new();
        for w in vertices.windows(2) {
            segment_pieces(w[0], w[1], &poles, clearance, side, &mut pieces)?;
        }
        let path = Self { vertices, poles, clearance, pieces };
        let d = path.min_pole_distance();
        if d < clearance * (1.0 - 1e-9) {
            return Err(Error::Geometry(format!("no admissible path: pole at distance {d:e} < clearance {clearance:e}")));
        }
        Ok(path)
    }

    /// Full counterclockwise circle (clockwise if `clockwise`) starting at `center + radius`.
    pub fn circle(center: Complex64, radius: f64, clockwise: bool) -> Self {
        let sweep = if clockwise { -TAU } else { TAU };
        let start = center + radius;
        Self {
            vertices: vec![start, start],
            poles: vec![],
            clearance: 0.0,
            pieces: vec![Piece::Arc { center, radius, start: 0.0, sweep }],
        }
    }

    pub fn from_pieces(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Geometry("empty path".into()));
        }
        for w in pieces.windows(2) {
            if (w[0].end() - w[1].start()).norm() > 1e-12 * (1.0 + w[0].end().norm()) {
                return Err(Error::Geometry("pieces are not contiguous".into()));
            }
        }
        let vertices = vec![pieces[0].start(), pieces[pieces.len() - 1].end()];
        Ok(Self { vertices, poles: vec![], clearance: 0.0, pieces })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn start(&self) -> Complex64 {
        self.pieces[0].start()
    }

    pub fn end(&self) -> Complex64 {
        self.pieces[self.pieces.len() - 1].end()
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }

    pub fn detour_count(&self) -> usize {
        self.pieces.iter().filter(|p| matches!(p, Piece::Arc { .. })).count()
    }

    pub fn min_pole_distance(&self) -> f64 {
        self.poles
            .iter()
            .flat_map(|&p| self.pieces.iter().map(move |piece| piece.distance_to(p)))
            .fold(f64::INFINITY, f64::min)
    }
}

fn segment_pieces(
    a: Complex64,
    b: Complex64,
    poles: &[Complex64],
    clearance: f64,
    side: DetourSide,
    out: &mut Vec<Piece>,
) -> Result<()> {
    let len = (b - a).norm();
    if len == 0.0 {
        return Ok(());
    }
    let dir = (b - a) / len;
    // (entry s, exit s, pole)
    let mut hits: Vec<(f64, f64, Complex64)> = Vec::new();
    for &p in poles {
        if (p - a).norm() < clearance || (p - b).norm() < clearance {
            return Err(Error::Geometry(format!("segment endpoint within clearance of pole {p}")));
        }
        let local = (p - a) * dir.conj();
        let (s, h) = (local.re, local.im);
        if h.abs() < clearance && s > 0.0 && s < len {
            let half = (clearance * clearance - h * h).sqrt();
            hits.push((s - half, s + half, p));
        }
    }
    hits.sort_by(|x, y| x.0.total_cmp(&y.0));
    for w in hits.windows(2) {
        if w[1].0 <= w[0].1 {
            return Err(Error::Geometry(format!(
                "clearance disks around {} and {} overlap along the path",
                w[0].2, w[1].2
            )));
        }
    }
    let mut cursor = a;
    for (s_in, s_out, p) in hits {
        let entry = a + dir * s_in;
        let exit = a + dir * s_out;
        if (entry - cursor).norm() > 0.0 {
            out.push(Piece::Line { from: cursor, to: entry });
        }
        let start = (entry - p).arg();
        let end = (exit - p).arg();
        let sweep = match side {
            DetourSide::Ccw => (end - start).rem_euclid(TAU),
            DetourSide::Cw => -(start - end).rem_euclid(TAU),
        };
        // a pole exactly on the segment gives a semicircle either way
        let sweep = if sweep.abs() < 1e-15 { PI.copysign(sweep) } else { sweep };
        out.push(Piece::Arc { center: p, radius: clearance, start, sweep });
        cursor = exit;
    }
    out.push(Piece::Line { from: cursor, to: b });
    Ok(())
}

/// All translates `p + m + nτ` of the given poles within `margin` of the
/// box spanned by `points`.
pub fn pole_translates(lattice: &Lattice, poles: &[Complex64], points: &[Complex64], margin: f64) -> Vec<Complex64> {
    let tau = lattice.tau();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in points {
        xmin = xmin.min(z.re);
        xmax = xmax.max(z.re);
        ymin = ymin.min(z.im);
        ymax = ymax.max(z.im);
    }
    let (xmin, xmax, ymin, ymax) = (xmin - margin, xmax + margin, ymin - margin, ymax + margin);
    let mut out = Vec::new();
    for &p in poles {
        let r = lattice.reduce(p).reduced;
        let nlo = ((ymin - r.im) / tau.im).floor() as i64 - 1;
        let nhi = ((ymax - r.im) / tau.im).ceil() as i64 + 1;
        for n in nlo..=nhi {
            let row = r + tau * n as f64;
            let mlo = (xmin - row.re).floor() as i64 - 1;
            let mhi = (xmax - row.re).ceil() as i64 + 1;
            for m in mlo..=mhi {
                let z = row + m as f64;
                if z.re >= xmin && z.re <= xmax && z.im >= ymin && z.im <= ymax {
                    out.push(z);
                }
            }
        }
    }
    out
}

/// Distance from `z` to the nearest translate of any of `poles`.
pub fn distance_to_poles(lattice: &Lattice, poles: &[Complex64], z: Complex64) -> f64 {
    poles
        .iter()
        .map(|&p| lattice.distance_to_lattice(z - p))
        .fold(f64::INFINITY, f64::min)
}

/// Paths `base → base + 1` and `base → base + τ` avoiding all lattice translates
/// of `poles` by at least `clearance`.
pub fn period_loops(
    lattice: &Lattice,
    poles: &[Complex64],
    base: Complex64,
    clearance: f64,
    side: DetourSide,
) -> Result<(PathSpec, PathSpec)> {
    let d = distance_to_poles(lattice, poles, base);
    if d < 2.0 * clearance {
        return Err(Error::Geometry(format!(
            "base point {base} at distance {d:e} from a pole, need at least {:e}",
            2.0 * clearance
        )));
    }
    let mut out = Vec::with_capacity(2);
    for gamma in [Complex64::new(1.0, 0.0), lattice.tau()] {
        let end = base + gamma;
        let near = pole_translates(lattice, poles, &[base, end], 2.0 * clearance);
        out.push(PathSpec::polyline(vec![base, end], near, clearance, side)?);
    }
    let t = out.pop().expect("two paths");
    let o = out.pop().expect("two paths");
    Ok((o, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{c, I};

    #[test]
    fn straight_without_poles() {
        let l = Lattice::new(I).unwrap();
        let (p1, pt) = period_loops(&l, &[], c(0.1, 0.2), 0.05, DetourSide::Ccw).unwrap();
        assert_eq!(p1.pieces().len(), 1);
        assert_eq!(pt.pieces().len(), 1);
        assert!((p1.end() - c(1.1, 0.2)).norm() < 1e-15);
    }

    #[test]
    fn detour_on_segment() {
        let clr = 0.05;
        let p = PathSpec::polyline(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.5, 0.0)], clr, DetourSide::Ccw).unwrap();
        assert_eq!(p.detour_count(), 1);
        assert!(p.length() < 1.0 + PI * clr + 1e-12);
        assert!((p.min_pole_distance() - clr).abs() < 1e-12);
        // counterclockwise around the pole: the detour dips below it
        assert!(p.pieces()[1].point(0.5).im < 0.0);
        let q = PathSpec::polyline(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.5, 0.0)], clr, DetourSide::Cw).unwrap();
        assert!(q.pieces()[1].point(0.5).im > 0.0);
        assert!((q.end() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn continuity_of_pieces() {
        let p = PathSpec::polyline(
            vec![c(0.0, 0.0), c(1.0, 0.1), c(1.2, 1.0)],
            vec![c(0.3, 0.01), c(0.7, 0.1), c(1.1, 0.5)],
            0.04,
            DetourSide::Cw,
        )
        .unwrap();
        for w in p.pieces().windows(2) {
            assert!((w[0].end() - w[1].start()).norm() < 1e-14);
        }
        assert!(p.min_pole_distance() >= 0.04 * (1.0 - 1e-9));
    }

    #[test]
    fn geometry_errors() {
        let r = PathSpec::polyline(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.5, 0.0), c(0.55, 0.0)], 0.05, DetourSide::Ccw);
        assert!(matches!(r, Err(Error::Geometry(_))));
        let l = Lattice::new(I).unwrap();
        assert!(period_loops(&l, &[c(0.0, 0.0)], c(0.05, 0.0), 0.05, DetourSide::Ccw).is_err());
    }

    #[test]
    fn translates_cover_box() {
        let l = Lattice::new(c(0.3, 0.9)).unwrap();
        let t = pole_translates(&l, &[c(0.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)], 0.1);
        assert!(t.iter().any(|z| z.norm() < 1e-12));
        assert!(t.iter().any(|z| (z - 1.0).norm() < 1e-12));
    }
}
