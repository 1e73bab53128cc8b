use num_complex::Complex64;
use thiserror::Error;

/// The singular locus hit by an evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Singularity {
    /// A point of the lattice (pole of ℘, ζ, zero of σ).
    Lattice(Complex64),
    /// A translate of the connection pole `u0`.
    ConnectionPole(Complex64),
    /// A pole of a developing map (zero of the denominator solution).
    DevelopingMap(Complex64),
}

impl std::fmt::Display for Singularity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Singularity::Lattice(z) => write!(f, "lattice point {}{:+}i", z.re, z.im),
            Singularity::ConnectionPole(z) => write!(f, "connection pole {}{:+}i", z.re, z.im),
            Singularity::DevelopingMap(z) => write!(f, "developing-map pole near {}{:+}i", z.re, z.im),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("degenerate Möbius map (|det| = {det:e})")]
    Degenerate { det: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("requested accuracy {requested:e} unreachable: {reason}")]
    Precision { requested: f64, reason: String },

    #[error("evaluation too close to {at}")]
    Pole { at: Singularity, distance: f64 },

    #[error("maps do not commute (commutator distance {distance:e})")]
    NotCommuting { distance: f64 },

    #[error("ambiguous classification: {0}")]
    Ambiguous(String),

    #[error("linear representation (b1 = b_tau = 0) is excluded from B1")]
    ExcludedRepresentation,

    #[error("critical point: |f'| = {derivative:e}")]
    CriticalPoint { derivative: f64 },

    #[error("path geometry: {0}")]
    Geometry(String),

    #[error("integration failed on piece {piece} for t in [{t_start}, {t_end}]: {reason}")]
    Integration { piece: usize, t_start: f64, t_end: f64, reason: String },

    #[error("chart error: {0}")]
    Chart(String),

    #[error("finite-difference stencil crosses a singularity: {0}")]
    Stencil(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
