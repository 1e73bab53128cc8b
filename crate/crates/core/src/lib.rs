//! Affine, Euclidean and projective structures on complex tori.
//!
//! Building blocks: Möbius maps and commuting-pair classification
//! ([`mobius`]), Weierstrass functions ([`weierstrass`]), affine developing
//! maps ([`affine`]), Riccati transport along paths ([`riccati`]), the
//! Riemann–Hilbert map on connection data ([`rh`]) and ruled-surface
//! bookkeeping ([`bundle`]). [`verify`] runs the numerical checks.

pub mod affine;
pub mod bundle;
pub mod complex;
pub mod error;
pub mod mobius;
pub mod numerics;
pub mod path;
pub mod riccati;
pub mod rh;
pub mod verify;
pub mod weierstrass;

pub use complex::{ComplexValue, ProjPoint};
pub use error::{Error, Result, Singularity};
pub use mobius::MobiusMap;
pub use weierstrass::{make_context, Lattice, WeierstrassContext};
