//! Exact-arithmetic toolkit for the plane Cremona group presented by the
//! standard quadratic involution `σ = [yz : xz : xy]` together with `PGL₃`.
//!
//! The crate provides:
//!
//! * exact field scalars (arbitrary-precision rationals or a prime field),
//! * homogeneous trivariate polynomial arithmetic including gcd,
//! * birational maps of the projective plane as normalized coprime triples,
//! * words in the generators `{σ} ∪ PGL₃` with a catalogue of elementary
//!   relation moves, constructive rewrites, an identity-word simplifier, and
//!   independently replayable certificates,
//! * the rational action on triples of symmetric matrices.

pub mod cremap;
pub mod giza;
pub mod hpoly;
pub mod parse;
pub mod rewrite;
pub mod sample;
pub mod scalar;
pub mod word;

pub use cremap::{CreMap, LinClass, LinMap, MapError, ProjPoint};
pub use hpoly::{HPoly, PolyError};
pub use scalar::{FieldMode, NumError, Scalar};
pub use word::{Letter, Word};
