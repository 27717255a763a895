//! Symbolic computation in the pure braid groups of the sphere and the
//! projective plane.
//!
//! Words over the generators `A[i,j]`, `rho[k]`, `tau[k]`, `s[i]` are the
//! common currency. On top of them sit the group presentations, the
//! standard homomorphisms, the Artin-combing normal form of
//! `Gamma_{m,2}(RP^2)` and abelianization by Smith normal form.

pub mod abelian;
pub mod combing;
pub mod error;
pub mod free;
pub mod homs;
pub mod presentations;
pub mod verify;
pub mod words;

use num_bigint::BigInt;

pub use combing::{comb, CombedForm, Comber, Verdict};
pub use error::{Error, Result};
pub use homs::{QuatElement, Z2Vector};
pub use presentations::{Family, Presentation, Surface};
pub use words::{parse_word, Generator, Word};

/// Exact integer matrix.
pub type IntMatrix = abelian::Matrix<BigInt>;
/// Machine-integer matrix, for callers that know their entries stay small.
pub type SmallIntMatrix = abelian::Matrix<i64>;
/// Invariants of a finitely generated abelian group.
pub type AbelianInvariants = abelian::Invariants<BigInt>;
