//! Exact construction and classification of uniserial modules over Lie
//! algebras `g = <x> ⋉ a`, where `ad x` acts diagonalizably on the abelian
//! ideal `a`.
//!
//! The crate is layered bottom-up:
//!
//! * [`field`]: scalars in `F_p` or `Q`.
//! * [`matrix`]: dense matrices, eigenvalues, subspaces and the brute-force
//!   invariant-subspace lattice.
//! * [`jordan`]: the algebra `F[J]` of polynomials in the nilpotent Jordan
//!   block, stored as truncated polynomials.
//! * [`orbit`]: the unipotent group `G = 1 + J F[J]` acting on
//!   `D + F[J]J` by conjugation, with canonical representatives.
//! * [`normal`]: triangularization, the upper-triangular sweep and the
//!   reduction of a module to `(Y, J)` normal form.
//! * [`lie`]: the algebra, module builders, verifiers, classification and
//!   isomorphism testing.

pub mod error;
pub mod field;
pub mod jordan;
pub mod lie;
pub mod matrix;
pub mod normal;
pub mod orbit;
pub mod par;

pub use error::{Error, Result};
pub use field::{Field, FieldKind, Scalar};
pub use jordan::TruncPoly;
pub use matrix::{Matrix, Subspace};
pub use par::Execution;
