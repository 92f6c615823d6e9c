//! Irreducible complex characters of `GL_2(O/p^r)` for the finite local rings
//! `Z/p^r` and `F_p[t]/t^r`.
//!
//! The classification runs level by level: characters of `G_{r-1}` are
//! inflated and twisted by one-dimensional characters `λ∘det`, and the
//! remaining characters are produced orbit by orbit from the characters
//! `ψ_β` of the abelian congruence subgroup `K_l`, using one of the
//! registered [`clifford::Construction`] strategies. The result is certified
//! by `Σ dim² = |G_r|`, the class count, and orthonormality, and can be
//! checked against the independent brute-force tables in [`oracle`].

pub mod charfun;
pub mod clifford;
pub mod driver;
pub mod io;
pub mod matgroup;
pub mod oracle;
pub mod orbits;
pub mod ring;

mod error;

pub use error::Error;

/// Absolute tolerance used for every floating-point comparison of character values.
pub const TOLERANCE: f64 = 1e-6;

/// Default bound on the number of enumerated group elements.
pub const DEFAULT_CAP: usize = 30_000;
