//! Exact Chern data of almost complex and generalized complex structures on
//! closed oriented 4-manifolds.
//!
//! The crate works entirely from the intersection lattice of a 4-manifold:
//!
//! - [`lattice`]: integral symmetric forms, pairings, exact signature,
//!   characteristic vectors.
//! - [`enumeration`]: all `c` with `c·c = N` and `c ≡ w₂ (mod 2)`; complete
//!   for definite forms, windowed for indefinite ones.
//! - [`chern`]: truncated Chern polynomials `(rank, c₁, c₂)` and the
//!   constructors for complex, symplectic and generalized complex structures.
//! - [`manifold`]: models for ℂP², S²×S², K3, `E(n)`, blow-ups and connected
//!   sums, plus invariant checks.
//! - [`moduli`]: canonical classes, orbit invariants and certificates that
//!   the image of the Chern polynomial is finite or has many distinct orbits.
//! - [`json`]: the manifold-spec file format.
//!
//! ```
//! use gcchern::{chern, manifold};
//!
//! let cp2 = manifold::preset("CP2").unwrap();
//! let ac = chern::admissible_ac_chern(&cp2, 8).unwrap();
//! let shown: Vec<String> = ac.data.iter().map(|d| chern::pretty(&cp2.lattice, d)).collect();
//! assert_eq!(shown, ["1 - 3a + 3a^2", "1 + 3a + 3a^2"]);
//! ```

#![allow(clippy::needless_range_loop)]

pub mod chern;
pub mod enumeration;
pub mod error;
pub mod json;
pub mod lattice;
pub mod manifold;
pub mod moduli;

pub use chern::{ChernData, GcPairing, SearchWindow};
pub use enumeration::{Completeness, EnumerationProblem, EnumerationResult};
pub use error::{Error, Result};
pub use lattice::{CohClass, IntersectionLattice, SignatureData};
pub use manifold::{FourManifoldModel, Preset};
pub use moduli::{CanonicalClass, OrbitInvariants, OrbitVerdict};
