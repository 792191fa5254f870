//! Core algorithms for enumerating and classifying symmetric 2-(v,k,λ)
//! block designs that admit a prescribed cyclic automorphism group of
//! order p·q, together with GF(2) code analysis of the results.
//!
//! The pipeline runs in five stages:
//!
//! 1. [`feasibility`] — admissible fixed-point counts for the prime-power
//!    divisors of the group order, and the orbit-length distributions they
//!    allow.
//! 2. [`orbit`] — generation of orbit matrices (tactical decomposition
//!    matrices) for a chosen distribution, one representative per
//!    equivalence class.
//! 3. [`refine`] — refinement of an order-p·q orbit matrix down to the
//!    order-p subgroup, keeping invariance under the induced order-q action.
//! 4. [`indexing`] — expansion of refined orbit matrices into incidence
//!    matrices on which the full group acts as prescribed.
//! 5. [`iso`] / [`code`] — isomorph rejection, automorphism groups,
//!    dual/self-dual bookkeeping, 2-ranks and codeword searches.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the parallel
//! drivers live in the companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bits;
pub mod code;
pub mod design;
pub mod feasibility;
pub mod indexing;
pub mod iso;
pub mod orbit;
pub mod refine;

pub use bits::BitRow;
pub use design::{AutomorphismPair, DesignParams, IncidenceMatrix, Permutation};
pub use feasibility::{FixedPointProfile, OrbitDistribution};
pub use indexing::{GroupAction, IndexedDesign};
pub use iso::{CanonicalCertificate, GroupFingerprint};
pub use orbit::{OrbitMatrix, OrbitStructure};
pub use refine::{RefinedOrbitMatrix, RefinementMap};
