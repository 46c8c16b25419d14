//! Exact-arithmetic toolkit for split projective toric varieties presented
//! as fans: divisor class groups, fan symmetry groups, integral
//! representation lattices with their Tate cohomology, Hilbert bases and
//! nef cones, canonical ample collections, and the classification of
//! twisted forms over desk-scale field models (the real numbers, finite
//! fields, or an abstract cyclic Galois group).
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals),
//! and every public computation is deterministic: the same input always
//! produces byte-identical reports.
//!
//! Module map:
//! - [`zmodule`]: integer matrices, Smith/Hermite forms, Diophantine solving
//! - [`fan`]: fans, validation, smoothness/completeness/projectivity,
//!   class groups, and the bundled example fans
//! - [`autgroup`]: fan automorphisms, weight decompositions, the lattice of
//!   symmetries acting on the class group
//! - [`glattice`]: finite matrix groups acting on lattices, Tate cohomology,
//!   flasque/coflasque tests, coflasque resolutions, invertibility
//! - [`polyhedral`]: rational cones, extreme rays, Hilbert bases, nef cones,
//!   global section counts
//! - [`omega`]: canonical ample collections and the shape of the target
//!   space and its algebra
//! - [`descent`]: twisted form classification over the supported field
//!   models
//! - [`report`]: serializable analysis and classification reports

pub mod autgroup;
pub mod descent;
pub mod error;
pub mod fan;
pub mod glattice;
pub mod omega;
pub mod polyhedral;
pub mod report;
pub mod zmodule;

pub use error::{Error, Result};
