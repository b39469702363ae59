//! Exact combinatorics of graded posets and simplicial complexes: flag
//! f/h-vectors, ab- and cd-indices, d- and gamma-vectors, zipping and
//! unzipping surgery, constructive realization of prescribed invariants,
//! and integer homology certification of sphere-like complexes.
//!
//! All arithmetic is exact; counts and coefficients use arbitrary-precision
//! integers throughout.

pub mod flagvec;
pub mod homology;
pub mod poset;
pub mod realize;
pub mod simplicial;

/// Arbitrary-precision signed integer used for every count and coefficient.
pub type Int = num_bigint::BigInt;

/// Convenience constructor for small constants.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Default ceiling on the number of faces a homology certification is
/// willing to process. Override per call, or via `CDGOR_BUDGET` in the CLI.
pub const DEFAULT_FACE_BUDGET: usize = 50_000;
