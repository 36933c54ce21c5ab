//! Combinatorial embedded desingularization of toric varieties.
//!
//! A toric subvariety of the boundary chart 𝕋𝔸ⁿ_E is encoded by a saturated
//! integer lattice; everything the resolution algorithm needs (orders along
//! boundary strata, transversal envelopes, blow-up transforms, the descending
//! lexicographic invariant) is exact lattice and exponent arithmetic. The
//! crate is organized bottom-up:
//!
//! * [`matrix`]: Hermite/Smith normal forms, kernels, rank, determinant.
//! * [`ratlp`]: exact rational feasibility of small linear systems.
//! * [`lattice`]: saturated lattices, transversality, maximal transversal
//!   sublattice, kernel projections, hyperbolic bases.
//! * [`binomial`]: binomial ideals, E-orders, monomial factorization,
//!   jacobian rank certificates.
//! * [`chart`]: boundary charts, strata, embedding states, envelopes and
//!   relative presentations.
//! * [`blowup`]: combinatorial blow-ups and ideal/lattice transforms.
//! * [`invariant`]: the resolution function (Hcodim, E-inv).
//! * [`driver`]: the resolution loop and its certificates.
//! * [`io`]: exact JSON serialization of problems, trees and certificates.

pub mod binomial;
pub mod blowup;
pub mod chart;
pub mod driver;
pub mod invariant;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod ratlp;

/// Arbitrary-precision rational number; all non-integer arithmetic in the
/// crate happens in this type, never in floating point.
pub type Rat = num::BigRational;

/// Convenience constructor for small rational constants.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}
