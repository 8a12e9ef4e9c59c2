//! Exact enumeration of integer interlacing polynomials of totally real
//! polynomials, the matching totally positive elements of the dual order
//! `Z[a]^v`, and the discriminant and rank lower bounds that follow from
//! counting them.

pub mod bounds;
pub mod engine;
pub mod exact;
pub mod numberfield;
pub mod polytope;
pub mod survey;
