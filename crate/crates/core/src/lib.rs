//! Exact semistar operations on fractional ideals of computable domains,
//! with membership calculi for the Nagata and Kronecker function rings.

pub mod domains;
pub mod exact;
pub mod function_rings;
pub mod semistar;
