//! Exact arithmetic substrate: rational multivariate polynomials, Gröbner
//! bases over Q and Z, and the ideal operations the higher layers consume.

pub mod gcd;
pub mod groebner;
pub mod ideal;
pub mod newton;
pub mod order;
pub mod poly;
pub mod zpoly;

use thiserror::Error;

pub use gcd::{poly_gcd, poly_gcd_list};
pub use groebner::{engine_stats, groebner_basis, normal_form, EngineStats};
pub use ideal::{content_ideal, Combine, PolyIdeal};
pub use newton::newton_closure_monomial;
pub use order::MonomialOrder;
pub use poly::{Coeff, Monomial, MultiPoly};
pub use zpoly::{z_groebner_basis, ZIdeal};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("the zero ideal is not a valid input")]
    ZeroIdeal,
    #[error("generator arity {found} does not match {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("the zero polynomial has no content ideal")]
    ZeroPolynomial,
    #[error("generator is not a monomial")]
    NotMonomial,
    #[error("coefficients must be integers")]
    NonIntegral,
}
