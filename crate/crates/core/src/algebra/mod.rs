//! Exact arithmetic over Q: rationals, sparse polynomials, the polynomial
//! grammar, resultants, gcds and weighted-degree detection.

pub mod gcd;
pub mod mpoly;
pub mod parse;
pub mod rational;
pub mod resultant;
pub mod univariate;
pub mod weights;

pub use gcd::{gcd, square_free_part};
pub use mpoly::{grlex_cmp, MPoly, Monomial};
pub use parse::parse_poly;
pub use rational::{frac, rat, Rational};
pub use resultant::{resultant, resultant_canonical, resultant_monic};
pub use univariate::UPoly;
pub use weights::{detect_quasi_homogeneity, WeightVector};
