//! Exact computations for hypergeometric local systems attached to gamma
//! vectors: parameters, Hodge numbers, toric models, the Dwork–Katz
//! cohomology engine, Gauss–Manin operators, monodromy and period series.

pub mod algebra;
pub mod cone;
pub mod covering;
pub mod dwork_katz;
pub mod error;
pub mod gamma;
pub mod hodge;
pub mod monodromy;
pub mod ore;
pub mod series;
pub mod toric;

pub use algebra::{IntMatrix, LaurentPolynomial, Poly, QMatrix, RatFunc, Rational};
pub use error::{Error, Result};
pub use gamma::{family_parameter, hg_params, make_gamma, parse_gamma, FamilyParameter, GammaVector, HGParams};
pub use ore::OreOperator;
pub use toric::{build_model, import_model, ToricModel};
