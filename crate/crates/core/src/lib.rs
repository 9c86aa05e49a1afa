//! Quadratization of scalar polynomial ODEs `x' = p(x)`.

pub mod construct;
pub mod groebner;
pub mod linalg;
pub mod monosearch;
pub mod quadsys;
pub mod scalars;
pub mod simulate;
pub mod unipoly;

pub use quadsys::{
    reduce_new_vars, solve_quadratic_representation, verify_quadratization, NewVarSet, QuadError, QuadExpr,
    Quadratization,
};
pub use scalars::{Complex, Field, Mode, Rational, Scalar, ScalarError};
pub use unipoly::{AnyPoly, Degree, PolyError, UniPoly};
