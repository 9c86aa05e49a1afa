//! Groebner bases over the rationals and the one-variable feasibility workbench.

pub mod buchberger;
pub mod matrix;
pub mod multipoly;
pub mod order;
pub mod workbench;

pub use buchberger::{buchberger, elimination_ideal, is_groebner_basis, reduce, s_polynomial};
pub use matrix::SymbolicMatrix;
pub use multipoly::{MultiPoly, Ring};
pub use order::{MonomialOrder, OrderKind};
pub use workbench::{build_single_var_matrices, single_var_feasibility_conditions};
