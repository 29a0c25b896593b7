//! Exact computations in (Z/nZ)-graded Lie algebras over the rationals.
//!
//! * [`zn`]: index combinatorics in Z/nZ ((-1)-dependence, the sets `D` and `D~`, explicit bound constants).
//! * [`free`]: free Lie algebras in the Lyndon basis, organized by fine degree.
//! * [`linalg`]: sparse exact row reduction.
//! * [`quotient`]: truncated graded quotients, ideals, derived series, centralizer censuses.
//! * [`eigenspace`]: cyclotomic fields, structure-constant algebras and their eigenspace gradings.
//! * [`harness`]: reproducible verification campaigns for the vanishing lemmas.

pub mod eigenspace;
pub mod error;
pub mod free;
pub mod harness;
pub mod linalg;
pub mod quotient;
pub mod zn;

pub use error::{Error, Result};
