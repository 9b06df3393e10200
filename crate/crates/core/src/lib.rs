//! Polynomial representations of polyhedra in dimension two and three.
//!
//! Given `P = {x : <a_i, x> <= b_i}` the builders produce `d` polynomials
//! with `P = {x : p_j(x) >= 0 for all j}` and certify the equality on
//! seeded samples.

pub mod build;
pub mod certify;
pub mod error;
pub mod expr;
pub mod field;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod sampling;
pub mod shapes;

pub use build::{BuildOutcome, Mode, Params, Representation, SearchConfig};
pub use certify::{Budgets, CertReport, CertTolerances, Domain, Verdict};
pub use error::{Error, Result};
pub use expr::{EvalForm, Node};
pub use field::{FieldGrid, Selection};
pub use io::{PolytopeFile, PolytopeInfo};
pub use geometry::{Halfspace, Polytope};
pub use poly::{Monomial, Polynomial};
