//! Leavitt path algebras of directed graphs: graph combinatorics, exact
//! normal-form arithmetic, simple module actions and structural decisions
//! about finite presentation and GK-dimension.

pub mod algebra;
pub mod closures;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod graph;
pub mod modules;
pub mod report;
pub mod scalar;
pub mod structure;

pub use algebra::{Algebra, AlgebraElement, Monomial, SpecialEdgeChoice};
pub use error::{Error, Result};
pub use graph::{Graph, GraphJson, Multiplicity, Path, VertexSet};
pub use scalar::{Field, Scalar};
pub use structure::Limits;
