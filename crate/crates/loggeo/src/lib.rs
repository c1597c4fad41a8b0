//! Exact computational models of logarithmic differential structures on
//! charted monoid data: a Groebner kernel, fine monoids and their diagonal
//! exactifications, presented form modules, divided-power truncations, the
//! simplicial de Rham operators, and connection coefficients, together with
//! a machine-checkable verification suite over a built-in chart corpus.

pub mod error;
pub mod field;
pub mod grobner;
pub mod intmat;
pub mod limits;
pub mod module;
pub mod chart;
pub mod corpus;
pub mod crystal;
pub mod ctx;
pub mod derham;
pub mod diagonal;
pub mod monoid;
pub mod omega;
pub mod pd;
pub mod parse;
pub mod poly;
pub mod report;

pub use error::{Error, Result};
pub use field::CoefficientField;
pub use limits::Limits;
