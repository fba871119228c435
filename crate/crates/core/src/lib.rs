//! Exact verification of Mason/ABC-type degree bounds for vanishing sums of
//! polynomials over cyclotomic fields.

pub mod bounds;
pub mod cycfield;
pub mod driver;
pub mod exec;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod search;
pub mod sumsystem;
pub mod wronskian;

pub use cycfield::{CycNumber, CycloField};
pub use exec::Exec;
pub use poly::{Degree, Monomial, Polynomial};
