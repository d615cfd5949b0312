pub mod census;
pub mod error;
pub mod field;
pub mod gallery;
pub mod groebner;
pub mod poly;
pub mod projective;
pub mod upoly;

pub use error::{Error, Result};
pub use field::{make_field, FieldElement, FieldSpec};
pub use poly::{BinaryForm, Monomial, Polynomial};
