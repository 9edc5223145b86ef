//! Explicit small subsets `{alpha - x^t : x in F_q}` of `F_{q^h}` that
//! contain a non-d-th power or a primitive element, together with
//! brute-force certification and numerical audits of the character-sum
//! bounds behind them.

pub mod charsum;
pub mod construct;
pub mod error;
pub mod field;
pub mod nt;
pub mod poly;

pub use error::{Error, Result};
pub use field::{Embedding, Field, FieldDescriptor, FieldElement, FieldOptions, DEFAULT_FIELD_CAP};
pub use poly::Polynomial;
