//! Finite fields and truncated Laurent series over them.

mod field;
mod poly;
mod series;
mod text;

pub use field::{ff_arith, FFElem, FFOp, FiniteField, MAX_FIELD_ORDER};
pub use poly::find_irreducible;
pub use series::{laurent_arith, LaurentSeries, SeriesOp, SeriesValue};
