//! Exact V-filtrations for tame unit F-crystals on the punctured formal disk.

pub mod crystal;
pub mod error;
pub mod field;
pub mod functors;
pub mod sample;
pub mod series;
pub mod vfilt;

pub use error::{Error, Result};
pub use field::{make_field, FieldCtx, FieldElem, Mat, SemilinearOperator};
pub use series::{LaurentSeries, RationalLevel, Valuation};
