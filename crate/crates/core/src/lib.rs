//! Exact computations with superattracting and semi-superattracting germs
//! of holomorphic maps fixing the origin of C^2.

pub mod blowup;
pub mod conjugacy;
pub mod error;
pub mod germ;
pub mod parse;
pub mod scalar;
pub mod series;
pub mod valuations;

pub use error::{Error, Result};
pub use germ::{Germ, GermType};
pub use scalar::Scalar;
pub use series::{BiSeries, Order, UniPoly, UniSeries};
