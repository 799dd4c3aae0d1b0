//! Multiplex face lattices, Bier posets over them, toric `f/h/g`
//! polynomials, and brute-force checks of the identities relating them.

pub mod bier;
pub mod error;
pub mod gvec;
pub mod multiplex;
pub mod polynomial;
pub mod poset;
pub mod shelling;
pub mod sweep;
pub mod toric;
pub mod verify;

pub use error::{Error, Result};
pub use polynomial::IntPolynomial;
pub use poset::{ElemId, IntervalSpec, Poset};
