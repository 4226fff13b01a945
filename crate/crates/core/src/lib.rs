//! Exact computation of Eisenstein series in the `E4`/`E6` basis, the
//! polynomials `φ_k` whose roots are the j-invariants of the non-elliptic
//! zeros of `E_k`, and 2-adic irreducibility certificates for them.

pub mod eisenstein;
pub mod error;
pub mod exact;
pub mod gekeler;
pub mod irreducibility;
pub mod poly;
pub mod qmring;
pub mod replicate;
pub mod series;

pub use error::{Error, Result};
pub use exact::{ExactRational, Valuation};
