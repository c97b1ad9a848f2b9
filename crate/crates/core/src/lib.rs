//! Small complete caps in `PG(4n+1, q)`.
//!
//! The cap is the union of two varieties `V_1` and `V_alpha` in the field
//! model of the projective space over `F_{q^{2n+1}}`. The crate constructs
//! it, certifies completeness point by point, verifies everything
//! exhaustively at small parameters, and exports the cap as the parity-check
//! matrix of a linear code with minimum distance 4 and covering radius 2.

pub mod cap;
pub mod codes;
pub mod cover;
pub mod error;
pub mod field;
pub mod harness;
pub mod linalg;
pub mod linperm;
pub mod pg;
pub mod veronese;

pub use error::{Error, Result};
pub use field::{Elem, Field, FieldCtx, Level};
