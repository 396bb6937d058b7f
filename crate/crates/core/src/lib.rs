//! Toric evaluation codes over finite fields: field arithmetic, 2-D fans and
//! polytopes, linear codes with exact minimum distance, parameter bounds
//! and an error-locator decoder for the dual codes.

pub mod bounds;
pub mod code;
pub mod corpus;
pub mod decoder;
pub mod galois;
pub mod geometry;
pub mod toric_code;

pub use code::{LinearCode, Matrix};
pub use galois::{Field, FieldElement};
pub use geometry::{Divisor, EvalPoint, Fan, Polytope};
pub use toric_code::{build, ToricCode, ToricCodeSpec};
