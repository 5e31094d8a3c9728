//! Exact computations with Lie–Leibniz style operads: graded signs, free
//! operads, quadratic presentations, bar coalgebras and homotopy checks.

pub mod algebra;
pub mod bar;
pub mod dsl;
pub mod free_operad;
pub mod homotopy;
pub mod kernel;
pub mod linalg;
pub mod quadratic;
pub mod zoo;

pub use free_operad::{Generator, GenId, Glyph, OperadElement, Signature, SwapKind, Tree};
pub use kernel::{Rational, Sign};
