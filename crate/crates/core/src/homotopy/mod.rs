//! Strong homotopy structures: sh Leibniz squares, invariance of higher
//! derived brackets, the Cartan 3-form, and derived homotopies of sh Lie
//! algebras together with their sign ledgers.

pub mod concrete;
pub mod freelie;
pub mod ledger;
pub mod shll;
pub mod term;

use crate::algebra::AlgebraError;
use crate::bar::BarError;
use crate::kernel::Sign;

pub use concrete::{
    affine_zeta, cartan_cocycle_check, higher_derived_family, invariant_cocycle_check, sh_leibniz_square, sl2_grassmann,
    CartanReport, CocycleReport, DgLieInstance, FamilyKind, HomotopyFamily,
};
pub use freelie::{invariant_identity_formal, FormalFamily, FormalInvariantReport};
pub use ledger::{a1_ledger, a2_ledger, A1Entry, A2Entry};
pub use shll::{verify_shll_square, ShEngine, ShReport, MAX_FORMAL_ARITY};
pub use term::{Expr, ShAlphabet, Term};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum HomotopyError {
    #[error("index i = {i} out of range for m = {m} (need 0 <= i <= m-1)")]
    IndexOutOfRange { m: usize, i: usize },
    #[error("{kind} map of arity {arity} has degree {found}, expected {expected}")]
    DegreeMismatch { kind: String, arity: usize, expected: i64, found: i64 },
    #[error("total arity {n} exceeds the cap {cap}")]
    ArityCap { n: usize, cap: usize },
    #[error("not a derivation: {0}")]
    NotDerivation(String),
    #[error(transparent)]
    Bar(#[from] BarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `(±)ⁱ_m = (-1)^{(2m+i-1)i/2}`, the sign of the `i`-th derived homotopy of `l_m`.
pub fn derived_homotopy_sign(m: usize, i: usize) -> Result<Sign, HomotopyError> {
    if m == 0 || i >= m {
        return Err(HomotopyError::IndexOutOfRange { m, i });
    }
    let (m, i) = (m as i64, i as i64);
    Ok(Sign::pow((2 * m + i - 1) * i / 2))
}

#[cfg(test)]
mod tests;
