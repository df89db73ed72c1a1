//! Convolution Hecke algebras for a finite group, a subgroup and a
//! subgroup representation, together with the endomorphism-algebra
//! isomorphism, the module functor, and submodule-lattice checks on
//! small instances.

pub mod algebra;
pub mod functor;
pub mod group;
pub mod instances;
pub mod linalg;
pub mod rep;
pub mod suite;

use std::fmt;

use crate::coeff::CoeffError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FhError {
    Coeff(CoeffError),
    /// The coefficient characteristic divides the order of the compact
    /// subgroup, so the induced representation is not projective.
    BadCharacteristic { ell: u64, subgroup_order: usize },
    /// The submodule lattice cannot be enumerated by this implementation
    /// (too many vectors, or a non-split endomorphism algebra).
    LatticeTooLarge(String),
    NotMultiplicative,
}

impl From<CoeffError> for FhError {
    fn from(e: CoeffError) -> Self {
        FhError::Coeff(e)
    }
}

impl fmt::Display for FhError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FhError::Coeff(e) => write!(f, "{e}"),
            FhError::BadCharacteristic {
                ell,
                subgroup_order,
            } => write!(
                f,
                "characteristic {ell} divides the subgroup order {subgroup_order}"
            ),
            FhError::LatticeTooLarge(s) => write!(f, "submodule lattice out of reach: {s}"),
            FhError::NotMultiplicative => write!(f, "matrices do not define a representation"),
        }
    }
}

impl std::error::Error for FhError {}

pub use algebra::{FHElem, FiniteHecke};
pub use group::{double_cosets, left_transversal, right_transversal, FiniteGroup, Subgroup};
pub use linalg::{CMat, Subspace};
pub use rep::{induce, Induced, Rep};
