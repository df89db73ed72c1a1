//! Exact-arithmetic convolution Hecke algebras for GL_n over a local
//! function field at level 0, together with the combinatorics that
//! control them.
//!
//! The crate has three layers:
//!
//! * combinatorics: [`weyl`] (type-A roots, length, coset minima) and
//!   [`affine`] (dominant diagonals and monomial matrices);
//! * the local field model: [`localfield`] (truncated Laurent scalars,
//!   matrices, subgroup membership) and [`cosets`] (canonical forms for
//!   K^1-double cosets plus enumeration-based lemma verifiers);
//! * algebras: [`prop_hecke`] (the convolution algebra of K^1-bi-invariant
//!   functions on GL_n(F) with its generator relations) and
//!   [`finite_hecke`] (the same construction for a finite group and a
//!   subgroup representation, with the endomorphism-algebra isomorphism
//!   and the module functor).
//!
//! Everything computes over exact coefficients ([`coeff`]): rationals or
//! a prime field of characteristic different from the residue field's.
//! The [`cli`] module drives batch verification runs and JSON reports.

pub mod affine;
pub mod cli;
pub mod coeff;
pub mod cosets;
pub mod finite_hecke;
pub mod localfield;
pub mod prop_hecke;
pub mod report;
pub mod rng;
pub mod weyl;
