//! A truncated exact model of F = F_q((t)) and of GL_n(F).
//!
//! The model is exact within a declared valuation window: scalars carry
//! certified coefficient windows (see [`scalar::TruncatedLaurent`]), and
//! every predicate either answers exactly or fails loudly with
//! [`FieldError::PrecisionExhausted`]. The [`Config`] fixes the rank n,
//! the residue field, the working expansion length and the window.

pub mod fq;
pub mod matrix;
pub mod scalar;
mod subgroup;

use std::fmt;

pub use fq::{fq_det, fq_mat_inv, fq_mat_mul, gl_elements, Fq};
pub use matrix::{det_valuation, GroupElement, Matrix};
pub use scalar::{TruncatedLaurent, Val};
pub use subgroup::{is_member, monomial_matrix, to_ext_affine, SubgroupSpec};

use crate::rng::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    /// The answer depends on coefficients outside the certified window.
    PrecisionExhausted,
    NotInvertible,
    BadParameter(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::PrecisionExhausted => write!(f, "precision exhausted"),
            FieldError::NotInvertible => write!(f, "matrix is not invertible"),
            FieldError::BadParameter(s) => write!(f, "bad parameter: {s}"),
        }
    }
}

impl std::error::Error for FieldError {}

/// Global parameters: rank, residue field, expansion length, valuation
/// window. Enumerations are exact within the window and refuse to run
/// outside it.
#[derive(Clone, Debug)]
pub struct Config {
    pub n: usize,
    pub fq: Fq,
    pub prec: usize,
    pub window: i64,
}

impl Config {
    pub fn new(n: usize, q: u64, prec: usize, window: i64) -> Result<Config, FieldError> {
        if n < 1 || n > 8 {
            return Err(FieldError::BadParameter(format!("rank n = {n}")));
        }
        if window < 1 {
            return Err(FieldError::BadParameter(format!("window {window}")));
        }
        if (prec as i64) < 2 * window + 2 {
            return Err(FieldError::BadParameter(format!(
                "prec {prec} too small for window {window}: need at least {}",
                2 * window + 2
            )));
        }
        Ok(Config {
            n,
            fq: Fq::new(q)?,
            prec,
            window,
        })
    }

    /// Expansion length used for series inverses inside eliminations. Long
    /// enough that every id-level zero test below [`Config::zero_cut`]
    /// stays certified for products of two window-bounded elements.
    pub fn series_len(&self) -> usize {
        self.prec + 2 * self.window as usize
    }

    /// Exponent below which a residual must be certified zero before it is
    /// dropped in canonical-form computations. Perturbing an element g by
    /// g * (1 + g^{-1} eps) with eps = O(t^{zero_cut}) keeps it in the same
    /// K^1-double coset whenever g and its inverse have entries of
    /// valuation >= -2*window.
    pub fn zero_cut(&self) -> i64 {
        2 * self.window + 1
    }

    pub fn q(&self) -> u64 {
        self.fq.q() as u64
    }
}

/// Random element of K^1 = I + t M_n(O): entries are exact polynomials of
/// the given coefficient count.
pub fn sample_k1(cfg: &Config, rng: &mut Rng, terms: usize) -> GroupElement {
    let n = cfg.n;
    let q = cfg.fq.q() as u64;
    let mat = Matrix::from_fn(n, |r, c| {
        let coeffs: Vec<u8> = (0..terms).map(|_| rng.below(q) as u8).collect();
        let base = if r == c {
            TruncatedLaurent::one()
        } else {
            TruncatedLaurent::zero()
        };
        base.add(&TruncatedLaurent::poly(1, coeffs), &cfg.fq)
    });
    GroupElement::with_det_val(mat, 0)
}

/// Random element of K = GL_n(O): an invertible residue lift times K^1.
pub fn sample_k(cfg: &Config, rng: &mut Rng, terms: usize) -> GroupElement {
    let n = cfg.n;
    let q = cfg.fq.q() as u64;
    loop {
        let res: Vec<u8> = (0..n * n).map(|_| rng.below(q) as u8).collect();
        if fq_det(&cfg.fq, n, &res) != 0 {
            let lift = GroupElement::with_det_val(Matrix::from_residues(n, &res), 0);
            return lift.mul(&sample_k1(cfg, rng, terms), &cfg.fq);
        }
    }
}

/// Random element of the I-tilde group: diagonal in 1+tO, above-diagonal
/// in O, below-diagonal in tO.
pub fn sample_itilde1(cfg: &Config, rng: &mut Rng, terms: usize) -> GroupElement {
    let n = cfg.n;
    let q = cfg.fq.q() as u64;
    let mat = Matrix::from_fn(n, |r, c| {
        let mut coeffs: Vec<u8> = (0..terms).map(|_| rng.below(q) as u8).collect();
        if r == c {
            let tail = TruncatedLaurent::poly(1, coeffs);
            TruncatedLaurent::one().add(&tail, &cfg.fq)
        } else if r < c {
            TruncatedLaurent::poly(0, {
                coeffs.push(rng.below(q) as u8);
                coeffs
            })
        } else {
            TruncatedLaurent::poly(1, coeffs)
        }
    });
    GroupElement::with_det_val(mat, 0)
}

/// Random unipotent upper-triangular element with entries of valuation
/// >= -window (exact Laurent polynomials).
pub fn sample_unipotent_window(cfg: &Config, rng: &mut Rng) -> GroupElement {
    let n = cfg.n;
    let q = cfg.fq.q() as u64;
    let v = cfg.window;
    let terms = (2 * v + 1) as usize;
    let mat = Matrix::from_fn(n, |r, c| {
        if r == c {
            TruncatedLaurent::one()
        } else if r < c {
            let coeffs: Vec<u8> = (0..terms).map(|_| rng.below(q) as u8).collect();
            TruncatedLaurent::poly(-v, coeffs)
        } else {
            TruncatedLaurent::zero()
        }
    });
    GroupElement::with_det_val(mat, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(Config::new(2, 2, 6, 2).is_ok());
        assert!(Config::new(2, 2, 5, 2).is_err()); // prec below 2V+2
        assert!(Config::new(2, 6, 8, 2).is_err()); // q not in range
        assert!(Config::new(0, 2, 8, 2).is_err());
    }
}
