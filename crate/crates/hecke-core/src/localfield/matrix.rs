//! Square matrices over truncated Laurent scalars and certified-invertible
//! group elements.

use super::fq::Fq;
use super::scalar::{TruncatedLaurent, Val};
use super::{Config, FieldError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    e: Vec<TruncatedLaurent>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix {
            n,
            e: vec![TruncatedLaurent::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, TruncatedLaurent::one());
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> TruncatedLaurent) -> Self {
        let mut m = Self::zero(n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Constant lift of a residue matrix (row-major indices into F_q).
    pub fn from_residues(n: usize, res: &[u8]) -> Self {
        assert_eq!(res.len(), n * n);
        Self::from_fn(n, |r, c| TruncatedLaurent::residue(res[r * n + c]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, r: usize, c: usize) -> &TruncatedLaurent {
        &self.e[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: TruncatedLaurent) {
        self.e[r * self.n + c] = v;
    }

    pub fn mul(&self, other: &Matrix, fq: &Fq) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        Matrix::from_fn(n, |r, c| {
            let mut acc = TruncatedLaurent::zero();
            for k in 0..n {
                acc = acc.add(&self.at(r, k).mul(other.at(k, c), fq), fq);
            }
            acc
        })
    }

    pub fn sub(&self, other: &Matrix, fq: &Fq) -> Matrix {
        Matrix::from_fn(self.n, |r, c| self.at(r, c).sub(other.at(r, c), fq))
    }

    /// Residues at t^0 of every entry, when all are known and integral.
    pub fn residues(&self) -> Option<Vec<u8>> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for v in &self.e {
            if v.is_zero_below(0)? {
                out.push(v.coeff_at(0)?);
            } else {
                return None;
            }
        }
        Some(out)
    }

    pub fn entries(&self) -> &[TruncatedLaurent] {
        &self.e
    }
}

impl std::fmt::Display for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.n {
            write!(f, "[")?;
            for c in 0..self.n {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// An invertible matrix with a certified determinant valuation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    mat: Matrix,
    det_val: i64,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            mat: Matrix::identity(n),
            det_val: 0,
        }
    }

    /// Certifies invertibility by computing the determinant valuation.
    pub fn new(cfg: &Config, mat: Matrix) -> Result<Self, FieldError> {
        let det_val = det_valuation(cfg, &mat)?;
        Ok(GroupElement { mat, det_val })
    }

    /// For matrices whose determinant valuation is known by construction
    /// (monomial matrices, residue lifts).
    pub fn with_det_val(mat: Matrix, det_val: i64) -> Self {
        GroupElement { mat, det_val }
    }

    pub fn n(&self) -> usize {
        self.mat.n()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn det_val(&self) -> i64 {
        self.det_val
    }

    pub fn mul(&self, other: &GroupElement, fq: &Fq) -> GroupElement {
        GroupElement {
            mat: self.mat.mul(&other.mat, fq),
            det_val: self.det_val + other.det_val,
        }
    }

    /// Gauss-Jordan inverse with minimal-valuation pivoting.
    pub fn inverse(&self, cfg: &Config) -> Result<GroupElement, FieldError> {
        let n = self.n();
        let fq = &cfg.fq;
        let mut m = self.mat.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pr = pick_pivot_row(&m, col, col)?;
            if pr != col {
                for c in 0..n {
                    let a = m.at(pr, c).clone();
                    let b = m.at(col, c).clone();
                    m.set(pr, c, b);
                    m.set(col, c, a);
                    let a = inv.at(pr, c).clone();
                    let b = inv.at(col, c).clone();
                    inv.set(pr, c, b);
                    inv.set(col, c, a);
                }
            }
            let piv_inv = m.at(col, col).inv(fq, cfg.series_len())?;
            for c in 0..n {
                m.set(col, c, m.at(col, c).mul(&piv_inv, fq));
                inv.set(col, c, inv.at(col, c).mul(&piv_inv, fq));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = m.at(r, col).clone();
                if f.is_exactly_zero() {
                    continue;
                }
                for c in 0..n {
                    let s1 = f.mul(m.at(col, c), fq);
                    m.set(r, c, m.at(r, c).sub(&s1, fq));
                    let s2 = f.mul(inv.at(col, c), fq);
                    inv.set(r, c, inv.at(r, c).sub(&s2, fq));
                }
            }
        }
        Ok(GroupElement {
            mat: inv,
            det_val: -self.det_val,
        })
    }
}

/// Minimal-valuation pivot row at or below `from` in `col`. Errors when an
/// uncertain entry could undercut the best certified pivot, or when the
/// column is certified zero.
fn pick_pivot_row(m: &Matrix, col: usize, from: usize) -> Result<usize, FieldError> {
    let n = m.n();
    let mut best: Option<(i64, usize)> = None;
    let mut unknown_floor: Option<i64> = None;
    for r in from..n {
        match m.at(r, col).val() {
            Val::Exact(v) => {
                if best.map_or(true, |(bv, _)| v < bv) {
                    best = Some((v, r));
                }
            }
            Val::Zero => {}
            Val::AtLeast(b) => {
                unknown_floor = Some(unknown_floor.map_or(b, |u: i64| u.min(b)));
            }
        }
    }
    match best {
        Some((v, r)) => {
            if let Some(u) = unknown_floor {
                if u <= v {
                    // an unknown entry might have strictly smaller valuation
                    return Err(FieldError::PrecisionExhausted);
                }
            }
            Ok(r)
        }
        None => {
            if unknown_floor.is_some() {
                Err(FieldError::PrecisionExhausted)
            } else {
                Err(FieldError::NotInvertible)
            }
        }
    }
}

/// Determinant valuation via elimination; exact for certified pivots.
pub fn det_valuation(cfg: &Config, mat: &Matrix) -> Result<i64, FieldError> {
    let n = mat.n();
    let fq = &cfg.fq;
    let mut m = mat.clone();
    let mut total = 0i64;
    for col in 0..n {
        let pr = pick_pivot_row(&m, col, col)?;
        if pr != col {
            for c in 0..n {
                let a = m.at(pr, c).clone();
                let b = m.at(col, c).clone();
                m.set(pr, c, b);
                m.set(col, c, a);
            }
        }
        let piv = m.at(col, col).clone();
        match piv.val() {
            Val::Exact(v) => total += v,
            _ => return Err(FieldError::PrecisionExhausted),
        }
        let piv_inv = piv.inv(fq, cfg.series_len())?;
        for r in (col + 1)..n {
            let f = m.at(r, col).mul(&piv_inv, fq);
            if f.is_exactly_zero() {
                continue;
            }
            for c in col..n {
                let s = f.mul(m.at(col, c), fq);
                m.set(r, c, m.at(r, c).sub(&s, fq));
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::sample_k1;
    use crate::rng::Rng;

    fn cfg22() -> Config {
        Config::new(2, 2, 8, 2).unwrap()
    }

    #[test]
    fn monomial_inverse_pattern() {
        let cfg = cfg22();
        // antidiag(t, t^-1)
        let mut m = Matrix::zero(2);
        m.set(0, 1, TruncatedLaurent::monomial(1, 1));
        m.set(1, 0, TruncatedLaurent::monomial(1, -1));
        let g = GroupElement::new(&cfg, m).unwrap();
        assert_eq!(g.det_val(), 0);
        let inv = g.inverse(&cfg).unwrap();
        assert_eq!(inv.matrix().at(0, 1).val(), Val::Exact(1));
        assert_eq!(inv.matrix().at(1, 0).val(), Val::Exact(-1));
        let prod = g.mul(&inv, &cfg.fq);
        assert_eq!(prod.matrix().residues(), Some(vec![1, 0, 0, 1]));
    }

    #[test]
    fn unipotent_inverse() {
        let cfg = cfg22();
        // (I + t E_12)^-1 = I - t E_12, exact
        let mut m = Matrix::identity(2);
        m.set(0, 1, TruncatedLaurent::monomial(1, 1));
        let g = GroupElement::new(&cfg, m).unwrap();
        let inv = g.inverse(&cfg).unwrap();
        assert_eq!(inv.matrix().at(0, 1).coeff_at(1), Some(1)); // -1 = 1 in F_2
        assert!(inv.matrix().at(0, 1).is_exact());
    }

    #[test]
    fn random_k1_roundtrip() {
        let cfg = Config::new(3, 2, 8, 2).unwrap();
        let mut rng = Rng::new(5);
        for _ in 0..20 {
            let g = sample_k1(&cfg, &mut rng, 3);
            let inv = g.inverse(&cfg).unwrap();
            let prod = g.mul(&inv, &cfg.fq);
            // identity at certified precision
            for r in 0..3 {
                for c in 0..3 {
                    let target = if r == c { 1 } else { 0 };
                    let d = prod.matrix().at(r, c);
                    assert_eq!(d.coeff_at(0), Some(target));
                    for k in 1..4 {
                        assert_eq!(d.coeff_at(k).unwrap_or(0), 0);
                    }
                }
            }
        }
    }
}
