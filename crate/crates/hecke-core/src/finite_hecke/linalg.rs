//! Dense exact linear algebra over `Coefficient`: Gaussian elimination,
//! kernels, and canonical (reduced row echelon) subspace forms. No
//! tolerances anywhere; domain mismatches are programming errors and
//! panic.

use crate::coeff::{CoeffDomain, Coefficient};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    a: Vec<Coefficient>,
}

impl CMat {
    pub fn zero(d: CoeffDomain, rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            a: vec![d.zero(); rows * cols],
        }
    }

    pub fn identity(d: CoeffDomain, n: usize) -> Self {
        let mut m = Self::zero(d, n, n);
        for i in 0..n {
            m.set(i, i, d.one());
        }
        m
    }

    pub fn from_fn(
        d: CoeffDomain,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Coefficient,
    ) -> Self {
        let mut m = Self::zero(d, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_int_rows(d: CoeffDomain, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(d, r, c, |i, j| d.from_int(rows[i][j]))
    }

    pub fn at(&self, r: usize, c: usize) -> &Coefficient {
        &self.a[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Coefficient) {
        self.a[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let d = self.a[0].domain();
        CMat::from_fn(d, self.rows, other.cols, |r, c| {
            let mut acc = d.zero();
            for k in 0..self.cols {
                acc = acc
                    .add(&self.at(r, k).mul(other.at(k, c)).unwrap())
                    .unwrap();
            }
            acc
        })
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let d = self.a[0].domain();
        CMat::from_fn(d, self.rows, self.cols, |r, c| {
            self.at(r, c).add(other.at(r, c)).unwrap()
        })
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let d = self.a[0].domain();
        CMat::from_fn(d, self.rows, self.cols, |r, c| {
            self.at(r, c).sub(other.at(r, c)).unwrap()
        })
    }

    pub fn scale(&self, s: &Coefficient) -> CMat {
        let d = self.a[0].domain();
        CMat::from_fn(d, self.rows, self.cols, |r, c| {
            self.at(r, c).mul(s).unwrap()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|v| v.is_zero())
    }

    pub fn row(&self, r: usize) -> Vec<Coefficient> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Coefficient> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn apply(&self, v: &[Coefficient]) -> Vec<Coefficient> {
        assert_eq!(self.cols, v.len());
        let d = self.a[0].domain();
        (0..self.rows)
            .map(|r| {
                let mut acc = d.zero();
                for c in 0..self.cols {
                    acc = acc.add(&self.at(r, c).mul(&v[c]).unwrap()).unwrap();
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(pr) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    let x = self.at(pr, c).clone();
                    let y = self.at(row, c).clone();
                    self.set(pr, c, y);
                    self.set(row, c, x);
                }
            }
            let inv = self.at(row, col).inv().unwrap();
            for c in 0..self.cols {
                let v = self.at(row, c).mul(&inv).unwrap();
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let f = self.at(r, col).clone();
                    for c in 0..self.cols {
                        let s = f.mul(self.at(row, c)).unwrap();
                        let v = self.at(r, c).sub(&s).unwrap();
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {v : M v = 0}, as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<Coefficient>> {
        let d = self.a[0].domain();
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![d.zero(); self.cols];
            v[free] = d.one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = m.at(prow, free).neg();
            }
            basis.push(v);
        }
        basis
    }
}

/// A subspace of coordinate space, stored as a reduced row-echelon basis
/// (canonical: equal subspaces compare equal).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    pub ambient: usize,
    domain: CoeffDomain,
    /// rref rows, no zero rows
    basis: CMat,
}

impl Subspace {
    pub fn zero(d: CoeffDomain, ambient: usize) -> Self {
        Subspace {
            ambient,
            domain: d,
            basis: CMat::zero(d, 0, ambient),
        }
    }

    pub fn from_vectors(d: CoeffDomain, ambient: usize, vecs: &[Vec<Coefficient>]) -> Self {
        if vecs.is_empty() {
            return Self::zero(d, ambient);
        }
        let mut m = CMat::from_fn(d, vecs.len(), ambient, |r, c| vecs[r][c].clone());
        let pivots = m.rref();
        let rank = pivots.len();
        let basis = CMat::from_fn(d, rank, ambient, |r, c| m.at(r, c).clone());
        Subspace {
            ambient,
            domain: d,
            basis,
        }
    }

    pub fn full(d: CoeffDomain, ambient: usize) -> Self {
        let vecs: Vec<Vec<Coefficient>> = (0..ambient)
            .map(|i| {
                let mut v = vec![d.zero(); ambient];
                v[i] = d.one();
                v
            })
            .collect();
        Self::from_vectors(d, ambient, &vecs)
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Coefficient>> {
        (0..self.basis.rows).map(|r| self.basis.row(r)).collect()
    }

    pub fn contains(&self, v: &[Coefficient]) -> bool {
        // rank does not grow when v is appended
        let mut vecs = self.basis_vectors();
        vecs.push(v.to_vec());
        Self::from_vectors(self.domain, self.ambient, &vecs).dim() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vecs = self.basis_vectors();
        vecs.extend(other.basis_vectors());
        Self::from_vectors(self.domain, self.ambient, &vecs)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // x in both spans: x = a^T A = b^T B; kernel of [A^T | -B^T]
        let (da, db) = (self.dim(), other.dim());
        if da == 0 || db == 0 {
            return Self::zero(self.domain, self.ambient);
        }
        let m = CMat::from_fn(self.domain, self.ambient, da + db, |r, c| {
            if c < da {
                self.basis.at(c, r).clone()
            } else {
                other.basis.at(c - da, r).neg()
            }
        });
        let kernel = m.kernel_basis();
        let vecs: Vec<Vec<Coefficient>> = kernel
            .iter()
            .map(|k| {
                let mut v = vec![self.domain.zero(); self.ambient];
                for (i, coef) in k.iter().take(da).enumerate() {
                    for c in 0..self.ambient {
                        let s = coef.mul(self.basis.at(i, c)).unwrap();
                        v[c] = v[c].add(&s).unwrap();
                    }
                }
                v
            })
            .collect();
        Self::from_vectors(self.domain, self.ambient, &vecs)
    }
}
