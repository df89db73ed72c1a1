//! Residue field arithmetic. Elements of F_q are indices 0..q; for prime
//! q these are residues, for q = 4 the index e = a + 2b encodes a + b*x in
//! F_2[x]/(x^2 + x + 1).

use super::FieldError;

#[derive(Clone, Debug)]
pub struct Fq {
    q: u8,
    p: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
    inv: Vec<u8>,
    neg: Vec<u8>,
}

impl Fq {
    pub fn new(q: u64) -> Result<Fq, FieldError> {
        let (q, p) = match q {
            2 => (2u8, 2u8),
            3 => (3, 3),
            4 => (4, 2),
            _ => {
                return Err(FieldError::BadParameter(format!(
                    "q = {q} unsupported (want 2, 3 or 4)"
                )))
            }
        };
        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                if q == 4 {
                    // polynomial arithmetic mod x^2 + x + 1 over F_2
                    add[a * n + b] = (a ^ b) as u8;
                    let (a0, a1) = (a & 1, a >> 1);
                    let (b0, b1) = (b & 1, b >> 1);
                    let c0 = a0 * b0;
                    let c1 = a0 * b1 + a1 * b0;
                    let c2 = a1 * b1; // x^2 = x + 1
                    mul[a * n + b] = (((c0 + c2) & 1) + 2 * ((c1 + c2) & 1)) as u8;
                } else {
                    add[a * n + b] = ((a + b) % n) as u8;
                    mul[a * n + b] = ((a * b) % n) as u8;
                }
            }
        }
        let mut inv = vec![0u8; n];
        let mut neg = vec![0u8; n];
        for a in 1..n {
            for b in 1..n {
                if mul[a * n + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b as u8;
                }
            }
        }
        Ok(Fq {
            q,
            p,
            add,
            mul,
            inv,
            neg,
        })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    /// Residue characteristic p.
    pub fn characteristic(&self) -> u8 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; panics on zero (callers check).
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero residue");
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q
    }

    pub fn units(&self) -> impl Iterator<Item = u8> {
        1..self.q
    }
}

/// Determinant of a square residue matrix (row-major, size n).
pub fn fq_det(fq: &Fq, n: usize, a: &[u8]) -> u8 {
    let mut m = a.to_vec();
    let mut det = 1u8;
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return 0;
        };
        if pr != col {
            for c in 0..n {
                m.swap(pr * n + c, col * n + c);
            }
            det = fq.neg(det);
        }
        let piv = m[col * n + col];
        det = fq.mul(det, piv);
        let piv_inv = fq.inv(piv);
        for r in (col + 1)..n {
            let factor = fq.mul(m[r * n + col], piv_inv);
            if factor != 0 {
                for c in col..n {
                    let sub = fq.mul(factor, m[col * n + c]);
                    m[r * n + c] = fq.sub(m[r * n + c], sub);
                }
            }
        }
    }
    det
}

pub fn fq_mat_mul(fq: &Fq, n: usize, a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = fq.add(out[i * n + j], fq.mul(aik, b[k * n + j]));
            }
        }
    }
    out
}

pub fn fq_mat_inv(fq: &Fq, n: usize, a: &[u8]) -> Option<Vec<u8>> {
    let mut m = a.to_vec();
    let mut inv = vec![0u8; n * n];
    for i in 0..n {
        inv[i * n + i] = 1;
    }
    for col in 0..n {
        let pr = (col..n).find(|&r| m[r * n + col] != 0)?;
        if pr != col {
            for c in 0..n {
                m.swap(pr * n + c, col * n + c);
                inv.swap(pr * n + c, col * n + c);
            }
        }
        let piv_inv = fq.inv(m[col * n + col]);
        for c in 0..n {
            m[col * n + c] = fq.mul(m[col * n + c], piv_inv);
            inv[col * n + c] = fq.mul(inv[col * n + c], piv_inv);
        }
        for r in 0..n {
            if r != col && m[r * n + col] != 0 {
                let f = m[r * n + col];
                for c in 0..n {
                    let s1 = fq.mul(f, m[col * n + c]);
                    m[r * n + c] = fq.sub(m[r * n + c], s1);
                    let s2 = fq.mul(f, inv[col * n + c]);
                    inv[r * n + c] = fq.sub(inv[r * n + c], s2);
                }
            }
        }
    }
    Some(inv)
}

/// All invertible n x n residue matrices, in lexicographic entry order.
pub fn gl_elements(fq: &Fq, n: usize) -> Vec<Vec<u8>> {
    let q = fq.q() as usize;
    let total = q.pow((n * n) as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut m = vec![0u8; n * n];
        let mut c = code;
        for e in m.iter_mut() {
            *e = (c % q) as u8;
            c /= q;
        }
        if fq_det(fq, n, &m) != 0 {
            out.push(m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_is_a_field() {
        let f = Fq::new(4).unwrap();
        assert_eq!(f.characteristic(), 2);
        for a in f.elements() {
            assert_eq!(f.add(a, a), 0); // char 2
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for b in f.elements() {
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        // x * (x+1) = x^2 + x = 1
        assert_eq!(f.mul(2, 3), 1);
    }

    #[test]
    fn gl_orders() {
        // |GL_2(F_q)| = (q^2-1)(q^2-q), |GL_3(F_2)| = 168
        let f2 = Fq::new(2).unwrap();
        assert_eq!(gl_elements(&f2, 2).len(), 6);
        assert_eq!(gl_elements(&f2, 3).len(), 168);
        let f3 = Fq::new(3).unwrap();
        assert_eq!(gl_elements(&f3, 2).len(), 48);
        let f4 = Fq::new(4).unwrap();
        assert_eq!(gl_elements(&f4, 2).len(), 180);
    }

    #[test]
    fn fq_inverse_roundtrip() {
        let f3 = Fq::new(3).unwrap();
        for m in gl_elements(&f3, 2) {
            let inv = fq_mat_inv(&f3, 2, &m).unwrap();
            let prod = fq_mat_mul(&f3, 2, &m, &inv);
            assert_eq!(prod, vec![1, 0, 0, 1]);
        }
    }
}
