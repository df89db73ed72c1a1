//! Elements of F_q((t)) known to finite precision.
//!
//! A value stores the first exponent `lead` at which a nonzero coefficient
//! can occur, the coefficients known from there on, and an `exact` flag.
//! With `exact` set the value IS the stored Laurent polynomial; otherwise
//! nothing is known at exponents >= lead + coeffs.len(). A nonzero stored
//! window starts with a nonzero coefficient, so the valuation of such a
//! value is exact rather than a lower bound. Arithmetic never fabricates
//! unknown coefficients: the known window of a result is derived from the
//! inputs' windows and valuations.

use super::fq::Fq;
use super::FieldError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedLaurent {
    lead: i64,
    coeffs: Vec<u8>,
    exact: bool,
}

/// What is known about a valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Val {
    /// Certified finite valuation (leading coefficient nonzero).
    Exact(i64),
    /// Exactly zero.
    Zero,
    /// All known coefficients vanish; the value is O(t^k) but may be
    /// anything beyond the known window.
    AtLeast(i64),
}

impl TruncatedLaurent {
    fn normalized(mut lead: i64, mut coeffs: Vec<u8>, exact: bool) -> Self {
        let nz = coeffs.iter().position(|&c| c != 0);
        match nz {
            Some(k) => {
                if k > 0 {
                    coeffs.drain(..k);
                    lead += k as i64;
                }
                if exact {
                    while coeffs.last() == Some(&0) {
                        coeffs.pop();
                    }
                }
                TruncatedLaurent {
                    lead,
                    coeffs,
                    exact,
                }
            }
            None => {
                if exact {
                    TruncatedLaurent {
                        lead: 0,
                        coeffs: Vec::new(),
                        exact: true,
                    }
                } else {
                    TruncatedLaurent {
                        lead: lead + coeffs.len() as i64,
                        coeffs: Vec::new(),
                        exact: false,
                    }
                }
            }
        }
    }

    pub fn zero() -> Self {
        TruncatedLaurent {
            lead: 0,
            coeffs: Vec::new(),
            exact: true,
        }
    }

    pub fn one() -> Self {
        TruncatedLaurent {
            lead: 0,
            coeffs: vec![1],
            exact: true,
        }
    }

    /// Exact monomial c * t^k.
    pub fn monomial(c: u8, k: i64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            TruncatedLaurent {
                lead: k,
                coeffs: vec![c],
                exact: true,
            }
        }
    }

    pub fn residue(c: u8) -> Self {
        Self::monomial(c, 0)
    }

    /// Exact Laurent polynomial with coefficients starting at t^lead.
    pub fn poly(lead: i64, coeffs: Vec<u8>) -> Self {
        Self::normalized(lead, coeffs, true)
    }

    /// A value known only to be O(t^bound).
    pub fn unknown_beyond(bound: i64) -> Self {
        TruncatedLaurent {
            lead: bound,
            coeffs: Vec::new(),
            exact: false,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.exact && self.coeffs.is_empty()
    }

    /// Certified-nonzero test: Some(false) means some known coefficient is
    /// nonzero, Some(true) means exactly zero, None means undecidable.
    pub fn is_identically_zero(&self) -> Option<bool> {
        if !self.coeffs.is_empty() {
            Some(false)
        } else if self.exact {
            Some(true)
        } else {
            None
        }
    }

    pub fn val(&self) -> Val {
        if !self.coeffs.is_empty() {
            Val::Exact(self.lead)
        } else if self.exact {
            Val::Zero
        } else {
            Val::AtLeast(self.lead)
        }
    }

    /// Exponent below which every coefficient is known. `None` means
    /// everything is known (exact value).
    pub fn known_to(&self) -> Option<i64> {
        if self.exact {
            None
        } else {
            Some(self.lead + self.coeffs.len() as i64)
        }
    }

    /// Coefficient at exponent k, when known.
    pub fn coeff_at(&self, k: i64) -> Option<u8> {
        if k < self.lead {
            Some(0)
        } else if k < self.lead + self.coeffs.len() as i64 {
            Some(self.coeffs[(k - self.lead) as usize])
        } else if self.exact {
            Some(0)
        } else {
            None
        }
    }

    /// Whether all coefficients at exponents < k vanish; None if that
    /// depends on unknown coefficients.
    pub fn is_zero_below(&self, k: i64) -> Option<bool> {
        match self.val() {
            Val::Zero => Some(true),
            Val::Exact(v) => Some(v >= k),
            Val::AtLeast(b) => {
                if b >= k {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    /// Forgets exactness and truncates knowledge to exponents < k.
    pub fn truncate_knowledge(&self, k: i64) -> Self {
        let keep = (k - self.lead).clamp(0, self.coeffs.len() as i64) as usize;
        Self::normalized(self.lead, self.coeffs[..keep].to_vec(), false)
    }

    pub fn add(&self, other: &Self, fq: &Fq) -> Self {
        let known = match (self.known_to(), other.known_to()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i64::MAX).min(b.unwrap_or(i64::MAX))),
        };
        let lo = self.lead.min(other.lead);
        let hi = match known {
            None => (self.lead + self.coeffs.len() as i64).max(other.lead + other.coeffs.len() as i64),
            Some(k) => k,
        };
        let mut coeffs = Vec::new();
        for e in lo..hi {
            let a = self.coeff_at(e).expect("within known window");
            let b = other.coeff_at(e).expect("within known window");
            coeffs.push(fq.add(a, b));
        }
        Self::normalized(lo, coeffs, known.is_none())
    }

    pub fn neg(&self, fq: &Fq) -> Self {
        TruncatedLaurent {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|&c| fq.neg(c)).collect(),
            exact: self.exact,
        }
    }

    pub fn sub(&self, other: &Self, fq: &Fq) -> Self {
        self.add(&other.neg(fq), fq)
    }

    pub fn mul(&self, other: &Self, fq: &Fq) -> Self {
        if self.is_exactly_zero() || other.is_exactly_zero() {
            return Self::zero();
        }
        let lead = self.lead + other.lead;
        let known = match (self.known_to(), other.known_to()) {
            (None, None) => None,
            (ka, kb) => {
                let via_a = ka.map(|k| k + other.lead).unwrap_or(i64::MAX);
                let via_b = kb.map(|k| k + self.lead).unwrap_or(i64::MAX);
                Some(via_a.min(via_b))
            }
        };
        let hi = match known {
            None => lead + (self.coeffs.len() + other.coeffs.len()).max(1) as i64 - 1,
            Some(k) => k,
        };
        let len = (hi - lead).max(0) as usize;
        let mut coeffs = vec![0u8; len];
        for (ia, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (ib, &cb) in other.coeffs.iter().enumerate() {
                let e = ia + ib;
                if e < len {
                    coeffs[e] = fq.add(coeffs[e], fq.mul(ca, cb));
                }
            }
        }
        Self::normalized(lead, coeffs, known.is_none())
    }

    /// Multiplicative inverse, expanded to `target_len` coefficients when
    /// the input is exact (a polynomial inverts to an infinite series).
    pub fn inv(&self, fq: &Fq, target_len: usize) -> Result<Self, FieldError> {
        match self.val() {
            Val::Zero => Err(FieldError::NotInvertible),
            Val::AtLeast(_) => Err(FieldError::PrecisionExhausted),
            Val::Exact(v) => {
                let avail = if self.exact {
                    target_len.max(1)
                } else {
                    self.coeffs.len()
                };
                let u = &self.coeffs;
                let u0inv = fq.inv(u[0]);
                let mut r = vec![0u8; avail];
                r[0] = u0inv;
                for k in 1..avail {
                    let mut acc = 0u8;
                    for i in 1..=k {
                        let ui = if i < u.len() { u[i] } else { 0 };
                        acc = fq.add(acc, fq.mul(ui, r[k - i]));
                    }
                    r[k] = fq.neg(fq.mul(u0inv, acc));
                }
                let exact = self.exact && self.coeffs.len() == 1;
                if exact {
                    Ok(Self::normalized(-v, vec![u0inv], true))
                } else {
                    Ok(Self::normalized(-v, r, false))
                }
            }
        }
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: i64) -> Self {
        if self.coeffs.is_empty() && self.exact {
            return self.clone();
        }
        TruncatedLaurent {
            lead: self.lead + k,
            coeffs: self.coeffs.clone(),
            exact: self.exact,
        }
    }
}

impl std::fmt::Display for TruncatedLaurent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_exactly_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = self.lead + k as i64;
            if !first {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => {
                    if c == 1 {
                        write!(f, "t")?
                    } else {
                        write!(f, "{c}*t")?
                    }
                }
                _ => {
                    if c == 1 {
                        write!(f, "t^{e}")?
                    } else {
                        write!(f, "{c}*t^{e}")?
                    }
                }
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        if !self.exact {
            write!(f, " + O(t^{})", self.lead + self.coeffs.len() as i64)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn f2() -> Fq {
        Fq::new(2).unwrap()
    }

    #[test]
    fn monomial_cancellation() {
        let fq = f2();
        let t = TruncatedLaurent::monomial(1, 1);
        let tinv = TruncatedLaurent::monomial(1, -1);
        assert_eq!(t.mul(&tinv, &fq), TruncatedLaurent::one());
    }

    #[test]
    fn geometric_series_inverse() {
        let fq = f2();
        // (1 + t) * (1 + t + t^2 + ...) = 1 at available precision
        let a = TruncatedLaurent::poly(0, vec![1, 1]);
        let inv = a.inv(&fq, 6).unwrap();
        let prod = a.mul(&inv, &fq);
        assert_eq!(prod.is_zero_below(0), Some(true));
        assert_eq!(prod.coeff_at(0), Some(1));
        for k in 1..5 {
            assert_eq!(prod.coeff_at(k), Some(0), "coefficient at t^{k}");
        }
    }

    #[test]
    fn valuation_additivity_randomized() {
        let fq = Fq::new(3).unwrap();
        let mut rng = Rng::new(99);
        for _ in 0..300 {
            let va = rng.below(7) as i64 - 3;
            let vb = rng.below(7) as i64 - 3;
            let mut ca = vec![1 + rng.below(2) as u8];
            let mut cb = vec![1 + rng.below(2) as u8];
            for _ in 0..rng.below(4) {
                ca.push(rng.below(3) as u8);
            }
            for _ in 0..rng.below(4) {
                cb.push(rng.below(3) as u8);
            }
            let a = TruncatedLaurent::poly(va, ca);
            let b = TruncatedLaurent::poly(vb, cb);
            match a.mul(&b, &fq).val() {
                Val::Exact(v) => assert_eq!(v, va + vb),
                other => panic!("expected exact valuation, got {other:?}"),
            }
        }
    }

    #[test]
    fn unknown_windows_tracked() {
        let fq = f2();
        let a = TruncatedLaurent::poly(0, vec![1, 1, 1]).truncate_knowledge(3);
        assert_eq!(a.known_to(), Some(3));
        let b = TruncatedLaurent::poly(0, vec![1]);
        let s = a.add(&b, &fq);
        // 1+1 = 0 in F_2, so the sum's certified window starts at t
        assert_eq!(s.val(), Val::Exact(1));
        assert_eq!(s.known_to(), Some(3));
        // full cancellation leaves an O(t^3) value, not a claimed zero
        let d = a.sub(&a, &fq);
        assert_eq!(d.val(), Val::AtLeast(3));
        assert_eq!(d.is_zero_below(4), None);
        assert_eq!(d.is_zero_below(3), Some(true));
    }

    #[test]
    fn zero_inverse_errors() {
        let fq = f2();
        assert_eq!(
            TruncatedLaurent::zero().inv(&fq, 4),
            Err(FieldError::NotInvertible)
        );
        assert_eq!(
            TruncatedLaurent::unknown_beyond(2).inv(&fq, 4),
            Err(FieldError::PrecisionExhausted)
        );
    }
}
