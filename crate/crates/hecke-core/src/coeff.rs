//! Exact coefficient arithmetic: arbitrary-precision rationals and prime
//! fields F_l with l different from the residue characteristic p.
//!
//! Every algebra computation in this crate runs over one of these two
//! domains. Structure constants of the convolution algebras are integer
//! counts, so reducing a rational result mod l must agree with the prime
//! field computation; `Coefficient::reduce_mod` implements that bridge.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Which field the computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffDomain {
    Rational,
    /// F_l for a prime l.
    PrimeField(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffError {
    MixedCoefficientDomains,
    DivisionByZero,
    /// The requested prime-field modulus is not prime, or collides with
    /// the residue characteristic it must avoid.
    BadModulus(u64),
}

impl fmt::Display for CoeffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffError::MixedCoefficientDomains => write!(f, "mixed coefficient domains"),
            CoeffError::DivisionByZero => write!(f, "division by zero"),
            CoeffError::BadModulus(l) => write!(f, "bad prime-field modulus {l}"),
        }
    }
}

impl std::error::Error for CoeffError {}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl CoeffDomain {
    /// Validates the domain against the residue characteristic `p` of the
    /// working local field. Called once at configuration time.
    pub fn validate(&self, p: u64) -> Result<(), CoeffError> {
        match *self {
            CoeffDomain::Rational => Ok(()),
            CoeffDomain::PrimeField(l) => {
                if !is_prime(l) || l == p {
                    Err(CoeffError::BadModulus(l))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn zero(&self) -> Coefficient {
        self.from_int(0)
    }

    pub fn one(&self) -> Coefficient {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> Coefficient {
        match *self {
            CoeffDomain::Rational => Coefficient::Rational(BigRational::from(BigInt::from(k))),
            CoeffDomain::PrimeField(l) => {
                let r = k.rem_euclid(l as i64) as u64;
                Coefficient::PrimeField { ell: l, residue: r }
            }
        }
    }
}

/// An exact field element, either a rational in lowest terms or a residue
/// in [0, l).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficient {
    Rational(BigRational),
    PrimeField { ell: u64, residue: u64 },
}

impl Coefficient {
    pub fn domain(&self) -> CoeffDomain {
        match self {
            Coefficient::Rational(_) => CoeffDomain::Rational,
            Coefficient::PrimeField { ell, .. } => CoeffDomain::PrimeField(*ell),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Rational(r) => r.is_zero(),
            Coefficient::PrimeField { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Rational(r) => r.is_one(),
            Coefficient::PrimeField { residue, .. } => *residue == 1,
        }
    }

    fn same_domain(&self, other: &Coefficient) -> Result<(), CoeffError> {
        if self.domain() == other.domain() {
            Ok(())
        } else {
            Err(CoeffError::MixedCoefficientDomains)
        }
    }

    pub fn add(&self, other: &Coefficient) -> Result<Coefficient, CoeffError> {
        self.same_domain(other)?;
        Ok(match (self, other) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(a + b),
            (
                Coefficient::PrimeField { ell, residue: a },
                Coefficient::PrimeField { residue: b, .. },
            ) => Coefficient::PrimeField {
                ell: *ell,
                residue: (a + b) % ell,
            },
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Coefficient) -> Result<Coefficient, CoeffError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coefficient) -> Result<Coefficient, CoeffError> {
        self.same_domain(other)?;
        Ok(match (self, other) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(a * b),
            (
                Coefficient::PrimeField { ell, residue: a },
                Coefficient::PrimeField { residue: b, .. },
            ) => Coefficient::PrimeField {
                ell: *ell,
                residue: a.checked_mul(*b).expect("modulus too large") % ell,
            },
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Coefficient {
        match self {
            Coefficient::Rational(a) => Coefficient::Rational(-a),
            Coefficient::PrimeField { ell, residue } => Coefficient::PrimeField {
                ell: *ell,
                residue: (ell - residue) % ell,
            },
        }
    }

    pub fn inv(&self) -> Result<Coefficient, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(match self {
            Coefficient::Rational(a) => Coefficient::Rational(a.recip()),
            Coefficient::PrimeField { ell, residue } => Coefficient::PrimeField {
                ell: *ell,
                residue: mod_inv(*residue, *ell),
            },
        })
    }

    pub fn div(&self, other: &Coefficient) -> Result<Coefficient, CoeffError> {
        self.mul(&other.inv()?)
    }

    /// Reduces a rational coefficient mod l. Fails when the denominator is
    /// divisible by l; integer-valued computations never hit that case.
    pub fn reduce_mod(&self, l: u64) -> Result<Coefficient, CoeffError> {
        match self {
            Coefficient::PrimeField { ell, .. } if *ell == l => Ok(self.clone()),
            Coefficient::PrimeField { .. } => Err(CoeffError::MixedCoefficientDomains),
            Coefficient::Rational(r) => {
                let li = BigInt::from(l);
                let den = r.denom() % &li;
                if den.is_zero() {
                    return Err(CoeffError::DivisionByZero);
                }
                let num = ((r.numer() % &li) + &li) % &li;
                let den_u = den
                    .abs()
                    .to_string()
                    .parse::<u64>()
                    .expect("small modulus");
                let den_u = if r.denom().is_negative() {
                    (l - den_u) % l
                } else {
                    den_u
                };
                let num_u = num.to_string().parse::<u64>().expect("small modulus");
                Ok(Coefficient::PrimeField {
                    ell: l,
                    residue: num_u * mod_inv(den_u, l) % l,
                })
            }
        }
    }

    /// Exact decimal-free rendering: `p/q` for rationals, `r mod l` for
    /// prime fields. Used by the JSON export.
    pub fn to_exact_string(&self) -> String {
        match self {
            Coefficient::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Coefficient::PrimeField { ell, residue } => format!("{residue} mod {ell}"),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

fn mod_inv(a: u64, l: u64) -> u64 {
    // extended Euclid on (a, l), l prime
    let (mut r0, mut r1) = (l as i128, (a % l) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "not invertible mod {l}");
    (s0.rem_euclid(l as i128)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn rat(n: i64, d: i64) -> Coefficient {
        Coefficient::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn rational_basics() {
        let half = rat(1, 2);
        let third = rat(1, 3);
        assert_eq!(half.add(&third).unwrap(), rat(5, 6));
        assert_eq!(rat(5, 3).inv().unwrap(), rat(3, 5));
    }

    #[test]
    fn prime_field_basics() {
        let d = CoeffDomain::PrimeField(3);
        let two = d.from_int(2);
        assert_eq!(two.add(&two).unwrap(), d.from_int(1));
        let d5 = CoeffDomain::PrimeField(5);
        assert_eq!(d5.from_int(2).inv().unwrap(), d5.from_int(3));
    }

    #[test]
    fn mixed_domains_rejected() {
        let a = rat(1, 2);
        let b = CoeffDomain::PrimeField(3).from_int(1);
        assert_eq!(a.add(&b), Err(CoeffError::MixedCoefficientDomains));
    }

    #[test]
    fn domain_validation() {
        assert!(CoeffDomain::PrimeField(3).validate(2).is_ok());
        assert!(CoeffDomain::PrimeField(4).validate(2).is_err());
        assert!(CoeffDomain::PrimeField(2).validate(2).is_err());
        assert!(CoeffDomain::Rational.validate(2).is_ok());
    }

    fn random_coeff(rng: &mut Rng, d: CoeffDomain) -> Coefficient {
        match d {
            CoeffDomain::Rational => {
                let n = rng.below(41) as i64 - 20;
                let den = 1 + rng.below(9) as i64;
                rat(n, den)
            }
            CoeffDomain::PrimeField(l) => {
                CoeffDomain::PrimeField(l).from_int(rng.below(l) as i64)
            }
        }
    }

    #[test]
    fn field_axioms_randomized() {
        let mut rng = Rng::new(0x5eed);
        for domain in [CoeffDomain::Rational, CoeffDomain::PrimeField(7)] {
            for _ in 0..200 {
                let a = random_coeff(&mut rng, domain);
                let b = random_coeff(&mut rng, domain);
                let c = random_coeff(&mut rng, domain);
                // associativity and commutativity
                let ab_c = a.add(&b).unwrap().add(&c).unwrap();
                let a_bc = a.add(&b.add(&c).unwrap()).unwrap();
                assert_eq!(ab_c, a_bc);
                assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
                // distributivity
                let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
                let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                // identities
                assert_eq!(a.add(&domain.zero()).unwrap(), a);
                assert_eq!(a.mul(&domain.one()).unwrap(), a);
                if !a.is_zero() {
                    assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
                }
            }
        }
    }

    #[test]
    fn reduction_matches_prime_field() {
        let mut rng = Rng::new(7);
        for _ in 0..200 {
            let k = rng.below(2000) as i64 - 1000;
            let m = rng.below(2000) as i64 - 1000;
            let l = 7u64;
            let dq = CoeffDomain::Rational;
            let dl = CoeffDomain::PrimeField(l);
            let q = dq.from_int(k).mul(&dq.from_int(m)).unwrap();
            let f = dl.from_int(k).mul(&dl.from_int(m)).unwrap();
            assert_eq!(q.reduce_mod(l).unwrap(), f);
        }
    }
}
