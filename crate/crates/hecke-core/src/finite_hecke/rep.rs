//! Matrix representations of finite groups and subgroups, and compact
//! induction. A representation stores one exact matrix per element of
//! its domain (the whole group or a subgroup); multiplicativity is
//! checked at construction.

use std::collections::HashMap;

use super::group::{right_transversal, FiniteGroup, Subgroup};
use super::linalg::CMat;
use super::FhError;
use crate::coeff::CoeffDomain;

#[derive(Clone, Debug)]
pub struct Rep {
    pub domain: CoeffDomain,
    pub dim: usize,
    /// Sorted element ids this representation is defined on.
    pub carrier: Vec<usize>,
    pos: HashMap<usize, usize>,
    mats: Vec<CMat>,
}

impl Rep {
    pub fn new(
        domain: CoeffDomain,
        carrier: Vec<usize>,
        dim: usize,
        mats: Vec<CMat>,
        group: &FiniteGroup,
    ) -> Result<Self, FhError> {
        assert_eq!(carrier.len(), mats.len());
        let pos: HashMap<usize, usize> = carrier.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let rep = Rep {
            domain,
            dim,
            carrier,
            pos,
            mats,
        };
        // rho(1) = I and rho(gh) = rho(g) rho(h) whenever g, h, gh are
        // all in the carrier
        if *rep.of(0) != CMat::identity(domain, dim) {
            return Err(FhError::NotMultiplicative);
        }
        for &a in &rep.carrier {
            for &b in &rep.carrier {
                let ab = group.mul(a, b);
                if rep.pos.contains_key(&ab) && rep.of(a).mul(rep.of(b)) != *rep.of(ab) {
                    return Err(FhError::NotMultiplicative);
                }
            }
        }
        Ok(rep)
    }

    pub fn of(&self, elem: usize) -> &CMat {
        &self.mats[self.pos[&elem]]
    }

    pub fn defined_on(&self, elem: usize) -> bool {
        self.pos.contains_key(&elem)
    }

    pub fn trivial(domain: CoeffDomain, carrier: Vec<usize>) -> Self {
        let pos = carrier.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let mats = vec![CMat::identity(domain, 1); carrier.len()];
        Rep {
            domain,
            dim: 1,
            carrier,
            pos,
            mats,
        }
    }

    /// One-dimensional representation from a character table entry.
    pub fn character(
        domain: CoeffDomain,
        carrier: Vec<usize>,
        chi: impl Fn(usize) -> i64,
    ) -> Self {
        let pos: HashMap<usize, usize> = carrier.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let mats = carrier
            .iter()
            .map(|&e| CMat::from_int_rows(domain, &[vec![chi(e)]]))
            .collect();
        Rep {
            domain,
            dim: 1,
            carrier,
            pos,
            mats,
        }
    }

    /// Restriction to a smaller carrier.
    pub fn restrict(&self, elems: &[usize]) -> Rep {
        let mats = elems.iter().map(|&e| self.of(e).clone()).collect();
        let pos = elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        Rep {
            domain: self.domain,
            dim: self.dim,
            carrier: elems.to_vec(),
            pos,
            mats,
        }
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        assert_eq!(self.carrier, other.carrier);
        let dim = self.dim + other.dim;
        let mats = self
            .carrier
            .iter()
            .map(|&e| {
                let (a, b) = (self.of(e), other.of(e));
                CMat::from_fn(self.domain, dim, dim, |r, c| {
                    if r < self.dim && c < self.dim {
                        a.at(r, c).clone()
                    } else if r >= self.dim && c >= self.dim {
                        b.at(r - self.dim, c - self.dim).clone()
                    } else {
                        self.domain.zero()
                    }
                })
            })
            .collect();
        Rep {
            domain: self.domain,
            dim,
            carrier: self.carrier.clone(),
            pos: self.pos.clone(),
            mats,
        }
    }

    /// The conjugate sigma^g on H^g = g^{-1} H g: sigma^g(x) = sigma(g x g^{-1}).
    pub fn conjugate(&self, group: &FiniteGroup, g: usize) -> Rep {
        let ginv = group.inv(g);
        let carrier: Vec<usize> = self
            .carrier
            .iter()
            .map(|&h| group.mul(group.mul(ginv, h), g))
            .collect();
        let mats: Vec<CMat> = carrier
            .iter()
            .map(|&x| self.of(group.mul(group.mul(g, x), ginv)).clone())
            .collect();
        let pos = carrier.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        Rep {
            domain: self.domain,
            dim: self.dim,
            carrier,
            pos,
            mats,
        }
    }
}

/// The compactly induced representation ind_H^G(sigma), realized on the
/// basis e_{c,v} = x_c^{-1}.i_{e_v} indexed by right-coset representatives
/// x_c of H\G and basis vectors of V_sigma. The element i_v corresponds
/// to c = 0 (the coset of the identity).
pub struct Induced {
    pub rep: Rep,
    pub rcoset_reps: Vec<usize>,
    pub dim_sigma: usize,
}

/// Index of the basis vector (coset c, sigma-coordinate v).
pub fn induced_index(dim_sigma: usize, c: usize, v: usize) -> usize {
    c * dim_sigma + v
}

pub fn induce(g: &FiniteGroup, h: &Subgroup, sigma: &Rep) -> Result<Induced, FhError> {
    let d = sigma.domain;
    let reps = right_transversal(g, h);
    let dim = reps.len() * sigma.dim;
    // factor y = h' x_c once per group element
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut hpart = vec![0usize; g.order()];
    for (c, &xc) in reps.iter().enumerate() {
        for &k in &h.elems {
            let y = g.mul(k, xc);
            coset_of[y] = c;
            hpart[y] = k;
        }
    }
    let mut mats = Vec::with_capacity(g.order());
    for y in 0..g.order() {
        // pi(y) e_{c,v}: supported on H x_c y^{-1} = H x_{c'} with
        // x_c y^{-1} = h' x_{c'}; the new sigma-coordinate is sigma(h')^{-1} v
        let yinv = g.inv(y);
        let mut m = CMat::zero(d, dim, dim);
        for (c, &xc) in reps.iter().enumerate() {
            let target = g.mul(xc, yinv);
            let c2 = coset_of[target];
            let hp = hpart[target];
            let shinv = sigma.of(g.inv(hp));
            for v in 0..sigma.dim {
                for w in 0..sigma.dim {
                    m.set(
                        induced_index(sigma.dim, c2, w),
                        induced_index(sigma.dim, c, v),
                        shinv.at(w, v).clone(),
                    );
                }
            }
        }
        mats.push(m);
    }
    let carrier: Vec<usize> = (0..g.order()).collect();
    let rep = Rep::new(d, carrier, dim, mats, g)?;
    Ok(Induced {
        rep,
        rcoset_reps: reps,
        dim_sigma: sigma.dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_regular_for_trivial_subgroup() {
        // ind_1^C3(triv) is the regular representation
        let g = FiniteGroup::cyclic(3);
        let h = Subgroup::generated_by(&g, &[]);
        let sigma = Rep::trivial(CoeffDomain::Rational, vec![0]);
        let ind = induce(&g, &h, &sigma).unwrap();
        assert_eq!(ind.rep.dim, 3);
        // permutation matrices with no fixed basis vector off the identity
        for e in 1..3 {
            let m = ind.rep.of(e);
            for i in 0..3 {
                assert!(m.at(i, i).is_zero());
            }
        }
    }

    #[test]
    fn induced_dimension_s3() {
        let (s3, perms) = FiniteGroup::symmetric(3);
        let s1 = perms.iter().position(|p| p == &vec![2, 1, 3]).unwrap();
        let h = Subgroup::generated_by(&s3, &[s1]);
        let sigma = Rep::trivial(CoeffDomain::Rational, h.elems.clone());
        let ind = induce(&s3, &h, &sigma).unwrap();
        assert_eq!(ind.rep.dim, 3);
    }
}
