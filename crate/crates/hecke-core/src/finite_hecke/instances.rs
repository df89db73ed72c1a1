//! Concrete (G, H, sigma) instances and irreducible representations used
//! by the finite-algebra verifiers and the CLI demos.

use super::group::{FiniteGroup, Subgroup};
use super::linalg::CMat;
use super::rep::Rep;
use super::FhError;
use crate::coeff::CoeffDomain;

pub struct Instance {
    pub name: String,
    pub group: FiniteGroup,
    pub h: Subgroup,
    pub sigma: Rep,
    /// Irreducible (over the rationals) G-representations for crafting
    /// test objects, with names.
    pub irreducibles: Vec<(String, Rep)>,
}

fn perm_parity(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The three irreducible representations of S_3 with integer matrices,
/// pulled back through the given permutation realization.
fn s3_irreducibles(
    group: &FiniteGroup,
    perms: &[Vec<usize>],
    domain: CoeffDomain,
) -> Result<Vec<(String, Rep)>, FhError> {
    let carrier: Vec<usize> = (0..group.order()).collect();
    let trivial = Rep::trivial(domain, carrier.clone());
    let sign = Rep::character(domain, carrier.clone(), |e| perm_parity(&perms[e]));
    // standard representation on the basis (e1-e2, e2-e3)
    let std_mat = |p: &[usize]| -> CMat {
        // matrix of the permutation action in that basis: columns are the
        // images of the basis vectors
        let image = |v: [i64; 3]| -> [i64; 3] {
            // permute coordinates: (p v)_i = v_{p^{-1}(i)}; build via sum
            let mut out = [0i64; 3];
            for (i, &x) in v.iter().enumerate() {
                out[p[i] - 1] += x;
            }
            out
        };
        let to_coords = |v: [i64; 3]| -> [i64; 2] {
            // v must have coordinate sum zero: v = a(e1-e2) + b(e2-e3)
            // means v1 = a, v2 = b - a, v3 = -b
            [v[0], -v[2]]
        };
        let c1 = to_coords(image([1, -1, 0]));
        let c2 = to_coords(image([0, 1, -1]));
        CMat::from_int_rows(
            domain,
            &[vec![c1[0], c2[0]], vec![c1[1], c2[1]]],
        )
    };
    let mats: Vec<CMat> = carrier.iter().map(|&e| std_mat(&perms[e])).collect();
    let std = Rep::new(domain, carrier, 2, mats, group)?;
    Ok(vec![
        ("trivial".into(), trivial),
        ("sign".into(), sign),
        ("standard".into(), std),
    ])
}

/// (S_3, S_2, sigma) with sigma the trivial or the sign character of the
/// order-2 subgroup generated by the first transposition.
pub fn s3_instance(domain: CoeffDomain, sigma_sign: bool) -> Result<Instance, FhError> {
    let (group, perms) = FiniteGroup::symmetric(3);
    let s1 = perms.iter().position(|p| p == &vec![2, 1, 3]).unwrap();
    let h = Subgroup::generated_by(&group, &[s1]);
    let sigma = if sigma_sign {
        Rep::character(domain, h.elems.clone(), |e| if e == 0 { 1 } else { -1 })
    } else {
        Rep::trivial(domain, h.elems.clone())
    };
    let irreducibles = s3_irreducibles(&group, &perms, domain)?;
    Ok(Instance {
        name: format!("s3-s2-{}", if sigma_sign { "sign" } else { "trivial" }),
        group,
        h,
        sigma,
        irreducibles,
    })
}

/// (GL_2(F_2), Borel, trivial): the Borel subgroup is the upper
/// triangular invertible matrices. Irreducibles come from the action on
/// the three nonzero vectors of F_2^2, which identifies the group with
/// S_3.
pub fn gl2f2_instance(domain: CoeffDomain) -> Result<Instance, FhError> {
    let (group, mats) = FiniteGroup::gl2(2);
    let borel: Vec<usize> = mats
        .iter()
        .enumerate()
        .filter(|(_, m)| m[2] == 0)
        .map(|(k, _)| k)
        .collect();
    let h = Subgroup::generated_by(&group, &borel);
    let sigma = Rep::trivial(domain, h.elems.clone());
    // permutation of the nonzero vectors 1 = (0,1), 2 = (1,0), 3 = (1,1)
    let vecs = [[0u8, 1], [1, 0], [1, 1]];
    let act = |m: &[u8; 4], v: &[u8; 2]| -> [u8; 2] {
        [
            (m[0] * v[0] + m[1] * v[1]) % 2,
            (m[2] * v[0] + m[3] * v[1]) % 2,
        ]
    };
    let perms: Vec<Vec<usize>> = mats
        .iter()
        .map(|m| {
            vecs.iter()
                .map(|v| {
                    let w = act(m, v);
                    vecs.iter().position(|x| *x == w).unwrap() + 1
                })
                .collect()
        })
        .collect();
    let irreducibles = s3_irreducibles(&group, &perms, domain)?;
    Ok(Instance {
        name: "gl2f2-borel-trivial".into(),
        group,
        h,
        sigma,
        irreducibles,
    })
}

impl Instance {
    pub fn irreducible(&self, name: &str) -> &Rep {
        &self
            .irreducibles
            .iter()
            .find(|(n, _)| n == name)
            .unwrap_or_else(|| panic!("no irreducible named {name}"))
            .1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_irreducibles_are_representations() {
        // Rep::new validates multiplicativity; dims are 1, 1, 2
        let inst = s3_instance(CoeffDomain::Rational, false).unwrap();
        let dims: Vec<usize> = inst.irreducibles.iter().map(|(_, r)| r.dim).collect();
        assert_eq!(dims, vec![1, 1, 2]);
    }

    #[test]
    fn gl2f2_borel_has_order_two() {
        let inst = gl2f2_instance(CoeffDomain::Rational).unwrap();
        assert_eq!(inst.group.order(), 6);
        assert_eq!(inst.h.order(), 2);
    }
}
