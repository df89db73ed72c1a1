//! The module functor Hom_G(ind sigma, -) and the subspace machinery
//! around it: sigma-generated subrepresentations, the four equivalent
//! generation conditions evaluated over an explicitly enumerated
//! submodule lattice, and object-wise equivalence checks.

use super::algebra::FiniteHecke;
use super::group::FiniteGroup;
use super::linalg::{CMat, Subspace};
use super::rep::Rep;
use super::FhError;
use crate::coeff::{CoeffDomain, Coefficient};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Basis of Hom(a, b) equivariant over the given elements: solutions T of
/// T a(g) = b(g) T.
pub fn hom_space(carrier: &[usize], a: &Rep, b: &Rep) -> Vec<CMat> {
    let d = a.domain;
    let (da, db) = (a.dim, b.dim);
    let mut rows: Vec<Vec<Coefficient>> = Vec::new();
    for &g in carrier {
        let ma = a.of(g);
        let mb = b.of(g);
        for r in 0..db {
            for c in 0..da {
                let mut row = vec![d.zero(); db * da];
                for k in 0..da {
                    row[r * da + k] = row[r * da + k].add(ma.at(k, c)).unwrap();
                }
                for k in 0..db {
                    row[k * da + c] = row[k * da + c].sub(mb.at(r, k)).unwrap();
                }
                rows.push(row);
            }
        }
    }
    let m = CMat::from_fn(d, rows.len(), db * da, |r, c| rows[r][c].clone());
    m.kernel_basis()
        .into_iter()
        .map(|v| CMat::from_fn(d, db, da, |r, c| v[r * da + c].clone()))
        .collect()
}

/// V^sigma: the sum of the images of all K-homomorphisms sigma -> V.
pub fn v_sigma(k_elems: &[usize], sigma: &Rep, v: &Rep) -> Subspace {
    let d = v.domain;
    let v_restricted = v.restrict(k_elems);
    let homs = hom_space(k_elems, sigma, &v_restricted);
    let mut vecs = Vec::new();
    for phi in &homs {
        for c in 0..sigma.dim {
            vecs.push(phi.col(c));
        }
    }
    Subspace::from_vectors(d, v.dim, &vecs)
}

/// The subrepresentation generated by a subspace: closure under all
/// rho(g).
pub fn generated_subrep(group: &FiniteGroup, v: &Rep, seed: &Subspace) -> Subspace {
    let mut cur = seed.clone();
    loop {
        let mut vecs = cur.basis_vectors();
        let before = cur.dim();
        for g in 0..group.order() {
            for b in cur.basis_vectors() {
                vecs.push(v.of(g).apply(&b));
            }
        }
        cur = Subspace::from_vectors(v.domain, v.dim, &vecs);
        if cur.dim() == before {
            return cur;
        }
    }
}

/// V[sigma]: the G-representation generated by V^sigma.
pub fn v_generated(
    group: &FiniteGroup,
    k_elems: &[usize],
    sigma: &Rep,
    v: &Rep,
) -> (Subspace, Subspace) {
    let vs = v_sigma(k_elems, sigma, v);
    let gen = generated_subrep(group, v, &vs);
    (vs, gen)
}

/// Hom_G(ind sigma, V) as matrices ind.dim -> V.dim. Errors when the
/// coefficient characteristic divides |K| (the induced representation is
/// then not projective and the functor loses exactness).
pub fn m_sigma(fh: &FiniteHecke, v: &Rep) -> Result<Vec<CMat>, FhError> {
    if let CoeffDomain::PrimeField(l) = fh.domain {
        if fh.h.order() as u64 % l == 0 {
            return Err(FhError::BadCharacteristic {
                ell: l,
                subgroup_order: fh.h.order(),
            });
        }
    }
    let carrier: Vec<usize> = (0..fh.group.order()).collect();
    Ok(hom_space(&carrier, &fh.induced.rep, v))
}

/// The right action of an algebra element on Hom_G(ind sigma, V):
/// phi . Phi = phi ∘ xi(Phi).
pub fn m_sigma_action(fh: &FiniteHecke, phi: &CMat, elem: &super::algebra::FHElem) -> CMat {
    phi.mul(&fh.xi(elem))
}

/// dim Hom_K(sigma, V) and dim Hom_G(ind sigma, V): Frobenius
/// reciprocity says they agree, and both sides here are computed by
/// independent linear solves.
pub fn frobenius_dims(fh: &FiniteHecke, v: &Rep) -> Result<(usize, usize), FhError> {
    let restricted = v.restrict(&fh.h.elems);
    let left = hom_space(&fh.h.elems, &fh.sigma, &restricted).len();
    let right = m_sigma(fh, v)?.len();
    Ok((left, right))
}

/// V[sigma] = sum over psi in M_sigma(V) of psi(ind sigma), as subspaces.
pub fn functor_m_identity(fh: &FiniteHecke, v: &Rep) -> Result<bool, FhError> {
    let (_, vgen) = v_generated(fh.group, &fh.h.elems, &fh.sigma, v);
    let homs = m_sigma(fh, v)?;
    let mut vecs = Vec::new();
    for psi in &homs {
        for c in 0..fh.induced.rep.dim {
            vecs.push(psi.col(c));
        }
    }
    let image_sum = Subspace::from_vectors(v.domain, v.dim, &vecs);
    Ok(image_sum == vgen)
}

/// A submodule lattice of V, with every member canonical.
pub struct Lattice {
    pub members: Vec<Subspace>,
}

/// Enumerates the full submodule lattice.
///
/// Over a prime field: all cyclic submodules from all vectors, closed
/// under sums (complete since every submodule is a sum of cyclics); the
/// vector count l^dim is capped.
///
/// Over the rationals: V is semisimple, so the lattice is finite exactly
/// when V is multiplicity-free, equivalently End_G(V) is commutative; the
/// irreducible summands are split off as eigenspaces of a generic
/// commutant element with integer eigenvalues, and the lattice is the set
/// of partial sums. Anything outside that reach errors LatticeTooLarge.
pub fn submodule_lattice(group: &FiniteGroup, v: &Rep) -> Result<Lattice, FhError> {
    match v.domain {
        CoeffDomain::PrimeField(l) => {
            let count = (l as u128).checked_pow(v.dim as u32);
            match count {
                Some(c) if c <= 1 << 16 => {}
                _ => {
                    return Err(FhError::LatticeTooLarge(format!(
                        "{l}^{} vectors",
                        v.dim
                    )))
                }
            }
            let d = v.domain;
            let mut members: Vec<Subspace> = vec![Subspace::zero(d, v.dim)];
            let total = (l as usize).pow(v.dim as u32);
            for code in 1..total {
                let mut c = code;
                let vec: Vec<Coefficient> = (0..v.dim)
                    .map(|_| {
                        let x = d.from_int((c % l as usize) as i64);
                        c /= l as usize;
                        x
                    })
                    .collect();
                let cyclic = generated_subrep(
                    group,
                    v,
                    &Subspace::from_vectors(d, v.dim, &[vec]),
                );
                if !members.contains(&cyclic) {
                    members.push(cyclic);
                }
            }
            // close under sums
            loop {
                let mut added = false;
                let snapshot = members.clone();
                for a in &snapshot {
                    for b in &snapshot {
                        let s = a.sum(b);
                        if !members.contains(&s) {
                            members.push(s);
                            added = true;
                        }
                    }
                }
                if !added {
                    break;
                }
            }
            Ok(Lattice { members })
        }
        CoeffDomain::Rational => {
            let atoms = rational_irreducible_summands(group, v)?;
            let d = v.domain;
            let mut members = Vec::new();
            for mask in 0u32..(1 << atoms.len()) {
                let mut s = Subspace::zero(d, v.dim);
                for (k, atom) in atoms.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        s = s.sum(atom);
                    }
                }
                if !members.contains(&s) {
                    members.push(s);
                }
            }
            Ok(Lattice { members })
        }
    }
}

/// Splits a rational representation into irreducible summands via the
/// eigenspaces of a generic commutant element; requires a commutative
/// endomorphism algebra with integer spectrum.
fn rational_irreducible_summands(
    group: &FiniteGroup,
    v: &Rep,
) -> Result<Vec<Subspace>, FhError> {
    let d = v.domain;
    let carrier: Vec<usize> = (0..group.order()).collect();
    let ends = hom_space(&carrier, v, v);
    if ends.len() == 1 {
        // V irreducible (or zero)
        return Ok(if v.dim == 0 {
            vec![]
        } else {
            vec![Subspace::full(d, v.dim)]
        });
    }
    for a in &ends {
        for b in &ends {
            if a.mul(b) != b.mul(a) {
                return Err(FhError::LatticeTooLarge(
                    "endomorphism algebra is not commutative (a repeated summand)".into(),
                ));
            }
        }
    }
    // generic element with spread-out integer weights
    let mut z = CMat::zero(d, v.dim, v.dim);
    for (k, e) in ends.iter().enumerate() {
        z = z.add(&e.scale(&d.from_int((k as i64 + 1) * (k as i64 + 2))));
    }
    let eigenvalues = integer_eigenvalues(&z)?;
    let mut atoms = Vec::new();
    let mut total = 0;
    for lam in eigenvalues {
        let shifted = {
            let mut m = z.clone();
            for i in 0..v.dim {
                m.set(i, i, m.at(i, i).sub(&lam).unwrap());
            }
            m
        };
        let kernel = shifted.kernel_basis();
        if kernel.is_empty() {
            continue;
        }
        total += kernel.len();
        atoms.push(Subspace::from_vectors(d, v.dim, &kernel));
    }
    if total != v.dim {
        return Err(FhError::LatticeTooLarge(
            "commutant spectrum does not split over the integers".into(),
        ));
    }
    // each eigenspace must be a submodule; with a commutative commutant
    // it is an irreducible summand
    for atom in &atoms {
        for g in 0..group.order() {
            for b in atom.basis_vectors() {
                if !atom.contains(&v.of(g).apply(&b)) {
                    return Err(FhError::LatticeTooLarge(
                        "eigenspace is not a submodule".into(),
                    ));
                }
            }
        }
    }
    Ok(atoms)
}

/// Candidate integer eigenvalues of an exact rational matrix: integer
/// roots of its characteristic polynomial, found by divisor search.
fn integer_eigenvalues(z: &CMat) -> Result<Vec<Coefficient>, FhError> {
    let n = z.rows;
    let d = CoeffDomain::Rational;
    // characteristic polynomial by exact expansion over minors is
    // wasteful; use the Krylov minimal polynomial of z on each basis
    // vector and collect integer roots of their product's radical
    let mut candidates: Vec<BigInt> = Vec::new();
    for start in 0..n {
        let mut basis_vecs: Vec<Vec<Coefficient>> = Vec::new();
        let mut cur = vec![d.zero(); n];
        cur[start] = d.one();
        loop {
            basis_vecs.push(cur.clone());
            let m = CMat::from_fn(d, basis_vecs.len(), n, |r, c| basis_vecs[r][c].clone());
            if m.rank() < basis_vecs.len() {
                basis_vecs.pop();
                break;
            }
            cur = z.apply(&cur);
        }
        // dependency of z^k cur0 on the previous powers: minimal
        // polynomial coefficients
        let k = basis_vecs.len();
        let mut rows = Vec::new();
        for c in 0..n {
            let mut row: Vec<Coefficient> = (0..k).map(|j| basis_vecs[j][c].clone()).collect();
            row.push({
                let mut v = vec![d.zero(); n];
                v[start] = d.one();
                let mut acc = v;
                for _ in 0..k {
                    acc = z.apply(&acc);
                }
                acc[c].clone()
            });
            rows.push(row);
        }
        let m = CMat::from_fn(d, rows.len(), k + 1, |r, c| rows[r][c].clone());
        let kernel = m.kernel_basis();
        // the kernel contains the coefficient vector (c_0..c_{k-1}, -1)
        for kv in kernel {
            // polynomial x^k - sum c_j x^j (up to scaling): integer roots
            let mut coeffs: Vec<BigRational> = kv
                .iter()
                .map(|c| match c {
                    Coefficient::Rational(r) => r.clone(),
                    _ => unreachable!(),
                })
                .collect();
            // clear denominators
            let mut denom = BigInt::one();
            for c in &coeffs {
                denom = lcm(&denom, c.denom());
            }
            let ints: Vec<BigInt> = coeffs
                .drain(..)
                .map(|c| (c * BigRational::from(denom.clone())).to_integer())
                .collect();
            let constant = ints[0].clone();
            if constant.is_zero() {
                candidates.push(BigInt::zero());
            }
            let bound = constant.abs();
            let mut dvs = divisors(&bound);
            dvs.push(BigInt::zero());
            for dv in dvs {
                for sign in [1i64, -1] {
                    let lam = &dv * BigInt::from(sign);
                    // evaluate polynomial sum ints[j] lam^j
                    let mut acc = BigInt::zero();
                    let mut pw = BigInt::one();
                    for cj in &ints {
                        acc += cj * &pw;
                        pw *= &lam;
                    }
                    if acc.is_zero() && !candidates.contains(&lam) {
                        candidates.push(lam);
                    }
                }
            }
        }
    }
    Ok(candidates
        .into_iter()
        .map(|b| Coefficient::Rational(BigRational::from(b)))
        .collect())
}

fn divisors(b: &BigInt) -> Vec<BigInt> {
    // positive divisors; gives up past a bound large enough for the small
    // commutant spectra that occur here
    let mut out = Vec::new();
    if b.is_zero() {
        return out;
    }
    let cap = BigInt::from(1_000_000u64);
    let abs = b.abs();
    let mut d = BigInt::one();
    while &d * &d <= abs && d <= cap {
        if (&abs % &d).is_zero() {
            out.push(d.clone());
            out.push(&abs / &d);
        }
        d += BigInt::one();
    }
    out
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    let g = gcd(a.clone(), b.clone());
    (a / &g) * b
}

fn gcd(mut a: BigInt, mut b: BigInt) -> BigInt {
    a = a.abs();
    b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Quotient representation W2/W1 for nested submodules.
pub fn subquotient_rep(group: &FiniteGroup, v: &Rep, w2: &Subspace, w1: &Subspace) -> Rep {
    let d = v.domain;
    assert!(w2.contains_subspace(w1));
    // combined basis: w1 rows then a complement of w1 inside w2
    let mut rows = w1.basis_vectors();
    for cand in w2.basis_vectors() {
        let test = Subspace::from_vectors(d, v.dim, &rows);
        if !test.contains(&cand) {
            rows.push(cand);
        }
    }
    let k1 = w1.dim();
    let k2 = w2.dim();
    assert_eq!(rows.len(), k2);
    let basis = CMat::from_fn(d, k2, v.dim, |r, c| rows[r][c].clone());
    // express a vector of w2 in the row basis: solve basis^T x = vec
    let express = |vec: &[Coefficient]| -> Vec<Coefficient> {
        let mut aug = CMat::from_fn(d, v.dim, k2 + 1, |r, c| {
            if c < k2 {
                basis.at(c, r).clone()
            } else {
                vec[r].clone()
            }
        });
        let pivots = aug.rref();
        let mut x = vec![d.zero(); k2];
        for (prow, &pcol) in pivots.iter().enumerate() {
            if pcol < k2 {
                x[pcol] = aug.at(prow, k2).clone();
            }
        }
        x
    };
    let carrier: Vec<usize> = (0..group.order()).collect();
    let mats: Vec<CMat> = carrier
        .iter()
        .map(|&g| {
            let rho = v.of(g);
            CMat::from_fn(d, k2 - k1, k2 - k1, |r, c| {
                // image of complement basis vector c
                let img = rho.apply(&rows[k1 + c]);
                let x = express(&img);
                x[k1 + r].clone()
            })
        })
        .collect();
    Rep::new(d, carrier, k2 - k1, mats, group).expect("quotient is a representation")
}

/// Truth values of the four generation conditions, evaluated over the
/// enumerated lattice. The contract is that all four agree.
pub struct TfaeReport {
    pub conditions: [bool; 4],
    pub lattice_size: usize,
    pub checked_subquotients: usize,
}

impl TfaeReport {
    pub fn agree(&self) -> bool {
        let c = self.conditions;
        c.iter().all(|&x| x == c[0])
    }
}

pub fn check_tfae(fh: &FiniteHecke, v: &Rep) -> Result<TfaeReport, FhError> {
    let lattice = submodule_lattice(fh.group, v)?;
    let members = &lattice.members;
    // all nested pairs (W1 strictly inside W2)
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, w1) in members.iter().enumerate() {
        for (j, w2) in members.iter().enumerate() {
            if w1.dim() < w2.dim() && w2.contains_subspace(w1) {
                pairs.push((i, j));
            }
        }
    }
    let nonzero_m_sigma = |rep: &Rep| -> Result<bool, FhError> {
        Ok(!m_sigma(fh, rep)?.is_empty())
    };
    let equals_generated = |rep: &Rep| -> bool {
        let (_, gen) = v_generated(fh.group, &fh.h.elems, &fh.sigma, rep);
        gen.dim() == rep.dim
    };
    // (i): irreducible subquotients = adjacent pairs in the lattice
    let mut cond_i = true;
    for &(i, j) in &pairs {
        let adjacent = !members.iter().any(|w| {
            w.dim() > members[i].dim()
                && w.dim() < members[j].dim()
                && w.contains_subspace(&members[i])
                && members[j].contains_subspace(w)
        });
        if !adjacent {
            continue;
        }
        let u = subquotient_rep(fh.group, v, &members[j], &members[i]);
        if !nonzero_m_sigma(&u)? {
            cond_i = false;
        }
    }
    // (ii): every nonzero subquotient
    let mut cond_ii = true;
    for &(i, j) in &pairs {
        let w = subquotient_rep(fh.group, v, &members[j], &members[i]);
        if !nonzero_m_sigma(&w)? {
            cond_ii = false;
        }
    }
    // (iii): every subquotient generates itself
    let mut cond_iii = true;
    for &(i, j) in &pairs {
        let w = subquotient_rep(fh.group, v, &members[j], &members[i]);
        if !equals_generated(&w) {
            cond_iii = false;
        }
    }
    // (iv): every subrepresentation generates itself (zero included,
    // vacuously true there)
    let mut cond_iv = true;
    let zero = Subspace::zero(v.domain, v.dim);
    for w in members {
        if w.dim() == 0 {
            continue;
        }
        let rep = subquotient_rep(fh.group, v, w, &zero);
        if !equals_generated(&rep) {
            cond_iv = false;
        }
    }
    Ok(TfaeReport {
        conditions: [cond_i, cond_ii, cond_iii, cond_iv],
        lattice_size: members.len(),
        checked_subquotients: pairs.len(),
    })
}

/// Object-wise equivalence data: for each algebra basis element Phi, the
/// cyclic right module W = Phi H should match Hom_G(ind, xi(Phi) ind)
/// through w -> xi(w), and for each test object V with V = V[sigma] the
/// counit image must be all of V.
pub fn equivalence_checks(
    fh: &FiniteHecke,
    test_objects: &[(&str, Rep)],
) -> Result<Vec<crate::report::Check>, FhError> {
    use crate::report::Check;
    let mut out = Vec::new();
    let basis = fh.basis_elements();
    let d = fh.domain;
    let n = fh.induced.rep.dim;
    // unit on cyclic right ideals
    for (k, phi) in basis.iter().enumerate() {
        // W = phi H: span of phi * basis elements, as xi-matrices
        let xis: Vec<CMat> = basis.iter().map(|b| fh.xi(&fh.convolve(phi, b))).collect();
        let w_dim = {
            let vecs: Vec<Vec<Coefficient>> = xis
                .iter()
                .map(|m| {
                    let mut flat = Vec::with_capacity(n * n);
                    for r in 0..n {
                        flat.extend(m.row(r));
                    }
                    flat
                })
                .collect();
            Subspace::from_vectors(d, n * n, &vecs).dim()
        };
        // X = image of xi(phi) inside the induced representation
        let image = Subspace::from_vectors(
            d,
            n,
            &(0..n).map(|c| fh.xi(phi).col(c)).collect::<Vec<_>>(),
        );
        let zero = Subspace::zero(d, n);
        let x_rep = subquotient_rep(fh.group, &fh.induced.rep, &image, &zero);
        let hom_dim = m_sigma(fh, &x_rep)?.len();
        out.push(Check::of(
            format!("unit_cyclic_module_{k}"),
            w_dim == hom_dim,
            format!("dim Phi*H = {w_dim}, dim Hom(ind, im xi(Phi)) = {hom_dim}"),
        ));
    }
    // counit on test objects
    for (name, v) in test_objects {
        let (_, gen) = v_generated(fh.group, &fh.h.elems, &fh.sigma, v);
        let generated_all = gen.dim() == v.dim;
        let functor_ok = functor_m_identity(fh, v)?;
        out.push(Check::of(
            format!("counit_{name}"),
            generated_all && functor_ok,
            format!(
                "V[sigma] dim {} of {}, image identity {}",
                gen.dim(),
                v.dim,
                functor_ok
            ),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_hecke::group::Subgroup;

    #[test]
    fn trivial_sigma_fixed_vectors() {
        // with the trivial character, V^sigma is the K-fixed subspace
        let (s3, perms) = FiniteGroup::symmetric(3);
        let s1 = perms.iter().position(|p| p == &vec![2, 1, 3]).unwrap();
        let h = Subgroup::generated_by(&s3, &[s1]);
        let sigma = Rep::trivial(CoeffDomain::Rational, h.elems.clone());
        // V = permutation representation of S_3 on 3 points
        let carrier: Vec<usize> = (0..6).collect();
        let mats: Vec<CMat> = carrier
            .iter()
            .map(|&e| {
                let p = &perms[e];
                CMat::from_fn(CoeffDomain::Rational, 3, 3, |r, c| {
                    if p[c] - 1 == r {
                        CoeffDomain::Rational.one()
                    } else {
                        CoeffDomain::Rational.zero()
                    }
                })
            })
            .collect();
        let v = Rep::new(CoeffDomain::Rational, carrier, 3, mats, &s3).unwrap();
        let vs = v_sigma(&h.elems, &sigma, &v);
        // s1-fixed vectors of the permutation representation: x1 = x2
        assert_eq!(vs.dim(), 2);
        let gen = generated_subrep(&s3, &v, &vs);
        assert_eq!(gen.dim(), 3);
    }

    #[test]
    fn lattice_of_permutation_rep() {
        let (s3, perms) = FiniteGroup::symmetric(3);
        let carrier: Vec<usize> = (0..6).collect();
        let mats: Vec<CMat> = carrier
            .iter()
            .map(|&e| {
                let p = &perms[e];
                CMat::from_fn(CoeffDomain::Rational, 3, 3, |r, c| {
                    if p[c] - 1 == r {
                        CoeffDomain::Rational.one()
                    } else {
                        CoeffDomain::Rational.zero()
                    }
                })
            })
            .collect();
        let v = Rep::new(CoeffDomain::Rational, carrier, 3, mats, &s3).unwrap();
        let lat = submodule_lattice(&s3, &v).unwrap();
        // trivial + standard: 0, two atoms, whole = 4 members
        assert_eq!(lat.members.len(), 4);
    }
}
