//! The commutative monoid Delta of dominant uniformizer-power diagonals,
//! its group closure, and the extended affine Weyl group of GL_n realized
//! as monomial matrices with entries t^k. An element stores a permutation
//! w and an exponent vector e; the matrix has t^{e_j} in row w(j),
//! column j, so multiplication is the semidirect-product law
//! (w1,e1)(w2,e2) = (w1 w2, e) with e_j = e1_{w2(j)} + e2_j.

use std::collections::HashMap;
use std::fmt;

use crate::report::Check;
use crate::weyl::{
    all_permutations, is_min_coset_rep, pq_sets, Permutation, Root, SimpleSubset,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineError {
    NotInMonoid,
}

impl fmt::Display for AffineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineError::NotInMonoid => write!(f, "element is not in the dominant monoid"),
        }
    }
}

impl std::error::Error for AffineError {}

/// An element of Delta (monoid flag) or of its group closure, stored as
/// the exponents (a_1,...,a_{n-1}) of diag(1, t^{a_1}, ..., t^{a_{n-1}}).
/// Monoid elements satisfy 0 <= a_1 <= ... <= a_{n-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaElement {
    exps: Vec<i64>,
    monoid: bool,
}

impl DeltaElement {
    pub fn monoid(exps: Vec<i64>) -> Result<Self, AffineError> {
        let mut prev = 0i64;
        for &a in &exps {
            if a < prev {
                return Err(AffineError::NotInMonoid);
            }
            prev = a;
        }
        Ok(DeltaElement { exps, monoid: true })
    }

    pub fn group(exps: Vec<i64>) -> Self {
        DeltaElement {
            exps,
            monoid: false,
        }
    }

    /// The generator tau_i = diag(I_i, t I_{n-i}) for 1 <= i <= n-1.
    pub fn tau(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n);
        let exps = (1..n).map(|j| if j >= i { 1 } else { 0 }).collect();
        DeltaElement { exps, monoid: true }
    }

    pub fn one(n: usize) -> Self {
        DeltaElement {
            exps: vec![0; n - 1],
            monoid: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.exps.len() + 1
    }

    pub fn is_monoid(&self) -> bool {
        self.monoid
    }

    /// Full diagonal valuation vector (0, a_1, ..., a_{n-1}).
    pub fn valuations(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.rank());
        v.push(0);
        v.extend_from_slice(&self.exps);
        v
    }

    /// Exponents i_alpha in the factorization tau = prod tau_alpha^{i_alpha}:
    /// i_k = a_k - a_{k-1} with a_0 = 0.
    pub fn tau_exponents(&self) -> Vec<i64> {
        let mut prev = 0;
        self.exps
            .iter()
            .map(|&a| {
                let c = a - prev;
                prev = a;
                c
            })
            .collect()
    }

    /// P(tau) = set of simple roots whose tau-exponent vanishes.
    pub fn p_of_tau(&self) -> Result<SimpleSubset, AffineError> {
        if !self.monoid {
            return Err(AffineError::NotInMonoid);
        }
        let n = self.rank();
        let idx: Vec<usize> = self
            .tau_exponents()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(k, _)| k + 1)
            .collect();
        Ok(SimpleSubset::from_indices(n, &idx))
    }

    pub fn mul(&self, other: &DeltaElement) -> DeltaElement {
        assert_eq!(self.rank(), other.rank());
        DeltaElement {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            monoid: self.monoid && other.monoid,
        }
    }

    pub fn to_ext(&self) -> ExtAffineElement {
        ExtAffineElement::from_exps(self.valuations())
    }
}

/// A monomial matrix with entries t^{e_j} at (w(j), j).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtAffineElement {
    perm: Permutation,
    exps: Vec<i64>,
}

impl fmt::Debug for ExtAffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}; t^{:?}]", self.perm, self.exps)
    }
}

impl ExtAffineElement {
    pub fn identity(n: usize) -> Self {
        ExtAffineElement {
            perm: Permutation::identity(n),
            exps: vec![0; n],
        }
    }

    pub fn from_perm(perm: Permutation) -> Self {
        let n = perm.n();
        ExtAffineElement {
            perm,
            exps: vec![0; n],
        }
    }

    pub fn from_exps(exps: Vec<i64>) -> Self {
        let n = exps.len();
        ExtAffineElement {
            perm: Permutation::identity(n),
            exps,
        }
    }

    /// tau_i for 0 <= i <= n: a diagonal with i leading 1s and n-i trailing
    /// t's. tau_n is the identity and tau_0 is t times the identity.
    pub fn tau(n: usize, i: usize) -> Self {
        assert!(i <= n);
        ExtAffineElement::from_exps((0..n).map(|j| if j >= i { 1 } else { 0 }).collect())
    }

    /// Product of tau_x over x in the index set (subset of {0..n}).
    pub fn tau_set(n: usize, xs: &[usize]) -> Self {
        xs.iter()
            .fold(ExtAffineElement::identity(n), |acc, &x| {
                acc.mul(&ExtAffineElement::tau(n, x))
            })
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    /// Valuation of the entry in column j (1-based); the row is perm(j).
    pub fn col_exp(&self, j: usize) -> i64 {
        self.exps[j - 1]
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.is_identity()
    }

    pub fn mul(&self, other: &ExtAffineElement) -> ExtAffineElement {
        assert_eq!(self.n(), other.n());
        let n = self.n();
        let perm = self.perm.compose(&other.perm);
        let exps = (1..=n)
            .map(|j| self.exps[other.perm.apply(j) - 1] + other.exps[j - 1])
            .collect();
        ExtAffineElement { perm, exps }
    }

    pub fn inverse(&self) -> ExtAffineElement {
        let n = self.n();
        let perm = self.perm.inverse();
        // entry of the inverse in column j is t^{-e_{w^{-1}(j)}}
        let exps = (1..=n).map(|j| -self.exps[perm.apply(j) - 1]).collect();
        ExtAffineElement { perm, exps }
    }
}

/// Relations of the presentation of the extended affine Weyl group on
/// s_1..s_{n-1} and tau = tau_{n-1}, checked in the monomial-matrix model,
/// plus a bounded-length injectivity check of the word-to-matrix map
/// modulo the rewriting closure of those relations.
pub struct PresentationReport {
    pub checks: Vec<Check>,
    pub words_checked: usize,
}

/// The defining relations alone, checked in the monomial model.
pub fn verify_presentation_relations(n: usize) -> Vec<Check> {
    assert!(n >= 2);
    let mut checks = Vec::new();
    let s: Vec<ExtAffineElement> = (1..n)
        .map(|i| ExtAffineElement::from_perm(Permutation::simple(n, i)))
        .collect();
    let tau = ExtAffineElement::tau(n, n - 1);

    // s_i s_j = s_j s_i for |i-j| > 1
    let mut ok = true;
    for i in 1..n {
        for j in 1..n {
            if i + 1 < j && s[i - 1].mul(&s[j - 1]) != s[j - 1].mul(&s[i - 1]) {
                ok = false;
            }
        }
    }
    checks.push(Check::of("commuting_reflections", ok, "s_i s_j = s_j s_i, |i-j|>1"));

    // braid relations
    let mut ok = true;
    for i in 1..(n - 1) {
        let lhs = s[i - 1].mul(&s[i]).mul(&s[i - 1]);
        let rhs = s[i].mul(&s[i - 1]).mul(&s[i]);
        if lhs != rhs {
            ok = false;
        }
    }
    checks.push(Check::of("braid_relations", ok, "s_i s_{i+1} s_i = s_{i+1} s_i s_{i+1}"));

    // involutions
    let mut ok = true;
    for si in &s {
        if si.mul(si) != ExtAffineElement::identity(n) {
            ok = false;
        }
    }
    checks.push(Check::of("involutions", ok, "s_i^2 = 1"));

    // tau commutes with s_i for i != n-1
    let mut ok = true;
    for i in 1..(n - 1) {
        if tau.mul(&s[i - 1]) != s[i - 1].mul(&tau) {
            ok = false;
        }
    }
    checks.push(Check::of("tau_commutes", ok, "tau s_i = s_i tau, i != n-1"));

    // tau s tau s = s tau s tau, both equal to tau_{n-2}
    let sl = &s[n - 2];
    let lhs = tau.mul(sl).mul(&tau).mul(sl);
    let rhs = sl.mul(&tau).mul(sl).mul(&tau);
    let target = ExtAffineElement::tau(n, n - 2);
    checks.push(Check::of(
        "tau_s_braid",
        lhs == rhs && lhs == target,
        "tau s tau s = s tau s tau = tau_{n-2}",
    ));
    checks
}

pub fn verify_presentation(n: usize, max_word_len: usize) -> PresentationReport {
    let mut checks = verify_presentation_relations(n);
    // bounded injectivity of word -> matrix modulo the rewriting closure
    let (ok, words, detail) = bounded_injectivity(n, max_word_len);
    checks.push(Check::of("bounded_word_injectivity", ok, detail));
    PresentationReport {
        checks,
        words_checked: words,
    }
}

/// Letters: 0..n-2 are s_1..s_{n-1}, letter n-1 is tau_{n-1}.
fn letter_matrix(n: usize, letter: u8) -> ExtAffineElement {
    if (letter as usize) < n - 1 {
        ExtAffineElement::from_perm(Permutation::simple(n, letter as usize + 1))
    } else {
        ExtAffineElement::tau(n, n - 1)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

fn bounded_injectivity(n: usize, max_len: usize) -> (bool, usize, String) {
    // Rewriting moves are applied on a slightly longer word universe than
    // the injectivity assertion covers: a join of two length-L words may
    // route through length L+2 (an s_i s_i insertion).
    let closure_len = max_len + 2;
    // enumerate words over the n-letter alphabet up to closure_len
    let alphabet = n as u8;
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    let mut level: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..closure_len {
        let mut next = Vec::new();
        for w in &level {
            for a in 0..alphabet {
                let mut w2 = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        words.extend(next.iter().cloned());
        level = next;
    }
    let index: HashMap<Vec<u8>, usize> = words
        .iter()
        .enumerate()
        .map(|(k, w)| (w.clone(), k))
        .collect();
    let mut uf = UnionFind::new(words.len());

    let tau_letter = (n - 1) as u8;
    let is_s = |a: u8| (a as usize) < n - 1;
    for (k, w) in words.iter().enumerate() {
        // single-position rewrites
        for pos in 0..w.len() {
            // s_i s_i deletion
            if pos + 1 < w.len() && w[pos] == w[pos + 1] && is_s(w[pos]) {
                let mut w2 = w.clone();
                w2.drain(pos..pos + 2);
                uf.union(k, index[&w2]);
            }
            // commutations
            if pos + 1 < w.len() {
                let (a, b) = (w[pos], w[pos + 1]);
                let swap_ok = (is_s(a) && is_s(b) && a.abs_diff(b) > 1)
                    || (a == tau_letter && is_s(b) && (b as usize) + 1 != n - 1)
                    || (b == tau_letter && is_s(a) && (a as usize) + 1 != n - 1);
                if swap_ok {
                    let mut w2 = w.clone();
                    w2.swap(pos, pos + 1);
                    uf.union(k, index[&w2]);
                }
            }
            // braid moves
            if pos + 2 < w.len() {
                let (a, b, c) = (w[pos], w[pos + 1], w[pos + 2]);
                if is_s(a) && is_s(b) && a == c && a.abs_diff(b) == 1 {
                    let mut w2 = w.clone();
                    (w2[pos], w2[pos + 1], w2[pos + 2]) = (b, a, b);
                    uf.union(k, index[&w2]);
                }
            }
            // tau s tau s = s tau s tau with s = s_{n-1}
            if pos + 3 < w.len() && n >= 2 {
                let sl = (n - 2) as u8;
                let seg = &w[pos..pos + 4];
                if seg == [tau_letter, sl, tau_letter, sl] {
                    let mut w2 = w.clone();
                    w2[pos..pos + 4].copy_from_slice(&[sl, tau_letter, sl, tau_letter]);
                    uf.union(k, index[&w2]);
                }
            }
        }
        // s_i s_i insertion
        if w.len() + 2 <= closure_len {
            for pos in 0..=w.len() {
                for a in 0..alphabet {
                    if is_s(a) {
                        let mut w2 = w.clone();
                        w2.splice(pos..pos, [a, a]);
                        uf.union(k, index[&w2]);
                    }
                }
            }
        }
    }

    // group the words of length <= max_len by matrix and require one
    // rewrite class per matrix
    let mut by_matrix: HashMap<ExtAffineElement, Vec<usize>> = HashMap::new();
    let mut assessed = 0usize;
    for (k, w) in words.iter().enumerate() {
        if w.len() > max_len {
            continue;
        }
        assessed += 1;
        let m = w.iter().fold(ExtAffineElement::identity(n), |acc, &a| {
            acc.mul(&letter_matrix(n, a))
        });
        by_matrix.entry(m).or_default().push(k);
    }
    let mut violations = 0usize;
    let mut example = String::new();
    for (_, ks) in &by_matrix {
        let root = uf.find(ks[0]);
        for &k in &ks[1..] {
            if uf.find(k) != root {
                violations += 1;
                if example.is_empty() {
                    example = format!(", e.g. {:?} vs {:?}", words[ks[0]], words[k]);
                }
            }
        }
    }
    (
        violations == 0,
        assessed,
        format!(
            "{} words up to length {}, {} distinct matrices, {} unjoined pairs{}",
            assessed,
            max_len,
            by_matrix.len(),
            violations,
            example
        ),
    )
}

/// Exhaustive check of w tau_i w^{-1} = tau_P^{-1} tau_Q over all simple
/// roots and all minimal-length representatives, in the monomial model.
pub fn verify_conjugation_identity(n: usize) -> Check {
    for i in 1..n {
        let alpha = Root::simple(i);
        let alpha_hat = SimpleSubset::from_indices(n, &[i]).complement();
        for w in all_permutations(n) {
            if !is_min_coset_rep(&w, &alpha_hat) {
                continue;
            }
            let sets = pq_sets(&w, &alpha).unwrap();
            let we = ExtAffineElement::from_perm(w.clone());
            let lhs = we
                .mul(&ExtAffineElement::tau(n, i))
                .mul(&we.inverse());
            let rhs = ExtAffineElement::tau_set(n, &sets.p.indices())
                .inverse()
                .mul(&ExtAffineElement::tau_set(n, &sets.q));
            if lhs != rhs {
                return Check::fail(
                    "conjugation_identity",
                    format!("w tau_i w^-1 != tau_P^-1 tau_Q at {w:?}, alpha_{i}"),
                );
            }
            // the same identity through P' (which may contain n)
            let rhs2 = ExtAffineElement::tau_set(n, &sets.p_prime)
                .inverse()
                .mul(&ExtAffineElement::tau_set(n, &sets.q));
            if lhs != rhs2 {
                return Check::fail(
                    "conjugation_identity",
                    format!("P' variant fails at {w:?}, alpha_{i}"),
                );
            }
        }
    }
    Check::pass(
        "conjugation_identity",
        format!("all alpha, all minimal w, rank {n}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn delta_monoid_validation() {
        assert!(DeltaElement::monoid(vec![0, 1, 1]).is_ok());
        assert!(DeltaElement::monoid(vec![1, 0]).is_err());
        assert!(DeltaElement::monoid(vec![-1, 0]).is_err());
    }

    #[test]
    fn p_of_tau_examples() {
        let n = 4;
        // identity: all exponents vanish
        assert_eq!(
            DeltaElement::one(n).p_of_tau().unwrap(),
            SimpleSubset::full(n)
        );
        // single generator tau_i: P = Sigma minus {alpha_i}
        for i in 1..n {
            let p = DeltaElement::tau(n, i).p_of_tau().unwrap();
            assert_eq!(p, SimpleSubset::from_indices(n, &[i]).complement());
        }
    }

    #[test]
    fn p_of_tau_p_hat() {
        // P(tau_P) = P-hat for every subset P of Sigma
        for n in 2..=5 {
            for p in SimpleSubset::all(n) {
                let tau_p = p
                    .indices()
                    .iter()
                    .fold(DeltaElement::one(n), |acc, &i| {
                        acc.mul(&DeltaElement::tau(n, i))
                    });
                assert_eq!(tau_p.p_of_tau().unwrap(), p.complement());
            }
        }
    }

    #[test]
    fn ext_affine_group_law() {
        let n = 3;
        let id = ExtAffineElement::identity(n);
        let x = ExtAffineElement::tau(n, 1).mul(&ExtAffineElement::from_perm(
            Permutation::simple(n, 2),
        ));
        assert_eq!(x.mul(&id), x);
        assert_eq!(x.mul(&x.inverse()), id);
        // tau generators commute
        for i in 0..=n {
            for j in 0..=n {
                let ti = ExtAffineElement::tau(n, i);
                let tj = ExtAffineElement::tau(n, j);
                assert_eq!(ti.mul(&tj), tj.mul(&ti));
            }
        }
    }

    #[test]
    fn diagonal_words_commute_randomized() {
        let mut rng = Rng::new(11);
        let n = 4;
        for _ in 0..100 {
            let a = ExtAffineElement::from_exps(
                (0..n).map(|_| rng.below(7) as i64 - 3).collect(),
            );
            let b = ExtAffineElement::from_exps(
                (0..n).map(|_| rng.below(7) as i64 - 3).collect(),
            );
            assert_eq!(a.mul(&b), b.mul(&a));
        }
    }

    #[test]
    fn s_tau_s_tau_collapses() {
        // n = 3: tau_2 s_2 tau_2 s_2 = s_2 tau_2 s_2 tau_2 = diag(1,t,t)
        let n = 3;
        let tau = ExtAffineElement::tau(n, 2);
        let s = ExtAffineElement::from_perm(Permutation::simple(n, 2));
        let a = tau.mul(&s).mul(&tau).mul(&s);
        let b = s.mul(&tau).mul(&s).mul(&tau);
        assert_eq!(a, b);
        assert_eq!(a, ExtAffineElement::tau(n, 1));
    }

    #[test]
    fn conjugation_identity_small() {
        for n in 2..=4 {
            let c = verify_conjugation_identity(n);
            assert!(c.passed(), "{}", c.detail);
        }
    }

    #[test]
    fn presentation_small_ranks() {
        for n in 2..=3 {
            let rep = verify_presentation(n, 6);
            for c in &rep.checks {
                assert!(c.passed(), "n={n} {}: {}", c.name, c.detail);
            }
        }
    }
}
