//! Root system of GL_n in type A and the symmetric group acting on it:
//! roots, length, minimal coset representatives, and the index sets
//! A/B/P'/P/Q(w, alpha) that drive the conjugation identity
//! w tau_i w^{-1} = tau_P^{-1} tau_Q.
//!
//! Indices are 1-based throughout: roots are alpha_{ij} with
//! 1 <= i != j <= n, simple roots are alpha_{i,i+1} identified with
//! i in {1..n-1}. Composition of permutations is (w*v)(i) = w(v(i)),
//! e.g. s1*s2 in S_3 maps 1->2->... concretely (s1*s2)(2) = s1(3) = 3.

use std::fmt;

use crate::report::Check;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeylError {
    InvalidSimpleRoot,
    NotMinimalRepresentative,
}

impl fmt::Display for WeylError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeylError::InvalidSimpleRoot => write!(f, "root is not simple"),
            WeylError::NotMinimalRepresentative => {
                write!(f, "permutation is not minimal in its coset")
            }
        }
    }
}

impl std::error::Error for WeylError {}

/// A permutation of {1..n}, stored by images: `images[k-1] = w(k)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm{:?}", self.images)
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            assert!(v >= 1 && v <= n && !seen[v], "not a permutation of 1..n");
            seen[v] = true;
        }
        Permutation { images }
    }

    /// The simple transposition s_i = (i, i+1), 1 <= i <= n-1.
    pub fn simple(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n);
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(i - 1, i);
        Permutation { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// (self * other)(i) = self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        Permutation {
            images: (1..=self.n()).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for i in 1..=self.n() {
            images[self.apply(i) - 1] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// Coxeter length = inversion count.
    pub fn length(&self) -> usize {
        let n = self.n();
        let mut inv = 0;
        for i in 1..n {
            for j in (i + 1)..=n {
                if self.apply(i) > self.apply(j) {
                    inv += 1;
                }
            }
        }
        inv
    }

    /// w . alpha_{ij} = alpha_{w(i) w(j)}.
    pub fn act(&self, root: &Root) -> Root {
        Root::new(self.apply(root.i), self.apply(root.j))
    }

    /// Right multiplication by s_i, i.e. swap of images at positions i, i+1.
    pub fn times_simple(&self, i: usize) -> Permutation {
        let mut images = self.images.clone();
        images.swap(i - 1, i);
        Permutation { images }
    }
}

/// All permutations of {1..n} in lexicographic image order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut images: Vec<usize> = (1..=n).collect();
    loop {
        out.push(Permutation {
            images: images.clone(),
        });
        // next_permutation
        let Some(k) = (0..n - 1).rev().find(|&k| images[k] < images[k + 1]) else {
            break;
        };
        let l = (k + 1..n).rev().find(|&l| images[l] > images[k]).unwrap();
        images.swap(k, l);
        images[k + 1..].reverse();
    }
    out
}

/// A root alpha_{ij}, i != j; positive iff i < j, simple iff j = i + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn new(i: usize, j: usize) -> Self {
        assert!(i != j && i >= 1 && j >= 1);
        Root { i, j }
    }

    pub fn simple(i: usize) -> Self {
        Root { i, j: i + 1 }
    }

    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }

    pub fn is_simple(&self) -> bool {
        self.j == self.i + 1
    }

    /// Index i for a simple root alpha_{i,i+1}.
    pub fn simple_index(&self) -> Result<usize, WeylError> {
        if self.is_simple() {
            Ok(self.i)
        } else {
            Err(WeylError::InvalidSimpleRoot)
        }
    }

    pub fn negate(&self) -> Root {
        Root {
            i: self.j,
            j: self.i,
        }
    }
}

pub fn positive_roots(n: usize) -> Vec<Root> {
    let mut v = Vec::new();
    for i in 1..n {
        for j in (i + 1)..=n {
            v.push(Root::new(i, j));
        }
    }
    v
}

/// A subset P of the simple roots, encoded as a subset of {1..n-1}.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SimpleSubset {
    n: usize,
    mask: u32,
}

impl fmt::Debug for SimpleSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{:?}", self.indices())
    }
}

impl SimpleSubset {
    pub fn empty(n: usize) -> Self {
        SimpleSubset { n, mask: 0 }
    }

    pub fn full(n: usize) -> Self {
        SimpleSubset {
            n,
            mask: (1u32 << (n - 1)) - 1,
        }
    }

    pub fn from_indices(n: usize, idx: &[usize]) -> Self {
        let mut mask = 0u32;
        for &i in idx {
            assert!(i >= 1 && i < n);
            mask |= 1 << (i - 1);
        }
        SimpleSubset { n, mask }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i < self.n && self.mask & (1 << (i - 1)) != 0
    }

    pub fn indices(&self) -> Vec<usize> {
        (1..self.n).filter(|&i| self.contains(i)).collect()
    }

    /// The complement P-hat of P in Sigma.
    pub fn complement(&self) -> SimpleSubset {
        SimpleSubset {
            n: self.n,
            mask: !self.mask & ((1u32 << (self.n - 1)) - 1),
        }
    }

    /// All subsets of Sigma for rank n.
    pub fn all(n: usize) -> Vec<SimpleSubset> {
        (0u32..(1 << (n - 1)))
            .map(|mask| SimpleSubset { n, mask })
            .collect()
    }

    /// Positive roots generated by P: alpha_{ij} with every simple root
    /// between i and j in P.
    pub fn phi_plus(&self) -> Vec<Root> {
        positive_roots(self.n)
            .into_iter()
            .filter(|r| (r.i..r.j).all(|k| self.contains(k)))
            .collect()
    }

    /// Psi_P^+ = Phi^+ minus Phi_P^+.
    pub fn psi_plus(&self) -> Vec<Root> {
        positive_roots(self.n)
            .into_iter()
            .filter(|r| !(r.i..r.j).all(|k| self.contains(k)))
            .collect()
    }

    /// Partition of {1..n} into the consecutive blocks glued by P.
    pub fn blocks(&self) -> Vec<std::ops::RangeInclusive<usize>> {
        let mut out = Vec::new();
        let mut start = 1;
        for i in 1..self.n {
            if !self.contains(i) {
                out.push(start..=i);
                start = i + 1;
            }
        }
        out.push(start..=self.n);
        out
    }

    /// Elements of the standard parabolic subgroup W_P (block permutations).
    pub fn subgroup(&self) -> Vec<Permutation> {
        let mut elems = vec![Permutation::identity(self.n)];
        // closure under the generators s_i, i in P
        let gens: Vec<Permutation> = self
            .indices()
            .iter()
            .map(|&i| Permutation::simple(self.n, i))
            .collect();
        let mut seen: std::collections::HashSet<Permutation> = elems.iter().cloned().collect();
        let mut frontier = elems.clone();
        while let Some(w) = frontier.pop() {
            for g in &gens {
                let wg = w.compose(g);
                if seen.insert(wg.clone()) {
                    elems.push(wg.clone());
                    frontier.push(wg);
                }
            }
        }
        elems.sort();
        elems
    }
}

/// The unique element of minimal length in w W_P, computed by greedy
/// descent: right-multiply by s_i (i in P) while that shortens w.
pub fn min_coset_rep(w: &Permutation, p: &SimpleSubset) -> Permutation {
    let mut cur = w.clone();
    loop {
        // l(w s_i) < l(w) iff w(alpha_i) < 0 iff w(i) > w(i+1)
        let mut descended = false;
        for i in p.indices() {
            if cur.apply(i) > cur.apply(i + 1) {
                cur = cur.times_simple(i);
                descended = true;
            }
        }
        if !descended {
            return cur;
        }
    }
}

pub fn is_min_coset_rep(w: &Permutation, p: &SimpleSubset) -> bool {
    p.indices().iter().all(|&i| w.apply(i) < w.apply(i + 1))
}

/// The index sets attached to (w, alpha) for a simple root
/// alpha = alpha_{i,i+1}:
///   A = { w(j) : i+1 <= j <= n },  B = { w(j)-1 : i+1 <= j <= n },
///   P' = A \ B,  Q = B \ A,  P = P' restricted to {1..n-1}.
/// P' may contain n (dropped in P since tau_n = 1) and Q may contain 0
/// (tau_0 = uniformizer times the identity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PqSets {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub p_prime: Vec<usize>,
    pub p: SimpleSubset,
    pub q: Vec<usize>,
}

pub fn pq_sets(w: &Permutation, alpha: &Root) -> Result<PqSets, WeylError> {
    let i = alpha.simple_index()?;
    let n = w.n();
    assert!(i < n);
    let a: Vec<usize> = ((i + 1)..=n).map(|j| w.apply(j)).collect();
    let b: Vec<usize> = a.iter().map(|&v| v - 1).collect();
    let in_a = |v: usize| a.contains(&v);
    let in_b = |v: usize| b.contains(&v);
    let mut p_prime: Vec<usize> = a.iter().copied().filter(|&v| !in_b(v)).collect();
    let mut q: Vec<usize> = b.iter().copied().filter(|&v| !in_a(v)).collect();
    p_prime.sort_unstable();
    q.sort_unstable();
    let p_idx: Vec<usize> = p_prime.iter().copied().filter(|&v| v < n).collect();
    let mut a_sorted = a.clone();
    a_sorted.sort_unstable();
    let mut b_sorted = b;
    b_sorted.sort_unstable();
    Ok(PqSets {
        a: a_sorted,
        b: b_sorted,
        p_prime,
        p: SimpleSubset::from_indices(n, &p_idx),
        q,
    })
}

/// Checks sum_{h=i+1}^{n} (h - w(h)) = l(w) for w minimal in w W_{alpha-hat}.
pub fn length_displacement_identity(w: &Permutation, alpha: &Root) -> Result<bool, WeylError> {
    let i = alpha.simple_index()?;
    let n = w.n();
    let alpha_hat = SimpleSubset::from_indices(n, &[i]).complement();
    if !is_min_coset_rep(w, &alpha_hat) {
        return Err(WeylError::NotMinimalRepresentative);
    }
    let sum: i64 = ((i + 1)..=n).map(|h| h as i64 - w.apply(h) as i64).sum();
    Ok(sum == w.length() as i64)
}

fn count_in(roots: &[Root], pred: impl Fn(&Root) -> bool) -> usize {
    roots.iter().filter(|r| pred(r)).count()
}

/// Exhaustive identities for one rank. Each named check scans all of W
/// (and all P or alpha where quantified) and fails on the first mismatch.
pub fn verify_identities(n: usize, brute_coset_uniqueness: bool) -> Vec<Check> {
    let mut checks = Vec::new();
    let all = all_permutations(n);
    let pos = positive_roots(n);

    // l(w) = |Phi+ ∩ w Phi-| = |Phi- ∩ w Phi+|
    let mut ok = true;
    let mut detail = format!("{} permutations", all.len());
    for w in &all {
        let lw = w.length();
        let winv = w.inverse();
        // Phi+ ∩ w Phi- = positive roots whose w-preimage is negative
        let c1 = count_in(&pos, |r| !winv.act(r).is_positive());
        // Phi- ∩ w Phi+ = negatives of positive roots whose preimage is positive
        let c2 = count_in(&pos, |r| winv.act(&r.negate()).is_positive());
        if lw != c1 || lw != c2 {
            ok = false;
            detail = format!("mismatch at {w:?}: l={lw}, |Phi+∩wPhi-|={c1}, |Phi-∩wPhi+|={c2}");
            break;
        }
    }
    checks.push(Check::of("length_equals_inversion_sets", ok, detail));

    // step rule: l(w s_a) = l(w) +/- 1 by the sign of w(alpha)
    let mut ok = true;
    let mut detail = String::new();
    'outer: for w in &all {
        for i in 1..n {
            let alpha = Root::simple(i);
            let ws = w.times_simple(i);
            let expect = if w.act(&alpha).is_positive() {
                w.length() + 1
            } else {
                w.length() - 1
            };
            if ws.length() != expect {
                ok = false;
                detail = format!("step rule fails at {w:?}, alpha_{i}");
                break 'outer;
            }
        }
    }
    checks.push(Check::of(
        "length_step_rule",
        ok,
        if detail.is_empty() {
            format!("all w in S_{n}, all simple roots")
        } else {
            detail
        },
    ));

    // minimal coset representatives: idempotent, constant on cosets,
    // unique length minimizer, length additivity
    let mut ok = true;
    let mut detail = String::new();
    'outer2: for p in SimpleSubset::all(n) {
        let wp = p.subgroup();
        for w in &all {
            let m = min_coset_rep(w, &p);
            if min_coset_rep(&m, &p) != m {
                ok = false;
                detail = format!("not idempotent at {w:?}, {p:?}");
                break 'outer2;
            }
            for u in &wp {
                if min_coset_rep(&w.compose(u), &p) != m {
                    ok = false;
                    detail = format!("not constant on coset at {w:?}, {p:?}");
                    break 'outer2;
                }
            }
            // minimality against the whole coset
            if brute_coset_uniqueness {
                let mut min_len = usize::MAX;
                let mut argmins = 0;
                for u in &wp {
                    let wu = w.compose(u);
                    if wu.length() < min_len {
                        min_len = wu.length();
                        argmins = 1;
                    } else if wu.length() == min_len {
                        argmins += 1;
                    }
                }
                if m.length() != min_len || argmins != 1 {
                    ok = false;
                    detail = format!("minimizer not unique at {w:?}, {p:?}");
                    break 'outer2;
                }
            }
            // l(m w') = l(m) + l(w') for w' in W_P
            for u in &wp {
                if m.compose(u).length() != m.length() + u.length() {
                    ok = false;
                    detail = format!("length additivity fails at {w:?}, {p:?}");
                    break 'outer2;
                }
            }
            // m alpha > 0 for alpha in Phi_P^+
            for r in p.phi_plus() {
                if !m.act(&r).is_positive() {
                    ok = false;
                    detail = format!("minimal rep sends {r:?} negative at {w:?}, {p:?}");
                    break 'outer2;
                }
            }
        }
    }
    checks.push(Check::of(
        "minimal_coset_representatives",
        ok,
        if detail.is_empty() {
            format!(
                "all P, all w in S_{n}{}",
                if brute_coset_uniqueness {
                    ", brute-force uniqueness"
                } else {
                    ""
                }
            )
        } else {
            detail
        },
    ));

    // displacement sum identity for minimal w
    let mut ok = true;
    let mut detail = String::new();
    'outer3: for i in 1..n {
        let alpha = Root::simple(i);
        let alpha_hat = SimpleSubset::from_indices(n, &[i]).complement();
        for w in &all {
            if !is_min_coset_rep(w, &alpha_hat) {
                continue;
            }
            match length_displacement_identity(w, &alpha) {
                Ok(true) => {}
                _ => {
                    ok = false;
                    detail = format!("displacement identity fails at {w:?}, alpha_{i}");
                    break 'outer3;
                }
            }
        }
    }
    checks.push(Check::of(
        "length_displacement_sum",
        ok,
        if detail.is_empty() {
            format!("all alpha, all minimal w in S_{n}")
        } else {
            detail
        },
    ));

    // Phi+ ∩ w Psi_{alpha-hat}^- = Phi+ ∩ w Phi- for minimal w
    let mut ok = true;
    let mut detail = String::new();
    'outer4: for i in 1..n {
        let alpha_hat = SimpleSubset::from_indices(n, &[i]).complement();
        let psi_minus: Vec<Root> = alpha_hat.psi_plus().iter().map(|r| r.negate()).collect();
        for w in &all {
            if !is_min_coset_rep(w, &alpha_hat) {
                continue;
            }
            let mut lhs: Vec<Root> = psi_minus
                .iter()
                .map(|r| w.act(r))
                .filter(|r| r.is_positive())
                .collect();
            let mut rhs: Vec<Root> = positive_roots(n)
                .iter()
                .map(|r| w.act(&r.negate()))
                .filter(|r| r.is_positive())
                .collect();
            lhs.sort_unstable();
            rhs.sort_unstable();
            if lhs != rhs {
                ok = false;
                detail = format!("root-set identity fails at {w:?}, alpha_{i}");
                break 'outer4;
            }
        }
    }
    checks.push(Check::of(
        "roots_lemma_specialization",
        ok,
        if detail.is_empty() {
            format!("all alpha, all minimal w in S_{n}")
        } else {
            detail
        },
    ));

    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_examples() {
        assert_eq!(Permutation::identity(3).length(), 0);
        assert_eq!(Permutation::simple(3, 1).length(), 1);
        // s1 s2 has images (2 3 1): inversions (1,3),(2,3)
        let s1s2 = Permutation::simple(3, 1).compose(&Permutation::simple(3, 2));
        assert_eq!(s1s2.images(), &[2, 3, 1]);
        assert_eq!(s1s2.length(), 2);
    }

    #[test]
    fn act_examples() {
        let id = Permutation::identity(3);
        assert_eq!(id.act(&Root::new(1, 2)), Root::new(1, 2));
        let s1 = Permutation::simple(3, 1);
        assert_eq!(s1.act(&Root::new(1, 2)), Root::new(2, 1));
        let s2 = Permutation::simple(3, 2);
        assert_eq!(s2.act(&Root::new(1, 3)), Root::new(1, 2));
    }

    #[test]
    fn min_rep_examples() {
        let n = 3;
        let w = Permutation::simple(n, 1);
        // P empty: representative is w itself
        assert_eq!(min_coset_rep(&w, &SimpleSubset::empty(n)), w);
        // s1 in W_{1}: representative is the identity
        let p = SimpleSubset::from_indices(n, &[1]);
        assert_eq!(min_coset_rep(&w, &p), Permutation::identity(n));
    }

    #[test]
    fn min_rep_brute_force_small() {
        for n in 2..=5 {
            for p in SimpleSubset::all(n) {
                let wp = p.subgroup();
                for w in all_permutations(n) {
                    let m = min_coset_rep(&w, &p);
                    let best = wp.iter().map(|u| w.compose(u).length()).min().unwrap();
                    assert_eq!(m.length(), best);
                }
            }
        }
    }

    #[test]
    fn pq_sets_identity_case() {
        for n in 2..=6 {
            for i in 1..n {
                let sets = pq_sets(&Permutation::identity(n), &Root::simple(i)).unwrap();
                assert_eq!(sets.a, ((i + 1)..=n).collect::<Vec<_>>());
                assert_eq!(sets.b, (i..n).collect::<Vec<_>>());
                assert_eq!(sets.p_prime, vec![n]);
                assert!(sets.p.indices().is_empty());
                assert_eq!(sets.q, vec![i]);
            }
        }
    }

    #[test]
    fn pq_sets_simple_reflection() {
        // (s_i, alpha_i) with 1 < i < n-1 gives P = {i}, Q = {i-1, i+1}
        let n = 5;
        for i in 2..(n - 1) {
            let sets = pq_sets(&Permutation::simple(n, i), &Root::simple(i)).unwrap();
            assert_eq!(sets.p.indices(), vec![i]);
            assert_eq!(sets.q, vec![i - 1, i + 1]);
        }
    }

    #[test]
    fn displacement_identity_rejects_non_minimal() {
        // s2 is not minimal in s2 W_{alpha1-hat} when alpha = alpha_1? s2
        // fixes 1,2 order... use w = s1 s2 with alpha = alpha_2 instead:
        // minimality fails whenever w(i) > w(i+1) for some i != alpha index.
        let w = Permutation::from_images(vec![3, 1, 2]);
        // alpha_hat for alpha_1 is {2}; w(2)=1 < w(3)=2 so w IS minimal here.
        assert!(length_displacement_identity(&w, &Root::simple(1)).is_ok());
        let bad = Permutation::from_images(vec![1, 3, 2]);
        // alpha_hat for alpha_1 is {2}; bad(2)=3 > bad(3)=2: not minimal.
        assert_eq!(
            length_displacement_identity(&bad, &Root::simple(1)),
            Err(WeylError::NotMinimalRepresentative)
        );
    }

    #[test]
    fn exhaustive_identities_small() {
        for n in 2..=4 {
            let checks = verify_identities(n, true);
            for c in &checks {
                assert!(c.passed(), "{}: {}", c.name, c.detail);
            }
        }
    }
}
