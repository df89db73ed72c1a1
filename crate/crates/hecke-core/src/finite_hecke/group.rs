//! Finite groups as explicit multiplication tables, with subgroups,
//! cosets and double cosets.

use std::collections::HashMap;

/// Element 0 is always the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    /// Printable labels (permutation images or matrix entries).
    pub labels: Vec<String>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    fn from_table(mul: Vec<u32>, order: usize, labels: Vec<String>) -> Self {
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        assert!(inv.iter().all(|&x| x != u32::MAX), "missing inverses");
        let g = FiniteGroup {
            order,
            mul,
            inv,
            labels,
        };
        g.check_axioms();
        g
    }

    fn check_axioms(&self) {
        let n = self.order;
        for a in 0..n {
            assert_eq!(self.mul(0, a), a);
            assert_eq!(self.mul(a, 0), a);
            assert_eq!(self.mul(a, self.inv(a)), 0);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(
                        self.mul(self.mul(a, b), c),
                        self.mul(a, self.mul(b, c)),
                        "associativity fails"
                    );
                }
            }
        }
    }

    /// Closure of permutation generators (images of 1..degree, 1-based).
    /// Returns the group and the permutation realizing each element.
    pub fn from_perm_gens(degree: usize, gens: &[Vec<usize>]) -> (Self, Vec<Vec<usize>>) {
        let id: Vec<usize> = (1..=degree).collect();
        let compose =
            |a: &[usize], b: &[usize]| -> Vec<usize> { (0..degree).map(|i| a[b[i] - 1]).collect() };
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(id, 0);
        let mut frontier = vec![0usize];
        while let Some(k) = frontier.pop() {
            for g in gens {
                let w = compose(&elems[k], g);
                if !index.contains_key(&w) {
                    index.insert(w.clone(), elems.len());
                    elems.push(w.clone());
                    frontier.push(elems.len() - 1);
                }
            }
        }
        let order = elems.len();
        let mut mul = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                mul[a * order + b] = index[&compose(&elems[a], &elems[b])] as u32;
            }
        }
        let labels = elems.iter().map(|p| format!("{p:?}")).collect();
        (Self::from_table(mul, order, labels), elems)
    }

    /// The symmetric group S_n with its permutations.
    pub fn symmetric(n: usize) -> (Self, Vec<Vec<usize>>) {
        let gens: Vec<Vec<usize>> = (1..n)
            .map(|i| {
                let mut v: Vec<usize> = (1..=n).collect();
                v.swap(i - 1, i);
                v
            })
            .collect();
        Self::from_perm_gens(n, &gens)
    }

    pub fn cyclic(n: usize) -> Self {
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = ((a + b) % n) as u32;
            }
        }
        let labels = (0..n).map(|k| format!("g^{k}")).collect();
        Self::from_table(mul, n, labels)
    }

    /// GL_2 over the prime field F_p (p = 2 or 3), with its matrices.
    pub fn gl2(p: u8) -> (Self, Vec<[u8; 4]>) {
        assert!(p == 2 || p == 3);
        let det = |m: &[u8; 4]| -> u8 {
            ((m[0] as i16 * m[3] as i16 - m[1] as i16 * m[2] as i16).rem_euclid(p as i16)) as u8
        };
        let mut elems: Vec<[u8; 4]> = Vec::new();
        for code in 0..(p as usize).pow(4) {
            let mut c = code;
            let mut m = [0u8; 4];
            for e in m.iter_mut() {
                *e = (c % p as usize) as u8;
                c /= p as usize;
            }
            if det(&m) != 0 {
                elems.push(m);
            }
        }
        // put the identity first
        let id_pos = elems.iter().position(|m| *m == [1, 0, 0, 1]).unwrap();
        elems.swap(0, id_pos);
        let index: HashMap<[u8; 4], usize> =
            elems.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        let order = elems.len();
        let mmul = |a: &[u8; 4], b: &[u8; 4]| -> [u8; 4] {
            let mut out = [0u8; 4];
            for r in 0..2 {
                for c in 0..2 {
                    let mut acc = 0i16;
                    for k in 0..2 {
                        acc += a[r * 2 + k] as i16 * b[k * 2 + c] as i16;
                    }
                    out[r * 2 + c] = (acc.rem_euclid(p as i16)) as u8;
                }
            }
            out
        };
        let mut mul = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                mul[a * order + b] = index[&mmul(&elems[a], &elems[b])] as u32;
            }
        }
        let labels = elems.iter().map(|m| format!("{m:?}")).collect();
        (Self::from_table(mul, order, labels), elems)
    }
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    pub elems: Vec<usize>,
    pos: HashMap<usize, usize>,
}

impl Subgroup {
    pub fn generated_by(g: &FiniteGroup, gens: &[usize]) -> Self {
        let mut elems = vec![0usize];
        let mut seen = vec![false; g.order()];
        seen[0] = true;
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &h in gens {
                let y = g.mul(x, h);
                if !seen[y] {
                    seen[y] = true;
                    elems.push(y);
                    frontier.push(y);
                }
            }
        }
        elems.sort_unstable();
        let pos = elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        Subgroup { elems, pos }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        let elems: Vec<usize> = (0..g.order()).collect();
        let pos = elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        Subgroup { elems, pos }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.pos.contains_key(&e)
    }

    pub fn index_of(&self, e: usize) -> Option<usize> {
        self.pos.get(&e).copied()
    }

    /// g^{-1} H g as a subgroup.
    pub fn conjugate(&self, g: &FiniteGroup, by: usize) -> Subgroup {
        let inv = g.inv(by);
        let mut elems: Vec<usize> = self
            .elems
            .iter()
            .map(|&h| g.mul(g.mul(inv, h), by))
            .collect();
        elems.sort_unstable();
        let pos = elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        Subgroup { elems, pos }
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let elems: Vec<usize> = self
            .elems
            .iter()
            .copied()
            .filter(|e| other.contains(*e))
            .collect();
        let pos = elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        Subgroup { elems, pos }
    }
}

/// Representatives of the left cosets xH, identity coset first.
pub fn left_transversal(g: &FiniteGroup, h: &Subgroup) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if !seen[x] {
            reps.push(x);
            for &k in &h.elems {
                seen[g.mul(x, k)] = true;
            }
        }
    }
    reps
}

/// Representatives of the right cosets Hx, identity coset first.
pub fn right_transversal(g: &FiniteGroup, h: &Subgroup) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if !seen[x] {
            reps.push(x);
            for &k in &h.elems {
                seen[g.mul(k, x)] = true;
            }
        }
    }
    reps
}

/// Double cosets H x H, as (representative, members) with the identity
/// coset first.
pub fn double_cosets(g: &FiniteGroup, h: &Subgroup) -> Vec<(usize, Vec<usize>)> {
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        let mut members = Vec::new();
        for &a in &h.elems {
            for &b in &h.elems {
                let y = g.mul(g.mul(a, x), b);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        out.push((x, members));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_structure() {
        let (s3, perms) = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert_eq!(perms.len(), 6);
        // subgroup generated by the first transposition
        let s1 = perms.iter().position(|p| p == &vec![2, 1, 3]).unwrap();
        let h = Subgroup::generated_by(&s3, &[s1]);
        assert_eq!(h.order(), 2);
        assert_eq!(left_transversal(&s3, &h).len(), 3);
        // S_2 \ S_3 / S_2 has two double cosets
        assert_eq!(double_cosets(&s3, &h).len(), 2);
    }

    #[test]
    fn gl2f2_is_s3() {
        let (g, _) = FiniteGroup::gl2(2);
        assert_eq!(g.order(), 6);
        let (g3, _) = FiniteGroup::gl2(3);
        assert_eq!(g3.order(), 48);
    }

    #[test]
    fn transversals_cover() {
        let (s4, perms) = FiniteGroup::symmetric(4);
        let s1 = perms.iter().position(|p| p == &vec![2, 1, 3, 4]).unwrap();
        let s2 = perms.iter().position(|p| p == &vec![1, 3, 2, 4]).unwrap();
        let h = Subgroup::generated_by(&s4, &[s1, s2]);
        assert_eq!(h.order(), 6);
        let lt = left_transversal(&s4, &h);
        assert_eq!(lt.len(), 4);
        let mut all: Vec<usize> = Vec::new();
        for &x in &lt {
            for &k in &h.elems {
                all.push(s4.mul(x, k));
            }
        }
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 24);
    }
}
