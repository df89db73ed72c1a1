//! Brute-force validation of the canonical double-coset form.
//!
//! The oracle works in the finite quotient M_n(O/t^D) with its own
//! arithmetic on raw coefficient arrays (independent of the library's
//! scalar type): the K^1-double coset of an integral matrix g with
//! elementary divisors t^{c_i}, c_i <= s, is exactly determined by the
//! orbit of g mod t^D under K^1 x K^1 as soon as D >= s + 1. Two
//! elements are oracle-equivalent iff their reductions lie in one orbit;
//! the canonical id must induce the same partition.

use hecke_core::cosets::{diag_t_matrix, CosetCtx};
use hecke_core::localfield::{gl_elements, Config, Fq, GroupElement, Matrix, TruncatedLaurent};
use hecke_core::rng::Rng;

use std::collections::HashSet;

/// Matrix over O/t^D as n*n*D coefficient vector (entry-major, then
/// exponent), with plain table arithmetic.
#[derive(Clone, PartialEq, Eq, Hash)]
struct QMat {
    n: usize,
    d: usize,
    a: Vec<u8>,
}

impl QMat {
    fn zero(n: usize, d: usize) -> Self {
        QMat {
            n,
            d,
            a: vec![0; n * n * d],
        }
    }

    fn identity(n: usize, d: usize) -> Self {
        let mut m = Self::zero(n, d);
        for i in 0..n {
            m.a[(i * n + i) * d] = 1;
        }
        m
    }

    fn from_group_element(g: &GroupElement, d: usize) -> Self {
        let n = g.n();
        let mut m = Self::zero(n, d);
        for r in 0..n {
            for c in 0..n {
                for k in 0..d {
                    m.a[(r * n + c) * d + k] =
                        g.matrix().at(r, c).coeff_at(k as i64).expect("integral entry");
                }
            }
        }
        m
    }

    fn mul(&self, other: &QMat, fq: &Fq) -> QMat {
        let (n, d) = (self.n, self.d);
        let mut out = QMat::zero(n, d);
        for r in 0..n {
            for c in 0..n {
                for k in 0..n {
                    let x = &self.a[(r * n + k) * d..(r * n + k) * d + d];
                    let y = &other.a[(k * n + c) * d..(k * n + c) * d + d];
                    let z = &mut out.a[(r * n + c) * d..(r * n + c) * d + d];
                    for i in 0..d {
                        if x[i] == 0 {
                            continue;
                        }
                        for j in 0..(d - i) {
                            z[i + j] = fq.add(z[i + j], fq.mul(x[i], y[j]));
                        }
                    }
                }
            }
        }
        out
    }
}

/// One-parameter generators of K^1 mod t^D (two-sided closure uses both
/// u*g and g*u).
fn k1_generators(fq: &Fq, n: usize, d: usize) -> Vec<QMat> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for m in 1..d {
                for lam in 1..fq.q() {
                    let mut g = QMat::identity(n, d);
                    g.a[(i * n + j) * d + m] = fq.add(g.a[(i * n + j) * d + m], lam);
                    gens.push(g);
                }
            }
        }
    }
    gens
}

/// Full two-sided orbit of `start` under K^1 mod t^D.
fn orbit(start: &QMat, gens: &[QMat], fq: &Fq) -> HashSet<QMat> {
    let mut seen = HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start.clone()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            for y in [g.mul(&x, fq), x.mul(g, fq)] {
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    frontier.push(y);
                }
            }
        }
    }
    seen
}

/// Partition `elements` into brute-force double cosets and compare with
/// the canonical partition.
fn check_partition(cfg: &Config, elements: &[GroupElement], depth: usize) {
    let ctx = CosetCtx::new(cfg);
    let fq = &cfg.fq;
    let gens = k1_generators(fq, cfg.n, depth);
    let qmats: Vec<QMat> = elements
        .iter()
        .map(|g| QMat::from_group_element(g, depth))
        .collect();
    let ids: Vec<_> = elements
        .iter()
        .map(|g| ctx.canonical(g).expect("canonical"))
        .collect();

    let mut class_of = vec![usize::MAX; elements.len()];
    let mut next_class = 0;
    for i in 0..elements.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let orb = orbit(&qmats[i], &gens, fq);
        for j in i..elements.len() {
            if class_of[j] == usize::MAX && orb.contains(&qmats[j]) {
                class_of[j] = next_class;
            }
        }
        next_class += 1;
    }

    for i in 0..elements.len() {
        for j in (i + 1)..elements.len() {
            let oracle_eq = class_of[i] == class_of[j];
            let canon_eq = ids[i] == ids[j];
            assert_eq!(
                oracle_eq, canon_eq,
                "partition mismatch between elements {i} and {j}: oracle {oracle_eq}, canonical {canon_eq}"
            );
        }
    }
}

fn lift(cfg: &Config, res: &[u8]) -> GroupElement {
    GroupElement::with_det_val(Matrix::from_residues(cfg.n, res), 0)
}

#[test]
fn canonical_matches_brute_force_n2_q2() {
    // full lift families: every double coset inside K tau K is hit
    let cfg = Config::new(2, 2, 8, 2).unwrap();
    let gl = gl_elements(&cfg.fq, 2);
    for cartan in [vec![0i64, 0], vec![0, 1], vec![1, 1], vec![0, 2]] {
        let depth = (*cartan.iter().max().unwrap() + 2) as usize;
        let tau = diag_t_matrix(&cfg, &cartan);
        let mut elements = Vec::new();
        for a in &gl {
            for b in &gl {
                elements.push(lift(&cfg, a).mul(&tau, &cfg.fq).mul(&lift(&cfg, b), &cfg.fq));
            }
        }
        check_partition(&cfg, &elements, depth);
    }
}

#[test]
fn canonical_matches_brute_force_n2_q3() {
    let cfg = Config::new(2, 3, 8, 2).unwrap();
    let gl = gl_elements(&cfg.fq, 2);
    let mut rng = Rng::new(0x51);
    for cartan in [vec![0i64, 0], vec![0, 1]] {
        let depth = (*cartan.iter().max().unwrap() + 2) as usize;
        let tau = diag_t_matrix(&cfg, &cartan);
        let mut elements = Vec::new();
        for _ in 0..40 {
            let a = &gl[rng.below(gl.len() as u64) as usize];
            let b = &gl[rng.below(gl.len() as u64) as usize];
            elements.push(lift(&cfg, a).mul(&tau, &cfg.fq).mul(&lift(&cfg, b), &cfg.fq));
        }
        check_partition(&cfg, &elements, depth);
    }
}

#[test]
fn canonical_matches_brute_force_n3_q2() {
    let cfg = Config::new(3, 2, 8, 2).unwrap();
    let gl = gl_elements(&cfg.fq, 3);
    let mut rng = Rng::new(0xabc);
    for cartan in [vec![0i64, 0, 1], vec![0, 1, 1]] {
        let depth = (*cartan.iter().max().unwrap() + 2) as usize;
        let tau = diag_t_matrix(&cfg, &cartan);
        let mut elements = Vec::new();
        for _ in 0..25 {
            let a = &gl[rng.below(gl.len() as u64) as usize];
            let b = &gl[rng.below(gl.len() as u64) as usize];
            elements.push(lift(&cfg, a).mul(&tau, &cfg.fq).mul(&lift(&cfg, b), &cfg.fq));
        }
        check_partition(&cfg, &elements, depth);
    }
}

#[test]
fn canonical_constant_under_deep_k1_translations() {
    // K^1 factors with many coefficient terms (deeper than the orbit
    // generators used elsewhere) must not move the id
    let cfg = Config::new(2, 3, 8, 2).unwrap();
    let ctx = CosetCtx::new(&cfg);
    let mut rng = Rng::new(77);
    let gl = gl_elements(&cfg.fq, 2);
    for _ in 0..40 {
        let a = &gl[rng.below(gl.len() as u64) as usize];
        let b = &gl[rng.below(gl.len() as u64) as usize];
        let tau = diag_t_matrix(&cfg, &[0, rng.below(3) as i64]);
        let g = lift(&cfg, a).mul(&tau, &cfg.fq).mul(&lift(&cfg, b), &cfg.fq);
        let base = ctx.canonical(&g).unwrap();
        // deep translation: I + t*(random poly with 6 terms)
        let deep = |rng: &mut Rng| {
            let m = Matrix::from_fn(2, |r, c| {
                let coeffs: Vec<u8> = (0..6).map(|_| rng.below(3) as u8).collect();
                let tail = TruncatedLaurent::poly(1, coeffs);
                if r == c {
                    TruncatedLaurent::one().add(&tail, &cfg.fq)
                } else {
                    tail
                }
            });
            GroupElement::with_det_val(m, 0)
        };
        let u = deep(&mut rng);
        let v = deep(&mut rng);
        let moved = u.mul(&g, &cfg.fq).mul(&v, &cfg.fq);
        assert_eq!(ctx.canonical(&moved).unwrap(), base);
    }
}
