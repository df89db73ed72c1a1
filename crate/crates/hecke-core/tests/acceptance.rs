//! Acceptance suite: one test per criterion, each printing its own
//! summary line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the timings; the harness prints one pass/fail line per
//! criterion either way.

use std::time::Instant;

use hecke_core::affine::{
    verify_conjugation_identity, verify_presentation, verify_presentation_relations,
};
use hecke_core::cli::{run, RunConfig, Task};
use hecke_core::coeff::CoeffDomain;
use hecke_core::cosets::DoubleCosetId;
use hecke_core::finite_hecke::functor::check_tfae;
use hecke_core::finite_hecke::instances::{gl2f2_instance, s3_instance};
use hecke_core::finite_hecke::suite::run_instance_suite;
use hecke_core::finite_hecke::FiniteHecke;
use hecke_core::localfield::{gl_elements, Config};
use hecke_core::prop_hecke::{
    structure_constants, verify_relation, GeneratorTag, HeckeCtx,
};
use hecke_core::report::all_passed;
use hecke_core::rng::Rng;
use hecke_core::weyl::verify_identities;

/// The (n, q, ell) grid for the convolution-algebra checks: rationals
/// always, plus one prime field per residue field size.
const GRID: [(usize, u64, u64); 3] = [(2, 2, 3), (2, 3, 2), (3, 2, 3)];

#[test]
fn acceptance_1_relation_suite() {
    let t0 = Instant::now();
    for (n, q, ell) in GRID {
        for domain in [CoeffDomain::Rational, CoeffDomain::PrimeField(ell)] {
            let cfg = Config::new(n, q, 6, 2).unwrap();
            let ctx = HeckeCtx::new(&cfg, domain).unwrap();
            for r in 1..=7u8 {
                let checks = verify_relation(&ctx, r).unwrap();
                for c in &checks {
                    assert!(
                        c.passed(),
                        "relation {r} at n={n}, q={q}, {domain:?}: {} ({})",
                        c.name,
                        c.detail
                    );
                }
            }
        }
    }
    println!(
        "criterion 1: all seven relations pass on {:?} over Q and one prime field each ({:?})",
        GRID,
        t0.elapsed()
    );
}

#[test]
fn acceptance_2_weyl_identities() {
    let t0 = Instant::now();
    for n in 2..=6 {
        // brute-force uniqueness of coset minimizers up to rank 5
        let checks = verify_identities(n, n <= 5);
        for c in &checks {
            assert!(c.passed(), "rank {n}: {} ({})", c.name, c.detail);
        }
        let conj = verify_conjugation_identity(n);
        assert!(conj.passed(), "rank {n}: {}", conj.detail);
    }
    println!(
        "criterion 2: length, coset-minimum, displacement and conjugation identities exhaustive to rank 6 ({:?})",
        t0.elapsed()
    );
}

#[test]
fn acceptance_3_affine_presentation() {
    let t0 = Instant::now();
    for n in 2..=6 {
        for c in verify_presentation_relations(n) {
            assert!(c.passed(), "rank {n}: {} ({})", c.name, c.detail);
        }
    }
    // one bounded word-injectivity run within the budget
    let rep = verify_presentation(3, 6);
    for c in &rep.checks {
        assert!(c.passed(), "rank 3 words: {} ({})", c.name, c.detail);
    }
    println!(
        "criterion 3: monomial-matrix presentation relations (with tau-s braid collapse) hold to rank 6 ({:?})",
        t0.elapsed()
    );
}

#[test]
fn acceptance_4_coset_lemmas() {
    let t0 = Instant::now();
    for (n, q) in [(2usize, 2u64), (3, 2)] {
        let rc = RunConfig {
            n,
            q,
            ell: 0,
            prec: 6,
            window: 2,
            task: Task::CosetLemmas { z_samples: 100 },
            out: None,
        };
        let report = run(&rc).unwrap();
        for c in &report.checks {
            assert!(c.passed(), "n={n} q={q}: {} ({})", c.name, c.detail);
        }
    }
    println!(
        "criterion 4: tau-product, absorption and monomial-intersection checks clean at (2,2) and (3,2) ({:?})",
        t0.elapsed()
    );
}

#[test]
fn acceptance_5_finite_hecke_suite() {
    let t0 = Instant::now();
    let instances = [
        s3_instance(CoeffDomain::Rational, false).unwrap(),
        s3_instance(CoeffDomain::Rational, true).unwrap(),
        gl2f2_instance(CoeffDomain::Rational).unwrap(),
    ];
    for inst in &instances {
        let checks = run_instance_suite(inst).unwrap();
        for c in &checks {
            assert!(c.passed(), "{}: {}", c.name, c.detail);
        }
    }
    // pinned dimensions for (S_3, S_2, trivial): double cosets,
    // intertwiners and the endomorphism algebra all have dimension 2
    let inst = &instances[0];
    let fh = FiniteHecke::new(&inst.group, inst.h.clone(), inst.sigma.clone()).unwrap();
    assert_eq!(fh.dimension(), 2);
    assert_eq!(fh.end_of_induced_basis().len(), 2);
    // four-condition agreement also on a non-semisimple prime-field case
    let inst3 = s3_instance(CoeffDomain::PrimeField(3), false).unwrap();
    let fh3 = FiniteHecke::new(&inst3.group, inst3.h.clone(), inst3.sigma.clone()).unwrap();
    for name in ["trivial", "sign", "standard"] {
        let tfae = check_tfae(&fh3, inst3.irreducible(name)).unwrap();
        assert!(tfae.agree(), "{name}: {:?}", tfae.conditions);
    }
    println!(
        "criterion 5: endomorphism isomorphism, reciprocity, functor image and four-condition checks pass on all instances ({:?})",
        t0.elapsed()
    );
}

#[test]
fn acceptance_6_mod_ell_consistency() {
    let t0 = Instant::now();
    let mut compared = 0usize;
    for (n, q, ell) in GRID {
        let cfg = Config::new(n, q, 6, 2).unwrap();
        // independent contexts (separate caches) per domain
        let ctx_q = HeckeCtx::new(&cfg, CoeffDomain::Rational).unwrap();
        let ctx_l = HeckeCtx::new(&cfg, CoeffDomain::PrimeField(ell)).unwrap();
        let mut rng = Rng::new(0x6e11);
        let mut ids: Vec<DoubleCosetId> = Vec::new();
        for i in 0..n {
            ids.push(
                ctx_q
                    .cosets
                    .canonical(&GeneratorTag::Tau(i).group_element(&cfg))
                    .unwrap(),
            );
        }
        ids.push(
            ctx_q
                .cosets
                .canonical(&GeneratorTag::TauZeroInverse.group_element(&cfg))
                .unwrap(),
        );
        let gl = gl_elements(&cfg.fq, n);
        for _ in 0..6 {
            let k = gl[rng.below(gl.len() as u64) as usize].clone();
            let id = ctx_q
                .cosets
                .canonical(&GeneratorTag::KElement(k).group_element(&cfg))
                .unwrap();
            if !ids.contains(&id) {
                ids.push(id);
            }
        }
        for a in &ids {
            for b in &ids {
                let prod_q = match structure_constants(&ctx_q, a, b) {
                    Ok(p) => p,
                    Err(_) => continue, // outside the window
                };
                let prod_l = structure_constants(&ctx_l, a, b).unwrap();
                assert_eq!(prod_q.len(), prod_l.len());
                for ((ca, va), (cb, vb)) in prod_q.iter().zip(prod_l.iter()) {
                    assert_eq!(ca, cb);
                    assert_eq!(&va.reduce_mod(ell).unwrap(), vb, "constant at {ca:?}");
                }
                compared += 1;
            }
        }
    }
    println!(
        "criterion 6: {compared} structure-constant products match between Q and the prime fields after reduction ({:?})",
        t0.elapsed()
    );
}

#[test]
fn acceptance_7_determinism_and_precision_stability() {
    let t0 = Instant::now();
    // identical check lists and artifacts when the precision doubles
    let tasks: Vec<(usize, u64, Task)> = vec![
        (2, 2, Task::Relations { which: vec![1, 2, 6, 7] }),
        (
            3,
            2,
            Task::StructConst {
                a: "tau1".into(),
                b: "tau2".into(),
            },
        ),
        (
            2,
            3,
            Task::StructConst {
                a: "tau1".into(),
                b: "s1".into(),
            },
        ),
    ];
    for (n, q, task) in tasks {
        let reports: Vec<_> = [6usize, 12]
            .iter()
            .map(|&prec| {
                let rc = RunConfig {
                    n,
                    q,
                    ell: 0,
                    prec,
                    window: 2,
                    task: task.clone(),
                    out: None,
                };
                run(&rc).unwrap()
            })
            .collect();
        let strip = |r: &hecke_core::cli::Report| {
            (
                r.task.clone(),
                serde_json::to_string(&r.checks).unwrap(),
                serde_json::to_string(&r.artifact).unwrap(),
            )
        };
        assert_eq!(strip(&reports[0]), strip(&reports[1]), "task {task:?}");
        assert!(all_passed(&reports[0].checks));
    }
    // canonical ids of a sampled family are unchanged at doubled prec
    for (n, q, _) in GRID {
        let cfg_lo = Config::new(n, q, 6, 2).unwrap();
        let cfg_hi = Config::new(n, q, 12, 2).unwrap();
        let ctx_lo = hecke_core::cosets::CosetCtx::new(&cfg_lo);
        let ctx_hi = hecke_core::cosets::CosetCtx::new(&cfg_hi);
        let mut rng = Rng::new(0xd1ce);
        for _ in 0..10 {
            let g = hecke_core::localfield::sample_k(&cfg_lo, &mut rng, 3);
            let exps: Vec<i64> = (0..n).map(|_| rng.below(5) as i64 - 2).collect();
            let x = g.mul(&hecke_core::cosets::diag_t_matrix(&cfg_lo, &exps), &cfg_lo.fq);
            assert_eq!(ctx_lo.canonical(&x).unwrap(), ctx_hi.canonical(&x).unwrap());
        }
    }
    println!(
        "criterion 7: reports, coefficients and coset ids unchanged under doubled precision ({:?})",
        t0.elapsed()
    );
}
