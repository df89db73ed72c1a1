//! Timing probe for the double-coset verifiers at their production
//! parameter points.

use hecke_core::affine::DeltaElement;
use hecke_core::cosets::{enumerate_polys, CosetCtx};
use hecke_core::localfield::{Config, GroupElement, Matrix, TruncatedLaurent};
use hecke_core::rng::Rng;
use std::time::Instant;

fn z_from_polys(cfg: &Config, entries: &[TruncatedLaurent]) -> GroupElement {
    let n = cfg.n;
    let mut m = Matrix::identity(n);
    let mut k = 0;
    for r in 0..n {
        for c in (r + 1)..n {
            m.set(r, c, entries[k].clone());
            k += 1;
        }
    }
    GroupElement::with_det_val(m, 0)
}

fn main() {
    // absorption at (2,2) and (3,2)
    for (n, q, pair_depth, validated) in [(2usize, 2u64, 3usize, 64usize), (3, 2, 2, 12)] {
        let cfg = Config::new(n, q, 6, 2).unwrap();
        let ctx = CosetCtx::new(&cfg);
        let t = Instant::now();
        let out = ctx.verify_absorption(pair_depth, validated).unwrap();
        println!(
            "absorption n={n} q={q}: {} samples, {} in K1, {} excluded, {} enum-validated, {} counterexamples ({:?})",
            out.samples, out.in_k1, out.excluded_by_valuation, out.enumeration_validated,
            out.counterexamples, t.elapsed()
        );
    }
    // tau products
    for (n, q) in [(2usize, 2u64), (3, 2)] {
        let cfg = Config::new(n, q, 6, 2).unwrap();
        let ctx = CosetCtx::new(&cfg);
        let t = Instant::now();
        let mut pairs = 0;
        let mut ok = true;
        let gens: Vec<DeltaElement> = (1..n).map(|i| DeltaElement::tau(n, i)).collect();
        for a in &gens {
            for b in &gens {
                pairs += 1;
                ok &= ctx.verify_tau_products(a, b).unwrap();
            }
        }
        println!("tau products n={n} q={q}: {pairs} generator pairs ok={ok} ({:?})", t.elapsed());
    }
    // monomial intersection at (2,2) exhaustive z, depth 3
    {
        let cfg = Config::new(2, 2, 6, 2).unwrap();
        let ctx = CosetCtx::new(&cfg);
        let t = Instant::now();
        let mut all_only_tau = true;
        let mut tau_found_for_id = true;
        for tau in [DeltaElement::tau(2, 1), DeltaElement::monoid(vec![2]).unwrap()] {
            for e in enumerate_polys(2, 0, 3) {
                let z = z_from_polys(&cfg, &[e.clone()]);
                let out = ctx.verify_monomial_intersection(&tau, &z, 3).unwrap();
                all_only_tau &= out.only_tau_class();
                if e.is_exactly_zero() {
                    tau_found_for_id &= out.contains_tau;
                }
            }
        }
        println!("monomial (2,2): only-tau {all_only_tau}, tau-at-identity {tau_found_for_id} ({:?})", t.elapsed());
    }
    // monomial intersection at (3,2): a few random z at depth 2 to time it
    {
        let cfg = Config::new(3, 2, 6, 2).unwrap();
        let ctx = CosetCtx::new(&cfg);
        let mut rng = Rng::new(9);
        let t = Instant::now();
        let tau = DeltaElement::monoid(vec![0, 1]).unwrap();
        for trial in 0..3 {
            let entries: Vec<TruncatedLaurent> = (0..3)
                .map(|_| {
                    let coeffs: Vec<u8> = (0..2).map(|_| rng.below(2) as u8).collect();
                    TruncatedLaurent::poly(0, coeffs)
                })
                .collect();
            let z = z_from_polys(&cfg, &entries);
            let out = ctx.verify_monomial_intersection(&tau, &z, 2).unwrap();
            println!(
                "  (3,2) trial {trial}: {} pairs, {} classes, only-tau {} ({:?})",
                out.pairs_scanned,
                out.classes.len(),
                out.only_tau_class(),
                t.elapsed()
            );
        }
    }
}
