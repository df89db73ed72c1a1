//! Per-relation timing probe across the verification grid.

use hecke_core::coeff::CoeffDomain;
use hecke_core::localfield::Config;
use hecke_core::prop_hecke::{verify_relation, HeckeCtx};

fn main() {
    for (n, q) in [(2usize, 2u64), (2, 3), (3, 2)] {
        let cfg = Config::new(n, q, 6, 2).unwrap();
        let ctx = HeckeCtx::new(&cfg, CoeffDomain::Rational).unwrap();
        let t0 = std::time::Instant::now();
        for r in 1..=7u8 {
            let t = std::time::Instant::now();
            match verify_relation(&ctx, r) {
                Ok(checks) => {
                    let bad: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
                    println!(
                        "n={n} q={q} rel {r}: {} checks, {} failed ({:?})",
                        checks.len(),
                        bad.len(),
                        t.elapsed()
                    );
                    for b in bad.iter().take(3) {
                        println!("   FAIL {}: {}", b.name, b.detail);
                    }
                }
                Err(e) => println!("n={n} q={q} rel {r}: ERROR {e}"),
            }
        }
        println!("total {:?}", t0.elapsed());
    }
}
