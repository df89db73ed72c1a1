//! Bounded word-injectivity of the presentation at every supported rank:
//! two words of bounded length map to the same monomial matrix only when
//! the listed relations join them (rewriting closure with a two-letter
//! slack). Word-universe sizes are capped per rank to keep this test in
//! seconds.

use hecke_core::affine::verify_presentation;

#[test]
fn word_injectivity_all_ranks() {
    for (n, len) in [(2usize, 8usize), (3, 6), (4, 5), (5, 4), (6, 4)] {
        let rep = verify_presentation(n, len);
        for c in &rep.checks {
            assert!(c.passed(), "rank {n}, len {len}: {} ({})", c.name, c.detail);
        }
    }
}
