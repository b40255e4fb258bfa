//! The preinjective chain: terms match the transpose model built from the
//! graded slices, and the evaluation morphism from one term to the previous
//! is surjective with Hom dimension N.

use kronrho::archain::{build_preinj, check_lemma_surj, preinj_matches_transpose_model};
use kronrho::field::FieldSpec;

fn main() {
    for n_vars in [2usize, 3] {
        let len = if n_vars == 2 { 8 } else { 6 };
        let chain = build_preinj(n_vars, len, FieldSpec::default_prime()).unwrap();
        let upto = if n_vars == 2 { 5 } else { 4 };
        assert!(preinj_matches_transpose_model(&chain, upto, 17).unwrap());
        println!("N={n_vars}: transpose model confirmed up to term {upto}");
        for n in 0..=(len - 1).min(5) {
            let surj = check_lemma_surj(&chain, n).unwrap();
            assert!(surj.pass());
            println!(
                "N={n_vars}: evaluation onto term {n} surjective, hom dim {}",
                surj.hom_dim
            );
        }
    }
}
