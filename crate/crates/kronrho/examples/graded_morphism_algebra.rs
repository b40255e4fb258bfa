//! The graded algebra of chain morphisms out of the start of the
//! preprojective chain is isomorphic to the quotient algebra itself:
//! bijective in every degree and multiplicative on words.

use kronrho::archain::{build_preproj, gamma_check, purity_witnesses};
use kronrho::field::FieldSpec;
use kronrho::freegraded::Algebra;

fn main() {
    for n_vars in [2usize, 3] {
        let cap = 6;
        let mut alg = Algebra::new(n_vars, FieldSpec::default_prime());
        alg.extend_to(cap);
        let chain = build_preproj(n_vars, cap + 1, FieldSpec::default_prime()).unwrap();
        let gamma = gamma_check(&chain, &alg, cap).unwrap();
        assert!(gamma.pass());
        println!("N={n_vars}: morphism algebra matches slices up to degree {cap}");
        let purity = purity_witnesses(&chain);
        assert!(purity.pass());
        println!("N={n_vars}: every connecting map injective ({} witnesses)", purity.entries.len());
    }
}
