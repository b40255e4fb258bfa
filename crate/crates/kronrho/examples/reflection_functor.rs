//! BGP reflection along the chain: the reflection functor sends each chain
//! term two steps up, and its action on dimension vectors is the Coxeter
//! matrix [[-1, N], [-N, N^2 - 1]].

use kronrho::archain::{build_preproj, pi_iso_witness};
use kronrho::field::FieldSpec;
use kronrho::kronrep::{coxeter_matrix_apply, reflection_minus};

fn main() {
    for n_vars in [2usize, 3] {
        let chain = build_preproj(n_vars, 7, FieldSpec::default_prime()).unwrap();
        for n in 0..=5 {
            let refl = reflection_minus(&chain.reps[n]);
            let target = &chain.reps[n + 2];
            let (c0, c1) = coxeter_matrix_apply(n_vars, chain.reps[n].dim);
            assert_eq!((c0, c1), (target.dim.d0 as i64, target.dim.d1 as i64));
            let iso = pi_iso_witness(&chain, n + 2, &refl, 11, 20).unwrap();
            assert!(iso.is_some(), "reflection misses the next term at n={n}");
            println!(
                "N={n_vars}: reflect(term {n}) = term {}  dims ({}, {})",
                n + 2,
                target.dim.d0,
                target.dim.d1
            );
        }
    }
}
