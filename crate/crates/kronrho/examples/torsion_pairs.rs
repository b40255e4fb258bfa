//! Torsion filtration on random modules: the torsion parts stabilize, the
//! decomposition 0 -> M' -> M -> M'' -> 0 is exact, and the expected Hom and
//! Ext vanishing holds past the stabilization point. Also the canonical
//! projective-to-simple sequence on the same modules.

use kronrho::archain::{build_preinj, canonical_sequence_check, torsion_stabilize};
use kronrho::field::FieldSpec;
use kronrho::kronrep::{random_rep, DimVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let field = FieldSpec::default_prime();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n_vars in [2usize, 3] {
        let cap = if n_vars == 2 { 10 } else { 7 };
        let chain = build_preinj(n_vars, cap, field).unwrap();
        for i in 0..8 {
            let dim = DimVector::new(rng.gen_range(1..=6), rng.gen_range(1..=6));
            let m = random_rep(n_vars, field, dim, 3, &mut rng);
            let st = torsion_stabilize(&m, &chain, cap).unwrap();
            assert!(st.pass(), "stabilization failed for module {i}");
            let canon = canonical_sequence_check(&m).unwrap();
            assert!(canon.pass(), "canonical sequence failed for module {i}");
            println!(
                "N={n_vars} module {i} dims ({}, {}): stabilized at n0={}, torsion dims {:?}",
                dim.d0,
                dim.d1,
                st.n0.unwrap(),
                st.t_dims.last().unwrap()
            );
        }
    }
}
