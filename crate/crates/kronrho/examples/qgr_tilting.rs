//! The graded side: Hom dimensions between truncated shifts of the algebra
//! stabilize to the slice dimensions, the pair {R, R(1)} has the expected
//! endomorphism pattern, the global-sections functor sends the two
//! projectives to R and R(1), and R(1) is covered by a single shifted copy.

use kronrho::archain::build_preproj;
use kronrho::field::FieldSpec;
use kronrho::freegraded::{hilbert, Algebra};
use kronrho::qgrside::{
    cover_by_shifts, gamma_star_projective, module_r, qgr_hom_dim, tilting_check, GammaStarWhich,
};

fn main() {
    let field = FieldSpec::default_prime();
    for (n_vars, hi) in [(2usize, 8i64), (3, 6)] {
        let mut alg = Algebra::new(n_vars, field);
        alg.extend_to(hi as usize + 4);
        let r0 = module_r(&alg, 0, 0, hi).unwrap();
        let expected = hilbert(n_vars, 4);
        for d in 0..=4i64 {
            let tgt = module_r(&alg, d, 0, hi).unwrap();
            let h = qgr_hom_dim(&r0, &tgt, 0, 0..=2, 3).unwrap();
            assert_eq!(h.value, Some(expected[d as usize]));
            println!("N={n_vars}: dim Hom(R, R({d})) = {}", h.value.unwrap());
        }
        let tilt = tilting_check(&alg, hi, 3).unwrap();
        assert!(tilt.pass());
        println!("N={n_vars}: End(R + R(1)) dims {:?}", tilt.dims);

        let chain = build_preproj(n_vars, hi as usize + 1, field).unwrap();
        for which in [GammaStarWhich::P1, GammaStarWhich::P0] {
            let g = gamma_star_projective(which, &chain, &alg, hi as usize).unwrap();
            assert!(g.pass());
            println!("N={n_vars}: sections of {:?} match the shifted algebra", which);
        }

        let r1 = module_r(&alg, 1, -1, hi - 1).unwrap();
        let cover = cover_by_shifts(&r1, &alg, 4).unwrap();
        assert!(cover.surjective);
        println!("N={n_vars}: R(1) covered with shifts {:?}", cover.shifts);
    }
}
