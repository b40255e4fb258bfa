//! Property-based checks on the linear algebra core and the algebra slices:
//! rank-nullity, preimage recovery, field agreement, the Euler identity, and
//! the defining relation on random slice vectors.

use kronrho::field::{FieldSpec, Scalar, DEFAULT_PRIME};
use kronrho::freegraded::{hilbert, Algebra};
use kronrho::kronrep::{euler_form, ext1_dim, hom_dim, random_rep, DimVector};
use kronrho::matrix::Matrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fp() -> FieldSpec {
    FieldSpec::Prime(DEFAULT_PRIME)
}

fn random_matrix(field: FieldSpec, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = Matrix::zero(field, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            match field {
                FieldSpec::Prime(p) => m.set(r, c, Scalar::Fp(rng.gen_range(0..p))),
                FieldSpec::Rationals => m.set_i64(r, c, rng.gen_range(-4..=4)),
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity(rows in 0usize..8, cols in 0usize..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for field in [fp(), FieldSpec::Rationals] {
            let a = random_matrix(field, rows, cols, &mut rng);
            let ker = a.kernel_basis();
            prop_assert_eq!(a.rank() + ker.cols, cols);
            if ker.cols > 0 {
                prop_assert!(a.mul(&ker).is_zero());
            }
        }
    }

    #[test]
    fn solve_recovers_preimages(rows in 1usize..7, cols in 1usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for field in [fp(), FieldSpec::Rationals] {
            let a = random_matrix(field, rows, cols, &mut rng);
            let x = random_matrix(field, cols, 2, &mut rng);
            let b = a.mul(&x);
            let sol = a.solve_many(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(a.mul(&sol), b);
        }
    }

    #[test]
    fn transpose_preserves_rank(rows in 0usize..8, cols in 0usize..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(fp(), rows, cols, &mut rng);
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn slice_dims_agree_across_fields(nv in 2usize..5, top in 1usize..6) {
        let mut aq = Algebra::new(nv, FieldSpec::Rationals);
        aq.extend_to(top);
        let mut ap = Algebra::new(nv, fp());
        ap.extend_to(top);
        for t in 0..=top {
            prop_assert_eq!(aq.dim(t).unwrap(), ap.dim(t).unwrap());
            prop_assert_eq!(ap.dim(t).unwrap(), hilbert(nv, top)[t]);
        }
    }

    #[test]
    fn euler_identity_random(nv in 2usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for field in [fp(), FieldSpec::Rationals] {
            let dm = DimVector::new(rng.gen_range(0..=3), rng.gen_range(0..=3));
            let dn = DimVector::new(rng.gen_range(0..=3), rng.gen_range(0..=3));
            let m = random_rep(nv, field, dm, 3, &mut rng);
            let n = random_rep(nv, field, dn, 3, &mut rng);
            let h = hom_dim(&m, &n).unwrap() as i64;
            let e = ext1_dim(&m, &n).unwrap() as i64;
            prop_assert_eq!(h - e, euler_form(dm, dn, nv));
        }
    }

    #[test]
    fn left_and_right_multiplications_commute(nv in 2usize..4, n in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = fp();
        let mut alg = Algebra::new(nv, field);
        alg.extend_to(n + 2);
        let dim = alg.dim(n).unwrap();
        let v: Vec<Scalar> = (0..dim)
            .map(|_| Scalar::Fp(rng.gen_range(0..DEFAULT_PRIME)))
            .collect();
        for i in 0..nv {
            for j in 0..nv {
                // X_i * (v * X_j) = (X_i * v) * X_j
                let rv = alg.rmul(j, n + 1).unwrap().apply_dense(&field, &v);
                let lrv = alg.lmul(i, n + 2).unwrap().apply_dense(&field, &rv);
                let lv = alg.lmul(i, n + 1).unwrap().apply_dense(&field, &v);
                let rlv = alg.rmul(j, n + 2).unwrap().apply_dense(&field, &lv);
                prop_assert_eq!(&lrv, &rlv);
            }
        }
    }

    #[test]
    fn quadric_relation_kills_slices(nv in 2usize..5, n in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = fp();
        let mut alg = Algebra::new(nv, field);
        alg.extend_to(n + 2);
        let dim = alg.dim(n).unwrap();
        let v: Vec<Scalar> = (0..dim)
            .map(|_| Scalar::Fp(rng.gen_range(0..DEFAULT_PRIME)))
            .collect();
        let mut acc = vec![Scalar::Fp(0); alg.dim(n + 2).unwrap()];
        for i in 0..nv {
            let mid = alg.lmul(i, n + 1).unwrap().apply_dense(&field, &v);
            let top = alg.lmul(i, n + 2).unwrap().apply_dense(&field, &mid);
            for (a, t) in acc.iter_mut().zip(top) {
                *a = field.add(a, &t);
            }
        }
        prop_assert!(acc.iter().all(|s| s.is_zero()));
    }
}
