//! Hom and Ext between random modules: dim Hom - dim Ext^1 equals the Euler
//! form of the dimension vectors, over the rationals and over a prime field.

use kronrho::field::FieldSpec;
use kronrho::kronrep::{ext1_dim, euler_form, hom_dim, random_rep, DimVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for field in [FieldSpec::Rationals, FieldSpec::default_prime()] {
        for n_vars in [2usize, 3] {
            for _ in 0..10 {
                let dm = DimVector::new(rng.gen_range(1..=5), rng.gen_range(1..=5));
                let dn = DimVector::new(rng.gen_range(1..=5), rng.gen_range(1..=5));
                let m = random_rep(n_vars, field, dm, 3, &mut rng);
                let n = random_rep(n_vars, field, dn, 3, &mut rng);
                let h = hom_dim(&m, &n).unwrap() as i64;
                let e = ext1_dim(&m, &n).unwrap() as i64;
                let euler = euler_form(dm, dn, n_vars);
                assert_eq!(h - e, euler);
                println!("{field} N={n_vars}: hom {h} - ext {e} = euler {euler}");
            }
        }
    }
}
