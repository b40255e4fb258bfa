//! Graded dimensions of the quadric quotient algebra: the slice dimensions
//! satisfy r_{n+1} = N r_n - r_{n-1}, witnessed by an exact sequence of
//! slices in every degree.

use kronrho::field::FieldSpec;
use kronrho::freegraded::{hilbert, Algebra};

fn main() {
    for n_vars in [2usize, 3, 4] {
        let top = match n_vars {
            2 => 12,
            3 => 8,
            _ => 6,
        };
        let mut alg = Algebra::new(n_vars, FieldSpec::default_prime());
        alg.extend_to(top);
        let expected = hilbert(n_vars, top);
        let dims: Vec<usize> = (0..=top).map(|t| alg.dim(t).unwrap()).collect();
        println!("N={n_vars}: dims {:?}", dims);
        assert_eq!(dims, expected, "recurrence violated");
        for t in 1..top {
            let rep = alg.check_lemma_exact_sequence(t).unwrap();
            assert!(rep.pass(), "exact sequence fails at degree {t}");
        }
        println!("N={n_vars}: exact sequence verified for degrees 1..={}", top - 1);
    }
}
