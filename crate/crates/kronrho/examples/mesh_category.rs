//! The mesh category of the translation quiver against the chain: Hom
//! dimensions agree through the window dictionary, composition has the same
//! rank on both sides, and the mesh dimensions are translation invariant.

use kronrho::archain::build_preproj;
use kronrho::field::FieldSpec;
use kronrho::meshcat::compare_mesh_vs_modules;

fn main() {
    for n_vars in [2usize, 3] {
        let window = 6;
        let chain = build_preproj(n_vars, window, FieldSpec::default_prime()).unwrap();
        let rep = compare_mesh_vs_modules(n_vars, window, &chain).unwrap();
        assert!(rep.pass());
        for p in rep.pairs.iter().filter(|p| p.a == 0) {
            println!(
                "N={n_vars}: Hom(term 0, term {}) mesh dim {} = module dim {}",
                p.b, p.mesh_dim, p.module_dim
            );
        }
        println!(
            "N={n_vars}: {} composition triples, ranks equal: {}",
            rep.composition_triples, rep.composition_ranks_equal
        );
    }
}
