//! Fixtures shared by the benchmarks in `benches/`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torsio_core::chainlib::random::random_complex;
use torsio_core::chainlib::{homology_basis, BasedComplex, HomologyBasisSet};
use torsio_core::fgroup::load_knot;
use torsio_core::mutlab::MutationPair;
use torsio_core::repspace::{solve_representations, Representation};
use torsio_core::torsionform::KnotExterior;
use num_rational::BigRational;

/// Seeded exact complexes with their homology bases.
pub fn exact_complexes(count: usize, seed: u64) -> Vec<(BasedComplex<BigRational>, HomologyBasisSet<BigRational>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c = random_complex(&mut rng, 4, 3);
            let h = homology_basis(&c, 0.0).expect("exact homology");
            (c, h)
        })
        .collect()
}

/// A bundled knot's exterior and its representations at `theta`.
pub fn knot_fixture(stem: &str, theta: f64) -> (KnotExterior, Vec<Representation>) {
    let k = load_knot(stem).expect("bundled knot");
    let ext = KnotExterior::for_knot(&k).expect("bundled certificate");
    let reps = solve_representations(stem, &ext.presentation, &ext.meridian, theta, 200, 7).expect("representations");
    (ext, reps)
}

/// The Kinoshita–Terasaka/Conway pair with representations of the amalgam at `theta`.
pub fn mutation_fixture(theta: f64) -> (MutationPair, Vec<Representation>) {
    let pair = MutationPair::load("kinoshita_terasaka", "conway").expect("bundled pair");
    let ext = &pair.exterior;
    let reps = solve_representations("kt", &ext.presentation, &ext.meridian, theta, 200, 7).expect("representations");
    (pair, reps)
}
