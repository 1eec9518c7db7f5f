use spectra_core::mc::{random_irreducible, verify_mc, SampleBounds};

#[test]
fn random_tuples_satisfy_convolution_laws() {
    let b = SampleBounds::default();
    for seed in 1000..1025u64 {
        let s = random_irreducible(seed, &b).unwrap();
        let r = verify_mc(&s.tuple, &s.symbol, &s.choice, seed).unwrap();
        assert!(r.all_ok(), "seed {seed}: {r:?}");
    }
}
