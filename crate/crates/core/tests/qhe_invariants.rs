use fredholm_core::qhe::{
    build_lattice_model, compactness_witness, flux_unitary, harper_gaps, landau_pup_weights, step_point, Flux,
    LatticeSpectrum, ScanMode, TraceEstimate, TraceRegion,
};

fn estimate(side: usize, flux: Flux, energy: f64, k: u32, offset: [f64; 2]) -> TraceEstimate {
    let model = build_lattice_model(side, flux, 0.0, 1).unwrap();
    let spectrum = LatticeSpectrum::new(&model);
    let u = flux_unitary(&model, offset).unwrap();
    let region = TraceRegion::default_for(&model, &u).unwrap();
    step_point(&spectrum, energy, ScanMode::Spectral, k, &u, &region).unwrap().0
}

fn gap_centre(flux: Flux, g: usize) -> f64 {
    let (lo, hi) = harper_gaps(flux, 41)[g];
    0.5 * (lo + hi)
}

#[test]
fn integrality_improves_with_size() {
    let flux = Flux::new(1, 7).unwrap();
    let e = gap_centre(flux, 0);
    let small = estimate(16, flux, e, 1, [0.0, 0.0]);
    let large = estimate(24, flux, e, 1, [0.0, 0.0]);
    assert_eq!(large.nearest, 1);
    assert!(large.deviation < small.deviation, "{small:?} {large:?}");
}

#[test]
fn origin_shift_keeps_the_step() {
    let flux = Flux::new(1, 7).unwrap();
    let e = gap_centre(flux, 0);
    let a = estimate(24, flux, e, 1, [0.0, 0.0]);
    let b = estimate(24, flux, e, 1, [0.31, -0.27]);
    assert_eq!(a.nearest, b.nearest);
    assert!((a.value - b.value).abs() < 0.1);
}

#[test]
fn higher_powers_agree_in_the_lower_gaps() {
    let flux = Flux::new(1, 7).unwrap();
    for (g, target) in [(0, 1), (1, 2)] {
        let e = gap_centre(flux, g);
        assert_eq!(estimate(24, flux, e, 1, [0.0, 0.0]).nearest, target);
        assert_eq!(estimate(24, flux, e, 2, [0.0, 0.0]).nearest, target);
    }
}

#[test]
fn empty_fermi_sea_has_index_zero() {
    let flux = Flux::new(1, 7).unwrap();
    assert_eq!(estimate(12, flux, -10.0, 1, [0.0, 0.0]).value, 0.0);
}

#[test]
fn landau_witness_shrinks_like_one_over_m() {
    let a = compactness_witness(&landau_pup_weights(1000).unwrap()).unwrap();
    let b = compactness_witness(&landau_pup_weights(10_000).unwrap()).unwrap();
    assert!((a / b - 10.0).abs() < 0.5, "{a} {b}");
}
