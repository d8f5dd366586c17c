//! Quantum Hall index experiments: exact lowest-Landau-level weights of the
//! flux unitary, and trace-formula estimates of `Index(PUP)` on a finite
//! disordered magnetic lattice.

pub mod landau;
pub mod lattice;
pub mod projection;
pub mod trace;

pub use landau::{compactness_witness, landau_pup_weights, LandauWeights};
pub use lattice::{build_lattice_model, harper_bands, harper_gaps, Flux, LatticeModel, LatticeSpectrum};
pub use projection::{
    build_c, build_c_beta, c_beta_min_singular, fermi_function, flux_unitary, spectral_projection,
    spectral_projection_shifted, FluxUnitary, ProjectionKind, ProjectionLike, DEGENERACY_GAP, DEGENERACY_SHIFT,
};
pub use trace::{
    default_radius, hall_step_scan, index_trace_estimate, step_point, ScanMode, StepCurve, TraceEstimate, TraceRegion,
};
