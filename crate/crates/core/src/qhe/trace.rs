//! Trace-formula estimates of `Index(PUP)` and Hall staircases.
//!
//! For a Fermi projection `P` with `E` in a mobility gap, `P - UPU*` is
//! trace class on the infinite lattice and `Tr((P - UPU*)^{2k+1})` is the
//! index of `PUP` for every `k >= 1`. On a finite patch the full trace of an
//! odd power vanishes identically (`P` and `UPU*` are unitarily equivalent
//! projections of equal rank, so the spectrum of their difference is
//! symmetric); the edge of the patch carries the opposite of the bulk
//! value. The estimate therefore takes the trace over a disk around the
//! flux origin, away from the edge.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::lattice::{LatticeModel, LatticeSpectrum};
use super::projection::{fermi_function, spectral_projection_shifted, FluxUnitary, ProjectionKind, ProjectionLike};
use crate::error::{Error, Result};
use crate::linalg::{matmul, CMatrix, Op};

/// Sites over which the trace is taken.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRegion {
    sites: Vec<usize>,
}

impl TraceRegion {
    /// Every site of the patch.
    pub fn whole(model: &LatticeModel) -> Self {
        Self {
            sites: (0..model.sites()).collect(),
        }
    }

    /// Sites within `radius` of `centre` (patch coordinates).
    pub fn disk(model: &LatticeModel, centre: [f64; 2], radius: f64) -> Result<Self> {
        let sites: Vec<usize> = model
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| (c[0] - centre[0]).hypot(c[1] - centre[1]) <= radius)
            .map(|(j, _)| j)
            .collect();
        if sites.is_empty() {
            return Err(Error::invalid("trace region contains no sites"));
        }
        Ok(Self { sites })
    }

    /// Disk of radius `side / 3` around the flux origin.
    pub fn default_for(model: &LatticeModel, u: &FluxUnitary) -> Result<Self> {
        Self::disk(model, u.origin, default_radius(model.side))
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }
}

pub fn default_radius(side: usize) -> f64 {
    side as f64 / 3.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEstimate {
    pub value: f64,
    pub nearest: i64,
    pub deviation: f64,
}

impl TraceEstimate {
    fn from_value(value: f64) -> Self {
        let nearest = value.round();
        Self {
            value,
            nearest: nearest as i64,
            deviation: (value - nearest).abs(),
        }
    }
}

/// `Re sum_{j in region} ((P - UPU*)^{2k+1})_{jj}`.
///
/// Works on the factor `F` of `P = F F*`: with `G = U F`, `(P - UPU*) X =
/// F (F* X) - G (G* X)`, so nothing of size `n x n` is formed.
pub fn index_trace_estimate(p: &ProjectionLike, u: &FluxUnitary, k: u32, region: &TraceRegion) -> Result<TraceEstimate> {
    if k < 1 {
        return Err(Error::invalid("trace power index k must be at least 1"));
    }
    let n = p.dim();
    if u.diagonal.len() != n {
        return Err(Error::invalid("flux unitary and projection sizes differ"));
    }
    if p.rank() == 0 {
        return Ok(TraceEstimate::from_value(0.0));
    }
    let f = p.factor();
    let g = u.apply_left(f);
    let sites = region.sites();
    let apply = |x: &CMatrix| -> CMatrix {
        let fx = matmul(f, Op::Adjoint, x, Op::Plain);
        let gx = matmul(&g, Op::Adjoint, x, Op::Plain);
        matmul(f, Op::Plain, &fx, Op::Plain) - matmul(&g, Op::Plain, &gx, Op::Plain)
    };
    // Y = (P - UPU*) E_D, formed from the selected rows of F and G
    let f_rows = CMatrix::from_fn(sites.len(), f.ncols(), |i, c| f[(sites[i], c)]);
    let g_rows = CMatrix::from_fn(sites.len(), g.ncols(), |i, c| g[(sites[i], c)]);
    let mut y = matmul(f, Op::Plain, &f_rows, Op::Adjoint) - matmul(&g, Op::Plain, &g_rows, Op::Adjoint);
    for _ in 1..k {
        y = apply(&y);
    }
    let z = apply(&y);
    let value: Complex64 = y.iter().zip(z.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok(TraceEstimate::from_value(value.re))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScanMode {
    Spectral,
    Fermi { beta: f64 },
}

/// Trace estimates over an energy grid.
#[derive(Clone, Debug, PartialEq)]
pub struct StepCurve {
    pub energies: Vec<f64>,
    pub estimates: Vec<TraceEstimate>,
    /// Energy was nudged off an eigenvalue.
    pub shifted: Vec<bool>,
    pub mode: ScanMode,
    pub k: u32,
}

/// One point of a scan. Exposed so drivers can spread the energy grid over
/// threads.
pub fn step_point(
    spectrum: &LatticeSpectrum,
    energy: f64,
    mode: ScanMode,
    k: u32,
    u: &FluxUnitary,
    region: &TraceRegion,
) -> Result<(TraceEstimate, bool)> {
    let (p, shifted) = match mode {
        ScanMode::Spectral => spectral_projection_shifted(spectrum, energy),
        ScanMode::Fermi { beta } => (fermi_function(spectrum, beta, energy)?, false),
    };
    Ok((index_trace_estimate(&p, u, k, region)?, shifted))
}

/// Sequential scan. In spectral mode energies with the same number of
/// occupied states share one evaluation.
pub fn hall_step_scan(
    spectrum: &LatticeSpectrum,
    energies: &[f64],
    mode: ScanMode,
    k: u32,
    u: &FluxUnitary,
    region: &TraceRegion,
) -> Result<StepCurve> {
    if energies.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("energy grid must be sorted"));
    }
    let mut estimates = Vec::with_capacity(energies.len());
    let mut shifted = Vec::with_capacity(energies.len());
    let mut last: Option<(usize, TraceEstimate)> = None;
    for &e in energies {
        let (est, flag) = match (mode, last) {
            (ScanMode::Spectral, Some((count, est)))
                if count == spectrum.count_below(e) && !on_eigenvalue(spectrum, e) =>
            {
                (est, false)
            }
            _ => step_point(spectrum, e, mode, k, u, region)?,
        };
        if matches!(mode, ScanMode::Spectral) && !flag {
            last = Some((spectrum.count_below(e), est));
        }
        estimates.push(est);
        shifted.push(flag);
    }
    Ok(StepCurve {
        energies: energies.to_vec(),
        estimates,
        shifted,
        mode,
        k,
    })
}

fn on_eigenvalue(spectrum: &LatticeSpectrum, e: f64) -> bool {
    spectrum
        .eigenvalues
        .iter()
        .any(|&x| (x - e).abs() < super::projection::DEGENERACY_GAP)
}

impl From<ProjectionKind> for ScanMode {
    fn from(kind: ProjectionKind) -> Self {
        match kind {
            ProjectionKind::Spectral => ScanMode::Spectral,
            ProjectionKind::Fermi { beta } => ScanMode::Fermi { beta },
        }
    }
}
