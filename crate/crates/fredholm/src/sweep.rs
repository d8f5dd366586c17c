//! Parallel versions of the core scans. Work items are evaluated on the
//! rayon pool and assembled in item order, so results do not depend on the
//! thread count.

use std::collections::BTreeMap;

use fredholm_core::portrait::{
    assemble_grid, grid_cell, histogram_from_paths, random_path_item, Axis, JumpHistogram, ParameterFamily, PortraitGrid,
};
use fredholm_core::qhe::{step_point, FluxUnitary, LatticeSpectrum, ScanMode, StepCurve, TraceRegion};
use fredholm_core::{CoefficientField, Error, Result};
use rayon::prelude::*;

pub fn scan_grid(fam: &ParameterFamily, axes: [Axis; 2]) -> Result<PortraitGrid> {
    let n = axes[0].resolution * axes[1].resolution;
    let outcomes = (0..n)
        .into_par_iter()
        .map(|item| grid_cell(fam, &axes, item))
        .collect::<Result<Vec<_>>>()?;
    assemble_grid(fam, axes, &outcomes)
}

pub fn jump_scan(field: CoefficientField, degree: usize, paths: usize, steps: usize, seed: u64) -> Result<JumpHistogram> {
    if degree < 2 {
        return Err(Error::InvalidArgument("jump scans need degree at least 2".into()));
    }
    if steps < 1 {
        return Err(Error::InvalidArgument("paths need at least one step".into()));
    }
    let outcomes = (0..paths as u64)
        .into_par_iter()
        .map(|item| random_path_item(field, degree, steps, seed, item))
        .collect::<Result<Vec<_>>>()?;
    Ok(histogram_from_paths(field, degree, steps, seed, &outcomes))
}

/// Same output as the sequential scan. In spectral mode each distinct
/// occupation number is evaluated once.
pub fn hall_scan(
    spectrum: &LatticeSpectrum,
    energies: &[f64],
    mode: ScanMode,
    k: u32,
    u: &FluxUnitary,
    region: &TraceRegion,
) -> Result<StepCurve> {
    if energies.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("energy grid must be sorted".into()));
    }
    let points = match mode {
        ScanMode::Fermi { .. } => energies
            .par_iter()
            .map(|&e| step_point(spectrum, e, mode, k, u, region))
            .collect::<Result<Vec<_>>>()?,
        ScanMode::Spectral => {
            let mut representative: BTreeMap<usize, f64> = BTreeMap::new();
            for &e in energies {
                if !on_eigenvalue(spectrum, e) {
                    representative.entry(spectrum.count_below(e)).or_insert(e);
                }
            }
            let reps: Vec<(usize, f64)> = representative.into_iter().collect();
            let values = reps
                .par_iter()
                .map(|&(count, e)| Ok((count, step_point(spectrum, e, mode, k, u, region)?.0)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            energies
                .par_iter()
                .map(|&e| {
                    if on_eigenvalue(spectrum, e) {
                        step_point(spectrum, e, mode, k, u, region)
                    } else {
                        Ok((values[&spectrum.count_below(e)], false))
                    }
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let (estimates, shifted) = points.into_iter().unzip();
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
        .any(|&x| (x - e).abs() < fredholm_core::qhe::DEGENERACY_GAP)
}
