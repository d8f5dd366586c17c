//! Index oracles for scalar Toeplitz operators.
//!
//! Two independent routes to `Index(T_f)`:
//!
//! * [`toeplitz_index`]: minus the winding number of `f` around the origin,
//!   obtained by summing branch-corrected phase increments over a uniform
//!   grid that is refined until every increment is below `pi/2`.
//! * [`index_from_roots`]: `m - #{roots of z^m f inside the unit circle}`,
//!   with `m` the pole order at zero and roots taken as companion-matrix
//!   eigenvalues.
//!
//! Both report `NotFredholm` instead of guessing when `f` (numerically)
//! vanishes somewhere on the circle.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::{Euclid, Float};

use crate::error::{Error, Result};
use crate::linalg;
use crate::symbol::{min_modulus_with_angle, CircleFunction, LaurentSymbol, MIN_GRID};

/// Numerical thresholds shared by both oracles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexOptions {
    /// `f` counts as vanishing when `|f| < rel_tol * max|f|` on the grid.
    pub rel_tol: f64,
    /// Roots with `|1 - |zeta|| <= band` count as lying on the circle.
    pub band: f64,
    pub initial_grid: usize,
    pub max_grid: usize,
    /// Grid used to report `min_modulus` alongside a root count.
    pub modulus_grid: usize,
}

impl Default for IndexOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            band: 1e-9,
            initial_grid: 256,
            max_grid: 1 << 20,
            modulus_grid: 512,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FredholmStatus {
    Fredholm { index: i64 },
    NotFredholm { witness_theta: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexMethod {
    Winding,
    Roots,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexResult {
    pub status: FredholmStatus,
    pub min_modulus: f64,
    pub method: IndexMethod,
}

impl IndexResult {
    pub fn index(&self) -> Option<i64> {
        match self.status {
            FredholmStatus::Fredholm { index } => Some(index),
            FredholmStatus::NotFredholm { .. } => None,
        }
    }

    pub fn is_fredholm(&self) -> bool {
        self.index().is_some()
    }
}

/// Whether scan coordinates and ensembles use real or complex coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientField {
    Complex,
    Real,
}

/// Winding number of `f` around 0 on exactly `grid` points.
///
/// Fails with `NotFredholm` when `|f| < rel_tol * max|f|` at some sample and
/// with `GridTooCoarse` when some phase increment reaches `pi/2`.
pub fn winding_number(s: &impl CircleFunction, grid: usize, opts: &IndexOptions) -> Result<i64> {
    if grid < MIN_GRID {
        return Err(Error::invalid("grid must have at least 16 points"));
    }
    let samples = s.sample(grid)?;
    winding_of_samples(&samples, opts.rel_tol)
}

fn winding_of_samples(samples: &[Complex64], rel_tol: f64) -> Result<i64> {
    let grid = samples.len();
    let theta = |k: usize| 2.0 * PI * k as f64 / grid as f64;
    let scale = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ZeroSymbol);
    }
    let (k_min, min_modulus) = samples
        .iter()
        .map(|v| v.norm())
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, m)| if m < best.1 { (k, m) } else { best });
    if min_modulus < rel_tol * scale {
        return Err(Error::NotFredholm {
            witness_theta: theta(k_min),
            min_modulus,
        });
    }
    let mut total = 0.0;
    for k in 0..grid {
        let step = (samples[(k + 1) % grid] / samples[k]).arg();
        if step.abs() >= PI / 2.0 {
            return Err(Error::GridTooCoarse {
                grid,
                step,
                theta: theta(k),
            });
        }
        total += step;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Winding number with grid doubling from `initial_grid` up to `max_grid`.
/// Sampled symbols are only evaluated on their own grid. Returns the
/// winding number and the grid that produced it.
pub fn winding_number_adaptive(s: &impl CircleFunction, opts: &IndexOptions) -> Result<(i64, usize)> {
    let mut grid = s.native_grid().unwrap_or(opts.initial_grid.max(MIN_GRID));
    loop {
        match winding_number(s, grid, opts) {
            Err(Error::GridTooCoarse { .. }) if s.native_grid().is_none() && grid * 2 <= opts.max_grid => {
                grid *= 2;
            }
            other => return other.map(|w| (w, grid)),
        }
    }
}

fn starting_grid(s: &LaurentSymbol, opts: &IndexOptions) -> usize {
    let span = s.support().map_or(0, |(lo, hi)| (hi - lo) as usize);
    (16 * (span + 1)).next_power_of_two().max(opts.initial_grid)
}

/// `Index(T_f) = -winding(f)`, refined adaptively.
///
/// A phase jump that survives refinement to `max_grid` means the curve runs
/// through the origin, so it is reported as `NotFredholm` at that angle.
pub fn toeplitz_index(s: &LaurentSymbol, opts: &IndexOptions) -> Result<IndexResult> {
    if s.is_zero() {
        return Err(Error::ZeroSymbol);
    }
    let opts = IndexOptions {
        initial_grid: starting_grid(s, opts),
        ..*opts
    };
    Ok(index_by_winding(s, &opts))
}

/// Winding-route index for any circle function (sampled symbols included).
pub fn index_by_winding(s: &impl CircleFunction, opts: &IndexOptions) -> IndexResult {
    let result = winding_number_adaptive(s, opts);
    let grid_used = match &result {
        Ok((_, grid)) => *grid,
        Err(Error::GridTooCoarse { grid, .. }) => *grid,
        Err(_) => s.native_grid().unwrap_or(opts.initial_grid.max(MIN_GRID)),
    };
    let min_modulus = min_modulus_with_angle(s, grid_used).map_or(0.0, |m| m.0);
    let status = match result {
        Ok((w, _)) => FredholmStatus::Fredholm { index: -w },
        Err(Error::NotFredholm { witness_theta, .. }) => FredholmStatus::NotFredholm { witness_theta },
        Err(Error::GridTooCoarse { theta, .. }) => FredholmStatus::NotFredholm { witness_theta: theta },
        Err(_) => FredholmStatus::NotFredholm { witness_theta: 0.0 },
    };
    IndexResult {
        status,
        min_modulus,
        method: IndexMethod::Winding,
    }
}

/// Roots of `z^m f(z)` classified against the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct RootReport {
    pub roots: Vec<Complex64>,
    pub pole_order: u32,
    pub inside_count: usize,
    pub on_circle_count: usize,
    pub outside_count: usize,
}

impl RootReport {
    /// The root whose modulus is closest to one.
    pub fn nearest_to_circle(&self) -> Option<Complex64> {
        self.roots
            .iter()
            .copied()
            .min_by(|a, b| (1.0 - a.norm()).abs().total_cmp(&(1.0 - b.norm()).abs()))
    }
}

pub fn laurent_roots(s: &LaurentSymbol, band: f64) -> Result<RootReport> {
    if s.is_zero() {
        return Err(Error::ZeroSymbol);
    }
    let roots = linalg::polynomial_roots(&s.polynomial_coeffs())?;
    let mut report = RootReport {
        roots,
        pole_order: s.pole_order(),
        inside_count: 0,
        on_circle_count: 0,
        outside_count: 0,
    };
    for z in &report.roots {
        let r = z.norm();
        if (1.0 - r).abs() <= band {
            report.on_circle_count += 1;
        } else if r < 1.0 {
            report.inside_count += 1;
        } else {
            report.outside_count += 1;
        }
    }
    Ok(report)
}

/// Status from a root count alone; no circle sampling.
pub fn root_status(s: &LaurentSymbol, band: f64) -> Result<FredholmStatus> {
    let report = laurent_roots(s, band)?;
    Ok(status_from_report(&report))
}

fn status_from_report(report: &RootReport) -> FredholmStatus {
    if report.on_circle_count > 0 {
        let witness = report.nearest_to_circle().map_or(0.0, |z| z.arg());
        FredholmStatus::NotFredholm {
            witness_theta: Euclid::rem_euclid(&witness, &(2.0 * PI)),
        }
    } else {
        FredholmStatus::Fredholm {
            index: report.pole_order as i64 - report.inside_count as i64,
        }
    }
}

/// `Index(T_f) = m - #{roots inside}`; for `f` built from a shift polynomial
/// `A = sum c_i a^i` this is the number of roots of `sum c_i z^i` inside the
/// disk (minus the order of its pole at zero).
pub fn index_from_roots(s: &LaurentSymbol, opts: &IndexOptions) -> Result<IndexResult> {
    let report = laurent_roots(s, opts.band)?;
    let min_modulus = min_modulus_with_angle(s, opts.modulus_grid.max(MIN_GRID))?.0;
    Ok(IndexResult {
        status: status_from_report(&report),
        min_modulus,
        method: IndexMethod::Roots,
    })
}

/// Real codimension of the set where the index can jump by `k`: `k` for
/// complex coefficients, `floor((k + 1) / 2)` for real ones.
pub fn expected_jump_codimension(k: u32, field: CoefficientField) -> Result<u32> {
    if k == 0 {
        return Err(Error::invalid("jump size must be at least 1"));
    }
    Ok(match field {
        CoefficientField::Complex => k,
        CoefficientField::Real => (k + 1) / 2,
    })
}
