//! Index portraits of parameter families, jump statistics along random
//! paths, and the wrap-around construction for `C^l` symbols.
//!
//! Every cell of a grid and every path of an ensemble is an independent work
//! item: the per-item functions here take an item index and draw their
//! randomness from `(seed, item)`, so callers may run them in any order or in
//! parallel and assemble identical results.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::{Euclid, Float};

use crate::error::{Error, Result};
use crate::index::{root_status, toeplitz_index, winding_number, CoefficientField, FredholmStatus, IndexOptions};
use crate::rng::{complex_normal, item_rng, standard_normal, uniform};
use crate::symbol::{LaurentSymbol, SampledSymbol};

/// Export code for cells that are not Fredholm (or whose symbol vanishes).
pub const NOT_FREDHOLM: i64 = i64::MIN;
/// Bisection rounds used to localise a crossing inside one path step.
pub const BISECTION_ROUNDS: u32 = 12;
/// Fraction of portrait cells re-classified by the winding oracle.
pub const CROSS_CHECK_FRACTION: f64 = 0.01;

/// `base + sum_j t_j direction_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterFamily {
    pub name: alloc::string::String,
    pub base: LaurentSymbol,
    pub directions: Vec<LaurentSymbol>,
    pub field: CoefficientField,
}

impl ParameterFamily {
    pub fn new(
        name: impl Into<alloc::string::String>,
        base: LaurentSymbol,
        directions: Vec<LaurentSymbol>,
        field: CoefficientField,
    ) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::invalid("a family needs at least one direction"));
        }
        if !independent(&directions) {
            return Err(Error::invalid("family directions must be linearly independent"));
        }
        Ok(Self {
            name: name.into(),
            base,
            directions,
            field,
        })
    }

    /// `A = a^2 + c1 a + c0` with real `(c1, c0)`.
    pub fn quadratic_real() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            name: "quadratic-real".into(),
            base: LaurentSymbol::monomial(-2, one),
            directions: alloc::vec![LaurentSymbol::monomial(-1, one), LaurentSymbol::monomial(0, one)],
            field: CoefficientField::Real,
        }
    }

    /// `A = c1 a + c0`, the degree-one family.
    pub fn linear_real() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            name: "linear-real".into(),
            base: LaurentSymbol::zero(),
            directions: alloc::vec![LaurentSymbol::monomial(-1, one), LaurentSymbol::monomial(0, one)],
            field: CoefficientField::Real,
        }
    }

    pub fn dimension(&self) -> usize {
        self.directions.len()
    }

    pub fn map(&self, t: &[Complex64]) -> Result<LaurentSymbol> {
        if t.len() != self.directions.len() {
            return Err(Error::invalid("parameter vector has the wrong length"));
        }
        if self.field == CoefficientField::Real && t.iter().any(|x| x.im != 0.0) {
            return Err(Error::invalid("real family takes real parameters"));
        }
        Ok(self
            .directions
            .iter()
            .zip(t)
            .fold(self.base.clone(), |acc, (d, &c)| acc.sum(&d.scale(c))))
    }
}

/// Gaussian elimination on the coefficient vectors.
fn independent(directions: &[LaurentSymbol]) -> bool {
    let (lo, hi) = directions
        .iter()
        .filter_map(|d| d.support())
        .fold((i32::MAX, i32::MIN), |(a, b), (l, h)| (a.min(l), b.max(h)));
    if lo > hi {
        return false;
    }
    let mut rows: Vec<Vec<Complex64>> = directions.iter().map(|d| (lo..=hi).map(|i| d.coeff(i)).collect()).collect();
    let width = (hi - lo + 1) as usize;
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).max_by(|&a, &b| rows[a][col].norm().total_cmp(&rows[b][col].norm())) else {
            break;
        };
        if rows[pivot][col].norm() < 1e-12 {
            continue;
        }
        rows.swap(rank, pivot);
        for r in rank + 1..rows.len() {
            let factor = rows[r][col] / rows[rank][col];
            for c in col..width {
                let v = rows[rank][c];
                rows[r][c] -= factor * v;
            }
        }
        rank += 1;
    }
    rank == directions.len()
}

/// Scan range of one parameter, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub resolution: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, resolution: usize) -> Result<Self> {
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(Error::invalid("axis needs finite min < max"));
        }
        if resolution < 2 {
            return Err(Error::invalid("axis resolution must be at least 2"));
        }
        Ok(Self { min, max, resolution })
    }

    pub fn value(&self, i: usize) -> f64 {
        self.min + (self.max - self.min) * i as f64 / (self.resolution - 1) as f64
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.resolution - 1) as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Index(i64),
    NotFredholm,
    /// The mapped symbol vanished identically.
    ZeroSymbol,
}

impl Cell {
    pub fn code(self) -> i64 {
        match self {
            Cell::Index(k) => k,
            _ => NOT_FREDHOLM,
        }
    }

    pub fn index(self) -> Option<i64> {
        match self {
            Cell::Index(k) => Some(k),
            _ => None,
        }
    }
}

/// Cells are stored with the first axis outer: `cells[i * res1 + j]` is the
/// point `(axes[0].value(i), axes[1].value(j))`.
#[derive(Clone, Debug, PartialEq)]
pub struct PortraitGrid {
    pub family: ParameterFamily,
    pub axes: [Axis; 2],
    pub cells: Vec<Cell>,
    /// Cells re-classified by the winding oracle.
    pub cross_checked: usize,
    /// Cells where the two oracles disagreed.
    pub cross_check_mismatches: usize,
}

impl PortraitGrid {
    pub fn shape(&self) -> (usize, usize) {
        (self.axes[0].resolution, self.axes[1].resolution)
    }

    pub fn cell(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.axes[1].resolution + j]
    }

    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.axes[0].value(i), self.axes[1].value(j))
    }
}

/// One evaluated cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellOutcome {
    pub cell: Cell,
    pub cross_checked: bool,
    pub mismatch: bool,
}

fn check_scan_family(fam: &ParameterFamily) -> Result<()> {
    if fam.dimension() != 2 {
        return Err(Error::invalid("portrait scans need a family with exactly two scan directions"));
    }
    Ok(())
}

/// Classifies cell `item` (row-major) of the grid by the root oracle; a
/// deterministic 1% of cells are re-classified by winding.
pub fn grid_cell(fam: &ParameterFamily, axes: &[Axis; 2], item: usize) -> Result<CellOutcome> {
    check_scan_family(fam)?;
    let (i, j) = (item / axes[1].resolution, item % axes[1].resolution);
    let t = [Complex64::new(axes[0].value(i), 0.0), Complex64::new(axes[1].value(j), 0.0)];
    let symbol = fam.map(&t)?;
    let opts = IndexOptions::default();
    let cell = match root_status(&symbol, opts.band) {
        Ok(FredholmStatus::Fredholm { index }) => Cell::Index(index),
        Ok(FredholmStatus::NotFredholm { .. }) => Cell::NotFredholm,
        Err(Error::ZeroSymbol) => Cell::ZeroSymbol,
        Err(e) => return Err(e),
    };
    let cross_checked = uniform(&mut item_rng(CROSS_CHECK_SEED, item as u64), 0.0, 1.0) < CROSS_CHECK_FRACTION;
    let mismatch = cross_checked
        && match (cell, toeplitz_index(&symbol, &opts)) {
            (Cell::Index(k), Ok(r)) => r.index() != Some(k),
            _ => false,
        };
    Ok(CellOutcome {
        cell,
        cross_checked,
        mismatch,
    })
}

const CROSS_CHECK_SEED: u64 = 0x5eed_0f_c0de;

/// Assembles a grid from per-cell outcomes in row-major order.
pub fn assemble_grid(fam: &ParameterFamily, axes: [Axis; 2], outcomes: &[CellOutcome]) -> Result<PortraitGrid> {
    if outcomes.len() != axes[0].resolution * axes[1].resolution {
        return Err(Error::invalid("cell count does not match the grid shape"));
    }
    Ok(PortraitGrid {
        family: fam.clone(),
        axes,
        cells: outcomes.iter().map(|o| o.cell).collect(),
        cross_checked: outcomes.iter().filter(|o| o.cross_checked).count(),
        cross_check_mismatches: outcomes.iter().filter(|o| o.mismatch).count(),
    })
}

pub fn scan_grid(fam: &ParameterFamily, axes: [Axis; 2]) -> Result<PortraitGrid> {
    check_scan_family(fam)?;
    let n = axes[0].resolution * axes[1].resolution;
    let outcomes = (0..n).map(|item| grid_cell(fam, &axes, item)).collect::<Result<Vec<_>>>()?;
    assemble_grid(fam, axes, &outcomes)
}

/// Adjacent cells (sharing an edge) with different finite indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub jump: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Boundaries {
    pub edges: Vec<BoundaryEdge>,
    /// Cells without a finite index; they take no part in pairing.
    pub not_fredholm: Vec<(usize, usize)>,
}

pub fn extract_boundaries(grid: &PortraitGrid) -> Boundaries {
    let (r0, r1) = grid.shape();
    let mut out = Boundaries::default();
    for i in 0..r0 {
        for j in 0..r1 {
            let Some(here) = grid.cell(i, j).index() else {
                out.not_fredholm.push((i, j));
                continue;
            };
            for (ni, nj) in [(i + 1, j), (i, j + 1)] {
                if ni >= r0 || nj >= r1 {
                    continue;
                }
                if let Some(there) = grid.cell(ni, nj).index() {
                    if there != here {
                        out.edges.push(BoundaryEdge {
                            a: (i, j),
                            b: (ni, nj),
                            jump: (there - here).unsigned_abs(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Jump sizes seen along random straight paths in coefficient space.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpHistogram {
    pub ensemble: CoefficientField,
    pub degree: usize,
    pub counts: BTreeMap<u64, u64>,
    pub unresolved: u64,
    pub paths: usize,
    pub steps: usize,
    pub seed: u64,
}

impl JumpHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, size: u64) -> u64 {
        self.counts.get(&size).copied().unwrap_or(0)
    }
}

/// Jumps found along one path.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PathJumps {
    pub jumps: Vec<u64>,
    pub unresolved: u64,
}

/// Symbol `sum_j c_j z^{-j}` of `A = sum_j c_j a^j`.
fn shift_symbol(coeffs: &[Complex64]) -> Result<LaurentSymbol> {
    let n = coeffs.len() as i32 - 1;
    LaurentSymbol::new(-n, coeffs.iter().rev().copied().collect())
}

fn classify(start: &[Complex64], end: &[Complex64], t: f64) -> Option<i64> {
    let c: Vec<Complex64> = start.iter().zip(end).map(|(a, b)| a + (b - a) * t).collect();
    let s = shift_symbol(&c).ok()?;
    match root_status(&s, IndexOptions::default().band) {
        Ok(FredholmStatus::Fredholm { index }) => Some(index),
        _ => None,
    }
}

/// Walks `start -> end` in `steps` uniform steps. Index changes between
/// consecutive Fredholm samples (at most one non-Fredholm sample between
/// them) are refined by bisection so that separate crossings inside one
/// step are counted separately; whatever difference remains across a bracket
/// of width `step / 2^12` is recorded as one jump of that size. Brackets that
/// cannot be refined (non-Fredholm midpoints, or longer non-Fredholm runs)
/// count as unresolved.
pub fn path_jumps(start: &[Complex64], end: &[Complex64], steps: usize) -> Result<PathJumps> {
    if start.len() != end.len() || start.len() < 2 {
        return Err(Error::invalid("path endpoints need matching lengths of at least two"));
    }
    if steps < 1 {
        return Err(Error::invalid("paths need at least one step"));
    }
    let samples: Vec<Option<i64>> = (0..=steps).map(|s| classify(start, end, s as f64 / steps as f64)).collect();
    let mut out = PathJumps::default();
    let mut last: Option<(usize, i64)> = None;
    for (s, value) in samples.iter().enumerate() {
        let Some(k) = *value else { continue };
        if let Some((prev, k_prev)) = last {
            let gap = s - prev;
            if gap > 2 {
                if k != k_prev {
                    out.unresolved += 1;
                }
            } else if k != k_prev {
                let lo = prev as f64 / steps as f64;
                let hi = s as f64 / steps as f64;
                refine(start, end, (lo, k_prev), (hi, k), BISECTION_ROUNDS, &mut out);
            }
        }
        last = Some((s, k));
    }
    Ok(out)
}

fn refine(start: &[Complex64], end: &[Complex64], a: (f64, i64), b: (f64, i64), rounds: u32, out: &mut PathJumps) {
    if a.1 == b.1 {
        return;
    }
    if rounds == 0 {
        out.jumps.push((b.1 - a.1).unsigned_abs());
        return;
    }
    // a crossing can sit exactly on the midpoint; try two off-centre splits
    // before giving up on the bracket
    for frac in SPLITS {
        let mid = a.0 + frac * (b.0 - a.0);
        if let Some(k) = classify(start, end, mid) {
            refine(start, end, a, (mid, k), rounds - 1, out);
            refine(start, end, (mid, k), b, rounds - 1, out);
            return;
        }
    }
    out.unresolved += 1;
}

const SPLITS: [f64; 3] = [0.5, 0.375, 0.625];

/// Random endpoints for path `item`: standard Gaussian coefficients
/// `c_0..c_degree` over the ensemble's field.
pub fn random_path(field: CoefficientField, degree: usize, seed: u64, item: u64) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut rng = item_rng(seed, item);
    let mut draw = || -> Vec<Complex64> {
        (0..=degree)
            .map(|_| match field {
                CoefficientField::Complex => complex_normal(&mut rng),
                CoefficientField::Real => Complex64::new(standard_normal(&mut rng), 0.0),
            })
            .collect()
    };
    let start = draw();
    let end = draw();
    (start, end)
}

pub fn random_path_item(field: CoefficientField, degree: usize, steps: usize, seed: u64, item: u64) -> Result<PathJumps> {
    let (start, end) = random_path(field, degree, seed, item);
    path_jumps(&start, &end, steps)
}

pub fn histogram_from_paths(
    field: CoefficientField,
    degree: usize,
    steps: usize,
    seed: u64,
    paths: &[PathJumps],
) -> JumpHistogram {
    let mut counts = BTreeMap::new();
    let mut unresolved = 0;
    for p in paths {
        unresolved += p.unresolved;
        for &j in &p.jumps {
            *counts.entry(j).or_insert(0) += 1;
        }
    }
    JumpHistogram {
        ensemble: field,
        degree,
        counts,
        unresolved,
        paths: paths.len(),
        steps,
        seed,
    }
}

pub fn random_path_jump_scan(field: CoefficientField, degree: usize, paths: usize, steps: usize, seed: u64) -> Result<JumpHistogram> {
    if degree < 2 {
        return Err(Error::invalid("jump scans need degree at least 2"));
    }
    if steps < 1 {
        return Err(Error::invalid("paths need at least one step"));
    }
    let outcomes = (0..paths as u64)
        .map(|item| random_path_item(field, degree, steps, seed, item))
        .collect::<Result<Vec<_>>>()?;
    Ok(histogram_from_paths(field, degree, steps, seed, &outcomes))
}

/// Paths in the monic real quadratic family `a^2 + c1 a + c0` from
/// `(u, 1 - h)` to `(u', 1 + h')` with `u, u'` uniform in `(-2, 2)` and
/// `h, h'` uniform in `(h_max / 4, h_max)`: each one crosses the arc
/// `{c0 = 1, |c1| < 2}` where a conjugate pair of roots meets the circle.
pub fn conjugate_arc_path(seed: u64, item: u64, h_max: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut rng = item_rng(seed, item);
    let u0 = uniform(&mut rng, -2.0, 2.0);
    let u1 = uniform(&mut rng, -2.0, 2.0);
    let h0 = uniform(&mut rng, h_max / 4.0, h_max);
    let h1 = uniform(&mut rng, h_max / 4.0, h_max);
    let c = |x: f64| Complex64::new(x, 0.0);
    (
        alloc::vec![c(1.0 - h0), c(u0), c(1.0)],
        alloc::vec![c(1.0 + h1), c(u1), c(1.0)],
    )
}

/// Smooth step: 0 for `t <= 0`, 1 for `t >= 1`, built from `exp(-1/t)`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Base symbol of the wrap-around construction: 0 for `|theta| <= delta/2`,
/// 1 for `|theta| >= delta`, [`smooth_step`] in between.
pub fn flat_bump(theta: f64, delta: f64) -> f64 {
    let t = Euclid::rem_euclid(&(theta + PI), &(2.0 * PI)) - PI;
    smooth_step((t.abs() - delta / 2.0) / (delta / 2.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WindingChange {
    Defined(i64),
    NotFredholm { witness_theta: f64 },
}

impl WindingChange {
    pub fn value(self) -> Option<i64> {
        match self {
            WindingChange::Defined(w) => Some(w),
            WindingChange::NotFredholm { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WrapOutcome {
    /// `winding(f + eps e^{iN theta}) - winding(f + eps)`.
    pub winding_change: WindingChange,
    /// `eps * sum_{j <= l} N^j`.
    pub perturbation_cl_norm: f64,
    /// Sampling grid that resolved the windings.
    pub grid: usize,
}

/// Grid used first for frequency `big_n`.
pub fn wrap_grid(big_n: u64) -> usize {
    ((64 * big_n.max(16)) as usize).next_power_of_two()
}

pub fn wraparound_experiment(ell: u32, delta: f64, big_n: u64, eps: f64) -> Result<WrapOutcome> {
    if !(delta > 0.0 && delta < PI / 4.0) {
        return Err(Error::invalid("delta must lie in (0, pi/4)"));
    }
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::invalid("eps must be finite and non-negative"));
    }
    let norm = eps * (0..=ell).map(|j| (big_n as f64).powi(j as i32)).sum::<f64>();
    let opts = IndexOptions::default();
    let mut grid = wrap_grid(big_n);
    loop {
        let perturbed = |n: u64| {
            SampledSymbol::from_fn(grid, ell, |theta| {
                Complex64::new(flat_bump(theta, delta), 0.0) + Complex64::from_polar(eps, n as f64 * theta)
            })
        };
        let windings = perturbed(big_n)
            .and_then(|s| winding_number(&s, grid, &opts))
            .and_then(|w| Ok((w, winding_number(&perturbed(0)?, grid, &opts)?)));
        match windings {
            Ok((w, w_ref)) => {
                return Ok(WrapOutcome {
                    winding_change: WindingChange::Defined(w - w_ref),
                    perturbation_cl_norm: norm,
                    grid,
                })
            }
            Err(Error::GridTooCoarse { .. }) if grid < opts.max_grid => grid *= 2,
            Err(Error::NotFredholm { witness_theta, .. }) => {
                return Ok(WrapOutcome {
                    winding_change: WindingChange::NotFredholm { witness_theta },
                    perturbation_cl_norm: norm,
                    grid,
                })
            }
            Err(e) => return Err(e),
        }
    }
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::invalid("slope fit needs at least two points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("slope fit needs distinct abscissae"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}
