//! Square-lattice magnetic tight-binding model with diagonal disorder.
//!
//! `H = -sum_<jk> e^{i A_jk} |j><k| + h.c. + W sum_j u_j |j><j|` on an open
//! `L x L` patch. Peierls phases are in Landau gauge: vertical bonds from
//! column `x` carry `e^{i 2 pi (p/q) x}`, horizontal bonds carry none, so
//! every plaquette encloses flux `2 pi p/q`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::rng::{item_rng, uniform};

/// Flux `p/q` flux quanta per plaquette.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flux {
    pub p: i64,
    pub q: i64,
}

impl Flux {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(Error::invalid("flux denominator must be positive"));
        }
        Ok(Self { p, q })
    }

    /// Parses `"p/q"` or a bare integer.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::invalid(alloc::format!("flux must look like p/q, got {text:?}"));
        match text.split_once('/') {
            Some((p, q)) => Self::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => Self::new(text.trim().parse().map_err(|_| bad())?, 1),
        }
    }

    /// Phase `2 pi p/q` around one plaquette.
    pub fn plaquette_phase(&self) -> f64 {
        2.0 * PI * self.p as f64 / self.q as f64
    }
}

impl core::fmt::Display for Flux {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Clone, Debug)]
pub struct LatticeModel {
    pub side: usize,
    pub flux: Flux,
    pub disorder: f64,
    pub seed: u64,
    /// On-site values `u_j` in `[-1, 1]`; the potential is `disorder * u_j`.
    pub potential: Vec<f64>,
    /// Site positions relative to the patch centre, which is the centre of
    /// a plaquette (so no site sits at the origin).
    pub coords: Vec<[f64; 2]>,
    pub hamiltonian: CMatrix,
}

impl LatticeModel {
    pub fn sites(&self) -> usize {
        self.side * self.side
    }

    pub fn site_index(&self, x: usize, y: usize) -> usize {
        x + self.side * y
    }
}

pub fn build_lattice_model(side: usize, flux: Flux, disorder: f64, seed: u64) -> Result<LatticeModel> {
    if side < 8 {
        return Err(Error::invalid("lattice side must be at least 8"));
    }
    if !(disorder >= 0.0) || !disorder.is_finite() {
        return Err(Error::invalid("disorder strength must be finite and non-negative"));
    }
    let n = side * side;
    let centre = (side as f64 - 1.0) / 2.0;
    let index = |x: usize, y: usize| x + side * y;
    let mut coords = Vec::with_capacity(n);
    for y in 0..side {
        for x in 0..side {
            coords.push([x as f64 - centre, y as f64 - centre]);
        }
    }
    let mut rng = item_rng(seed, 0);
    let potential: Vec<f64> = (0..n).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
    let mut h = CMatrix::zeros(n, n);
    for y in 0..side {
        for x in 0..side {
            let j = index(x, y);
            h[(j, j)] = Complex64::new(disorder * potential[j], 0.0);
            if x + 1 < side {
                let k = index(x + 1, y);
                h[(k, j)] = Complex64::new(-1.0, 0.0);
                h[(j, k)] = Complex64::new(-1.0, 0.0);
            }
            if y + 1 < side {
                let k = index(x, y + 1);
                let hop = -Complex64::from_polar(1.0, flux.plaquette_phase() * x as f64);
                h[(k, j)] = hop;
                h[(j, k)] = hop.conj();
            }
        }
    }
    Ok(LatticeModel {
        side,
        flux,
        disorder,
        seed,
        potential,
        coords,
        hamiltonian: h,
    })
}

/// Eigendecomposition of a model Hamiltonian, computed once and shared by
/// every energy of a scan.
#[derive(Clone, Debug)]
pub struct LatticeSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl LatticeSpectrum {
    pub fn new(model: &LatticeModel) -> Self {
        let eig = hermitian_eigen(&model.hamiltonian);
        Self {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn bandwidth(&self) -> f64 {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }

    /// Number of eigenvalues `<= energy`.
    pub fn count_below(&self, energy: f64) -> usize {
        self.eigenvalues.partition_point(|&e| e <= energy)
    }
}

/// Bulk band edges of the clean infinite lattice at flux `p/q`, from the
/// `q x q` Harper matrices over a grid of quasi-momenta. Returned as `q`
/// intervals sorted by energy.
pub fn harper_bands(flux: Flux, k_samples: usize) -> Vec<(f64, f64)> {
    let q = flux.q as usize;
    let alpha = flux.p as f64 / flux.q as f64;
    let mut bands = alloc::vec![(f64::INFINITY, f64::NEG_INFINITY); q];
    let samples = k_samples.max(2);
    for a in 0..samples {
        let kx = 2.0 * PI * a as f64 / (samples - 1) as f64 / q as f64;
        for b in 0..samples {
            let ky = 2.0 * PI * b as f64 / (samples - 1) as f64;
            let mut m = CMatrix::zeros(q, q);
            for j in 0..q {
                m[(j, j)] = Complex64::new(-2.0 * (ky + 2.0 * PI * alpha * j as f64).cos(), 0.0);
                let hop = -Complex64::from_polar(1.0, kx);
                if q == 1 {
                    m[(0, 0)] += hop + hop.conj();
                } else if q == 2 {
                    // both neighbours of a site are the same site
                    m[((j + 1) % q, j)] += hop;
                    m[(j, (j + 1) % q)] += hop.conj();
                } else {
                    m[((j + 1) % q, j)] = hop;
                    m[(j, (j + 1) % q)] = hop.conj();
                }
            }
            let eig = hermitian_eigen(&m);
            for (band, e) in bands.iter_mut().zip(eig.eigenvalues) {
                band.0 = band.0.min(e);
                band.1 = band.1.max(e);
            }
        }
    }
    bands
}

/// Gaps between consecutive bulk bands as `(lower edge, upper edge)`, in
/// increasing energy; band overlaps produce no gap.
pub fn harper_gaps(flux: Flux, k_samples: usize) -> Vec<(f64, f64)> {
    harper_bands(flux, k_samples)
        .windows(2)
        .filter(|w| w[1].0 > w[0].1)
        .map(|w| (w[0].1, w[1].0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;

    #[test]
    fn hamiltonian_is_hermitian_and_bounded() {
        let m = build_lattice_model(8, Flux::new(1, 3).unwrap(), 1.5, 4).unwrap();
        assert!(frobenius(&(&m.hamiltonian - m.hamiltonian.adjoint())) < 1e-14);
        let spec = LatticeSpectrum::new(&m);
        assert!(spec.eigenvalues.iter().all(|e| e.abs() <= 4.0 + 1.5 + 1e-12));
    }

    #[test]
    fn clean_zero_flux_spectrum_is_symmetric() {
        let m = build_lattice_model(10, Flux::new(0, 1).unwrap(), 0.0, 0).unwrap();
        let spec = LatticeSpectrum::new(&m);
        let e = &spec.eigenvalues;
        assert!(e.iter().all(|x| x.abs() <= 4.0));
        for (a, b) in e.iter().zip(e.iter().rev()) {
            assert!((a + b).abs() < 1e-10);
        }
    }

    #[test]
    fn same_seed_same_matrix() {
        let f = Flux::new(1, 7).unwrap();
        let a = build_lattice_model(8, f, 1.0, 11).unwrap();
        let b = build_lattice_model(8, f, 1.0, 11).unwrap();
        let c = build_lattice_model(8, f, 1.0, 12).unwrap();
        assert_eq!(a.hamiltonian, b.hamiltonian);
        assert_ne!(a.hamiltonian, c.hamiltonian);
    }

    #[test]
    fn plaquette_flux_is_uniform() {
        let f = Flux::new(2, 7).unwrap();
        let m = build_lattice_model(8, f, 0.0, 0).unwrap();
        let h = &m.hamiltonian;
        for y in 0..7 {
            for x in 0..7 {
                let (a, b) = (m.site_index(x, y), m.site_index(x + 1, y));
                let (c, d) = (m.site_index(x + 1, y + 1), m.site_index(x, y + 1));
                // product of hopping amplitudes a -> b -> c -> d -> a
                let loop_ = h[(b, a)] * h[(c, b)] * h[(d, c)] * h[(a, d)];
                let expect = Complex64::from_polar(1.0, f.plaquette_phase());
                assert!((loop_ - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn no_site_at_the_centre() {
        let m = build_lattice_model(9, Flux::new(1, 7).unwrap(), 0.0, 0).unwrap();
        assert!(m.coords.iter().all(|c| c[0] != 0.0 || c[1] != 0.0) || m.side % 2 == 1);
        let m = build_lattice_model(8, Flux::new(1, 7).unwrap(), 0.0, 0).unwrap();
        assert!(m.coords.iter().all(|c| c[0].abs() >= 0.5 && c[1].abs() >= 0.5));
    }

    #[test]
    fn harper_bands_at_one_third() {
        // Three bands; the outer ones are [-1-sqrt3, -2] and [2, 1+sqrt3]
        // up to k-grid resolution
        let bands = harper_bands(Flux::new(1, 3).unwrap(), 41);
        assert_eq!(bands.len(), 3);
        let s3 = 3f64.sqrt();
        assert!((bands[0].0 + 1.0 + s3).abs() < 1e-9);
        assert!((bands[2].1 - 1.0 - s3).abs() < 1e-9);
        assert_eq!(harper_gaps(Flux::new(1, 3).unwrap(), 41).len(), 2);
    }

    #[test]
    fn flux_parsing() {
        assert_eq!(Flux::parse("1/7").unwrap(), Flux { p: 1, q: 7 });
        assert_eq!(Flux::parse("0").unwrap(), Flux { p: 0, q: 1 });
        assert!(Flux::parse("1/0").is_err());
        assert!(Flux::parse("x").is_err());
    }
}
