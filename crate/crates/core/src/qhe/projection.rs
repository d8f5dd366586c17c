//! Fermi projections, their smoothed versions, the flux unitary and the
//! operators `C = PUP + 1 - P` built from them.

use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::lattice::{LatticeModel, LatticeSpectrum};
use crate::error::{Error, Result};
use crate::linalg::{matmul, singular_values, CMatrix, Op};

/// Closest an energy may come to an eigenvalue for a sharp projection.
pub const DEGENERACY_GAP: f64 = 1e-12;
/// Shift applied to an energy that sits on an eigenvalue.
pub const DEGENERACY_SHIFT: f64 = 1e-9;
/// Fermi weights below this are dropped from the factor.
const FERMI_CUTOFF: f64 = 1e-30;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjectionKind {
    Spectral,
    Fermi { beta: f64 },
}

/// `P = F F*` held through its factor `F` (`n x r`): the occupied
/// eigenvectors for a spectral projection, eigenvectors scaled by the square
/// root of the Fermi weights otherwise.
#[derive(Clone, Debug)]
pub struct ProjectionLike {
    factor: CMatrix,
    pub kind: ProjectionKind,
    pub energy: f64,
}

impl ProjectionLike {
    pub fn factor(&self) -> &CMatrix {
        &self.factor
    }

    pub fn dim(&self) -> usize {
        self.factor.nrows()
    }

    pub fn rank(&self) -> usize {
        self.factor.ncols()
    }

    pub fn to_dense(&self) -> CMatrix {
        matmul(&self.factor, Op::Plain, &self.factor, Op::Adjoint)
    }
}

/// Sum of eigenprojectors with eigenvalue `<= energy`.
pub fn spectral_projection(spectrum: &LatticeSpectrum, energy: f64) -> Result<ProjectionLike> {
    if let Some(&eigenvalue) = spectrum
        .eigenvalues
        .iter()
        .min_by(|a, b| (*a - energy).abs().total_cmp(&(*b - energy).abs()))
    {
        if (eigenvalue - energy).abs() < DEGENERACY_GAP {
            return Err(Error::DegenerateFermi {
                energy,
                eigenvalue,
                gap: DEGENERACY_GAP,
            });
        }
    }
    let occupied = spectrum.count_below(energy);
    Ok(ProjectionLike {
        factor: spectrum.eigenvectors.columns(0, occupied).into_owned(),
        kind: ProjectionKind::Spectral,
        energy,
    })
}

/// Like [`spectral_projection`], moving `energy` up by [`DEGENERACY_SHIFT`]
/// (repeatedly if needed) when it sits on an eigenvalue. The flag reports a
/// shift.
pub fn spectral_projection_shifted(spectrum: &LatticeSpectrum, energy: f64) -> (ProjectionLike, bool) {
    let mut e = energy;
    loop {
        match spectral_projection(spectrum, e) {
            Ok(p) => return (p, e != energy),
            Err(_) => e += DEGENERACY_SHIFT,
        }
    }
}

/// `P_beta(E) = 1 / (exp(beta (H - E)) + 1)`.
pub fn fermi_function(spectrum: &LatticeSpectrum, beta: f64, energy: f64) -> Result<ProjectionLike> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::invalid("beta must be positive and finite"));
    }
    let weights: Vec<(usize, f64)> = spectrum
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &e)| (i, fermi_weight(beta * (e - energy))))
        .filter(|&(_, f)| f > FERMI_CUTOFF)
        .collect();
    let n = spectrum.dim();
    let factor = CMatrix::from_fn(n, weights.len(), |row, col| {
        let (i, f) = weights[col];
        spectrum.eigenvectors[(row, i)] * f.sqrt()
    });
    Ok(ProjectionLike {
        factor,
        kind: ProjectionKind::Fermi { beta },
        energy,
    })
}

fn fermi_weight(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Diagonal of `U = z/|z|` with `z = x + iy` measured from the flux origin.
#[derive(Clone, Debug, PartialEq)]
pub struct FluxUnitary {
    pub diagonal: Vec<Complex64>,
    pub origin: [f64; 2],
}

impl FluxUnitary {
    pub fn to_dense(&self) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_vec(self.diagonal.clone()))
    }

    /// `diag(U) * m`
    pub fn apply_left(&self, m: &CMatrix) -> CMatrix {
        let mut out = m.clone();
        for (i, mut row) in out.row_iter_mut().enumerate() {
            row *= self.diagonal[i];
        }
        out
    }
}

/// `origin_offset` is measured from the patch centre (itself a plaquette
/// centre); it must not land on a site.
pub fn flux_unitary(model: &LatticeModel, origin_offset: [f64; 2]) -> Result<FluxUnitary> {
    let [ox, oy] = origin_offset;
    let mut diagonal = Vec::with_capacity(model.coords.len());
    for &[x, y] in &model.coords {
        let z = Complex64::new(x - ox, y - oy);
        if z.norm() < 1e-12 {
            return Err(Error::OriginOnSite { x: ox, y: oy });
        }
        diagonal.push(z / z.norm());
    }
    Ok(FluxUnitary {
        diagonal,
        origin: origin_offset,
    })
}

/// `C = P U P + 1 - P`.
pub fn build_c(p: &CMatrix, u: &FluxUnitary) -> CMatrix {
    let n = p.nrows();
    let pup = matmul(p, Op::Plain, &u.apply_left(p), Op::Plain);
    pup + CMatrix::identity(n, n) - p
}

/// `C_beta(E) = P_beta U P_beta + 1 - P_beta^2`.
pub fn build_c_beta(spectrum: &LatticeSpectrum, beta: f64, energy: f64, u: &FluxUnitary) -> Result<CMatrix> {
    let p = fermi_function(spectrum, beta, energy)?.to_dense();
    let n = p.nrows();
    let pup = matmul(&p, Op::Plain, &u.apply_left(&p), Op::Plain);
    let p2 = matmul(&p, Op::Plain, &p, Op::Plain);
    Ok(pup + CMatrix::identity(n, n) - p2)
}

/// Smallest singular value of `C_beta(E)`: bounded away from zero where the
/// family stays invertible, collapsing where it degenerates.
pub fn c_beta_min_singular(spectrum: &LatticeSpectrum, beta: f64, energy: f64, u: &FluxUnitary) -> Result<f64> {
    let c = build_c_beta(spectrum, beta, energy, u)?;
    Ok(singular_values(&c).last().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;
    use crate::qhe::lattice::{build_lattice_model, Flux};

    fn small() -> (LatticeModel, LatticeSpectrum) {
        let m = build_lattice_model(8, Flux::new(1, 5).unwrap(), 0.5, 3).unwrap();
        let s = LatticeSpectrum::new(&m);
        (m, s)
    }

    #[test]
    fn spectral_projection_is_idempotent() {
        let (_, s) = small();
        let p = spectral_projection(&s, -0.7).unwrap().to_dense();
        let p2 = matmul(&p, Op::Plain, &p, Op::Plain);
        assert!(frobenius(&(p2 - &p)) <= 1e-12);
        assert!(frobenius(&(&p - p.adjoint())) <= 1e-13);
    }

    #[test]
    fn spectral_projection_extremes() {
        let (_, s) = small();
        let n = s.dim();
        let below = spectral_projection(&s, -10.0).unwrap();
        assert_eq!(below.rank(), 0);
        assert!(frobenius(&below.to_dense()) == 0.0);
        let above = spectral_projection(&s, 10.0).unwrap().to_dense();
        assert!(frobenius(&(above - CMatrix::identity(n, n))) < 1e-12);
    }

    #[test]
    fn degenerate_energy_is_reported_or_shifted() {
        let (_, s) = small();
        let e = s.eigenvalues[10];
        assert!(matches!(spectral_projection(&s, e), Err(Error::DegenerateFermi { .. })));
        let (p, shifted) = spectral_projection_shifted(&s, e);
        assert!(shifted);
        assert_eq!(p.rank(), s.count_below(e + DEGENERACY_SHIFT));
    }

    #[test]
    fn fermi_weights_in_unit_interval_and_converge() {
        let (_, s) = small();
        // mid-gap between two eigenvalues with a usable separation
        let (i, gap) = s
            .eigenvalues
            .windows(2)
            .enumerate()
            .map(|(i, w)| (i, w[1] - w[0]))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let e = s.eigenvalues[i] + gap / 2.0;
        let sharp = spectral_projection(&s, e).unwrap().to_dense();
        for beta in [20.0 / gap, 40.0 / gap] {
            let pf = fermi_function(&s, beta, e).unwrap().to_dense();
            let eig = crate::linalg::hermitian_eigen(&pf);
            assert!(eig.eigenvalues.iter().all(|&x| x > -1e-12 && x < 1.0 + 1e-12));
            let diff = crate::linalg::operator_norm(&(pf - &sharp));
            assert!(diff <= (-beta * gap / 2.0).exp() * (1.0 + 1e-9) + 1e-13, "beta {beta}: {diff}");
        }
        assert!(fermi_function(&s, 0.0, e).is_err());
    }

    #[test]
    fn flux_unitary_properties() {
        let (m, _) = small();
        let u = flux_unitary(&m, [0.0, 0.0]).unwrap();
        assert!(u.diagonal.iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
        let a = flux_unitary(&m, [0.2, 0.3]).unwrap();
        let b = flux_unitary(&m, [0.2, -0.3]).unwrap();
        // conjugate offset gives the conjugate phases at mirrored sites
        for (j, c) in m.coords.iter().enumerate() {
            let mirror = m.coords.iter().position(|d| d[0] == c[0] && d[1] == -c[1]).unwrap();
            assert!((a.diagonal[j].conj() - b.diagonal[mirror]).norm() < 1e-15);
        }
        assert!(matches!(flux_unitary(&m, [0.5, 0.5]), Err(Error::OriginOnSite { .. })));
    }

    #[test]
    fn c_at_trivial_projections() {
        let (m, s) = small();
        let n = s.dim();
        let u = flux_unitary(&m, [0.0, 0.0]).unwrap();
        let zero = CMatrix::zeros(n, n);
        assert!(frobenius(&(build_c(&zero, &u) - CMatrix::identity(n, n))) == 0.0);
        let one = CMatrix::identity(n, n);
        assert!(frobenius(&(build_c(&one, &u) - u.to_dense())) < 1e-14);
    }
}
