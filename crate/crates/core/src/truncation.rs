//! Finite sections of Toeplitz operators.
//!
//! The `N x N` section of `T_f` has entry `(j, k) = c_{j-k}`. For a
//! Fredholm symbol with index `kappa`, exactly `|kappa|` singular values of
//! the section decay to zero as `N` grows; whether they belong to the kernel
//! or the cokernel shows up in where the singular vectors live (near `e_0`
//! for genuine kernel vectors, near the cut at `e_{N-1}` for artifacts of
//! the truncation).

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::index::{root_status, FredholmStatus};
use crate::linalg::{frobenius, operator_norm, singular_values, svd, CMatrix};
use crate::symbol::LaurentSymbol;

/// Smallest singular values reported by [`index_signature`].
pub const REPORTED_SIGMAS: usize = 8;
/// Singular values within this factor of the threshold make a signature
/// inconclusive.
pub const GAP_FACTOR: f64 = 10.0;
/// The first singular value above the threshold must not have shrunk by
/// more than this factor between the `N/2` and `N` sections; otherwise it is
/// still collapsing and the count cannot be trusted.
pub const SETTLE_RATIO: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzTruncation {
    size: usize,
    entries: CMatrix,
}

impl ToeplitzTruncation {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }
}

/// Upper-left `size x size` corner; coefficients with `|i| >= size` fall
/// outside and are dropped.
pub fn build_truncation(s: &LaurentSymbol, size: usize) -> Result<ToeplitzTruncation> {
    if size < 2 {
        return Err(Error::invalid("truncation size must be at least 2"));
    }
    let entries = CMatrix::from_fn(size, size, |j, k| s.coeff(j as i32 - k as i32));
    Ok(ToeplitzTruncation { size, entries })
}

/// Finite-section witness of the index: how many singular values collapse
/// and on which side (kernel or cokernel) they sit.
///
/// A root of the symbol at distance `d` from the circle gives a singular
/// value near `(1 - d)^N`, so for `d` of order `1/N` the collapse is not yet
/// visible. Such cases are refused: either a singular value lies within
/// [`GAP_FACTOR`] of `sigma_tol`, or the smallest one above `sigma_tol` is
/// still shrinking between the `N/2` and `N` sections.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexSignature {
    pub size: usize,
    pub magnitude: usize,
    /// `+1` kernel, `-1` cokernel, `0` when nothing collapses.
    pub sign: i32,
    /// Up to [`REPORTED_SIGMAS`] smallest singular values, ascending.
    pub smallest_sigmas: Vec<f64>,
}

impl IndexSignature {
    pub fn index(&self) -> i64 {
        self.sign as i64 * self.magnitude as i64
    }
}

pub fn index_signature(s: &LaurentSymbol, size: usize, sigma_tol: f64) -> Result<IndexSignature> {
    if !(sigma_tol > 0.0) {
        return Err(Error::invalid("sigma_tol must be positive"));
    }
    let (lo, hi) = s.support().ok_or(Error::ZeroSymbol)?;
    if size < (4 * (hi - lo) as usize).max(2) {
        return Err(Error::invalid("truncation size must be at least four times the symbol's support width"));
    }
    if let FredholmStatus::NotFredholm { witness_theta } = root_status(s, 1e-9)? {
        return Err(Error::NotFredholm {
            witness_theta,
            min_modulus: 0.0,
        });
    }
    let section = build_truncation(s, size)?.into_entries();
    let decomposition = svd(&section);
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| decomposition.singular_values[a].total_cmp(&decomposition.singular_values[b]));
    let sigmas: Vec<f64> = order.iter().map(|&i| decomposition.singular_values[i]).collect();
    if let Some(&sigma) = sigmas
        .iter()
        .find(|&&x| x >= sigma_tol / GAP_FACTOR && x <= sigma_tol * GAP_FACTOR)
    {
        return Err(Error::Inconclusive { sigma_tol, sigma });
    }
    let collapsed = sigmas.iter().filter(|&&x| x < sigma_tol).count();
    if collapsed < size {
        let mut half = singular_values(&build_truncation(s, size / 2)?.into_entries());
        half.reverse();
        if let Some(&before) = half.get(collapsed) {
            let next = sigmas[collapsed];
            if next < SETTLE_RATIO * before {
                return Err(Error::Inconclusive { sigma_tol, sigma: next });
            }
        }
    }
    let small: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| decomposition.singular_values[i] < sigma_tol)
        .collect();
    let sign = if small.is_empty() {
        0
    } else {
        // Pad the singular vectors into the section of twice the size: true
        // kernel vectors of T_f stay near-null, truncation artifacts do not.
        let big = build_truncation(s, 2 * size)?.into_entries();
        let pad = |m: &CMatrix| CMatrix::from_fn(2 * size, small.len(), |r, c| if r < size { m[(r, small[c])] } else { Complex64::default() });
        let right = pad(&decomposition.v);
        let left = pad(&decomposition.u);
        let kernel_residual = frobenius(&(&big * right));
        let cokernel_residual = frobenius(&(big.adjoint() * left));
        if kernel_residual < cokernel_residual {
            1
        } else {
            -1
        }
    };
    Ok(IndexSignature {
        size,
        magnitude: small.len(),
        sign,
        smallest_sigmas: sigmas.into_iter().take(REPORTED_SIGMAS).collect(),
    })
}

/// Approximate kernel vector `v_n = z0^n` of `A = c1 a + c0` on the section.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelCandidate {
    pub vector: Vec<Complex64>,
    /// `||A_N v|| / ||v||`
    pub residual: f64,
    pub z0: Complex64,
}

/// `z0 = -c0/c1` and `v = (1, z0, z0^2, ...)`; only the last row of the
/// section sees the cut, so the residual is `|c0| |z0|^(N-1) / ||v||`.
pub fn kernel_vector_degree1(c0: Complex64, c1: Complex64, size: usize) -> Result<KernelCandidate> {
    if !(c1.norm() > c0.norm()) {
        return Err(Error::WrongRegime("a kernel vector needs |c1| > |c0|".into()));
    }
    if size < 2 {
        return Err(Error::invalid("truncation size must be at least 2"));
    }
    let z0 = -c0 / c1;
    let vector: Vec<Complex64> = (0..size).map(|n| z0.powi(n as i32)).collect();
    let v_norm = vector.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    // rows j < N-1 vanish exactly: z0^j (c0 + c1 z0) = 0
    let residual = c0.norm() * vector[size - 1].norm() / v_norm;
    Ok(KernelCandidate { vector, residual, z0 })
}

/// `||A_N B - I||` for `A = c1 a + c0` and the partial Neumann series
/// `B = sum_{n < terms} (-1)^n c1^n / c0^(n+1) a^n`.
pub fn inverse_series_check(c0: Complex64, c1: Complex64, size: usize, terms: usize) -> Result<f64> {
    if !(c0.norm() > c1.norm()) {
        return Err(Error::WrongRegime("the Neumann series needs |c0| > |c1|".into()));
    }
    if size < 2 || terms < 1 {
        return Err(Error::invalid("need size >= 2 and at least one term"));
    }
    let ratio = -c1 / c0;
    let coeffs: Vec<Complex64> = (0..terms.min(size)).map(|n| ratio.powi(n as i32) / c0).collect();
    // a^n sits on the n-th superdiagonal, i.e. symbol exponent -n
    let series = CMatrix::from_fn(size, size, |j, k| {
        let n = k as i64 - j as i64;
        if n >= 0 && (n as usize) < coeffs.len() {
            coeffs[n as usize]
        } else {
            Complex64::default()
        }
    });
    let a = build_truncation(&LaurentSymbol::new(-1, alloc::vec![c1, c0])?, size)?.into_entries();
    let residual = a * series - CMatrix::identity(size, size);
    Ok(operator_norm(&residual))
}
