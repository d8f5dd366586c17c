//! Dense complex linear algebra: companion-matrix roots, singular values,
//! Hermitian eigendecomposition and a zgemm front end over nalgebra storage.

use alloc::vec::Vec;

use matrixmultiply::CGemmOption;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const SCHUR_MAX_ITER: usize = 10_000;

/// Roots of `sum_k coeffs[k] z^k` (ascending) as eigenvalues of the
/// companion matrix of the monic normalisation. Exact zero roots coming from
/// vanishing low-order coefficients are returned without iteration.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let Some(top) = coeffs.iter().rposition(|c| *c != zero) else {
        return Err(Error::ZeroSymbol);
    };
    let low = coeffs.iter().position(|c| *c != zero).unwrap_or(0);
    let mut roots = alloc::vec![zero; low];
    let core = &coeffs[low..=top];
    let degree = core.len() - 1;
    match degree {
        0 => {}
        1 => roots.push(-core[0] / core[1]),
        _ => {
            let lead = core[degree];
            let companion = CMatrix::from_fn(degree, degree, |i, j| {
                if j == degree - 1 {
                    -core[i] / lead
                } else if i == j + 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    zero
                }
            });
            let schur = nalgebra::linalg::Schur::try_new(companion, f64::EPSILON, SCHUR_MAX_ITER)
                .ok_or_else(|| Error::invalid("companion eigenvalue iteration did not converge"))?;
            let (_, t) = schur.unpack();
            roots.extend(t.diagonal().iter().copied());
        }
    }
    Ok(roots)
}

/// Singular values in descending order with the left and right singular
/// vectors as columns.
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

pub fn svd(m: &CMatrix) -> Svd {
    let svd = nalgebra::linalg::SVD::new(m.clone(), true, true);
    let u = svd.u.expect("requested U");
    let v = svd.v_t.expect("requested V^H").adjoint();
    Svd {
        singular_values: svd.singular_values.iter().copied().collect(),
        u,
        v,
    }
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

pub fn hermitian_eigen(h: &CMatrix) -> HermitianEigen {
    let n = h.nrows();
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// How an operand enters a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Plain,
    Adjoint,
}

/// `op(a) * op(b)` through the packed zgemm kernel.
pub fn matmul(a: &CMatrix, op_a: Op, b: &CMatrix, op_b: Op) -> CMatrix {
    let (m, k) = match op_a {
        Op::Plain => (a.nrows(), a.ncols()),
        Op::Adjoint => (a.ncols(), a.nrows()),
    };
    let (k2, n) = match op_b {
        Op::Plain => (b.nrows(), b.ncols()),
        Op::Adjoint => (b.ncols(), b.nrows()),
    };
    assert_eq!(k, k2, "inner dimensions differ");
    let mut c = CMatrix::zeros(m, n);
    if m == 0 || n == 0 || k == 0 {
        return c;
    }
    // zgemm has no conjugation flag: adjoint operands are conjugated copies
    // read through transposed strides
    let conj_a = (op_a == Op::Adjoint).then(|| a.map(|z| z.conj()));
    let conj_b = (op_b == Op::Adjoint).then(|| b.map(|z| z.conj()));
    let a = conj_a.as_ref().unwrap_or(a);
    let b = conj_b.as_ref().unwrap_or(b);
    let strides = |x: &CMatrix, op: Op| -> (isize, isize) {
        let rows = x.nrows() as isize;
        match op {
            Op::Plain => (1, rows),
            Op::Adjoint => (rows, 1),
        }
    };
    let (rsa, csa) = strides(a, op_a);
    let (rsb, csb) = strides(b, op_b);
    // SAFETY: Complex64 is repr(C) over two f64, the same layout as [f64; 2];
    // the strides describe the column-major buffers of `a`, `b` and `c`, and
    // their dimensions were checked above.
    unsafe {
        matrixmultiply::zgemm(
            CGemmOption::Standard,
            CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr() as *const [f64; 2],
            rsa,
            csa,
            b.as_ptr() as *const [f64; 2],
            rsb,
            csb,
            [0.0, 0.0],
            c.as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
    c
}

/// `||m||_F`
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vector_norm(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_re(mut r: Vec<Complex64>) -> Vec<Complex64> {
        r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        r
    }

    #[test]
    fn roots_of_factored_polynomials() {
        let r = sorted_by_re(polynomial_roots(&[c(6.0, 0.0), c(-5.0, 0.0), c(1.0, 0.0)]).unwrap());
        assert!((r[0] - c(2.0, 0.0)).norm() < 1e-12 && (r[1] - c(3.0, 0.0)).norm() < 1e-12);
        let r = sorted_by_re(polynomial_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]).unwrap());
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((r[0] - c(0.0, -s)).norm() < 1e-12 && (r[1] - c(0.0, s)).norm() < 1e-12);
        // (z - i)(z + 2)(z - 0.5 + 0.5i), expanded
        let roots = [c(0.0, 1.0), c(-2.0, 0.0), c(0.5, -0.5)];
        let mut poly = vec![c(1.0, 0.0)];
        for r in roots {
            let mut next = vec![c(0.0, 0.0); poly.len() + 1];
            for (k, p) in poly.iter().enumerate() {
                next[k + 1] += p;
                next[k] -= p * r;
            }
            poly = next;
        }
        let found = polynomial_roots(&poly).unwrap();
        for r in roots {
            assert!(found.iter().any(|f| (f - r).norm() < 1e-10), "missing {r}");
        }
    }

    #[test]
    fn zero_roots_are_exact() {
        let r = polynomial_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(polynomial_roots(&[c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn zgemm_matches_nalgebra_product() {
        let a = CMatrix::from_fn(5, 3, |i, j| c(i as f64 - j as f64, 0.5 * (i * j) as f64));
        let b = CMatrix::from_fn(3, 4, |i, j| c((i + 2 * j) as f64, -(i as f64)));
        let want = &a * &b;
        assert!(frobenius(&(matmul(&a, Op::Plain, &b, Op::Plain) - &want)) < 1e-12);
        let at = a.adjoint();
        assert!(frobenius(&(matmul(&at, Op::Adjoint, &b, Op::Plain) - &want)) < 1e-12);
        let bt = b.adjoint();
        assert!(frobenius(&(matmul(&a, Op::Plain, &bt, Op::Adjoint) - &want)) < 1e-12);
    }

    #[test]
    fn hermitian_eigen_sorted_and_orthonormal() {
        let h = CMatrix::from_fn(6, 6, |i, j| {
            if i == j {
                c(i as f64, 0.0)
            } else if j == i + 1 {
                c(0.3, 0.4)
            } else if i == j + 1 {
                c(0.3, -0.4)
            } else {
                c(0.0, 0.0)
            }
        });
        let e = hermitian_eigen(&h);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let v = &e.eigenvectors;
        let recon = v * CMatrix::from_diagonal(&DVector::from_iterator(6, e.eigenvalues.iter().map(|&x| c(x, 0.0)))) * v.adjoint();
        assert!(frobenius(&(recon - h)) < 1e-12);
    }
}
