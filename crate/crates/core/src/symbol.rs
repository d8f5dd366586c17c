//! Toeplitz symbols: finite Laurent polynomials on the unit circle, sampled
//! circle functions, shift polynomials and the norms used to measure them.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fft;

/// Smallest grid accepted by the circle-sampling routines.
pub const MIN_GRID: usize = 16;

/// `f(z) = sum_i c_i z^i` with finitely many nonzero coefficients.
///
/// Coefficients are stored densely between the lowest and highest nonzero
/// exponent; the zero symbol stores nothing.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSymbol {
    low: i32,
    coeffs: Vec<Complex64>,
}

impl LaurentSymbol {
    /// Builds `sum_k coeffs[k] z^(low + k)`, trimming zero coefficients at
    /// both ends.
    pub fn new(low: i32, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("non-finite symbol coefficient"));
        }
        Ok(Self::trimmed(low, coeffs))
    }

    fn trimmed(low: i32, mut coeffs: Vec<Complex64>) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        while coeffs.last() == Some(&zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| **c == zero).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead);
        Self {
            low: low + lead as i32,
            coeffs,
        }
    }

    /// Sums repeated exponents.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, Complex64)>,
    {
        let terms: Vec<(i32, Complex64)> = terms.into_iter().collect();
        let Some(low) = terms.iter().map(|t| t.0).min() else {
            return Ok(Self::zero());
        };
        let high = terms.iter().map(|t| t.0).max().unwrap_or(low);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (high - low + 1) as usize];
        for (i, c) in terms {
            coeffs[(i - low) as usize] += c;
        }
        Self::new(low, coeffs)
    }

    pub fn zero() -> Self {
        Self {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::trimmed(0, vec![c])
    }

    /// `c z^n`
    pub fn monomial(n: i32, c: Complex64) -> Self {
        Self::trimmed(n, vec![c])
    }

    /// Real coefficients listed from exponent `low` upward.
    pub fn from_real(low: i32, coeffs: &[f64]) -> Result<Self> {
        Self::new(low, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(lowest, highest)` exponent with a nonzero coefficient.
    pub fn support(&self) -> Option<(i32, i32)> {
        (!self.is_zero()).then(|| (self.low, self.low + self.coeffs.len() as i32 - 1))
    }

    pub fn coeff(&self, i: i32) -> Complex64 {
        let k = i - self.low;
        if k < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(k as usize).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, &c)| (self.low + k as i32, c))
    }

    /// Degree `m` of the pole at `z = 0` (zero for analytic symbols).
    pub fn pole_order(&self) -> u32 {
        if self.is_zero() {
            0
        } else {
            (-self.low).max(0) as u32
        }
    }

    /// Ascending coefficients of the polynomial `z^m f(z)`, `m` the pole order.
    pub fn polynomial_coeffs(&self) -> Vec<Complex64> {
        if self.is_zero() {
            return Vec::new();
        }
        let shift = self.low + self.pole_order() as i32;
        let mut out = vec![Complex64::new(0.0, 0.0); shift as usize];
        out.extend_from_slice(&self.coeffs);
        out
    }

    /// `f(e^{i theta})`
    pub fn evaluate(&self, theta: f64) -> Complex64 {
        self.evaluate_at(Complex64::from_polar(1.0, theta))
    }

    /// `f(z)` for `z != 0`.
    pub fn evaluate_at(&self, z: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let q = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        q * z.powi(self.low)
    }

    /// Coefficient convolution.
    pub fn multiply(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::trimmed(self.low + other.low, coeffs)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let terms: Vec<(i32, Complex64)> = self.terms().chain(other.terms()).collect();
        // inputs are finite, so the sum is too
        Self::from_terms(terms).unwrap_or_else(|_| Self::zero())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::trimmed(self.low, self.coeffs.iter().map(|&x| x * c).collect())
    }

    /// `g(z) = f(1/z)`.
    pub fn reflect(&self) -> Self {
        match self.support() {
            None => Self::zero(),
            Some((_, high)) => Self::trimmed(-high, self.coeffs.iter().rev().copied().collect()),
        }
    }

    /// `sum_i |c_i| (r0^i + r1^i)`: a Wiener-type norm that controls `f` on
    /// the annulus `r0 <= |z| <= r1`.
    pub fn annulus_norm(&self, annulus: &AnnulusSpec) -> f64 {
        self.terms()
            .map(|(i, c)| c.norm() * (annulus.r0.powi(i) + annulus.r1.powi(i)))
            .sum()
    }

    /// Exact `j`-th derivative in `theta`: `sum_i c_i (i i)^j e^{i i theta}`.
    pub fn derivative(&self, order: u32) -> Self {
        let unit = Complex64::new(0.0, 1.0);
        Self::trimmed(
            self.low,
            self.terms()
                .map(|(i, c)| c * (unit * i as f64).powi(order as i32))
                .collect(),
        )
    }

    fn norm_grid(&self) -> usize {
        let span = self.support().map_or(0, |(lo, hi)| (hi - lo) as usize);
        (64 * (span + 1)).max(1024)
    }
}

impl Mul for &LaurentSymbol {
    type Output = LaurentSymbol;

    fn mul(self, rhs: Self) -> LaurentSymbol {
        self.multiply(rhs)
    }
}

impl Add for &LaurentSymbol {
    type Output = LaurentSymbol;

    fn add(self, rhs: Self) -> LaurentSymbol {
        self.sum(rhs)
    }
}

/// An operator `A = sum_i c_i a^i` written in the shift `a`; negative powers
/// stand for powers of the adjoint `a*`.
///
/// Kept apart from [`LaurentSymbol`] because the symbol of `a` is `1/z`: the
/// conversion reverses exponents and has to be asked for explicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftPolynomial {
    low: i32,
    coeffs: Vec<Complex64>,
}

impl ShiftPolynomial {
    /// `sum_k coeffs[k] a^(low + k)`.
    pub fn new(low: i32, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("non-finite shift-polynomial coefficient"));
        }
        Ok(Self { low, coeffs })
    }

    /// `c_0 + c_1 a + ... + c_n a^n`
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::new(0, coeffs)
    }

    pub fn coeff(&self, i: i32) -> Complex64 {
        let k = i - self.low;
        if k < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(k as usize).copied().unwrap_or_default()
    }

    /// Operator product; powers of `a` commute with each other.
    pub fn compose(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self {
                low: 0,
                coeffs: Vec::new(),
            };
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self {
            low: self.low + other.low,
            coeffs,
        }
    }

    pub fn to_symbol(&self) -> LaurentSymbol {
        from_shift_polynomial(self)
    }
}

/// Symbol `f(z) = sum_i c_i z^{-i}` of `A = sum_i c_i a^i`, so that
/// `Index(T_f) = Index(A)`.
pub fn from_shift_polynomial(p: &ShiftPolynomial) -> LaurentSymbol {
    let high = p.low + p.coeffs.len() as i32 - 1;
    LaurentSymbol::trimmed(-high, p.coeffs.iter().rev().copied().collect())
}

/// Values `f(2 pi k / M)` of a circle function of known smoothness.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSymbol {
    samples: Vec<Complex64>,
    smoothness: u32,
}

impl SampledSymbol {
    pub fn new(samples: Vec<Complex64>, smoothness: u32) -> Result<Self> {
        let m = samples.len();
        if m < MIN_GRID || m % 2 != 0 {
            return Err(Error::invalid("sampled symbol needs an even grid of at least 16 points"));
        }
        if samples.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("non-finite sample"));
        }
        Ok(Self { samples, smoothness })
    }

    pub fn from_fn(grid: usize, smoothness: u32, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let step = 2.0 * PI / grid as f64;
        Self::new((0..grid).map(|k| f(step * k as f64)).collect(), smoothness)
    }

    pub fn from_laurent(s: &LaurentSymbol, grid: usize, smoothness: u32) -> Result<Self> {
        Self::from_fn(grid, smoothness, |t| s.evaluate(t))
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn smoothness(&self) -> u32 {
        self.smoothness
    }

    pub fn grid(&self) -> usize {
        self.samples.len()
    }

    /// Samples of the `order`-th derivative of the trigonometric interpolant.
    pub fn derivative_samples(&self, order: u32) -> Vec<Complex64> {
        if order == 0 {
            return self.samples.clone();
        }
        let m = self.samples.len();
        let mut spectrum = self.samples.clone();
        fft::forward(&mut spectrum);
        let unit = Complex64::new(0.0, 1.0);
        for (k, v) in spectrum.iter_mut().enumerate() {
            if 2 * k == m && order % 2 == 1 {
                // Nyquist mode has no consistent odd derivative
                *v = Complex64::new(0.0, 0.0);
            } else {
                *v *= (unit * fft::frequency(k, m) as f64).powi(order as i32);
            }
        }
        fft::inverse(&mut spectrum);
        spectrum
    }
}

/// Radii `0 < r0 < 1 < r1` of an annulus around the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnulusSpec {
    pub r0: f64,
    pub r1: f64,
}

impl AnnulusSpec {
    pub fn new(r0: f64, r1: f64) -> Result<Self> {
        if !(r0 > 0.0 && r0 < 1.0 && r1 > 1.0 && r1.is_finite()) {
            return Err(Error::invalid("annulus needs 0 < r0 < 1 < r1"));
        }
        Ok(Self { r0, r1 })
    }
}

/// Anything that can be sampled on a uniform grid of the circle.
pub trait CircleFunction {
    /// Values at `theta_k = 2 pi k / grid`, `k = 0..grid`.
    fn sample(&self, grid: usize) -> Result<Vec<Complex64>>;

    /// `Some(M)` when only grids dividing a fixed `M` are available.
    fn native_grid(&self) -> Option<usize>;

    /// `max_theta sum_{j <= ell} |f^(j)(theta)|`.
    fn c_ell_norm(&self, ell: u32) -> Result<f64>;
}

impl CircleFunction for LaurentSymbol {
    fn sample(&self, grid: usize) -> Result<Vec<Complex64>> {
        if grid == 0 {
            return Err(Error::invalid("empty grid"));
        }
        let step = 2.0 * PI / grid as f64;
        Ok((0..grid).map(|k| self.evaluate(step * k as f64)).collect())
    }

    fn native_grid(&self) -> Option<usize> {
        None
    }

    fn c_ell_norm(&self, ell: u32) -> Result<f64> {
        let grid = self.norm_grid();
        let mut total = vec![0.0; grid];
        for j in 0..=ell {
            for (acc, v) in total.iter_mut().zip(self.derivative(j).sample(grid)?) {
                *acc += v.norm();
            }
        }
        Ok(total.into_iter().fold(0.0, f64::max))
    }
}

impl CircleFunction for SampledSymbol {
    fn sample(&self, grid: usize) -> Result<Vec<Complex64>> {
        let m = self.samples.len();
        if grid == 0 || m % grid != 0 {
            return Err(Error::invalid("sampled symbol only supports grids dividing its own"));
        }
        Ok(self.samples.iter().step_by(m / grid).copied().collect())
    }

    fn native_grid(&self) -> Option<usize> {
        Some(self.samples.len())
    }

    fn c_ell_norm(&self, ell: u32) -> Result<f64> {
        if ell > self.smoothness {
            return Err(Error::invalid("C^ell norm requested beyond the symbol's smoothness"));
        }
        let mut total = vec![0.0; self.samples.len()];
        for j in 0..=ell {
            for (acc, v) in total.iter_mut().zip(self.derivative_samples(j)) {
                *acc += v.norm();
            }
        }
        Ok(total.into_iter().fold(0.0, f64::max))
    }
}

/// Smallest `|f|` on the `grid`-point uniform circle grid, with the angle
/// where it is attained.
pub fn min_modulus_with_angle(s: &impl CircleFunction, grid: usize) -> Result<(f64, f64)> {
    if grid < MIN_GRID {
        return Err(Error::invalid("grid must have at least 16 points"));
    }
    let samples = s.sample(grid)?;
    let (k, m) = samples
        .iter()
        .map(|v| v.norm())
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, m)| if m < best.1 { (k, m) } else { best });
    Ok((m, 2.0 * PI * k as f64 / grid as f64))
}

pub fn min_modulus_on_circle(s: &impl CircleFunction, grid: usize) -> Result<f64> {
    min_modulus_with_angle(s, grid).map(|(m, _)| m)
}
