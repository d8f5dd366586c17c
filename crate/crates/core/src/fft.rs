//! Discrete Fourier transforms on uniform circle grids.
//!
//! Radix-2 Cooley-Tukey for power-of-two lengths, plain O(n^2) summation
//! otherwise. Forward transform uses `exp(-2 pi i jk/n)` and no scaling.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

pub fn forward(data: &mut [Complex64]) {
    transform(data, -1.0);
}

/// Inverse transform, scaled by `1/n`.
pub fn inverse(data: &mut [Complex64]) {
    transform(data, 1.0);
    let scale = 1.0 / data.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

fn transform(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(data, sign);
    } else {
        naive(data, sign);
    }
}

fn naive(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    let out: Vec<Complex64> = (0..n)
        .map(|k| {
            data.iter()
                .enumerate()
                .map(|(j, &x)| {
                    let phase = sign * 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    x * Complex64::from_polar(1.0, phase)
                })
                .sum()
        })
        .collect();
    data.copy_from_slice(&out);
}

fn radix2(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = sign * 2.0 * PI / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = Complex64::from_polar(1.0, step * k as f64);
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Signed frequency of DFT bin `k` on an `n`-point grid; the Nyquist bin of
/// an even grid maps to `+n/2`.
pub fn frequency(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}
