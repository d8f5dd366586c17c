//! Lowest-Landau-level matrix elements of the flux unitary.
//!
//! In the basis `|m>` of the lowest Landau level, `PUP` is the weighted
//! shift `|m> -> w[m] |m+1>` with
//!
//! ```text
//! w[m] = Gamma(m + 3/2) / (m! sqrt(m + 1)) = 1 - 1/(8m) + O(1/m^2)
//! ```
//!
//! Factorials overflow long before the weights become interesting, so the
//! weights are evaluated as `exp` of a log-gamma ratio that is formed without
//! cancelling two large log-gamma values against each other.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Stirling series coefficients `B_{2k} / (2k (2k - 1))`.
const STIRLING: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
];

/// Below this argument the log-gamma ratio is shifted upward first.
const ASYMPTOTIC_FROM: f64 = 12.0;

fn stirling_tail(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    STIRLING.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c) * inv
}

/// `ln Gamma(x + 1/2) - ln Gamma(x) - ln(x) / 2` for `x > 0`.
pub fn log_half_step_ratio(x: f64) -> f64 {
    if x >= ASYMPTOTIC_FROM {
        // (x + 1/2 - 1/2) ln(x + 1/2) - (x - 1/2) ln x - 1/2 - ln(x)/2
        //   = x ln(1 + 1/(2x)) - 1/2
        x * (0.5 / x).ln_1p() - 0.5 + stirling_tail(x + 0.5) - stirling_tail(x)
    } else {
        let shift = (ASYMPTOTIC_FROM - x).ceil();
        let shifted = x + shift;
        let mut acc = log_half_step_ratio(shifted) + 0.5 * shifted.ln();
        for j in 0..shift as usize {
            let y = x + j as f64;
            acc -= (0.5 / y).ln_1p();
        }
        acc - 0.5 * x.ln()
    }
}

/// `w[0..=m_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LandauWeights {
    w: Vec<f64>,
    log_w: Vec<f64>,
}

impl LandauWeights {
    /// Arbitrary weights, e.g. the constant sequence of an exact shift.
    pub fn from_values(w: Vec<f64>) -> Result<Self> {
        if w.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::invalid("weights must be positive and finite"));
        }
        let log_w = w.iter().map(|x| x.ln()).collect();
        Ok(Self { w, log_w })
    }

    pub fn m_max(&self) -> usize {
        self.w.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.w
    }

    pub fn weight(&self, m: usize) -> f64 {
        self.w[m]
    }

    /// `w[m] - 1`, accurate even when `w[m]` rounds to one.
    pub fn deficit(&self, m: usize) -> f64 {
        self.log_w[m].exp_m1()
    }

    /// `w[m] - (1 - 1/(8m))` for `m >= 1`.
    pub fn asymptotic_residual(&self, m: usize) -> f64 {
        self.deficit(m) + 1.0 / (8.0 * m as f64)
    }
}

pub fn landau_pup_weights(m_max: usize) -> Result<LandauWeights> {
    if m_max < 1 {
        return Err(Error::invalid("m_max must be at least 1"));
    }
    let log_w: Vec<f64> = (0..=m_max).map(|m| log_half_step_ratio(m as f64 + 1.0)).collect();
    let w = log_w.iter().map(|x| x.exp()).collect();
    Ok(LandauWeights { w, log_w })
}

/// `sup_{m >= m_max/2} |w[m] - 1|`: the tail of the weighted shift that
/// separates `PUP` from the plain shift. It tends to zero, so the difference
/// is compact.
pub fn compactness_witness(weights: &LandauWeights) -> Result<f64> {
    let m_max = weights.m_max();
    if m_max < 10 {
        return Err(Error::invalid("m_max must be at least 10"));
    }
    Ok(((m_max + 1) / 2..=m_max)
        .map(|m| weights.deficit(m).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    // 50-digit reference values of Gamma(m + 3/2) / (m! sqrt(m + 1))
    const REFERENCE: [(usize, f64); 7] = [
        (0, 0.886_226_925_452_758_01),
        (1, 0.939_985_602_986_625_19),
        (4, 0.975_350_077_145_229_27),
        (10, 0.988_704_545_233_999_16),
        (100, 0.998_763_146_826_818_83),
        (1000, 0.999_875_132_676_890_83),
        (100_000, 0.999_998_750_013_281_11),
    ];

    #[test]
    fn matches_high_precision_reference() {
        let w = landau_pup_weights(100_000).unwrap();
        for (m, want) in REFERENCE {
            assert!((w.weight(m) - want).abs() < 1e-14, "m = {m}: {} vs {want}", w.weight(m));
        }
        assert!((w.weight(0) - core::f64::consts::PI.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn residual_constant_matches_reference() {
        let w = landau_pup_weights(100_000).unwrap();
        // m^2 (w[m] - 1 + 1/(8m)) from the same reference
        for (m, want) in [(10, 0.120_454_523_399_916), (1000, 0.132_676_890_834_898), (100_000, 0.132_811_142_591_44)] {
            let got = (m * m) as f64 * w.asymptotic_residual(m);
            assert!((got - want).abs() < 1e-6, "m = {m}: {got} vs {want}");
        }
    }

    #[test]
    fn small_arguments_use_the_recurrence() {
        // Gamma(3/2)/Gamma(1) = sqrt(pi)/2 ; Gamma(5/2)/Gamma(2) = 3 sqrt(pi)/4
        let sp = core::f64::consts::PI.sqrt();
        assert!((log_half_step_ratio(1.0) - (sp / 2.0).ln()).abs() < 1e-15);
        assert!((log_half_step_ratio(2.0) - (0.75 * sp).ln() + 0.5 * 2f64.ln()).abs() < 1e-14);
        assert!((log_half_step_ratio(0.5) - (1.0 / sp).ln() - 0.5 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn witness_examples() {
        let w = landau_pup_weights(100).unwrap();
        assert!((compactness_witness(&w).unwrap() - 2.447_940_029_38e-3).abs() < 1e-12);
        let exact = LandauWeights::from_values(vec![1.0; 64]).unwrap();
        assert_eq!(compactness_witness(&exact).unwrap(), 0.0);
        assert!(compactness_witness(&landau_pup_weights(5).unwrap()).is_err());
        assert!(landau_pup_weights(0).is_err());
    }

    #[test]
    fn no_overflow_at_a_million() {
        let w = landau_pup_weights(1_000_000).unwrap();
        assert!((w.weight(1_000_000) - 0.999_999_875_000_132_81).abs() < 1e-15);
    }
}
