use fredholm_core::linalg::operator_norm;
use fredholm_core::rng::{complex_normal, item_rng};
use fredholm_core::truncation::{build_truncation, index_signature};
use fredholm_core::{Complex64, LaurentSymbol};
use proptest::prelude::*;

fn symbol(low: i32, seed: u64, len: usize) -> LaurentSymbol {
    let mut rng = item_rng(seed, 1);
    LaurentSymbol::new(low, (0..len).map(|_| complex_normal(&mut rng)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagonals_are_constant(low in -4i32..=4, len in 1usize..=6, seed in any::<u64>(), n in 2usize..=24) {
        let s = symbol(low, seed, len);
        let t = build_truncation(&s, n).unwrap();
        let m = t.entries();
        for j in 0..n {
            for k in 0..n {
                prop_assert_eq!(m[(j, k)], s.coeff(j as i32 - k as i32));
            }
        }
    }

    #[test]
    fn norm_below_coefficient_sum(low in -4i32..=4, len in 1usize..=6, seed in any::<u64>(), n in 2usize..=24) {
        let s = symbol(low, seed, len);
        let bound: f64 = s.terms().map(|(_, c)| c.norm()).sum();
        prop_assert!(operator_norm(build_truncation(&s, n).unwrap().entries()) <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn analytic_sections_multiply(l1 in 0i32..=2, n1 in 1usize..=4, l2 in 0i32..=2, n2 in 1usize..=4, seed in any::<u64>()) {
        let f = symbol(l1, seed, n1);
        let g = symbol(l2, seed ^ 7, n2);
        let n = 12;
        let tf = build_truncation(&f, n).unwrap().into_entries();
        let tg = build_truncation(&g, n).unwrap().into_entries();
        let tfg = build_truncation(&f.multiply(&g), n).unwrap().into_entries();
        prop_assert!(operator_norm(&(&tf * &tg - tfg)) < 1e-10);
    }
}

#[test]
fn product_defect_is_small_rank() {
    // T_N(f) T_N(g) - T_N(fg) lives in the corners, so its rank is bounded
    // by the symbol widths whatever N is
    let f = LaurentSymbol::from_terms([(-1, Complex64::new(1.0, 0.0)), (1, Complex64::new(0.5, 0.0))]).unwrap();
    let g = LaurentSymbol::from_terms([(-2, Complex64::new(0.3, 0.0)), (2, Complex64::new(1.0, 0.0))]).unwrap();
    for n in [16, 32, 64] {
        let tf = build_truncation(&f, n).unwrap().into_entries();
        let tg = build_truncation(&g, n).unwrap().into_entries();
        let tfg = build_truncation(&f.multiply(&g), n).unwrap().into_entries();
        let sv = fredholm_core::linalg::singular_values(&(&tf * &tg - tfg));
        assert!(sv.iter().filter(|&&s| s > 1e-10).count() <= 4);
    }
}

#[test]
fn signature_of_shift_powers() {
    for k in 1..=3 {
        let back = LaurentSymbol::monomial(-k, Complex64::new(1.0, 0.0));
        let sig = index_signature(&back, 64, 1e-8).unwrap();
        assert_eq!(sig.index(), k as i64);
        let fwd = LaurentSymbol::monomial(k, Complex64::new(1.0, 0.0));
        assert_eq!(index_signature(&fwd, 64, 1e-8).unwrap().index(), -(k as i64));
    }
}
