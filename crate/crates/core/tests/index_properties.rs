use fredholm_core::rng::{complex_normal, item_rng};
use fredholm_core::symbol::SampledSymbol;
use fredholm_core::{
    index_from_roots, laurent_roots, toeplitz_index, winding_number, Complex64, IndexOptions, LaurentSymbol,
};
use proptest::prelude::*;

fn symbol(low: i32, seed: u64, len: usize) -> LaurentSymbol {
    let mut rng = item_rng(seed, 0);
    LaurentSymbol::new(low, (0..len).map(|_| complex_normal(&mut rng)).collect()).unwrap()
}

fn roots_index(s: &LaurentSymbol) -> Option<i64> {
    index_from_roots(s, &IndexOptions::default()).unwrap().index()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracles_agree(low in -5i32..=3, len in 1usize..=7, seed in any::<u64>()) {
        let s = symbol(low, seed, len);
        let opts = IndexOptions::default();
        let a = index_from_roots(&s, &opts).unwrap();
        let b = toeplitz_index(&s, &opts).unwrap();
        if a.is_fredholm() && b.is_fredholm() {
            prop_assert_eq!(a.index(), b.index());
        }
    }

    #[test]
    fn product_adds(l1 in -3i32..=2, n1 in 1usize..=4, l2 in -3i32..=2, n2 in 1usize..=4, seed in any::<u64>()) {
        let f = symbol(l1, seed, n1);
        let g = symbol(l2, seed ^ 0x5a5a, n2);
        if let (Some(a), Some(b)) = (roots_index(&f), roots_index(&g)) {
            prop_assert_eq!(roots_index(&f.multiply(&g)), Some(a + b));
        }
    }

    #[test]
    fn reflection_negates(low in -4i32..=4, len in 1usize..=6, seed in any::<u64>()) {
        let s = symbol(low, seed, len);
        if let Some(k) = roots_index(&s) {
            prop_assert_eq!(roots_index(&s.reflect()), Some(-k));
        }
    }

    #[test]
    fn nonzero_scale_is_invisible(low in -4i32..=4, len in 1usize..=6, seed in any::<u64>(), r in 0.01f64..100.0, t in -3.0f64..3.0) {
        let s = symbol(low, seed, len);
        prop_assert_eq!(roots_index(&s), roots_index(&s.scale(Complex64::from_polar(r, t))));
    }

    #[test]
    fn monomial_index(n in -20i32..=20, r in 0.1f64..10.0) {
        let s = LaurentSymbol::monomial(n, Complex64::new(r, 0.0));
        prop_assert_eq!(roots_index(&s), Some(-n as i64));
        prop_assert_eq!(toeplitz_index(&s, &IndexOptions::default()).unwrap().index(), Some(-n as i64));
    }

    #[test]
    fn root_counts_add_up(low in -4i32..=4, len in 1usize..=8, seed in any::<u64>()) {
        let s = symbol(low, seed, len);
        let rep = laurent_roots(&s, 1e-9).unwrap();
        prop_assert_eq!(rep.inside_count + rep.on_circle_count + rep.outside_count, rep.roots.len());
    }
}

#[test]
fn sampled_symbol_winding_matches_laurent() {
    let s = LaurentSymbol::from_terms([(-2, Complex64::new(1.0, 0.0)), (1, Complex64::new(0.2, 0.1))]).unwrap();
    let sampled = SampledSymbol::from_laurent(&s, 512, 2).unwrap();
    let w = winding_number(&sampled, 512, &IndexOptions::default()).unwrap();
    assert_eq!(w, -2);
    assert_eq!(roots_index(&s), Some(2));
}

#[test]
fn unit_circle_root_is_not_fredholm() {
    let s = LaurentSymbol::from_terms([(0, Complex64::new(-1.0, 0.0)), (1, Complex64::new(1.0, 0.0))]).unwrap();
    assert_eq!(roots_index(&s), None);
    assert!(!toeplitz_index(&s, &IndexOptions::default()).unwrap().is_fredholm());
}
