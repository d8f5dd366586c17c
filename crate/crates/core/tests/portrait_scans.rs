use fredholm_core::portrait::{
    extract_boundaries, path_jumps, random_path_jump_scan, scan_grid, wraparound_experiment, Axis, Cell,
    ParameterFamily,
};
use fredholm_core::{CoefficientField, Complex64};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn linear_family_has_two_regions() {
    let axis = Axis::new(-2.0, 2.0, 41).unwrap();
    let grid = scan_grid(&ParameterFamily::linear_real(), [axis, axis]).unwrap();
    for i in 0..41 {
        for j in 0..41 {
            let (c1, c0) = grid.point(i, j);
            let expected = if c1.abs() > c0.abs() + 1e-9 {
                Cell::Index(1)
            } else if c0.abs() > c1.abs() + 1e-9 {
                Cell::Index(0)
            } else {
                continue;
            };
            assert_eq!(grid.cell(i, j), expected, "at ({c1}, {c0})");
        }
    }
    // the grid hits |c1| = |c0| exactly, so not-Fredholm cells separate the regions
    let b = extract_boundaries(&grid);
    assert!(b.edges.is_empty());
    assert_eq!(b.not_fredholm.len(), 2 * 41 - 1);
}

#[test]
fn quadratic_family_is_mirror_symmetric() {
    let axis = Axis::new(-3.0, 3.0, 61).unwrap();
    let grid = scan_grid(&ParameterFamily::quadratic_real(), [axis, axis]).unwrap();
    for i in 0..61 {
        for j in 0..61 {
            assert_eq!(grid.cell(i, j), grid.cell(60 - i, j));
        }
    }
    assert_eq!(grid.cross_check_mismatches, 0);
}

#[test]
fn crossing_one_root_jumps_by_one() {
    // z + c0 with c0 moving from 0.5 to 1.5: one root leaves the disk
    let p = path_jumps(&[c(0.5), c(1.0)], &[c(1.5), c(1.0)], 50).unwrap();
    assert_eq!(p.jumps, vec![1]);
    assert_eq!(p.unresolved, 0);
}

#[test]
fn complex_jumps_are_single() {
    let h = random_path_jump_scan(CoefficientField::Complex, 3, 40, 100, 11).unwrap();
    assert!(h.total() > 0);
    assert_eq!(h.total(), h.count(1));
}

#[test]
fn scans_are_reproducible() {
    let a = random_path_jump_scan(CoefficientField::Real, 2, 30, 80, 3).unwrap();
    let b = random_path_jump_scan(CoefficientField::Real, 2, 30, 80, 3).unwrap();
    assert_eq!(a, b);
}

#[test]
fn wrap_winding_scales_with_n() {
    let a = wraparound_experiment(2, 0.5, 50, 1e-7).unwrap();
    let b = wraparound_experiment(2, 0.5, 100, 1e-7).unwrap();
    let (wa, wb) = (a.winding_change.value().unwrap(), b.winding_change.value().unwrap());
    assert!(wb > wa && wa > 0);
    assert!(b.perturbation_cl_norm < 1e-2);
}
