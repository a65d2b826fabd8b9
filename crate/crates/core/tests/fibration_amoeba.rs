use conifold_kit::fibration::*;
use conifold_kit::lattice::Family;
use num_complex::Complex64;
use proptest::prelude::*;

/// Roots with pairwise distinct moduli `exp(base + i*gap)` and random phases.
fn roots(n: usize, base: f64, gap: f64, phases: &[f64]) -> Vec<Complex64> {
    (0..n).map(|i| Complex64::from_polar((base + i as f64 * gap).exp(), phases[i])).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn factorized_amoeba_lies_on_walls(
        k in 1usize..4,
        l in 1usize..4,
        bf in -1.5f64..0.0,
        bg in -1.5f64..0.0,
        gap in 0.3f64..1.0,
        phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 8),
    ) {
        let f = roots(k, bf, gap, &phases);
        let g = roots(l, bg, gap, &phases[4..]);
        let walls = walls_deformed_g_degenerate(&f, &g).unwrap();
        prop_assert_eq!(walls.chamber_count(), (k + 1) * (l + 1));
        let grid = AmoebaGrid { radii: 12, angles: 24, both_directions: true, ..AmoebaGrid::default() };
        let s = amoeba_sample(&factorized_coefficients(&f, &g), &grid).unwrap();
        prop_assert!(!s.points.is_empty());
        prop_assert!(s.meta.max_residual < 1e-9);
        prop_assert!(max_distance_to_lines(&s.points, &walls) < 1e-6);
    }

    #[test]
    fn chamber_of_is_consistent(xs in prop::collection::vec(-3.0f64..3.0, 3), b1 in -4.0f64..4.0, b2 in -4.0f64..4.0) {
        let w = WallSet { pieces: xs.iter().enumerate().map(|(i, &v)| WallPiece { coord: 1 + (i % 2) as u8, value: v }).collect() };
        let (i, j) = w.chamber_of(b1, b2);
        let n1 = w.pieces.iter().filter(|p| p.coord == 1).count();
        let n2 = w.pieces.iter().filter(|p| p.coord == 2).count();
        prop_assert!(i <= n1 && j <= n2);
        prop_assert_eq!(w.chamber_count(), (n1 + 1) * (n2 + 1));
    }
}

#[test]
fn generic_curve_is_not_on_lines() {
    // z + w + 1 = 0 has a genuine amoeba with tentacles, far from any finite line set
    let a = vec![vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)], vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]];
    let s = amoeba_sample(&a, &AmoebaGrid { radii: 16, angles: 32, ..AmoebaGrid::default() }).unwrap();
    let walls = WallSet { pieces: vec![WallPiece { coord: 1, value: 0.0 }, WallPiece { coord: 2, value: 0.0 }] };
    assert!(max_distance_to_lines(&s.points, &walls) > 0.5);
}

#[test]
fn equal_moduli_merge_walls() {
    let f = vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 2.0)];
    let g = vec![Complex64::new(0.5, 0.0)];
    assert_eq!(walls_deformed_g_degenerate(&f, &g).unwrap().chamber_count(), 4);
    assert!(walls_deformed_g_degenerate(&[Complex64::new(0.0, 0.0)], &g).is_err());
}

#[test]
fn discriminant_inside_walls() {
    let f = vec![Complex64::new(0.5, 0.0), Complex64::new(-2.0, 0.0)];
    let g = vec![Complex64::new(3.0, 1.0)];
    let d = discriminant_deformed_o(&f, &g).unwrap();
    assert_eq!(d.interior_pieces.len(), 3);
    assert!(d.within(&walls_deformed_o(&f, &g).unwrap()));
    let dg = discriminant_resolved_g(2, 1, &[0.0, 1.0], &[2.0]).unwrap();
    assert!(dg.within(&walls_resolved_g()));
    assert!(discriminant_resolved_g(2, 1, &[0.0], &[2.0]).is_err());
}

#[test]
fn cycle_counts_and_genus_flag() {
    for k in 1..=8 {
        for l in 1..=k {
            let g = vanishing_cycle_counts(Family::Generalized, k, l).unwrap();
            assert_eq!((g.s1xs2, g.s3), (0, (k + 1) * (l + 1) - 3));
            let o = vanishing_cycle_counts(Family::Orbifolded, k, l).unwrap();
            assert_eq!((o.s1xs2, o.s3), (k + l - 2, 1));
            let r = curve_genus_report(k, l).unwrap();
            assert_eq!(r.newton_interior_points, (k - 1) * (l - 1));
            assert!(!r.agree);
        }
    }
}
