use bvlab_core::grid::clipped_ball;
use bvlab_core::*;
use proptest::prelude::*;

/// Adaptive Simpson on `[a, b]`.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rule(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = rule(fa, flm, fm, a, m);
        let right = rule(fm, frm, fb, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, rule(fa, fm, fb, a, b), tol, 40)
}

/// `∫_{[-1,1]^2} |x|^a dx` in polar coordinates over the eight triangles of the square.
fn power_law_square_integral(a: f64) -> f64 {
    let radial = |theta: f64| (1.0 / theta.cos()).powf(a + 2.0) / (a + 2.0);
    8.0 * simpson(&radial, 0.0, std::f64::consts::FRAC_PI_4, 1e-10)
}

#[test]
fn uniform_cells_and_edges_are_exact() {
    let g = build_grid(2, 1.0, 4, WeightSpec::Uniform).unwrap();
    assert_eq!(g.len(), 16);
    assert!(g.measures().iter().all(|&m| m == 0.25));
    let g1 = build_grid(1, 1.0, 4, WeightSpec::Uniform).unwrap();
    g1.for_each_edge(|_, _, w| assert_eq!(w, 1.0));
}

#[test]
fn rejects_bad_parameters() {
    assert!(build_grid(3, 1.0, 8, WeightSpec::Uniform).is_err());
    assert!(build_grid(2, 0.0, 8, WeightSpec::Uniform).is_err());
    assert!(build_grid(2, 1.0, 5, WeightSpec::Uniform).is_err());
    assert!(build_grid(2, 1.0, 2, WeightSpec::Uniform).is_err());
    assert!(build_grid(2, 1.0, 8, WeightSpec::PowerLaw(-2.0)).is_err());
    assert!(build_grid(1, 1.0, 8, WeightSpec::PowerLaw(-1.5)).is_err());
    assert!(build_grid(2, 1.0, 8, WeightSpec::PowerLaw(1.0)).is_err());
}

#[test]
fn power_law_total_measure_matches_quadrature() {
    let g = build_grid(2, 1.0, 256, WeightSpec::PowerLaw(-1.5)).unwrap();
    let oracle = power_law_square_integral(-1.5);
    let rel = (g.total_measure() - oracle).abs() / oracle;
    assert!(rel < 0.01, "total {} vs oracle {oracle}", g.total_measure());
}

#[test]
fn ball_and_annulus_areas() {
    let g = build_grid(2, 1.0, 256, WeightSpec::Uniform).unwrap();
    let b = ball(&g, [0.0, 0.0], 0.5).unwrap();
    let area = std::f64::consts::FRAC_PI_4;
    assert!((b.measure(&g) - area).abs() / area < 0.03);
    let an = annulus(&g, [0.0, 0.0], 0.25, 0.5).unwrap();
    let area = std::f64::consts::PI * (0.25 - 0.0625);
    assert!((an.measure(&g) - area).abs() / area < 0.05);
    assert!(an.is_disjoint(&ball(&g, [0.0, 0.0], 0.25).unwrap()));
}

#[test]
fn tiny_and_huge_balls() {
    let g = build_grid(2, 1.0, 16, WeightSpec::Uniform).unwrap();
    let c = g.index(5, 9);
    let b = ball(&g, g.center(c), 0.4 * g.h()).unwrap();
    assert_eq!(b.iter().collect::<Vec<_>>(), vec![c]);
    assert_eq!(ball(&g, [0.0, 0.0], 4.0 * 1.0 * 2f64.sqrt() + 1.0).unwrap().count(), g.len());
    assert!(ball(&g, [0.0, 0.0], 0.0).is_err());
    assert!(annulus(&g, [0.0, 0.0], 0.5, 0.5).is_err());
}

#[test]
fn annulus_with_zero_inner_radius_drops_the_center_cell() {
    let g = build_grid(2, 1.0, 16, WeightSpec::Uniform).unwrap();
    let c = g.index(3, 3);
    let x = g.center(c);
    let an = annulus(&g, x, 0.0, 0.3).unwrap();
    let b = ball(&g, x, 0.3).unwrap();
    assert_eq!(b.difference(&an).iter().collect::<Vec<_>>(), vec![c]);
}

#[test]
fn clipped_ball_avoids_outer_ring() {
    let g = build_grid(2, 2.0, 64, WeightSpec::Uniform).unwrap();
    let b = clipped_ball(&g, [0.0, 0.0], 2.0).unwrap();
    assert!(!b.touches_boundary(&g));
    assert!(b.is_subset(&ball(&g, [0.0, 0.0], 2.0).unwrap()));
}

#[test]
fn uniform_constants() {
    let g = build_grid(2, 1.0, 128, WeightSpec::Uniform).unwrap();
    let k = estimate_constants(&g, 200).unwrap();
    assert!((3.6..=4.4).contains(&k.doubling), "doubling {}", k.doubling);
    assert!((k.origin_exponent - 2.0).abs() <= 0.05, "slope {}", k.origin_exponent);
    assert_eq!(k.dimension_exponent, 2.0);
    assert_eq!(k.dilation, 1.0);
    assert!(estimate_constants(&build_grid(2, 1.0, 8, WeightSpec::Uniform).unwrap(), 10).is_err());
}

#[test]
fn power_law_origin_slope() {
    let g = build_grid(2, 1.0, 256, WeightSpec::PowerLaw(-1.5)).unwrap();
    let k = estimate_constants(&g, 50).unwrap();
    assert!((k.origin_exponent - 0.5).abs() <= 0.1, "slope {}", k.origin_exponent);
    assert!(k.dimension_exponent > 1.0);
}

#[test]
fn weight_spec_round_trips_through_text() {
    for spec in [WeightSpec::Uniform, WeightSpec::PowerLaw(-1.5)] {
        assert_eq!(spec.to_string().parse::<WeightSpec>().unwrap(), spec);
    }
    assert!("cubic".parse::<WeightSpec>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn scaling_multiplies_measures_and_edges(c in 0.1f64..10.0, a in -1.9f64..0.9) {
        let g = build_grid(2, 1.0, 8, WeightSpec::PowerLaw(a)).unwrap();
        let s = g.scaled(c).unwrap();
        for (m, ms) in g.measures().iter().zip(s.measures()) {
            prop_assert_eq!(ms, &(m * c));
        }
        let mut edges = Vec::new();
        g.for_each_edge(|a, b, w| edges.push((a, b, w)));
        let mut i = 0;
        s.for_each_edge(|a, b, w| {
            assert_eq!((a, b), (edges[i].0, edges[i].1));
            assert_eq!(w, edges[i].2 * c);
            i += 1;
        });
    }

    #[test]
    fn ball_monotone_in_radius(ix in 0usize..32, iy in 0usize..32, r in 0.01f64..1.5, dr in 0.0f64..0.5) {
        let g = build_grid(2, 1.0, 32, WeightSpec::Uniform).unwrap();
        let x = g.center(g.index(ix, iy));
        prop_assert!(ball(&g, x, r).unwrap().is_subset(&ball(&g, x, r + dr).unwrap()));
    }

    #[test]
    fn closed_ball_and_annulus_partition_ball(ix in 0usize..32, iy in 0usize..32, a in 0.01f64..0.8, gap in 0.01f64..0.8) {
        let g = build_grid(2, 1.0, 32, WeightSpec::Uniform).unwrap();
        let x = g.center(g.index(ix, iy));
        let b = ball(&g, x, a + gap).unwrap();
        let inner = closed_ball(&g, x, a).intersection(&b);
        let ring = annulus(&g, x, a, a + gap).unwrap();
        prop_assert!(inner.is_disjoint(&ring));
        prop_assert_eq!(inner.union(&ring), b);
    }

    #[test]
    fn uniform_ball_measure_is_translation_invariant(dx in -8i64..8, dy in -8i64..8, r in 0.05f64..0.4) {
        let g = build_grid(2, 1.0, 64, WeightSpec::Uniform).unwrap();
        let h = g.h();
        let base = g.ball_measure([0.5 * h, 0.5 * h], r);
        let moved = g.ball_measure([(dx as f64 + 0.5) * h, (dy as f64 + 0.5) * h], r);
        prop_assert_eq!(base, moved);
    }
}
