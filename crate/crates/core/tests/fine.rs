use bvlab_core::fine::*;
use bvlab_core::shapes::{half_plane, rectangle};
use bvlab_core::variational::variational_capacity;
use bvlab_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn empty_set_is_thin() {
    let g = build_grid(2, 1.0, 128, WeightSpec::Uniform).unwrap();
    let p = thinness_profile(&g, &CellSet::empty(&g), [0.0, 0.0], 2.0, 0.4, 3).unwrap();
    assert!(p.ratios.iter().all(|&t| t == 0.0));
    let v = classify(&p, TAU_THIN, TAU_THICK).unwrap();
    assert_eq!(v.classification, Classification::Thin);
}

#[test]
fn full_neighbourhood_is_thick() {
    let g = build_grid(2, 1.0, 256, WeightSpec::Uniform).unwrap();
    let all = ball(&g, [0.0, 0.0], 0.9).unwrap();
    let p = thinness_profile(&g, &all, [0.0, 0.0], 2.0, 0.4, 3).unwrap();
    assert_eq!(p.resolution_floor, 2);
    // a disc in its double: the lattice cut is 8r, ratio ≈ r · 8r / (πr²) = 8/π
    let oracle = 8.0 / std::f64::consts::PI;
    for &t in p.trusted() {
        assert!((t - oracle).abs() / oracle < 0.1, "ratio {t}");
    }
    assert!(p.window_monotone);
    assert_eq!(classify(&p, TAU_THIN, TAU_THICK).unwrap().classification, Classification::Thick);
}

#[test]
fn uniform_origin_cells_are_thin_in_the_profile() {
    let g = build_grid(2, 1.0, 256, WeightSpec::Uniform).unwrap();
    let origin = CellSet::from_cells(&g, g.cells_touching([0.0, 0.0]));
    let p = thinness_profile(&g, &origin, [0.0, 0.0], 2.0, 0.4, 3).unwrap();
    // four cells forming a square of side 2h: cut 8h, ratio 8h / (π r)
    let h = g.h();
    for (&r, &t) in p.radii.iter().zip(&p.ratios) {
        let oracle = 8.0 * h / (std::f64::consts::PI * r);
        assert!((t - oracle).abs() / oracle < 0.1, "r {r}: {t} vs {oracle}");
    }
    assert!(!p.strictly_decreasing());
}

#[test]
fn profile_rejects_bad_inputs() {
    let g = build_grid(2, 1.0, 64, WeightSpec::Uniform).unwrap();
    let e = CellSet::empty(&g);
    assert!(thinness_profile(&g, &e, [0.0, 0.0], 1.0, 0.4, 3).is_err());
    assert!(thinness_profile(&g, &e, [0.0, 0.0], 2.0, 0.4, 0).is_err());
    assert!(thinness_profile(&g, &e, [0.0, 0.0], 2.0, 0.6, 2).is_err());
    assert!(matches!(
        thinness_profile(&g, &e, [0.0, 0.0], 2.0, 0.1, 2),
        Err(LabError::ResolutionInsufficient(_))
    ));
}

#[test]
fn boxing_examples() {
    let g = build_grid(2, 1.0, 256, WeightSpec::Uniform).unwrap();
    let h = g.h();
    let c = g.index(128, 128);
    let x = g.center(c);
    let single = CellSet::from_cells(&g, [c]);
    let b = boxing_check(&g, &single, x, 0.2).unwrap();
    assert!((b.perim_side - 4.0 * h).abs() < 1e-12);
    // at the 4h split scale the boundary of one cell is the 4h disc around it
    let disc = ball(&g, x, 4.0 * h).unwrap();
    let oracle = variational_capacity(&g, &disc, &ball(&g, x, 0.4).unwrap()).unwrap().value;
    assert!((b.cap_side - oracle).abs() < 1e-12 * oracle, "{} vs {oracle}", b.cap_side);
    assert!(b.cap_side <= BOXING_CONSTANT * b.perim_side);

    let strip = rectangle(&g, [-0.15, 0.15], [0.0, 4.0 * h]);
    let b = boxing_check(&g, &strip, [0.0, 0.0], 0.2).unwrap();
    assert!(b.perim_side > 0.0);
    assert!(b.cap_side <= BOXING_CONSTANT * b.perim_side, "{b:?}");

    let thick = ball(&g, [0.0, 0.0], 0.3).unwrap();
    assert!(matches!(boxing_check(&g, &thick, [0.0, 0.0], 0.2), Err(LabError::Precondition(_))));
    assert!(matches!(
        boxing_check(&g, &single, x, 8.0 * h),
        Err(LabError::ResolutionInsufficient(_))
    ));
}

#[test]
fn boxing_family() {
    let g = build_grid(2, 1.0, 256, WeightSpec::Uniform).unwrap();
    let h = g.h();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut tested = 0;
    while tested < 12 {
        let w = rng.gen_range(h..0.1);
        let l = rng.gen_range(0.05..0.3);
        let c = [rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)];
        let e = if rng.gen_bool(0.5) {
            rectangle(&g, [c[0], c[0] + l], [c[1], c[1] + w])
        } else {
            ball(&g, c, w).unwrap()
        };
        match boxing_check(&g, &e, [0.0, 0.0], 0.2) {
            Ok(b) => {
                assert!(b.cap_side <= BOXING_CONSTANT * b.perim_side, "{b:?}");
                tested += 1;
            }
            Err(LabError::Precondition(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn density_point_examples() {
    let g = build_grid(2, 1.0, 256, WeightSpec::Uniform).unwrap();
    let x = [0.0, 0.0];
    let r = 0.25;
    let disc = ball(&g, x, r).unwrap();
    let d = density_point_capacity_check(&g, &disc, x, r).unwrap();
    assert!(d.holds(), "{d:?}");

    let all = CellSet::from_fn(&g, |c| !g.is_boundary_cell(c));
    let d_all = density_point_capacity_check(&g, &all, x, r).unwrap();
    assert!(d_all.holds());
    assert_eq!(d_all.cap, d.cap);

    let hp = half_plane(&g, -0.9);
    let d = density_point_capacity_check(&g, &hp, x, r).unwrap();
    assert!(d.holds());
    assert_eq!(d.witness_s, r);

    assert!(matches!(
        density_point_capacity_check(&g, &half_plane(&g, 0.0), [0.0, 0.0], r),
        Err(LabError::Precondition(_))
    ));
}

/// `μ(B(0, r)) = 2π r^(a+2) / (a+2)` for `w = |x|^a` in the plane.
fn power_ball_mass(a: f64, r: f64) -> f64 {
    2.0 * std::f64::consts::PI * r.powf(a + 2.0) / (a + 2.0)
}

#[test]
fn weighted_point_is_thick() {
    let a = -1.5;
    let g = build_grid(2, 1.0, 512, WeightSpec::PowerLaw(a)).unwrap();
    let p = point_thickness_experiment(&g, 4).unwrap();
    assert_eq!(p.radii, vec![0.5, 0.25, 0.125, 0.0625]);
    assert!(p.trusted.iter().all(|&t| t));
    assert!(p.strictly_decreasing());
    for (j, &s) in p.successive.iter().enumerate() {
        let (r0, r1) = (p.radii[j], p.radii[j + 1]);
        let oracle = (r1 / power_ball_mass(a, r1)) / (r0 / power_ball_mass(a, r0));
        assert!((s - oracle).abs() / oracle <= 0.15, "ratio {s} vs {oracle}");
    }
    for &t in p.profile.trusted() {
        assert!(t >= 1e-2, "profile {:?}", p.profile.ratios);
    }
}

#[test]
fn capacity_shrinks_with_the_set() {
    let g = build_grid(2, 1.0, 128, WeightSpec::PowerLaw(-1.2)).unwrap();
    let a = rectangle(&g, [-0.5, 0.5], [-0.05, 0.05]);
    let caps = capacity_shrink_profile(&g, &a, [0.0, 0.0], 0.8, &[0.6, 0.4, 0.2]).unwrap();
    assert!(caps.windows(2).all(|w| w[1] <= w[0]), "{caps:?}");
    assert!(capacity_shrink_profile(&g, &a, [0.0, 0.0], 0.8, &[0.2, 0.4]).is_err());
    assert!(capacity_shrink_profile(&g, &a, [0.0, 0.0], 0.8, &[0.9]).is_err());
}

#[test]
fn classify_thresholds() {
    let g = build_grid(2, 1.0, 64, WeightSpec::Uniform).unwrap();
    let p = thinness_profile(&g, &CellSet::empty(&g), [0.0, 0.0], 2.0, 0.4, 1).unwrap();
    assert!(classify(&p, 0.0, 0.1).is_err());
    assert!(classify(&p, 0.2, 0.1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn profiles_are_finite_and_window_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = build_grid(2, 1.0, 128, WeightSpec::PowerLaw(rng.gen_range(-1.9..0.5))).unwrap();
        let set = CellSet::from_fn(&g, |_| rng.gen_bool(0.1));
        let x = [rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)];
        let p = thinness_profile(&g, &set, x, 2.0, 0.3, 2).unwrap();
        prop_assert!(p.ratios.iter().all(|t| t.is_finite() && *t >= 0.0));
        prop_assert!(p.window_monotone);
        prop_assert!(p.resolution_floor <= p.depth);
    }
}
