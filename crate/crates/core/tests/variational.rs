use bvlab_core::bv::perimeter_total;
use bvlab_core::shapes::{checkerboard, rectangle};
use bvlab_core::variational::*;
use bvlab_core::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Obstacle made of a few random discs and boxes inside a centred disc window.
fn random_instance(rng: &mut ChaCha8Rng, n: usize, spec: WeightSpec) -> (GridSpace, CellSet, CellSet) {
    let g = build_grid(2, 1.0, n, spec).unwrap();
    let window = ball(&g, [0.0, 0.0], rng.gen_range(0.6..0.85)).unwrap();
    let mut a = CellSet::empty(&g);
    for _ in 0..rng.gen_range(1..4) {
        let c = [rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)];
        let piece = if rng.gen_bool(0.5) {
            ball(&g, c, rng.gen_range(0.05..0.2)).unwrap()
        } else {
            let (w, h) = (rng.gen_range(0.02..0.3), rng.gen_range(0.02..0.3));
            rectangle(&g, [c[0], c[0] + w], [c[1], c[1] + h])
        };
        a = a.union(&piece);
    }
    let a = a.intersection(&window);
    (g, a, window)
}

/// Random admissible set `A ⊆ V ⊆ Ω`.
fn random_superset(g: &GridSpace, a: &CellSet, window: &CellSet, rng: &mut ChaCha8Rng) -> CellSet {
    let mut v = a.clone();
    match rng.gen_range(0..3) {
        0 => {
            let p = rng.gen_range(0.0..0.3);
            for c in window.iter() {
                if rng.gen_bool(p) {
                    v.insert(c);
                }
            }
        }
        1 => {
            for _ in 0..rng.gen_range(1..4) {
                v = v.dilate(g);
            }
        }
        _ => {
            let c = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
            v = v.union(&ball(g, c, rng.gen_range(0.05..0.4)).unwrap());
        }
    }
    v.intersection(window).union(a)
}

#[test]
fn capacity_equals_solution_perimeter_and_beats_competitors() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for case in 0..12 {
        let spec = if case % 2 == 0 { WeightSpec::Uniform } else { WeightSpec::PowerLaw(-1.3) };
        let (g, a, window) = random_instance(&mut rng, 48, spec);
        let sol = solve_obstacle_set(&g, &a, &window).unwrap();
        let cap = variational_capacity(&g, &a, &window).unwrap();
        assert!(close(cap.value, perimeter_total(&g, &sol.set), 1e-12), "case {case}");
        assert!(a.is_subset(&sol.set) && sol.set.is_subset(&window));
        for _ in 0..100 {
            let v = random_superset(&g, &a, &window, &mut rng);
            assert!(sol.perimeter_value <= perimeter_total(&g, &v) * (1.0 + 1e-12), "case {case}");
        }
    }
}

#[test]
fn trivial_problems() {
    let g = build_grid(2, 1.0, 16, WeightSpec::Uniform).unwrap();
    let window = ball(&g, [0.0, 0.0], 0.6).unwrap();
    let s = solve_obstacle_set(&g, &window, &window).unwrap();
    assert_eq!(s.set, window);
    assert_eq!(s.perimeter_value, perimeter_total(&g, &window));
    assert_eq!(variational_capacity(&g, &CellSet::empty(&g), &window).unwrap().value, 0.0);

    // 5×5 unit grid padded to 6×6, centre cell inside the inner 3×3
    let g = build_grid(2, 3.0, 6, WeightSpec::Uniform).unwrap();
    let inner = CellSet::from_fn(&g, |c| {
        let [x, y] = g.coords(c);
        (1..=3).contains(&x) && (1..=3).contains(&y)
    });
    let centre = CellSet::from_cells(&g, [g.index(2, 2)]);
    assert_eq!(variational_capacity(&g, &centre, &inner).unwrap().value, 4.0);
}

#[test]
fn larger_window_lowers_capacity() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..10 {
        let (g, a, window) = random_instance(&mut rng, 40, WeightSpec::PowerLaw(-0.8));
        let bigger = window.dilate(&g).dilate(&g);
        let small = variational_capacity(&g, &a, &window).unwrap().value;
        let large = variational_capacity(&g, &a, &bigger).unwrap().value;
        assert!(large <= small * (1.0 + 1e-12));
    }
}

#[test]
fn scaling_weights_scales_values_and_keeps_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for case in 0..10 {
        let (g, a, window) = random_instance(&mut rng, 32, WeightSpec::PowerLaw(-1.5));
        let base = solve_obstacle_set(&g, &a, &window).unwrap();
        let c = if case % 2 == 0 { 8.0 } else { rng.gen_range(0.1..10.0) };
        let s = g.scaled(c).unwrap();
        let scaled = solve_obstacle_set(&s, &a, &window).unwrap();
        assert_eq!(scaled.set, base.set, "case {case}");
        if case % 2 == 0 {
            assert_eq!(scaled.perimeter_value, c * base.perimeter_value);
        } else {
            assert!(close(scaled.perimeter_value, c * base.perimeter_value, 1e-12));
        }
    }
}

#[test]
fn solutions_are_superminimizers() {
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    for case in 0..6 {
        let spec = if case % 2 == 0 { WeightSpec::Uniform } else { WeightSpec::PowerLaw(-1.5) };
        let (g, a, window) = random_instance(&mut rng, 48, spec);
        let sol = solve_obstacle_set(&g, &a, &window).unwrap();
        let u = GridFunction::indicator(&sol.set);
        let report = verify_superminimizer(&g, &u, &window, 200, case).unwrap();
        assert_eq!(report.violations, 0, "case {case}: worst {}", report.worst_excess);
        assert_eq!(report.trials, 200);
    }
}

#[test]
fn constants_pass_and_checkerboard_fails() {
    let g = build_grid(2, 1.0, 24, WeightSpec::Uniform).unwrap();
    let interior = CellSet::from_fn(&g, |c| !g.is_boundary_cell(c));
    let r = verify_superminimizer(&g, &GridFunction::constant(&g, 1.7), &interior, 100, 1).unwrap();
    assert_eq!(r.violations, 0);
    let board = GridFunction::indicator(&checkerboard(&g));
    let r = verify_superminimizer(&g, &board, &interior, 200, 1).unwrap();
    assert!(r.violations > 0);
    assert!(r.first_violation.is_some());
    assert!(verify_superminimizer(&g, &board, &interior, 0, 1).is_err());
}

#[test]
fn single_level_general_problem_matches_set_problem() {
    let mut rng = ChaCha8Rng::seed_from_u64(39);
    for _ in 0..5 {
        let (g, a, window) = random_instance(&mut rng, 32, WeightSpec::Uniform);
        let spec = ObstacleSpec {
            domain: window.clone(),
            obstacle: Obstacle::Set(a.clone()),
            boundary_data: GridFunction::constant(&g, 0.0),
            levels: vec![1.0],
        };
        let u = solve_obstacle_general(&g, &spec).unwrap();
        let sol = solve_obstacle_set(&g, &a, &window).unwrap();
        assert_eq!(u, GridFunction::indicator(&sol.set));
    }
}

/// `ψ` with values 0, 1, 2 on a 16² grid and zero boundary data.
fn two_level_problem(rng: &mut ChaCha8Rng) -> (GridSpace, ObstacleSpec) {
    let g = build_grid(2, 1.0, 16, WeightSpec::Uniform).unwrap();
    let domain = CellSet::from_fn(&g, |c| {
        let [x, y] = g.coords(c);
        (2..14).contains(&x) && (2..14).contains(&y)
    });
    let outer = rectangle(&g, [rng.gen_range(-0.6..-0.1), rng.gen_range(0.1..0.6)], [-0.5, 0.4]);
    let inner = ball(&g, [rng.gen_range(-0.2..0.2), 0.0], rng.gen_range(0.1..0.3)).unwrap();
    let psi = GridFunction::from_fn(&g, |c| {
        if !domain.contains(c) {
            0.0
        } else if inner.contains(c) {
            2.0
        } else if outer.contains(c) {
            1.0
        } else {
            0.0
        }
    })
    .unwrap();
    let spec = ObstacleSpec {
        domain,
        obstacle: Obstacle::Function(psi),
        boundary_data: GridFunction::constant(&g, 0.0),
        levels: vec![1.0, 2.0],
    };
    (g, spec)
}

#[test]
fn two_level_solution_beats_random_competitors() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for _ in 0..4 {
        let (g, spec) = two_level_problem(&mut rng);
        let u = solve_obstacle_general(&g, &spec).unwrap();
        let Obstacle::Function(psi) = &spec.obstacle else { unreachable!() };
        let full = CellSet::full(&g);
        let tv = total_variation(&g, &u, &full).unwrap();
        let (lhs, rhs) = coarea_check(&g, &u, &full).unwrap();
        assert!(close(lhs, rhs, 1e-12));
        assert!(u.superlevel(1.5).is_subset(&u.superlevel(0.5)));
        for c in spec.domain.iter() {
            assert!(u.value(c) >= psi.value(c));
        }
        for _ in 0..100 {
            let p = rng.gen_range(0.0..0.4);
            let v = GridFunction::from_fn(&g, |c| {
                if !spec.domain.contains(c) {
                    return 0.0;
                }
                let bump = if rng.gen_bool(p) { [1.0, 2.0][rng.gen_range(0..2)] } else { 0.0 };
                psi.value(c).max(bump).max(if rng.gen_bool(0.5) { u.value(c) } else { 0.0 })
            })
            .unwrap();
            assert!(tv <= total_variation(&g, &v, &full).unwrap() * (1.0 + 1e-12));
        }
    }
}

#[test]
fn general_problem_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let (g, mut spec) = two_level_problem(&mut rng);
    spec.levels = vec![1.0];
    assert!(matches!(solve_obstacle_general(&g, &spec), Err(LabError::Infeasible(_))));
    spec.levels = vec![2.0, 1.0];
    assert!(solve_obstacle_general(&g, &spec).is_err());
    spec.levels = vec![1.0, 2.0];
    spec.domain = CellSet::full(&g);
    assert!(matches!(solve_obstacle_general(&g, &spec), Err(LabError::BoundaryContact(_))));
}

#[test]
fn degiorgi_on_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let g = build_grid(2, 1.0, 128, WeightSpec::Uniform).unwrap();
    let h = g.h();
    let window = ball(&g, [0.0, 0.0], 0.9).unwrap();
    let a = ball(&g, [0.3, 0.0], 0.15).unwrap().union(&rectangle(&g, [-0.5, -0.1], [-0.05, 0.05]));
    let u = GridFunction::indicator(&solve_obstacle_set(&g, &a, &window).unwrap().set);
    let mut tested = 0;
    while tested < 50 {
        let x = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
        let s1 = rng.gen_range(4.0 * h..0.2);
        let s2 = s1 + rng.gen_range(2.0 * h..0.2);
        if !ball(&g, x, s2).unwrap().is_subset(&window) {
            continue;
        }
        let k = if ball(&g, x, s2).unwrap().is_disjoint(&a) { 0.0 } else { 1.0 };
        let d = degiorgi_check(&g, &u, x, k, s1, s2).unwrap();
        assert!(d.holds(), "{x:?} {s1} {s2}: {} > {} * {}", d.lhs, d.rhs, d.slack);
        tested += 1;
    }

    let c = degiorgi_check(&g, &GridFunction::constant(&g, 0.3), [0.0, 0.0], 0.5, 0.1, 0.2).unwrap();
    assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
    let far = degiorgi_check(&g, &u, [-0.1, 0.6], 0.0, 0.05, 0.1).unwrap();
    assert_eq!((far.lhs, far.rhs), (0.0, 0.0));
    assert!(degiorgi_check(&g, &u, [0.0, 0.0], 0.0, 0.1, 0.1 + h).is_err());
}

#[test]
fn weak_harnack_examples() {
    let g = build_grid(2, 1.0, 64, WeightSpec::Uniform).unwrap();
    let x = [0.0, 0.0];
    let w = weak_harnack_check(&g, &GridFunction::constant(&g, 0.4), x, 0.2, 0.5, 0.4, 2.0).unwrap();
    assert_eq!((w.sup_val, w.integral_term, w.fitted_c), (0.4, 0.0, 0.0));

    let e = ball(&g, x, 0.7).unwrap();
    let w = weak_harnack_check(&g, &GridFunction::indicator(&e), x, 0.2, 0.5, 0.0, 2.0).unwrap();
    assert_eq!(w.sup_val, 1.0);
    let expected = (0.3f64 / 0.5).powf(2.0);
    assert!(close(w.fitted_c, expected, 1e-12));
    assert!(weak_harnack_check(&g, &GridFunction::indicator(&e), x, 0.5, 0.2, 0.0, 2.0).is_err());
}

#[test]
fn ball_comparison_examples() {
    let g = build_grid(2, 1.0, 64, WeightSpec::Uniform).unwrap();
    let h = g.h();
    let c = g.index(32, 32);
    let x = g.center(c);
    let single = CellSet::from_cells(&g, [c]);
    let b = capacity_ball_comparison(&g, &single, x, 4.0 * h, 1.5, 2.0).unwrap();
    assert!(close(b.cap_t, 4.0 * h, 1e-12) && close(b.cap_s, 4.0 * h, 1e-12));
    assert_eq!(b.ratio, 1.0);

    let g = build_grid(2, 1.0, 128, WeightSpec::Uniform).unwrap();
    let a = ball(&g, [0.0, 0.0], 0.2).unwrap();
    let b = capacity_ball_comparison(&g, &a, [0.0, 0.0], 0.2, 1.5, 2.0).unwrap();
    assert!(b.cap_t <= b.cap_s);
    assert!(b.ratio <= 4.0);

    assert!(capacity_ball_comparison(&g, &a, [0.0, 0.0], 0.2, 2.0, 1.5).is_err());
    assert!(capacity_ball_comparison(&g, &a, [0.0, 0.0], 0.1, 1.5, 2.0).is_err());
    assert!(capacity_ball_comparison(&g, &a, [0.0, 0.0], 0.2, 1.5, 6.0).is_err());
}

#[test]
fn semicontinuity_probe_examples() {
    let g = build_grid(2, 1.0, 96, WeightSpec::Uniform).unwrap();
    let h = g.h();
    let window = ball(&g, [0.0, 0.0], 0.85).unwrap();
    let schedule = [16.0 * h, 8.0 * h, 4.0 * h];
    let r = semicontinuity_probe(&g, &GridFunction::constant(&g, 2.0), &window, &schedule, 1e-9).unwrap();
    assert!(r.probed > 0);
    assert!(r.lsc_violations.is_empty() && r.jump_cells.is_empty());

    let a = rectangle(&g, [-0.3, 0.2], [-0.05, 0.1]).union(&ball(&g, [0.2, 0.3], 0.12).unwrap());
    let sol = solve_obstacle_set(&g, &a, &window).unwrap();
    let r = semicontinuity_probe(&g, &GridFunction::indicator(&sol.set), &window, &schedule, 1e-9).unwrap();
    assert!(r.lsc_violations.is_empty());
    assert!(!r.jump_cells.is_empty());
    assert!(semicontinuity_probe(&g, &GridFunction::constant(&g, 2.0), &window, &[4.0 * h, 8.0 * h], 1e-9).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn capacity_is_monotone_in_the_inner_set(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = build_grid(2, 1.0, 24, WeightSpec::PowerLaw(rng.gen_range(-1.9..0.5))).unwrap();
        let window = ball(&g, [0.0, 0.0], 0.8).unwrap();
        let mut cells: Vec<usize> = window.iter().collect();
        cells.shuffle(&mut rng);
        let k = rng.gen_range(0..cells.len() / 3);
        let small = CellSet::from_cells(&g, cells[..k].iter().copied());
        let big = CellSet::from_cells(&g, cells[..k + rng.gen_range(0..cells.len() / 3)].iter().copied());
        let a = variational_capacity(&g, &small, &window).unwrap().value;
        let b = variational_capacity(&g, &big, &window).unwrap().value;
        prop_assert!(a <= b * (1.0 + 1e-12));
    }

    #[test]
    fn oracle_agreement_on_small_windows(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = build_grid(2, 1.0, 8, WeightSpec::PowerLaw(rng.gen_range(-1.9..0.9))).unwrap();
        let mut interior: Vec<usize> = (0..g.len()).filter(|&c| !g.is_boundary_cell(c)).collect();
        interior.shuffle(&mut rng);
        let k = rng.gen_range(0..5);
        let free = rng.gen_range(0..=16);
        let a = CellSet::from_cells(&g, interior[..k].iter().copied());
        let window = CellSet::from_cells(&g, interior[..k + free].iter().copied());
        let oracle = enumerate_oracle(&CutProblem::new(&g, a.clone(), window.complement(), window.difference(&a)).unwrap()).unwrap();
        let sol = solve_obstacle_set(&g, &a, &window).unwrap();
        prop_assert_eq!(&sol.set, &oracle.set);
        prop_assert!(close(sol.perimeter_value, oracle.value, 1e-12));
    }
}
