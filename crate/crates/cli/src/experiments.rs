//! The named experiments. Each returns its check rows, profiles and figures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use bvlab_core::bv::perimeter_total;
use bvlab_core::cartan::{
    counterexample_on, default_verdict, strong_cartan_construct, weak_cartan_construct, ThinnessGate,
};
use bvlab_core::fine::{point_thickness_experiment, thinness_profile, Classification, ThinnessProfile};
use bvlab_core::shapes::{cusp, half_plane, rectangle};
use bvlab_core::variational::{
    degiorgi_check, solve_obstacle_set, verify_superminimizer, weak_harnack_check, SetSolution,
};
use bvlab_core::{
    ball, build_grid, coarea_check, estimate_constants, CellSet, CheckRow, GridFunction, GridSpace, LabError,
    Point, WeightSpec,
};

use crate::config::{Experiment, ExperimentConfig, Gate};
use crate::output::{Figure, Layer, Profile};
use crate::CliError;

pub struct Outcome {
    pub rows: Vec<CheckRow>,
    pub profiles: Vec<Profile>,
    pub figures: Vec<Figure>,
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.experiment {
        Experiment::Counterexample => counterexample(cfg),
        Experiment::WeightedPoint => weighted_point(cfg),
        Experiment::CartanDemo => cartan_demo(cfg),
        Experiment::StrongCartan => strong_cartan(cfg),
        Experiment::HarnackSweep => harnack_sweep(cfg),
        Experiment::CoareaSuite => coarea_suite(cfg),
        Experiment::ThinnessAtlas => thinness_atlas(cfg),
    }
}

fn build_space(cfg: &ExperimentConfig) -> Result<GridSpace, CliError> {
    let s = &cfg.space;
    build_grid(s.dim, s.extent, s.resolution, s.weight).map_err(|e| match e {
        LabError::InvalidArgument(m) => CliError::Usage(format!("space: {m}")),
        other => other.into(),
    })
}

/// Relative comparison `|lhs - rhs| <= tol * |rhs|`.
fn relative_row(name: &str, scale: f64, lhs: f64, rhs: f64, tol: f64) -> CheckRow {
    CheckRow::new(name, scale, lhs, rhs, tol, (lhs - rhs).abs() <= tol * rhs.abs())
}

/// One row per ratio asserting `ratio >= floor`, untrusted past the resolution floor.
fn floor_rows(name: &str, profile: &ThinnessProfile, floor: f64) -> Vec<CheckRow> {
    profile
        .radii
        .iter()
        .zip(&profile.ratios)
        .enumerate()
        .map(|(i, (&r, &t))| {
            let row = CheckRow::new(name, r, t, floor, 0.0, t >= floor);
            if i <= profile.resolution_floor {
                row
            } else {
                row.untrusted()
            }
        })
        .collect()
}

fn classification_code(c: Classification) -> f64 {
    match c {
        Classification::Thin => 0.0,
        Classification::Thick => 1.0,
        Classification::Inconclusive => 2.0,
    }
}

fn counterexample(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let space = build_space(cfg)?;
    let report = counterexample_on(&space, cfg.params.eps, cfg.params.chain_depth)?;
    let radii: Vec<f64> = report.scales.iter().map(|s| s.radius).collect();
    let caps: Vec<f64> = report.scales.iter().map(|s| s.capacity).collect();
    let thetas: Vec<f64> = report.scales.iter().map(|s| s.theta).collect();
    let rows = report.rows();
    let layers = vec![Layer::Set(report.obstacle), Layer::Set(report.solution.set)];
    Ok(Outcome {
        rows,
        profiles: vec![Profile::new("capacity", &radii, &caps), Profile::new("theta", &radii, &thetas)],
        figures: vec![Figure { name: "counterexample".into(), space, layers }],
    })
}

/// `μ(B(0, r)) = 2π r^(a+2) / (a+2)` in the plane with density `|x|^a`.
fn power_ball_mass(a: f64, r: f64) -> f64 {
    2.0 * std::f64::consts::PI * r.powf(a + 2.0) / (a + 2.0)
}

fn weighted_point(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let space = build_space(cfg)?;
    let WeightSpec::PowerLaw(a) = space.weight_spec() else {
        return Err(CliError::Usage("weighted_point needs space.weight = power_law(a)".into()));
    };
    let p = point_thickness_experiment(&space, cfg.params.depth)?;
    let tol = cfg.tolerance.mass_ratio;
    let mut rows = vec![CheckRow::new(
        "mass_ratio_decreasing",
        p.radii[p.radii.len() - 1],
        f64::from(u8::from(p.strictly_decreasing())),
        1.0,
        0.0,
        p.strictly_decreasing(),
    )];
    for (j, &s) in p.successive.iter().enumerate() {
        let (r0, r1) = (p.radii[j], p.radii[j + 1]);
        let oracle = (r1 / power_ball_mass(a, r1)) / (r0 / power_ball_mass(a, r0));
        let trusted = p.trusted[j] && p.trusted[j + 1];
        for row in [
            relative_row("mass_ratio_successive", r1, s, oracle, tol),
            relative_row("mass_ratio_literal", r1, s, 2f64.powf(-1.5), tol),
        ] {
            rows.push(if trusted { row } else { row.untrusted() });
        }
    }
    rows.extend(floor_rows("origin_profile", &p.profile, cfg.tolerance.profile_floor));
    let origin = CellSet::from_cells(&space, space.cells_touching([0.0, 0.0]));
    Ok(Outcome {
        rows,
        profiles: vec![
            Profile::new("mass_ratio", &p.radii, &p.ratios),
            Profile::new("origin_profile", &p.profile.radii, &p.profile.ratios),
        ],
        figures: vec![Figure { name: "weighted_point".into(), space, layers: vec![Layer::Set(origin)] }],
    })
}

fn gate_for(cfg: &ExperimentConfig, profile: &ThinnessProfile) -> Result<(ThinnessGate, CheckRow), CliError> {
    let verdict = default_verdict(profile)?;
    let row = CheckRow::info(
        format!("set_thinness_{}", verdict.classification),
        profile.radii[profile.resolution_floor],
        verdict.last_trusted,
        verdict.tau_thin,
    );
    let gate = match cfg.params.gate {
        Gate::Verdict => ThinnessGate::Verdict(verdict),
        Gate::Override => ThinnessGate::Override,
    };
    Ok((gate, row))
}

fn cartan_demo(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let space = build_space(cfg)?;
    let p = &cfg.params;
    let x = [0.0, 0.0];
    let a = cusp(&space, x, p.radius / 2.0, p.curvature);
    let profile = thinness_profile(&space, &a, x, 2.0, p.radius / 2.0, p.depth)?;
    let (gate, row) = gate_for(cfg, &profile)?;
    let cert = weak_cartan_construct(&space, &a, x, p.radius, p.depth, &gate)?;
    let mut rows = vec![row];
    rows.extend(cert.checks.iter().cloned());
    let scales: Vec<f64> = (0..=p.depth).map(|j| cert.decomposition.scale(j)).collect();
    let profiles = vec![
        Profile::new("set_profile", &profile.radii, &profile.ratios),
        Profile::new("superlevel", &cert.superlevel_profile.radii, &cert.superlevel_profile.ratios),
        Profile::new("perimeter_e0", &scales, &cert.perimeter_profiles[0]),
        Profile::new("perimeter_e1", &scales[1..], &cert.perimeter_profiles[1]),
    ];
    let layers = vec![Layer::Set(a), Layer::Set(cert.e0), Layer::Set(cert.e1)];
    Ok(Outcome {
        rows,
        profiles,
        figures: vec![Figure { name: "cartan".into(), space, layers }],
    })
}

fn strong_cartan(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let space = build_space(cfg)?;
    let p = &cfg.params;
    let x = [0.0, 0.0];
    let a = cusp(&space, x, p.radius / 2.0, p.curvature);
    let profile = thinness_profile(&space, &a, x, 2.0, p.radius / 2.0, p.depth)?;
    let (gate, row) = gate_for(cfg, &profile)?;
    let s = strong_cartan_construct(&space, &a, x, p.radius, p.k_max, &gate)?;
    let mut rows = vec![row];
    for (i, (&r, &cap)) in s.radii.iter().zip(&s.capacities).enumerate() {
        let budget = s.base_capacity * 2f64.powi(-(i as i32 + 1));
        rows.push(CheckRow::new("capacity_budget", r, cap, budget, 0.0, cap < budget));
    }
    for (k, (&r, &w)) in s.radii.iter().zip(&s.divergence_witness).enumerate() {
        let level = (k + 1) as f64;
        rows.push(CheckRow::new("divergence_witness", r, w, level, 0.0, w >= level));
    }
    rows.push(CheckRow::new(
        "levels_complete",
        p.radius,
        s.radii.len() as f64,
        p.k_max as f64,
        0.0,
        !s.partial,
    ));
    rows.push(CheckRow::at_most("value_at_x", space.h(), s.value_at_x, 1.0, 0.0));
    let layers = vec![Layer::Set(a), Layer::Function(s.stacked)];
    Ok(Outcome {
        rows,
        profiles: vec![
            Profile::new("set_profile", &profile.radii, &profile.ratios),
            Profile::new("capacities", &s.radii, &s.capacities),
        ],
        figures: vec![Figure { name: "strong_cartan".into(), space, layers }],
    })
}

/// One obstacle problem of the canonical suite.
pub struct SuiteCase {
    pub space: GridSpace,
    pub obstacle: CellSet,
    pub window: CellSet,
    pub solution: SetSolution,
}

/// `count` seeded obstacle problems on `resolution`² grids over `[-1, 1]²`:
/// unions of discs, boxes and cusps inside a disc window, with uniform and
/// power-law weights in turn.
pub fn canonical_suite(resolution: usize, count: usize, seed: u64) -> Result<Vec<SuiteCase>, CliError> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(i as u64));
            let weight = match i % 3 {
                0 => WeightSpec::Uniform,
                1 => WeightSpec::PowerLaw(-1.5),
                _ => WeightSpec::PowerLaw(0.5),
            };
            let space = build_grid(2, 1.0, resolution, weight)?;
            let window = ball(&space, [0.0, 0.0], rng.gen_range(0.7..0.9))?;
            let mut obstacle = CellSet::empty(&space);
            for _ in 0..rng.gen_range(1..=3) {
                let c = [rng.gen_range(-0.45..0.45), rng.gen_range(-0.45..0.45)];
                let piece = match rng.gen_range(0..3) {
                    0 => ball(&space, c, rng.gen_range(0.04..0.2))?,
                    1 => {
                        let (w, h) = (rng.gen_range(0.02..0.3), rng.gen_range(0.02..0.3));
                        rectangle(&space, [c[0], c[0] + w], [c[1], c[1] + h])
                    }
                    _ => cusp(&space, c, rng.gen_range(0.1..0.3), rng.gen_range(0.1..0.5)),
                };
                obstacle = obstacle.union(&piece);
            }
            let obstacle = obstacle.intersection(&window);
            let solution = solve_obstacle_set(&space, &obstacle, &window)?;
            Ok(SuiteCase { space, obstacle, window, solution })
        })
        .collect()
}

/// Draws ball centres for the sweep: cells of `E \ A` when there are any,
/// otherwise anywhere in `[-0.7, 0.7]²`. Returns the centre and its distance to
/// the nearest cell centre of `A`.
struct CentreSampler {
    gap: Vec<Point>,
    edge: Vec<Point>,
    h: f64,
}

impl CentreSampler {
    fn new(case: &SuiteCase) -> Self {
        let g = &case.space;
        let gap = case.solution.set.difference(&case.obstacle).iter().map(|c| g.center(c)).collect();
        let edge = case
            .obstacle
            .iter()
            .filter(|&c| g.neighbors(c).any(|d| !case.obstacle.contains(d)))
            .map(|c| g.center(c))
            .collect();
        CentreSampler { gap, edge, h: g.h() }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> (Point, f64) {
        let x = if !self.gap.is_empty() && rng.gen_bool(0.8) {
            let c = self.gap[rng.gen_range(0..self.gap.len())];
            let j = self.h / 2.0;
            [c[0] + rng.gen_range(-j..j), c[1] + rng.gen_range(-j..j)]
        } else {
            [rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)]
        };
        let d = self.edge.iter().map(|c| (c[0] - x[0]).hypot(c[1] - x[1])).fold(f64::INFINITY, f64::min);
        (x, d)
    }
}

/// Checks of one suite case: superminimizer trials, De Giorgi triples and the
/// weak Harnack fit. Balls avoid the obstacle, where `χ_A <= k = 0`; a sample is
/// nontrivial when the ball meets `E \ A`. Returns the rows and the largest
/// fitted constant.
fn sweep_case(i: usize, case: &SuiteCase, cfg: &ExperimentConfig) -> Result<(Vec<CheckRow>, f64), CliError> {
    let p = &cfg.params;
    let g = &case.space;
    let h = g.h();
    let u = GridFunction::indicator(&case.solution.set);
    let scale = i as f64;
    let mut rows = Vec::new();
    let seed = p.seed.wrapping_add(i as u64);
    let sm = verify_superminimizer(g, &u, &case.window, p.trials, seed)?;
    rows.push(CheckRow::at_most("superminimizer", scale, sm.violations as f64, 0.0, 0.0));

    let sampler = CentreSampler::new(case);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xde_9105);
    let (mut failures, mut worst, mut nontrivial) = (0usize, 0.0f64, 0usize);
    let mut tested = 0;
    while tested < p.triples {
        let (x, d) = sampler.draw(&mut rng);
        let s2_max = d.min(0.4);
        if s2_max <= 4.0 * h {
            continue;
        }
        let s2 = rng.gen_range(4.0 * h..=s2_max);
        let s1 = rng.gen_range(h..=s2 - 2.0 * h);
        if !ball(g, x, s2)?.is_subset(&case.window) {
            continue;
        }
        let d = degiorgi_check(g, &u, x, 0.0, s1, s2)?;
        if !d.holds() {
            failures += 1;
        }
        if d.rhs > 0.0 {
            nontrivial += 1;
            worst = worst.max(d.lhs / (d.rhs * d.slack));
        }
        tested += 1;
    }
    rows.push(CheckRow::at_most("degiorgi", scale, failures as f64, 0.0, 0.0));
    rows.push(CheckRow::info("degiorgi_nontrivial", scale, nontrivial as f64, p.triples as f64));
    rows.push(CheckRow::info("degiorgi_worst_ratio", scale, worst, 1.0));

    let q = estimate_constants(g, 8)?.dimension_exponent;
    let (mut fitted, mut nontrivial) = (0.0f64, 0usize);
    let mut tested = 0;
    while tested < p.triples {
        let (x, d) = sampler.draw(&mut rng);
        let r_max = d.min(0.25);
        if r_max <= 4.0 * h {
            continue;
        }
        let big_r = rng.gen_range(4.0 * h..=r_max);
        if !ball(g, x, big_r)?.is_subset(&case.window) {
            continue;
        }
        let w = weak_harnack_check(g, &u, x, big_r / 2.0, big_r, 0.0, q)?;
        if w.integral_term > 0.0 {
            nontrivial += 1;
        }
        fitted = fitted.max(w.fitted_c);
        tested += 1;
    }
    rows.push(CheckRow::info("weak_harnack_nontrivial", scale, nontrivial as f64, p.triples as f64));
    rows.push(CheckRow::info("weak_harnack_fitted", scale, fitted, cfg.tolerance.harnack_c));
    Ok((rows, fitted))
}

fn harnack_sweep(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    let suite = canonical_suite(cfg.space.resolution, p.solutions, p.seed)?;
    let per_case: Vec<(Vec<CheckRow>, f64)> = suite
        .par_iter()
        .enumerate()
        .map(|(i, case)| sweep_case(i, case, cfg))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut fitted = Vec::new();
    for (case_rows, c) in per_case {
        rows.extend(case_rows);
        fitted.push(c);
    }
    let max_c = fitted.iter().copied().fold(0.0, f64::max);
    rows.push(CheckRow::at_most("weak_harnack_max", 0.0, max_c, cfg.tolerance.harnack_c, 0.0));
    let index: Vec<f64> = (0..fitted.len()).map(|i| i as f64).collect();
    let figures = suite
        .into_iter()
        .take(3)
        .enumerate()
        .map(|(i, c)| Figure {
            name: format!("harnack_case{i}"),
            layers: vec![Layer::Set(c.window), Layer::Set(c.solution.set), Layer::Set(c.obstacle)],
            space: c.space,
        })
        .collect();
    Ok(Outcome {
        rows,
        profiles: vec![Profile::new("weak_harnack_fitted", &index, &fitted)],
        figures,
    })
}

/// Passes when `|lhs - rhs| <= tol * max(|lhs|, |rhs|)`.
fn coarea_row(name: &str, scale: f64, lhs: f64, rhs: f64, tol: f64) -> CheckRow {
    CheckRow::new(name, scale, lhs, rhs, tol, (lhs - rhs).abs() <= tol * lhs.abs().max(rhs.abs()))
}

fn coarea_suite(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    let tol = cfg.tolerance.coarea;
    let max_n = cfg.space.resolution.max(4);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut rows = Vec::new();
    let mut last = None;
    for s in 0..p.samples {
        let dim = if s % 10 == 9 { 1 } else { 2 };
        let n = 2 * rng.gen_range(2..=max_n / 2);
        let lo = if dim == 1 { -0.9 } else { -1.9 };
        let spec = if rng.gen_bool(0.5) { WeightSpec::Uniform } else { WeightSpec::PowerLaw(rng.gen_range(lo..0.9)) };
        let g = build_grid(dim, rng.gen_range(0.5..2.0), n, spec)?;
        let levels: Vec<f64> = (0..rng.gen_range(1..10)).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let u = GridFunction::from_fn(&g, |_| levels[rng.gen_range(0..levels.len())])?;
        let region = if rng.gen_bool(0.3) { CellSet::full(&g) } else { CellSet::from_fn(&g, |_| rng.gen_bool(0.7)) };
        let (lhs, rhs) = coarea_check(&g, &u, &region)?;
        rows.push(coarea_row("coarea", n as f64, lhs, rhs, tol));
        if dim == 2 {
            last = Some((g, u));
        }
    }
    // every function on the 3×3 block of a 4×4 grid taking values in {0, 1, 2}
    // is covered by sampling; indicator sets are enumerated exhaustively
    let g = build_grid(2, 2.0, 4, WeightSpec::Uniform)?;
    let block: Vec<usize> = (0..3).flat_map(|y| (0..3).map(move |x| (x, y))).map(|(x, y)| g.index(x, y)).collect();
    let region = CellSet::from_cells(&g, block.iter().copied());
    let mut block_failures = 0;
    for mask in 0u32..512 {
        let e = CellSet::from_cells(&g, (0..9).filter(|i| mask >> i & 1 == 1).map(|i| block[i]));
        let (lhs, rhs) = coarea_check(&g, &GridFunction::indicator(&e), &region)?;
        if lhs != rhs || lhs != bvlab_core::perimeter(&g, &e, &region)? {
            block_failures += 1;
        }
    }
    rows.push(CheckRow::at_most("coarea_block_exhaustive", 3.0, block_failures as f64, 0.0, 0.0));
    let mut figures = Vec::new();
    if let Some((g, u)) = last {
        figures.push(Figure { name: "coarea_sample".into(), space: g, layers: vec![Layer::Function(u)] });
    }
    Ok(Outcome { rows, profiles: Vec::new(), figures })
}

fn thinness_atlas(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    let (extent, n) = (cfg.space.extent, cfg.space.resolution);
    let uniform = build_grid(2, extent, n, WeightSpec::Uniform).map_err(|e| CliError::Usage(e.to_string()))?;
    let weighted = build_grid(2, extent, n, WeightSpec::PowerLaw(-1.5))?;
    let x = [0.0, 0.0];
    let r = p.radius;
    let h = uniform.h();
    let origin = |g: &GridSpace| CellSet::from_cells(g, g.cells_touching(x));
    let family: Vec<(&str, &GridSpace, CellSet, Option<Classification>)> = vec![
        ("empty", &uniform, CellSet::empty(&uniform), Some(Classification::Thin)),
        ("disc", &uniform, ball(&uniform, x, 2.0 * r)?, Some(Classification::Thick)),
        ("cusp", &uniform, cusp(&uniform, x, r, r), None),
        ("half_plane", &uniform, half_plane(&uniform, h), Some(Classification::Thick)),
        ("origin_uniform", &uniform, origin(&uniform), None),
        ("origin_weighted", &weighted, origin(&weighted), Some(Classification::Thick)),
    ];
    let mut rows = Vec::new();
    let mut profiles = Vec::new();
    let mut figures = Vec::new();
    for (i, (name, g, set, expected)) in family.into_iter().enumerate() {
        let profile = thinness_profile(g, &set, x, 2.0, r, p.depth)?;
        let verdict = default_verdict(&profile)?;
        let got = classification_code(verdict.classification);
        rows.push(match expected {
            Some(e) => {
                let want = classification_code(e);
                CheckRow::new(format!("classify_{name}"), i as f64, got, want, 0.0, got == want)
            }
            None => CheckRow::info(format!("classify_{name}"), i as f64, got, 0.0),
        });
        profiles.push(Profile::new(name, &profile.radii, &profile.ratios));
        let local = set.intersection(&ball(g, x, 2.0 * r)?);
        figures.push(Figure { name: format!("atlas_{name}"), space: g.clone(), layers: vec![Layer::Set(local)] });
    }
    rows.push(CheckRow::info("atlas_perimeter_cusp", r, perimeter_total(&uniform, &cusp(&uniform, x, r, r)), 0.0));
    Ok(Outcome { rows, profiles, figures })
}
