//! Obstacle problems, variational 1-capacity and inequality checkers for
//! perimeter minimizers.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bv::{limits_at, local_variation, GridFunction};
use crate::error::{invalid, LabError, Result};
use crate::flow::{min_cut, CutProblem, CutResult};
use crate::grid::{ball, CellSet, GridSpace, Point};

fn require_window(space: &GridSpace, inner: &CellSet, window: &CellSet) -> Result<()> {
    if inner.layout() != space.layout() || window.layout() != space.layout() {
        return Err(invalid("sets belong to a different grid"));
    }
    if !inner.is_subset(window) {
        return Err(invalid("obstacle set is not contained in the window"));
    }
    if window.touches_boundary(space) {
        return Err(LabError::BoundaryContact(
            "window contains cells on the outer ring of the grid".into(),
        ));
    }
    Ok(())
}

/// Minimal perimeter minimizer `E` with `A ⊆ E ⊆ Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSolution {
    pub set: CellSet,
    /// `P(E, X)`.
    pub perimeter_value: f64,
    pub cut: CutResult,
}

pub fn solve_obstacle_set(space: &GridSpace, obstacle: &CellSet, window: &CellSet) -> Result<SetSolution> {
    require_window(space, obstacle, window)?;
    let problem = CutProblem::new(
        space,
        obstacle.clone(),
        window.complement(),
        window.difference(obstacle),
    )?;
    let cut = min_cut(&problem)?;
    Ok(SetSolution {
        set: cut.set.clone(),
        perimeter_value: cut.value,
        cut,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub value: f64,
    pub extremal_set: CellSet,
    pub inner: CellSet,
    pub window: CellSet,
}

/// `rcap_1(A, Ω)` as the minimum cut between `A` and the complement of `Ω`.
pub fn variational_capacity(space: &GridSpace, inner: &CellSet, window: &CellSet) -> Result<CapacityResult> {
    let solution = solve_obstacle_set(space, inner, window)?;
    Ok(CapacityResult {
        value: solution.perimeter_value,
        extremal_set: solution.set,
        inner: inner.clone(),
        window: window.clone(),
    })
}

/// Capacities of `A` relative to `B(x, t r)` and `B(x, s r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallComparison {
    pub cap_t: f64,
    pub cap_s: f64,
    /// `cap_s / cap_t`, or 1 when both vanish.
    pub ratio: f64,
}

pub fn capacity_ball_comparison(
    space: &GridSpace,
    set: &CellSet,
    x: Point,
    r: f64,
    s: f64,
    t: f64,
) -> Result<BallComparison> {
    if !(s > 1.0 && s < t) {
        return Err(invalid(format!("dilations must satisfy 1 < s < t, got ({s}, {t})")));
    }
    if !set.is_subset(&ball(space, x, r)?) {
        return Err(invalid("set is not contained in B(x, r)"));
    }
    space.require_ball_inside(x, t * r, "capacity comparison")?;
    let cap_t = variational_capacity(space, set, &ball(space, x, t * r)?)?.value;
    let cap_s = variational_capacity(space, set, &ball(space, x, s * r)?)?.value;
    let ratio = if cap_t > 0.0 { cap_s / cap_t } else { 1.0 };
    Ok(BallComparison { cap_t, cap_s, ratio })
}

/// Obstacle of a general problem.
#[derive(Debug, Clone, PartialEq)]
pub enum Obstacle {
    /// `ψ = χ_A`.
    Set(CellSet),
    Function(GridFunction),
}

impl Obstacle {
    fn value(&self, c: usize) -> f64 {
        match self {
            Obstacle::Set(s) => f64::from(u8::from(s.contains(c))),
            Obstacle::Function(f) => f.value(c),
        }
    }
}

/// Data of the problem `u >= ψ` in `Ω`, `u = f` outside `Ω`, quantised to `levels`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleSpec {
    pub domain: CellSet,
    pub obstacle: Obstacle,
    pub boundary_data: GridFunction,
    pub levels: Vec<f64>,
}

/// Layer-cake solution of a quantised obstacle problem.
///
/// The base value is `min f`. Every level `t_k` above it is solved as a set
/// problem, top level first, with sources `{ψ > t_(k-1)} ∩ Ω`, the cells outside
/// `Ω` where `f >= t_k`, and the solution of the level above.
pub fn solve_obstacle_general(space: &GridSpace, spec: &ObstacleSpec) -> Result<GridFunction> {
    let domain = &spec.domain;
    if domain.layout() != space.layout() || spec.boundary_data.layout() != space.layout() {
        return Err(invalid("problem data belong to a different grid"));
    }
    if let Obstacle::Set(s) = &spec.obstacle {
        require_window(space, s, domain)?;
    } else if let Obstacle::Function(f) = &spec.obstacle {
        if f.layout() != space.layout() {
            return Err(invalid("obstacle belongs to a different grid"));
        }
    }
    if domain.touches_boundary(space) {
        return Err(LabError::BoundaryContact(
            "domain contains cells on the outer ring of the grid".into(),
        ));
    }
    if spec.levels.iter().any(|t| !t.is_finite()) || spec.levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("levels must be finite and strictly increasing"));
    }
    let f = &spec.boundary_data;
    let base = f.min();
    let levels: Vec<f64> = spec.levels.iter().copied().filter(|&t| t > base).collect();
    for (c, &v) in f.values().iter().enumerate() {
        if v != base && !levels.contains(&v) {
            return Err(invalid(format!(
                "boundary value {v} at cell {c} is not one of the quantisation levels"
            )));
        }
    }
    let top = levels.last().copied().unwrap_or(base);
    for c in domain.iter() {
        let psi = spec.obstacle.value(c);
        if psi > top {
            return Err(LabError::Infeasible(format!(
                "obstacle value {psi} at cell {c} exceeds the highest level {top}"
            )));
        }
    }

    let mut u = vec![base; space.len()];
    let mut above = CellSet::empty(space);
    for k in (0..levels.len()).rev() {
        let t = levels[k];
        let below = if k == 0 { base } else { levels[k - 1] };
        let sources = CellSet::from_fn(space, |c| {
            above.contains(c)
                || if domain.contains(c) {
                    spec.obstacle.value(c) > below
                } else {
                    f.value(c) >= t
                }
        });
        let sinks = CellSet::from_fn(space, |c| !domain.contains(c) && f.value(c) < t);
        let problem = CutProblem::with_free_rest(space, sources, sinks)?;
        let cut = min_cut(&problem)?;
        for c in cut.set.iter() {
            u[c] += t - below;
        }
        above = cut.set;
    }
    GridFunction::new(space, u)
}

/// Outcome of random nonnegative perturbation tests.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperminimizerReport {
    pub trials: usize,
    pub violations: usize,
    /// Largest `TV(u; S) - TV(u + φ; S)` seen.
    pub worst_excess: f64,
    /// Support of the first violating perturbation.
    pub first_violation: Option<Vec<usize>>,
}

/// Random nonnegative bump supported in `domain_cells`: a rectangle with one
/// amplitude, or a rectangle tiled by blocks with independent amplitudes.
fn random_bump(
    space: &GridSpace,
    domain: &CellSet,
    anchor: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, f64)> {
    let n = space.resolution();
    let w = rng.gen_range(1..=6usize);
    let h = if space.dim() == 1 { 1 } else { rng.gen_range(1..=6usize) };
    let [cx, cy] = space.coords(anchor);
    // the anchor lies somewhere inside the rectangle
    let ax = cx.saturating_sub(rng.gen_range(0..w));
    let ay = cy.saturating_sub(rng.gen_range(0..h));
    let piecewise = rng.gen_bool(0.5);
    let block = rng.gen_range(1..=3usize);
    let amplitude = 2.0 * (1.0 - rng.gen::<f64>());
    let mut block_values = std::collections::HashMap::new();
    let mut out = Vec::new();
    for dy in 0..h {
        for dx in 0..w {
            let (x, y) = (ax + dx, ay + dy);
            if x >= n || (space.dim() == 2 && y >= n) {
                continue;
            }
            let c = space.index(x, y);
            if !domain.contains(c) {
                continue;
            }
            let value = if piecewise {
                *block_values.entry((dx / block, dy / block)).or_insert_with(|| {
                    if rng.gen_bool(0.3) {
                        0.0
                    } else {
                        2.0 * (1.0 - rng.gen::<f64>())
                    }
                })
            } else {
                amplitude
            };
            if value > 0.0 {
                out.push((c, value));
            }
        }
    }
    out
}

/// Samples `trials` nonnegative perturbations `φ` supported in `domain` and
/// counts those with `TV(u; S) > TV(u + φ; S) + 1e-9`, where `S` is the support
/// of `φ` plus its neighbours.
pub fn verify_superminimizer(
    space: &GridSpace,
    u: &GridFunction,
    domain: &CellSet,
    trials: usize,
    rng_seed: u64,
) -> Result<SuperminimizerReport> {
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    if u.layout() != space.layout() || domain.layout() != space.layout() {
        return Err(invalid("function or domain belongs to a different grid"));
    }
    let mut report = SuperminimizerReport {
        trials,
        violations: 0,
        worst_excess: f64::NEG_INFINITY,
        first_violation: None,
    };
    let domain_cells: Vec<usize> = domain.iter().collect();
    if domain_cells.is_empty() {
        report.worst_excess = 0.0;
        return Ok(report);
    }
    // half of the bumps are anchored where u jumps, so that they interact with it
    let active: Vec<usize> = domain_cells
        .iter()
        .copied()
        .filter(|&c| space.neighbors(c).any(|v| u.value(v) != u.value(c)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut done = 0;
    while done < trials {
        let anchor = if !active.is_empty() && rng.gen_bool(0.5) {
            active[rng.gen_range(0..active.len())]
        } else {
            domain_cells[rng.gen_range(0..domain_cells.len())]
        };
        let bump = random_bump(space, domain, anchor, &mut rng);
        if bump.is_empty() {
            continue;
        }
        done += 1;
        let phi: std::collections::HashMap<usize, f64> = bump.iter().copied().collect();
        let mut support: HashSet<usize> = phi.keys().copied().collect();
        for &(c, _) in &bump {
            support.extend(space.neighbors(c));
        }
        let mut cells: Vec<usize> = support.iter().copied().collect();
        cells.sort_unstable();
        let before = local_variation(space, |c| u.value(c), &cells, |c| support.contains(&c));
        let after = local_variation(
            space,
            |c| u.value(c) + phi.get(&c).copied().unwrap_or(0.0),
            &cells,
            |c| support.contains(&c),
        );
        let excess = before - after;
        report.worst_excess = report.worst_excess.max(excess);
        if excess > 1e-9 {
            report.violations += 1;
            if report.first_violation.is_none() {
                let mut s: Vec<usize> = phi.keys().copied().collect();
                s.sort_unstable();
                report.first_violation = Some(s);
            }
        }
    }
    Ok(report)
}

/// Both sides of the De Giorgi estimate with the discrete cutoff slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeGiorgiCheck {
    /// `TV((u - k)_+; B(x, s1))`.
    pub lhs: f64,
    /// `2 / (s2 - s1) * sum_{B(x, s2)} (u - k)_+ mu_c`.
    pub rhs: f64,
    /// `1 + 4h / (s2 - s1)`.
    pub slack: f64,
}

impl DeGiorgiCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * self.slack
    }
}

pub fn degiorgi_check(
    space: &GridSpace,
    u: &GridFunction,
    x: Point,
    k: f64,
    s1: f64,
    s2: f64,
) -> Result<DeGiorgiCheck> {
    if u.layout() != space.layout() {
        return Err(invalid("function belongs to a different grid"));
    }
    if !(s1 > 0.0 && s1 < s2) {
        return Err(invalid(format!("radii must satisfy 0 < s1 < s2, got ({s1}, {s2})")));
    }
    if s2 - s1 < 2.0 * space.h() {
        return Err(invalid(format!(
            "radii gap {} is below 2h = {}",
            s2 - s1,
            2.0 * space.h()
        )));
    }
    space.require_ball_inside(x, s2, "De Giorgi check")?;
    let inner = ball(space, x, s1)?;
    let cells: Vec<usize> = inner.iter().collect();
    let lhs = local_variation(space, |c| (u.value(c) - k).max(0.0), &cells, |c| inner.contains(c));
    let mut mass = 0.0;
    space.for_each_near(x, s2, |c, d| {
        if d < s2 {
            mass += (u.value(c) - k).max(0.0) * space.measure(c);
        }
    });
    Ok(DeGiorgiCheck {
        lhs,
        rhs: 2.0 / (s2 - s1) * mass,
        slack: 1.0 + 4.0 * space.h() / (s2 - s1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakHarnackCheck {
    /// `max_{B(x, r)} u`.
    pub sup_val: f64,
    /// `(R / (R - r))^Q` times the mean of `(u - k)_+` over `B(x, R)`.
    pub integral_term: f64,
    /// `(sup_val - k) / integral_term`, or 0 when the integral term vanishes.
    pub fitted_c: f64,
}

pub fn weak_harnack_check(
    space: &GridSpace,
    u: &GridFunction,
    x: Point,
    r: f64,
    big_r: f64,
    k: f64,
    dimension_exponent: f64,
) -> Result<WeakHarnackCheck> {
    if u.layout() != space.layout() {
        return Err(invalid("function belongs to a different grid"));
    }
    if !(r > 0.0 && r < big_r) {
        return Err(invalid(format!("radii must satisfy 0 < r < R, got ({r}, {big_r})")));
    }
    space.require_ball_inside(x, big_r, "weak Harnack check")?;
    let mut sup_val = f64::NEG_INFINITY;
    let mut mass = 0.0;
    let mut measure = 0.0;
    space.for_each_near(x, big_r, |c, d| {
        if d < big_r {
            mass += (u.value(c) - k).max(0.0) * space.measure(c);
            measure += space.measure(c);
            if d < r {
                sup_val = sup_val.max(u.value(c));
            }
        }
    });
    if !sup_val.is_finite() {
        return Err(invalid(format!("ball of radius {r} around {x:?} holds no cells")));
    }
    let integral_term = (big_r / (big_r - r)).powf(dimension_exponent) * mass / measure;
    let fitted_c = if integral_term > 0.0 {
        (sup_val - k) / integral_term
    } else {
        0.0
    };
    Ok(WeakHarnackCheck {
        sup_val,
        integral_term,
        fitted_c,
    })
}

/// Per-cell semicontinuity probe report.
#[derive(Debug, Clone, PartialEq)]
pub struct SemicontinuityReport {
    /// Number of cells whose smallest ball lies in the domain.
    pub probed: usize,
    /// Cells where `u^∧` at the smallest radius exceeds the infimum of `u` over
    /// that ball by more than `gap`.
    pub lsc_violations: Vec<usize>,
    /// Cells with `u^∧ < u^∨` at the smallest radius.
    pub jump_cells: Vec<usize>,
    /// Violation count for every radius of the schedule.
    pub per_radius: Vec<(f64, usize)>,
    pub gap: f64,
}

/// Density tolerance used by the probes.
pub const PROBE_DENSITY_TOL: f64 = 0.01;

/// Compares the lower approximate limit with the pointwise infimum over shrinking
/// balls at every cell of `domain` whose smallest ball stays inside `domain`.
pub fn semicontinuity_probe(
    space: &GridSpace,
    u: &GridFunction,
    domain: &CellSet,
    r_schedule: &[f64],
    gap: f64,
) -> Result<SemicontinuityReport> {
    use rayon::prelude::*;

    if r_schedule.is_empty() || r_schedule.windows(2).any(|w| w[0] <= w[1]) {
        return Err(invalid("radius schedule must be non-empty and strictly decreasing"));
    }
    let r_min = r_schedule[r_schedule.len() - 1];
    crate::bv::validate_density_query(space, r_min, PROBE_DENSITY_TOL)?;
    if u.layout() != space.layout() || domain.layout() != space.layout() {
        return Err(invalid("function or domain belongs to a different grid"));
    }
    let stencil = crate::bv::ball_stencil(space, r_min);
    let n = space.resolution() as isize;
    let inside_domain = |c: usize| {
        let [ix, iy] = space.coords(c);
        stencil.iter().all(|&(dx, dy)| {
            let (x, y) = (ix as isize + dx, iy as isize + dy);
            x >= 0
                && x < n
                && y >= 0
                && (space.dim() == 1 || y < n)
                && domain.contains(space.index(x as usize, y as usize))
        })
    };
    let cells: Vec<usize> = domain.iter().filter(|&c| inside_domain(c)).collect();
    let schedule = r_schedule.to_vec();
    let rows: Vec<(Vec<bool>, bool)> = cells
        .par_iter()
        .map(|&c| {
            let x = space.center(c);
            let mut flags = Vec::with_capacity(schedule.len());
            let mut jump = false;
            for (i, &r) in schedule.iter().enumerate() {
                let mut inf = f64::INFINITY;
                space.for_each_near(x, r, |v, d| {
                    if d < r {
                        inf = inf.min(u.value(v));
                    }
                });
                let lim = approx_limits_single(space, u, x, r);
                flags.push(lim.0 > inf + gap);
                if i + 1 == schedule.len() {
                    jump = lim.0 < lim.1;
                }
            }
            (flags, jump)
        })
        .collect();
    let mut report = SemicontinuityReport {
        probed: cells.len(),
        lsc_violations: Vec::new(),
        jump_cells: Vec::new(),
        per_radius: schedule.iter().map(|&r| (r, 0)).collect(),
        gap,
    };
    for (&c, (flags, jump)) in cells.iter().zip(&rows) {
        for (i, &f) in flags.iter().enumerate() {
            if f {
                report.per_radius[i].1 += 1;
            }
        }
        if flags[flags.len() - 1] {
            report.lsc_violations.push(c);
        }
        if *jump {
            report.jump_cells.push(c);
        }
    }
    Ok(report)
}

fn approx_limits_single(space: &GridSpace, u: &GridFunction, x: Point, r: f64) -> (f64, f64) {
    limits_at(space, u, x, r, PROBE_DENSITY_TOL).unwrap_or((f64::NEG_INFINITY, f64::INFINITY))
}
