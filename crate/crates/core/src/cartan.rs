//! Weak and strong Cartan constructions and the thick-point counterexample.

use rayon::prelude::*;

use crate::bv::{local_variation, perimeter_total, GridFunction};
use crate::check::CheckRow;
use crate::error::{invalid, LabError, Result};
use crate::fine::{classify, is_trusted, split_densities, thinness_profile, Classification, ThinnessProfile, ThinnessVerdict, TAU_THICK, TAU_THIN};
use crate::grid::{annulus, ball, build_grid, clipped_ball, CellSet, GridSpace, Point, WeightSpec};
use crate::shapes::rectangle_chain;
use crate::variational::{solve_obstacle_set, variational_capacity, SetSolution};

/// Annuli `H_i = B_i \ (9/10) closed(B_(i+1))` and stripes `F_i = (4/5) B_i \ (5/4) B_(i+1)`
/// around `x`, with `B_i = B(x, 2^-i R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnuliDecomposition {
    pub center: Point,
    pub radius: f64,
    pub depth: usize,
    /// `B_0 ..= B_depth`.
    pub balls: Vec<CellSet>,
    /// `H_0 ..= H_depth`.
    pub annuli: Vec<CellSet>,
    /// `F_0 ..= F_(depth + 1)`.
    pub stripes: Vec<CellSet>,
    /// `D_0` (even annuli) and `D_1` (odd annuli).
    pub parity: [CellSet; 2],
    /// Every cell of `B(x, R)` farther than `0.45 · 2^-depth R` lies in `D_0 ∪ D_1`.
    pub coverage_ok: bool,
    /// `F_(i+1)` misses `H_i` and `H_(i+2)` for every `i`.
    pub stripes_separated: bool,
}

impl AnnuliDecomposition {
    pub fn scale(&self, i: usize) -> f64 {
        self.radius * 2f64.powi(-(i as i32))
    }

    /// Inner radius of the deepest annulus; nothing below it is covered.
    pub fn floor_radius(&self) -> f64 {
        0.45 * self.scale(self.depth)
    }
}

pub fn annuli_decomposition(space: &GridSpace, x: Point, radius: f64, depth: usize) -> Result<AnnuliDecomposition> {
    if depth == 0 {
        return Err(invalid("depth must be at least 1"));
    }
    space.require_ball_inside(x, 1.5 * radius, "annuli decomposition")?;
    let deepest = radius * 2f64.powi(-(depth as i32));
    if deepest < 16.0 * space.h() * (1.0 - 1e-12) {
        return Err(LabError::ResolutionInsufficient(format!(
            "deepest ball radius {deepest} is below 16h = {}",
            16.0 * space.h()
        )));
    }
    let scale = |i: usize| radius * 2f64.powi(-(i as i32));
    let mut balls = Vec::with_capacity(depth + 1);
    let mut annuli = Vec::with_capacity(depth + 1);
    for i in 0..=depth {
        balls.push(ball(space, x, scale(i))?);
        annuli.push(annulus(space, x, 0.45 * scale(i), scale(i))?);
    }
    let mut stripes = Vec::with_capacity(depth + 2);
    for i in 0..=depth + 1 {
        let outer = ball(space, x, 0.8 * scale(i))?;
        stripes.push(outer.difference(&ball(space, x, 0.625 * scale(i))?));
    }
    let mut parity = [CellSet::empty(space), CellSet::empty(space)];
    for (i, h) in annuli.iter().enumerate() {
        parity[i % 2] = parity[i % 2].union(h);
    }
    let covered = parity[0].union(&parity[1]);
    let floor = 0.45 * scale(depth);
    let coverage_ok = balls[0]
        .iter()
        .all(|c| space.distance(c, x) <= floor || covered.contains(c));
    let mut stripes_separated = true;
    for i in 0..=depth {
        let f = &stripes[i + 1];
        stripes_separated &= f.is_disjoint(&annuli[i]);
        if i + 2 <= depth {
            stripes_separated &= f.is_disjoint(&annuli[i + 2]);
        }
    }
    Ok(AnnuliDecomposition {
        center: x,
        radius,
        depth,
        balls,
        annuli,
        stripes,
        parity,
        coverage_ok,
        stripes_separated,
    })
}

/// Evidence that the obstacle set is thin at the center.
#[derive(Debug, Clone, PartialEq)]
pub enum ThinnessGate {
    Verdict(ThinnessVerdict),
    /// Run regardless of thinness, e.g. to document how thick sets defeat the
    /// construction.
    Override,
}

fn require_thin(gate: &ThinnessGate) -> Result<()> {
    match gate {
        ThinnessGate::Override => Ok(()),
        ThinnessGate::Verdict(v) if v.classification == Classification::Thin => Ok(()),
        ThinnessGate::Verdict(v) => Err(LabError::Precondition(format!(
            "set is classified {} at the center, not thin",
            v.classification
        ))),
    }
}

fn require_outside(space: &GridSpace, set: &CellSet, x: Point) -> Result<()> {
    if space.cells_touching(x).into_iter().any(|c| set.contains(c)) {
        return Err(invalid(format!("the center {x:?} touches the obstacle set")));
    }
    Ok(())
}

fn density_in_ball(space: &GridSpace, set: &CellSet, x: Point, r: f64) -> f64 {
    let mut inside = 0.0;
    let mut total = 0.0;
    space.for_each_near(x, r, |c, d| {
        if d < r {
            total += space.measure(c);
            if set.contains(c) {
                inside += space.measure(c);
            }
        }
    });
    if total > 0.0 {
        inside / total
    } else {
        0.0
    }
}

/// `r · P(E, B(x, r)) / mu(B(x, r))`.
pub fn perimeter_quotient(space: &GridSpace, set: &CellSet, x: Point, r: f64) -> Result<f64> {
    let b = ball(space, x, r)?;
    let cells: Vec<usize> = b.iter().collect();
    let per = local_variation(
        space,
        |c| f64::from(u8::from(set.contains(c))),
        &cells,
        |c| b.contains(c),
    );
    Ok(r * per / b.measure(space))
}

/// Output of the weak Cartan construction together with its checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanCertificate {
    pub decomposition: AnnuliDecomposition,
    /// One-cell dilation of the obstacle set.
    pub dilated: CellSet,
    /// Solution of the problem with obstacle `W ∩ D_i` in `(3/2) B_i`, for `i = 0..=depth`.
    pub per_scale: Vec<SetSolution>,
    pub e0: CellSet,
    pub e1: CellSet,
    /// `r · P(E_p, B(x, r)) / mu(B(x, r))` at `r = 2^-j R`, `j = p..=depth`.
    pub perimeter_profiles: [Vec<f64>; 2],
    /// Thinness profile of `E_0 ∪ E_1` with base radius `R / 2`.
    pub superlevel_profile: ThinnessProfile,
    pub checks: Vec<CheckRow>,
}

impl CartanCertificate {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|r| !r.failed())
    }

    pub fn check(&self, name: &str) -> impl Iterator<Item = &CheckRow> {
        let name = name.to_string();
        self.checks.iter().filter(move |r| r.name == name)
    }
}

/// Two perimeter minimizers whose union covers `A` near `x` while both vanish at `x`.
///
/// `E_0` solves the obstacle problem for `W ∩ D_0` in `(3/2) B_0` and `E_1` the one
/// for `W ∩ D_1` in `(3/2) B_1`, where `W` is the one-cell dilation of `A`. The
/// per-scale problems for every `i <= depth` are solved as well to check the
/// separation and truncation identities.
pub fn weak_cartan_construct(
    space: &GridSpace,
    set: &CellSet,
    x: Point,
    radius: f64,
    depth: usize,
    gate: &ThinnessGate,
) -> Result<CartanCertificate> {
    require_thin(gate)?;
    if set.layout() != space.layout() {
        return Err(invalid("set belongs to a different grid"));
    }
    require_outside(space, set, x)?;
    let dec = annuli_decomposition(space, x, radius, depth)?;
    let dilated = set.dilate(space);

    // D_i for i >= 2 is the union of H_i, H_(i+2), ...
    let parity_from = |i: usize| {
        let mut d = CellSet::empty(space);
        for j in (i..=depth).step_by(2) {
            d = d.union(&dec.annuli[j]);
        }
        d
    };
    let per_scale: Vec<SetSolution> = (0..=depth)
        .into_par_iter()
        .map(|i| {
            let window = ball(space, x, 1.5 * dec.scale(i))?;
            let obstacle = dilated.intersection(&parity_from(i));
            solve_obstacle_set(space, &obstacle, &window)
        })
        .collect::<Result<_>>()?;
    let e0 = per_scale[0].set.clone();
    let e1 = per_scale[1].set.clone();
    let mut checks = Vec::new();

    for i in 0..=depth {
        let hits = per_scale[i].set.intersection(&dec.stripes[i + 1]).count();
        checks.push(CheckRow::new(
            "separation",
            dec.scale(i),
            hits as f64,
            0.0,
            0.0,
            hits == 0,
        ));
    }

    let floor = dec.floor_radius();
    let union = e0.union(&e1);
    let near = ball(space, x, radius)?;
    let (mut trusted_missing, mut untrusted_missing, mut trusted_cells) = (0usize, 0usize, 0usize);
    for c in set.intersection(&near).iter() {
        let deep = space.distance(c, x) <= floor;
        if !deep {
            trusted_cells += 1;
        }
        if !union.contains(c) {
            if deep {
                untrusted_missing += 1;
            } else {
                trusted_missing += 1;
            }
        }
    }
    checks.push(CheckRow::new(
        "coverage",
        radius,
        trusted_missing as f64,
        trusted_cells as f64,
        0.0,
        trusted_missing == 0,
    ));
    if untrusted_missing > 0 {
        checks.push(CheckRow::info("coverage_below_floor", floor, untrusted_missing as f64, 0.0));
    }

    for i in 2..=depth {
        let e = if i % 2 == 0 { &e0 } else { &e1 };
        let truncated = e.intersection(&ball(space, x, 1.25 * dec.scale(i))?);
        let lhs = perimeter_total(space, &truncated);
        let rhs = per_scale[i].perimeter_value;
        let tol = 1e-12;
        let ok = (lhs - rhs).abs() <= tol * lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        checks.push(CheckRow::new("truncation_consistency", dec.scale(i), lhs, rhs, tol, ok || lhs == rhs));
    }

    for (name, e) in [("vanishing_e0", &e0), ("vanishing_e1", &e1)] {
        let density = density_in_ball(space, e, x, floor);
        checks.push(CheckRow::at_most(name, floor, density, 1e-2, 0.0));
    }

    let mut perimeter_profiles = [Vec::new(), Vec::new()];
    for (p, e) in [(0usize, &e0), (1usize, &e1)] {
        let name = if p == 0 { "perimeter_thinness_e0" } else { "perimeter_thinness_e1" };
        for j in p..=depth {
            let q = perimeter_quotient(space, e, x, dec.scale(j))?;
            if let Some(&prev) = perimeter_profiles[p].last() {
                checks.push(CheckRow::new(name, dec.scale(j), q, prev, 0.0, q < prev));
            }
            perimeter_profiles[p].push(q);
        }
    }

    let superlevel_profile = thinness_profile(space, &union, x, 2.0, radius / 2.0, depth)?;
    for j in 1..superlevel_profile.ratios.len() {
        let (q, prev) = (superlevel_profile.ratios[j], superlevel_profile.ratios[j - 1]);
        let row = CheckRow::new("superlevel_thinness", superlevel_profile.radii[j], q, prev, 0.0, q < prev);
        checks.push(if j <= superlevel_profile.resolution_floor { row } else { row.untrusted() });
    }
    checks.push(CheckRow::new(
        "window_monotonicity",
        radius / 2.0,
        f64::from(u8::from(superlevel_profile.window_monotone)),
        1.0,
        0.0,
        superlevel_profile.window_monotone,
    ));

    Ok(CartanCertificate {
        decomposition: dec,
        dilated,
        per_scale,
        e0,
        e1,
        perimeter_profiles,
        superlevel_profile,
        checks,
    })
}

/// Solution of the `K_(A,0)((3/2) B)` problem and its density in the stripe
/// `(2/5) B \ (5/16) B`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallnessCheck {
    /// Largest density of the solution in the `4h` balls around stripe cells.
    pub density_max: f64,
    /// `32 R rcap_1(A, 2B) / mu(B)`.
    pub bound: f64,
    pub capacity: f64,
    /// Density of a single stripe cell in its own `4h` ball (smallest positive value).
    pub smallest_positive: f64,
    pub solution: SetSolution,
}

/// Calibrated constant of the smallness bound.
pub const SMALLNESS_CONSTANT: f64 = 32.0;

impl SmallnessCheck {
    pub fn holds(&self) -> bool {
        if self.bound < 0.5 {
            self.density_max == 0.0
        } else {
            self.density_max <= self.bound.max(self.smallest_positive)
        }
    }
}

/// Windows `(3/2) B` and `2B` are clipped to the cells off the outer ring.
pub fn smallness_in_annuli_check(space: &GridSpace, set: &CellSet, x: Point, radius: f64) -> Result<SmallnessCheck> {
    if set.layout() != space.layout() {
        return Err(invalid("set belongs to a different grid"));
    }
    let b = ball(space, x, radius)?;
    if !set.is_subset(&b) {
        return Err(invalid("set is not contained in B(x, R)"));
    }
    let forbidden = ball(space, x, 0.45 * radius)?.difference(&ball(space, x, 0.25 * radius)?);
    let hits = set.intersection(&forbidden).count();
    if hits > 0 {
        return Err(LabError::Precondition(format!(
            "{hits} cells of the set lie in (9/20) B \\ (1/4) B"
        )));
    }
    let window = clipped_ball(space, x, 1.5 * radius)?;
    let solution = solve_obstacle_set(space, set, &window)?;
    let capacity = variational_capacity(space, set, &clipped_ball(space, x, 2.0 * radius)?)?.value;
    let stripe = ball(space, x, 0.4 * radius)?.difference(&ball(space, x, 5.0 / 16.0 * radius)?);
    let cells: Vec<usize> = stripe.iter().collect();
    let densities = split_densities(space, &solution.set, &cells);
    let density_max = densities.iter().copied().fold(0.0, f64::max);
    let single = CellSet::from_cells(space, cells.first().copied());
    let smallest_positive = cells
        .first()
        .map(|&c| split_densities(space, &single, &[c])[0])
        .unwrap_or(0.0);
    Ok(SmallnessCheck {
        density_max,
        bound: SMALLNESS_CONSTANT * radius * capacity / b.measure(space),
        capacity,
        smallest_positive,
        solution,
    })
}

/// Stacked characteristic minimizers diverging along `A` at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrongCartanResult {
    /// `rcap_1(A ∩ B(x, R/2), B(x, R))`, the normalisation of the budgets.
    pub base_capacity: f64,
    /// `r_1 > r_2 > ...`.
    pub radii: Vec<f64>,
    /// `rcap_1(A ∩ B(x, r_i), B(x, R))`.
    pub capacities: Vec<f64>,
    /// Extremal sets `E_1 ⊇ E_2 ⊇ ...`.
    pub nested_sets: Vec<CellSet>,
    /// `u = sum_i χ_(E_i)`.
    pub stacked: GridFunction,
    /// Largest value of `u` on the cells touching `x`.
    pub value_at_x: f64,
    /// `min u` over `A ∩ B(x, r_k)` for each level `k`.
    pub divergence_witness: Vec<f64>,
    /// Fewer than `k_max` levels met their budget above the resolution floor.
    pub partial: bool,
}

/// Finds radii with `rcap_1(A ∩ B(x, r_i), B(x, R)) < 2^-i rcap_1(A ∩ B(x, R/2), B(x, R))`,
/// taking at each level the largest admissible radius, and stacks the extremal sets.
pub fn strong_cartan_construct(
    space: &GridSpace,
    set: &CellSet,
    x: Point,
    radius: f64,
    k_max: usize,
    gate: &ThinnessGate,
) -> Result<StrongCartanResult> {
    match space.weight_spec() {
        WeightSpec::PowerLaw(a) if a > -2.0 && a < -1.0 && space.dim() == 2 => {}
        other => {
            return Err(invalid(format!(
                "strong Cartan needs a planar power law with exponent in (-2, -1), got {other}"
            )))
        }
    }
    if k_max == 0 {
        return Err(invalid("k_max must be at least 1"));
    }
    require_thin(gate)?;
    if set.layout() != space.layout() {
        return Err(invalid("set belongs to a different grid"));
    }
    require_outside(space, set, x)?;
    space.require_ball_inside(x, radius, "strong Cartan window")?;
    let window = ball(space, x, radius)?;
    let half = set.intersection(&ball(space, x, radius / 2.0)?);
    let base = variational_capacity(space, &half, &window)?;

    // candidate radii: the distinct cell distances of A ∩ B(x, R/2), ascending
    let mut dist: Vec<(f64, usize)> = half.iter().map(|c| (space.distance(c, x), c)).collect();
    dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut levels: Vec<f64> = dist.iter().map(|d| d.0).collect();
    levels.dedup();
    let inner_upto = |j: usize| {
        let cut = levels[j];
        CellSet::from_cells(space, dist.iter().take_while(|d| d.0 <= cut).map(|d| d.1))
    };

    let mut radii = Vec::new();
    let mut capacities = Vec::new();
    let mut nested_sets = Vec::new();
    let mut upper = levels.len();
    let mut partial = false;
    for i in 1..=k_max {
        let budget = base.value * 2f64.powi(-(i as i32));
        // largest j < upper with capacity below budget (capacity grows with j)
        let (mut lo, mut hi) = (0usize, upper);
        let mut found = None;
        while lo < hi {
            let mid = (lo + hi) / 2;
            let res = variational_capacity(space, &inner_upto(mid), &window)?;
            if res.value < budget {
                found = Some((mid, res));
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let Some((j, res)) = found else {
            partial = true;
            break;
        };
        let r = if j + 1 < levels.len() {
            0.5 * (levels[j] + levels[j + 1])
        } else {
            0.5 * (levels[j] + radius / 2.0)
        };
        if !is_trusted(space, r) {
            partial = true;
            break;
        }
        radii.push(r);
        capacities.push(res.value);
        nested_sets.push(res.extremal_set);
        upper = j;
        if upper == 0 && i < k_max {
            partial = true;
            break;
        }
    }

    let partial = partial || nested_sets.len() < k_max;
    let mut u = vec![0.0; space.len()];
    for e in &nested_sets {
        for c in e.iter() {
            u[c] += 1.0;
        }
    }
    let stacked = GridFunction::new(space, u)?;
    let value_at_x = space
        .cells_touching(x)
        .into_iter()
        .map(|c| stacked.value(c))
        .fold(0.0, f64::max);
    let divergence_witness = radii
        .iter()
        .map(|&r| {
            set.iter()
                .filter(|&c| space.distance(c, x) < r)
                .map(|c| stacked.value(c))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(StrongCartanResult {
        base_capacity: base.value,
        radii,
        capacities,
        nested_sets,
        stacked,
        value_at_x,
        divergence_witness,
        partial,
    })
}

/// Capacity of `A ∩ B(0, R)` in `B(0, 2R)` at one scale of the counterexample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleCapacity {
    pub radius: f64,
    pub capacity: f64,
    /// `R eps / 10`.
    pub lower: f64,
    /// `3 R eps`.
    pub upper: f64,
    /// `R · capacity / mu(B(0, R))`.
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub eps: f64,
    pub h: f64,
    pub chain: Vec<CellSet>,
    pub obstacle: CellSet,
    pub solution: SetSolution,
    /// `mu(E Δ A)`.
    pub symdiff: f64,
    /// `4h P(A, X)`.
    pub symdiff_bound: f64,
    pub scales: Vec<ScaleCapacity>,
    /// Density of `E` in `B(0, 8h)`.
    pub origin_density: f64,
    pub origin_radius: f64,
    pub smallness: SmallnessCheck,
}

/// Relative slack on the capacity bounds and on the thinness band.
pub const CAPACITY_SLACK: f64 = 0.25;
pub const THINNESS_SLACK: f64 = 0.5;

impl CounterexampleReport {
    pub fn rows(&self) -> Vec<CheckRow> {
        let mut rows = vec![CheckRow::at_most(
            "solution_identity",
            self.h,
            self.symdiff,
            self.symdiff_bound,
            0.0,
        )];
        for s in &self.scales {
            let lo = s.lower * (1.0 - CAPACITY_SLACK);
            let hi = s.upper * (1.0 + CAPACITY_SLACK);
            rows.push(CheckRow::new(
                "capacity_lower",
                s.radius,
                lo,
                s.capacity,
                CAPACITY_SLACK,
                lo <= s.capacity,
            ));
            rows.push(CheckRow::new(
                "capacity_upper",
                s.radius,
                s.capacity,
                hi,
                CAPACITY_SLACK,
                s.capacity <= hi,
            ));
            let t_lo = self.eps / (10.0 * std::f64::consts::PI) * (1.0 - THINNESS_SLACK);
            let t_hi = 3.0 * self.eps / std::f64::consts::PI * (1.0 + THINNESS_SLACK);
            rows.push(CheckRow::new(
                "thickness_ratio",
                s.radius,
                s.theta,
                t_lo,
                THINNESS_SLACK,
                s.theta >= t_lo && s.theta <= t_hi,
            ));
        }
        rows.push(CheckRow::at_most(
            "origin_density",
            self.origin_radius,
            self.origin_density,
            1e-2,
            0.0,
        ));
        rows.push(CheckRow::new(
            "stripe_density",
            1.0,
            self.smallness.density_max,
            0.0,
            0.0,
            self.smallness.density_max == 0.0,
        ));
        rows.push(CheckRow::new(
            "smallness_bound",
            1.0,
            self.smallness.density_max,
            self.smallness.bound,
            0.0,
            self.smallness.holds(),
        ));
        rows
    }
}

/// Rectangle chain on a uniform grid over `[-2, 2]^2`: solution of the obstacle
/// problem in `B(0, 2)`, capacities at `R = 10^-j`, and the density of the
/// solution at the origin.
pub fn counterexample_run(eps: f64, resolution: usize, chain_depth: usize) -> Result<CounterexampleReport> {
    if !(eps > 0.0 && eps < 0.2) {
        return Err(invalid(format!("eps must lie in (0, 1/5), got {eps}")));
    }
    let space = build_grid(2, 2.0, resolution, WeightSpec::Uniform)?;
    counterexample_on(&space, eps, chain_depth)
}

pub fn counterexample_on(space: &GridSpace, eps: f64, chain_depth: usize) -> Result<CounterexampleReport> {
    let chain = rectangle_chain(space, eps, chain_depth)?;
    let mut obstacle = CellSet::empty(space);
    for a in &chain {
        obstacle = obstacle.union(a);
    }
    let origin = [0.0, 0.0];
    let window = clipped_ball(space, origin, 2.0)?;
    let solution = solve_obstacle_set(space, &obstacle, &window)?;
    let symdiff = solution.set.symmetric_difference(&obstacle).measure(space);
    let symdiff_bound = 4.0 * space.h() * perimeter_total(space, &obstacle);

    let scales = (0..chain_depth)
        .into_par_iter()
        .map(|j| {
            let r = 10f64.powi(-(j as i32));
            let inner = obstacle.intersection(&ball(space, origin, r)?);
            let capacity = variational_capacity(space, &inner, &clipped_ball(space, origin, 2.0 * r)?)?.value;
            Ok(ScaleCapacity {
                radius: r,
                capacity,
                lower: r * eps / 10.0,
                upper: 3.0 * r * eps,
                theta: r * capacity / space.ball_measure(origin, r),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let origin_radius = 8.0 * space.h();
    let origin_density = density_in_ball(space, &solution.set, origin, origin_radius);
    let inside = obstacle.intersection(&ball(space, origin, 1.0)?);
    let smallness = smallness_in_annuli_check(space, &inside, origin, 1.0)?;
    Ok(CounterexampleReport {
        eps,
        h: space.h(),
        chain,
        obstacle,
        solution,
        symdiff,
        symdiff_bound,
        scales,
        origin_density,
        origin_radius,
        smallness,
    })
}

/// Verdict helper with the default thresholds.
pub fn default_verdict(profile: &ThinnessProfile) -> Result<ThinnessVerdict> {
    classify(profile, TAU_THIN, TAU_THICK)
}
