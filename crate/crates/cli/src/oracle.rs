//! Brute-force cross-checks of the solvers on blocks small enough to enumerate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use bvlab_core::bv::perimeter_total;
use bvlab_core::variational::{solve_obstacle_set, variational_capacity};
use bvlab_core::{
    build_grid, coarea_check, enumerate_oracle, min_cut, CellSet, CheckRow, CutProblem, GridFunction, GridSpace,
    WeightSpec,
};

use crate::CliError;

/// Largest block accepted by [`grid_check`].
pub const MAX_BLOCK_CELLS: usize = 16;

/// Parses `RxC`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("--grid expects RxC with R*C <= {MAX_BLOCK_CELLS}, got {s:?}"));
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let (r, c): (usize, usize) = (r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?);
    if r == 0 || c == 0 || r * c > MAX_BLOCK_CELLS {
        return Err(bad());
    }
    Ok((r, c))
}

fn same_value(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// `rows × cols` block at cell offset (1, 1) of a unit-spacing grid, so the
/// block never touches the outer ring.
fn block_grid(rows: usize, cols: usize, weight: WeightSpec) -> Result<(GridSpace, Vec<usize>), CliError> {
    let n = (rows.max(cols) + 2).next_multiple_of(2).max(4);
    let g = build_grid(2, n as f64 / 2.0, n, weight)?;
    let block = (0..rows).flat_map(|y| (0..cols).map(move |x| (x, y))).map(|(x, y)| g.index(x + 1, y + 1)).collect();
    Ok((g, block))
}

fn subset(g: &GridSpace, block: &[usize], mask: u32) -> CellSet {
    CellSet::from_cells(g, block.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &c)| c))
}

/// Number of 4-neighbour pairs split by `set`, counted from coordinates.
fn edge_count(n: usize, set: &CellSet) -> f64 {
    let inside = |x: usize, y: usize| set.contains(y * n + x);
    let mut count = 0;
    for y in 0..n {
        for x in 0..n {
            if x + 1 < n && inside(x, y) != inside(x + 1, y) {
                count += 1;
            }
            if y + 1 < n && inside(x, y) != inside(x, y + 1) {
                count += 1;
            }
        }
    }
    count as f64
}

/// Masks of the block: all of them when there are at most `limit`, else
/// `limit` seeded draws.
fn masks(cells: usize, limit: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let all = 1u32 << cells;
    if all as usize <= limit {
        (0..all).collect()
    } else {
        (0..limit).map(|_| rng.gen_range(0..all)).collect()
    }
}

/// Cross-checks on a `rows × cols` block: perimeter against an edge count,
/// min-cut against enumeration for source subsets under uniform and power-law
/// weights, coarea on the block and submodularity of the perimeter.
pub fn grid_check(rows: usize, cols: usize, seed: u64) -> Result<Vec<CheckRow>, CliError> {
    let cells = rows * cols;
    let scale = cells as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let (g, block) = block_grid(rows, cols, WeightSpec::Uniform)?;
    let n = g.resolution();
    let all = masks(cells, 1 << 16, &mut rng);
    let mismatched = all
        .iter()
        .filter(|&&m| {
            let e = subset(&g, &block, m);
            perimeter_total(&g, &e) != edge_count(n, &e)
        })
        .count();
    out.push(CheckRow::at_most("oracle_perimeter", scale, mismatched as f64, 0.0, 0.0));

    let cut_masks: Vec<u32> = masks(cells, if cells <= 9 { 512 } else { 64 }, &mut rng)
        .into_iter()
        .filter(|&m| m != 0)
        .collect();
    for (name, weight) in [("oracle_min_cut_uniform", WeightSpec::Uniform), ("oracle_min_cut_power_law", WeightSpec::PowerLaw(-1.5))] {
        let (g, block) = block_grid(rows, cols, weight)?;
        let window = CellSet::from_cells(&g, block.iter().copied());
        let failures: usize = cut_masks
            .par_iter()
            .map(|&m| -> Result<usize, CliError> {
                let a = subset(&g, &block, m);
                let p = CutProblem::new(&g, a.clone(), window.complement(), window.difference(&a))?;
                let (fast, slow) = (min_cut(&p)?, enumerate_oracle(&p)?);
                Ok(usize::from(!(same_value(fast.value, slow.value, 1e-12) && fast.set == slow.set)))
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        out.push(CheckRow::at_most(name, scale, failures as f64, 0.0, 0.0));
    }

    let region = CellSet::from_cells(&g, block.iter().copied());
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let u = GridFunction::from_fn(&g, |c| if region.contains(c) { f64::from(rng.gen_range(0..4u8)) } else { 0.0 })?;
        let (lhs, rhs) = coarea_check(&g, &u, &region)?;
        if lhs != 0.0 || rhs != 0.0 {
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
        }
    }
    out.push(CheckRow::at_most("oracle_coarea_block", scale, worst, 1e-12, 0.0));

    let pairs: Vec<(u32, u32)> = if cells <= 9 {
        let all = 1u32 << cells;
        (0..all).flat_map(|a| (0..all).map(move |b| (a, b))).collect()
    } else {
        (0..20_000).map(|_| (rng.gen_range(0..1u32 << cells), rng.gen_range(0..1u32 << cells))).collect()
    };
    let perimeter = |m: u32| perimeter_total(&g, &subset(&g, &block, m));
    let violations = pairs
        .par_iter()
        .filter(|&&(a, b)| perimeter(a | b) + perimeter(a & b) > perimeter(a) + perimeter(b) + 1e-12)
        .count();
    out.push(CheckRow::at_most("oracle_submodularity", scale, violations as f64, 0.0, 0.0));
    Ok(out)
}

/// One random instance with at most 16 free cells: grid, obstacle, window.
fn random_instance(rng: &mut ChaCha8Rng, one_dim: bool) -> Result<(GridSpace, CellSet, CellSet), CliError> {
    let weight = if rng.gen_bool(0.5) {
        WeightSpec::Uniform
    } else {
        WeightSpec::PowerLaw(rng.gen_range(if one_dim { -0.9..0.9 } else { -1.9..0.9 }))
    };
    let extent = rng.gen_range(0.5..2.0);
    let (g, candidates) = if one_dim {
        let g = build_grid(1, extent, 20, weight)?;
        let len = rng.gen_range(2..=18);
        let start = rng.gen_range(1..=19 - len);
        let cells: Vec<usize> = (start..start + len).collect();
        (g, cells)
    } else {
        let n = if rng.gen_bool(0.5) { 6 } else { 8 };
        let g = build_grid(2, extent, n, weight)?;
        let w = rng.gen_range(1..=n - 2);
        let hgt = rng.gen_range(1..=(18 / w).clamp(1, n - 2));
        let (x0, y0) = (rng.gen_range(1..=n - 1 - w), rng.gen_range(1..=n - 1 - hgt));
        let cells = (y0..y0 + hgt).flat_map(|y| (x0..x0 + w).map(move |x| (x, y))).map(|(x, y)| g.index(x, y)).collect();
        (g, cells)
    };
    let mut window = CellSet::empty(&g);
    let mut obstacle = CellSet::empty(&g);
    for &c in &candidates {
        if rng.gen_bool(0.85) {
            window.insert(c);
            if rng.gen_bool(0.25) {
                obstacle.insert(c);
            }
        }
    }
    let first = candidates[rng.gen_range(0..candidates.len())];
    window.insert(first);
    obstacle.insert(first);
    // move surplus free cells into the obstacle
    let mut free: Vec<usize> = window.difference(&obstacle).iter().collect();
    while free.len() > 16 {
        let c = free.swap_remove(rng.gen_range(0..free.len()));
        obstacle.insert(c);
    }
    Ok((g, obstacle, window))
}

/// `cases` seeded instances with at most 16 free cells. For each, min-cut,
/// the set obstacle solver and the variational capacity are compared with
/// enumeration: value to 1e-12 relative and identical minimal set.
pub fn random_equivalence(cases: usize, seed: u64) -> Result<Vec<CheckRow>, CliError> {
    let per_case: Vec<Vec<CheckRow>> = (0..cases)
        .into_par_iter()
        .map(|i| -> Result<Vec<CheckRow>, CliError> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(i as u64));
            let (g, a, window) = random_instance(&mut rng, i % 10 == 9)?;
            let p = CutProblem::new(&g, a.clone(), window.complement(), window.difference(&a))?;
            let oracle = enumerate_oracle(&p)?;
            let cut = min_cut(&p)?;
            let sol = solve_obstacle_set(&g, &a, &window)?;
            let cap = variational_capacity(&g, &a, &window)?;
            let scale = i as f64;
            let row = |name: &str, value: f64, set: &CellSet| {
                let ok = same_value(value, oracle.value, 1e-12) && *set == oracle.set;
                CheckRow::new(name, scale, value, oracle.value, 1e-12, ok)
            };
            Ok(vec![
                row("equivalence_min_cut", cut.value, &cut.set),
                row("equivalence_obstacle_set", sol.perimeter_value, &sol.set),
                row("equivalence_capacity", cap.value, &cap.extremal_set),
            ])
        })
        .collect::<Result<_, _>>()?;
    Ok(per_case.into_iter().flatten().collect())
}
