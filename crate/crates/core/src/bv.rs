//! Graph BV calculus: total variation, perimeter, coarea, approximate limits.

use rayon::prelude::*;

use crate::error::{invalid, LabError, Result};
use crate::grid::{ball, CellSet, GridSpace, Layout, Point};

/// One real value per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    layout: Layout,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(space: &GridSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(invalid(format!(
                "function has {} values, grid has {} cells",
                values.len(),
                space.len()
            )));
        }
        if let Some(c) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite value at cell {c}")));
        }
        Ok(GridFunction {
            layout: space.layout(),
            values,
        })
    }

    pub fn constant(space: &GridSpace, value: f64) -> Self {
        GridFunction {
            layout: space.layout(),
            values: vec![value; space.len()],
        }
    }

    pub fn indicator(set: &CellSet) -> Self {
        GridFunction {
            layout: set.layout(),
            values: set.as_slice().iter().map(|&b| f64::from(u8::from(b))).collect(),
        }
    }

    pub fn from_fn(space: &GridSpace, f: impl FnMut(usize) -> f64) -> Result<Self> {
        Self::new(space, (0..space.len()).map(f).collect())
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, c: usize) -> f64 {
        self.values[c]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Distinct values in increasing order.
    pub fn levels(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Strict superlevel set `{u > t}`.
    pub fn superlevel(&self, t: f64) -> CellSet {
        let mut s = CellSet::empty_on(self.layout);
        for (c, &v) in self.values.iter().enumerate() {
            if v > t {
                s.insert(c);
            }
        }
        s
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            layout: self.layout,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `(u - k)_+`.
    pub fn positive_part_above(&self, k: f64) -> GridFunction {
        self.map(|v| (v - k).max(0.0))
    }

    pub fn add(&self, other: &GridFunction) -> GridFunction {
        assert_eq!(self.layout, other.layout, "functions from different grids");
        GridFunction {
            layout: self.layout,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

fn check_layout(space: &GridSpace, layout: Layout, what: &str) -> Result<()> {
    if space.layout() == layout {
        Ok(())
    } else {
        Err(invalid(format!("{what} belongs to a different grid")))
    }
}

/// `sum pi_cc' |u_c - u_c'|` over edges touching `region`; edges with exactly one
/// endpoint in the region count at half weight.
pub fn total_variation(space: &GridSpace, u: &GridFunction, region: &CellSet) -> Result<f64> {
    check_layout(space, u.layout(), "function")?;
    check_layout(space, region.layout(), "region")?;
    Ok(weighted_variation(space, u.values(), region.as_slice()))
}

fn weighted_variation(space: &GridSpace, u: &[f64], region: &[bool]) -> f64 {
    let mut total = 0.0;
    space.for_each_edge(|a, b, w| {
        let share = match (region[a], region[b]) {
            (true, true) => 1.0,
            (false, false) => return,
            _ => 0.5,
        };
        total += share * w * (u[a] - u[b]).abs();
    });
    total
}

/// `P(E, region)`, the total variation of the indicator of `E`.
pub fn perimeter(space: &GridSpace, set: &CellSet, region: &CellSet) -> Result<f64> {
    check_layout(space, set.layout(), "set")?;
    check_layout(space, region.layout(), "region")?;
    let e = set.as_slice();
    let r = region.as_slice();
    let mut total = 0.0;
    space.for_each_edge(|a, b, w| {
        if e[a] == e[b] {
            return;
        }
        total += match (r[a], r[b]) {
            (true, true) => w,
            (false, false) => 0.0,
            _ => 0.5 * w,
        };
    });
    Ok(total)
}

/// `P(E, X)`.
pub fn perimeter_total(space: &GridSpace, set: &CellSet) -> f64 {
    assert_eq!(space.layout(), set.layout(), "set belongs to a different grid");
    let e = set.as_slice();
    let mut total = 0.0;
    space.for_each_edge(|a, b, w| {
        if e[a] != e[b] {
            total += w;
        }
    });
    total
}

/// Total variation over the local region `cells` (given with a membership test),
/// touching only edges incident to the region.
pub(crate) fn local_variation(
    space: &GridSpace,
    u: impl Fn(usize) -> f64,
    cells: &[usize],
    in_region: impl Fn(usize) -> bool,
) -> f64 {
    let mut total = 0.0;
    for &c in cells {
        for v in space.neighbors(c) {
            let share = if in_region(v) {
                if v < c {
                    continue;
                }
                1.0
            } else {
                0.5
            };
            total += share * space.edge_weight(c, v) * (u(c) - u(v)).abs();
        }
    }
    total
}

/// Both sides of the discrete coarea formula.
///
/// `lhs` is the total variation over `region`; `rhs` is
/// `sum_k (t_{k+1} - t_k) P({u > t_k}, region)` over the distinct values of `u`.
pub fn coarea_check(space: &GridSpace, u: &GridFunction, region: &CellSet) -> Result<(f64, f64)> {
    let lhs = total_variation(space, u, region)?;
    let levels = u.levels();
    let mut rhs = 0.0;
    for pair in levels.windows(2) {
        let level_set = u.superlevel(pair[0]);
        rhs += (pair[1] - pair[0]) * perimeter(space, &level_set, region)?;
    }
    Ok((lhs, rhs))
}

/// Approximate limits evaluated at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleLimits {
    pub radius: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxLimits {
    /// `u^∧` surrogate at the smallest radius.
    pub lower: f64,
    /// `u^∨` surrogate at the smallest radius.
    pub upper: f64,
    pub radii_used: Vec<f64>,
    /// Limits at every radius of the sweep, largest radius first.
    pub per_radius: Vec<ScaleLimits>,
}

impl ApproxLimits {
    pub fn is_jump(&self) -> bool {
        self.lower < self.upper
    }
}

pub(crate) fn validate_density_query(space: &GridSpace, r_min: f64, density_tol: f64) -> Result<()> {
    if r_min < 4.0 * space.h() * (1.0 - 1e-12) {
        return Err(LabError::ResolutionInsufficient(format!(
            "radius {r_min} is below 4h = {}",
            4.0 * space.h()
        )));
    }
    if !(density_tol > 0.0 && density_tol < 0.5) {
        return Err(invalid(format!(
            "density tolerance must lie in (0, 1/2), got {density_tol}"
        )));
    }
    Ok(())
}

/// Lower and upper density limits of the weighted sample `(value, measure)`.
fn limits_of_sample(sample: &mut [(f64, f64)], tol: f64) -> (f64, f64) {
    sample.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = sample.iter().map(|s| s.1).sum();
    // lower: largest value t with mu({u < t}) <= tol * total
    let mut lower = sample[0].0;
    let mut below = 0.0;
    let mut i = 0;
    while i < sample.len() {
        let t = sample[i].0;
        if below > tol * total {
            break;
        }
        lower = t;
        while i < sample.len() && sample[i].0 == t {
            below += sample[i].1;
            i += 1;
        }
    }
    // upper: smallest value t with mu({u > t}) <= tol * total
    let mut upper = sample[sample.len() - 1].0;
    let mut above = 0.0;
    let mut j = sample.len();
    while j > 0 {
        let t = sample[j - 1].0;
        if above > tol * total {
            break;
        }
        upper = t;
        while j > 0 && sample[j - 1].0 == t {
            above += sample[j - 1].1;
            j -= 1;
        }
    }
    (lower, upper)
}

pub(crate) fn limits_at(space: &GridSpace, u: &GridFunction, x: Point, r: f64, tol: f64) -> Result<(f64, f64)> {
    let mut sample = Vec::new();
    space.for_each_near(x, r, |c, d| {
        if d < r {
            sample.push((u.value(c), space.measure(c)));
        }
    });
    if sample.is_empty() {
        return Err(invalid(format!("ball of radius {r} around {x:?} holds no cells")));
    }
    Ok(limits_of_sample(&mut sample, tol))
}

/// Density-based lower and upper limits of `u` at `x`.
pub fn approx_limits(
    space: &GridSpace,
    u: &GridFunction,
    x: Point,
    r_min: f64,
    r_max: f64,
    density_tol: f64,
) -> Result<ApproxLimits> {
    check_layout(space, u.layout(), "function")?;
    validate_density_query(space, r_min, density_tol)?;
    if !(r_max > r_min) {
        return Err(invalid(format!("r_max {r_max} must exceed r_min {r_min}")));
    }
    let mut radii = Vec::new();
    let mut r = r_max;
    while r > r_min * (1.0 + 1e-12) {
        radii.push(r);
        r /= 2.0;
    }
    radii.push(r_min);
    let mut per_radius = Vec::with_capacity(radii.len());
    for &r in &radii {
        let (lower, upper) = limits_at(space, u, x, r, density_tol)?;
        per_radius.push(ScaleLimits {
            radius: r,
            lower,
            upper,
        });
    }
    let last = per_radius[per_radius.len() - 1];
    Ok(ApproxLimits {
        lower: last.lower,
        upper: last.upper,
        radii_used: radii,
        per_radius,
    })
}

/// Cell offsets `(dx, dy)` whose centers lie at distance `< r` from a cell center.
pub(crate) fn ball_stencil(space: &GridSpace, r: f64) -> Vec<(isize, isize)> {
    let h = space.h();
    let k = (r / h).ceil() as isize;
    let mut out = Vec::new();
    let ys = if space.dim() == 1 { 0..=0 } else { -k..=k };
    for dy in ys {
        for dx in -k..=k {
            let d = h * ((dx * dx + dy * dy) as f64).sqrt();
            if d < r {
                out.push((dx, dy));
            }
        }
    }
    out
}

/// Densities of `set` in the stencil ball around cell `c`: `(mu(B ∩ E), mu(B))`.
pub(crate) fn stencil_masses(
    space: &GridSpace,
    set: &[bool],
    c: usize,
    stencil: &[(isize, isize)],
) -> (f64, f64) {
    let n = space.resolution() as isize;
    let [ix, iy] = space.coords(c);
    let (ix, iy) = (ix as isize, iy as isize);
    let mut inside = 0.0;
    let mut total = 0.0;
    for &(dx, dy) in stencil {
        let (x, y) = (ix + dx, iy + dy);
        if x < 0 || x >= n || y < 0 || (space.dim() == 2 && y >= n) {
            continue;
        }
        let v = space.index(x as usize, y as usize);
        let m = space.measure(v);
        total += m;
        if set[v] {
            inside += m;
        }
    }
    (inside, total)
}

/// Measure-theoretic interior, boundary and exterior of `E`, queried at the cells
/// of `x_set`.
#[derive(Debug, Clone, PartialEq)]
pub struct MtSplit {
    pub interior: CellSet,
    pub boundary: CellSet,
    pub exterior: CellSet,
}

pub fn mt_split(
    space: &GridSpace,
    set: &CellSet,
    x_set: &CellSet,
    r_min: f64,
    density_tol: f64,
) -> Result<MtSplit> {
    check_layout(space, set.layout(), "set")?;
    check_layout(space, x_set.layout(), "query set")?;
    validate_density_query(space, r_min, density_tol)?;
    let stencil = ball_stencil(space, r_min);
    let e = set.as_slice();
    let queried: Vec<usize> = x_set.iter().collect();
    let kinds: Vec<u8> = queried
        .par_iter()
        .map(|&c| {
            let (inside, total) = stencil_masses(space, e, c, &stencil);
            if (total - inside) <= density_tol * total {
                0
            } else if inside <= density_tol * total {
                2
            } else {
                1
            }
        })
        .collect();
    let mut split = MtSplit {
        interior: CellSet::empty(space),
        boundary: CellSet::empty(space),
        exterior: CellSet::empty(space),
    };
    for (&c, &k) in queried.iter().zip(&kinds) {
        match k {
            0 => split.interior.insert(c),
            1 => split.boundary.insert(c),
            _ => split.exterior.insert(c),
        }
    }
    Ok(split)
}

/// `min{mu(B ∩ E), mu(B \ E)} / (r P(E, B))` with `B = B(x, r)`.
///
/// Returns `f64::INFINITY` when the perimeter vanishes but the numerator does not.
pub fn isoperimetric_check(space: &GridSpace, set: &CellSet, x: Point, r: f64) -> Result<f64> {
    check_layout(space, set.layout(), "set")?;
    if r < 8.0 * space.h() * (1.0 - 1e-12) {
        return Err(LabError::ResolutionInsufficient(format!(
            "isoperimetric radius {r} is below 8h = {}",
            8.0 * space.h()
        )));
    }
    space.require_ball_inside(x, 2.0 * r, "isoperimetric check")?;
    let b = ball(space, x, r)?;
    let inside = b.intersection(set).measure(space);
    let outside = b.difference(set).measure(space);
    let numerator = inside.min(outside);
    let cells: Vec<usize> = b.iter().collect();
    let per = local_variation(
        space,
        |c| f64::from(u8::from(set.contains(c))),
        &cells,
        |c| b.contains(c),
    );
    if numerator == 0.0 {
        Ok(0.0)
    } else if per == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(numerator / (r * per))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, WeightSpec};

    fn unit_grid(n: usize) -> GridSpace {
        build_grid(2, n as f64 / 2.0, n, WeightSpec::Uniform).unwrap()
    }

    #[test]
    fn single_jump_in_1d() {
        let g = build_grid(1, 1.0, 4, WeightSpec::Uniform).unwrap();
        let u = GridFunction::new(&g, vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let tv = total_variation(&g, &u, &CellSet::full(&g)).unwrap();
        assert_eq!(tv, 1.0);
    }

    #[test]
    fn single_cell_has_perimeter_four() {
        let g = unit_grid(6);
        let e = CellSet::from_cells(&g, [g.index(2, 3)]);
        assert_eq!(perimeter(&g, &e, &CellSet::full(&g)).unwrap(), 4.0);
        assert_eq!(perimeter_total(&g, &e), 4.0);
    }

    #[test]
    fn half_weight_on_region_boundary() {
        let g = build_grid(1, 2.0, 4, WeightSpec::Uniform).unwrap();
        let u = GridFunction::new(&g, vec![0.0, 2.0, 2.0, 2.0]).unwrap();
        let region = CellSet::from_cells(&g, [1, 2, 3]);
        assert_eq!(total_variation(&g, &u, &region).unwrap(), 1.0);
    }

    #[test]
    fn rejects_foreign_layout() {
        let g = unit_grid(4);
        let other = unit_grid(6);
        let e = CellSet::full(&other);
        assert!(perimeter(&g, &e, &CellSet::full(&g)).is_err());
        assert!(GridFunction::new(&g, vec![0.0; 3]).is_err());
        assert!(GridFunction::new(&g, vec![f64::NAN; 16]).is_err());
    }

    #[test]
    fn sample_limits() {
        let mut s = vec![(0.0, 1.0), (1.0, 1.0)];
        assert_eq!(limits_of_sample(&mut s, 0.01), (0.0, 1.0));
        let mut s = vec![(0.0, 1.0), (1.0, 1000.0)];
        assert_eq!(limits_of_sample(&mut s, 0.01), (1.0, 1.0));
        let mut s = vec![(2.0, 3.0)];
        assert_eq!(limits_of_sample(&mut s, 0.01), (2.0, 2.0));
    }

    #[test]
    fn stencil_matches_ball() {
        let g = build_grid(2, 1.0, 32, WeightSpec::Uniform).unwrap();
        let c = g.index(16, 16);
        let r = 4.0 * g.h();
        let stencil = ball_stencil(&g, r);
        let b = ball(&g, g.center(c), r).unwrap();
        assert_eq!(stencil.len(), b.count());
    }
}
