//! Weighted regular grids standing in for a doubling metric measure space.
//!
//! A [`GridSpace`] covers `[-L, L]^dim` (dim 1 or 2) with `resolution` cells per
//! axis. Every cell carries a measure `mu_c` (the integral of the density over
//! the cell) and adjacent cells share a perimeter weight
//! `h^(dim-1) * (w_c + w_c') / 2`, where `w_c = mu_c / h^dim` is the cell-average
//! density. The outer boundary of the square never contributes perimeter.
//!
//! Cells are indexed row-major: `index = iy * resolution + ix`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, LabError, Result};

/// A point of the ambient square. In one dimension the second coordinate is ignored.
pub type Point = [f64; 2];

/// Density of the reference measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    Uniform,
    /// `w(x) = |x|^a`.
    PowerLaw(f64),
}

impl WeightSpec {
    fn density(&self, p: Point, dim: usize) -> f64 {
        match *self {
            WeightSpec::Uniform => 1.0,
            WeightSpec::PowerLaw(a) => norm(p, dim).powf(a),
        }
    }
}

impl std::fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightSpec::Uniform => write!(f, "uniform"),
            WeightSpec::PowerLaw(a) => write!(f, "power_law({a})"),
        }
    }
}

impl std::str::FromStr for WeightSpec {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "uniform" {
            return Ok(WeightSpec::Uniform);
        }
        if let Some(inner) = s
            .strip_prefix("power_law(")
            .and_then(|rest| rest.strip_suffix(')'))
        {
            let a: f64 = inner
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad power_law exponent {inner:?}")))?;
            return Ok(WeightSpec::PowerLaw(a));
        }
        Err(invalid(format!(
            "unknown weight spec {s:?} (expected uniform or power_law(a))"
        )))
    }
}

/// Geometry key shared by all grids with the same dimension and resolution.
///
/// Cell sets and grid functions are tied to a layout rather than to a particular
/// weighting, so a set built on one space can be evaluated on a rescaled copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Layout {
    pub dim: usize,
    pub resolution: usize,
}

impl Layout {
    pub fn len(&self) -> usize {
        self.resolution.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

const SUBDIVISION_DEPTH: usize = 12;
const SUBDIVISION_FACTOR: usize = 4;

#[derive(Debug, Clone)]
pub struct GridSpace {
    layout: Layout,
    extent: f64,
    spacing: f64,
    weight_spec: WeightSpec,
    scale: f64,
    /// Densities before the global multiplier.
    weights: Vec<f64>,
    measures: Vec<f64>,
}

/// Builds a grid over `[-extent, extent]^dim`.
pub fn build_grid(
    dim: usize,
    extent: f64,
    resolution: usize,
    weight_spec: WeightSpec,
) -> Result<GridSpace> {
    GridSpace::new(dim, extent, resolution, weight_spec)
}

impl GridSpace {
    pub fn new(dim: usize, extent: f64, resolution: usize, weight_spec: WeightSpec) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(invalid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(invalid(format!("extent must be positive, got {extent}")));
        }
        if resolution < 4 || resolution % 2 != 0 {
            return Err(invalid(format!(
                "resolution must be even and at least 4, got {resolution}"
            )));
        }
        if let WeightSpec::PowerLaw(a) = weight_spec {
            if !(a > -(dim as f64) && a < 1.0) {
                return Err(invalid(format!(
                    "power-law exponent {a} outside ({}, 1): measure not locally finite",
                    -(dim as f64)
                )));
            }
        }
        let layout = Layout { dim, resolution };
        let spacing = 2.0 * extent / resolution as f64;
        let cell_volume = spacing.powi(dim as i32);
        let mut measures = Vec::with_capacity(layout.len());
        for c in 0..layout.len() {
            let lo = canonical_corner(layout, spacing, c);
            let m = match weight_spec {
                WeightSpec::Uniform => cell_volume,
                WeightSpec::PowerLaw(_) => {
                    if touches_origin(lo, spacing, dim) {
                        subdivided_measure(weight_spec, lo, spacing, dim, SUBDIVISION_DEPTH)
                    } else {
                        let mid = midpoint(lo, spacing, dim);
                        weight_spec.density(mid, dim) * cell_volume
                    }
                }
            };
            measures.push(m);
        }
        let weights = measures.iter().map(|m| m / cell_volume).collect();
        Ok(GridSpace {
            layout,
            extent,
            spacing,
            weight_spec,
            scale: 1.0,
            weights,
            measures,
        })
    }

    /// The same grid with every density multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<GridSpace> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(invalid(format!("scale factor must be positive, got {factor}")));
        }
        let mut out = self.clone();
        out.scale *= factor;
        out.measures.iter_mut().for_each(|m| *m *= factor);
        Ok(out)
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    pub fn resolution(&self) -> usize {
        self.layout.resolution
    }

    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// Cell side length.
    pub fn h(&self) -> f64 {
        self.spacing
    }

    pub fn weight_spec(&self) -> WeightSpec {
        self.weight_spec
    }

    /// Global multiplier applied through [`GridSpace::scaled`].
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn measure(&self, c: usize) -> f64 {
        self.measures[c]
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn weight(&self, c: usize) -> f64 {
        self.weights[c] * self.scale
    }

    pub fn total_measure(&self) -> f64 {
        self.measures.iter().sum()
    }

    pub fn coords(&self, c: usize) -> [usize; 2] {
        let n = self.layout.resolution;
        if self.layout.dim == 1 {
            [c, 0]
        } else {
            [c % n, c / n]
        }
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        if self.layout.dim == 1 {
            ix
        } else {
            iy * self.layout.resolution + ix
        }
    }

    pub fn center(&self, c: usize) -> Point {
        let [ix, iy] = self.coords(c);
        let x = -self.extent + (ix as f64 + 0.5) * self.spacing;
        if self.layout.dim == 1 {
            [x, 0.0]
        } else {
            [x, -self.extent + (iy as f64 + 0.5) * self.spacing]
        }
    }

    pub fn distance(&self, c: usize, p: Point) -> f64 {
        let q = self.center(c);
        if self.layout.dim == 1 {
            (q[0] - p[0]).abs()
        } else {
            (q[0] - p[0]).hypot(q[1] - p[1])
        }
    }

    /// Perimeter weight of the interface between two adjacent cells.
    pub fn edge_weight(&self, a: usize, b: usize) -> f64 {
        self.spacing.powi(self.layout.dim as i32 - 1) * (self.weights[a] + self.weights[b]) / 2.0 * self.scale
    }

    /// Visits every interior edge once as `(lower index, higher index, weight)`.
    pub fn for_each_edge(&self, mut f: impl FnMut(usize, usize, f64)) {
        let n = self.layout.resolution;
        let face = self.spacing.powi(self.layout.dim as i32 - 1);
        if self.layout.dim == 1 {
            for c in 0..n - 1 {
                f(c, c + 1, face * (self.weights[c] + self.weights[c + 1]) / 2.0 * self.scale);
            }
            return;
        }
        for iy in 0..n {
            for ix in 0..n {
                let c = iy * n + ix;
                if ix + 1 < n {
                    f(c, c + 1, face * (self.weights[c] + self.weights[c + 1]) / 2.0 * self.scale);
                }
                if iy + 1 < n {
                    f(c, c + n, face * (self.weights[c] + self.weights[c + n]) / 2.0 * self.scale);
                }
            }
        }
    }

    /// Grid neighbours of `c` (2 in 1D, 4 in 2D, fewer on the boundary).
    pub fn neighbors(&self, c: usize) -> impl Iterator<Item = usize> {
        let n = self.layout.resolution;
        let [ix, iy] = self.coords(c);
        let mut out = [usize::MAX; 4];
        if ix > 0 {
            out[0] = c - 1;
        }
        if ix + 1 < n {
            out[1] = c + 1;
        }
        if self.layout.dim == 2 {
            if iy > 0 {
                out[2] = c - n;
            }
            if iy + 1 < n {
                out[3] = c + n;
            }
        }
        out.into_iter().filter(|&v| v != usize::MAX)
    }

    pub fn is_boundary_cell(&self, c: usize) -> bool {
        let n = self.layout.resolution;
        let [ix, iy] = self.coords(c);
        ix == 0 || ix + 1 == n || (self.layout.dim == 2 && (iy == 0 || iy + 1 == n))
    }

    /// Cells whose closed square contains `p` (up to 4 when `p` is a grid vertex).
    pub fn cells_touching(&self, p: Point) -> Vec<usize> {
        let n = self.layout.resolution as isize;
        let axis = |v: f64| -> Vec<usize> {
            let t = (v + self.extent) / self.spacing;
            let k = t.floor() as isize;
            let mut ks = vec![k];
            if (t - t.round()).abs() < 1e-9 {
                let r = t.round() as isize;
                ks = vec![r - 1, r];
            }
            ks.into_iter()
                .filter(|&k| k >= 0 && k < n)
                .map(|k| k as usize)
                .collect()
        };
        let xs = axis(p[0]);
        if self.layout.dim == 1 {
            return xs;
        }
        let ys = axis(p[1]);
        let mut out = Vec::new();
        for &iy in &ys {
            for &ix in &xs {
                out.push(self.index(ix, iy));
            }
        }
        out
    }

    /// True when the ball stays at least `2h` away from the outer boundary.
    pub fn ball_fits(&self, center: Point, radius: f64) -> bool {
        let limit = self.extent - 2.0 * self.spacing;
        (0..self.layout.dim).all(|k| center[k].abs() + radius <= limit + 1e-12)
    }

    pub(crate) fn require_ball_inside(&self, center: Point, radius: f64, what: &str) -> Result<()> {
        if self.ball_fits(center, radius) {
            Ok(())
        } else {
            Err(invalid(format!(
                "{what}: ball of radius {radius} around {center:?} is not 2h inside [-{L}, {L}]",
                L = self.extent
            )))
        }
    }

    /// Index range along one axis covering `[lo, hi]` in cell-center coordinates.
    fn axis_range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let n = self.layout.resolution as f64;
        let to_idx = |v: f64| (v + self.extent) / self.spacing - 0.5;
        let a = to_idx(lo).floor().max(0.0).min(n) as usize;
        let b = (to_idx(hi).ceil() + 1.0).max(0.0).min(n) as usize;
        a..b
    }

    /// Calls `f` for every cell whose center lies within the bounding box of the ball.
    pub(crate) fn for_each_near(&self, center: Point, radius: f64, mut f: impl FnMut(usize, f64)) {
        let xr = self.axis_range(center[0] - radius, center[0] + radius);
        if self.layout.dim == 1 {
            for ix in xr {
                f(ix, self.distance(ix, center));
            }
            return;
        }
        let yr = self.axis_range(center[1] - radius, center[1] + radius);
        for iy in yr {
            for ix in xr.clone() {
                let c = self.index(ix, iy);
                f(c, self.distance(c, center));
            }
        }
    }

    /// `mu(B(center, radius))` without materialising the cell set.
    pub fn ball_measure(&self, center: Point, radius: f64) -> f64 {
        let mut total = 0.0;
        self.for_each_near(center, radius, |c, d| {
            if d < radius {
                total += self.measures[c];
            }
        });
        total
    }
}

fn norm(p: Point, dim: usize) -> f64 {
    if dim == 1 {
        p[0].abs()
    } else {
        p[0].hypot(p[1])
    }
}

/// Lower corner of the image of cell `c` under the reflections fixing the
/// origin, chosen in the first octant. Radial densities give mirrored cells
/// bitwise equal measures this way.
fn canonical_corner(layout: Layout, h: f64, c: usize) -> Point {
    let n = layout.resolution;
    let fold = |i: usize| {
        let k = i as i64 - (n / 2) as i64;
        (if k < 0 { -k - 1 } else { k }) as f64 * h
    };
    if layout.dim == 1 {
        [fold(c), 0.0]
    } else {
        let (a, b) = (fold(c % n), fold(c / n));
        [a.min(b), a.max(b)]
    }
}

fn midpoint(lo: Point, size: f64, dim: usize) -> Point {
    if dim == 1 {
        [lo[0] + size / 2.0, 0.0]
    } else {
        [lo[0] + size / 2.0, lo[1] + size / 2.0]
    }
}

fn touches_origin(lo: Point, size: f64, dim: usize) -> bool {
    let tol = 1e-12 * size;
    (0..dim).all(|k| lo[k] <= tol && lo[k] + size >= -tol)
}

/// Integral of the density over the square `[lo, lo + size]^dim` containing the
/// origin on its boundary: split into `4^dim` children, recurse into the child
/// touching the origin and use the midpoint rule elsewhere.
fn subdivided_measure(spec: WeightSpec, lo: Point, size: f64, dim: usize, depth: usize) -> f64 {
    let child = size / SUBDIVISION_FACTOR as f64;
    let child_volume = child.powi(dim as i32);
    let ny = if dim == 1 { 1 } else { SUBDIVISION_FACTOR };
    let mut total = 0.0;
    for j in 0..ny {
        for i in 0..SUBDIVISION_FACTOR {
            let clo = if dim == 1 {
                [lo[0] + i as f64 * child, 0.0]
            } else {
                [lo[0] + i as f64 * child, lo[1] + j as f64 * child]
            };
            total += if depth > 0 && touches_origin(clo, child, dim) {
                subdivided_measure(spec, clo, child, dim, depth - 1)
            } else {
                spec.density(midpoint(clo, child, dim), dim) * child_volume
            };
        }
    }
    total
}

/// Membership vector over the cells of a layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellSet {
    layout: Layout,
    members: Vec<bool>,
}

impl CellSet {
    pub fn empty(space: &GridSpace) -> Self {
        Self::empty_on(space.layout())
    }

    pub fn empty_on(layout: Layout) -> Self {
        CellSet {
            layout,
            members: vec![false; layout.len()],
        }
    }

    pub fn full(space: &GridSpace) -> Self {
        CellSet {
            layout: space.layout(),
            members: vec![true; space.len()],
        }
    }

    pub fn from_fn(space: &GridSpace, mut f: impl FnMut(usize) -> bool) -> Self {
        CellSet {
            layout: space.layout(),
            members: (0..space.len()).map(&mut f).collect(),
        }
    }

    /// Cells whose centers satisfy the predicate.
    pub fn from_predicate(space: &GridSpace, mut f: impl FnMut(Point) -> bool) -> Self {
        Self::from_fn(space, |c| f(space.center(c)))
    }

    pub fn from_cells(space: &GridSpace, cells: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(space);
        for c in cells {
            s.insert(c);
        }
        s
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.members[c]
    }

    pub fn insert(&mut self, c: usize) {
        self.members[c] = true;
    }

    pub fn remove(&mut self, c: usize) {
        self.members[c] = false;
    }

    pub fn set(&mut self, c: usize, value: bool) {
        self.members[c] = value;
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(c, &b)| b.then_some(c))
    }

    fn zip_with(&self, other: &CellSet, f: impl Fn(bool, bool) -> bool) -> CellSet {
        assert_eq!(self.layout, other.layout, "cell sets from different grids");
        CellSet {
            layout: self.layout,
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &CellSet) -> CellSet {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &CellSet) -> CellSet {
        self.zip_with(other, |a, b| a != b)
    }

    pub fn complement(&self) -> CellSet {
        CellSet {
            layout: self.layout,
            members: self.members.iter().map(|&b| !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        assert_eq!(self.layout, other.layout, "cell sets from different grids");
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !a || b)
    }

    pub fn is_disjoint(&self, other: &CellSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn measure(&self, space: &GridSpace) -> f64 {
        self.iter().map(|c| space.measure(c)).fold(0.0, |a, m| a + m)
    }

    /// This set plus every grid neighbour of a member.
    pub fn dilate(&self, space: &GridSpace) -> CellSet {
        let mut out = self.clone();
        for c in self.iter() {
            for v in space.neighbors(c) {
                out.insert(v);
            }
        }
        out
    }

    /// Whether any member lies on the outermost ring of cells.
    pub fn touches_boundary(&self, space: &GridSpace) -> bool {
        self.iter().any(|c| space.is_boundary_cell(c))
    }
}

/// Cells whose centers are at distance `< radius` from `center`.
pub fn ball(space: &GridSpace, center: Point, radius: f64) -> Result<CellSet> {
    if !(radius > 0.0) {
        return Err(invalid(format!("ball radius must be positive, got {radius}")));
    }
    let mut out = CellSet::empty(space);
    space.for_each_near(center, radius, |c, d| {
        if d < radius {
            out.insert(c);
        }
    });
    Ok(out)
}

/// Cells whose centers are at distance `<= radius` from `center`.
pub fn closed_ball(space: &GridSpace, center: Point, radius: f64) -> CellSet {
    let mut out = CellSet::empty(space);
    if radius < 0.0 {
        return out;
    }
    space.for_each_near(center, radius, |c, d| {
        if d <= radius {
            out.insert(c);
        }
    });
    out
}

/// `ball(center, radius)` without the outermost ring of cells, so that it can
/// serve as an obstacle-problem window even when the ball reaches the edge.
pub fn clipped_ball(space: &GridSpace, center: Point, radius: f64) -> Result<CellSet> {
    let mut b = ball(space, center, radius)?;
    let members: Vec<usize> = b.iter().filter(|&c| space.is_boundary_cell(c)).collect();
    for c in members {
        b.remove(c);
    }
    Ok(b)
}

/// `ball(center, r_out)` minus the closed ball of radius `r_in`.
pub fn annulus(space: &GridSpace, center: Point, r_in: f64, r_out: f64) -> Result<CellSet> {
    if !(r_in >= 0.0 && r_in < r_out) {
        return Err(invalid(format!(
            "annulus radii must satisfy 0 <= r_in < r_out, got ({r_in}, {r_out})"
        )));
    }
    let mut out = CellSet::empty(space);
    space.for_each_near(center, r_out, |c, d| {
        if d < r_out && d > r_in {
            out.insert(c);
        }
    });
    Ok(out)
}

/// Empirical structural constants of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceConstants {
    /// Largest sampled `mu(B(x,2r)) / mu(B(x,r))`.
    pub doubling: f64,
    /// Exponent `Q > 1` of the lower mass bound, used by the weak Harnack check.
    pub dimension_exponent: f64,
    /// Fitted slope of `log mu(B(0,r))` against `log r`.
    pub origin_exponent: f64,
    /// Largest isoperimetric ratio over sampled half-spaces and balls.
    pub isoperimetric: f64,
    /// Bound on the weak Harnack constant asserted over the canonical sweep.
    pub harnack: f64,
    /// Poincaré dilation; graph perimeter is local.
    pub dilation: f64,
}

/// Calibrated bound on the fitted weak Harnack constant.
pub const HARNACK_BOUND: f64 = 64.0;

pub fn estimate_constants(space: &GridSpace, samples: usize) -> Result<SpaceConstants> {
    if samples == 0 {
        return Err(invalid("at least one sample is required"));
    }
    let n = space.resolution();
    if n < 16 {
        return Err(LabError::Unsupported(format!(
            "resolution {n} is too coarse to sample balls (need >= 16)"
        )));
    }
    let h = space.h();
    let big_l = space.extent();
    let r_lo = 4.0 * h;
    let r_hi = big_l / 4.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x00d0_b1e5);
    let mut doubling: f64 = 0.0;
    let mut iso: f64 = 0.0;
    let dim = space.dim();
    for _ in 0..samples {
        let r = (rng.gen_range(r_lo.ln()..=r_hi.ln())).exp();
        let reach = big_l - 2.0 * r - 2.0 * h;
        // cell centres within the admissible box
        let k_max = ((reach / h) - 0.5).floor().max(0.0) as i64;
        let pick = |rng: &mut ChaCha8Rng| -> f64 { (rng.gen_range(-k_max..=k_max) as f64) * h + 0.5 * h };
        let x = if dim == 1 {
            [pick(&mut rng), 0.0]
        } else {
            [pick(&mut rng), pick(&mut rng)]
        };
        let inner = space.ball_measure(x, r);
        let outer = space.ball_measure(x, 2.0 * r);
        if inner > 0.0 {
            doubling = doubling.max(outer / inner);
        }
        if r >= 8.0 * h {
            // half-space through x, boundary on a grid line next to x
            let cut = x[0] - 0.5 * h;
            let half = CellSet::from_predicate(space, |p| p[0] > cut);
            let ratio = crate::bv::isoperimetric_check(space, &half, x, r)?;
            if ratio.is_finite() {
                iso = iso.max(ratio);
            }
        }
    }

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut r = big_l / 4.0;
    while r >= 8.0 * h {
        xs.push(r.ln());
        ys.push(space.ball_measure([0.0, 0.0], r).ln());
        r /= 2.0;
    }
    let origin_exponent = if xs.len() >= 2 { fit_slope(&xs, &ys) } else { dim as f64 };

    Ok(SpaceConstants {
        doubling,
        dimension_exponent: (dim as f64).max(2.0),
        origin_exponent,
        isoperimetric: iso,
        harnack: HARNACK_BOUND,
        dilation: 1.0,
    })
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
