//! Thinness quotients, thin/thick verdicts and capacity–perimeter comparisons.

use rayon::prelude::*;

use crate::bv::{ball_stencil, local_variation, mt_split, stencil_masses};
use crate::error::{invalid, LabError, Result};
use crate::grid::{ball, fit_slope, CellSet, GridSpace, Point, WeightSpec};
use crate::variational::variational_capacity;

/// Radii below this many cells are untrusted.
pub const TRUSTED_CELLS: f64 = 8.0;

/// Default thin/thick thresholds.
pub const TAU_THIN: f64 = 1e-2;
pub const TAU_THICK: f64 = 1e-2;

/// Density tolerance and radius (in cells) of the measure-theoretic split.
const SPLIT_TOL: f64 = 0.01;
const SPLIT_CELLS: f64 = 4.0;

pub(crate) fn is_trusted(space: &GridSpace, r: f64) -> bool {
    r >= TRUSTED_CELLS * space.h() * (1.0 - 1e-12)
}

/// `r · rcap_1(A ∩ B(x, r), B(x, 2r)) / mu(B(x, r))` over `r_i = M^-i R`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinnessProfile {
    pub center: Point,
    pub base_radius: f64,
    pub ratio_base: f64,
    pub depth: usize,
    pub radii: Vec<f64>,
    pub capacities: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Largest index whose radius is at least `8h`.
    pub resolution_floor: usize,
    /// `rcap_1(A ∩ B(x, r), B(x, 2r)) <= rcap_1(A ∩ B(x, r), B(x, 3r/2))` at every index.
    pub window_monotone: bool,
}

impl ThinnessProfile {
    pub fn trusted(&self) -> &[f64] {
        &self.ratios[..=self.resolution_floor]
    }

    /// Whether the trusted ratios strictly decrease.
    pub fn strictly_decreasing(&self) -> bool {
        self.trusted().windows(2).all(|w| w[1] < w[0])
    }
}

/// Capacity of `A ∩ B(x, r)` relative to `B(x, window_r)`.
pub fn local_capacity(space: &GridSpace, set: &CellSet, x: Point, r: f64, window_r: f64) -> Result<f64> {
    let window = ball(space, x, window_r)?;
    let inner = set.intersection(&ball(space, x, r)?).intersection(&window);
    Ok(variational_capacity(space, &inner, &window)?.value)
}

pub fn thinness_profile(
    space: &GridSpace,
    set: &CellSet,
    x: Point,
    ratio_base: f64,
    base_radius: f64,
    depth: usize,
) -> Result<ThinnessProfile> {
    if !(ratio_base > 1.0) {
        return Err(invalid(format!("ratio base must exceed 1, got {ratio_base}")));
    }
    if depth == 0 {
        return Err(invalid("profile depth must be at least 1"));
    }
    if set.layout() != space.layout() {
        return Err(invalid("set belongs to a different grid"));
    }
    space.require_ball_inside(x, 2.0 * base_radius, "thinness profile")?;
    if !is_trusted(space, base_radius) {
        return Err(LabError::ResolutionInsufficient(format!(
            "base radius {base_radius} is below 8h = {}",
            TRUSTED_CELLS * space.h()
        )));
    }
    let radii: Vec<f64> = (0..=depth)
        .map(|i| base_radius * ratio_base.powi(-(i as i32)))
        .collect();
    let solved: Vec<Result<(f64, f64, bool)>> = radii
        .par_iter()
        .map(|&r| {
            let cap = local_capacity(space, set, x, r, 2.0 * r)?;
            let narrow = local_capacity(space, set, x, r, 1.5 * r)?;
            let mass = space.ball_measure(x, r);
            let ratio = if mass > 0.0 { r * cap / mass } else { 0.0 };
            Ok((cap, ratio, cap <= narrow))
        })
        .collect();
    let mut capacities = Vec::with_capacity(radii.len());
    let mut ratios = Vec::with_capacity(radii.len());
    let mut window_monotone = true;
    for s in solved {
        let (cap, ratio, mono) = s?;
        capacities.push(cap);
        ratios.push(ratio);
        window_monotone &= mono;
    }
    let resolution_floor = radii.iter().rposition(|&r| is_trusted(space, r)).unwrap_or(0);
    Ok(ThinnessProfile {
        center: x,
        base_radius,
        ratio_base,
        depth,
        radii,
        capacities,
        ratios,
        resolution_floor,
        window_monotone,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Thin,
    Thick,
    Inconclusive,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Thin => "thin",
            Classification::Thick => "thick",
            Classification::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThinnessVerdict {
    pub classification: Classification,
    /// Slope of `log θ_i` against `i` over the positive trusted ratios.
    pub slope: Option<f64>,
    pub last_trusted: f64,
    pub tau_thin: f64,
    pub tau_thick: f64,
}

/// Thin when the trusted ratios vanish from some index on, or when the last
/// one is below `tau_thin` with a negative slope; thick when every trusted
/// ratio is at least `tau_thick`.
pub fn classify(profile: &ThinnessProfile, tau_thin: f64, tau_thick: f64) -> Result<ThinnessVerdict> {
    if !(tau_thin > 0.0 && tau_thin <= tau_thick) {
        return Err(invalid(format!(
            "thresholds must satisfy 0 < tau_thin <= tau_thick, got ({tau_thin}, {tau_thick})"
        )));
    }
    let trusted = profile.trusted();
    let last = trusted[trusted.len() - 1];
    let (xs, ys): (Vec<f64>, Vec<f64>) = trusted
        .iter()
        .enumerate()
        .filter(|(_, &t)| t > 0.0)
        .map(|(i, &t)| (i as f64, t.ln()))
        .unzip();
    let slope = (xs.len() >= 2).then(|| fit_slope(&xs, &ys));
    let classification = if last == 0.0 {
        Classification::Thin
    } else if last < tau_thin && slope.is_some_and(|s| s < 0.0) {
        Classification::Thin
    } else if trusted.iter().all(|&t| t >= tau_thick) {
        Classification::Thick
    } else {
        Classification::Inconclusive
    };
    Ok(ThinnessVerdict {
        classification,
        slope,
        last_trusted: last,
        tau_thin,
        tau_thick,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxingCheck {
    /// `rcap_1((I_E ∪ ∂*E) ∩ B(x, r), B(x, 2r))`.
    pub cap_side: f64,
    /// `P(E, B(x, 2r))`.
    pub perim_side: f64,
    /// `mu(E ∩ B(x, 2r)) / mu(B(x, 2r))`.
    pub density: f64,
}

/// Largest density of `E` in `B(x, 2r)` admitted by [`boxing_check`].
pub const BOXING_SMALLNESS: f64 = 1.0 / 8.0;
/// Constant asserted in `cap_side <= BOXING_CONSTANT * perim_side`.
pub const BOXING_CONSTANT: f64 = 8.0;

pub fn boxing_check(space: &GridSpace, set: &CellSet, x: Point, r: f64) -> Result<BoxingCheck> {
    if set.layout() != space.layout() {
        return Err(invalid("set belongs to a different grid"));
    }
    if r < 16.0 * space.h() * (1.0 - 1e-12) {
        return Err(LabError::ResolutionInsufficient(format!(
            "boxing radius {r} is below 16h = {}",
            16.0 * space.h()
        )));
    }
    space.require_ball_inside(x, 2.0 * r, "boxing check")?;
    let outer = ball(space, x, 2.0 * r)?;
    let density = outer.intersection(set).measure(space) / outer.measure(space);
    if density > BOXING_SMALLNESS {
        return Err(LabError::Precondition(format!(
            "density {density} of the set in B(x, 2r) exceeds {BOXING_SMALLNESS}"
        )));
    }
    let inner = ball(space, x, r)?;
    let split = mt_split(space, set, &inner, SPLIT_CELLS * space.h(), SPLIT_TOL)?;
    let core = split.interior.union(&split.boundary);
    let cap_side = variational_capacity(space, &core, &outer)?.value;
    let cells: Vec<usize> = outer.iter().collect();
    let perim_side = local_variation(
        space,
        |c| f64::from(u8::from(set.contains(c))),
        &cells,
        |c| outer.contains(c),
    );
    Ok(BoxingCheck {
        cap_side,
        perim_side,
        density,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPointCheck {
    /// Dyadic scale maximising `mu(B(x, s)) / s`.
    pub witness_s: f64,
    /// `mu(B(x, s)) / (16 s)` at the witness scale.
    pub lower_bound: f64,
    /// `rcap_1(A ∩ B(x, r), B(x, 2r))`.
    pub cap: f64,
}

impl DensityPointCheck {
    pub fn holds(&self) -> bool {
        self.cap >= self.lower_bound
    }
}

/// Constant in the density-point capacity lower bound.
pub const DENSITY_POINT_CONSTANT: f64 = 16.0;

pub fn density_point_capacity_check(space: &GridSpace, set: &CellSet, x: Point, r: f64) -> Result<DensityPointCheck> {
    if set.layout() != space.layout() {
        return Err(invalid("set belongs to a different grid"));
    }
    if !is_trusted(space, r) {
        return Err(LabError::ResolutionInsufficient(format!(
            "radius {r} is below 8h = {}",
            TRUSTED_CELLS * space.h()
        )));
    }
    space.require_ball_inside(x, 2.0 * r, "density point check")?;
    let probe = SPLIT_CELLS * space.h();
    let b = ball(space, x, probe)?;
    let total = b.measure(space);
    let outside = b.difference(set).measure(space);
    if outside > SPLIT_TOL * total {
        return Err(LabError::Precondition(format!(
            "point {x:?} is not in the measure-theoretic interior (complement density {})",
            outside / total
        )));
    }
    let mut s = r;
    let mut best = (r, space.ball_measure(x, r) / r);
    while s / 2.0 >= TRUSTED_CELLS * space.h() * (1.0 - 1e-12) {
        s /= 2.0;
        let q = space.ball_measure(x, s) / s;
        if q > best.1 {
            best = (s, q);
        }
    }
    let cap = local_capacity(space, set, x, r, 2.0 * r)?;
    Ok(DensityPointCheck {
        witness_s: best.0,
        lower_bound: best.1 / DENSITY_POINT_CONSTANT,
        cap,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointThickness {
    pub radii: Vec<f64>,
    /// `r / mu(B(0, r))`.
    pub ratios: Vec<f64>,
    /// `ratios[j + 1] / ratios[j]`.
    pub successive: Vec<f64>,
    pub trusted: Vec<bool>,
    /// Thinness profile of the cells touching the origin.
    pub profile: ThinnessProfile,
}

impl PointThickness {
    pub fn strictly_decreasing(&self) -> bool {
        let t: Vec<f64> = self
            .ratios
            .iter()
            .zip(&self.trusted)
            .filter(|(_, &ok)| ok)
            .map(|(&v, _)| v)
            .collect();
        t.windows(2).all(|w| w[1] < w[0])
    }
}

/// Mass decay `r / mu(B(0, r))` over `r = L / 2^(j+1)`, `j < depth`, and the
/// thinness profile of the origin cells with base radius `L / 4`.
pub fn point_thickness_experiment(space: &GridSpace, depth: usize) -> Result<PointThickness> {
    match space.weight_spec() {
        WeightSpec::PowerLaw(a) if a > -2.0 && a < -1.0 && space.dim() == 2 => {}
        other => {
            return Err(invalid(format!(
                "point thickness needs a planar power law with exponent in (-2, -1), got {other}"
            )))
        }
    }
    if depth < 2 {
        return Err(invalid("depth must be at least 2"));
    }
    let big_l = space.extent();
    let radii: Vec<f64> = (0..depth).map(|j| big_l / 2f64.powi(j as i32 + 1)).collect();
    let ratios: Vec<f64> = radii
        .iter()
        .map(|&r| r / space.ball_measure([0.0, 0.0], r))
        .collect();
    let successive = ratios.windows(2).map(|w| w[1] / w[0]).collect();
    let trusted = radii.iter().map(|&r| is_trusted(space, r)).collect();
    let origin = CellSet::from_cells(space, space.cells_touching([0.0, 0.0]));
    let profile = thinness_profile(space, &origin, [0.0, 0.0], 2.0, big_l / 4.0, depth)?;
    Ok(PointThickness {
        radii,
        ratios,
        successive,
        trusted,
        profile,
    })
}

/// `rcap_1(A ∩ B(x, r), B(x, R0))` for each radius.
pub fn capacity_shrink_profile(
    space: &GridSpace,
    set: &CellSet,
    x: Point,
    r0: f64,
    radii: &[f64],
) -> Result<Vec<f64>> {
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("radii must be strictly decreasing"));
    }
    if let Some(&r) = radii.iter().find(|&&r| !is_trusted(space, r)) {
        return Err(LabError::ResolutionInsufficient(format!(
            "radius {r} is below 8h = {}",
            TRUSTED_CELLS * space.h()
        )));
    }
    if radii.iter().any(|&r| r > r0) {
        return Err(invalid("radii must not exceed the window radius"));
    }
    space.require_ball_inside(x, r0, "capacity shrink profile")?;
    radii
        .par_iter()
        .map(|&r| local_capacity(space, set, x, r, r0))
        .collect()
}

/// Density of `set` in the `4h` ball around every cell of `cells`.
pub(crate) fn split_densities(space: &GridSpace, set: &CellSet, cells: &[usize]) -> Vec<f64> {
    let stencil = ball_stencil(space, SPLIT_CELLS * space.h());
    cells
        .par_iter()
        .map(|&c| {
            let (inside, total) = stencil_masses(space, set.as_slice(), c, &stencil);
            inside / total
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    fn synthetic(ratios: Vec<f64>) -> ThinnessProfile {
        let depth = ratios.len() - 1;
        ThinnessProfile {
            center: [0.0, 0.0],
            base_radius: 1.0,
            ratio_base: 2.0,
            depth,
            radii: (0..=depth).map(|i| 2f64.powi(-(i as i32))).collect(),
            capacities: vec![0.0; depth + 1],
            ratios,
            resolution_floor: depth,
            window_monotone: true,
        }
    }

    #[test]
    fn synthetic_verdicts() {
        let v = classify(&synthetic(vec![0.0; 4]), TAU_THIN, TAU_THICK).unwrap();
        assert_eq!(v.classification, Classification::Thin);
        let v = classify(&synthetic(vec![0.1; 4]), TAU_THIN, TAU_THICK).unwrap();
        assert_eq!(v.classification, Classification::Thick);
        let decay = (0..6).map(|i| 0.2 * 0.4f64.powi(i)).collect();
        let v = classify(&synthetic(decay), TAU_THIN, TAU_THICK).unwrap();
        assert_eq!(v.classification, Classification::Thin);
        assert!(v.slope.unwrap() < 0.0);
        let v = classify(&synthetic(vec![0.1, 0.001, 0.1]), TAU_THIN, TAU_THICK).unwrap();
        assert_eq!(v.classification, Classification::Inconclusive);
        assert!(classify(&synthetic(vec![0.1; 2]), 0.2, 0.1).is_err());
    }

    #[test]
    fn empty_set_profile_is_zero() {
        let g = build_grid(2, 1.0, 256, WeightSpec::Uniform).unwrap();
        let p = thinness_profile(&g, &CellSet::empty(&g), [0.0, 0.0], 2.0, 0.4, 2).unwrap();
        assert!(p.ratios.iter().all(|&t| t == 0.0));
        assert!(p.window_monotone);
        assert_eq!(p.resolution_floor, 2);
    }

    #[test]
    fn empty_set_boxing() {
        let g = build_grid(2, 1.0, 256, WeightSpec::Uniform).unwrap();
        let b = boxing_check(&g, &CellSet::empty(&g), [0.0, 0.0], 0.25).unwrap();
        assert_eq!((b.cap_side, b.perim_side), (0.0, 0.0));
    }

    #[test]
    fn uniform_weights_rejected_for_point_thickness() {
        let g = build_grid(2, 1.0, 64, WeightSpec::Uniform).unwrap();
        assert!(point_thickness_experiment(&g, 4).is_err());
    }
}
