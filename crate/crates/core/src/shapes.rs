//! Rasterised test sets: a cell belongs to a shape when its center does.

use crate::error::{invalid, LabError, Result};
use crate::grid::{CellSet, GridSpace};

/// Closed axis-parallel rectangle `[x0, x1] × [y0, y1]` (the y-range is ignored in 1D).
pub fn rectangle(space: &GridSpace, x: [f64; 2], y: [f64; 2]) -> CellSet {
    let one_d = space.dim() == 1;
    CellSet::from_predicate(space, |p| {
        p[0] >= x[0] && p[0] <= x[1] && (one_d || (p[1] >= y[0] && p[1] <= y[1]))
    })
}

/// Horizontal cusp `{(s, t): 0 < s <= s_max, |t| <= s^2 / curvature}` with its tip at
/// `tip`.
pub fn cusp(space: &GridSpace, tip: [f64; 2], s_max: f64, curvature: f64) -> CellSet {
    CellSet::from_predicate(space, |p| {
        let s = p[0] - tip[0];
        let t = p[1] - tip[1];
        s > 0.0 && s <= s_max && t.abs() <= s * s / curvature
    })
}

/// `{x_0 > offset}`.
pub fn half_plane(space: &GridSpace, offset: f64) -> CellSet {
    CellSet::from_predicate(space, |p| p[0] > offset)
}

/// Cells of a checkerboard coloured by the parity of `ix + iy`.
pub fn checkerboard(space: &GridSpace) -> CellSet {
    CellSet::from_fn(space, |c| {
        let [x, y] = space.coords(c);
        (x + y) % 2 == 1
    })
}

/// The rectangles `A_j = [10^-j (1 - eps), 10^-j] × [0, 10^-2j eps]`, `j < chain_depth`,
/// of the thick-point counterexample.
pub fn rectangle_chain(space: &GridSpace, eps: f64, chain_depth: usize) -> Result<Vec<CellSet>> {
    if !(eps > 0.0 && eps < 0.2) {
        return Err(invalid(format!("eps must lie in (0, 1/5), got {eps}")));
    }
    if space.dim() != 2 {
        return Err(invalid("the rectangle chain lives in the plane"));
    }
    if chain_depth == 0 {
        return Err(invalid("chain depth must be at least 1"));
    }
    let mut out = Vec::with_capacity(chain_depth);
    for j in 0..chain_depth {
        let scale = 10f64.powi(-(j as i32));
        let a = rectangle(
            space,
            [scale - scale * eps, scale],
            [0.0, scale * scale * eps],
        );
        if a.is_empty() {
            return Err(LabError::ResolutionInsufficient(format!(
                "rectangle {j} of the chain holds no cell center at h = {}",
                space.h()
            )));
        }
        out.push(a);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, WeightSpec};

    #[test]
    fn chain_cell_counts() {
        let g = build_grid(2, 2.0, 2048, WeightSpec::Uniform).unwrap();
        let chain = rectangle_chain(&g, 0.1, 2).unwrap();
        assert_eq!(chain[0].count(), 51 * 51);
        assert_eq!(chain[1].count(), 5);
        assert!(chain[0].is_disjoint(&chain[1]));
        assert!(matches!(
            rectangle_chain(&g, 0.1, 3),
            Err(LabError::ResolutionInsufficient(_))
        ));
        assert!(rectangle_chain(&g, 0.25, 1).is_err());
    }

    #[test]
    fn cusp_avoids_tip() {
        let g = build_grid(2, 1.0, 64, WeightSpec::Uniform).unwrap();
        let a = cusp(&g, [0.0, 0.0], 0.5, 1.0);
        assert!(!a.is_empty());
        for c in g.cells_touching([0.0, 0.0]) {
            assert!(!a.contains(c));
        }
    }
}
