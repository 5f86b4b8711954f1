//! report.csv, profile CSVs and SVG rasters.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use bvlab_core::{CellSet, CheckRow, GridFunction, GridSpace};

/// `(index, radius, value)` series written as `profile_<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Profile {
    pub fn new(name: impl Into<String>, radii: &[f64], values: &[f64]) -> Self {
        Profile {
            name: name.into(),
            points: radii.iter().copied().zip(values.iter().copied()).collect(),
        }
    }
}

pub enum Layer {
    Set(CellSet),
    Function(GridFunction),
}

/// Layers drawn over one grid, written as `<name>.svg`.
pub struct Figure {
    pub name: String,
    pub space: GridSpace,
    pub layers: Vec<Layer>,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

pub fn write_report(path: &Path, rows: &[CheckRow]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["check_name", "scale", "lhs", "rhs", "tolerance", "status"])?;
    for r in rows {
        w.write_record([
            r.name.clone(),
            r.scale.to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.tolerance.to_string(),
            r.status.to_string(),
        ])?;
    }
    w.flush()
}

pub fn write_profile(path: &Path, profile: &Profile) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["index", "radius", "value"])?;
    for (i, (r, v)) in profile.points.iter().enumerate() {
        w.write_record([i.to_string(), r.to_string(), v.to_string()])?;
    }
    w.flush()
}

/// Horizontal runs `(x, len, value)` of one grid row where `value` is constant
/// and nonzero.
fn runs(n: usize, row: impl Fn(usize) -> f64) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    let mut x = 0;
    while x < n {
        let v = row(x);
        let start = x;
        while x < n && row(x) == v {
            x += 1;
        }
        if v != 0.0 {
            out.push((start, x - start, v));
        }
    }
    out
}

/// Cell raster with one group per layer, rows merged into runs of equal value.
/// Sets are drawn in a fixed palette, functions as opacity scaled to their range.
pub fn render_svg(space: &GridSpace, layers: &[Layer]) -> String {
    let n = space.resolution();
    let rows = if space.dim() == 1 { 1 } else { n };
    let px = 512.0 / n as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="512" height="{}" viewBox="0 0 {n} {rows}" shape-rendering="crispEdges">"#,
        rows as f64 * px
    );
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{n}" height="{rows}" fill="#ffffff" stroke="#000000" stroke-width="{}"/>"##,
        1.0 / px
    );
    for (li, layer) in layers.iter().enumerate() {
        let colour = PALETTE[li % PALETTE.len()];
        let (values, lo, hi): (Box<dyn Fn(usize) -> f64 + '_>, f64, f64) = match layer {
            Layer::Set(set) => (Box::new(|c| f64::from(u8::from(set.contains(c)))), 0.0, 1.0),
            Layer::Function(f) => (Box::new(|c| f.value(c)), f.min().min(0.0), f.max()),
        };
        let _ = writeln!(s, r#"<g fill="{colour}">"#);
        for y in 0..rows {
            // row 0 is the bottom of the domain
            let sy = rows - 1 - y;
            for (x, len, v) in runs(n, |x| values(if rows == 1 { x } else { space.index(x, y) })) {
                let opacity = if hi > lo { (v - lo) / (hi - lo) } else { 1.0 };
                let _ = writeln!(
                    s,
                    r#"<rect x="{x}" y="{sy}" width="{len}" height="1" fill-opacity="{:.3}"/>"#,
                    0.6 * opacity
                );
            }
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(space: &GridSpace, layers: &[Layer], path: &Path) -> io::Result<()> {
    fs::write(path, render_svg(space, layers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bvlab_core::{build_grid, WeightSpec};

    #[test]
    fn empty_layers_draw_only_the_outline() {
        let g = build_grid(2, 1.0, 8, WeightSpec::Uniform).unwrap();
        let svg = render_svg(&g, &[]);
        assert_eq!(svg.matches("<rect").count(), 1);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn runs_merge_equal_cells() {
        let g = build_grid(2, 1.0, 8, WeightSpec::Uniform).unwrap();
        let row = CellSet::from_fn(&g, |c| g.coords(c)[1] == 2 && g.coords(c)[0] >= 3);
        let svg = render_svg(&g, &[Layer::Set(row.clone())]);
        assert!(svg.contains(r#"<rect x="3" y="5" width="5" height="1""#));
        assert_eq!(svg, render_svg(&g, &[Layer::Set(row.clone())]));
    }
}
