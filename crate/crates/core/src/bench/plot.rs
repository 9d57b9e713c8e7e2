//! Point lists for plotting, written as CSV.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matops::Vector;
use crate::mpi::MpiSet;
use crate::polyset::vertices_lowdim;

/// Directions per coordinate plane for projected outlines.
pub const OUTLINE_DIRECTIONS: usize = 72;

/// Points of the outer polygon of the projection of `set` onto the plane of
/// coordinates `(i, j)`: consecutive support lines intersected pairwise.
pub fn projected_outline(set: &MpiSet, i: usize, j: usize, directions: usize) -> Result<Vec<(f64, f64)>> {
    let n = set.dim();
    if i >= n || j >= n || i == j || directions < 3 {
        return Err(Error::InvalidParams(format!("plane ({i}, {j}) in R^{n}")));
    }
    let step = std::f64::consts::TAU / directions as f64;
    let mut lines = Vec::with_capacity(directions);
    for k in 0..directions {
        let t = k as f64 * step;
        let mut d = Vector::zeros(n);
        d[i] = t.cos();
        d[j] = t.sin();
        let h = set.support(&d)?;
        if !h.is_finite() {
            return Err(Error::Unbounded);
        }
        lines.push((t.cos(), t.sin(), h));
    }
    let mut pts = Vec::with_capacity(directions);
    for k in 0..directions {
        let (a1, b1, h1) = lines[k];
        let (a2, b2, h2) = lines[(k + 1) % directions];
        let det = a1 * b2 - a2 * b1;
        pts.push(((h1 * b2 - h2 * b1) / det, (a1 * h2 - a2 * h1) / det));
    }
    Ok(pts)
}

/// Vertices for half-space sets in dimension `<= 3`, projected outlines on
/// every coordinate plane otherwise. Returns the number of points written.
pub fn write_plot_data<W: Write>(set: &MpiSet, out: W) -> Result<usize> {
    let mut w = csv::Writer::from_writer(out);
    let mut count = 0;
    match set {
        MpiSet::H(p) if p.dim() <= 3 => {
            let header: Vec<String> = (0..p.dim()).map(|i| format!("x{i}")).collect();
            w.write_record(&header)?;
            for v in vertices_lowdim(p, 1e-9)? {
                w.write_record(v.iter().map(|x| x.to_string()))?;
                count += 1;
            }
        }
        _ => {
            w.write_record(["i", "j", "x", "y"])?;
            let n = set.dim();
            for i in 0..n {
                for j in i + 1..n {
                    for (x, y) in projected_outline(set, i, j, OUTLINE_DIRECTIONS)? {
                        w.write_record([i.to_string(), j.to_string(), x.to_string(), y.to_string()])?;
                        count += 1;
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(count)
}

pub fn emit_plot_data(set: &MpiSet, path: &Path) -> Result<usize> {
    write_plot_data(set, std::fs::File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyset::HPolyhedron;

    #[test]
    fn square_vertices() {
        let set = MpiSet::H(HPolyhedron::symmetric_box(&[1.0, 2.0]).unwrap());
        let mut buf = Vec::new();
        assert_eq!(write_plot_data(&set, &mut buf).unwrap(), 4);
        assert!(String::from_utf8(buf).unwrap().starts_with("x0,x1\n"));
    }

    #[test]
    fn outline_of_a_box_encloses_it() {
        let set = MpiSet::H(HPolyhedron::symmetric_box(&[1.0, 1.0, 1.0, 1.0]).unwrap());
        let pts = projected_outline(&set, 0, 3, 8).unwrap();
        assert_eq!(pts.len(), 8);
        assert!(pts.iter().all(|&(x, y)| x.abs() <= 1.0 + 1e-9 && y.abs() <= 1.0 + 1e-9));
        assert!(pts.iter().any(|&(x, y)| (x - 1.0).abs() < 1e-9 && (y - 1.0).abs() < 1e-9));
    }
}
