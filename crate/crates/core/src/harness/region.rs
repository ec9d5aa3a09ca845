use std::fmt::Write as _;

use serde::Serialize;

use super::sci_f64;
use crate::error::{Error, Result};
use crate::theory::{classify_grid, restricted_verdict, strong_verdict, Status, VerdictKind};

pub const MAX_GRID: usize = 512;

/// Panels of the boundedness map, one per `gamma`, on the grid
/// `(1/p, 1/q) = (i/grid, j/grid)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionFigure {
    pub gammas: Vec<f64>,
    pub grid: usize,
    pub kind: VerdictKind,
}

impl RegionFigure {
    pub fn new(gammas: Vec<f64>, grid: usize, kind: VerdictKind) -> Result<Self> {
        if grid == 0 || grid > MAX_GRID {
            return Err(Error::param(format!("grid must lie in 1..={MAX_GRID}, got {grid}")));
        }
        if gammas.is_empty() {
            return Err(Error::param("at least one gamma is needed"));
        }
        for &g in &gammas {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::param(format!("gamma must be positive, got {g}")));
            }
        }
        Ok(RegionFigure { gammas, grid, kind })
    }
}

fn exponent(inv: f64) -> f64 {
    if inv == 0.0 {
        f64::INFINITY
    } else {
        1.0 / inv
    }
}

/// `(gamma, 1/p, 1/q, status, citation)`.
pub type RegionRow = (f64, f64, f64, Status, &'static str);

/// Every grid node, rows of constant `1/q` from the bottom.
pub fn region_rows(fig: &RegionFigure) -> Result<Vec<RegionRow>> {
    let n = fig.grid;
    let mut out = Vec::with_capacity(fig.gammas.len() * (n + 1) * (n + 1));
    for &gamma in &fig.gammas {
        for j in 0..=n {
            let v = j as f64 / n as f64;
            for i in 0..=n {
                let u = i as f64 / n as f64;
                let (p, q) = (exponent(u), exponent(v));
                let verdict = match fig.kind {
                    VerdictKind::Strong => strong_verdict(gamma, p, q)?,
                    VerdictKind::RestrictedWeak => restricted_verdict(gamma, p, q)?,
                };
                out.push((gamma, u, v, verdict.status, verdict.citation));
            }
        }
    }
    Ok(out)
}

pub fn region_csv(fig: &RegionFigure) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["gamma", "inv_p", "inv_q", "status", "citation"])?;
    for (gamma, u, v, status, citation) in region_rows(fig)? {
        w.write_record([sci_f64(gamma), sci_f64(u), sci_f64(v), status.to_string(), citation.to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

fn colour(s: Status) -> &'static str {
    match s {
        Status::Bounded => "#4a90d9",
        Status::Unbounded => "#f2f2f2",
        Status::Unknown => "#d62728",
    }
}

const MARGIN: usize = 24;
const GAP: usize = 24;

/// Static SVG with one panel per `gamma`. Cells of equal status along a row
/// are merged into one rectangle; the vertical axis is `1/q`, increasing upward.
pub fn region_svg(fig: &RegionFigure) -> Result<String> {
    let cells = fig.grid + 1;
    let panels = fig.gammas.len();
    let width = 2 * MARGIN + panels * cells + (panels - 1) * GAP;
    let height = 2 * MARGIN + cells;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#,
        w = width,
        h = height
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#);
    for (panel, &gamma) in fig.gammas.iter().enumerate() {
        let grid = classify_grid(gamma, fig.kind, fig.grid)?;
        let x0 = MARGIN + panel * (cells + GAP);
        let _ = writeln!(svg, r#"<g id="gamma-{gamma}">"#);
        for (j, row) in grid.iter().enumerate() {
            let y = MARGIN + fig.grid - j;
            let mut start = 0;
            while start < row.len() {
                let mut end = start + 1;
                while end < row.len() && row[end] == row[start] {
                    end += 1;
                }
                let _ = writeln!(
                    svg,
                    r#"<rect x="{}" y="{}" width="{}" height="1" fill="{}"/>"#,
                    x0 + start,
                    y,
                    end - start,
                    colour(row[start])
                );
                start = end;
            }
        }
        let _ = writeln!(
            svg,
            r#"<rect x="{x0}" y="{MARGIN}" width="{cells}" height="{cells}" fill="none" stroke="black" stroke-width="1"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">gamma = {gamma}</text>"#,
            x0 + cells / 2,
            MARGIN - 8
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">1/p</text>"#,
            x0 + cells / 2,
            MARGIN + cells + 14
        );
        let _ = writeln!(svg, "</g>");
    }
    let _ = writeln!(
        svg,
        r#"<text x="10" y="{}" font-family="sans-serif" font-size="10" transform="rotate(-90 10 {})">1/q</text>"#,
        MARGIN + cells / 2,
        MARGIN + cells / 2
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_limits() {
        assert!(RegionFigure::new(vec![0.5], 0, VerdictKind::Strong).is_err());
        assert!(RegionFigure::new(vec![0.5], 513, VerdictKind::Strong).is_err());
        assert!(RegionFigure::new(vec![], 10, VerdictKind::Strong).is_err());
    }

    #[test]
    fn svg_is_static_and_stable() {
        let fig = RegionFigure::new(vec![0.75, 1.5], 40, VerdictKind::Strong).unwrap();
        let a = region_svg(&fig).unwrap();
        assert_eq!(a, region_svg(&fig).unwrap());
        assert!(!a.contains("<script"));
        assert!(a.contains("#d62728"));
    }

    #[test]
    fn large_gamma_panel_is_the_triangle() {
        let fig = RegionFigure::new(vec![1.5], 20, VerdictKind::Strong).unwrap();
        for (_, u, v, s, _) in region_rows(&fig).unwrap() {
            assert_eq!(s == Status::Bounded, v <= u + 1e-12);
        }
    }

    #[test]
    fn csv_header() {
        let fig = RegionFigure::new(vec![1.0], 2, VerdictKind::Strong).unwrap();
        let csv = region_csv(&fig).unwrap();
        assert!(csv.starts_with("gamma,inv_p,inv_q,status,citation\n"));
        assert_eq!(csv.lines().count(), 1 + 9);
    }
}
