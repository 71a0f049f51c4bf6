//! Static SVG drawings of a design: first subarray as red stars, second as blue dots,
//! Voronoi cells as black outlines and an optional coarray panel.
//!
//! Output depends only on the design and options, so identical inputs give identical bytes.
//! Hexagonal (`D = -3`) designs are drawn rotated 90° counterclockwise.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::design::{contiguous_core, cross_difference, ArrayDesign, Variant};
use crate::lattice::{voronoi_polygon, Lattice, LatticePoint};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RenderOptions {
    pub show_voronoi: bool,
    pub coarray: bool,
}

const UNIT: f64 = 18.0;
const MARGIN: f64 = 24.0;
const GAP: f64 = 40.0;

struct Panel {
    title: String,
    polygons: Vec<Vec<(f64, f64)>>,
    stars: Vec<(f64, f64)>,
    dots: Vec<(f64, f64)>,
    points: Vec<((f64, f64), bool)>,
}

impl Panel {
    fn extent(&self) -> (f64, f64, f64, f64) {
        let all = self
            .polygons
            .iter()
            .flatten()
            .chain(&self.stars)
            .chain(&self.dots)
            .chain(self.points.iter().map(|(p, _)| p));
        let mut e = (-1.0f64, -1.0f64, 1.0f64, 1.0f64);
        for &(x, y) in all {
            e = (e.0.min(x), e.1.min(y), e.2.max(x), e.3.max(y));
        }
        (e.0 - 1.0, e.1 - 1.0, e.2 + 1.0, e.3 + 1.0)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn star_path(cx: f64, cy: f64, r: f64) -> String {
    let mut d = String::new();
    for k in 0..10 {
        let ang = std::f64::consts::PI * (k as f64) / 5.0 - std::f64::consts::FRAC_PI_2;
        let rad = if k % 2 == 0 { r } else { r * 0.45 };
        let cmd = if k == 0 { 'M' } else { 'L' };
        let _ = write!(
            d,
            "{cmd}{},{} ",
            fmt_num(cx + rad * ang.cos()),
            fmt_num(cy + rad * ang.sin())
        );
    }
    d.push('Z');
    d
}

fn place(design: &ArrayDesign) -> impl Fn((f64, f64)) -> (f64, f64) {
    let rotate = design.ring.d() == -3;
    move |(x, y)| if rotate { (-y, x) } else { (x, y) }
}

fn array_panel(design: &ArrayDesign, opts: &RenderOptions) -> Panel {
    let ring = design.ring;
    let tr = place(design);
    let pt = |p: &LatticePoint| tr(p.cartesian_f64(&ring));
    let mut polygons = Vec::new();
    if opts.show_voronoi {
        let amb = Lattice::ambient(ring);
        let mut scales = vec![design.p];
        if design.variant == Variant::Hscrt {
            scales.push(2 * design.p);
        }
        for k in scales {
            let cell = voronoi_polygon(&amb.scaled(k).expect("small scale"));
            polygons.push(cell.into_iter().map(&tr).collect());
        }
    }
    Panel {
        title: format!(
            "{} array, D = {}, p = {}, {} sensors",
            design.variant.as_str(),
            ring.d(),
            design.p,
            design.sensor_count()
        ),
        polygons,
        stars: design.subarray1.iter().map(pt).collect(),
        dots: design.subarray2.iter().map(pt).collect(),
        points: Vec::new(),
    }
}

fn coarray_panel(design: &ArrayDesign, opts: &RenderOptions) -> Panel {
    let ring = design.ring;
    let tr = place(design);
    let diff = cross_difference(design);
    let core: BTreeSet<LatticePoint> = if design.variant == Variant::Hscrt {
        contiguous_core(&ring, design.p)
            .unwrap_or_default()
            .into_iter()
            .collect()
    } else {
        BTreeSet::new()
    };
    let mut polygons = Vec::new();
    if opts.show_voronoi {
        let cell = voronoi_polygon(&Lattice::ambient(ring).scaled(design.p).expect("small p"));
        polygons.push(cell.into_iter().map(&tr).collect());
    }
    Panel {
        title: format!("cross-difference coarray, {} distinct lags", diff.len()),
        polygons,
        stars: Vec::new(),
        dots: Vec::new(),
        points: diff
            .entries
            .keys()
            .map(|p| (tr(p.cartesian_f64(&ring)), core.contains(p)))
            .collect(),
    }
}

/// Renders the design as an SVG 1.1 document.
pub fn render_svg(design: &ArrayDesign, opts: &RenderOptions) -> String {
    let mut panels = vec![array_panel(design, opts)];
    if opts.coarray {
        panels.push(coarray_panel(design, opts));
    }
    let extents: Vec<_> = panels.iter().map(Panel::extent).collect();
    let widths: Vec<f64> = extents.iter().map(|e| (e.2 - e.0) * UNIT).collect();
    let height = extents
        .iter()
        .map(|e| (e.3 - e.1) * UNIT)
        .fold(0.0, f64::max);
    let total_w = widths.iter().sum::<f64>() + GAP * (panels.len() - 1) as f64 + 2.0 * MARGIN;
    let total_h = height + 2.0 * MARGIN + 20.0;

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        fmt_num(total_w),
        fmt_num(total_h),
        fmt_num(total_w),
        fmt_num(total_h)
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");

    let mut x0 = MARGIN;
    for (panel, (ext, w)) in panels.iter().zip(extents.iter().zip(&widths)) {
        let map =
            |(x, y): (f64, f64)| (x0 + (x - ext.0) * UNIT, MARGIN + 20.0 + (ext.3 - y) * UNIT);
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            fmt_num(x0),
            fmt_num(MARGIN + 8.0),
            escape(&panel.title)
        );
        for poly in &panel.polygons {
            let pts: Vec<String> = poly
                .iter()
                .map(|&p| {
                    let (x, y) = map(p);
                    format!("{},{}", fmt_num(x), fmt_num(y))
                })
                .collect();
            let _ = writeln!(
                s,
                "<polygon class=\"voronoi\" points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
                pts.join(" ")
            );
        }
        for &(p, in_core) in &panel.points {
            let (x, y) = map(p);
            let (class, fill) = if in_core {
                ("coarray core", "#2ca02c")
            } else {
                ("coarray", "#7f7f7f")
            };
            let _ = writeln!(
                s,
                "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{fill}\"/>",
                fmt_num(x),
                fmt_num(y)
            );
        }
        for &p in &panel.dots {
            let (x, y) = map(p);
            let _ = writeln!(
                s,
                "<circle class=\"sensor2\" cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"blue\"/>",
                fmt_num(x),
                fmt_num(y)
            );
        }
        for &p in &panel.stars {
            let (x, y) = map(p);
            let _ = writeln!(
                s,
                "<path class=\"sensor1\" d=\"{}\" fill=\"red\"/>",
                star_path(x, y, 6.0)
            );
        }
        x0 += w + GAP;
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{crt_array, hscrt_array};
    use crate::ring::ring_from_d;

    #[test]
    fn deterministic() {
        let design = hscrt_array(&ring_from_d(-3).unwrap(), 7).unwrap();
        let opts = RenderOptions {
            show_voronoi: true,
            coarray: true,
        };
        assert_eq!(render_svg(&design, &opts), render_svg(&design, &opts));
    }

    #[test]
    fn markers_and_cells() {
        let design = crt_array(&ring_from_d(-3).unwrap(), 7).unwrap();
        let svg = render_svg(
            &design,
            &RenderOptions {
                show_voronoi: true,
                coarray: false,
            },
        );
        assert_eq!(svg.matches("class=\"sensor1\"").count(), 7);
        assert_eq!(svg.matches("class=\"sensor2\"").count(), 7);
        let poly = svg
            .lines()
            .find(|l| l.contains("class=\"voronoi\""))
            .unwrap();
        let pts = poly
            .split("points=\"")
            .nth(1)
            .unwrap()
            .split('"')
            .next()
            .unwrap();
        assert_eq!(pts.split(' ').count(), 6);
    }

    #[test]
    fn coarray_panel_core() {
        let design = hscrt_array(&ring_from_d(-1).unwrap(), 13).unwrap();
        let svg = render_svg(
            &design,
            &RenderOptions {
                show_voronoi: false,
                coarray: true,
            },
        );
        assert_eq!(svg.matches("class=\"coarray core\"").count(), 169);
        assert!(!svg.contains("class=\"voronoi\""));
    }

    #[test]
    fn hexagonal_designs_are_rotated() {
        // The cell of 7A₂ has vertices on the x-axis after a quarter turn.
        let design = crt_array(&ring_from_d(-3).unwrap(), 7).unwrap();
        let amb = Lattice::ambient(design.ring);
        let tr = place(&design);
        let cell: Vec<_> = voronoi_polygon(&amb.scaled(7).unwrap())
            .into_iter()
            .map(tr)
            .collect();
        assert!(cell.iter().any(|&(x, y)| y.abs() < 1e-9 && x > 0.0));
    }
}
