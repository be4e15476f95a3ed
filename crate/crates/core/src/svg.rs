//! Plain SVG figures on a fixed 1000×1000 canvas showing `[-1.1, 1.1]^2`.

use std::fmt::Write as _;

use crate::branches::{BranchSet, Direction};
use crate::dynamics::PlanarField;
use crate::numfmt::fmt_num;
use crate::polycore::UniPoly;

const SIZE: f64 = 1000.0;
const WINDOW: f64 = 1.1;

fn to_px(z: [f64; 2]) -> (f64, f64) {
    let sx = (z[0] + WINDOW) / (2.0 * WINDOW) * SIZE;
    let sy = (WINDOW - z[1]) / (2.0 * WINDOW) * SIZE;
    (sx, sy)
}

struct Canvas {
    body: String,
}

impl Canvas {
    fn new() -> Self {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000" width="1000" height="1000">"#
        );
        let _ = writeln!(
            body,
            r##"<rect x="0" y="0" width="1000" height="1000" fill="#ffffff"/>"##
        );
        Self { body }
    }

    fn line(&mut self, a: [f64; 2], b: [f64; 2], style: &str) {
        let (x1, y1) = to_px(a);
        let (x2, y2) = to_px(b);
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
            fmt_num(x1),
            fmt_num(y1),
            fmt_num(x2),
            fmt_num(y2)
        );
    }

    fn rect(&mut self, lo: [f64; 2], hi: [f64; 2], style: &str) {
        let (x1, y1) = to_px([lo[0], hi[1]]);
        let (x2, y2) = to_px([hi[0], lo[1]]);
        let _ = writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" {style}/>"#,
            fmt_num(x1),
            fmt_num(y1),
            fmt_num(x2 - x1),
            fmt_num(y2 - y1)
        );
    }

    /// Polyline split wherever it leaves the window.
    fn polyline(&mut self, pts: &[[f64; 2]], style: &str) {
        let inside = |z: &[f64; 2]| z[0].abs() <= WINDOW && z[1].abs() <= WINDOW;
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, body: &mut String| {
            if run.len() > 1 {
                let _ = writeln!(
                    body,
                    r#"<polyline points="{}" fill="none" {style}/>"#,
                    run.join(" ")
                );
            }
            run.clear();
        };
        for z in pts {
            if inside(z) {
                let (x, y) = to_px(*z);
                run.push(format!("{},{}", fmt_num(x), fmt_num(y)));
            } else {
                flush(&mut run, &mut self.body);
            }
        }
        flush(&mut run, &mut self.body);
    }

    fn axes(&mut self) {
        let style = r##"stroke="#999999" stroke-width="1""##;
        self.line([-WINDOW, 0.0], [WINDOW, 0.0], style);
        self.line([0.0, -WINDOW], [0.0, WINDOW], style);
        self.rect(
            [-1.0, -1.0],
            [1.0, 1.0],
            r##"fill="none" stroke="#cccccc" stroke-dasharray="6,4""##,
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

/// Direction field on a 21×21 grid plus the given closed orbits.
pub fn phase_portrait<F: PlanarField + ?Sized>(field: &F, orbits: &[Vec<[f64; 2]>]) -> String {
    let mut c = Canvas::new();
    c.axes();
    let n = 21;
    let len = 0.035;
    for a in 0..n {
        for b in 0..n {
            let z = [
                -1.0 + 2.0 * a as f64 / (n - 1) as f64,
                -1.0 + 2.0 * b as f64 / (n - 1) as f64,
            ];
            let v = field.eval(z);
            let norm = v[0].hypot(v[1]);
            if !(norm > 1e-12) || !norm.is_finite() {
                continue;
            }
            let tip = [z[0] + len * v[0] / norm, z[1] + len * v[1] / norm];
            c.line(z, tip, r##"stroke="#4a6fa5" stroke-width="1.5""##);
        }
    }
    for orbit in orbits {
        c.polyline(orbit, r##"stroke="#c0392b" stroke-width="3""##);
    }
    c.finish()
}

/// Branch rectangles shaded by the sign of `lambda`, with lifted orbits.
pub fn branch_grid(set: &BranchSet, orbits: &[Vec<[f64; 2]>]) -> String {
    let mut c = Canvas::new();
    for bi in &set.intervals {
        for bj in &set.intervals {
            let positive =
                (bi.direction == Direction::Increasing) == (bj.direction == Direction::Increasing);
            let fill = if positive { "#d6eaf8" } else { "#fadbd8" };
            c.rect(
                [bi.lo, bj.lo],
                [bi.hi, bj.hi],
                &format!(r##"fill="{fill}" stroke="#555555" stroke-width="1""##),
            );
        }
    }
    c.axes();
    for orbit in orbits {
        c.polyline(orbit, r##"stroke="#c0392b" stroke-width="2.5""##);
    }
    c.finish()
}

/// Graph of `p` with its full branches shaded.
pub fn polynomial_graph(p: &UniPoly, set: &BranchSet) -> String {
    let mut c = Canvas::new();
    for b in &set.intervals {
        let lo = b.lo.max(-WINDOW);
        let hi = b.hi.min(WINDOW);
        if lo < hi {
            c.rect(
                [lo, -1.0],
                [hi, 1.0],
                r##"fill="#e8f6e8" stroke="#7dbb7d" stroke-width="1""##,
            );
        }
    }
    c.axes();
    let coeffs = p.to_f64_coeffs();
    let pts: Vec<[f64; 2]> = (0..=1000)
        .map(|k| {
            let x = -WINDOW + 2.0 * WINDOW * k as f64 / 1000.0;
            [x, coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)]
        })
        .collect();
    c.polyline(&pts, r##"stroke="#1f3b73" stroke-width="2.5""##);
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branches::cheb_branches;
    use crate::polycore::chebyshev;

    #[test]
    fn window_maps_to_canvas() {
        assert_eq!(to_px([-1.1, 1.1]), (0.0, 0.0));
        assert_eq!(to_px([0.0, 0.0]), (500.0, 500.0));
        assert_eq!(to_px([1.1, -1.1]), (1000.0, 1000.0));
    }

    #[test]
    fn graph_shades_each_branch() {
        let set = cheb_branches(6).unwrap();
        let svg = polynomial_graph(&chebyshev(6), &set);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("#e8f6e8").count(), 6);
        assert_eq!(svg, polynomial_graph(&chebyshev(6), &set));
    }

    #[test]
    fn grid_has_m_squared_cells() {
        let set = cheb_branches(3).unwrap();
        let svg = branch_grid(&set, &[]);
        let cells = svg.matches("#d6eaf8").count() + svg.matches("#fadbd8").count();
        assert_eq!(cells, 9);
        assert_eq!(svg.matches("#fadbd8").count(), 4);
    }
}
