//! ASCII and SVG pictures of Newton diagrams.

use std::collections::HashSet;
use std::fmt::Write;

use crate::newton::{NewtonDiagram, Point};

fn extent(d: &NewtonDiagram, support: &[Point]) -> (u32, u32) {
    let v = d.vertices();
    let w = support
        .iter()
        .map(|p| p.0)
        .chain(v.iter().map(|p| p.0))
        .max()
        .unwrap_or(0)
        + 1;
    let h = support
        .iter()
        .map(|p| p.1)
        .chain(v.iter().map(|p| p.1))
        .max()
        .unwrap_or(0)
        + 1;
    (w, h)
}

fn on_face(d: &NewtonDiagram, p: Point) -> bool {
    d.faces().iter().any(|f| {
        let (a, b) = (f.start, f.end);
        let cross = (b.0 as i64 - a.0 as i64) * (p.1 as i64 - a.1 as i64)
            - (b.1 as i64 - a.1 as i64) * (p.0 as i64 - a.0 as i64);
        cross == 0 && p.0 >= a.0 && p.0 <= b.0
    })
}

/// `o` vertex, `+` lattice point on a compact face, `*` other support
/// point, `.` inside the Newton region, blank below it.
pub fn ascii(d: &NewtonDiagram, support: &[Point]) -> String {
    let (w, h) = extent(d, support);
    let verts: HashSet<Point> = d.vertices().iter().copied().collect();
    let supp: HashSet<Point> = support.iter().copied().collect();
    let lw = (h.saturating_sub(1)).to_string().len();
    let mut out = String::new();
    for b in (0..h).rev() {
        let _ = write!(out, "{b:>lw$} |");
        for a in 0..w {
            let c = if verts.contains(&(a, b)) {
                'o'
            } else if on_face(d, (a, b)) {
                '+'
            } else if supp.contains(&(a, b)) {
                '*'
            } else if d.contains((a, b)) {
                '.'
            } else {
                ' '
            };
            out.push(' ');
            out.push(c);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "{:>lw$} +{}", "", "--".repeat(w as usize));
    let _ = write!(out, "{:>lw$}  ", "");
    for a in 0..w {
        let _ = write!(out, "{:>2}", a % 10);
    }
    out.push('\n');
    out
}

const UNIT: u32 = 40;
const MARGIN: u32 = 40;

pub fn svg(d: &NewtonDiagram, support: &[Point]) -> String {
    let (w, h) = extent(d, support);
    let (w, h) = (w + 1, h + 1);
    let width = 2 * MARGIN + (w - 1) * UNIT;
    let height = 2 * MARGIN + (h - 1) * UNIT;
    let px = |a: u32| MARGIN + a * UNIT;
    let py = |b: u32| height - MARGIN - b * UNIT;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        s,
        r##"<rect width="{width}" height="{height}" fill="#ffffff"/>"##
    );
    for a in 0..w {
        let _ = writeln!(
            s,
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#dddddd"/>"##,
            px(a),
            py(0),
            py(h - 1)
        );
    }
    for b in 0..h {
        let _ = writeln!(
            s,
            r##"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}" stroke="#dddddd"/>"##,
            py(b),
            px(0),
            px(w - 1)
        );
    }
    let _ = writeln!(
        s,
        r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#000000"/>"##,
        px(0),
        py(0),
        py(h - 1)
    );
    let _ = writeln!(
        s,
        r##"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}" stroke="#000000"/>"##,
        py(0),
        px(0),
        px(w - 1)
    );
    for a in 0..w {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{a}</text>"#,
            px(a),
            py(0) + 16
        );
    }
    for b in 0..h {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{b}</text>"#,
            px(0) - 6,
            py(b) + 4
        );
    }
    let v = d.vertices();
    let mut pts: Vec<String> = Vec::new();
    let (first, last) = (v[0], v[v.len() - 1]);
    pts.push(format!("{},{}", px(first.0), py(h - 1)));
    pts.extend(v.iter().map(|&(a, b)| format!("{},{}", px(a), py(b))));
    pts.push(format!("{},{}", px(w - 1), py(last.1)));
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##,
        pts.join(" ")
    );
    let mut supp: Vec<Point> = support.to_vec();
    supp.sort_unstable();
    supp.dedup();
    for (a, b) in supp {
        let _ = writeln!(
            s,
            r##"<rect x="{}" y="{}" width="6" height="6" fill="#888888"/>"##,
            px(a) - 3,
            py(b) - 3
        );
    }
    for &(a, b) in v {
        let _ = writeln!(
            s,
            r##"<circle cx="{}" cy="{}" r="4" fill="#c0392b"/>"##,
            px(a),
            py(b)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12">({a},{b})</text>"#,
            px(a) + 6,
            py(b) - 6
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dg(v: &[(u32, u32)]) -> NewtonDiagram {
        NewtonDiagram::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ascii_a3() {
        let s = ascii(&dg(&[(0, 2), (4, 0)]), &[]);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "2 | o . . . .");
        assert_eq!(lines[1], "1 |     + . .");
        assert_eq!(lines[2], "0 |         o");
    }

    #[test]
    fn ascii_marks_vertices() {
        let s = ascii(&dg(&[(0, 5), (2, 1), (3, 0)]), &[(1, 4)]);
        assert_eq!(s.matches('o').count(), 3);
        assert!(s.contains('*'));
    }

    #[test]
    fn svg_is_deterministic() {
        let d = dg(&[(0, 5), (2, 1), (3, 0)]);
        let a = svg(&d, &[(1, 4)]);
        assert_eq!(a, svg(&d, &[(1, 4)]));
        assert!(a.starts_with("<svg"));
        assert!(a.contains("(2,1)"));
    }
}
