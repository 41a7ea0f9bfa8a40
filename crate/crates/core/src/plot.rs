//! Static SVG rendering of lattice paths and slope paths.

use std::fmt::Write;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::geom::GapVector;
use crate::rational::{format_rational_short, Rational};
use crate::seq::{bbs_to_path, BitSequence};
use crate::vertex::slope_vector;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 50.0;

/// A path to draw: node values at `x = 0, 1, …`, with a label per node.
#[derive(Clone, Debug)]
pub struct PlotPath {
    pub values: Vec<Rational>,
    pub title: String,
    /// Dashed verticals at these x positions.
    pub guides: Vec<usize>,
}

impl PlotPath {
    pub fn from_bits(b: &BitSequence) -> Self {
        Self {
            values: bbs_to_path(b).heights().iter().map(|&h| Rational::from_integer(h.into())).collect(),
            title: format!("height path of {b}"),
            guides: Vec::new(),
        }
    }

    pub fn from_vector(v: &GapVector) -> Self {
        Self {
            values: slope_vector(v).values,
            title: format!("slope path of {v}"),
            guides: Vec::new(),
        }
    }

    /// Guides at `x = 2` and `x = len - 2`, the span of the original vector inside an α-padded one.
    pub fn with_padding_guides(mut self) -> Self {
        let last = self.values.len() - 1;
        if last >= 4 {
            self.guides = vec![2, last - 2];
        }
        self
    }
}

fn floor(r: &Rational) -> i64 {
    r.floor().to_integer().to_i64().unwrap_or(0)
}

fn ceil(r: &Rational) -> i64 {
    r.ceil().to_integer().to_i64().unwrap_or(0)
}

fn approx(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(0.0) / r.denom().to_f64().unwrap_or(1.0)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `path` as a self-contained SVG document. Output depends only on the input.
pub fn render_svg(path: &PlotPath) -> String {
    let n = path.values.len().saturating_sub(1).max(1) as f64;
    let mut y_min = path.values.iter().map(floor).min().unwrap_or(0).min(0);
    let mut y_max = path.values.iter().map(ceil).max().unwrap_or(0).max(0);
    if y_min == y_max {
        y_max += 1;
        y_min -= 1;
    }
    let span = (y_max - y_min) as f64;
    let sx = |x: f64| MARGIN + x * (WIDTH - 2.0 * MARGIN) / n;
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_min as f64) * (HEIGHT - 2.0 * MARGIN) / span;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&path.title));
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    let _ = writeln!(out, r##"<g stroke="#dddddd" stroke-width="1">"##);
    for x in 0..=n as usize {
        let px = sx(x as f64);
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}"/>"#,
            sy(y_min as f64),
            sy(y_max as f64)
        );
    }
    for y in y_min..=y_max {
        let py = sy(y as f64);
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}"/>"#, sx(0.0), sx(n));
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r##"<g stroke="#000000" stroke-width="1.5">"##);
    let _ = writeln!(out, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, sx(0.0), sy(0.0), sx(n), sy(0.0));
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        sx(0.0),
        sy(y_min as f64),
        sx(0.0),
        sy(y_max as f64)
    );
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r##"<g font-family="monospace" font-size="11" fill="#555555">"##);
    let step = (n as usize).div_ceil(40).max(1);
    for x in (0..=n as usize).step_by(step) {
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x}</text>"#, sx(x as f64), HEIGHT - MARGIN + 16.0);
    }
    for y in y_min..=y_max {
        if (y - y_min).is_multiple_of(&(((span as i64) / 20).max(1))) {
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{y}</text>"#, MARGIN - 6.0, sy(y as f64) + 4.0);
        }
    }
    let _ = writeln!(out, "</g>");

    for &g in &path.guides {
        let px = sx(g as f64);
        let _ = writeln!(
            out,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#cc3333" stroke-width="1.5" stroke-dasharray="6 4"/>"##,
            sy(y_min as f64),
            sy(y_max as f64)
        );
    }

    let points: Vec<String> = path
        .values
        .iter()
        .enumerate()
        .map(|(x, y)| format!("{:.2},{:.2}", sx(x as f64), sy(approx(y))))
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#1f4e99" stroke-width="2.5"/>"##,
        points.join(" ")
    );

    let _ = writeln!(out, r##"<g font-family="monospace" font-size="12" fill="#1f4e99">"##);
    for (x, y) in path.values.iter().enumerate() {
        let (px, py) = (sx(x as f64), sy(approx(y)));
        let _ = writeln!(out, r#"<circle cx="{px:.2}" cy="{py:.2}" r="3.5"/>"#);
        let _ = writeln!(
            out,
            r#"<text class="node" x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            py - 8.0,
            format_rational_short(y)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational_list;

    fn labels(svg: &str) -> Vec<String> {
        svg.lines()
            .filter(|l| l.contains(r#"class="node""#))
            .map(|l| {
                let body = l.strip_suffix("</text>").unwrap();
                body.rsplit_once('>').unwrap().1.to_string()
            })
            .collect()
    }

    #[test]
    fn single_bit_is_a_segment() {
        let svg = render_svg(&PlotPath::from_bits(&"1".parse().unwrap()));
        assert_eq!(labels(&svg), ["0", "1"]);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn vector_labels_are_path_values() {
        let v = GapVector::new(parse_rational_list("3/4,1/3,1/2,2/3,1").unwrap()).unwrap();
        let svg = render_svg(&PlotPath::from_vector(&v));
        assert_eq!(labels(&svg), ["0", "1/2", "5/6", "5/6", "1/2", "3/2"]);
    }

    #[test]
    fn output_is_deterministic_and_guided() {
        let b: BitSequence = "11011001111".parse().unwrap();
        let p = PlotPath::from_bits(&b).with_padding_guides();
        assert_eq!(p.guides, vec![2, 9]);
        let svg = render_svg(&p);
        assert_eq!(svg, render_svg(&p));
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
        assert!(svg.contains(r#"viewBox="0 0 800 500""#));
    }
}
