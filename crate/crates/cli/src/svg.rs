//! Minimal SVG line plots.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Draw markers instead of a connected line.
    pub scatter: bool,
}

impl Series {
    pub fn line(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points, scatter: false }
    }

    pub fn scatter(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points, scatter: true }
    }
}

#[derive(Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Shaded x-interval.
    pub window: Option<(f64, f64)>,
    pub hline: Option<(String, f64)>,
    /// Force the lower-left corner to the origin.
    pub from_origin: bool,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    fn frame(&self) -> Frame {
        let mut xs: Vec<f64> = self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
        let mut ys: Vec<f64> = self.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).collect();
        if let Some((_, y)) = &self.hline {
            ys.push(*y);
        }
        if self.from_origin {
            xs.push(0.0);
            ys.push(0.0);
        }
        let lo = |v: &[f64]| v.iter().copied().filter(|x| x.is_finite()).fold(f64::INFINITY, f64::min);
        let hi = |v: &[f64]| v.iter().copied().filter(|x| x.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        let (mut x0, mut x1, mut y0, mut y1) = (lo(&xs), hi(&xs), lo(&ys), hi(&ys));
        if !x0.is_finite() {
            (x0, x1) = (0.0, 1.0);
        }
        if !y0.is_finite() {
            (y0, y1) = (0.0, 1.0);
        }
        let pad = |a: f64, b: f64| if b > a { (b - a) * 0.05 } else { a.abs().max(1.0) * 0.5 };
        let (px, py) = (pad(x0, x1), pad(y0, y1));
        let x0 = if self.from_origin { x0 } else { x0 - px };
        let y0 = if self.from_origin { y0 } else { y0 - py };
        Frame { x0, x1: x1 + px, y0, y1: y1 + py }
    }

    pub fn render(&self) -> String {
        let f = self.frame();
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(&self.title));
        if let Some((a, b)) = self.window {
            let (xa, xb) = (f.px(a), f.px(b));
            let _ = writeln!(
                s,
                r##"<rect x="{xa:.2}" y="{MARGIN}" width="{:.2}" height="{:.2}" fill="#ffd54f" fill-opacity="0.3"/>"##,
                (xb - xa).max(1.0),
                HEIGHT - 2.0 * MARGIN
            );
        }
        // Axes and ticks.
        let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            s,
            r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
        );
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let (x, y) = (f.x0 + t * (f.x1 - f.x0), f.y0 + t * (f.y1 - f.y0));
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
                f.px(x),
                bottom + 16.0,
                tick(x)
            );
            let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, left - 6.0, f.py(y) + 4.0, tick(y));
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 12.0, escape(&self.x_label));
        let _ = writeln!(
            s,
            r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        if let Some((label, y)) = &self.hline {
            let py = f.py(*y);
            let _ = writeln!(s, r#"<line x1="{left}" y1="{py:.2}" x2="{right}" y2="{py:.2}" stroke="gray" stroke-dasharray="4 3"/>"#);
            let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end" fill="gray">{}</text>"#, right, py - 4.0, escape(label));
        }
        for (i, series) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let pts: Vec<(f64, f64)> = series.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).copied().collect();
            if series.scatter {
                for (x, y) in &pts {
                    let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="{color}"/>"#, f.px(*x), f.py(*y));
                }
            } else if !pts.is_empty() {
                let d: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", f.px(*x), f.py(*y))).collect();
                let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, d.join(" "));
            }
            let ly = top + 14.0 * (i as f64 + 1.0);
            let _ = writeln!(s, r#"<rect x="{}" y="{:.2}" width="10" height="3" fill="{color}"/>"#, right - 150.0, ly - 4.0);
            let _ = writeln!(s, r#"<text x="{}" y="{ly:.2}">{}</text>"#, right - 136.0, escape(&series.label));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// Boundary of a 2-D staircase with minimal generators sorted by the first
/// coordinate, cut off at `reach` on both axes.
pub fn staircase(gens: &[(f64, f64)], reach: f64) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(2 * gens.len() + 2);
    if let Some(&(a, _)) = gens.first() {
        pts.push((a, reach));
    }
    for (i, &(a, b)) in gens.iter().enumerate() {
        if i > 0 {
            pts.push((a, gens[i - 1].1));
        }
        pts.push((a, b));
    }
    if let Some(&(_, b)) = gens.last() {
        pts.push((reach, b));
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_corners() {
        let s = staircase(&[(0.0, 2.0), (1.0, 1.0), (3.0, 0.0)], 4.0);
        assert_eq!(s, vec![(0.0, 4.0), (0.0, 2.0), (1.0, 2.0), (1.0, 1.0), (3.0, 1.0), (3.0, 0.0), (4.0, 0.0)]);
    }

    #[test]
    fn ticks_are_trimmed() {
        assert_eq!(tick(2.5), "2.5");
        assert_eq!(tick(3.0), "3");
        assert_eq!(tick(-0.0001), "0");
    }

    #[test]
    fn escapes_labels() {
        let svg = Plot { title: "a < b & c".into(), ..Plot::default() }.render();
        assert!(svg.contains("a &lt; b &amp; c"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
