//! Minimal deterministic SVG line charts: axes, ticks, polylines, markers.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 72.0;
/// Room for category names on the y axis.
const LEFT_CATEGORIES: f64 = 170.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 52.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Markers,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

impl Series {
    pub fn line(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.into(), points, style: Style::Line }
    }

    pub fn markers(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.into(), points, style: Style::Markers }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Fixed labelled y ticks (categorical axes); numeric ticks otherwise.
    pub y_categories: Vec<(f64, String)>,
    pub log_x: bool,
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Axis { lo: 0.0, hi: 1.0 };
        }
        if hi - lo <= 1e-12 * (1.0 + lo.abs()) {
            let pad = 0.5 * (1.0 + lo.abs()) * 0.1;
            return Axis { lo: lo - pad, hi: hi + pad };
        }
        Axis { lo, hi }
    }

    fn ticks(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        let raw = span / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last).map(|k| k as f64 * step).collect()
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn tick_label(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.abs() >= 1e4 || x.abs() < 1e-3 {
        format!("{x:.1e}")
    } else {
        let s = format!("{x:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

impl Chart {
    pub fn render(&self) -> String {
        let tx = |x: f64| if self.log_x { x.log10() } else { x };
        let xs = Axis::fit(self.series.iter().flat_map(|s| s.points.iter().map(|p| tx(p.0))));
        let ys = Axis::fit(
            self.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).chain(self.y_categories.iter().map(|c| c.0)),
        );
        let left = if self.y_categories.is_empty() { LEFT } else { LEFT_CATEGORIES };
        let pw = WIDTH - left - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let px = |x: f64| left + (tx(x) - xs.lo) / (xs.hi - xs.lo) * pw;
        let py = |y: f64| TOP + (ys.hi - y) / (ys.hi - ys.lo) * ph;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            num(WIDTH / 2.0),
            esc(&self.title)
        );
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            num(left),
            num(pw),
            num(ph)
        );

        for t in xs.ticks() {
            let x = left + (t - xs.lo) / (xs.hi - xs.lo) * pw;
            let label = if self.log_x { format!("1e{}", t.round() as i64) } else { tick_label(t) };
            let _ = writeln!(
                out,
                r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/><text x="{0}" y="{3}" text-anchor="middle">{4}</text>"#,
                num(x),
                num(TOP + ph),
                num(TOP + ph + 5.0),
                num(TOP + ph + 18.0),
                esc(&label)
            );
        }
        let y_ticks: Vec<(f64, String)> = if self.y_categories.is_empty() {
            ys.ticks().into_iter().map(|t| (t, tick_label(t))).collect()
        } else {
            self.y_categories.clone()
        };
        for (t, label) in y_ticks {
            let y = py(t);
            let _ = writeln!(
                out,
                r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/><text x="{3}" y="{4}" text-anchor="end">{5}</text>"#,
                num(left - 5.0),
                num(y),
                num(left),
                num(left - 8.0),
                num(y + 4.0),
                esc(&label)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            num(left + pw / 2.0),
            num(HEIGHT - 12.0),
            esc(&self.x_label)
        );
        if self.y_categories.is_empty() {
            let _ = writeln!(
                out,
                r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
                num(TOP + ph / 2.0),
                esc(&self.y_label)
            );
        }

        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            match s.style {
                Style::Line => {
                    // non-finite points break the line
                    for run in s.points.split(|p| !(tx(p.0).is_finite() && p.1.is_finite())) {
                        if run.is_empty() {
                            continue;
                        }
                        let pts: Vec<String> =
                            run.iter().map(|p| format!("{},{}", num(px(p.0)), num(py(p.1)))).collect();
                        let _ = writeln!(
                            out,
                            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                            pts.join(" ")
                        );
                    }
                }
                Style::Markers => {
                    for p in s.points.iter().filter(|p| tx(p.0).is_finite() && p.1.is_finite()) {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#,
                            num(px(p.0)),
                            num(py(p.1))
                        );
                    }
                }
            }
            let ly = TOP + 14.0 + 16.0 * k as f64;
            let lx = left + pw - 150.0;
            let swatch = match s.style {
                Style::Line => format!(
                    r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="{color}" stroke-width="2"/>"#,
                    num(lx),
                    num(ly),
                    num(lx + 18.0)
                ),
                Style::Markers => format!(r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#, num(lx + 9.0), num(ly)),
            };
            let _ =
                writeln!(out, r#"{swatch}<text x="{}" y="{}">{}</text>"#, num(lx + 24.0), num(ly + 4.0), esc(&s.name));
        }
        out.push_str("</svg>\n");
        out
    }
}
