//! Minimal standalone SVG charts with fixed-precision coordinates, so equal
//! inputs give byte-identical files.

use std::fmt::Write;

const W: f64 = 720.0;
const H: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

pub const PALETTE: [&str; 8] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub color: String,
    pub dashed: bool,
}

#[derive(Debug, Clone)]
pub struct Marker {
    pub x: f64,
    pub y: f64,
    pub color: String,
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
    pub markers: Vec<Marker>,
    /// Extra legend lines drawn under the series names.
    pub notes: Vec<String>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= 6.0).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Chart {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_y: false,
            series: Vec::new(),
            markers: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn ty(&self, y: f64) -> Option<f64> {
        if self.log_y {
            (y > 0.0 && y.is_finite()).then(|| y.log10())
        } else {
            y.is_finite().then_some(y)
        }
    }

    fn bounds(&self) -> ((f64, f64), (f64, f64)) {
        let pts = self.series.iter().flat_map(|s| s.points.iter().copied()).chain(self.markers.iter().map(|m| (m.x, m.y)));
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in pts {
            let Some(y) = self.ty(y) else { continue };
            if !x.is_finite() {
                continue;
            }
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return ((0.0, 1.0), (0.0, 1.0));
        }
        let pad = |a: f64, b: f64| if b > a { (a, b) } else { (a - 0.5, b + 0.5) };
        let (y0, y1) = pad(y0, y1);
        let m = 0.05 * (y1 - y0);
        (pad(x0, x1), (y0 - m, y1 + m))
    }

    pub fn render(&self) -> String {
        let ((x0, x1), (y0, y1)) = self.bounds();
        let pw = W - LEFT - RIGHT;
        let ph = H - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#, LEFT + pw / 2.0, escape(&self.title));
        let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
        for t in ticks(x0, x1) {
            let x = sx(t);
            let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, TOP + ph, TOP + ph + 5.0);
            let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, label(t));
        }
        for t in ticks(y0, y1) {
            let y = sy(t);
            let text = if self.log_y { format!("1e{}", label(t)) } else { label(t) };
            let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0);
            let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##, LEFT + pw);
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{text}</text>"#, LEFT - 8.0, y + 4.0);
        }
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, H - 15.0, escape(&self.x_label));
        let _ = writeln!(
            s,
            r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );
        for m in &self.markers {
            if let Some(y) = self.ty(m.y) {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{}"/>"#, sx(m.x), sy(y), m.color);
            }
        }
        for sr in &self.series {
            let pts: Vec<String> = sr
                .points
                .iter()
                .filter_map(|&(x, y)| self.ty(y).map(|y| format!("{:.2},{:.2}", sx(x), sy(y))))
                .collect();
            let dash = if sr.dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.8"{dash}/>"#, pts.join(" "), sr.color);
        }
        let lx = W - RIGHT + 15.0;
        let mut ly = TOP + 10.0;
        for sr in &self.series {
            let dash = if sr.dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let _ = writeln!(s, r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="1.8"{dash}/>"#, lx + 24.0, sr.color);
            let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, lx + 30.0, ly + 4.0, escape(&sr.name));
            ly += 18.0;
        }
        for n in &self.notes {
            let _ = writeln!(s, r#"<text x="{lx:.1}" y="{:.1}">{}</text>"#, ly + 4.0, escape(n));
            ly += 18.0;
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Linear blue-to-red ramp over `[0, 1]`.
pub fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (40.0 + 200.0 * t).round() as u8;
    let b = (220.0 - 180.0 * t).round() as u8;
    format!("#{r:02x}50{b:02x}")
}
