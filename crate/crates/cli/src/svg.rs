//! Minimal static SVG charts with deterministic output.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series { name: name.into(), points }
    }
}

pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(title))
        .unwrap();
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.1e}")
    } else {
        format!("{:.3}", v).trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

impl LineChart {
    pub fn render(&self) -> String {
        let transform = |y: f64| if self.log_y { y.max(1e-300).log10() } else { y };
        let (x0, x1) = bounds(self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
        let (y0, y1) = bounds(self.series.iter().flat_map(|s| s.points.iter().map(|p| transform(p.1))));
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| TOP + plot_h - (transform(y) - y0) / (y1 - y0) * plot_h;

        let mut out = String::new();
        header(&mut out, &self.title);
        writeln!(out, r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#)
            .unwrap();
        for k in 0..=5 {
            let f = k as f64 / 5.0;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let px = LEFT + f * plot_w;
            let py = TOP + plot_h - f * plot_h;
            let ylabel = if self.log_y { format!("1e{}", fmt_tick(yv)) } else { fmt_tick(yv) };
            writeln!(
                out,
                r#"<line x1="{px:.2}" y1="{}" x2="{px:.2}" y2="{}" stroke="black"/>"#,
                TOP + plot_h,
                TOP + plot_h + 5.0
            )
            .unwrap();
            writeln!(
                out,
                r#"<text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
                TOP + plot_h + 18.0,
                fmt_tick(xv)
            )
            .unwrap();
            writeln!(out, r#"<line x1="{}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/>"#, LEFT - 5.0)
                .unwrap();
            writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{ylabel}</text>"#, LEFT - 8.0, py + 4.0).unwrap();
        }
        writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="16" y="{0:.2}" text-anchor="middle" transform="rotate(-90 16 {0:.2})">{1}</text>"#,
            TOP + plot_h / 2.0,
            escape(&self.y_label)
        )
        .unwrap();
        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{}"/>"#, pts.join(" "))
                .unwrap();
            let ly = TOP + 12.0 + 18.0 * k as f64;
            let lx = WIDTH - RIGHT + 12.0;
            writeln!(
                out,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/>"#,
                lx + 20.0
            )
            .unwrap();
            writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&s.name)).unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Grid of counts with rows and columns labelled; darker means larger.
pub fn heatmap(
    title: &str,
    row_label: &str,
    col_label: &str,
    rows: &[usize],
    cols: &[usize],
    value: impl Fn(usize, usize) -> usize,
) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let cw = plot_w / cols.len().max(1) as f64;
    let ch = plot_h / rows.len().max(1) as f64;
    let max = rows.iter().flat_map(|&r| cols.iter().map(move |&c| (r, c))).map(|(r, c)| value(r, c)).max().unwrap_or(0);
    for (ri, &r) in rows.iter().enumerate() {
        for (ci, &c) in cols.iter().enumerate() {
            let v = value(r, c);
            let f = if max == 0 { 0.0 } else { v as f64 / max as f64 };
            let shade = (255.0 - 200.0 * f).round() as u8;
            let (x, y) = (LEFT + ci as f64 * cw, TOP + ri as f64 * ch);
            writeln!(
                out,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{cw:.2}" height="{ch:.2}" fill="rgb({shade},{shade},255)" stroke="white"/>"#
            )
            .unwrap();
            let ink = if f > 0.6 { "white" } else { "black" };
            writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" fill="{ink}">{v}</text>"#,
                x + cw / 2.0,
                y + ch / 2.0 + 4.0
            )
            .unwrap();
        }
        writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{r}</text>"#,
            LEFT - 8.0,
            TOP + (ri as f64 + 0.5) * ch + 4.0
        )
        .unwrap();
    }
    for (ci, &c) in cols.iter().enumerate() {
        writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{c}</text>"#,
            LEFT + (ci as f64 + 0.5) * cw,
            TOP + plot_h + 18.0
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(col_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="16" y="{0:.2}" text-anchor="middle" transform="rotate(-90 16 {0:.2})">{1}</text>"#,
        TOP + plot_h / 2.0,
        escape(row_label)
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}
