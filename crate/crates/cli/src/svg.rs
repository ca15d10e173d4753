//! Scatter plots with a log2 lifespan axis, written as plain SVG.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

pub struct Curve {
    pub label: String,
    pub color: &'static str,
    /// `(x, lifespan)`, drawn in order.
    pub points: Vec<(f64, f64)>,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub points: Vec<(f64, f64)>,
    pub curves: Vec<Curve>,
}

/// Label for the tick at `2^k` years.
fn power_of_two_label(k: i32) -> String {
    if k >= 0 {
        format!("{}", 1u64 << k.min(62))
    } else {
        format!("1/{}", 1u64 << (-k).min(62))
    }
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 8.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * magnitude)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * magnitude)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(plot: &Plot) -> String {
    let all = plot
        .points
        .iter()
        .chain(plot.curves.iter().flat_map(|c| c.points.iter()))
        .filter(|(x, y)| x.is_finite() && y.is_finite() && *y > 0.0);
    let (mut x_lo, mut x_hi, mut k_lo, mut k_hi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        k_lo = k_lo.min(y.log2());
        k_hi = k_hi.max(y.log2());
    }
    if !x_lo.is_finite() {
        (x_lo, x_hi, k_lo, k_hi) = (0.0, 1.0, 0.0, 1.0);
    }
    if x_hi == x_lo {
        x_hi = x_lo + 1.0;
    }
    let (k_lo, k_hi) = (k_lo.floor() as i32, (k_hi.ceil() as i32).max(k_lo.floor() as i32 + 1));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + (f64::from(k_hi) - y.log2()) / f64::from(k_hi - k_lo) * plot_h;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, "<!-- spacelife {} -->", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(&plot.title)
    )
    .unwrap();

    for k in k_lo..=k_hi {
        let y = sy(f64::from(k).exp2());
        writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##,
            WIDTH - RIGHT
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            power_of_two_label(k)
        )
        .unwrap();
    }
    let step = nice_step(x_hi - x_lo);
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor()) as usize
    };
    let first = (x_lo / step).ceil() as i64;
    let last = (x_hi / step + 1e-9).floor() as i64;
    for n in first..=last {
        let tick = n as f64 * step;
        let x = sx(tick);
        writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#eee"/>"##,
            HEIGHT - BOTTOM
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{tick:.decimals$}</text>"#,
            HEIGHT - BOTTOM + 18.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 16.0,
        escape(&plot.x_label)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text transform="translate(18 {:.1}) rotate(-90)" text-anchor="middle">lifespan (years, log2 scale)</text>"#,
        TOP + plot_h / 2.0
    )
    .unwrap();

    for &(x, y) in plot.points.iter().filter(|(_, y)| *y > 0.0) {
        writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#333" fill-opacity="0.7"/>"##,
            sx(x),
            sy(y)
        )
        .unwrap();
    }
    for (i, curve) in plot.curves.iter().enumerate() {
        let path: Vec<String> = curve
            .points
            .iter()
            .filter(|(_, y)| *y > 0.0)
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            path.join(" "),
            curve.color
        )
        .unwrap();
        let ly = TOP + 16.0 + 16.0 * i as f64;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{}">{}</text>"#,
            LEFT + 10.0,
            curve.color,
            escape(&curve.label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
