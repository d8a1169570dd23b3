//! Minimal log-log line chart for rate curves.

use std::fmt::Write;

use crate::harness::RateCurve;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const PAD: f64 = 56.0;

/// Renders the positive points of `curve` on log-log axes.
pub fn curve_svg(curve: &RateCurve, title: &str) -> String {
    let pts: Vec<(f64, f64)> =
        curve.points.iter().filter(|c| c.estimate > 0.0).map(|c| ((c.t as f64).log10(), c.estimate.log10())).collect();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(svg, r#"<path d="M{PAD} {PAD} V{} H{}" stroke="black" fill="none"/>"#, HEIGHT - PAD, WIDTH - PAD);
    if !pts.is_empty() {
        let (x0, x1) = span(pts.iter().map(|p| p.0));
        let (y0, y1) = span(pts.iter().map(|p| p.1));
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * PAD);
        let sy = |y: f64| HEIGHT - PAD - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * PAD);
        let mut d = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2} {:.2} ", if i == 0 { 'M' } else { 'L' }, sx(x), sy(y));
        }
        let _ = writeln!(svg, r#"<path d="{}" stroke="steelblue" stroke-width="2" fill="none"/>"#, d.trim_end());
        for &(x, y) in &pts {
            let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, sx(x), sy(y));
        }
        let _ = writeln!(
            svg,
            r#"<text x="{PAD}" y="{}" font-family="sans-serif" font-size="11">t = 10^{x0:.2}</text>"#,
            HEIGHT - PAD + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">t = 10^{x1:.2}</text>"#,
            WIDTH - PAD,
            HEIGHT - PAD + 18.0
        );
        let _ =
            writeln!(svg, r#"<text x="4" y="{}" font-family="sans-serif" font-size="11">10^{y1:.2}</text>"#, PAD + 4.0);
        let _ = writeln!(
            svg,
            r#"<text x="4" y="{}" font-family="sans-serif" font-size="11">10^{y0:.2}</text>"#,
            HEIGHT - PAD
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-9 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::CurvePoint;

    #[test]
    fn renders_points() {
        let curve = RateCurve {
            p: 2.0,
            points: vec![
                CurvePoint { t: 10, estimate: 0.5, stderr: 0.0, reps: 1 },
                CurvePoint { t: 100, estimate: 0.0, stderr: 0.0, reps: 1 },
                CurvePoint { t: 1000, estimate: 0.05, stderr: 0.0, reps: 1 },
            ],
        };
        let svg = curve_svg(&curve, "a < b");
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("a &lt; b"));
    }
}
