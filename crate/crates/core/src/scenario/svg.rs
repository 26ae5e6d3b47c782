//! SVG overlay of solved routes.
//!
//! One `<polyline>` per solved route variant: turntable variants solid,
//! no-turntable variants dashed, both in the route's colour. Reverse points,
//! turntables, dump points and entry/exit points are drawn as circles and
//! bearing ticks. With a calibration the drawing is in image pixels so it
//! lies over the site image; otherwise one unit is one meter, north up.

use std::fmt::Write as _;

use super::calibration::PixelTransform;
use super::model::{bearing_to_heading, Pose, Scenario};
use super::solve::{ManoeuvreRecord, ResultSet};

const PALETTE: [&str; 8] = [
    "#d62728", "#2ca02c", "#e6b800", "#9467bd", "#1f77b4", "#ff7f0e", "#17becf", "#8c564b",
];
const MARGIN: f64 = 20.0;

struct Frame {
    transform: Option<PixelTransform>,
}

impl Frame {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        match &self.transform {
            Some(t) => {
                let p = t.to_pixel(x, y);
                (p[0], p[1])
            }
            None => (x, -y),
        }
    }

    /// Pixels per meter.
    fn scale(&self) -> f64 {
        self.transform.map_or(1.0, |t| 1.0 / t.meters_per_px)
    }
}

#[derive(Default)]
struct Bounds {
    min: (f64, f64),
    max: (f64, f64),
    empty: bool,
}

impl Bounds {
    fn new() -> Self {
        Self {
            min: (f64::INFINITY, f64::INFINITY),
            max: (f64::NEG_INFINITY, f64::NEG_INFINITY),
            empty: true,
        }
    }

    fn add(&mut self, (x, y): (f64, f64)) {
        self.min = (self.min.0.min(x), self.min.1.min(y));
        self.max = (self.max.0.max(x), self.max.1.max(y));
        self.empty = false;
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick(out: &mut String, frame: &Frame, pose: &Pose, class: &str, color: &str) {
    let (x, y) = frame.px(pose.x, pose.y);
    let h = bearing_to_heading(pose.bearing_deg);
    let len = 12.0;
    let (x2, y2) = (x + len * h.cos(), y - len * h.sin());
    let _ = writeln!(
        out,
        r#"  <circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="4" fill="{color}"/>"#
    );
    let _ = writeln!(
        out,
        r#"  <line class="{class}" x1="{x:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="2"/>"#
    );
}

pub fn render_svg(scenario: &Scenario, results: &ResultSet) -> String {
    let frame = Frame {
        transform: scenario.calibration.and_then(|c| c.transform().ok()),
    };

    let mut bounds = Bounds::new();
    let mut body = String::new();

    for (i, route) in results.routes.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let title = format!("{} via {}", route.pair_label, route.dump_label);
        for (variant, class, dash) in [
            (&route.turntable, "turntable", ""),
            (&route.no_turntable, "no-turntable", r#" stroke-dasharray="6 4""#),
        ] {
            if variant.polyline.is_empty() {
                continue;
            }
            let mut points = String::new();
            for p in &variant.polyline {
                let q = frame.px(p.x, p.y);
                bounds.add(q);
                if !points.is_empty() {
                    points.push(' ');
                }
                let _ = write!(points, "{:.2},{:.2}", q.0, q.1);
            }
            let _ = writeln!(
                body,
                r#"  <polyline class="route {class}" data-route="{}" points="{points}" fill="none" stroke="{color}" stroke-width="2"{dash}><title>{} ({class})</title></polyline>"#,
                route.route_id,
                escape(&title),
            );
            match &variant.manoeuvre {
                Some(ManoeuvreRecord::Reverse { reverse_point, .. }) => {
                    let (x, y) = frame.px(reverse_point.x, reverse_point.y);
                    let _ = writeln!(
                        body,
                        r#"  <circle class="cusp" cx="{x:.2}" cy="{y:.2}" r="5" fill="white" stroke="{color}" stroke-width="2"/>"#
                    );
                }
                Some(ManoeuvreRecord::Turntable { center, diameter_m, .. }) => {
                    let (x, y) = frame.px(center.x, center.y);
                    let r = 0.5 * diameter_m * frame.scale();
                    let _ = writeln!(
                        body,
                        r##"  <circle class="turntable" cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="none" stroke="#333" stroke-width="1.5"/>"##
                    );
                }
                None => {}
            }
        }
    }

    for pair in &scenario.entry_exit_pairs {
        tick(&mut body, &frame, &pair.entry, "entry", "#555");
        tick(&mut body, &frame, &pair.exit, "exit", "#999");
        bounds.add(frame.px(pair.entry.x, pair.entry.y));
        bounds.add(frame.px(pair.exit.x, pair.exit.y));
    }
    for dump in &scenario.dump_points {
        tick(&mut body, &frame, &dump.pose, "dump", "#000");
        bounds.add(frame.px(dump.pose.x, dump.pose.y));
    }

    if bounds.empty {
        bounds.add((0.0, 0.0));
    }
    let (x0, y0) = (bounds.min.0 - MARGIN, bounds.min.1 - MARGIN);
    let (w, h) = (
        bounds.max.0 - bounds.min.0 + 2.0 * MARGIN,
        bounds.max.1 - bounds.min.1 + 2.0 * MARGIN,
    );

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.2} {y0:.2} {w:.2} {h:.2}" width="{w:.0}" height="{h:.0}">"#
    );
    if let (Some(t), Some(image)) = (&frame.transform, &scenario.image_ref) {
        let _ = writeln!(
            out,
            r#"  <image href="{}" x="0" y="0" height="{:.2}"/>"#,
            escape(image),
            t.image_height_px
        );
    }
    out.push_str(&body);
    out.push_str("</svg>\n");
    out
}
