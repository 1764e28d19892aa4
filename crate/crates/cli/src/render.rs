//! Deterministic SVG snapshots of one planning cycle.

use std::fmt::Write;

use ganav_core::grid::{GridIndex, OccupancyGrid};
use ganav_core::sim::CycleView;
use ganav_core::Point;

const SCALE: f64 = 50.0;
const LEGEND: f64 = 28.0;

struct Canvas {
    min: Point,
    max: Point,
    out: String,
}

impl Canvas {
    fn x(&self, x: f64) -> f64 {
        (x - self.min.x) * SCALE
    }

    fn y(&self, y: f64) -> f64 {
        (self.max.y - y) * SCALE + LEGEND
    }

    fn polyline(&mut self, pts: &[Point], stroke: &str, width: f64, closed: bool, extra: &str) {
        if pts.len() < 2 {
            return;
        }
        let coords: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", self.x(p.x), self.y(p.y))).collect();
        let tag = if closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            self.out,
            r#"<{tag} points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"{extra}/>"#,
            coords.join(" ")
        );
    }

    fn circle(&mut self, c: Point, r: f64, fill: &str, stroke: &str) {
        let _ = writeln!(
            self.out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="{fill}" stroke="{stroke}"/>"#,
            self.x(c.x),
            self.y(c.y),
            r * SCALE
        );
    }
}

fn ring_points(grid: &OccupancyGrid, ring: &[GridIndex]) -> Vec<Point> {
    ring.iter().map(|&c| grid.cell_center(c)).collect()
}

/// Renders the view: occupancy, raw boundaries (grey), max-convex
/// boundaries (green), Voronoi samples (blue), goal lines (red), candidate
/// trajectories (orange), the selected band (black), robot and pedestrians.
pub fn render_svg(view: &CycleView<'_>) -> String {
    let grid = &view.maps.local;
    let plan = view.plan;
    let (min, max) = (grid.world_min(), grid.world_max());
    let mut cv = Canvas { min, max, out: String::new() };
    let (w, h) = ((max.x - min.x) * SCALE, (max.y - min.y) * SCALE + LEGEND);
    let _ = writeln!(cv.out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#);
    let _ = writeln!(cv.out, r#"<rect x="0" y="0" width="{w:.0}" height="{h:.0}" fill="white"/>"#);
    let _ = writeln!(
        cv.out,
        r#"<text x="6" y="18" font-family="monospace" font-size="13">cycle {} t={:.2}s  grey: raw boundary  green: max-convex  blue: voronoi  red: goal lines  orange: candidates  black: selected band</text>"#,
        view.cycle, view.time
    );

    // Occupied cells merged into horizontal runs.
    let res = grid.resolution();
    let _ = writeln!(cv.out, r##"<g fill="#9a9a9a" stroke="none">"##);
    for y in 0..grid.height() as i32 {
        let mut x = 0;
        while x < grid.width() as i32 {
            if !grid.is_occupied(GridIndex::new(x, y)) {
                x += 1;
                continue;
            }
            let start = x;
            while x < grid.width() as i32 && grid.is_occupied(GridIndex::new(x, y)) {
                x += 1;
            }
            let p = grid.origin() + Point::new(start as f64 * res, (y + 1) as f64 * res);
            let _ = writeln!(
                cv.out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
                cv.x(p.x),
                cv.y(p.y),
                (x - start) as f64 * res * SCALE,
                res * SCALE
            );
        }
    }
    let _ = writeln!(cv.out, "</g>");

    let pg = &plan.planning_grid;
    for g in &plan.groups {
        let _ = writeln!(cv.out, r#"<g id="group-{}">"#, g.id);
        cv.polyline(&ring_points(pg, &g.raw_boundary), "#606060", 1.0, true, r#" class="raw""#);
        if !g.convex_boundary.is_empty() {
            cv.polyline(&ring_points(pg, &g.convex_boundary), "#1a9a2a", 2.0, true, r#" class="convex""#);
        }
        let _ = writeln!(cv.out, "</g>");
    }

    let _ = writeln!(cv.out, r##"<g fill="#2060e0" stroke="none" class="voronoi">"##);
    for s in &plan.voronoi.samples {
        let p = pg.cell_center(s.cell);
        let _ = writeln!(cv.out, r#"<circle cx="{:.2}" cy="{:.2}" r="1.2"/>"#, cv.x(p.x), cv.y(p.y));
    }
    let _ = writeln!(cv.out, "</g>");

    for l in &plan.lines {
        let pts = ring_points(pg, &l.cells);
        if pts.len() == 1 {
            cv.circle(pts[0], 0.08, "#e02020", "none");
        } else {
            cv.polyline(&pts, "#e02020", 4.0, false, r#" class="goal-line""#);
        }
    }
    for c in &plan.candidates {
        cv.polyline(&c.waypoints, "#f08c00", 1.5, false, r#" class="candidate""#);
    }
    if let Some(b) = plan.selected_band() {
        let pts: Vec<Point> = b.poses.iter().map(|p| p.position()).collect();
        cv.polyline(&pts, "#000000", 2.5, false, r#" class="band""#);
    }
    for p in view.pedestrians {
        cv.circle(p.position, p.radius, "#f4c0c0", "#a03030");
    }
    let r = view.robot;
    cv.circle(r.pose.position(), r.radius, "#b0d0ff", "#2040a0");
    let tip = r.pose.position() + r.pose.heading() * r.radius;
    cv.polyline(&[r.pose.position(), tip], "#2040a0", 2.0, false, "");
    cv.out.push_str("</svg>\n");
    cv.out
}
