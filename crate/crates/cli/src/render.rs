//! SVG bar chart of crew capacities.

use std::fmt::Write as _;

use restoreplan_core::{AllocationFile, CrewKind};

const COLORS: [&str; 4] = ["#1976d2", "#388e3c", "#f57c00", "#7b1fa2"];

pub fn render_allocation_svg(file: &AllocationFile) -> String {
    let (bar_w, gap, height, top, bottom) = (60.0, 30.0, 240.0, 30.0, 40.0);
    let max = file.capacities.iter().map(|r| r.persons).max().unwrap_or(0).max(1) as f64;
    let width = gap + CrewKind::ALL.len() as f64 * (bar_w + gap);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{}" font-family="sans-serif" font-size="12">"#,
        top + height + bottom
    );
    for (i, crew) in CrewKind::ALL.into_iter().enumerate() {
        let persons = file.capacity(crew);
        let h = height * persons as f64 / max;
        let x = gap + i as f64 * (bar_w + gap);
        let y = top + height - h;
        let _ = writeln!(out, r#"  <rect x="{x}" y="{y:.2}" width="{bar_w}" height="{h:.2}" fill="{}"/>"#, COLORS[i]);
        let _ = writeln!(out, r#"  <text x="{:.1}" y="{:.2}" text-anchor="middle">{persons}</text>"#, x + bar_w / 2.0, y - 4.0);
        let _ = writeln!(
            out,
            r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            x + bar_w / 2.0,
            top + height + 16.0,
            crew.name()
        );
    }
    out.push_str("</svg>\n");
    out
}
