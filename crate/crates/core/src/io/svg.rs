//! Static shape-space plot.
//!
//! Draws the unit disk with the `r = 1/2` circle dashed, bootstrap region
//! members shaded by the innermost level containing them, region hulls,
//! markers for the observed, median and extreme-`tau` shapes, a triangle
//! glyph for each marked shape and a legend.

use std::fmt::Write;

use super::report::AnalysisReport;
use crate::inference::ConfidenceRegion;
use crate::metrics::ShapeStatistics;
use crate::sampling::mean_configuration_from_shape;
use crate::shape::Group;

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    /// Disk radius in pixels.
    pub radius: f64,
    pub point_radius: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            radius: 200.0,
            point_radius: 1.2,
        }
    }
}

const LEVEL_COLORS: [&str; 4] = ["#08519c", "#6baed6", "#c6dbef", "#deebf7"];

struct Marker {
    label: &'static str,
    color: &'static str,
    stats: ShapeStatistics,
}

struct Frame {
    cx: f64,
    cy: f64,
    radius: f64,
}

impl Frame {
    fn map(&self, u: f64, v: f64) -> (f64, f64) {
        (self.cx + self.radius * u, self.cy - self.radius * v)
    }
}

fn markers(report: &AnalysisReport) -> Vec<Marker> {
    let mut out = vec![Marker {
        label: "observed",
        color: "#000000",
        stats: report.observed,
    }];
    // summaries of the widest region
    if let Some(region) = report.regions.last() {
        out.push(Marker {
            label: "median",
            color: "#2ca02c",
            stats: region.summary.median,
        });
        out.push(Marker {
            label: "max tau",
            color: "#d62728",
            stats: region.summary.max_tau,
        });
        out.push(Marker {
            label: "min tau",
            color: "#ff7f0e",
            stats: region.summary.min_tau,
        });
    }
    out
}

fn triangle_glyph(svg: &mut String, m: &Marker, x0: f64, y0: f64, size: f64) {
    let Ok(config) = mean_configuration_from_shape(m.stats.r, m.stats.phi, 2) else {
        return;
    };
    let pts: Vec<[f64; 2]> = Group::ALL
        .iter()
        .map(|g| {
            let l = config.landmark(*g);
            [l[0], l[1]]
        })
        .collect();
    // every landmark is within unit distance of the centroid
    let scale = 0.4 * size;
    let place = |p: [f64; 2]| (x0 + size / 2.0 + scale * p[0], y0 + size / 2.0 - scale * p[1]);
    let poly: Vec<String> = pts
        .iter()
        .map(|p| {
            let (x, y) = place(*p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        svg,
        r##"<rect x="{x0:.2}" y="{y0:.2}" width="{size:.2}" height="{size:.2}" fill="none" stroke="{}" stroke-width="1"/>"##,
        m.color
    );
    let _ = writeln!(
        svg,
        r##"<polygon points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"##,
        poly.join(" "),
        m.color
    );
    for (g, p) in Group::ALL.iter().zip(&pts) {
        let (x, y) = place(*p);
        let _ = writeln!(svg, r##"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{}"/>"##, m.color);
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif">{g:?}</text>"##,
            x + 3.0,
            y - 3.0
        );
    }
    let _ = writeln!(
        svg,
        r##"<text x="{x0:.2}" y="{:.2}" font-size="11" font-family="sans-serif">{} (tau = {:.3})</text>"##,
        y0 + size + 13.0,
        m.label,
        m.stats.tau
    );
}

/// Renders the report as an SVG 1.1 document.
///
/// `regions` should be the regions behind `report`, in the same
/// (ascending level) order; pass an empty slice to plot only the observed
/// shape.
pub fn render_shape_space_svg(report: &AnalysisReport, regions: &[ConfidenceRegion], opts: &SvgOptions) -> String {
    let margin = 30.0;
    let frame = Frame {
        cx: margin + opts.radius,
        cy: margin + opts.radius,
        radius: opts.radius,
    };
    let glyph = 110.0;
    let panel_x = 2.0 * (margin + opts.radius);
    let gap = 45.0;
    let width = panel_x + 2.0 * glyph + 2.0 * gap + 20.0;
    let height = (2.0 * (margin + opts.radius)).max(2.0 * (glyph + 30.0) + 2.0 * margin) + 70.0;

    let mut svg = String::new();
    let _ = writeln!(svg, r##"<?xml version="1.0" encoding="UTF-8"?>"##);
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"##
    );
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        svg,
        r##"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#000000" stroke-width="1.5"/>"##,
        frame.cx, frame.cy, opts.radius
    );
    let _ = writeln!(
        svg,
        r##"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#555555" stroke-width="1" stroke-dasharray="5,4"/>"##,
        frame.cx,
        frame.cy,
        opts.radius / 2.0
    );
    let (mx, my) = frame.map(0.5, 3f64.sqrt() / 2.0);
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif">B midpoint</text>"##,
        mx + 4.0,
        my - 4.0
    );

    // shade members by the innermost level that contains them
    if let Some(outer) = regions.last() {
        let mut shade = vec![regions.len() - 1; outer.cloud_size];
        for (li, cr) in regions.iter().enumerate().rev() {
            for m in &cr.members {
                shade[m.index] = li;
            }
        }
        let _ = writeln!(svg, r##"<g id="region-points">"##);
        for m in &outer.members {
            let (x, y) = frame.map(m.stats.u, m.stats.v);
            let color = LEVEL_COLORS[(regions.len() - 1 - shade[m.index]).min(LEVEL_COLORS.len() - 1)];
            let _ = writeln!(
                svg,
                r##"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="{color}"/>"##,
                opts.point_radius
            );
        }
        let _ = writeln!(svg, "</g>");
        for cr in regions {
            if cr.hull.len() >= 2 {
                let pts: Vec<String> = cr
                    .hull
                    .iter()
                    .map(|p| {
                        let (x, y) = frame.map(p[0], p[1]);
                        format!("{x:.2},{y:.2}")
                    })
                    .collect();
                let _ = writeln!(
                    svg,
                    r##"<polygon points="{}" fill="none" stroke="#08306b" stroke-width="0.8"/>"##,
                    pts.join(" ")
                );
            }
        }
    }

    let marks = markers(report);
    for m in &marks {
        let (x, y) = frame.map(m.stats.u, m.stats.v);
        let _ = writeln!(
            svg,
            r##"<circle class="marker" cx="{x:.2}" cy="{y:.2}" r="4" fill="{}" stroke="#ffffff" stroke-width="1"><title>{}</title></circle>"##,
            m.color, m.label
        );
    }

    let _ = writeln!(svg, r##"<g id="glyphs">"##);
    for (i, m) in marks.iter().enumerate() {
        let x0 = panel_x + 20.0 + (i % 2) as f64 * (glyph + gap);
        let y0 = margin + (i / 2) as f64 * (glyph + 30.0);
        triangle_glyph(&mut svg, m, x0, y0, glyph);
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r##"<g id="legend" font-size="11" font-family="sans-serif">"##);
    let mut ly = height - 60.0;
    let lx = panel_x + 20.0;
    for m in &marks {
        let _ = writeln!(svg, r##"<circle cx="{lx:.2}" cy="{:.2}" r="4" fill="{}"/>"##, ly - 4.0, m.color);
        let _ = writeln!(svg, r##"<text x="{:.2}" y="{ly:.2}">{}</text>"##, lx + 10.0, m.label);
        ly += 14.0;
    }
    let mut lx2 = lx + 110.0;
    let mut ly2 = height - 60.0;
    for (li, cr) in regions.iter().enumerate() {
        let color = LEVEL_COLORS[(regions.len() - 1 - li).min(LEVEL_COLORS.len() - 1)];
        let _ = writeln!(svg, r##"<rect x="{lx2:.2}" y="{:.2}" width="8" height="8" fill="{color}"/>"##, ly2 - 8.0);
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{ly2:.2}">{:.0}% region</text>"##,
            lx2 + 12.0,
            cr.level * 100.0
        );
        ly2 += 14.0;
        if ly2 > height - 4.0 {
            ly2 = height - 60.0;
            lx2 += 90.0;
        }
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    svg
}
