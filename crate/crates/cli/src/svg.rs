//! Smith-chart SVG rendering.
//!
//! The reflection-coefficient unit disc maps to a 500×500 px viewport: centre
//! (250, 250), radius 240 px, imaginary axis pointing up. Output is
//! byte-for-byte deterministic for a given plot.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use lna_core::{Complex, Region, SmithCircle};
use thiserror::Error;

pub const VIEWPORT: f64 = 500.0;
pub const CENTER_PX: f64 = 250.0;
pub const RADIUS_PX: f64 = 240.0;

const R_GUIDES: [f64; 5] = [0.2, 0.5, 1.0, 2.0, 5.0];
const X_GUIDES: [f64; 5] = [0.2, 0.5, 1.0, 2.0, 5.0];

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("duplicate plot label {0:?}")]
    DuplicateLabel(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotCircle {
    pub circle: SmithCircle,
    pub label: String,
    pub stable_side: Option<Region>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub at: Complex,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SmithPlotSpec {
    pub circles: Vec<PlotCircle>,
    pub points: Vec<PlotPoint>,
    pub show_unit_chart: bool,
}

impl SmithPlotSpec {
    pub fn circle(
        &mut self,
        circle: SmithCircle,
        label: impl Into<String>,
        stable_side: Option<Region>,
    ) {
        self.circles.push(PlotCircle {
            circle,
            label: label.into(),
            stable_side,
        });
    }

    pub fn point(&mut self, at: Complex, label: impl Into<String>) {
        self.points.push(PlotPoint {
            at,
            label: label.into(),
        });
    }

    fn validate(&self) -> Result<(), PlotError> {
        let mut seen = HashSet::new();
        let labels = self
            .circles
            .iter()
            .map(|c| &c.label)
            .chain(self.points.iter().map(|p| &p.label));
        for label in labels {
            if !seen.insert(label.as_str()) {
                return Err(PlotError::DuplicateLabel(label.clone()));
            }
        }
        Ok(())
    }
}

/// Γ-plane point to SVG pixel coordinates.
pub fn to_viewport(g: Complex) -> (f64, f64) {
    (CENTER_PX + RADIUS_PX * g.re, CENTER_PX - RADIUS_PX * g.im)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn px(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn write_guides(out: &mut String) {
    out.push_str("<g class=\"guides\" fill=\"none\" stroke=\"#c8c8c8\" stroke-width=\"0.75\" clip-path=\"url(#chart)\">\n");
    for r in R_GUIDES {
        let (cx, cy) = to_viewport(Complex::new(r / (1.0 + r), 0.0));
        let _ = writeln!(
            out,
            "<circle class=\"r-guide\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            px(cx),
            px(cy),
            px(RADIUS_PX / (1.0 + r))
        );
    }
    for x in X_GUIDES {
        for sign in [1.0, -1.0] {
            let (cx, cy) = to_viewport(Complex::new(1.0, sign / x));
            let _ = writeln!(
                out,
                "<circle class=\"x-guide\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                px(cx),
                px(cy),
                px(RADIUS_PX / x)
            );
        }
    }
    let _ = writeln!(
        out,
        "<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
        px(CENTER_PX - RADIUS_PX),
        px(CENTER_PX),
        px(CENTER_PX + RADIUS_PX),
        px(CENTER_PX)
    );
    out.push_str("</g>\n");
}

fn write_stable_side(out: &mut String, c: &PlotCircle) {
    let (cx, cy) = to_viewport(c.circle.center);
    let r = RADIUS_PX * c.circle.radius;
    match c.stable_side {
        Some(Region::Inside) => {
            let _ = writeln!(
                out,
                "<circle class=\"stable-region\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#808080\" fill-opacity=\"0.2\" stroke=\"none\" clip-path=\"url(#chart)\"/>",
                px(cx),
                px(cy),
                px(r)
            );
        }
        Some(Region::Outside) => {
            // Even-odd fill of the chart's bounding square minus the circle.
            let (x0, x1) = (CENTER_PX - RADIUS_PX, CENTER_PX + RADIUS_PX);
            let _ = writeln!(
                out,
                "<path class=\"stable-region\" fill=\"#808080\" fill-opacity=\"0.2\" fill-rule=\"evenodd\" stroke=\"none\" clip-path=\"url(#chart)\" d=\"M{} {}H{}V{}H{}Z M{} {}a{} {} 0 1 0 {} 0a{} {} 0 1 0 {} 0Z\"/>",
                px(x0),
                px(x0),
                px(x1),
                px(x1),
                px(x0),
                px(cx - r),
                px(cy),
                px(r),
                px(r),
                px(2.0 * r),
                px(r),
                px(r),
                px(-2.0 * r)
            );
        }
        None => {}
    }
}

/// Renders the plot to an SVG document string.
pub fn to_svg(spec: &SmithPlotSpec) -> Result<String, PlotError> {
    spec.validate()?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{v}\" height=\"{v}\" viewBox=\"0 0 {v} {v}\">",
        v = VIEWPORT
    );
    out.push_str("<defs>\n");
    let _ = writeln!(
        out,
        "<clipPath id=\"viewport\"><rect x=\"0\" y=\"0\" width=\"{v}\" height=\"{v}\"/></clipPath>",
        v = VIEWPORT
    );
    let _ = writeln!(
        out,
        "<clipPath id=\"chart\"><circle cx=\"{c}\" cy=\"{c}\" r=\"{r}\"/></clipPath>",
        c = px(CENTER_PX),
        r = px(RADIUS_PX)
    );
    out.push_str("</defs>\n");
    let _ = writeln!(
        out,
        "<rect width=\"{v}\" height=\"{v}\" fill=\"white\"/>",
        v = VIEWPORT
    );

    for c in &spec.circles {
        write_stable_side(&mut out, c);
    }
    if spec.show_unit_chart {
        write_guides(&mut out);
        let _ = writeln!(
            out,
            "<circle class=\"unit-circle\" cx=\"{c}\" cy=\"{c}\" r=\"{r}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
            c = px(CENTER_PX),
            r = px(RADIUS_PX)
        );
    }
    out.push_str("<g clip-path=\"url(#viewport)\">\n");
    for c in &spec.circles {
        let (cx, cy) = to_viewport(c.circle.center);
        let _ = writeln!(
            out,
            "<circle class=\"smith-circle\" data-label=\"{l}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.25\"><title>{l}</title></circle>",
            px(cx),
            px(cy),
            px(RADIUS_PX * c.circle.radius),
            l = escape(&c.label)
        );
    }
    for p in &spec.points {
        let (cx, cy) = to_viewport(p.at);
        let _ = writeln!(
            out,
            "<circle class=\"marker\" data-label=\"{l}\" cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#c0392b\"/>",
            px(cx),
            px(cy),
            l = escape(&p.label)
        );
        let _ = writeln!(
            out,
            "<text class=\"marker-label\" x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            px(cx + 6.0),
            px(cy - 6.0),
            escape(&p.label)
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

pub fn render_smith_svg(spec: &SmithPlotSpec, out_path: &Path) -> Result<(), PlotError> {
    let svg = to_svg(spec)?;
    std::fs::write(out_path, svg).map_err(|source| PlotError::Io {
        path: out_path.display().to_string(),
        source,
    })
}
