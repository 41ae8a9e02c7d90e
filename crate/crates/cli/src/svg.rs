//! Deterministic SVG 1.1 figures drawn to physical scale.
//!
//! Geometry is given in meters with `y` pointing up; the figure maps it to
//! millimetres on the page at a single scale factor and adds a scale bar.
//! Numbers are written with six significant digits so that identical inputs
//! always give identical bytes.

use std::fmt::Write as _;

/// Page width of every figure, millimetres.
pub const PAGE_WIDTH_MM: f64 = 180.0;
const MARGIN_MM: f64 = 8.0;
/// Space reserved under the drawing for the scale bar.
const SCALE_BAND_MM: f64 = 14.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Polyline(Vec<[f64; 2]>),
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    /// Marker of fixed on-page radius (mm).
    Dot {
        at: [f64; 2],
        radius_mm: f64,
    },
    Label {
        at: [f64; 2],
        text: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub id: String,
    pub stroke: String,
    pub stroke_width_mm: f64,
    pub fill: String,
    pub shapes: Vec<Shape>,
}

impl Layer {
    pub fn new(id: &str, stroke: &str, stroke_width_mm: f64) -> Self {
        Layer {
            id: id.to_string(),
            stroke: stroke.to_string(),
            stroke_width_mm,
            fill: "none".to_string(),
            shapes: Vec::new(),
        }
    }

    pub fn filled(mut self, fill: &str) -> Self {
        self.fill = fill.to_string();
        self
    }

    /// Adds a polyline, splitting it wherever a point is not finite.
    pub fn polyline(&mut self, points: impl IntoIterator<Item = [f64; 2]>) -> &mut Self {
        let mut run = Vec::new();
        for p in points {
            if p[0].is_finite() && p[1].is_finite() {
                run.push(p);
            } else if !run.is_empty() {
                self.push_run(std::mem::take(&mut run));
            }
        }
        if !run.is_empty() {
            self.push_run(run);
        }
        self
    }

    fn push_run(&mut self, run: Vec<[f64; 2]>) {
        if run.len() >= 2 {
            self.shapes.push(Shape::Polyline(run));
        }
    }

    pub fn segment(&mut self, a: [f64; 2], b: [f64; 2]) -> &mut Self {
        self.polyline([a, b])
    }

    pub fn circle(&mut self, center: [f64; 2], radius: f64) -> &mut Self {
        self.shapes.push(Shape::Circle { center, radius });
        self
    }

    pub fn dot(&mut self, at: [f64; 2], radius_mm: f64) -> &mut Self {
        if at[0].is_finite() && at[1].is_finite() {
            self.shapes.push(Shape::Dot { at, radius_mm });
        }
        self
    }

    pub fn label(&mut self, at: [f64; 2], text: &str) -> &mut Self {
        self.shapes.push(Shape::Label {
            at,
            text: text.to_string(),
        });
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SvgFigure {
    pub title: String,
    pub layers: Vec<Layer>,
}

/// Page placement of a figure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Placement {
    pub x_min: f64,
    pub y_max: f64,
    /// Millimetres per meter.
    pub scale: f64,
    pub width_mm: f64,
    pub height_mm: f64,
    pub bar_meters: f64,
}

impl Placement {
    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (
            MARGIN_MM + (p[0] - self.x_min) * self.scale,
            MARGIN_MM + (self.y_max - p[1]) * self.scale,
        )
    }
}

impl SvgFigure {
    pub fn new(title: &str) -> Self {
        SvgFigure {
            title: title.to_string(),
            layers: Vec::new(),
        }
    }

    pub fn push(&mut self, layer: Layer) -> &mut Self {
        self.layers.push(layer);
        self
    }

    /// Bounding box of all geometry as `(x_min, y_min, x_max, y_max)`.
    pub fn bounds(&self) -> Option<[f64; 4]> {
        let mut b = [
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        ];
        let mut grow = |p: [f64; 2], r: f64| {
            b[0] = b[0].min(p[0] - r);
            b[1] = b[1].min(p[1] - r);
            b[2] = b[2].max(p[0] + r);
            b[3] = b[3].max(p[1] + r);
        };
        for shape in self.layers.iter().flat_map(|l| &l.shapes) {
            match shape {
                Shape::Polyline(pts) => pts.iter().for_each(|&p| grow(p, 0.0)),
                Shape::Circle { center, radius } => grow(*center, *radius),
                Shape::Dot { at, .. } | Shape::Label { at, .. } => grow(*at, 0.0),
            }
        }
        (b[0] <= b[2]).then_some(b)
    }

    pub fn placement(&self) -> Placement {
        let [x0, y0, x1, y1] = self.bounds().unwrap_or([0.0, 0.0, 0.1, 0.0]);
        let span_x = (x1 - x0).max(1e-12);
        let span_y = y1 - y0;
        let drawable = PAGE_WIDTH_MM - 2.0 * MARGIN_MM;
        // Tall drawings are shrunk so the page stays at most square.
        let scale = (drawable / span_x).min(if span_y > 0.0 {
            drawable / span_y
        } else {
            f64::INFINITY
        });
        let width_mm = span_x * scale + 2.0 * MARGIN_MM;
        let height_mm = span_y * scale + 2.0 * MARGIN_MM + SCALE_BAND_MM;
        Placement {
            x_min: x0,
            y_max: y1,
            scale,
            width_mm,
            height_mm,
            bar_meters: nice_length(0.3 * (width_mm - 2.0 * MARGIN_MM) / scale),
        }
    }

    /// The complete document.
    pub fn to_svg(&self) -> String {
        let pl = self.placement();
        let mut s = String::new();
        s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}mm\" height=\"{h}mm\" viewBox=\"0 0 {w} {h}\">",
            w = num(pl.width_mm),
            h = num(pl.height_mm)
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(
            s,
            "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>",
            num(pl.width_mm),
            num(pl.height_mm)
        );
        for layer in &self.layers {
            let _ = writeln!(
                s,
                "<g id=\"{}\" stroke=\"{}\" stroke-width=\"{}\" fill=\"{}\">",
                escape(&layer.id),
                escape(&layer.stroke),
                num(layer.stroke_width_mm),
                escape(&layer.fill)
            );
            for shape in &layer.shapes {
                write_shape(&mut s, &pl, shape);
            }
            s.push_str("</g>\n");
        }
        write_scale_bar(&mut s, &pl);
        s.push_str("</svg>\n");
        s
    }
}

fn write_shape(s: &mut String, pl: &Placement, shape: &Shape) {
    match shape {
        Shape::Polyline(pts) => {
            s.push_str("<polyline points=\"");
            for (i, &p) in pts.iter().enumerate() {
                let (x, y) = pl.map(p);
                if i > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{},{}", num(x), num(y));
            }
            s.push_str("\"/>\n");
        }
        Shape::Circle { center, radius } => {
            let (x, y) = pl.map(*center);
            let _ = writeln!(
                s,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                num(x),
                num(y),
                num(radius * pl.scale)
            );
        }
        Shape::Dot { at, radius_mm } => {
            let (x, y) = pl.map(*at);
            let _ = writeln!(
                s,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                num(x),
                num(y),
                num(*radius_mm)
            );
        }
        Shape::Label { at, text } => {
            let (x, y) = pl.map(*at);
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"3\" stroke=\"none\" fill=\"black\">{}</text>",
                num(x),
                num(y),
                escape(text)
            );
        }
    }
}

fn write_scale_bar(s: &mut String, pl: &Placement) {
    let len_mm = pl.bar_meters * pl.scale;
    let x0 = MARGIN_MM;
    let y = pl.height_mm - MARGIN_MM - 2.0;
    let _ = writeln!(
        s,
        "<g id=\"scale-bar\" stroke=\"black\" stroke-width=\"0.4\" fill=\"none\" data-meters=\"{}\" data-mm-per-meter=\"{}\">",
        num(pl.bar_meters),
        num(pl.scale)
    );
    let _ = writeln!(
        s,
        "<polyline points=\"{},{} {},{}\"/>",
        num(x0),
        num(y),
        num(x0 + len_mm),
        num(y)
    );
    for x in [x0, x0 + len_mm] {
        let _ = writeln!(
            s,
            "<polyline points=\"{},{} {},{}\"/>",
            num(x),
            num(y - 1.5),
            num(x),
            num(y + 1.5)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"3\" stroke=\"none\" fill=\"black\">{}</text>",
        num(x0 + len_mm + 2.0),
        num(y + 1.0),
        escape(&length_label(pl.bar_meters))
    );
    s.push_str("</g>\n");
}

/// Largest 1, 2 or 5 times a power of ten not exceeding `max`.
pub fn nice_length(max: f64) -> f64 {
    let exp = max.log10().floor();
    let base = 10f64.powf(exp);
    let m = [5.0, 2.0, 1.0]
        .into_iter()
        .find(|&m| m * base <= max * (1.0 + 1e-12))
        .unwrap_or(1.0);
    // Round away representation noise such as 0.30000000000000004.
    let v = m * base;
    format!("{v:.12e}").parse().unwrap_or(v)
}

fn length_label(m: f64) -> String {
    let (value, unit) = if m >= 1.0 {
        (m, "m")
    } else if m >= 0.01 {
        (m * 100.0, "cm")
    } else if m >= 0.001 {
        (m * 1000.0, "mm")
    } else {
        (m * 1e6, "\u{b5}m")
    };
    format!("{} {unit}", num(value))
}

/// Six significant digits, trailing zeros dropped, never `-0`.
pub fn num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".to_string();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    let rounded: f64 = sci.parse().unwrap_or(v);
    let decimals = (5 - exp).max(0) as usize;
    let mut out = if (-5..=15).contains(&exp) {
        format!("{rounded:.decimals$}")
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    };
    if !out.contains('e') {
        out = trim_zeros(out);
    }
    if out == "-0" {
        out = "0".to_string();
    }
    out
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}
