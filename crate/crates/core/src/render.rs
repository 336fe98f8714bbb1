//! SVG line charts of character arcs.
//!
//! Output is plain text with fixed decimal precision and alphabetically
//! sorted attributes, so identical arcs render to identical bytes.

use std::fmt::Write;

use thiserror::Error;

use crate::arcs::{ExtremumKind, Role};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("nothing to plot: both series are empty")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marker {
    pub role: Role,
    /// Position in that role's series.
    pub index: usize,
    pub kind: ExtremumKind,
}

/// Data for one chart: smoothed values per role indexed by event ordinal.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArcPlot {
    pub title: String,
    pub actor: Vec<f64>,
    pub experiencer: Vec<f64>,
    pub markers: Vec<Marker>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgStyle {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    /// Decimal places for coordinates.
    pub precision: usize,
    pub actor_color: &'static str,
    pub experiencer_color: &'static str,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            width: 720.0,
            height: 400.0,
            margin: 56.0,
            precision: 2,
            actor_color: "#1f4e9c",
            experiencer_color: "#c0392b",
        }
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

struct Svg {
    out: String,
    precision: usize,
}

impl Svg {
    fn num(&self, v: f64) -> String {
        let s = format!("{:.*}", self.precision, v);
        // avoid "-0.00"
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            s.trim_start_matches('-').to_owned()
        } else {
            s
        }
    }

    fn element(&mut self, name: &str, attrs: &mut [(&str, String)], body: Option<&str>) {
        attrs.sort_by(|a, b| a.0.cmp(b.0));
        self.out.push('<');
        self.out.push_str(name);
        for (k, v) in attrs.iter() {
            let _ = write!(self.out, " {k}=\"{}\"", escape(v));
        }
        match body {
            Some(text) => {
                let _ = writeln!(self.out, ">{}</{name}>", escape(text));
            }
            None => self.out.push_str("/>\n"),
        }
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, size: u32, content: &str) {
        let (x, y) = (self.num(x), self.num(y));
        self.element(
            "text",
            &mut [
                ("x", x),
                ("y", y),
                ("font-family", "sans-serif".into()),
                ("font-size", size.to_string()),
                ("text-anchor", anchor.into()),
            ],
            Some(content),
        );
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) {
        let mut attrs = [
            ("x1", self.num(x1)),
            ("y1", self.num(y1)),
            ("x2", self.num(x2)),
            ("y2", self.num(y2)),
            ("stroke", stroke.to_owned()),
            ("stroke-width", "1".into()),
        ];
        self.element("line", &mut attrs, None);
    }
}

/// Renders the actor series in blue and the experiencer series in red, with
/// the event ordinal on x and the smoothed circumstance on y. Extremum
/// markers are labelled A, B, C... in order of position.
pub fn render_arc_svg(plot: &ArcPlot, style: &SvgStyle) -> Result<String, RenderError> {
    if plot.actor.is_empty() && plot.experiencer.is_empty() {
        return Err(RenderError::Empty);
    }
    let values = plot.actor.iter().chain(&plot.experiencer);
    let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if hi - lo < 1e-12 {
        lo -= 1.0;
        hi += 1.0;
    }
    let longest = plot.actor.len().max(plot.experiencer.len());
    let m = style.margin;
    let (w, h) = (style.width - 2.0 * m, style.height - 2.0 * m);
    let x_of = |i: usize| {
        if longest <= 1 {
            m + w / 2.0
        } else {
            m + w * i as f64 / (longest - 1) as f64
        }
    };
    let y_of = |v: f64| m + h * (hi - v) / (hi - lo);

    let mut svg = Svg {
        out: String::new(),
        precision: style.precision,
    };
    let (width, height) = (svg.num(style.width), svg.num(style.height));
    let _ = writeln!(
        svg.out,
        "<svg height=\"{height}\" viewBox=\"0 0 {width} {height}\" width=\"{width}\" xmlns=\"http://www.w3.org/2000/svg\">"
    );
    svg.element(
        "rect",
        &mut [
            ("x", "0".into()),
            ("y", "0".into()),
            ("width", width.clone()),
            ("height", height.clone()),
            ("fill", "#ffffff".into()),
        ],
        None,
    );
    svg.text(style.width / 2.0, m / 2.0, "middle", 16, &plot.title);

    // axes
    svg.line(m, m, m, m + h, "#333333");
    svg.line(m, m + h, m + w, m + h, "#333333");
    if lo < 0.0 && hi > 0.0 {
        let y0 = y_of(0.0);
        let mut attrs = [
            ("x1", svg.num(m)),
            ("y1", svg.num(y0)),
            ("x2", svg.num(m + w)),
            ("y2", svg.num(y0)),
            ("stroke", "#bbbbbb".to_owned()),
            ("stroke-dasharray", "4 4".into()),
            ("stroke-width", "1".into()),
        ];
        svg.element("line", &mut attrs, None);
    }
    let (hi_label, lo_label) = (svg.num(hi), svg.num(lo));
    svg.text(m - 6.0, y_of(hi) + 4.0, "end", 11, &hi_label);
    svg.text(m - 6.0, y_of(lo) + 4.0, "end", 11, &lo_label);
    svg.text(m, m + h + 16.0, "middle", 11, "1");
    if longest > 1 {
        svg.text(m + w, m + h + 16.0, "middle", 11, &longest.to_string());
    }
    svg.text(m + w / 2.0, style.height - 12.0, "middle", 12, "event ordinal");
    let (ly, lx) = (svg.num(m + h / 2.0), svg.num(16.0));
    svg.element(
        "text",
        &mut [
            ("x", lx.clone()),
            ("y", ly.clone()),
            ("font-family", "sans-serif".into()),
            ("font-size", "12".into()),
            ("text-anchor", "middle".into()),
            ("transform", format!("rotate(-90 {lx} {ly})")),
        ],
        Some("circumstance (smoothed)"),
    );

    for (role, series, color) in [
        (Role::Actor, &plot.actor, style.actor_color),
        (Role::Experiencer, &plot.experiencer, style.experiencer_color),
    ] {
        if series.is_empty() {
            continue;
        }
        let points: Vec<String> = series
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{},{}", svg.num(x_of(i)), svg.num(y_of(v))))
            .collect();
        svg.element(
            "polyline",
            &mut [
                ("class", role.to_string()),
                ("fill", "none".into()),
                ("points", points.join(" ")),
                ("stroke", color.into()),
                ("stroke-width", "2".into()),
            ],
            None,
        );
    }

    let mut markers: Vec<&Marker> = plot
        .markers
        .iter()
        .filter(|mk| {
            let s = match mk.role {
                Role::Actor => &plot.actor,
                Role::Experiencer => &plot.experiencer,
            };
            mk.index < s.len()
        })
        .collect();
    markers.sort_by_key(|mk| (mk.index, mk.role == Role::Experiencer));
    for (n, mk) in markers.into_iter().enumerate() {
        let (series, color) = match mk.role {
            Role::Actor => (&plot.actor, style.actor_color),
            Role::Experiencer => (&plot.experiencer, style.experiencer_color),
        };
        let (x, y) = (x_of(mk.index), y_of(series[mk.index]));
        let (cx, cy) = (svg.num(x), svg.num(y));
        svg.element(
            "circle",
            &mut [
                ("cx", cx),
                ("cy", cy),
                ("r", "4".into()),
                ("fill", color.into()),
                ("class", mk.kind.to_string()),
            ],
            None,
        );
        let letter = marker_label(n);
        let dy = match mk.kind {
            ExtremumKind::Peak => -8.0,
            ExtremumKind::Valley => 16.0,
        };
        svg.text(x, y + dy, "middle", 11, &letter);
    }

    // legend
    let lx = m + w - 150.0;
    for (row, (label, series, color)) in [
        ("actor", &plot.actor, style.actor_color),
        ("experiencer", &plot.experiencer, style.experiencer_color),
    ]
    .into_iter()
    .enumerate()
    {
        let y = m + 14.0 + 16.0 * row as f64;
        let mut attrs = [
            ("x1", svg.num(lx)),
            ("y1", svg.num(y - 4.0)),
            ("x2", svg.num(lx + 20.0)),
            ("y2", svg.num(y - 4.0)),
            ("stroke", color.to_owned()),
            ("stroke-width", "2".into()),
        ];
        svg.element("line", &mut attrs, None);
        let caption = if series.is_empty() {
            format!("{label} (no events)")
        } else {
            label.to_owned()
        };
        svg.text(lx + 26.0, y, "start", 11, &caption);
    }
    svg.out.push_str("</svg>\n");
    Ok(svg.out)
}

/// A, B, ..., Z, AA, AB, ...
fn marker_label(mut n: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}
