//! SVG figures: the graph of h, the shaded P₀, the assembled rows, the
//! action of f₀ and the boundary gluing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use pa_core::boxcomplex::{a_position, construct, Construction, IsometryCase, PairKind, Side};
use pa_core::exactnum::FieldScalar;
use pa_core::intervalmap::{IntervalMap, PointKind};
use pa_core::invariants::run_pipeline;
use pa_core::oddblock::{from_phi, OddBlockMatrix};

use crate::check::parse_input;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    H,
    P0,
    Rows,
    F0,
    Gluing,
}

impl Figure {
    fn file_name(self) -> &'static str {
        match self {
            Figure::H => "h.svg",
            Figure::P0 => "p0.svg",
            Figure::Rows => "rows.svg",
            Figure::F0 => "f0.svg",
            Figure::Gluing => "gluing.svg",
        }
    }
}

/// Raised when the pipeline stops before the stage a figure needs.
#[derive(Debug)]
pub struct GateNotReached(pub String);

impl std::fmt::Display for GateNotReached {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "gate not reached: {}", self.0)
    }
}

impl std::error::Error for GateNotReached {}

const SIZE: f64 = 400.0;
const PALETTE: [&str; 9] =
    ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f"];

fn f(x: &FieldScalar) -> f64 {
    x.to_f64()
}

fn num(x: f64) -> String {
    let s = format!("{x:.9}");
    if s == "-0.000000000" {
        "0.000000000".into()
    } else {
        s
    }
}

struct Svg {
    body: String,
    view: (f64, f64, f64, f64),
    meta: Vec<(String, String)>,
}

impl Svg {
    /// A canvas mapping model `[x0, x1] × [y0, y1]` with y growing down.
    fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        let pad = 0.08 * (x1 - x0).max(y1 - y0);
        Svg { body: String::new(), view: (x0 - pad, y0 - pad, x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad), meta: Vec::new() }
    }

    fn stroke(&self) -> f64 {
        self.view.2.max(self.view.3) / 400.0
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str, extra: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}" stroke="black" stroke-width="{}" {extra}/>"#,
            num(x),
            num(y),
            num(w),
            num(h),
            num(self.stroke())
        );
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), color: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{}"/>"#,
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1),
            num(width * self.stroke())
        );
    }

    fn polyline(&mut self, pts: &[(f64, f64)], color: &str) {
        let p: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", num(*x), num(*y))).collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{}"/>"#,
            p.join(" "),
            num(2.0 * self.stroke())
        );
    }

    fn dot(&mut self, c: (f64, f64), color: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{color}"/>"#,
            num(c.0),
            num(c.1),
            num(3.0 * self.stroke())
        );
    }

    fn text(&mut self, c: (f64, f64), s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-size="{}" font-family="sans-serif">{s}</text>"#,
            num(c.0),
            num(c.1),
            num(11.0 * self.stroke())
        );
    }

    fn finish(self, title: &str) -> String {
        let (x, y, w, h) = self.view;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
            SIZE,
            num(SIZE * h / w),
            num(x),
            num(y),
            num(w),
            num(h)
        );
        let _ = writeln!(out, "<title>{title}</title>");
        if !self.meta.is_empty() {
            out.push_str("<metadata>\n");
            for (k, v) in &self.meta {
                let _ = writeln!(out, r#"<entry key="{k}">{v}</entry>"#);
            }
            out.push_str("</metadata>\n");
        }
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

/// Graph of h on the unit square (y up).
pub fn h_graph(h: &IntervalMap) -> String {
    let mut s = Svg::new(0.0, 0.0, 1.0, 1.0);
    s.rect(0.0, 0.0, 1.0, 1.0, "none", "");
    s.line((0.0, 1.0), (1.0, 0.0), "#bbbbbb", 1.0);
    let pts: Vec<(f64, f64)> =
        (0..=h.n()).map(|i| (f(h.point(i)), 1.0 - f(h.point(h.phi()[i])))).collect();
    for (i, p) in pts.iter().enumerate().skip(1).take(h.n().saturating_sub(1)) {
        s.line((p.0, 1.0), (p.0, 0.0), "#dddddd", 0.5);
        if matches!(h.classify()[i], PointKind::CriticalMax | PointKind::CriticalMin) {
            s.dot(*p, "#e15759");
            s.text((p.0, 1.04), &format!("x{i}"));
        }
    }
    s.polyline(&pts, "#4e79a7");
    s.meta.push(("lambda".into(), h.lambda().decimal(12)));
    s.finish("graph of h")
}

fn grid_x(c: &Construction, j: usize) -> f64 {
    f(&c.complex.grid_x(j))
}

/// The shaded cells of M drawn on the w × v grid.
pub fn p0(c: &Construction) -> String {
    let rc = &c.complex;
    let n = rc.n();
    let mut s = Svg::new(0.0, 0.0, 1.0, 1.0);
    for i in 1..=n {
        for j in 1..=n {
            let fill = if rc.entry(i, j) == 1 { "#9ecae1" } else { "white" };
            s.rect(grid_x(c, j), f(c.h.point(i - 1)), f(rc.v(j)), f(&rc.w(i)), fill, "");
        }
    }
    s.meta.push(("shaded_area".into(), rc.shaded_area().decimal(12)));
    s.finish("shaded region P0")
}

fn bounds(c: &Construction) -> (f64, f64) {
    let rows = c.complex.rows();
    let lo = rows.iter().map(|r| f(&r.left)).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| f(&r.right())).fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Rows drawn together, with the columns C_i outlined.
pub fn rows(c: &Construction) -> String {
    let rc = &c.complex;
    let (lo, hi) = bounds(c);
    let mut s = Svg::new(lo, 0.0, hi, 1.0);
    for r in rc.rows() {
        s.rect(f(&r.left), f(&r.top), f(&r.width), f(&(&r.bottom - &r.top)), "#deebf7", "");
        s.text((f(&r.left) - 0.06 * (hi - lo), (f(&r.top) + f(&r.bottom)) / 2.0), &format!("R{}", r.index));
    }
    for j in 1..=rc.n() {
        let (a, b) = rc.column_block(j);
        let color = PALETTE[(j - 1) % PALETTE.len()];
        let x = f(rc.column_x(j));
        let y0 = f(c.h.point(a));
        let extra = r#"fill-opacity="0.35""#;
        s.rect(x, y0, f(rc.v(j)), f(c.h.point(b)) - y0, color, extra);
        s.text((x + 0.3 * f(rc.v(j)), y0 + 0.05), &format!("C{j}"));
    }
    s.meta.push(("shaded_area".into(), rc.shaded_area().decimal(12)));
    s.finish("assembled rows")
}

fn case_name(case: IsometryCase) -> &'static str {
    match case {
        IsometryCase::Identity => "identity",
        IsometryCase::RotatePi => "rotate π",
        IsometryCase::ReflectVerticalAxis => "reflect in vertical axis",
        IsometryCase::ReflectHorizontalAxis => "reflect in horizontal axis",
    }
}

/// Each row next to its image column, labelled by the isometry used.
pub fn f0(c: &Construction) -> String {
    let rc = &c.complex;
    let (lo, hi) = bounds(c);
    let width = hi - lo;
    let gap = 0.25 * width;
    let mut s = Svg::new(lo, 0.0, lo + 2.0 * width + gap, 1.0);
    for (r, m) in rc.rows().iter().zip(&c.pieces.rows) {
        let color = PALETTE[(r.index - 1) % PALETTE.len()];
        let extra = r#"fill-opacity="0.5""#;
        s.rect(f(&r.left), f(&r.top), f(&r.width), f(&(&r.bottom - &r.top)), color, extra);
        s.text((f(&r.left), (f(&r.top) + f(&r.bottom)) / 2.0), &format!("R{} {}", r.index, case_name(m.case)));
        let (a, b) = rc.column_block(r.index);
        let x = f(rc.column_x(r.index)) + width + gap;
        let y0 = f(c.h.point(a));
        s.rect(x, y0, f(rc.v(r.index)), f(c.h.point(b)) - y0, color, extra);
        let (tx, ty) = &m.image_of_top_left;
        s.dot((f(tx) + width + gap, f(ty)), "black");
    }
    for r in rc.rows() {
        s.rect(f(&r.left) + width + gap, f(&r.top), f(&r.width), f(&(&r.bottom - &r.top)), "none", "");
    }
    s.finish("action of f0")
}

/// Position of boundary coordinate `u` on ∂P₀.
fn boundary_point(c: &Construction, u: &FieldScalar) -> (f64, f64) {
    let rc = &c.complex;
    let one = FieldScalar::one(u.field());
    let (side, y) = if (u - &one).is_negative() {
        (Side::Right, u.clone())
    } else {
        (Side::Left, &FieldScalar::from_int(u.field(), 2) - u)
    };
    let r = (1..=rc.n()).find(|&r| !(&y - c.h.point(r)).is_positive()).unwrap_or(rc.n());
    (f(&rc.row(r).edge(side)), f(&y))
}

/// ∂P₀ with the H folds, the directly glued arcs J_i, J'_i around each
/// fold center and the residual points.
pub fn gluing(c: &Construction) -> String {
    let rc = &c.complex;
    let (lo, hi) = bounds(c);
    let mut s = Svg::new(lo, 0.0, hi, 1.0);
    for r in rc.rows() {
        s.rect(f(&r.left), f(&r.top), f(&r.width), f(&(&r.bottom - &r.top)), "#f0f0f0", "");
    }
    for e in &c.quotient.h_edges {
        let y = f(&e.y);
        s.line((f(&e.x_min), y), (f(&e.x_max), y), "#59a14f", 3.0);
        s.dot((f(&e.midpoint()), y), "#59a14f");
        s.text((f(&e.midpoint()), y - 0.015), &format!("Q{}", e.index));
    }
    let dynamics = &c.quotient.dynamics;
    for (p, q, kind) in dynamics.intervals() {
        if *kind != PairKind::Direct {
            continue;
        }
        let k = dynamics.arc_of(p);
        let fold = dynamics.folds().iter().position(|fo| dynamics.arc_of(&fo.center) == k);
        let color = PALETTE[fold.unwrap_or(0) % PALETTE.len()];
        s.line(boundary_point(c, p), boundary_point(c, &wrap2(q)), color, 4.0);
    }
    for i in 1..rc.n() {
        let a = boundary_point(c, &a_position(rc, i));
        s.dot(a, "#4e79a7");
        s.text((a.0, a.1 + 0.03), &format!("a{i}"));
    }
    for k in dynamics.residual() {
        s.dot(boundary_point(c, k), "#e15759");
    }
    s.finish("gluing of the vertical edges")
}

fn wrap2(u: &FieldScalar) -> FieldScalar {
    let two = FieldScalar::from_int(u.field(), 2);
    if (u - &two).is_negative() {
        u.clone()
    } else {
        u - &two
    }
}

/// Runs the gate pipeline and returns the matrix once the stages `figures`
/// need have passed.
fn gated_matrix(text: &str, epsilon: i32, figures: &[Figure]) -> Result<OddBlockMatrix> {
    let input = parse_input(text)?;
    let report = run_pipeline(&input, &[epsilon]).map_err(anyhow::Error::msg)?;
    let reached = |name: &str| report.gate(name).is_some_and(|g| g.passed);
    if !reached("interval_map") {
        let g = report.failed_gate().map_or("interval_map".to_string(), |g| g.gate.clone());
        bail!(GateNotReached(g));
    }
    if figures.iter().any(|&f| f != Figure::H) {
        if let Some(g) = report.failed_gate() {
            bail!(GateNotReached(g.gate.clone()));
        }
        let e = report.epsilon(epsilon).expect("requested ε is reported");
        if !e.satisfied {
            let g = e.gates.iter().find(|g| !g.passed).map_or("sphere".to_string(), |g| g.gate.clone());
            bail!(GateNotReached(g));
        }
    }
    let phi = report.phi.as_ref().expect("φ is known once interval_map passed");
    Ok(from_phi(phi)?)
}

pub fn render(text: &str, epsilon: i32, figures: &[Figure], outdir: &Path) -> Result<Vec<PathBuf>> {
    let m = gated_matrix(text, epsilon, figures)?;
    let h = IntervalMap::from_matrix(&m)?;
    let needs_construction = figures.iter().any(|&f| f != Figure::H);
    let construction = if needs_construction {
        Some(construct(&m, epsilon).map_err(|e| GateNotReached(e.to_string()))?)
    } else {
        None
    };
    std::fs::create_dir_all(outdir)?;
    let mut written = Vec::new();
    for &fig in figures {
        let svg = match (fig, &construction) {
            (Figure::H, _) => h_graph(&h),
            (Figure::P0, Some(c)) => p0(c),
            (Figure::Rows, Some(c)) => rows(c),
            (Figure::F0, Some(c)) => f0(c),
            (Figure::Gluing, Some(c)) => gluing(c),
            _ => unreachable!("construction built for every non-h figure"),
        };
        let path = outdir.join(fig.file_name());
        std::fs::write(&path, svg)?;
        written.push(path);
    }
    if let Some(c) = &construction {
        let path = outdir.join("geometry.json");
        std::fs::write(&path, serde_json::to_string_pretty(&c.snapshot())? + "\n")?;
        written.push(path);
    }
    Ok(written)
}
