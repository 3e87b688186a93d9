//! WebAssembly bindings for the browser demo in `www/`.

use std::fmt::Write;

use num_traits::ToPrimitive;
use spherindex::cli::{self, Format, Input, Options};
use spherindex::fan::{standard_fan, weyl_saturate, Fan};
use spherindex::fixtures;
use spherindex::io::DatumFile;
use spherindex::linalg::{form, Int};
use spherindex::restriction::{restrict_datum, valuation_cone, RestrictedDatum};
use wasm_bindgen::prelude::*;

const SIZE: f64 = 360.0;
const RADIUS: f64 = 160.0;

#[wasm_bindgen]
pub fn fixture_names() -> Vec<String> {
    fixtures::ALL.iter().map(|(n, _)| n.to_string()).collect()
}

#[wasm_bindgen]
pub fn fixture(name: &str) -> Option<String> {
    fixtures::text(name).map(str::to_string)
}

/// Text report of the `analyze` command.
#[wasm_bindgen]
pub fn analyze(datum: &str) -> String {
    cli::render(&cli::analyze(&Input::text("input", datum), Options::default()), Format::Text)
}

/// Text report of the `degenerate` command.
#[wasm_bindgen]
pub fn degenerate(datum: &str) -> String {
    cli::render(&cli::degenerate(&Input::text("input", datum), Options::default()), Format::Text)
}

/// SVG picture of the standard fan, or its Weyl saturation, over the shaded
/// valuation cone. Only ranks 1 and 2 can be drawn.
#[wasm_bindgen]
pub fn fan_svg(datum: &str, saturate: bool) -> Result<String, JsError> {
    let rd = restricted(datum).map_err(|e| JsError::new(&e))?;
    if !(1..=2).contains(&rd.rank()) {
        return Err(JsError::new(&format!("cannot draw a fan of rank {}", rd.rank())));
    }
    let mut f = standard_fan(&rd).map_err(|e| JsError::new(&e.to_string()))?;
    if saturate {
        f = weyl_saturate(&f, &rd, None).map_err(|e| JsError::new(&e.to_string()))?;
    }
    Ok(render_svg(&rd, &f))
}

fn restricted(datum: &str) -> Result<RestrictedDatum, String> {
    let d = DatumFile::parse(datum).and_then(|f| f.to_datum()).map_err(|e| e.to_string())?;
    restrict_datum(&d).map_err(|e| e.to_string())
}

/// Maps dual coordinates to the plane so that the picture is isometric for
/// the form: with `L Lᵀ = G⁻¹`, a point `n` goes to `Lᵀ n`.
struct Embedding {
    l: [[f64; 2]; 2],
}

impl Embedding {
    fn new(rd: &RestrictedDatum) -> Self {
        let g = rd.source_form();
        let x = &rd.xi_basis;
        let gram = |i: usize, j: usize| form(g, &x[i], &x[j]).to_f64().unwrap_or(0.0);
        if rd.rank() == 1 {
            return Self { l: [[1.0 / gram(0, 0).sqrt(), 0.0], [0.0, 0.0]] };
        }
        let (a, b, d) = (gram(0, 0), gram(0, 1), gram(1, 1));
        let det = a * d - b * b;
        let (h00, h01, h11) = (d / det, -b / det, a / det);
        let l00 = h00.sqrt();
        let l10 = h01 / l00;
        let l11 = (h11 - l10 * l10).sqrt();
        Self { l: [[l00, 0.0], [l10, l11]] }
    }

    fn unit(&self, n: &[Int]) -> (f64, f64) {
        let v: Vec<f64> = n.iter().map(|c| c.to_f64().unwrap_or(0.0)).collect();
        let y0 = self.l[0][0] * v[0] + v.get(1).map_or(0.0, |v1| self.l[1][0] * v1);
        let y1 = v.get(1).map_or(0.0, |v1| self.l[1][1] * v1);
        let len = (y0 * y0 + y1 * y1).sqrt();
        (y0 / len, y1 / len)
    }
}

fn point(u: (f64, f64), r: f64) -> (f64, f64) {
    (SIZE / 2.0 + r * u.0, SIZE / 2.0 - r * u.1)
}

fn sector(out: &mut String, a: (f64, f64), b: (f64, f64), r: f64, class: &str) {
    let (ax, ay) = point(a, r);
    let (bx, by) = point(b, r);
    let c = SIZE / 2.0;
    // Sweep direction follows the sign of the cross product.
    let sweep = if a.0 * b.1 - a.1 * b.0 > 0.0 { 0 } else { 1 };
    let _ = writeln!(
        out,
        r#"<path class="{class}" d="M{c},{c} L{ax:.2},{ay:.2} A{r},{r} 0 0 {sweep} {bx:.2},{by:.2} Z"/>"#
    );
}

fn render_svg(rd: &RestrictedDatum, f: &Fan) -> String {
    let e = Embedding::new(rd);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#);
    let zk = valuation_cone(rd);
    let rays: Vec<(f64, f64)> = zk.rays.iter().map(|r| e.unit(r)).collect();
    let zr = RADIUS + 12.0;
    match (rd.rank(), zk.lineality.len(), rays.as_slice()) {
        (2, 0, [a, b]) => sector(&mut out, *a, *b, zr, "zk"),
        (2, 1, [a]) => {
            let l = e.unit(&zk.lineality[0]);
            sector(&mut out, *a, l, zr, "zk");
            sector(&mut out, *a, (-l.0, -l.1), zr, "zk");
        }
        (1, 0, [a]) => {
            let (x, y) = point(*a, zr);
            let _ = writeln!(out, r#"<line class="zk-ray" x1="{0}" y1="{0}" x2="{x:.2}" y2="{y:.2}"/>"#, SIZE / 2.0);
        }
        (_, l, _) if l == rd.rank() => {
            let _ = writeln!(out, r#"<circle class="zk" cx="{0}" cy="{0}" r="{zr}"/>"#, SIZE / 2.0);
        }
        _ => {}
    }
    for c in f.maximal_cones() {
        if let [a, b] = c.generators() {
            sector(&mut out, e.unit(a), e.unit(b), RADIUS, "cone");
        }
    }
    for r in f.rays() {
        let u = e.unit(&r.generators()[0]);
        let (x, y) = point(u, RADIUS);
        let (lx, ly) = point(u, RADIUS + 6.0);
        let label: Vec<String> = r.generators()[0].iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, r#"<line class="ray" x1="{0}" y1="{0}" x2="{x:.2}" y2="{y:.2}"/>"#, SIZE / 2.0);
        let anchor = if u.0 < -0.2 { "end" } else if u.0 > 0.2 { "start" } else { "middle" };
        let _ = writeln!(out, r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="{anchor}">({})</text>"#, label.join(","));
    }
    out.push_str("</svg>\n");
    out
}
