//! Deterministic CSV, JSON and SVG renderings of verification, classification,
//! sweep and orbit results.
//!
//! Every number goes through [`fmt_num`] (12 significant digits) or
//! [`num`] (the same rounding, as a JSON number), so equal inputs give
//! byte-identical output.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::discreteness::{
    Certificate, Classification, Compression, Inconclusive, NecessaryCheck, ShimizuOutcome, SweepGrid, Verdict,
};
use crate::error::{Error, Result};
use crate::hermitian::C64;
use crate::lattice::{case_data, closed_forms, CommutatorOrder, RelationReport, TranslationCheck};
use crate::triangle::{CaseTag, TriangleConfig};

pub const SCHEMA: &str = "ultrapar/v1";

/// `%.12g`: 12 significant digits, trailing zeros trimmed, exponent form
/// outside [1e-4, 1e12).
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..12).contains(&exp) {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mant}e{sign}{:02}", exp.abs());
    }
    let s = format!("{x:.*}", (11 - exp) as usize);
    let s = trim_zeros(&s);
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// x rounded to 12 significant digits as a JSON number; null if not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = fmt_num(x).parse().expect("fmt_num output parses");
    json!(r)
}

fn cnum(z: C64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

fn envelope(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m
}

fn setting(m: &mut Map<String, Value>, tag: CaseTag, cfg: &TriangleConfig) {
    m.insert("case".into(), json!(tag.to_string()));
    m.insert("type".into(), json!(tag.triangle_type(cfg.ty.m1).to_string()));
    m.insert("m".into(), num(cfg.ty.m1));
    m.insert("alpha".into(), num(cfg.alpha));
    m.insert("r".into(), num(cfg.r()));
    m.insert("theta".into(), num(cfg.theta));
}

pub fn verify_json(
    tag: CaseTag,
    cfg: &TriangleConfig,
    tol: f64,
    report: &RelationReport,
    translations: &[TranslationCheck],
) -> Value {
    let mut m = envelope("verify");
    setting(&mut m, tag, cfg);
    m.insert("tol".into(), num(tol));
    let relations: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "identity": c.identity,
                "lhs_word": c.lhs,
                "rhs_expr": c.rhs,
                "residual": num(c.residual),
                "holds": c.holds,
                "dispute": c.dispute,
            })
        })
        .collect();
    let adjudications: Vec<Value> = report
        .adjudications
        .iter()
        .map(|a| json!({ "label": a.label, "candidates": a.candidates, "holding": a.holding }))
        .collect();
    let claims: Vec<Value> = report.claims.iter().map(|c| json!({ "word": c.word, "holds": c.holds })).collect();
    let trans: Vec<Value> = translations
        .iter()
        .map(|t| {
            json!({
                "name": t.name,
                "word": t.word,
                "expected": { "xi": cnum(t.expected.0), "t": num(t.expected.1) },
                "observed": t.observed.map(|(xi, nu)| json!({ "xi": cnum(xi), "t": num(nu) })),
                "rel_err": num(t.rel_err),
                "holds": t.holds(tol),
            })
        })
        .collect();
    let passed = report.passed() && translations.iter().all(|t| t.holds(tol));
    m.insert("passed".into(), json!(passed));
    m.insert("max_residual".into(), num(report.max_residual()));
    m.insert("relations".into(), Value::Array(relations));
    m.insert("adjudications".into(), Value::Array(adjudications));
    m.insert("translation_claims".into(), Value::Array(claims));
    m.insert("translations".into(), Value::Array(trans));
    Value::Object(m)
}

fn shimizu_json(s: &ShimizuOutcome) -> Value {
    match *s {
        ShimizuOutcome::NonDiscrete { s } => json!({ "s": num(s), "outcome": "non-discrete" }),
        ShimizuOutcome::Inconclusive { s, reason: Inconclusive::AtLeastTwo } => {
            json!({ "s": num(s), "outcome": "inconclusive", "reason": "s>=2" })
        }
        ShimizuOutcome::Inconclusive { s, reason: Inconclusive::Exceptional { q } } => {
            json!({ "s": num(s), "outcome": "inconclusive", "reason": "exceptional", "q": q })
        }
    }
}

fn compression_json(c: &Compression) -> Value {
    json!({
        "m_ok": c.m_ok,
        "cos_alpha_ok": c.cos_ok,
        "nu": num(c.nu),
        "vertical_shift_ok": c.vertical_shift_ok,
        "orbit_bound_ok": c.orbit_bound_ok,
        "gtable": c.gtable.as_ref().map(|g| json!({
            "t": num(g.t),
            "passed": g.passed,
            "points_checked": g.points_checked,
            "min_g": num(g.min_g),
            "zeros": g.zeros.iter().map(|(p, u, v)| json!({ "p": p, "u": u, "v": v })).collect::<Vec<_>>(),
        })),
    })
}

pub fn classify_json(cl: &Classification, necessary: Option<&NecessaryCheck>) -> Value {
    let mut m = envelope("classify");
    m.insert("case".into(), json!(cl.tag.to_string()));
    m.insert("type".into(), json!(cl.tag.triangle_type(cl.m).to_string()));
    m.insert("m".into(), num(cl.m));
    m.insert("alpha".into(), num(cl.alpha));
    m.insert("verdict".into(), json!(cl.verdict.to_string()));
    m.insert("detail".into(), json!(cl.detail()));
    let cert = match &cl.certificate {
        Certificate::Discrete { compression } => json!({ "kind": "compression", "compression": compression_json(compression) }),
        Certificate::NonDiscrete { shimizu } => json!({ "kind": "shimizu", "shimizu": shimizu_json(shimizu) }),
        Certificate::Unknown { compression, shimizu } => json!({
            "kind": "none",
            "compression": compression_json(compression),
            "shimizu": shimizu_json(shimizu),
        }),
    };
    m.insert("certificate".into(), cert);
    if let Some(n) = necessary {
        m.insert(
            "necessary_check".into(),
            json!({
                "label": "necessary-only",
                "max_len": n.max_len,
                "nu": num(n.nu),
                "min_abs_f0": num(n.min_image),
                "holds": n.holds(),
            }),
        );
    }
    Value::Object(m)
}

/// "H^3 = [T2,T1]" and friends.
pub fn commutator_relation(tag: CaseTag) -> String {
    let d = case_data(tag);
    let lhs = if d.h_power == 1 { "H".to_string() } else { format!("H^{}", d.h_power) };
    let comm = match d.commutator {
        CommutatorOrder::T1T2 => "[T1,T2]",
        CommutatorOrder::T2T1 => "[T2,T1]",
    };
    format!("{lhs} = {comm} = (12)^{}", d.twelve_power)
}

pub fn lattice_info_json(tag: CaseTag, cfg: &TriangleConfig) -> Value {
    let d = case_data(tag);
    let lt = closed_forms(tag, cfg.r(), cfg.theta);
    let mut m = envelope("lattice-info");
    setting(&mut m, tag, cfg);
    m.insert("T1".into(), json!({ "word": d.t1.to_string(), "v": cnum(lt.v1), "t": num(lt.t1) }));
    m.insert("T2".into(), json!({ "word": d.t2.to_string(), "v": cnum(lt.v2), "t": num(lt.t2) }));
    m.insert("H".into(), json!({ "word": d.h.to_string(), "nu": num(lt.nu) }));
    m.insert("commutator_relation".into(), json!(commutator_relation(tag)));
    m.insert("remainders".into(), json!(d.remainder.iter().map(|w| w.to_string()).collect::<Vec<_>>()));
    Value::Object(m)
}

pub fn sweep_csv(grid: &SweepGrid) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(["case", "m", "alpha", "verdict", "detail"]).map_err(io)?;
    for cell in &grid.cells {
        w.write_record([
            cell.tag.to_string(),
            fmt_num(cell.m),
            fmt_num(cell.alpha),
            cell.verdict.to_string(),
            cell.detail(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn sweep_json(grid: &SweepGrid) -> Value {
    let sp = &grid.spec;
    let mut m = envelope("sweep");
    m.insert("case".into(), json!(sp.tag.to_string()));
    m.insert("m_range".into(), json!([num(sp.m_range.0), num(sp.m_range.1)]));
    m.insert("alpha_range".into(), json!([num(sp.alpha_range.0), num(sp.alpha_range.1)]));
    m.insert("res".into(), json!([sp.res_m, sp.res_alpha]));
    let cells: Vec<Value> = grid
        .cells
        .iter()
        .map(|c| json!({ "m": num(c.m), "alpha": num(c.alpha), "verdict": c.verdict.to_string(), "detail": c.detail() }))
        .collect();
    m.insert("cells".into(), Value::Array(cells));
    Value::Object(m)
}

pub fn verdict_fill(v: Verdict) -> &'static str {
    match v {
        Verdict::DiscreteCertified => "#c8c8c8",
        Verdict::NonDiscrete => "#3b5b92",
        Verdict::Unknown => "#ffffff",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;

/// Plot label for a multiple of pi/2 on the alpha axis.
fn pi_label(k: i64) -> String {
    match k {
        0 => "0".into(),
        1 => "π/2".into(),
        2 => "π".into(),
        k if k % 2 == 0 => format!("{}π", k / 2),
        k => format!("{k}π/2"),
    }
}

/// Heat-map of the sweep: m horizontal, alpha vertical (upwards). Runs of
/// equal verdict in a row are merged into one rectangle.
pub fn sweep_svg(grid: &SweepGrid) -> String {
    let sp = &grid.spec;
    let cell = (400.0 / sp.res_m.max(sp.res_alpha) as f64).max(1.0);
    let pw = cell * sp.res_m as f64;
    let ph = cell * sp.res_alpha as f64;
    let (w, h) = (MARGIN_L + pw + MARGIN_R, MARGIN_T + ph + MARGIN_B);
    let x_of = |m: f64| MARGIN_L + (m - sp.m_range.0) / (sp.m_range.1 - sp.m_range.0) * pw;
    let y_of = |a: f64| MARGIN_T + ph - (a - sp.alpha_range.0) / (sp.alpha_range.1 - sp.alpha_range.0) * ph;
    let f = fmt_num;

    let mut s = String::new();
    let _ = writeln!(s, r##"<?xml version="1.0" encoding="UTF-8"?>"##);
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="12">"##,
        f(w),
        f(h),
        f(w),
        f(h)
    );
    let _ = writeln!(
        s,
        r##"<title>{} (m, alpha) classification, {}x{}</title>"##,
        sp.tag,
        sp.res_m,
        sp.res_alpha
    );
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##, f(w), f(h));
    let _ = writeln!(s, r##"<g id="cells" shape-rendering="crispEdges">"##);
    for j in 0..sp.res_alpha {
        let y = MARGIN_T + ph - (j + 1) as f64 * cell;
        let mut i = 0;
        while i < sp.res_m {
            let v = grid.at(i, j).verdict;
            let start = i;
            while i < sp.res_m && grid.at(i, j).verdict == v {
                i += 1;
            }
            if v == Verdict::Unknown {
                continue;
            }
            let _ = writeln!(
                s,
                r##"<rect x="{}" y="{}" width="{}" height="{}" fill="{}" class="{}"/>"##,
                f(MARGIN_L + start as f64 * cell),
                f(y),
                f((i - start) as f64 * cell),
                f(cell),
                verdict_fill(v),
                v
            );
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#000000"/>"##,
        f(MARGIN_L),
        f(MARGIN_T),
        f(pw),
        f(ph)
    );

    // m ticks at every half unit inside the range.
    let _ = writeln!(s, r##"<g id="axes" stroke="#000000">"##);
    let mut k = (sp.m_range.0 * 2.0).ceil() as i64;
    while (k as f64) / 2.0 <= sp.m_range.1 + 1e-12 {
        let x = x_of(k as f64 / 2.0);
        let y0 = MARGIN_T + ph;
        let _ = writeln!(s, r##"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"##, f(x), f(y0), f(x), f(y0 + 5.0));
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" text-anchor="middle" stroke="none">{}</text>"##,
            f(x),
            f(y0 + 18.0),
            f(k as f64 / 2.0)
        );
        k += 1;
    }
    let mut k = (sp.alpha_range.0 / (PI / 2.0) - 1e-9).ceil() as i64;
    while k as f64 * PI / 2.0 <= sp.alpha_range.1 + 1e-9 {
        let y = y_of(k as f64 * PI / 2.0);
        let _ = writeln!(s, r##"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"##, f(MARGIN_L - 5.0), f(y), f(MARGIN_L), f(y));
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" text-anchor="end" stroke="none">{}</text>"##,
            f(MARGIN_L - 8.0),
            f(y + 4.0),
            pi_label(k)
        );
        k += 1;
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r##"<text x="{}" y="{}" text-anchor="middle">m</text>"##,
        f(MARGIN_L + pw / 2.0),
        f(MARGIN_T + ph + 45.0)
    );
    let _ = writeln!(
        s,
        r##"<text x="{}" y="{}" text-anchor="middle" transform="rotate(-90 {} {})">α</text>"##,
        f(20.0),
        f(MARGIN_T + ph / 2.0),
        f(20.0),
        f(MARGIN_T + ph / 2.0)
    );

    let _ = writeln!(s, r##"<g id="legend">"##);
    for (n, v) in [Verdict::DiscreteCertified, Verdict::NonDiscrete, Verdict::Unknown].into_iter().enumerate() {
        let y = MARGIN_T + 10.0 + 22.0 * n as f64;
        let x = MARGIN_L + pw + 20.0;
        let _ = writeln!(
            s,
            r##"<rect x="{}" y="{}" width="14" height="14" fill="{}" stroke="#000000"/>"##,
            f(x),
            f(y),
            verdict_fill(v)
        );
        let _ = writeln!(s, r##"<text x="{}" y="{}">{}</text>"##, f(x + 20.0), f(y + 11.0), v);
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

/// Scatter plot data for planar orbit points.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPlot {
    pub points: Vec<C64>,
    pub marker_radius: f64,
    /// (xmin, xmax, ymin, ymax)
    pub bounds: (f64, f64, f64, f64),
    pub title: String,
}

impl OrbitPlot {
    pub fn new(points: Vec<C64>, title: impl Into<String>) -> Result<Self> {
        if points.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return Err(Error::Parse("orbit point with non-finite coordinates".into()));
        }
        let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for p in &points {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        // Square window with a small border, so lattice angles are not distorted.
        let half = ((x1 - x0).max(y1 - y0) / 2.0).max(1.0) * 1.05;
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        Ok(OrbitPlot {
            points,
            marker_radius: 2.0,
            bounds: (cx - half, cx + half, cy - half, cy + half),
            title: title.into(),
        })
    }

    pub fn to_svg(&self) -> String {
        let size = 600.0;
        let (x0, x1, y0, y1) = self.bounds;
        let px = |x: f64| (x - x0) / (x1 - x0) * size;
        let py = |y: f64| size - (y - y0) / (y1 - y0) * size;
        let f = fmt_num;
        let mut s = String::new();
        let _ = writeln!(s, r##"<?xml version="1.0" encoding="UTF-8"?>"##);
        let _ = writeln!(
            s,
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"##,
            f(size),
            f(size),
            f(size),
            f(size)
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(s, r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##, f(size), f(size));
        if (x0..=x1).contains(&0.0) && (y0..=y1).contains(&0.0) {
            let _ = writeln!(
                s,
                r##"<g stroke="#bbbbbb"><line x1="0" y1="{}" x2="{}" y2="{}"/><line x1="{}" y1="0" x2="{}" y2="{}"/></g>"##,
                f(py(0.0)),
                f(size),
                f(py(0.0)),
                f(px(0.0)),
                f(px(0.0)),
                f(size)
            );
        }
        let _ = writeln!(s, r##"<g id="points" fill="#000000">"##);
        for p in &self.points {
            let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="{}"/>"##, f(px(p.re)), f(py(p.im)), f(self.marker_radius));
        }
        let _ = writeln!(s, "</g>");
        s.push_str("</svg>\n");
        s
    }
}

pub fn orbit_csv(points: &[C64]) -> String {
    let mut s = String::from("x,y\n");
    for p in points {
        let _ = writeln!(s, "{},{}", fmt_num(p.re), fmt_num(p.im));
    }
    s
}

pub fn orbit_json(tag: CaseTag, cfg: &TriangleConfig, max_len: usize, points: &[C64]) -> Value {
    let mut m = envelope("orbit");
    setting(&mut m, tag, cfg);
    m.insert("max_len".into(), json!(max_len));
    m.insert("count".into(), json!(points.len()));
    m.insert("points".into(), Value::Array(points.iter().map(|p| cnum(*p)).collect()));
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_num_matches_percent_g() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(PI), "3.14159265359");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(1e-5), "1e-05");
        assert_eq!(fmt_num(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_num(0.0001234), "0.0001234");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(999999999999.9), "1e+12");
    }

    #[test]
    fn num_rounds() {
        assert_eq!(num(PI), json!("3.14159265359".parse::<f64>().unwrap()));
        assert_eq!(num(f64::INFINITY), Value::Null);
    }

    #[test]
    fn c36_commutator() {
        assert_eq!(commutator_relation(CaseTag::C36), "H^3 = [T2,T1] = (12)^6");
        assert_eq!(commutator_relation(CaseTag::C23), "H = [T1,T2] = (12)^6");
    }
}
