//! Discreteness certification by compression (closed conditions, vertical
//! shift, g-tables) and non-discreteness by the Shimizu-type test.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::heisenberg::{act_on_boundary, HeisPoint};
use crate::hermitian::{c, root_of_unity, HMatrix, C64};
use crate::lattice::{case_data, closed_forms};
use crate::triangle::{case_config, theta_of, CaseTag, TriangleConfig};
use crate::words::{enumerate_words, Word};
use crate::Exec;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Slack on the closed boundary comparisons, so that points such as
/// alpha = 2pi/3 survive rounding.
pub const BOUNDARY_SLACK: f64 = 1e-12;
/// Distance below which s counts as an exceptional value 2cos(pi/q).
pub const EXCEPTIONAL_TOL: f64 = 1e-9;
/// Default half-width of the (x, y) window for the brute-force oracle.
pub const DEFAULT_WINDOW: i64 = 5;

/// The planar rotations j1, j2 for given (r, theta).
#[derive(Clone, Copy, Debug)]
pub struct PlanarGroup {
    pub phi: [C64; 2],
    pub mu: [C64; 2],
}

impl PlanarGroup {
    pub fn new(tag: CaseTag, r: f64, theta: f64) -> Self {
        let (n1, n2) = tag.orders();
        let e = C64::from_polar(1.0, theta);
        PlanarGroup { phi: [e * r, -e.conj() * r], mu: [root_of_unity(n1), root_of_unity(n2)] }
    }

    pub fn from_config(cfg: &TriangleConfig) -> Self {
        PlanarGroup { phi: cfg.phi, mu: cfg.mu }
    }

    /// f(z) for the word f = j_{a1} j_{a2} ..., applying the last letter first.
    pub fn apply(&self, w: &Word, z: C64) -> C64 {
        let mut z = z;
        for &(g, e) in w.syllables().iter().rev() {
            let i = (g - 1) as usize;
            for _ in 0..e {
                z = self.mu[i] * z + (c(1.0, 0.0) - self.mu[i]) * self.phi[i];
            }
        }
        z
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        self.apply(w, c(0.0, 0.0)).norm() < 1e-9 && (self.apply(w, c(1.0, 0.0)) - 1.0).norm() < 1e-9
    }
}

/// p + r t with p = rat + root3 * sqrt(3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Surd {
    pub rat: f64,
    pub root3: f64,
}

const fn s(rat: f64, root3: f64) -> Surd {
    Surd { rat, root3 }
}

impl Surd {
    pub fn value(&self) -> f64 {
        self.rat + self.root3 * SQRT3
    }
}

/// c0 + c1 t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub c0: Surd,
    pub c1: Surd,
}

const fn aff(c0: Surd, c1: Surd) -> Affine {
    Affine { c0, c1 }
}

const ZERO: Affine = aff(s(0.0, 0.0), s(0.0, 0.0));

impl Affine {
    pub fn at(&self, t: f64) -> f64 {
        self.c0.value() + self.c1.value() * t
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GEntry {
    /// Remainder word whose image of 0 is the base point p.
    pub p: &'static str,
    pub a: Affine,
    pub b: Affine,
}

/// |p + x v1 + y v2|^2 = scale r^2 cos^2(theta) Q(u, v), u = y - x, v = x + y,
/// with Q = cu (u - a)^2 + cv (v - b)^2. The target K r^2 becomes
/// Q >= bound(t) = bound_factor (1 + t^2), and g_p = Q - bound.
#[derive(Clone, Debug, PartialEq)]
pub struct GTable {
    pub tag: CaseTag,
    pub scale: f64,
    pub cu: f64,
    pub cv: f64,
    pub bound_factor: f64,
    pub k_target: f64,
    pub theta_limit: f64,
    pub entries: Vec<GEntry>,
}

impl GTable {
    pub fn bound(&self, t: f64) -> f64 {
        self.bound_factor * (1.0 + t * t)
    }

    /// Box half-widths (gamma_u, gamma_v) outside which g_p > 0 automatically.
    pub fn half_widths(&self, t: f64) -> (f64, f64) {
        let b = self.bound(t);
        ((b / self.cu).sqrt(), (b / self.cv).sqrt())
    }

    pub fn g(&self, e: &GEntry, t: f64, u: i64, v: i64) -> f64 {
        let du = u as f64 - e.a.at(t);
        let dv = v as f64 - e.b.at(t);
        self.cu * du * du + self.cv * dv * dv - self.bound(t)
    }

    pub fn t_limit(&self) -> f64 {
        self.theta_limit.tan()
    }
}

pub fn gtable(tag: CaseTag) -> GTable {
    let sixth = 1.0 / 6.0;
    let twelfth = 1.0 / 12.0;
    let (scale, cu, cv, bound_factor, k_target, theta_limit, entries) = match tag {
        CaseTag::C23 => (
            12.0,
            1.0,
            3.0,
            0.25,
            3.0,
            PI / 6.0,
            vec![
                GEntry { p: "Id", a: ZERO, b: ZERO },
                GEntry { p: "1", a: aff(s(-0.5, 0.0), s(0.0, sixth)), b: aff(s(-sixth, 0.0), s(0.0, -sixth)) },
                GEntry { p: "2", a: aff(s(0.5, 0.0), s(0.0, 0.0)), b: aff(s(0.0, 0.0), s(0.0, -sixth)) },
                GEntry { p: "12", a: aff(s(-1.0, 0.0), s(0.0, sixth)), b: aff(s(-sixth, 0.0), s(0.0, 0.0)) },
                GEntry { p: "22", a: aff(s(0.25, 0.0), s(0.0, 0.25)), b: aff(s(0.25, 0.0), s(0.0, -twelfth)) },
                GEntry {
                    p: "122",
                    a: aff(s(-0.75, 0.0), s(0.0, -twelfth)),
                    b: aff(s(-5.0 * twelfth, 0.0), s(0.0, -twelfth)),
                },
            ],
        ),
        CaseTag::C24 => (
            8.0,
            1.0,
            1.0,
            0.25,
            2.0,
            PI / 12.0,
            vec![
                GEntry { p: "Id", a: ZERO, b: ZERO },
                GEntry { p: "1", a: aff(s(-0.5, 0.0), s(0.5, 0.0)), b: aff(s(-0.5, 0.0), s(-0.5, 0.0)) },
                GEntry { p: "2", a: aff(s(0.5, 0.0), s(0.0, 0.0)), b: aff(s(0.0, 0.0), s(-0.5, 0.0)) },
                GEntry { p: "21", a: aff(s(1.0, 0.0), s(0.5, 0.0)), b: aff(s(-0.5, 0.0), s(0.0, 0.0)) },
            ],
        ),
        CaseTag::C44 => (
            4.0,
            1.0,
            1.0,
            0.5,
            2.0,
            PI / 12.0,
            vec![
                GEntry { p: "Id", a: ZERO, b: ZERO },
                GEntry { p: "1", a: aff(s(-0.5, 0.0), s(-0.5, 0.0)), b: aff(s(0.5, 0.0), s(-0.5, 0.0)) },
                GEntry { p: "11", a: aff(s(-1.0, 0.0), s(0.0, 0.0)), b: aff(s(0.0, 0.0), s(-1.0, 0.0)) },
                GEntry { p: "111", a: aff(s(-0.5, 0.0), s(0.5, 0.0)), b: aff(s(-0.5, 0.0), s(-0.5, 0.0)) },
            ],
        ),
        CaseTag::C26 => (
            4.0,
            1.0,
            3.0,
            0.25,
            1.0,
            PI / 12.0,
            vec![
                GEntry { p: "Id", a: ZERO, b: ZERO },
                GEntry { p: "1", a: aff(s(1.0, 0.0), s(0.0, 0.0)), b: aff(s(0.0, 0.0), s(0.0, -1.0 / 3.0)) },
                GEntry { p: "2", a: aff(s(-0.25, 0.0), s(0.0, 0.25)), b: aff(s(-0.25, 0.0), s(0.0, -twelfth)) },
                GEntry { p: "21", a: aff(s(0.25, 0.0), s(0.0, -0.25)), b: aff(s(-0.75, 0.0), s(0.0, -0.25)) },
                GEntry { p: "22", a: aff(s(-0.75, 0.0), s(0.0, 0.25)), b: aff(s(-0.25, 0.0), s(0.0, -0.25)) },
                GEntry { p: "221", a: aff(s(-1.25, 0.0), s(0.0, -0.25)), b: aff(s(-0.75, 0.0), s(0.0, -twelfth)) },
            ],
        ),
        CaseTag::C36 => (
            3.0,
            3.0,
            1.0,
            1.0 / 3.0,
            1.0,
            PI / 12.0,
            vec![
                GEntry { p: "Id", a: ZERO, b: ZERO },
                GEntry { p: "2", a: aff(s(-sixth, 0.0), s(0.0, sixth)), b: aff(s(-0.5, 0.0), s(0.0, -sixth)) },
                GEntry { p: "22", a: aff(s(-0.5, 0.0), s(0.0, sixth)), b: aff(s(-0.5, 0.0), s(0.0, -0.5)) },
                GEntry { p: "112", a: aff(s(5.0 * sixth, 0.0), s(0.0, -sixth)), b: aff(s(-0.5, 0.0), s(0.0, -sixth)) },
                GEntry { p: "221", a: aff(s(-0.5, 0.0), s(0.0, -sixth)), b: aff(s(-1.5, 0.0), s(0.0, -0.5)) },
                GEntry { p: "222", a: aff(s(-2.0 / 3.0, 0.0), s(0.0, 0.0)), b: aff(s(0.0, 0.0), s(0.0, -2.0 / 3.0)) },
            ],
        ),
    };
    GTable { tag, scale, cu, cv, bound_factor, k_target, theta_limit, entries }
}

/// Result of scanning every g-table box at one t.
#[derive(Clone, Debug, PartialEq)]
pub struct GScan {
    pub t: f64,
    pub passed: bool,
    pub points_checked: usize,
    pub min_g: f64,
    /// Lattice points where g vanishes (equality cases), as (p, u, v).
    pub zeros: Vec<(&'static str, i64, i64)>,
    /// Entries whose box holds no admissible lattice point.
    pub empty_boxes: Vec<&'static str>,
}

pub fn gtable_scan(tag: CaseTag, t: f64) -> Result<GScan> {
    let table = gtable(tag);
    let limit = table.t_limit();
    if !(t.abs() <= limit + BOUNDARY_SLACK) {
        return Err(Error::OutOfCertifiedRange { t, limit });
    }
    let (gu, gv) = table.half_widths(t);
    let mut scan = GScan {
        t,
        passed: true,
        points_checked: 0,
        min_g: f64::INFINITY,
        zeros: Vec::new(),
        empty_boxes: Vec::new(),
    };
    for e in &table.entries {
        let (a, b) = (e.a.at(t), e.b.at(t));
        let mut hits = 0;
        for u in (a - gu - 1e-9).ceil() as i64..=(a + gu + 1e-9).floor() as i64 {
            for v in (b - gv - 1e-9).ceil() as i64..=(b + gv + 1e-9).floor() as i64 {
                if (u - v).rem_euclid(2) != 0 || (e.p == "Id" && u == 0 && v == 0) {
                    continue;
                }
                hits += 1;
                let g = table.g(e, t, u, v);
                scan.points_checked += 1;
                scan.min_g = scan.min_g.min(g);
                if g.abs() < 1e-12 {
                    scan.zeros.push((e.p, u, v));
                }
                if g < -1e-12 {
                    scan.passed = false;
                }
            }
        }
        if hits == 0 {
            scan.empty_boxes.push(e.p);
        }
    }
    Ok(scan)
}

pub fn gtable_certify(tag: CaseTag, t: f64) -> Result<bool> {
    Ok(gtable_scan(tag, t)?.passed)
}

/// Base points p = w(0) of the remainder words.
pub fn base_points(tag: CaseTag, planar: &PlanarGroup) -> Vec<C64> {
    let (n1, n2) = tag.orders();
    case_data(tag)
        .remainder
        .iter()
        .map(|w| {
            debug_assert!(w.uses(1) || w.uses(2) || w.is_empty());
            let _ = (n1, n2);
            planar.apply(w, c(0.0, 0.0))
        })
        .collect()
}

/// min |p + x v1 + y v2|^2 over remainder base points and |x|, |y| <= window,
/// excluding p = 0 with x = y = 0.
pub fn min_orbit_sq_direct(tag: CaseTag, r: f64, theta: f64, window: i64) -> f64 {
    let planar = PlanarGroup::new(tag, r, theta);
    let lt = closed_forms(tag, r, theta);
    let mut best = f64::INFINITY;
    for (i, p) in base_points(tag, &planar).into_iter().enumerate() {
        for x in -window..=window {
            for y in -window..=window {
                if i == 0 && x == 0 && y == 0 {
                    continue;
                }
                best = best.min((p + lt.v1 * x as f64 + lt.v2 * y as f64).norm_sqr());
            }
        }
    }
    best
}

/// Deduplicated images f(0) over words f in {j1, j2} of at most `max_len`
/// syllables, sorted by (re, im).
pub fn planar_orbit_bruteforce(cfg: &TriangleConfig, max_len: usize, exec: Exec) -> Vec<C64> {
    let planar = PlanarGroup::from_config(cfg);
    let all: Vec<Word> = enumerate_words(&[1, 2], max_len, cfg.orders()).collect();
    let pts = exec.map(&all, |w| planar.apply(w, c(0.0, 0.0)));
    dedup_points(pts, 1e-9)
}

pub fn dedup_points(mut pts: Vec<C64>, radius: f64) -> Vec<C64> {
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut kept: Vec<C64> = Vec::with_capacity(pts.len());
    for p in pts {
        let dup = kept.iter().rev().take_while(|q| q.re > p.re - radius).any(|q| (q - p).norm() < radius);
        if !dup {
            kept.push(p);
        }
    }
    kept.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    kept
}

/// Distance from z to the nearest point of the union of cosets p + Z v1 + Z v2.
pub fn coset_distance(tag: CaseTag, cfg: &TriangleConfig, z: C64) -> f64 {
    let planar = PlanarGroup::from_config(cfg);
    let lt = closed_forms(tag, cfg.r(), cfg.theta);
    let (v1, v2) = (lt.v1, lt.v2);
    let det = v1.re * v2.im - v1.im * v2.re;
    let mut best = f64::INFINITY;
    for p in base_points(tag, &planar) {
        let d = z - p;
        let x = ((d.re * v2.im - d.im * v2.re) / det).round();
        let y = ((v1.re * d.im - v1.im * d.re) / det).round();
        // The nearest lattice point is among the neighbours of the rounded coordinates.
        for dx in -1..=1 {
            for dy in -1..=1 {
                let q = p + v1 * (x + dx as f64) + v2 * (y + dy as f64);
                best = best.min((z - q).norm());
            }
        }
    }
    best
}

/// Minimum planar image size over the orbit, skipping words that act as the
/// identity on the plane. Used as a necessary-condition check only.
pub fn min_planar_image(cfg: &TriangleConfig, max_len: usize, exec: Exec) -> f64 {
    let planar = PlanarGroup::from_config(cfg);
    let all: Vec<Word> = enumerate_words(&[1, 2], max_len, cfg.orders()).collect();
    exec.map(&all, |w| if planar.is_identity(w) { f64::INFINITY } else { planar.apply(w, c(0.0, 0.0)).norm() })
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Finite-length necessary conditions for the compression argument:
/// nu >= 2 and |f(0)| >= 2 for every planar word f != Id of at most
/// `max_len` syllables. Passing does not certify anything on its own.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NecessaryCheck {
    pub max_len: usize,
    pub nu: f64,
    pub min_image: f64,
}

impl NecessaryCheck {
    pub fn holds(&self) -> bool {
        self.nu >= 2.0 && self.min_image >= 2.0 - 1e-9
    }
}

pub fn orbit_necessary_check(tag: CaseTag, m: f64, alpha: f64, max_len: usize, exec: Exec) -> Result<NecessaryCheck> {
    let cfg = case_config(tag, m, alpha)?;
    Ok(NecessaryCheck { max_len, nu: vertical_amount(tag, m, alpha), min_image: min_planar_image(&cfg, max_len, exec) })
}

pub fn m_threshold(tag: CaseTag) -> f64 {
    match tag {
        CaseTag::C23 => 3f64.ln(),
        CaseTag::C24 | CaseTag::C44 => (3.0 + 2.0 * 2f64.sqrt()).ln(),
        CaseTag::C26 | CaseTag::C36 => (7.0 + 4.0 * SQRT3).ln(),
    }
}

/// Upper bound on cos(alpha) in the compression conditions.
pub fn cos_alpha_bound(tag: CaseTag) -> f64 {
    match tag {
        CaseTag::C23 => -0.5,
        _ => -SQRT3 / 2.0,
    }
}

/// Constant D of the non-discreteness threshold cos(alpha) > 1 - 1/(D cosh^2(m/2)).
pub fn shimizu_constant(tag: CaseTag) -> f64 {
    match tag {
        CaseTag::C23 => 24.0 * SQRT3,
        CaseTag::C24 => 16.0,
        CaseTag::C44 => 4.0,
        CaseTag::C26 => 4.0 * SQRT3,
        CaseTag::C36 => 2.0 * SQRT3,
    }
}

pub fn vertical_amount(tag: CaseTag, m: f64, alpha: f64) -> f64 {
    closed_forms(tag, (m / 2.0).cosh(), theta_of(alpha)).nu
}

pub fn vertical_shift_ok(tag: CaseTag, m: f64, alpha: f64) -> bool {
    vertical_amount(tag, m, alpha) >= 2.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct Compression {
    pub m_ok: bool,
    pub cos_ok: bool,
    pub nu: f64,
    pub vertical_shift_ok: bool,
    /// K r^2 >= 4, i.e. the lattice bound gives |f(0)| >= 2.
    pub orbit_bound_ok: bool,
    pub gtable: Option<GScan>,
}

impl Compression {
    pub fn closed(&self) -> bool {
        self.m_ok && self.cos_ok
    }

    pub fn certified(&self) -> bool {
        self.closed()
            && self.vertical_shift_ok
            && self.orbit_bound_ok
            && self.gtable.as_ref().is_some_and(|g| g.passed)
    }

    fn failure(&self, tag: CaseTag) -> String {
        let mut why = Vec::new();
        if !self.m_ok {
            why.push(format!("m<{}", crate::report::fmt_num(m_threshold(tag))));
        }
        if !self.cos_ok {
            why.push(format!("cos(alpha)>{}", crate::report::fmt_num(cos_alpha_bound(tag))));
        }
        why.join(" ")
    }
}

pub fn compression_certified(tag: CaseTag, m: f64, alpha: f64) -> Result<Compression> {
    let theta = theta_of(alpha);
    let r = (m / 2.0).cosh();
    let table = gtable(tag);
    let m_ok = m >= m_threshold(tag) - BOUNDARY_SLACK;
    let cos_ok = alpha.cos() <= cos_alpha_bound(tag) + BOUNDARY_SLACK;
    let nu = vertical_amount(tag, m, alpha);
    let mut out = Compression {
        m_ok,
        cos_ok,
        nu,
        vertical_shift_ok: nu >= 2.0,
        orbit_bound_ok: table.k_target * r * r >= 4.0 - 1e-9,
        gtable: None,
    };
    if out.closed() {
        out.gtable = Some(gtable_scan(tag, theta.tan())?);
        if !out.certified() {
            return Err(Error::InternalInconsistency(format!(
                "{tag}: closed conditions hold at m={m}, alpha={alpha} but a sub-check failed: {out:?}"
            )));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Inconclusive {
    AtLeastTwo,
    Exceptional { q: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ShimizuOutcome {
    NonDiscrete { s: f64 },
    Inconclusive { s: f64, reason: Inconclusive },
}

impl ShimizuOutcome {
    pub fn s(&self) -> f64 {
        match *self {
            ShimizuOutcome::NonDiscrete { s } | ShimizuOutcome::Inconclusive { s, .. } => s,
        }
    }

    pub fn is_non_discrete(&self) -> bool {
        matches!(self, ShimizuOutcome::NonDiscrete { .. })
    }
}

/// q >= 3 with |x - cos(pi/q)| < tol, scanning around the nearest candidate.
fn exceptional_q(x: f64, tol: f64) -> Option<u64> {
    if !(x > 0.0 && x < 1.0) {
        return None;
    }
    let q0 = (PI / x.acos()).round() as u64;
    (q0.saturating_sub(1)..=q0 + 1).filter(|&q| q >= 3).find(|&q| (x - (PI / q as f64).cos()).abs() < tol)
}

/// Shimizu-type test for a group containing a vertical translation by t and
/// an element whose isometric sphere has radius r_h.
pub fn shimizu_test(t: f64, r_h: f64) -> Result<ShimizuOutcome> {
    if !(t > 0.0 && r_h > 0.0) {
        return Err(Error::NonPositiveInput);
    }
    let s = t / (r_h * r_h);
    if s >= 2.0 {
        return Ok(ShimizuOutcome::Inconclusive { s, reason: Inconclusive::AtLeastTwo });
    }
    match exceptional_q(s / 2.0, EXCEPTIONAL_TOL / 2.0) {
        Some(q) => Ok(ShimizuOutcome::Inconclusive { s, reason: Inconclusive::Exceptional { q } }),
        None => Ok(ShimizuOutcome::NonDiscrete { s }),
    }
}

pub fn isometric_sphere_radius(m: &HMatrix) -> Result<f64> {
    if act_on_boundary(m, &HeisPoint::Infinity)? == HeisPoint::Infinity {
        return Err(Error::FixesInfinity);
    }
    let scale = m.det().norm().cbrt();
    let h = m.scale(c(1.0 / scale, 0.0)).0;
    let val = (h[1][1] - h[1][2] + h[2][1] - h[2][2]).norm();
    if val < 1e-300 {
        return Err(Error::DegenerateSphere);
    }
    Ok((2.0 / val).sqrt())
}

pub fn nondiscrete_by_case(tag: CaseTag, m: f64, alpha: f64) -> Result<ShimizuOutcome> {
    let cfg = case_config(tag, m, alpha)?;
    nondiscrete_in_config(tag, &cfg)
}

fn nondiscrete_in_config(tag: CaseTag, cfg: &TriangleConfig) -> Result<ShimizuOutcome> {
    let r_h = isometric_sphere_radius(&cfg.gens[2])?;
    let nu = closed_forms(tag, cfg.r(), cfg.theta).nu;
    let shimizu = shimizu_test(nu, r_h)?;

    // The same condition written as cos(alpha) > 1 - 1/(D r^2), excluding
    // cos(alpha) = 1 - cos(pi/q)/(D r^2).
    let d = shimizu_constant(tag) * cfg.r() * cfg.r();
    let ca = cfg.alpha.cos();
    let x = d * (1.0 - ca);
    let closed = ca > 1.0 - 1.0 / d && exceptional_q(x, EXCEPTIONAL_TOL / 2.0).is_none();
    if closed != shimizu.is_non_discrete() {
        let s = shimizu.s();
        let near_edge = (s - 2.0).abs() < EXCEPTIONAL_TOL || exceptional_q(s / 2.0, EXCEPTIONAL_TOL).is_some();
        if near_edge {
            return Ok(ShimizuOutcome::Inconclusive { s, reason: Inconclusive::AtLeastTwo });
        }
        return Err(Error::InternalInconsistency(format!(
            "{tag}: Shimizu route gives {shimizu:?}, closed inequality gives {closed} at m={}, alpha={}",
            cfg.ty.m1, cfg.alpha
        )));
    }
    Ok(shimizu)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    DiscreteCertified,
    NonDiscrete,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::DiscreteCertified => "discrete-certified",
            Verdict::NonDiscrete => "non-discrete",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Discrete { compression: Compression },
    NonDiscrete { shimizu: ShimizuOutcome },
    Unknown { compression: Compression, shimizu: ShimizuOutcome },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub tag: CaseTag,
    pub m: f64,
    pub alpha: f64,
    pub verdict: Verdict,
    pub certificate: Certificate,
}

impl Classification {
    /// One-line summary without commas, for CSV.
    pub fn detail(&self) -> String {
        use crate::report::fmt_num;
        let shimizu_text = |sh: &ShimizuOutcome| match *sh {
            ShimizuOutcome::NonDiscrete { s } => format!("s={} below 2 and not exceptional", fmt_num(s)),
            ShimizuOutcome::Inconclusive { s, reason: Inconclusive::AtLeastTwo } => format!("s={}>=2", fmt_num(s)),
            ShimizuOutcome::Inconclusive { s, reason: Inconclusive::Exceptional { q } } => {
                format!("s={} exceptional q={q}", fmt_num(s))
            }
        };
        match &self.certificate {
            Certificate::Discrete { compression } => {
                let g = compression.gtable.as_ref().map(|g| g.min_g).unwrap_or(f64::NAN);
                format!("compression nu={} gmin={}", fmt_num(compression.nu), fmt_num(g))
            }
            Certificate::NonDiscrete { shimizu } => shimizu_text(shimizu),
            Certificate::Unknown { compression, shimizu } => {
                format!("{}; {}", compression.failure(self.tag), shimizu_text(shimizu))
            }
        }
    }
}

pub fn classify(tag: CaseTag, m: f64, alpha: f64) -> Result<Classification> {
    if !(m >= 0.0) {
        return Err(Error::NonPositiveInput);
    }
    let cfg = case_config(tag, m, alpha)?;
    let compression = compression_certified(tag, m, alpha)?;
    if compression.certified() {
        return Ok(Classification {
            tag,
            m,
            alpha,
            verdict: Verdict::DiscreteCertified,
            certificate: Certificate::Discrete { compression },
        });
    }
    let shimizu = nondiscrete_in_config(tag, &cfg)?;
    let (verdict, certificate) = if shimizu.is_non_discrete() {
        (Verdict::NonDiscrete, Certificate::NonDiscrete { shimizu })
    } else {
        (Verdict::Unknown, Certificate::Unknown { compression, shimizu })
    };
    Ok(Classification { tag, m, alpha, verdict, certificate })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub tag: CaseTag,
    pub m_range: (f64, f64),
    pub alpha_range: (f64, f64),
    pub res_m: usize,
    pub res_alpha: usize,
}

impl SweepSpec {
    /// Full alpha range (0, 2pi).
    pub fn new(tag: CaseTag, m_range: (f64, f64), res_m: usize, res_alpha: usize) -> Self {
        SweepSpec { tag, m_range, alpha_range: (0.0, 2.0 * PI), res_m, res_alpha }
    }

    pub fn cell_m(&self) -> f64 {
        (self.m_range.1 - self.m_range.0) / self.res_m as f64
    }

    pub fn cell_alpha(&self) -> f64 {
        (self.alpha_range.1 - self.alpha_range.0) / self.res_alpha as f64
    }

    /// Cell centres.
    pub fn m_at(&self, i: usize) -> f64 {
        self.m_range.0 + (i as f64 + 0.5) * self.cell_m()
    }

    pub fn alpha_at(&self, j: usize) -> f64 {
        self.alpha_range.0 + (j as f64 + 0.5) * self.cell_alpha()
    }

    pub fn validate(&self) -> Result<()> {
        if self.res_m < 2 || self.res_alpha < 2 {
            return Err(Error::InvalidGrid(format!("resolution {}x{} (need at least 2x2)", self.res_m, self.res_alpha)));
        }
        let (m0, m1) = self.m_range;
        let (a0, a1) = self.alpha_range;
        if !(m0 >= 0.0 && m1 > m0 && m1.is_finite()) {
            return Err(Error::InvalidGrid(format!("m range {m0}:{m1}")));
        }
        if !(a0 >= 0.0 && a1 > a0 && a1 <= 2.0 * PI + 1e-12) {
            return Err(Error::InvalidGrid(format!("alpha range {a0}:{a1} (must lie in [0, 2pi])")));
        }
        Ok(())
    }
}

/// Classifications in row-major order: row j is alpha_at(j), column i is m_at(i).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub spec: SweepSpec,
    pub cells: Vec<Classification>,
}

impl SweepGrid {
    pub fn at(&self, i: usize, j: usize) -> &Classification {
        &self.cells[j * self.spec.res_m + i]
    }
}

pub fn sweep(spec: &SweepSpec) -> Result<SweepGrid> {
    sweep_with(spec, Exec::default())
}

pub fn sweep_with(spec: &SweepSpec, exec: Exec) -> Result<SweepGrid> {
    spec.validate()?;
    let idx: Vec<usize> = (0..spec.res_m * spec.res_alpha).collect();
    let cells = exec
        .map(&idx, |&k| classify(spec.tag, spec.m_at(k % spec.res_m), spec.alpha_at(k / spec.res_m)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid { spec: *spec, cells })
}
