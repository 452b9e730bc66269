//! The [m1,m2,0;n1,n2,n3] configuration: polar vectors, generators, and the
//! five implemented cases.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hermitian::{c, herm_form, reflection_matrix, root_of_unity, HMatrix, HVector, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleType {
    pub m1: f64,
    pub m2: f64,
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
}

impl TriangleType {
    pub fn new(m1: f64, m2: f64, n1: u32, n2: u32, n3: u32) -> Result<Self> {
        for n in [n1, n2, n3] {
            if n < 2 {
                return Err(Error::InvalidOrder(n));
            }
        }
        if !(m1 >= 0.0 && m2 >= 0.0) || !m1.is_finite() || !m2.is_finite() {
            return Err(Error::Parse(format!("distances must be finite and >= 0, got {m1}, {m2}")));
        }
        Ok(TriangleType { m1, m2, n1, n2, n3 })
    }

    pub fn with_m(&self, m: f64) -> Result<Self> {
        TriangleType::new(m, m, self.n1, self.n2, self.n3)
    }
}

impl FromStr for TriangleType {
    type Err = Error;

    /// Parses "[m1,m2,m3;n1,n2,n3]", ignoring whitespace. Only m3 = 0 is supported.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected \"[m1,m2,m3;n1,n2,n3]\", got {s:?}")))?;
        let (ms, ns) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing ';' in {s:?}")))?;
        let ms: Vec<f64> = ms
            .split(',')
            .map(|x| x.parse::<f64>().map_err(|_| Error::Parse(format!("bad distance {x:?}"))))
            .collect::<Result<_>>()?;
        let ns: Vec<u32> = ns
            .split(',')
            .map(|x| x.parse::<u32>().map_err(|_| Error::Parse(format!("bad order {x:?}"))))
            .collect::<Result<_>>()?;
        if ms.len() != 3 || ns.len() != 3 {
            return Err(Error::Parse(format!("expected three distances and three orders in {s:?}")));
        }
        if ms[2] != 0.0 {
            return Err(Error::UnsupportedCase(format!("m3 = {} (only m3 = 0 is constructed)", ms[2])));
        }
        TriangleType::new(ms[0], ms[1], ns[0], ns[1], ns[2])
    }
}

impl fmt::Display for TriangleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},0;{},{},{}]", self.m1, self.m2, self.n1, self.n2, self.n3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    C23,
    C24,
    C44,
    C26,
    C36,
}

impl CaseTag {
    pub const ALL: [CaseTag; 5] = [CaseTag::C23, CaseTag::C24, CaseTag::C44, CaseTag::C26, CaseTag::C36];

    pub fn orders(&self) -> (u32, u32) {
        match self {
            CaseTag::C23 => (2, 3),
            CaseTag::C24 => (2, 4),
            CaseTag::C44 => (4, 4),
            CaseTag::C26 => (2, 6),
            CaseTag::C36 => (3, 6),
        }
    }

    pub fn triangle_type(&self, m: f64) -> TriangleType {
        let (n1, n2) = self.orders();
        TriangleType { m1: m, m2: m, n1, n2, n3: 2 }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.orders();
        write!(f, "C{a}{b}")
    }
}

impl FromStr for CaseTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CaseTag::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown case {s:?}")))
    }
}

pub fn existence_check(m1: f64, m2: f64, m3: f64, alpha: f64) -> bool {
    let (r1, r2, r3) = ((m1 / 2.0).cosh(), (m2 / 2.0).cosh(), (m3 / 2.0).cosh());
    alpha.cos() < (r1 * r1 + r2 * r2 + r3 * r3 - 1.0) / (2.0 * r1 * r2 * r3)
}

pub fn admissible_orders(n1: u32, n2: u32) -> bool {
    let (a, b) = if n1 <= n2 { (n1, n2) } else { (n2, n1) };
    matches!((a, b), (2, 2) | (2, 3) | (2, 4) | (2, 6) | (3, 3) | (3, 6) | (4, 4))
}

pub fn case_of(t: &TriangleType) -> Result<CaseTag> {
    if t.m1 != t.m2 {
        return Err(Error::UnsupportedCase(format!("m1 = {} differs from m2 = {}", t.m1, t.m2)));
    }
    if t.n3 != 2 {
        return Err(Error::UnsupportedCase(format!("n3 = {} (only n3 = 2 is implemented)", t.n3)));
    }
    match (t.n1, t.n2) {
        (2, 3) => Ok(CaseTag::C23),
        (2, 4) => Ok(CaseTag::C24),
        (4, 4) => Ok(CaseTag::C44),
        (2, 6) => Ok(CaseTag::C26),
        (3, 6) => Ok(CaseTag::C36),
        (a, b) if admissible_orders(a, b) => Err(Error::UnsupportedCase(format!(
            "orders ({a},{b}) are admissible but not one of the five implemented cases"
        ))),
        (a, b) => Err(Error::UnsupportedCase(format!("orders ({a},{b}) are not admissible"))),
    }
}

/// Angular invariant arg(<c3,c2><c1,c3><c2,c1>) in [0, 2pi).
pub fn angular_invariant(c1: &HVector, c2: &HVector, c3: &HVector) -> Result<f64> {
    let cs = [c1, c2, c3];
    let mut prod = c(1.0, 0.0);
    for k in 0..3 {
        let f = herm_form(cs[(k + 2) % 3], cs[(k + 1) % 3]);
        if f.norm() == 0.0 {
            return Err(Error::DegenerateProduct);
        }
        prod *= f;
    }
    let a = prod.arg();
    Ok(if a < 0.0 { a + 2.0 * PI } else { a })
}

/// theta = (pi - alpha) / 2.
pub fn theta_of(alpha: f64) -> f64 {
    (PI - alpha) / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleConfig {
    pub ty: TriangleType,
    pub alpha: f64,
    pub theta: f64,
    pub r1: f64,
    pub r2: f64,
    pub polars: [HVector; 3],
    pub gens: [HMatrix; 3],
    /// Base points of the vertical chains C1 and C2.
    pub phi: [C64; 2],
    pub mu: [C64; 2],
}

impl TriangleConfig {
    pub fn orders(&self) -> [u32; 3] {
        [self.ty.n1, self.ty.n2, self.ty.n3]
    }

    /// r = cosh(m/2) when m1 = m2.
    pub fn r(&self) -> f64 {
        self.r1
    }

    /// Planar rotation j_k(z) = mu_k z + (1 - mu_k) phi_k, k in {1, 2}.
    pub fn planar(&self, k: u8, z: C64) -> C64 {
        let i = (k - 1) as usize;
        self.mu[i] * z + (c(1.0, 0.0) - self.mu[i]) * self.phi[i]
    }
}

pub fn build_config(ty: &TriangleType, alpha: f64) -> Result<TriangleConfig> {
    if !(alpha > 0.0 && alpha < 2.0 * PI) {
        return Err(Error::UnsupportedAlpha(alpha));
    }
    if !existence_check(ty.m1, ty.m2, 0.0, alpha) {
        return Err(Error::ExistenceFails);
    }
    let theta = theta_of(alpha);
    let (r1, r2) = ((ty.m1 / 2.0).cosh(), (ty.m2 / 2.0).cosh());
    let e = C64::from_polar(1.0, theta);
    let one = c(1.0, 0.0);
    let c1 = HVector::new(one, -e.conj() * r2, e.conj() * r2);
    let c2 = HVector::new(one, e * r1, -e * r1);
    let c3 = HVector::real(0.0, 1.0, 0.0);
    let gens = [
        reflection_matrix(&c1, ty.n1)?,
        reflection_matrix(&c2, ty.n2)?,
        reflection_matrix(&c3, ty.n3)?,
    ];
    Ok(TriangleConfig {
        ty: *ty,
        alpha,
        theta,
        r1,
        r2,
        polars: [c1, c2, c3],
        gens,
        phi: [e * r2, -e.conj() * r1],
        mu: [root_of_unity(ty.n1), root_of_unity(ty.n2)],
    })
}

/// Configuration for one of the five cases at (m, alpha).
pub fn case_config(tag: CaseTag, m: f64, alpha: f64) -> Result<TriangleConfig> {
    build_config(&tag.triangle_type(m), alpha)
}
