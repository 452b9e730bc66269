//! Per-case lattice data: the translations T1, T2, the vertical translation H,
//! the printed relation tables, normal forms T1^x T2^y H^n w, and the checks
//! that tie them to the actual matrices.

use crate::error::{Error, Result};
use crate::heisenberg::{act_on_boundary, classify_isometry, HeisPoint, IsometryClass};
use crate::hermitian::{c, proj_residual, HMatrix, C64};
use crate::triangle::{CaseTag, TriangleConfig};
use crate::words::{enumerate_words, eval_word, Word};
use crate::Exec;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Which commutator equals a power of H.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommutatorOrder {
    /// [T1,T2] = H^p
    T1T2,
    /// [T2,T1] = H^p
    T2T1,
}

/// One printed identity "lhs = rhs". Lines sharing a `dispute` label are
/// competing readings of a single line; exactly one of them should hold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Relation {
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub dispute: Option<&'static str>,
}

const fn rel(lhs: &'static str, rhs: &'static str) -> Relation {
    Relation { lhs, rhs, dispute: None }
}

const fn disputed(lhs: &'static str, rhs: &'static str, label: &'static str) -> Relation {
    Relation { lhs, rhs, dispute: Some(label) }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseData {
    pub tag: CaseTag,
    pub t1: Word,
    pub t2: Word,
    pub h: Word,
    pub commutator: CommutatorOrder,
    /// p in [T_a,T_b] = H^p.
    pub h_power: i64,
    /// H^p = (i1 i2)^k.
    pub twelve_power: u32,
    pub remainder: Vec<Word>,
    pub relations: Vec<Relation>,
    /// Words asserted to be Heisenberg translations.
    pub translation_claims: Vec<Word>,
}

/// (v1,t1), (v2,t2) and the vertical amount nu of H.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeTranslations {
    pub v1: C64,
    pub t1: f64,
    pub v2: C64,
    pub t2: f64,
    pub nu: f64,
}

pub fn closed_forms(tag: CaseTag, r: f64, theta: f64) -> LatticeTranslations {
    let (s, co) = theta.sin_cos();
    let rc = r * co;
    let rr = r * r;
    let (v1, t1, v2, t2, nu) = match tag {
        CaseTag::C23 => (
            c(0.0, 4.0 * SQRT3 * rc),
            32.0 * SQRT3 * rr * co * co,
            c(3.0, SQRT3) * (2.0 * rc),
            24.0 * rr * s * co - 8.0 * SQRT3 * rr * co * co,
            96.0 * SQRT3 * rr * co * co,
        ),
        CaseTag::C24 => (c(0.0, 4.0 * rc), 16.0 * rr * co * co, c(4.0 * rc, 0.0), 16.0 * rr * s * co, 64.0 * rr * co * co),
        CaseTag::C44 => (
            c(1.0, 1.0) * (2.0 * rc),
            8.0 * rr * s * co,
            c(1.0, -1.0) * (-2.0 * rc),
            -8.0 * rr * s * co,
            16.0 * rr * co * co,
        ),
        CaseTag::C26 => (
            c(1.0, SQRT3) * (2.0 * rc),
            8.0 * SQRT3 * rr * co * co + 8.0 * rr * s * co,
            c(1.0, -SQRT3) * (-2.0 * rc),
            8.0 * SQRT3 * rr * co * co - 8.0 * rr * s * co,
            16.0 * SQRT3 * rr * co * co,
        ),
        CaseTag::C36 => (
            c(3.0, SQRT3) * rc,
            12.0 * rr * s * co,
            c(3.0, -SQRT3) * (-rc),
            -12.0 * rr * s * co,
            8.0 * SQRT3 * rr * co * co,
        ),
    };
    LatticeTranslations { v1, t1, v2, t2, nu }
}

fn words(list: &[&str], orders: [u32; 3]) -> Vec<Word> {
    list.iter().map(|s| Word::parse(s, orders).expect("static word")).collect()
}

pub fn case_data(tag: CaseTag) -> CaseData {
    let (n1, n2) = tag.orders();
    let o = [n1, n2, 2];
    let w = |s: &str| Word::parse(s, o).expect("static word");
    match tag {
        CaseTag::C23 => CaseData {
            tag,
            t1: w("21212"),
            t2: w("12212"),
            h: w("121212121212"),
            commutator: CommutatorOrder::T1T2,
            h_power: 1,
            twelve_power: 6,
            remainder: words(&["Id", "1", "2", "12", "22", "122"], o),
            relations: vec![
                rel("12122", "T2 T1^-1"),
                rel("21221", "T1 T2^-1"),
                rel("22121", "T2^-1"),
                rel("12121", "T2 T1^-1 221"),
                rel("22122", "T1^-1 21"),
                rel("21", "T1 T2^-1 12"),
                rel("212", "T1 T2^-1 122"),
                rel("1212", "T2 T1^-1 22"),
                disputed("2122", "T1 T2^-1 1", "2122"),
                disputed("2122", "T2^-1 1", "2122"),
                rel("121", "T2 T1^-1 2"),
                rel("221", "T2^-1 122"),
                rel("1221", "T2 22"),
                rel("2121", "T1 22"),
                rel("H", "[T1,T2]"),
                rel("H T1", "T1 H"),
                rel("H T2", "T2 H"),
                rel("T2 H T2^-1", "(12)^6"),
                rel("H", "(12)^6"),
                rel("T2 T1", "T1 T2 H^-1"),
            ],
            translation_claims: words(&["21212", "12212", "22121", "21221", "12122"], o),
        },
        CaseTag::C24 => CaseData {
            tag,
            t1: w("212"),
            t2: w("122"),
            h: w("12121212"),
            commutator: CommutatorOrder::T1T2,
            h_power: 1,
            twelve_power: 4,
            remainder: words(&["Id", "1", "2", "21"], o),
            relations: vec![
                rel("221", "T2^-1"),
                rel("121", "T2 T1^-1 2"),
                rel("222", "T1^-1 21"),
                rel("12", "T2 T1^-1 21"),
                rel("22", "T2^-1 1"),
                rel("H", "[T1,T2]"),
                rel("H T1", "T1 H"),
                rel("H T2", "T2 H"),
                rel("T2 H T2^-1", "(12)^4"),
                rel("H", "(12)^4"),
                rel("T2 T1", "T1 T2 H^-1"),
            ],
            translation_claims: words(&["122", "212", "221"], o),
        },
        CaseTag::C44 => CaseData {
            tag,
            t1: w("1112"),
            t2: w("2111"),
            h: w("1212"),
            commutator: CommutatorOrder::T2T1,
            h_power: 2,
            twelve_power: 4,
            remainder: words(&["Id", "1", "11", "111"], o),
            relations: vec![
                rel("1121", "T1 H^-1 T2^-1 T1^-1"),
                rel("1221", "T2^-1 T1^-1"),
                rel("1122", "T1 H^-1 T2^-1"),
                rel("2121", "T2 T1 H^-1 T2^-1 T1^-1"),
                rel("2211", "T2 H T1^-1"),
                rel("2122", "T2 T1 H^-1 T2^-1"),
                rel("1211", "H T1^-1"),
                rel("2112", "T2 T1"),
                rel("1222", "T2^-1"),
                rel("2212", "T2 H"),
                rel("2221", "T1^-1"),
                rel("2", "T2 1"),
                rel("22", "T2 H T1^-1 11"),
                rel("211", "T2 111"),
                rel("12", "H T1^-1 11"),
                rel("112", "T1 H^-1 T2^-1 T1^-1 111"),
                rel("221", "T2 H T1^-1 111"),
                rel("21", "T2 11"),
                rel("121", "H T1^-1 111"),
                rel("122", "T2^-1 T1^-1 111"),
                rel("2121", "H"),
                rel("H T1", "T1 H"),
                rel("H T2", "T2 H"),
                rel("H^2", "[T2,T1]"),
                rel("H^2", "(12)^4"),
                rel("T2 T1", "T1 T2 H^2"),
            ],
            translation_claims: enumerate_words(&[1, 2], 4, o).filter(|x| x.letters() == 4).collect(),
        },
        CaseTag::C26 => CaseData {
            tag,
            t1: w("2122"),
            t2: w("2212"),
            h: w("121212"),
            commutator: CommutatorOrder::T2T1,
            h_power: 2,
            twelve_power: 6,
            remainder: words(&["Id", "1", "2", "21", "22", "221"], o),
            relations: vec![
                rel("1222", "H T2^-1 T1"),
                rel("2221", "T1^-1 T2 H^-1"),
                rel("1212", "H T2^-1 22"),
                rel("2121", "T1 T2^-1 22"),
                rel("1221", "H T2^-1 T1 T2^-1 22"),
                rel("2222", "T1^-1 21"),
                rel("12", "H T2^-1 21"),
                rel("212", "T1 T2^-1 221"),
                rel("121", "H T2^-1 2"),
                rel("222", "T1^-1 T2 H^-1 1"),
                rel("122", "H T2^-1 T1 T2^-1 221"),
                rel("212121", "H"),
                rel("H T1", "T1 H"),
                rel("H T2", "T2 H"),
                rel("H^2", "[T2,T1]"),
                rel("H^2", "(12)^6"),
                rel("T2 T1", "T1 T2 H^2"),
            ],
            translation_claims: words(&["1222", "2122", "2212", "2221", "121212"], o),
        },
        CaseTag::C36 => CaseData {
            tag,
            t1: w("1122"),
            t2: w("2211"),
            h: w("1212"),
            commutator: CommutatorOrder::T2T1,
            h_power: 3,
            twelve_power: 6,
            remainder: words(&["Id", "2", "22", "112", "221", "222"], o),
            relations: vec![
                rel("1221", "T2^-1 T1^-1"),
                rel("2112", "T1 T2 H^2"),
                rel("2121", "H"),
                rel("1121", "T2^-1 H 2"),
                rel("2122", "H 112"),
                rel("2222", "T1^-1 11"),
                rel("1211", "H^-1 T2^-1 T1^-1 2"),
                disputed("2212", "T2 112", "2212"),
                disputed("2212", "T2^2 112", "2212"),
                rel("1222", "T2^-1 H^-1 121"),
                rel("2221", "T2 H T1^-1 112"),
                rel("1", "T2^-1 22"),
                rel("21", "H T1 222"),
                rel("211", "H T1 T2 H T1^-1 112"),
                rel("11", "T2^-1 221"),
                rel("121", "H T1^-1 112"),
                rel("12", "T2^-1 222"),
                rel("122", "T2^-1 T1^-1 T2^-1 221"),
                rel("H T1", "T1 H"),
                rel("H T2", "T2 H"),
                rel("H^3", "[T2,T1]"),
                rel("H^3", "(12)^6"),
                rel("T2 T1", "T1 T2 H^3"),
            ],
            translation_claims: words(&["1122", "1212", "1221", "2112", "2121", "2211"], o),
        },
    }
}

/// Matrices of T1, T2, H for a configuration.
#[derive(Clone, Copy, Debug)]
pub struct LatticeMatrices {
    pub t1: HMatrix,
    pub t2: HMatrix,
    pub h: HMatrix,
}

impl LatticeMatrices {
    pub fn new(data: &CaseData, cfg: &TriangleConfig) -> Self {
        LatticeMatrices { t1: eval_word(&data.t1, cfg), t2: eval_word(&data.t2, cfg), h: eval_word(&data.h, cfg) }
    }

    fn named(&self, name: &str) -> Option<HMatrix> {
        match name {
            "T1" => Some(self.t1),
            "T2" => Some(self.t2),
            "H" => Some(self.h),
            _ => None,
        }
    }
}

/// Evaluates a space-separated product such as "T2 T1^-1 221", "[T1,T2]",
/// "(12)^6", "H^-1" or "Id".
pub fn eval_expr(expr: &str, cfg: &TriangleConfig, lm: &LatticeMatrices) -> Result<HMatrix> {
    let mut m = HMatrix::identity();
    for tok in expr.split_whitespace() {
        m = m * eval_factor(tok, cfg, lm)?;
    }
    Ok(m)
}

fn eval_factor(tok: &str, cfg: &TriangleConfig, lm: &LatticeMatrices) -> Result<HMatrix> {
    let bad = || Error::Parse(format!("bad factor {tok:?}"));
    if tok == "Id" {
        return Ok(HMatrix::identity());
    }
    if let Some(inner) = tok.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let a = lm.named(a).ok_or_else(bad)?;
        let b = lm.named(b).ok_or_else(bad)?;
        return Ok(a.inverse() * b.inverse() * a * b);
    }
    let (base, exp) = match tok.split_once('^') {
        Some((b, e)) => (b, e.parse::<i64>().map_err(|_| bad())?),
        None => (tok, 1),
    };
    if let Some(m) = lm.named(base) {
        return Ok(m.pow(exp));
    }
    if let Some(inner) = base.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
        let w = Word::parse(inner, cfg.orders())?;
        return Ok(eval_word(&w, cfg).pow(exp));
    }
    let w = Word::parse(tok, cfg.orders())?;
    Ok(eval_word(&w, cfg))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
    pub residual: f64,
    pub holds: bool,
    pub dispute: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Adjudication {
    pub label: String,
    pub candidates: Vec<String>,
    pub holding: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranslationClaim {
    pub word: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub tag: CaseTag,
    pub checks: Vec<RelationCheck>,
    pub adjudications: Vec<Adjudication>,
    pub claims: Vec<TranslationClaim>,
}

impl RelationReport {
    /// Every undisputed identity holds, every disputed line is resolved to
    /// exactly one reading, and every translation claim holds.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds || c.dispute.is_some())
            && self.adjudications.iter().all(|a| a.holding.len() == 1)
            && self.claims.iter().all(|c| c.holds)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.dispute.is_none())
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}

pub fn verify_relations(tag: CaseTag, cfg: &TriangleConfig, tol: f64) -> Result<RelationReport> {
    let data = case_data(tag);
    let lm = LatticeMatrices::new(&data, cfg);
    let mut checks = Vec::with_capacity(data.relations.len());
    for r in &data.relations {
        let residual = proj_residual(&eval_expr(r.lhs, cfg, &lm)?, &eval_expr(r.rhs, cfg, &lm)?);
        checks.push(RelationCheck {
            identity: format!("{} = {}", r.lhs, r.rhs),
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
            residual,
            holds: residual < tol,
            dispute: r.dispute.map(str::to_string),
        });
    }
    let mut adjudications: Vec<Adjudication> = Vec::new();
    for chk in checks.iter().filter(|c| c.dispute.is_some()) {
        let label = chk.dispute.clone().unwrap_or_default();
        let idx = match adjudications.iter().position(|a| a.label == label) {
            Some(i) => i,
            None => {
                adjudications.push(Adjudication { label, candidates: Vec::new(), holding: Vec::new() });
                adjudications.len() - 1
            }
        };
        adjudications[idx].candidates.push(chk.identity.clone());
        if chk.holds {
            adjudications[idx].holding.push(chk.identity.clone());
        }
    }
    let mut claims = Vec::new();
    for w in &data.translation_claims {
        let holds = matches!(
            classify_isometry(&eval_word(w, cfg)),
            Ok(IsometryClass::HeisTranslation { .. }) | Ok(IsometryClass::VerticalTranslation { .. })
        );
        claims.push(TranslationClaim { word: w.to_string(), holds });
    }
    Ok(RelationReport { tag, checks, adjudications, claims })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranslationCheck {
    pub name: &'static str,
    pub word: String,
    pub expected: (C64, f64),
    pub observed: Option<(C64, f64)>,
    pub rel_err: f64,
    pub vertical: bool,
}

impl TranslationCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.rel_err < tol && (self.name != "H" || self.vertical)
    }
}

/// Compares the Heisenberg translations of T1, T2, H with the closed forms.
pub fn check_translations(tag: CaseTag, cfg: &TriangleConfig) -> Result<Vec<TranslationCheck>> {
    let data = case_data(tag);
    let cf = closed_forms(tag, cfg.r(), cfg.theta);
    let items = [
        ("T1", &data.t1, (cf.v1, cf.t1)),
        ("T2", &data.t2, (cf.v2, cf.t2)),
        ("H", &data.h, (c(0.0, 0.0), cf.nu)),
    ];
    let mut out = Vec::new();
    for (name, w, expected) in items {
        let class = classify_isometry(&eval_word(w, cfg))?;
        let observed = class.translation();
        let rel_err = match observed {
            Some((xi, nu)) => {
                let scale = expected.0.norm().max(expected.1.abs());
                (xi - expected.0).norm().max((nu - expected.1).abs()) / scale
            }
            None => f64::INFINITY,
        };
        out.push(TranslationCheck {
            name,
            word: w.to_string(),
            expected,
            observed,
            rel_err,
            vertical: matches!(class, IsometryClass::VerticalTranslation { .. }),
        });
    }
    Ok(out)
}

/// T1^x T2^y H^n w, with `w` an index into the case's remainder set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub x: i64,
    pub y: i64,
    pub n: i64,
    pub w: usize,
}

/// Precomputed data for repeated normal-form computations in one configuration.
pub struct Lattice<'a> {
    pub cfg: &'a TriangleConfig,
    pub data: CaseData,
    pub mats: LatticeMatrices,
    /// Observed (v, t) of T1 and T2 and the amount of H.
    pub v: [(C64, f64); 2],
    pub nu: f64,
    rem_mats: Vec<HMatrix>,
    rem_rot: Vec<C64>,
}

/// Linear part of the planar action of a map fixing infinity.
fn rotation_factor(m: &HMatrix) -> Result<C64> {
    let f0 = act_on_boundary(m, &HeisPoint::origin())?.coords()?.0;
    let f1 = act_on_boundary(m, &HeisPoint::new(c(1.0, 0.0), 0.0))?.coords()?.0;
    Ok(f1 - f0)
}

impl<'a> Lattice<'a> {
    pub fn new(tag: CaseTag, cfg: &'a TriangleConfig) -> Result<Self> {
        let data = case_data(tag);
        let mats = LatticeMatrices::new(&data, cfg);
        let tr = |m: &HMatrix, name: &str| -> Result<(C64, f64)> {
            classify_isometry(m)?
                .translation()
                .ok_or_else(|| Error::InternalInconsistency(format!("{name} is not a Heisenberg translation")))
        };
        let v = [tr(&mats.t1, "T1")?, tr(&mats.t2, "T2")?];
        let nu = tr(&mats.h, "H")?.1;
        let rem_mats: Vec<HMatrix> = data.remainder.iter().map(|w| eval_word(w, cfg)).collect();
        let rem_rot = rem_mats.iter().map(rotation_factor).collect::<Result<Vec<_>>>()?;
        Ok(Lattice { cfg, data, mats, v, nu, rem_mats, rem_rot })
    }

    pub fn normal_form(&self, word: &Word) -> Result<NormalForm> {
        if word.uses(3) {
            return Err(Error::NotInE);
        }
        self.normal_form_of_matrix(&eval_word(word, self.cfg))
    }

    pub fn normal_form_of_matrix(&self, m: &HMatrix) -> Result<NormalForm> {
        let lam = rotation_factor(m)?;
        let (w, dist) = self
            .rem_rot
            .iter()
            .enumerate()
            .map(|(i, r)| (i, (r - lam).norm()))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        if dist > 1e-6 {
            return Err(Error::NoLatticeSolution(format!("rotation factor {lam} matches no remainder")));
        }
        let g = *m * self.rem_mats[w].inverse();
        let (xi, t) = classify_isometry(&g)?
            .translation()
            .ok_or_else(|| Error::NoLatticeSolution("stripped element is not a translation".into()))?;
        let (v1, t1) = self.v[0];
        let (v2, t2) = self.v[1];
        let det = v1.re * v2.im - v1.im * v2.re;
        let xf = (xi.re * v2.im - xi.im * v2.re) / det;
        let yf = (v1.re * xi.im - v1.im * xi.re) / det;
        let (x, y) = (xf.round(), yf.round());
        if (xf - x).abs() > 1e-6 || (yf - y).abs() > 1e-6 {
            return Err(Error::NoLatticeSolution(format!("x = {xf}, y = {yf} not integral")));
        }
        // T1^x T2^y = (x v1 + y v2, x t1 + y t2 + 2 Im(x v1 conj(y v2)))
        let base = x * t1 + y * t2 + 2.0 * (v1 * x * (v2 * y).conj()).im;
        let nf = (t - base) / self.nu;
        let n = nf.round();
        if (nf - n).abs() > 1e-6 {
            return Err(Error::NoLatticeSolution(format!("n = {nf} not integral")));
        }
        Ok(NormalForm { x: x as i64, y: y as i64, n: n as i64, w })
    }

    pub fn eval_normal_form(&self, nf: &NormalForm) -> HMatrix {
        self.mats.t1.pow(nf.x) * self.mats.t2.pow(nf.y) * self.mats.h.pow(nf.n) * self.rem_mats[nf.w]
    }

    pub fn remainder_word(&self, nf: &NormalForm) -> &Word {
        &self.data.remainder[nf.w]
    }
}

pub fn normal_form(word: &Word, tag: CaseTag, cfg: &TriangleConfig) -> Result<NormalForm> {
    Lattice::new(tag, cfg)?.normal_form(word)
}

/// Words in {i1,i2} of at most `max_len` syllables that are vertical
/// translations, with their amount as a multiple of nu.
pub fn vertical_translations(tag: CaseTag, cfg: &TriangleConfig, max_len: usize, exec: Exec) -> Vec<(Word, f64)> {
    let nu = closed_forms(tag, cfg.r(), cfg.theta).nu;
    let all: Vec<Word> = enumerate_words(&[1, 2], max_len, cfg.orders()).collect();
    let found = exec.map(&all, |w| match classify_isometry(&eval_word(w, cfg)) {
        Ok(IsometryClass::VerticalTranslation { nu: amount }) => Some((w.clone(), amount / nu)),
        _ => None,
    });
    found.into_iter().flatten().collect()
}

pub fn vertical_subgroup_check(tag: CaseTag, cfg: &TriangleConfig, max_len: usize) -> bool {
    vertical_translations(tag, cfg, max_len, Exec::default())
        .iter()
        .all(|(_, k)| (k - k.round()).abs() <= 1e-6 * k.abs().max(1.0))
}
