//! Heisenberg coordinates on the boundary: group law, Cygan metric, stereographic
//! projection, chains, and the matrices of Heisenberg isometries.

use crate::error::{Error, Result};
use crate::hermitian::{c, herm_form, proj_residual, root_of_unity, HMatrix, HVector, ProjPoint, C64, TOL};

/// Null tolerance used when projecting images of null vectors under long products.
const PROJ_NULL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HeisPoint {
    Finite { zeta: C64, nu: f64 },
    Infinity,
}

impl HeisPoint {
    pub fn new(zeta: C64, nu: f64) -> Self {
        HeisPoint::Finite { zeta, nu }
    }

    pub fn origin() -> Self {
        HeisPoint::new(c(0.0, 0.0), 0.0)
    }

    pub fn coords(&self) -> Result<(C64, f64)> {
        match *self {
            HeisPoint::Finite { zeta, nu } => Ok((zeta, nu)),
            HeisPoint::Infinity => Err(Error::InfinityOperand),
        }
    }
}

pub fn heis_mul(p: &HeisPoint, q: &HeisPoint) -> Result<HeisPoint> {
    let (z1, n1) = p.coords()?;
    let (z2, n2) = q.coords()?;
    Ok(HeisPoint::new(z1 + z2, n1 + n2 + 2.0 * (z1 * z2.conj()).im))
}

pub fn heis_inv(p: &HeisPoint) -> Result<HeisPoint> {
    let (z, n) = p.coords()?;
    Ok(HeisPoint::new(-z, -n))
}

/// Closed form [p,q] = (0, 4 Im(xi1 conj(xi2))).
pub fn heis_commutator(p: &HeisPoint, q: &HeisPoint) -> Result<HeisPoint> {
    let (z1, _) = p.coords()?;
    let (z2, _) = q.coords()?;
    Ok(HeisPoint::new(c(0.0, 0.0), 4.0 * (z1 * z2.conj()).im))
}

pub fn cygan_dist(p: &HeisPoint, q: &HeisPoint) -> Result<f64> {
    let (z1, n1) = p.coords()?;
    let (z2, n2) = q.coords()?;
    let w = c((z1 - z2).norm_sqr(), -(n1 - n2) - 2.0 * (z1 * z2.conj()).im);
    Ok(w.norm().sqrt())
}

pub fn stereo_project(p: &ProjPoint) -> Result<HeisPoint> {
    let z = p.rep().0;
    if herm_form(&p.rep(), &p.rep()).re.abs() > PROJ_NULL_TOL * p.rep().norm_sq() {
        return Err(Error::NotNullVector);
    }
    let s = z[1] + z[2];
    if s.norm() < 1e-10 {
        return Ok(HeisPoint::Infinity);
    }
    Ok(HeisPoint::new(z[0] / s, ((z[1] - z[2]) / s).im))
}

pub fn stereo_unproject(p: &HeisPoint) -> ProjPoint {
    let v = match *p {
        HeisPoint::Finite { zeta, nu } => {
            let a = zeta.norm_sqr();
            HVector::new(zeta * 2.0, c(1.0 - a, nu), c(1.0 + a, -nu))
        }
        HeisPoint::Infinity => HVector::real(0.0, 1.0, -1.0),
    };
    ProjPoint::new(v).expect("unprojected vector is nonzero")
}

/// Boundary action of a matrix, read in Heisenberg coordinates.
pub fn act_on_boundary(m: &HMatrix, p: &HeisPoint) -> Result<HeisPoint> {
    stereo_project(&stereo_unproject(p).apply(m)?)
}

pub fn translation_matrix(xi: C64, nu: f64) -> HMatrix {
    let one = c(1.0, 0.0);
    let a = c(xi.norm_sqr(), -nu) / 2.0;
    HMatrix([[one, xi, xi], [-xi.conj(), one - a, -a], [xi.conj(), a, one + a]])
}

pub fn rotation_matrix(mu: C64) -> Result<HMatrix> {
    if (mu.norm() - 1.0).abs() > TOL {
        return Err(Error::NotUnitModulus(mu.norm()));
    }
    Ok(HMatrix::diag(mu, c(1.0, 0.0), c(1.0, 0.0)))
}

/// Reflection of order n in the vertical chain through phi.
pub fn vertical_reflection_matrix(phi: C64, n: u32) -> Result<HMatrix> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let one = c(1.0, 0.0);
    let mu = root_of_unity(n);
    let k = one - mu;
    let a = k * phi.norm_sqr();
    Ok(HMatrix([
        [-mu, -k * phi, -k * phi],
        [-k * phi.conj(), a - one, a],
        [k * phi.conj(), -a, -a - one],
    ]))
}

/// Factors of a vertical-chain reflection: it equals R_mu T_(xi,nu) and T_(mu xi, nu) R_mu.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    pub mu: C64,
    pub xi: C64,
    pub nu: f64,
}

pub fn decompose_reflection(phi: C64, n: u32) -> Result<Decomposition> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let mu = root_of_unity(n);
    Ok(Decomposition {
        mu,
        xi: (mu.conj() - 1.0) * phi,
        nu: 2.0 * phi.norm_sqr() * (2.0 * std::f64::consts::PI / n as f64).sin(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IsometryKind {
    Translation { xi: C64, nu: f64 },
    Rotation { mu: C64 },
    VerticalChainReflection { phi: C64, n: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeisIsometry {
    pub kind: IsometryKind,
    pub matrix: HMatrix,
}

impl HeisIsometry {
    pub fn new(kind: IsometryKind) -> Result<Self> {
        let matrix = match kind {
            IsometryKind::Translation { xi, nu } => translation_matrix(xi, nu),
            IsometryKind::Rotation { mu } => rotation_matrix(mu)?,
            IsometryKind::VerticalChainReflection { phi, n } => vertical_reflection_matrix(phi, n)?,
        };
        Ok(HeisIsometry { kind, matrix })
    }

    /// Action in Heisenberg coordinates, by the closed formulas.
    pub fn act(&self, p: &HeisPoint) -> HeisPoint {
        let (z, w) = match p.coords() {
            Ok(zw) => zw,
            Err(_) => return HeisPoint::Infinity,
        };
        match self.kind {
            IsometryKind::Translation { xi, nu } => HeisPoint::new(xi + z, nu + w + 2.0 * (xi * z.conj()).im),
            IsometryKind::Rotation { mu } => HeisPoint::new(mu * z, w),
            IsometryKind::VerticalChainReflection { phi, n } => {
                let mu = root_of_unity(n);
                let k = c(1.0, 0.0) - mu;
                HeisPoint::new(
                    mu * z + k * phi,
                    w - 2.0 * phi.norm_sqr() * k.im + 2.0 * (k * phi.conj() * z).im,
                )
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Chain {
    Vertical { base: C64 },
    Finite { center: C64, height: f64, radius: f64 },
}

impl Chain {
    pub fn approx_eq(&self, other: &Chain, tol: f64) -> bool {
        match (*self, *other) {
            (Chain::Vertical { base: a }, Chain::Vertical { base: b }) => (a - b).norm() < tol,
            (
                Chain::Finite { center: a, height: h, radius: r },
                Chain::Finite { center: b, height: k, radius: s },
            ) => (a - b).norm() < tol && (h - k).abs() < tol && (r - s).abs() < tol,
            _ => false,
        }
    }
}

pub fn chain_polar(chain: &Chain) -> HVector {
    match *chain {
        Chain::Vertical { base } => HVector::new(c(1.0, 0.0), -base.conj(), base.conj()),
        Chain::Finite { center, height, radius } => {
            let a = center.norm_sqr();
            let r2 = radius * radius;
            HVector::new(center * 2.0, c(1.0 + r2 - a, height), c(1.0 - r2 + a, -height))
        }
    }
}

/// Base point of the image of the vertical chain through xi under the order-n
/// reflection in the vertical chain through zeta.
pub fn rotate_vertical_chain(xi: C64, zeta: C64, n: u32) -> Result<C64> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let mu = root_of_unity(n);
    Ok(mu * xi - (mu - 1.0) * zeta)
}

/// Signed residual |zeta|^4 + nu^2 - 1 of the unit spinal sphere.
pub fn on_unit_spinal_sphere(p: &HeisPoint) -> Result<f64> {
    let (z, n) = p.coords()?;
    Ok(z.norm_sqr() * z.norm_sqr() + n * n - 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IsometryClass {
    HeisTranslation { xi: C64, nu: f64 },
    VerticalTranslation { nu: f64 },
    Other,
}

impl IsometryClass {
    pub fn translation(&self) -> Option<(C64, f64)> {
        match *self {
            IsometryClass::HeisTranslation { xi, nu } => Some((xi, nu)),
            IsometryClass::VerticalTranslation { nu } => Some((c(0.0, 0.0), nu)),
            IsometryClass::Other => None,
        }
    }
}

pub fn classify_isometry(m: &HMatrix) -> Result<IsometryClass> {
    let defect = m.relative_form_defect();
    if !(defect < TOL) {
        return Err(Error::NotIsometry(defect));
    }
    let image = act_on_boundary(m, &HeisPoint::origin())?;
    let (xi, nu) = match image {
        HeisPoint::Finite { zeta, nu } => (zeta, nu),
        HeisPoint::Infinity => return Ok(IsometryClass::Other),
    };
    if proj_residual(&translation_matrix(xi, nu), m) >= TOL {
        return Ok(IsometryClass::Other);
    }
    if xi.norm() < TOL * (1.0 + nu.abs()) {
        Ok(IsometryClass::VerticalTranslation { nu })
    } else {
        Ok(IsometryClass::HeisTranslation { xi, nu })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{proj_equal, reflection_matrix, SignClass};

    fn close(a: &HeisPoint, b: &HeisPoint, tol: f64) -> bool {
        match (a.coords(), b.coords()) {
            (Ok((z1, n1)), Ok((z2, n2))) => (z1 - z2).norm() < tol && (n1 - n2).abs() < tol,
            (Err(_), Err(_)) => true,
            _ => false,
        }
    }

    #[test]
    fn group_law_examples() {
        let p = HeisPoint::new(c(1.0, 0.0), 0.0);
        let q = HeisPoint::new(c(0.0, 1.0), 0.0);
        assert_eq!(heis_mul(&p, &q).unwrap(), HeisPoint::new(c(1.0, 1.0), -2.0));
        assert_eq!(heis_commutator(&p, &q).unwrap(), HeisPoint::new(c(0.0, 0.0), -4.0));
        let brute = {
            let pi = heis_inv(&p).unwrap();
            let qi = heis_inv(&q).unwrap();
            heis_mul(&heis_mul(&heis_mul(&pi, &qi).unwrap(), &p).unwrap(), &q).unwrap()
        };
        assert!(close(&brute, &HeisPoint::new(c(0.0, 0.0), -4.0), 1e-15));
        let s = HeisPoint::new(c(0.3, -2.0), 1.5);
        assert_eq!(heis_mul(&HeisPoint::origin(), &s).unwrap(), s);
        assert!(close(&heis_mul(&s, &heis_inv(&s).unwrap()).unwrap(), &HeisPoint::origin(), 1e-15));
        let central = HeisPoint::new(c(0.0, 0.0), 7.0);
        assert_eq!(heis_commutator(&s, &central).unwrap().coords().unwrap().1, 0.0);
        assert_eq!(heis_commutator(&s, &s).unwrap().coords().unwrap().1, 0.0);
        assert_eq!(heis_mul(&s, &HeisPoint::Infinity), Err(Error::InfinityOperand));
    }

    #[test]
    fn cygan_examples() {
        let o = HeisPoint::origin();
        let z = c(3.0, -4.0);
        assert!((cygan_dist(&o, &HeisPoint::new(z, 0.0)).unwrap() - 5.0).abs() < 1e-15);
        assert!((cygan_dist(&o, &HeisPoint::new(c(0.0, 0.0), -9.0)).unwrap() - 3.0).abs() < 1e-15);
        let p = HeisPoint::new(c(0.2, 0.7), -1.1);
        assert_eq!(cygan_dist(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn stereo_examples() {
        let o = ProjPoint::new(HVector::real(0.0, 1.0, 1.0)).unwrap();
        assert_eq!(stereo_project(&o).unwrap(), HeisPoint::origin());
        let inf = ProjPoint::new(HVector::real(0.0, 1.0, -1.0)).unwrap();
        assert_eq!(stereo_project(&inf).unwrap(), HeisPoint::Infinity);
        assert!(stereo_unproject(&HeisPoint::origin()).approx_eq(&o, 1e-15));
        assert!(stereo_unproject(&HeisPoint::Infinity).approx_eq(&inf, 1e-15));
        let p = HeisPoint::new(c(-0.4, 1.9), 2.5);
        let u = stereo_unproject(&p);
        assert_eq!(crate::hermitian::classify_vector(&u.rep()).unwrap(), SignClass::Null);
        assert!(close(&stereo_project(&u).unwrap(), &p, 1e-12));
        let neg = ProjPoint::new(HVector::real(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(stereo_project(&neg), Err(Error::NotNullVector));
    }

    #[test]
    fn translation_examples() {
        assert_eq!(translation_matrix(c(0.0, 0.0), 0.0), HMatrix::identity());
        let (xi, nu) = (c(2.0, 1.0), 5.0);
        let t = translation_matrix(xi, nu);
        assert!(close(&act_on_boundary(&t, &HeisPoint::origin()).unwrap(), &HeisPoint::new(xi, nu), 1e-12));
        assert_eq!(act_on_boundary(&t, &HeisPoint::Infinity).unwrap(), HeisPoint::Infinity);
        let (xi2, nu2) = (c(-0.5, 3.0), -1.25);
        let prod = t * translation_matrix(xi2, nu2);
        let law = heis_mul(&HeisPoint::new(xi, nu), &HeisPoint::new(xi2, nu2)).unwrap();
        let (z, n) = law.coords().unwrap();
        assert!(proj_equal(&prod, &translation_matrix(z, n), TOL));
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotation_matrix(c(1.0, 0.0)).unwrap(), HMatrix::identity());
        let r = rotation_matrix(c(0.0, 1.0)).unwrap();
        let img = act_on_boundary(&r, &HeisPoint::new(c(1.0, 0.0), 5.0)).unwrap();
        assert!(close(&img, &HeisPoint::new(c(0.0, 1.0), 5.0), 1e-12));
        let a = C64::from_polar(1.0, 0.7);
        let b = C64::from_polar(1.0, -2.1);
        assert!(proj_equal(&(rotation_matrix(a).unwrap() * rotation_matrix(b).unwrap()), &rotation_matrix(a * b).unwrap(), 1e-14));
        assert!(matches!(rotation_matrix(c(2.0, 0.0)), Err(Error::NotUnitModulus(_))));
    }

    #[test]
    fn vertical_reflection_examples() {
        let p = HeisPoint::new(c(0.6, -0.2), 1.3);
        for n in [2, 3, 4, 6] {
            let iso = HeisIsometry::new(IsometryKind::VerticalChainReflection { phi: c(0.0, 0.0), n }).unwrap();
            let mu = root_of_unity(n);
            assert!(close(&iso.act(&p), &HeisPoint::new(mu * c(0.6, -0.2), 1.3), 1e-15));
        }
        let iso = HeisIsometry::new(IsometryKind::VerticalChainReflection { phi: c(1.0, 0.0), n: 2 }).unwrap();
        let (z, w) = p.coords().unwrap();
        assert!(close(&iso.act(&p), &HeisPoint::new(-z + 2.0, w + 4.0 * z.im), 1e-14));
        assert!(close(&act_on_boundary(&iso.matrix, &p).unwrap(), &iso.act(&p), 1e-12));
        let polar = HVector::new(c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0));
        assert!(proj_equal(&iso.matrix, &reflection_matrix(&polar, 2).unwrap(), TOL));
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose_reflection(c(0.0, 0.0), 3).unwrap();
        assert_eq!((d.xi, d.nu), (c(0.0, 0.0), 0.0));
        let d = decompose_reflection(c(1.0, 0.0), 4).unwrap();
        assert!((d.xi - c(-1.0, -1.0)).norm() < 1e-15);
        assert!((d.nu - 2.0).abs() < 1e-15);
        let phi = c(0.3, 1.1);
        for n in [2, 3, 4, 6] {
            let d = decompose_reflection(phi, n).unwrap();
            let direct = vertical_reflection_matrix(phi, n).unwrap();
            let rt = rotation_matrix(d.mu).unwrap() * translation_matrix(d.xi, d.nu);
            let tr = translation_matrix(d.mu * d.xi, d.nu) * rotation_matrix(d.mu).unwrap();
            assert!(proj_equal(&direct, &rt, TOL));
            assert!(proj_equal(&direct, &tr, TOL));
        }
    }

    #[test]
    fn chain_examples() {
        assert_eq!(chain_polar(&Chain::Vertical { base: c(0.0, 0.0) }), HVector::real(1.0, 0.0, 0.0));
        let unit = chain_polar(&Chain::Finite { center: c(0.0, 0.0), height: 0.0, radius: 1.0 });
        assert_eq!(unit, HVector::real(0.0, 2.0, 0.0));
        let (r, th) = (1.4, 0.3);
        let base = C64::from_polar(r, th);
        let e = C64::from_polar(1.0, -th);
        assert_eq!(chain_polar(&Chain::Vertical { base }), HVector::new(c(1.0, 0.0), -e * r, e * r));
    }

    #[test]
    fn rotate_vertical_chain_examples() {
        let z = c(0.4, -1.0);
        assert!((rotate_vertical_chain(z, z, 3).unwrap() - z).norm() < 1e-15);
        let xi = c(2.0, 0.5);
        assert!((rotate_vertical_chain(xi, z, 2).unwrap() - (z * 2.0 - xi)).norm() < 1e-14);
        for n in [2, 3, 4, 6] {
            let m = vertical_reflection_matrix(z, n).unwrap();
            let image = m * chain_polar(&Chain::Vertical { base: xi });
            let expect = chain_polar(&Chain::Vertical { base: rotate_vertical_chain(xi, z, n).unwrap() });
            let a = ProjPoint::new(image).unwrap();
            let b = ProjPoint::new(expect).unwrap();
            assert!(a.approx_eq(&b, 1e-12), "n={n}");
        }
    }

    #[test]
    fn spinal_sphere_examples() {
        assert_eq!(on_unit_spinal_sphere(&HeisPoint::new(c(0.0, 0.0), 1.0)).unwrap(), 0.0);
        assert_eq!(on_unit_spinal_sphere(&HeisPoint::new(c(1.0, 0.0), 0.0)).unwrap(), 0.0);
        assert_eq!(on_unit_spinal_sphere(&HeisPoint::origin()).unwrap(), -1.0);
        assert!(on_unit_spinal_sphere(&HeisPoint::new(c(1.0, 1.0), 0.0)).unwrap() > 0.0);
    }

    #[test]
    fn classify_isometry_examples() {
        let t = translation_matrix(c(2.0, 1.0), 5.0);
        match classify_isometry(&t).unwrap() {
            IsometryClass::HeisTranslation { xi, nu } => {
                assert!((xi - c(2.0, 1.0)).norm() < 1e-12 && (nu - 5.0).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
        let v = translation_matrix(c(0.0, 0.0), -3.0).scale(c(0.0, 2.0));
        assert!(matches!(classify_isometry(&v).unwrap(), IsometryClass::VerticalTranslation { .. }));
        assert_eq!(classify_isometry(&rotation_matrix(c(0.0, 1.0)).unwrap()).unwrap(), IsometryClass::Other);
        let bad = HMatrix::diag(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        assert!(matches!(classify_isometry(&bad), Err(Error::NotIsometry(_))));
    }
}
