//! Linear algebra on C^{2,1} with the form <z,w> = z1 w1* + z2 w2* - z3 w3*.

use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative tolerance for projective and matrix comparisons.
pub const TOL: f64 = 1e-9;
/// Width of the null band, relative to |z|^2.
pub const NULL_BAND: f64 = 1e-12;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HVector(pub [C64; 3]);

impl HVector {
    pub fn new(z1: C64, z2: C64, z3: C64) -> Self {
        HVector([z1, z2, z3])
    }

    pub fn real(x: f64, y: f64, z: f64) -> Self {
        HVector([c(x, 0.0), c(y, 0.0), c(z, 0.0)])
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        HVector([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| *z == C64::new(0.0, 0.0))
    }
}

/// 3x3 complex matrix, row-major: `m.0[j][k]` is the entry in row j+1, column k+1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HMatrix(pub [[C64; 3]; 3]);

impl HMatrix {
    pub fn identity() -> Self {
        Self::diag(C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn diag(a: C64, b: C64, d: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        HMatrix([[a, z, z], [z, b, z], [z, z, d]])
    }

    /// J = diag(1, 1, -1).
    pub fn form() -> Self {
        Self::diag(c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = *self;
        for j in 0..3 {
            for k in 0..3 {
                out.0[j][k] = self.0[k][j].conj();
            }
        }
        out
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Inverse via the adjugate. The caller guarantees the matrix is invertible.
    pub fn inverse(&self) -> Self {
        let m = &self.0;
        let d = self.det();
        let cof = |a: usize, b: usize, cc: usize, dd: usize| m[a][b] * m[cc][dd] - m[a][dd] * m[cc][b];
        let adj = [
            [cof(1, 1, 2, 2), -cof(0, 1, 2, 2), cof(0, 1, 1, 2)],
            [-cof(1, 0, 2, 2), cof(0, 0, 2, 2), -cof(0, 0, 1, 2)],
            [cof(1, 0, 2, 1), -cof(0, 0, 2, 1), cof(0, 0, 1, 1)],
        ];
        HMatrix(adj).scale(d.inv())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut e = k.unsigned_abs();
        let mut acc = HMatrix::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq;
            }
            sq = sq * sq;
            e >>= 1;
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Index of the largest-modulus entry, lowest (row, col) among ties.
    pub fn pivot(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_abs = -1.0;
        for j in 0..3 {
            for k in 0..3 {
                let a = self.0[j][k].norm();
                if a > best_abs {
                    best_abs = a;
                    best = (j, k);
                }
            }
        }
        best
    }

    /// Scaled so the pivot entry equals 1.
    pub fn normalised(&self) -> Self {
        let (j, k) = self.pivot();
        self.scale(self.0[j][k].inv())
    }

    /// ||M* J M - J||_inf after dividing M by |det M|^{1/3}.
    pub fn form_defect(&self) -> f64 {
        let s = self.det().norm().cbrt();
        if s == 0.0 {
            return f64::INFINITY;
        }
        let m = self.scale(C64::new(1.0 / s, 0.0));
        let j = HMatrix::form();
        let p = m.adjoint() * j * m;
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                worst = worst.max((p.0[a][b] - j.0[a][b]).norm());
            }
        }
        worst
    }

    /// form_defect divided by the squared size of the normalised matrix, so
    /// that long products with large entries are judged on relative rounding.
    pub fn relative_form_defect(&self) -> f64 {
        let s = self.det().norm().cbrt();
        if s == 0.0 {
            return f64::INFINITY;
        }
        let size = self.max_abs() / s;
        self.form_defect() / size.max(1.0).powi(2)
    }

    pub fn is_isometry(&self, tol: f64) -> bool {
        self.form_defect() < tol
    }
}

impl Mul for HMatrix {
    type Output = HMatrix;
    fn mul(self, rhs: HMatrix) -> HMatrix {
        let mut out = [[C64::new(0.0, 0.0); 3]; 3];
        for (j, row) in out.iter_mut().enumerate() {
            for (k, e) in row.iter_mut().enumerate() {
                *e = self.0[j][0] * rhs.0[0][k] + self.0[j][1] * rhs.0[1][k] + self.0[j][2] * rhs.0[2][k];
            }
        }
        HMatrix(out)
    }
}

impl Mul<HVector> for HMatrix {
    type Output = HVector;
    fn mul(self, v: HVector) -> HVector {
        let m = &self.0;
        let z = &v.0;
        HVector([
            m[0][0] * z[0] + m[0][1] * z[1] + m[0][2] * z[2],
            m[1][0] * z[0] + m[1][1] * z[1] + m[1][2] * z[2],
            m[2][0] * z[0] + m[2][1] * z[1] + m[2][2] * z[2],
        ])
    }
}

/// A point of CP^2, stored with its largest coordinate scaled to 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjPoint {
    rep: HVector,
}

impl ProjPoint {
    pub fn new(v: HVector) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut best = 0;
        for i in 1..3 {
            if v.0[i].norm() > v.0[best].norm() {
                best = i;
            }
        }
        Ok(ProjPoint { rep: v.scale(v.0[best].inv()) })
    }

    pub fn rep(&self) -> HVector {
        self.rep
    }

    /// Equality up to scalar. The scalar is read off at the largest coordinate of
    /// `self`, so near-ties in the canonical form do not matter.
    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        let mut p = 0;
        for i in 1..3 {
            if self.rep.0[i].norm() > self.rep.0[p].norm() {
                p = i;
            }
        }
        let lam = other.rep.0[p] / self.rep.0[p];
        if lam.norm() == 0.0 {
            return false;
        }
        self.rep.0.iter().zip(other.rep.0.iter()).all(|(a, b)| (b / lam - a).norm() < tol)
    }

    pub fn apply(&self, m: &HMatrix) -> Result<ProjPoint> {
        ProjPoint::new(*m * self.rep)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignClass {
    Negative,
    Null,
    Positive,
}

pub fn herm_form(z: &HVector, w: &HVector) -> C64 {
    z.0[0] * w.0[0].conj() + z.0[1] * w.0[1].conj() - z.0[2] * w.0[2].conj()
}

pub fn classify_vector(z: &HVector) -> Result<SignClass> {
    let n = z.norm_sq();
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    let q = herm_form(z, z).re;
    Ok(if q.abs() < NULL_BAND * n {
        SignClass::Null
    } else if q < 0.0 {
        SignClass::Negative
    } else {
        SignClass::Positive
    })
}

/// Bergman distance from cosh^2(rho/2) = <z,w><w,z> / (<z,z><w,w>).
pub fn bergman_dist(p: &ProjPoint, q: &ProjPoint) -> Result<f64> {
    let (z, w) = (p.rep(), q.rep());
    if classify_vector(&z)? != SignClass::Negative || classify_vector(&w)? != SignClass::Negative {
        return Err(Error::NotInteriorPoint);
    }
    let num = herm_form(&z, &w).norm_sqr();
    let den = herm_form(&z, &z).re * herm_form(&w, &w).re;
    let ch = (num / den).sqrt().max(1.0);
    Ok(2.0 * ch.acosh())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeodesicRelation {
    /// Distance m between the two complex geodesics.
    Ultraparallel(f64),
    Ideal,
    Intersecting,
}

pub fn geodesic_distance(c1: &HVector, c2: &HVector) -> Result<GeodesicRelation> {
    for v in [c1, c2] {
        let q = herm_form(v, v).re;
        if (q - 1.0).abs() > TOL {
            return Err(Error::NotNormalised(q));
        }
    }
    let a = herm_form(c1, c2).norm();
    Ok(if a > 1.0 + TOL {
        GeodesicRelation::Ultraparallel(2.0 * a.acosh())
    } else if a >= 1.0 - TOL {
        GeodesicRelation::Ideal
    } else {
        GeodesicRelation::Intersecting
    })
}

pub fn normalise_polar(v: &HVector) -> Result<HVector> {
    if classify_vector(v)? != SignClass::Positive {
        return Err(Error::NotPositive);
    }
    let q = herm_form(v, v).re;
    Ok(v.scale(C64::new(1.0 / q.sqrt(), 0.0)))
}

/// Complex reflection of order n in the geodesic polar to c:
/// z -> -z + (1 - mu) <z,c>/<c,c> c with mu = exp(2 pi i / n).
pub fn reflection_matrix(cv: &HVector, n: u32) -> Result<HMatrix> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    if classify_vector(cv)? != SignClass::Positive {
        return Err(Error::NotPositive);
    }
    let mu = root_of_unity(n);
    let k = (C64::new(1.0, 0.0) - mu) / herm_form(cv, cv);
    let sign = [1.0, 1.0, -1.0];
    let mut m = HMatrix::identity().scale(C64::new(-1.0, 0.0));
    for j in 0..3 {
        for l in 0..3 {
            // <z,c> = sum_l z_l conj(c_l) J_ll
            m.0[j][l] += k * cv.0[j] * cv.0[l].conj() * sign[l];
        }
    }
    Ok(m)
}

pub fn root_of_unity(n: u32) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI / n as f64)
}

/// Relative residual of `m2` against `m1` up to a scalar, with the scalar read
/// off at the pivot of `m1`. Zero for exact projective equality.
pub fn proj_residual(m1: &HMatrix, m2: &HMatrix) -> f64 {
    let (j, k) = m1.pivot();
    let a = m1.0[j][k];
    let b = m2.0[j][k];
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return f64::INFINITY;
    }
    let lam = b / a;
    let mut worst: f64 = 0.0;
    for r in 0..3 {
        for s in 0..3 {
            worst = worst.max((m2.0[r][s] / lam - m1.0[r][s]).norm());
        }
    }
    worst / a.norm()
}

pub fn proj_equal(m1: &HMatrix, m2: &HMatrix, tol: f64) -> bool {
    proj_residual(m1, m2) < tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_on_basis() {
        let e3 = HVector::real(0.0, 0.0, 1.0);
        let e2 = HVector::real(0.0, 1.0, 0.0);
        assert_eq!(herm_form(&e3, &e3), c(-1.0, 0.0));
        assert_eq!(herm_form(&e2, &e2), c(1.0, 0.0));
    }

    #[test]
    fn ideal_pairing_of_vertical_polars() {
        for &(r1, r2, th) in &[(1.3, 2.1, 0.2), (1.0, 5.0, -1.1), (3.3, 1.7, 0.0)] {
            let e = C64::from_polar(1.0, th);
            let c1 = HVector::new(c(1.0, 0.0), -e.conj() * r2, e.conj() * r2);
            let c2 = HVector::new(c(1.0, 0.0), e * r1, -e * r1);
            let p = herm_form(&c1, &c2);
            assert!((p - c(1.0, 0.0)).norm() < 1e-14);
            assert_eq!(geodesic_distance(&c1, &c2).unwrap(), GeodesicRelation::Ideal);
            let c3 = HVector::real(0.0, 1.0, 0.0);
            match geodesic_distance(&c3, &c2).unwrap() {
                GeodesicRelation::Ultraparallel(m) if r1 > 1.0 => assert!(((m / 2.0).cosh() - r1).abs() < 1e-12),
                GeodesicRelation::Ideal => assert_eq!(r1, 1.0),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn orthogonal_positive_vectors_intersect() {
        let a = HVector::real(1.0, 0.0, 0.0);
        let b = HVector::real(0.0, 1.0, 0.0);
        assert_eq!(geodesic_distance(&a, &b).unwrap(), GeodesicRelation::Intersecting);
    }

    #[test]
    fn sign_classes() {
        assert_eq!(classify_vector(&HVector::real(0.0, 0.0, 1.0)).unwrap(), SignClass::Negative);
        assert_eq!(classify_vector(&HVector::real(1.0, 0.0, 1.0)).unwrap(), SignClass::Null);
        assert_eq!(classify_vector(&HVector::real(0.0, 1.0, 0.0)).unwrap(), SignClass::Positive);
        assert_eq!(classify_vector(&HVector::real(0.0, 0.0, 0.0)), Err(Error::ZeroVector));
    }

    #[test]
    fn bergman_examples() {
        let o = ProjPoint::new(HVector::real(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(bergman_dist(&o, &o).unwrap(), 0.0);
        for x in [0.1, 0.5, 0.9] {
            let q = ProjPoint::new(HVector::real(x, 0.0, 1.0)).unwrap();
            let expect = 2.0 * (1.0 / (1.0 - x * x).sqrt()).acosh();
            assert!((bergman_dist(&o, &q).unwrap() - expect).abs() < 1e-12);
        }
        let p = ProjPoint::new(HVector::real(1.0, 0.0, 1.0)).unwrap();
        assert_eq!(bergman_dist(&o, &p), Err(Error::NotInteriorPoint));
    }

    #[test]
    fn normalise_examples() {
        let n = normalise_polar(&HVector::real(0.0, 2.0, 0.0)).unwrap();
        assert_eq!(n, HVector::real(0.0, 1.0, 0.0));
        let (z0, r0, nu0) = (c(0.3, -0.4), 1.7, 0.8);
        let cv = HVector::new(
            z0 * 2.0,
            c(1.0 + r0 * r0 - z0.norm_sqr(), nu0),
            c(1.0 - r0 * r0 + z0.norm_sqr(), -nu0),
        );
        assert!((herm_form(&cv, &cv).re - 4.0 * r0 * r0).abs() < 1e-12);
        let n = normalise_polar(&cv).unwrap();
        for i in 0..3 {
            assert!((n.0[i] - cv.0[i] / (2.0 * r0)).norm() < 1e-14);
        }
        let again = normalise_polar(&n).unwrap();
        for i in 0..3 {
            assert!((again.0[i] - n.0[i]).norm() < 1e-15);
        }
        assert_eq!(normalise_polar(&HVector::real(0.0, 0.0, 1.0)), Err(Error::NotPositive));
    }

    #[test]
    fn reflection_in_c3() {
        let m = reflection_matrix(&HVector::real(0.0, 1.0, 0.0), 2).unwrap();
        let expect = HMatrix::diag(c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0));
        for j in 0..3 {
            for k in 0..3 {
                assert!((m.0[j][k] - expect.0[j][k]).norm() < 1e-15);
            }
        }
        assert!(proj_equal(&(m * m), &HMatrix::identity(), TOL));
        assert_eq!(reflection_matrix(&HVector::real(0.0, 1.0, 0.0), 1), Err(Error::InvalidOrder(1)));
    }

    #[test]
    fn reflection_in_vertical_chain_matches_closed_form() {
        for n in [2u32, 3, 4, 6] {
            let phi = c(0.7, -1.3);
            let mu = root_of_unity(n);
            let one = c(1.0, 0.0);
            let cv = HVector::new(one, -phi.conj(), phi.conj());
            let m = reflection_matrix(&cv, n).unwrap();
            let a = (one - mu) * phi.norm_sqr();
            let expect = HMatrix([
                [-mu, -(one - mu) * phi, -(one - mu) * phi],
                [-(one - mu) * phi.conj(), a - one, a],
                [(one - mu) * phi.conj(), -a, -a - one],
            ]);
            for j in 0..3 {
                for k in 0..3 {
                    assert!((m.0[j][k] - expect.0[j][k]).norm() < 1e-14, "n={n} ({j},{k})");
                }
            }
        }
    }

    #[test]
    fn proj_equal_examples() {
        let m = HMatrix([
            [c(1.0, 2.0), c(0.0, 1.0), c(3.0, 0.0)],
            [c(-1.0, 0.0), c(0.5, 0.5), c(0.0, 0.0)],
            [c(2.0, -1.0), c(1.0, 1.0), c(-2.0, 0.0)],
        ]);
        assert!(proj_equal(&m, &m.scale(c(0.0, 3.0)), TOL));
        let a = HMatrix::diag(c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0));
        let b = HMatrix::diag(c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0));
        assert!(proj_equal(&a, &b, TOL));
        assert!(!proj_equal(&a, &HMatrix::identity(), TOL));
    }

    #[test]
    fn proj_equal_with_tied_pivots() {
        // |1 + a| = |1 - a| for imaginary a: pivot ties must not break the comparison.
        let a = c(0.0, -2.5);
        let one = c(1.0, 0.0);
        let m = HMatrix([[one, c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), one - a, -a], [c(0.0, 0.0), a, one + a]]);
        assert!(proj_equal(&m, &m.scale(c(-0.3, 0.9)), TOL));
    }

    #[test]
    fn inverse_and_pow() {
        let m = reflection_matrix(&HVector::new(c(1.0, 0.0), c(-0.5, 0.2), c(0.5, -0.2)), 6).unwrap();
        assert!(proj_equal(&(m * m.inverse()), &HMatrix::identity(), 1e-12));
        assert!(proj_equal(&m.pow(6), &HMatrix::identity(), 1e-12));
        assert!(proj_equal(&m.pow(-2), &m.pow(4), 1e-12));
    }
}
