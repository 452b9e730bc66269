//! Property tests for the geometric and combinatorial invariants.

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ultrapar::discreteness::{
    classify, compression_certified, nondiscrete_by_case, shimizu_test, sweep_with, SweepSpec, Verdict,
};
use ultrapar::heisenberg::{
    act_on_boundary, cygan_dist, heis_commutator, heis_inv, heis_mul, stereo_project, stereo_unproject, HeisIsometry,
    HeisPoint, IsometryKind,
};
use ultrapar::hermitian::{
    bergman_dist, classify_vector, geodesic_distance, proj_equal, reflection_matrix, GeodesicRelation, HMatrix, HVector,
    ProjPoint, SignClass, C64,
};
use ultrapar::lattice::{case_data, eval_expr, verify_relations, LatticeMatrices};
use ultrapar::report::fmt_num;
use ultrapar::triangle::{case_config, CaseTag};
use ultrapar::words::{enumerate_words, eval_word, reduce_word, Word};
use ultrapar::Exec;

const TOL: f64 = 1e-9;

fn cplx() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn heis() -> impl Strategy<Value = HeisPoint> {
    (cplx(), -5.0..5.0f64).prop_map(|(z, n)| HeisPoint::new(z, n))
}

fn case() -> impl Strategy<Value = CaseTag> {
    prop::sample::select(CaseTag::ALL.to_vec())
}

/// (m, alpha) in the sampled parameter range.
fn point() -> impl Strategy<Value = (f64, f64)> {
    (0.1..3.0f64, 0.1..(2.0 * PI - 0.1))
}

/// Positive vector (1, z2, z3) with |z2| > |z3| + margin.
fn positive() -> impl Strategy<Value = HVector> {
    (cplx(), 0.0..2.0f64, 0.0..2.0 * PI, 0.1..2.0f64).prop_map(|(z2, k, ph, margin)| {
        let z3 = C64::from_polar(k, ph);
        let z2 = z2 / z2.norm().max(1e-3) * (z3.norm() + margin);
        HVector::new(C64::new(0.0, 0.0), z2, z3)
    })
}

fn interior() -> impl Strategy<Value = ProjPoint> {
    (-0.9..0.9f64, -0.9..0.9f64, 0.0..2.0 * PI).prop_map(|(a, b, ph)| {
        let (x, y) = (a * 0.7, b * 0.7);
        ProjPoint::new(HVector::new(C64::new(x, y), C64::from_polar(0.1, ph), C64::new(1.0, 0.0))).unwrap()
    })
}

fn isometry_kind() -> impl Strategy<Value = IsometryKind> {
    prop_oneof![
        (cplx(), -5.0..5.0f64).prop_map(|(xi, nu)| IsometryKind::Translation { xi, nu }),
        (0.0..2.0 * PI).prop_map(|t| IsometryKind::Rotation { mu: C64::from_polar(1.0, t) }),
        (cplx(), prop::sample::select(vec![2u32, 3, 4, 6]))
            .prop_map(|(phi, n)| IsometryKind::VerticalChainReflection { phi, n }),
    ]
}

fn close(a: &HeisPoint, b: &HeisPoint, tol: f64) -> bool {
    match (a.coords(), b.coords()) {
        (Ok((z1, n1)), Ok((z2, n2))) => (z1 - z2).norm() < tol && (n1 - n2).abs() < tol,
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reflection_order(c in positive(), n in prop::sample::select(vec![2u32, 3, 4, 6])) {
        let m = reflection_matrix(&c, n).unwrap();
        prop_assert!(proj_equal(&m.pow(n as i64), &HMatrix::identity(), TOL));
        prop_assert!(m.form_defect() < TOL);
    }

    #[test]
    fn short_products_preserve_form(tag in case(), (m, a) in point(), seed in 0u64..1000) {
        let cfg = case_config(tag, m, a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let letters: Vec<(u8, i64)> = (0..3).map(|_| (rng.random_range(1..=3u8), 1)).collect();
        let w = reduce_word(&letters, cfg.orders());
        prop_assert!(eval_word(&w, &cfg).form_defect() < TOL);
    }

    #[test]
    fn bergman_invariant(p in interior(), q in interior(), c in positive(), n in 2u32..7) {
        let g = reflection_matrix(&c, n).unwrap();
        let d = bergman_dist(&p, &q).unwrap();
        let d2 = bergman_dist(&p.apply(&g).unwrap(), &q.apply(&g).unwrap()).unwrap();
        prop_assert!((d - d2).abs() < TOL * d.max(1.0));
    }

    #[test]
    fn sign_class_scale_invariant(z1 in cplx(), z2 in cplx(), z3 in cplx(), lam in cplx()) {
        prop_assume!(lam.norm() > 1e-3);
        let v = HVector::new(z1, z2, z3);
        prop_assume!(!v.is_zero());
        prop_assert_eq!(classify_vector(&v).unwrap(), classify_vector(&v.scale(lam)).unwrap());
    }

    #[test]
    fn geodesic_distance_symmetric(tag in case(), (m, a) in point()) {
        let cfg = case_config(tag, m, a).unwrap();
        let [c1, c2, c3] = cfg.polars;
        for (x, y) in [(&c1, &c2), (&c1, &c3), (&c2, &c3)] {
            prop_assert_eq!(geodesic_distance(x, y).unwrap(), geodesic_distance(y, x).unwrap());
        }
    }

    #[test]
    fn config_distances(tag in case(), (m, a) in point()) {
        let cfg = case_config(tag, m, a).unwrap();
        let [c1, c2, c3] = cfg.polars;
        for pair in [(&c2, &c3), (&c1, &c3)] {
            match geodesic_distance(pair.0, pair.1).unwrap() {
                GeodesicRelation::Ultraparallel(d) => prop_assert!((d - m).abs() < TOL),
                other => prop_assert!(false, "{:?}", other),
            }
        }
        prop_assert_eq!(geodesic_distance(&c1, &c2).unwrap(), GeodesicRelation::Ideal);
        prop_assert_eq!(case_config(tag, m, a).unwrap(), cfg);
    }

    #[test]
    fn generators_fix_infinity_i3_swaps(tag in case(), (m, a) in point()) {
        let cfg = case_config(tag, m, a).unwrap();
        for k in 0..2 {
            prop_assert_eq!(act_on_boundary(&cfg.gens[k], &HeisPoint::Infinity).unwrap(), HeisPoint::Infinity);
        }
        prop_assert_eq!(act_on_boundary(&cfg.gens[2], &HeisPoint::origin()).unwrap(), HeisPoint::Infinity);
        prop_assert!(close(&act_on_boundary(&cfg.gens[2], &HeisPoint::Infinity).unwrap(), &HeisPoint::origin(), TOL));
    }

    #[test]
    fn heisenberg_group(p in heis(), q in heis(), s in heis()) {
        let m = |a: &HeisPoint, b: &HeisPoint| heis_mul(a, b).unwrap();
        prop_assert!(close(&m(&m(&p, &q), &s), &m(&p, &m(&q, &s)), 1e-12));
        prop_assert!(close(&m(&p, &heis_inv(&p).unwrap()), &HeisPoint::origin(), 1e-12));
        let c = heis_commutator(&p, &q).unwrap();
        prop_assert!(c.coords().unwrap().0.norm() < 1e-12);
        // Nilpotent of class 2.
        prop_assert!(close(&heis_commutator(&c, &s).unwrap(), &HeisPoint::origin(), 1e-12));
    }

    #[test]
    fn cygan_isometries(p in heis(), q in heis(), kind in isometry_kind()) {
        let g = HeisIsometry::new(kind).unwrap();
        let d = cygan_dist(&p, &q).unwrap();
        let d2 = cygan_dist(&g.act(&p), &g.act(&q)).unwrap();
        prop_assert!((d - d2).abs() < TOL * d.max(1.0));
        // The matrix and the coordinate formula agree.
        let by_matrix = act_on_boundary(&g.matrix, &p).unwrap();
        prop_assert!(close(&by_matrix, &g.act(&p), TOL));
    }

    #[test]
    fn stereo_round_trips(p in heis()) {
        let z = stereo_unproject(&p);
        prop_assert!(close(&stereo_project(&z).unwrap(), &p, TOL));
        let again = stereo_unproject(&stereo_project(&z).unwrap());
        prop_assert!(again.approx_eq(&z, TOL));
    }

    #[test]
    fn word_homomorphism(tag in case(), (m, a) in point(), i in 0usize..100_000, j in 0usize..100_000) {
        let cfg = case_config(tag, m, a).unwrap();
        let words: Vec<Word> = enumerate_words(&[1, 2, 3], 4, cfg.orders()).collect();
        let (u, v) = (&words[i % words.len()], &words[j % words.len()]);
        let uv = u.concat(v, cfg.orders());
        prop_assert!(proj_equal(&eval_word(&uv, &cfg), &(eval_word(u, &cfg) * eval_word(v, &cfg)), TOL));
    }

    #[test]
    fn reduction_sound(tag in case(), (m, a) in point(),
                       letters in prop::collection::vec((1u8..=3, -7i64..8), 0..6)) {
        let cfg = case_config(tag, m, a).unwrap();
        let mut raw = HMatrix::identity();
        for &(g, e) in &letters {
            raw = raw * cfg.gens[(g - 1) as usize].pow(e);
        }
        let w = reduce_word(&letters, cfg.orders());
        prop_assert!(proj_equal(&eval_word(&w, &cfg), &raw, TOL));
        prop_assert_eq!(reduce_word(&letters, cfg.orders()), w);
    }

    #[test]
    fn commutator_power_relations(tag in case(), (m, a) in point()) {
        let cfg = case_config(tag, m, a).unwrap();
        let d = case_data(tag);
        let lm = LatticeMatrices::new(&d, &cfg);
        let lhs = match d.commutator {
            ultrapar::lattice::CommutatorOrder::T1T2 => "[T1,T2]",
            ultrapar::lattice::CommutatorOrder::T2T1 => "[T2,T1]",
        };
        let c = eval_expr(lhs, &cfg, &lm).unwrap();
        prop_assert!(proj_equal(&c, &lm.h.pow(d.h_power), TOL));
    }

    #[test]
    fn relations_hold(tag in case(), (m, a) in point()) {
        let cfg = case_config(tag, m, a).unwrap();
        prop_assert!(verify_relations(tag, &cfg, TOL).unwrap().passed());
    }

    #[test]
    fn small_s_is_non_discrete(s in 1e-6..0.999f64) {
        prop_assert!(shimizu_test(s, 1.0).unwrap().is_non_discrete());
    }

    #[test]
    fn certified_is_monotone_in_m(tag in case(), (m, a) in point(), dm in 0.0..2.0f64) {
        if classify(tag, m, a).unwrap().verdict == Verdict::DiscreteCertified {
            prop_assert_eq!(classify(tag, m + dm, a).unwrap().verdict, Verdict::DiscreteCertified);
        }
    }

    #[test]
    fn certified_points_pass_gtable(tag in case(), (m, a) in point()) {
        let c = compression_certified(tag, m, a).unwrap();
        prop_assert_eq!(c.certified(), c.closed());
    }

    #[test]
    fn fmt_num_reads_back(x in prop::num::f64::NORMAL) {
        let y: f64 = fmt_num(x).parse().unwrap();
        prop_assert!(((y - x) / x).abs() < 1e-11);
        prop_assert_eq!(fmt_num(y), fmt_num(x));
    }
}

#[test]
fn shimizu_route_agrees_with_closed_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(623);
    for tag in CaseTag::ALL {
        for _ in 0..10_000 {
            let m = rng.random_range(0.0..3.0);
            let a = rng.random_range(1e-6..2.0 * PI - 1e-6);
            nondiscrete_by_case(tag, m, a).unwrap_or_else(|e| panic!("{tag} m={m} alpha={a}: {e}"));
        }
    }
}

#[test]
fn small_s_grid_is_non_discrete() {
    for k in 1..1000 {
        let s = k as f64 / 1000.0;
        assert!(shimizu_test(s, 1.0).unwrap().is_non_discrete(), "s={s}");
    }
}

#[test]
fn sweep_parallel_matches_sequential() {
    let spec = SweepSpec::new(CaseTag::C36, (0.0, 3.0), 37, 23);
    assert_eq!(sweep_with(&spec, Exec::Sequential).unwrap(), sweep_with(&spec, Exec::Parallel).unwrap());
}

#[test]
fn sign_classes_of_basis() {
    assert_eq!(classify_vector(&HVector::real(1.0, 0.0, 0.0)).unwrap(), SignClass::Positive);
    assert_eq!(classify_vector(&HVector::real(0.0, 0.0, 1.0)).unwrap(), SignClass::Negative);
    assert_eq!(classify_vector(&HVector::real(0.0, 1.0, 1.0)).unwrap(), SignClass::Null);
}
