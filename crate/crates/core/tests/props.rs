//! Property tests for the invariants that quantify over arbitrary
//! interior points and subspaces.

use bergmod::angle::subspace_angle_finite;
use bergmod::ball::{hyperbolic_distance, moebius_identity_residuals, MoebiusMap, Point};
use bergmod::bergman::SampledFunction;
use bergmod::linalg::matrix_from_columns;
use bergmod::poly::MultiPoly;
use bergmod::span::{build_span, project, sample_variety, SamplePlan};
use bergmod::variety::{LinearVariety, Variety};
use bergmod::C64;
use proptest::prelude::*;

fn interior_point(n: usize, rad: f64) -> impl Strategy<Value = Point> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(move |parts| {
        let coords: Vec<C64> = parts.iter().map(|&(re, im)| C64::new(re, im)).collect();
        let norm: f64 = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let scale = if norm > 0.0 { rad / norm.max(rad) } else { 0.0 };
        // scale into the ball of radius rad, keeping small points as-is
        Point::new(coords.into_iter().map(|c| c * scale.min(1.0)).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn involution_and_identities(
        a in interior_point(2, 0.95),
        z in interior_point(2, 0.95),
        w in interior_point(2, 0.95),
    ) {
        let map = MoebiusMap::new(a.clone()).unwrap();
        let round = map.apply(&map.apply(&w).unwrap()).unwrap();
        let res: f64 = round
            .coords()
            .iter()
            .zip(w.coords())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        prop_assert!(res < 1e-12);
        let (r1, r2) = moebius_identity_residuals(&a, &z, &w).unwrap();
        prop_assert!(r1 < 1e-12 && r2 < 1e-12);
    }

    #[test]
    fn beta_is_a_metric_on_samples(
        x in interior_point(2, 0.9),
        y in interior_point(2, 0.9),
        z in interior_point(2, 0.9),
    ) {
        let bxy = hyperbolic_distance(&x, &y).unwrap();
        let byx = hyperbolic_distance(&y, &x).unwrap();
        prop_assert!((bxy - byx).abs() < 1e-12);
        let bxz = hyperbolic_distance(&x, &z).unwrap();
        let byz = hyperbolic_distance(&y, &z).unwrap();
        prop_assert!(bxz <= bxy + byz + 1e-12);
    }

    #[test]
    fn finite_triple_operator_identity(
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5 * 4),
    ) {
        let cols: Vec<Vec<C64>> = entries
            .chunks(5)
            .map(|ch| ch.iter().map(|&(re, im)| C64::new(re, im)).collect())
            .collect();
        let h1 = matrix_from_columns(5, &cols[0..2]);
        let h2 = matrix_from_columns(5, &cols[2..4]);
        let rep = subspace_angle_finite(&h1, &h2).unwrap();
        prop_assert!(rep.residuals.operator_identity < 1e-12);
        prop_assert!((rep.norm_121 - rep.norm_21 * rep.norm_21).abs() < 1e-8);
        prop_assert!(rep.residuals.cos_vs_norm21 < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn projection_norm_never_exceeds_bergman_norm(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4),
        seed in 0u64..1000,
    ) {
        // random polynomial of degree <= 3 on B_2
        let powers = [vec![0u32, 0], vec![1, 0], vec![0, 2], vec![2, 1]];
        let mut p = MultiPoly::zero(2);
        for (pw, &(re, im)) in powers.iter().zip(&coeffs) {
            p = p.add(&MultiPoly::monomial(2, pw.clone(), C64::new(re, im)));
        }
        let f = SampledFunction::from_poly(p);
        let v = Variety::Linear(LinearVariety::coordinate_plane(2, &[0]));
        let pts = sample_variety(&v, &SamplePlan::stratified(30, 0.9, seed)).unwrap();
        let span = build_span(&pts, 1e-10).unwrap();
        let proj = project(&span, &f).unwrap();
        let full = f.bergman_norm_sq().unwrap().sqrt();
        prop_assert!(proj.norm <= full + 1e-6, "projection norm {} > {}", proj.norm, full);
    }
}
