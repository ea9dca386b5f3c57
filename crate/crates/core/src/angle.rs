//! Angles between subspaces and their operator-norm expressions: the
//! finite-dimensional triple `(H1, H2, H3)` with explicit projection
//! matrices, the sampled kernel-span surrogate for `|Q2 Q1 Q2 - Q3|`, the
//! closed-form linear-triple oracle, alternating-projection decay, and the
//! closedness verdict.

use crate::{
    error::{Error, Result},
    linalg::{self, REL_CUTOFF},
    span::{kernel_gram, KernelSpan},
    variety::{principal_angles, projection_matrix, subspace_intersection, LinearVariety},
    C64,
};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Default margin for the closedness threshold `norm_121 < 1 - margin`.
pub const DEFAULT_MARGIN: f64 = 0.05;

/// A single finite section can never certify non-closedness; values within
/// this distance of 1 are reported as inconclusive.
const SATURATION_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Closedness {
    Closed,
    NotClosed,
    Inconclusive,
}

/// Residual diagnostics attached to an [`AngleReport`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
pub struct AngleResiduals {
    /// `| (H2H1-H3)^*(H2H1-H3) - (H1H2H1-H3) |` when computed from explicit
    /// matrices; zero by construction in the sampled route.
    pub operator_identity: f64,
    /// `|cos_angle - norm_21|`.
    pub cos_vs_norm21: f64,
    /// Amount clipped from singular values exceeding 1.
    pub clamp_excess: f64,
    /// Worst deviation of the intersection-span embedding from an isometry
    /// (sampled route only; diagnostic, not a gate).
    pub h3_embedding: f64,
}

/// Estimated angle data for a subspace or quotient-module pair against a
/// third "intersection" space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AngleReport {
    /// Largest cosine between `H1 ⊖ H3` and `H2 ⊖ H3`.
    pub cos_angle: f64,
    /// `|H2 H1 - H3|` estimate.
    pub norm_21: f64,
    /// `|H2 H1 H2 - H3|` estimate (equals `|H1 H2 H1 - H3|`).
    pub norm_121: f64,
    /// Retained ranks of the three spaces.
    pub ranks: [usize; 3],
    pub residuals: AngleResiduals,
    /// Margin used for the verdict threshold.
    pub margin: f64,
    pub verdict: Closedness,
}

impl AngleReport {
    pub fn csv_header() -> Vec<&'static str> {
        vec![
            "cos_angle",
            "norm_21",
            "norm_121",
            "rank_1",
            "rank_2",
            "rank_3",
            "margin",
            "verdict",
        ]
    }

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            format!("{:.12}", self.cos_angle),
            format!("{:.12}", self.norm_21),
            format!("{:.12}", self.norm_121),
            self.ranks[0].to_string(),
            self.ranks[1].to_string(),
            self.ranks[2].to_string(),
            format!("{}", self.margin),
            format!("{:?}", self.verdict),
        ]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

fn single_section_verdict(norm_121: f64, margin: f64) -> Closedness {
    if norm_121 >= 1.0 - SATURATION_TOL {
        // sections sharing directions beyond the supplied intersection
        Closedness::Inconclusive
    } else if norm_121 < 1.0 - margin {
        Closedness::Closed
    } else {
        Closedness::Inconclusive
    }
}

/// Angle data for two finite-dimensional subspaces given by (spanning)
/// column bases, with `H3 = H1 ∩ H2` computed numerically. All three
/// operator norms come from explicit projection matrices, so the
/// `(H2H1-H3)^*(H2H1-H3) = H1H2H1-H3` identity is a measured residual.
pub fn subspace_angle_finite(h1: &DMatrix<C64>, h2: &DMatrix<C64>) -> Result<AngleReport> {
    if h1.nrows() != h2.nrows() {
        return Err(Error::DimensionMismatch {
            left: h1.nrows(),
            right: h2.nrows(),
        });
    }
    let b1 = linalg::orthonormal_columns(h1, REL_CUTOFF);
    let b2 = linalg::orthonormal_columns(h2, REL_CUTOFF);
    let b3 = linalg::intersection_basis(&b1, &b2, REL_CUTOFF);
    subspace_angle_with_h3(&b1, &b2, &b3)
}

/// Same as [`subspace_angle_finite`] but with the third space supplied
/// explicitly (it must satisfy `H3 ⊆ H1 ∩ H2` for the operator identity to
/// hold; planting a strictly smaller `H3` drives `norm_121` to 1).
pub fn subspace_angle_with_h3(
    h1: &DMatrix<C64>,
    h2: &DMatrix<C64>,
    h3: &DMatrix<C64>,
) -> Result<AngleReport> {
    let n = h1.nrows();
    if h2.nrows() != n || h3.nrows() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: h2.nrows().max(h3.nrows()),
        });
    }
    let b1 = linalg::orthonormal_columns(h1, REL_CUTOFF);
    let b2 = linalg::orthonormal_columns(h2, REL_CUTOFF);
    let b3 = linalg::orthonormal_columns(h3, REL_CUTOFF);
    let p1 = &b1 * b1.adjoint();
    let p2 = &b2 * b2.adjoint();
    let p3 = &b3 * b3.adjoint();

    let m21 = &p2 * &p1 - &p3;
    let m121 = &p2 * &p1 * &p2 - &p3;
    let m12 = &p1 * &p2 - &p3;
    let norm_21 = linalg::operator_norm(&m21);
    let norm_121 = linalg::operator_norm(&m121);
    // (H2H1-H3)^*(H2H1-H3) = H1H2H1-H3
    let m12121 = &p1 * &p2 * &p1 - &p3;
    let operator_identity = (m21.adjoint() * &m21 - &m12121).norm();
    let _ = m12;

    // cos of the angle after removing H3 from both sides
    let eye = DMatrix::<C64>::identity(n, n);
    let d1 = linalg::orthonormal_columns(&((&eye - &p3) * &b1), REL_CUTOFF);
    let d2 = linalg::orthonormal_columns(&((&eye - &p3) * &b2), REL_CUTOFF);
    let cos_angle = linalg::principal_angle_cosines(&d1, &d2)
        .first()
        .copied()
        .unwrap_or(0.0);

    let margin = DEFAULT_MARGIN;
    Ok(AngleReport {
        cos_angle,
        norm_21,
        norm_121,
        ranks: [b1.ncols(), b2.ncols(), b3.ncols()],
        residuals: AngleResiduals {
            operator_identity,
            cos_vs_norm21: (cos_angle - norm_21).abs(),
            clamp_excess: 0.0,
            h3_embedding: 0.0,
        },
        margin,
        verdict: single_section_verdict(norm_121, margin),
    })
}

/// Finite-section estimate of `|Q2 Q1 Q2 - Q3|` on kernel spans.
///
/// The intersection span's points are adjoined to both spans so that
/// `Q3 ⊆ Q_i` holds in the section; each span is whitened separately and
/// the cross blocks are assembled from exact kernel inner products
/// (whitening a single union Gram is numerically unstable at the spans'
/// conditioning). `span3 = None` models the zero module (empty variety
/// intersection). Verdict: closed iff `norm_121 < 1 - margin`; a single
/// section never certifies non-closedness.
pub fn module_angle_sampled(
    span1: &KernelSpan,
    span2: &KernelSpan,
    span3: Option<&KernelSpan>,
    margin: f64,
) -> Result<AngleReport> {
    let n = span1.ambient_dim();
    if span2.ambient_dim() != n || span3.map(|s| s.ambient_dim()) != span3.map(|_| n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: span2.ambient_dim(),
        });
    }
    let pts3 = span3.map(|s| s.points().to_vec()).unwrap_or_default();
    let mut pts1 = span1.points().to_vec();
    pts1.extend(pts3.iter().cloned());
    let mut pts2 = span2.points().to_vec();
    pts2.extend(pts3.iter().cloned());

    let g1 = kernel_gram(&pts1, &pts1);
    let g2 = kernel_gram(&pts2, &pts2);
    let w1 = linalg::hermitian_whiten(&g1, span1.rel_cutoff());
    let w2 = linalg::hermitian_whiten(&g2, span2.rel_cutoff());
    let cross = w1.factor.adjoint() * kernel_gram(&pts1, &pts2) * &w2.factor;

    let (x, rank3, h3_embedding) = if pts3.is_empty() {
        (cross, 0usize, 0.0)
    } else {
        let g3 = kernel_gram(&pts3, &pts3);
        let w3 = linalg::hermitian_whiten(&g3, span3.map(|s| s.rel_cutoff()).unwrap_or(REL_CUTOFF));
        let t1 = w1.factor.adjoint() * kernel_gram(&pts1, &pts3) * &w3.factor;
        let t2 = w2.factor.adjoint() * kernel_gram(&pts2, &pts3) * &w3.factor;
        let r3 = w3.rank;
        let iso = |t: &DMatrix<C64>| -> f64 {
            (t.adjoint() * t - DMatrix::<C64>::identity(r3, r3)).norm()
        };
        let h3_embedding = iso(&t1).max(iso(&t2));
        (cross - &t1 * t2.adjoint(), r3, h3_embedding)
    };

    let sigma = linalg::operator_norm(&x);
    let clamp_excess = (sigma - 1.0).max(0.0);
    let norm_21 = sigma.min(1.0);
    // Q3 ⊆ Q_i by construction, so Q2Q1Q2-Q3 = (Q2Q1-Q3)(Q1Q2-Q3) and the
    // 121-norm is the square of the 21-norm.
    let norm_121 = norm_21 * norm_21;

    Ok(AngleReport {
        cos_angle: norm_21,
        norm_21,
        norm_121,
        ranks: [w1.rank, w2.rank, rank3],
        residuals: AngleResiduals {
            operator_identity: 0.0,
            cos_vs_norm21: 0.0,
            clamp_excess,
            h3_embedding,
        },
        margin,
        verdict: single_section_verdict(norm_121, margin),
    })
}

/// Closed-form angle data for a pair of linear varieties through the
/// origin: with `V3 = V1 ∩ V2` and `theta_1` the smallest nonzero
/// principal angle of `(V1, V2)` modulo `V3`,
/// `|Q2Q1-Q3| = cos(theta_1)` and `|Q2Q1Q2-Q3| = cos^2(theta_1)`.
///
/// Mechanism: `Q2 Q1 Q2` acts on `Q2` as composition with `M2 M1 M2`,
/// which is diagonal with entries `cos^2(theta_i)` on `V2 ⊖ V3`; on
/// monomials adapted to the eigenbasis the composition operator is
/// diagonal with powers of those entries, so the largest eigenvalue below
/// 1 is `cos^2(theta_1)`. Validated against [`module_angle_sampled`] in
/// the acceptance suite.
pub fn linear_triple_angle_exact(v1: &LinearVariety, v2: &LinearVariety) -> Result<(f64, f64)> {
    let v3 = subspace_intersection(v1, v2)?;
    let angles = principal_angles(v1, v2, &v3)?;
    let theta1 = angles.into_iter().find(|&a| a.cos() < 1.0 - 1e-8);
    Ok(match theta1 {
        Some(theta) => (theta.cos(), theta.cos() * theta.cos()),
        None => (0.0, 0.0),
    })
}

/// Norms of `(M2 M1)^j v` for `j = 1..=k`. For `v ∈ V2 ⊖ V3` the decay
/// ratio per step is at most `cos^2(theta_1)`.
pub fn alternating_projection_decay(
    v1: &LinearVariety,
    v2: &LinearVariety,
    v: &[C64],
    k: usize,
) -> Result<Vec<f64>> {
    let n = v1.ambient_dim();
    if v2.ambient_dim() != n || v.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: v2.ambient_dim().max(v.len()),
        });
    }
    let m1 = projection_matrix(v1);
    let m2 = projection_matrix(v2);
    let step = &m2 * &m1;
    let mut state = DMatrix::from_column_slice(n, 1, v);
    let mut norms = Vec::with_capacity(k);
    for _ in 0..k {
        state = &step * state;
        norms.push(state.norm());
    }
    Ok(norms)
}

/// Closedness verdict over a `rho_max` refinement ladder of `norm_121`
/// values (a single entry is a single finite section).
///
/// Closed when the final value sits below `1 - margin`; not-closed only
/// when the ladder is strictly increasing toward 1 with the final value
/// above `1 - margin/2`; inconclusive otherwise. A single section can
/// never certify non-closedness, only a divergence trend can.
pub fn closedness_verdict(norm_121_ladder: &[f64], margin: f64) -> Closedness {
    let Some(&last) = norm_121_ladder.last() else {
        return Closedness::Inconclusive;
    };
    if norm_121_ladder.len() >= 2 {
        let increasing = norm_121_ladder.windows(2).all(|w| w[1] > w[0]);
        if increasing && last > 1.0 - margin / 2.0 {
            return Closedness::NotClosed;
        }
    }
    if last < 1.0 - margin {
        Closedness::Closed
    } else {
        Closedness::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::span::{build_span, sample_variety, SamplePlan};
    use crate::variety::Variety;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn line(ambient: usize, dir: &[f64]) -> LinearVariety {
        let v: Vec<C64> = dir.iter().map(|&x| c(x, 0.0)).collect();
        LinearVariety::span_of(ambient, &[v]).unwrap()
    }

    #[test]
    fn finite_orthogonal_pair() {
        let h1 = DMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let h2 = DMatrix::from_column_slice(2, 1, &[c(0.0, 0.0), c(1.0, 0.0)]);
        let rep = subspace_angle_finite(&h1, &h2).unwrap();
        assert!(rep.cos_angle < 1e-12);
        assert!(rep.norm_21 < 1e-12 && rep.norm_121 < 1e-12);
        assert_eq!(rep.verdict, Closedness::Closed);
    }

    #[test]
    fn finite_lines_at_pi_over_3() {
        let th = std::f64::consts::FRAC_PI_3;
        let h1 = DMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let h2 = DMatrix::from_column_slice(2, 1, &[c(th.cos(), 0.0), c(th.sin(), 0.0)]);
        let rep = subspace_angle_finite(&h1, &h2).unwrap();
        assert!((rep.cos_angle - 0.5).abs() < 1e-12);
        assert!((rep.norm_21 - 0.5).abs() < 1e-12);
        assert!((rep.norm_121 - 0.25).abs() < 1e-12);
        assert!(rep.residuals.operator_identity < 1e-12);
        assert!(rep.residuals.cos_vs_norm21 < 1e-10);
    }

    #[test]
    fn finite_random_triples_identity() {
        let mut rng = crate::rng::seeded(77);
        for _ in 0..50 {
            let raw1 = DMatrix::from_fn(6, 3, |_, _| {
                c(
                    crate::rng::standard_normal(&mut rng),
                    crate::rng::standard_normal(&mut rng),
                )
            });
            // share a vector so the intersection is nontrivial
            let shared = DMatrix::from_fn(6, 1, |_, _| {
                c(
                    crate::rng::standard_normal(&mut rng),
                    crate::rng::standard_normal(&mut rng),
                )
            });
            let mut raw2 = DMatrix::from_fn(6, 2, |_, _| {
                c(
                    crate::rng::standard_normal(&mut rng),
                    crate::rng::standard_normal(&mut rng),
                )
            });
            raw2 = raw2.insert_column(0, c(0.0, 0.0));
            raw2.column_mut(0).copy_from(&shared.column(0));
            let mut raw1b = raw1.insert_column(0, c(0.0, 0.0));
            raw1b.column_mut(0).copy_from(&shared.column(0));
            let rep = subspace_angle_finite(&raw1b, &raw2).unwrap();
            assert!(
                rep.residuals.operator_identity < 1e-12,
                "identity residual {}",
                rep.residuals.operator_identity
            );
            assert!(rep.residuals.cos_vs_norm21 < 1e-10);
            assert!((rep.norm_121 - rep.norm_21 * rep.norm_21).abs() < 1e-8);
            assert!(rep.norm_121 < 1.0 - 1e-6, "finite sums are closed");
        }
    }

    #[test]
    fn planted_deficient_h3_saturates() {
        // H1, H2 share a 2-dim intersection; plant only 1 dim of it
        let e = |i: usize| {
            let mut v = vec![c(0.0, 0.0); 5];
            v[i] = c(1.0, 0.0);
            v
        };
        let h1 = linalg::matrix_from_columns(5, &[e(0), e(1), e(2)]);
        let h2 = linalg::matrix_from_columns(5, &[e(0), e(1), e(3)]);
        let planted = linalg::matrix_from_columns(5, &[e(0)]);
        let rep = subspace_angle_with_h3(&h1, &h2, &planted).unwrap();
        assert!(
            (rep.norm_121 - 1.0).abs() < 1e-10,
            "norm_121 = {}",
            rep.norm_121
        );
        assert_eq!(rep.verdict, Closedness::Inconclusive);
    }

    #[test]
    fn sampled_identical_spans_give_zero() {
        let v = Variety::Linear(line(2, &[1.0, 0.0]));
        let pts = sample_variety(&v, &SamplePlan::stratified(40, 0.9, 3)).unwrap();
        let span = build_span(&pts, REL_CUTOFF).unwrap();
        let rep = module_angle_sampled(&span, &span, Some(&span), DEFAULT_MARGIN).unwrap();
        assert!(rep.norm_121 < 1e-6, "norm {}", rep.norm_121);
        assert_eq!(rep.verdict, Closedness::Closed);
    }

    #[test]
    fn sampled_orthogonal_lines_with_origin_span() {
        let v1 = Variety::Linear(line(2, &[1.0, 0.0]));
        let v2 = Variety::Linear(line(2, &[0.0, 1.0]));
        let p1 = sample_variety(&v1, &SamplePlan::stratified(60, 0.9, 5)).unwrap();
        let p2 = sample_variety(&v2, &SamplePlan::stratified(60, 0.9, 6)).unwrap();
        let s1 = build_span(&p1, REL_CUTOFF).unwrap();
        let s2 = build_span(&p2, REL_CUTOFF).unwrap();
        let origin = build_span(&[crate::ball::Point::origin(2)], REL_CUTOFF).unwrap();
        let rep = module_angle_sampled(&s1, &s2, Some(&origin), DEFAULT_MARGIN).unwrap();
        assert!(rep.norm_121 < 1e-6, "norm {}", rep.norm_121);
    }

    #[test]
    fn sampled_lines_reproduce_exact_angle() {
        for &theta in &[std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_4] {
            let v1 = Variety::Linear(line(2, &[1.0, 0.0]));
            let v2 = Variety::Linear(line(2, &[theta.cos(), theta.sin()]));
            let p1 = sample_variety(&v1, &SamplePlan::stratified(100, 0.95, 11)).unwrap();
            let p2 = sample_variety(&v2, &SamplePlan::stratified(100, 0.95, 12)).unwrap();
            let s1 = build_span(&p1, REL_CUTOFF).unwrap();
            let s2 = build_span(&p2, REL_CUTOFF).unwrap();
            let origin = build_span(&[crate::ball::Point::origin(2)], REL_CUTOFF).unwrap();
            let rep = module_angle_sampled(&s1, &s2, Some(&origin), DEFAULT_MARGIN).unwrap();
            let exact = theta.cos() * theta.cos();
            assert!(
                (rep.norm_121 - exact).abs() < 0.02 * exact,
                "theta {theta}: {} vs {exact}",
                rep.norm_121
            );
            let (cos_e, n121_e) = linear_triple_angle_exact(
                &line(2, &[1.0, 0.0]),
                &line(2, &[theta.cos(), theta.sin()]),
            )
            .unwrap();
            assert!((cos_e - theta.cos()).abs() < 1e-12);
            assert!((n121_e - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_oracle_cases() {
        // orthogonal lines
        let (c0, n0) =
            linear_triple_angle_exact(&line(2, &[1.0, 0.0]), &line(2, &[0.0, 1.0])).unwrap();
        assert!(c0 < 1e-12 && n0 < 1e-12);
        // identical varieties
        let (c1, n1) =
            linear_triple_angle_exact(&line(2, &[1.0, 0.0]), &line(2, &[1.0, 0.0])).unwrap();
        assert!(c1 == 0.0 && n1 == 0.0);
        // planes in C^3 sharing a line, free directions at pi/3
        let psi = std::f64::consts::FRAC_PI_3;
        let p1 = LinearVariety::coordinate_plane(3, &[0, 1]);
        let p2 = LinearVariety::span_of(
            3,
            &[
                vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(psi.cos(), 0.0), c(psi.sin(), 0.0)],
            ],
        )
        .unwrap();
        let (ce, ne) = linear_triple_angle_exact(&p1, &p2).unwrap();
        assert!((ce - 0.5).abs() < 1e-12 && (ne - 0.25).abs() < 1e-12);
    }

    #[test]
    fn alternating_decay_matches_matrix_iteration() {
        let th = std::f64::consts::FRAC_PI_3;
        let v1 = line(2, &[1.0, 0.0]);
        let v2 = line(2, &[th.cos(), th.sin()]);
        // unit vector in V2 (V3 = 0)
        let v = [c(th.cos(), 0.0), c(th.sin(), 0.0)];
        let norms = alternating_projection_decay(&v1, &v2, &v, 2).unwrap();
        assert!((norms[0] - 0.25).abs() < 1e-12);
        assert!((norms[1] - 0.0625).abs() < 1e-12);
        // orthogonal: first iterate vanishes
        let w = [c(0.0, 0.0), c(1.0, 0.0)];
        let z = alternating_projection_decay(&line(2, &[1.0, 0.0]), &line(2, &[0.0, 1.0]), &w, 1)
            .unwrap();
        assert!(z[0] < 1e-15);
        // vector in V3 stays fixed
        let p1 = LinearVariety::coordinate_plane(3, &[0, 1]);
        let p2 = LinearVariety::coordinate_plane(3, &[0, 2]);
        let fixed = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let n = alternating_projection_decay(&p1, &p2, &fixed, 3).unwrap();
        assert!(n.iter().all(|&x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn verdict_rules() {
        assert_eq!(closedness_verdict(&[0.5], 0.05), Closedness::Closed);
        assert_eq!(
            closedness_verdict(&[0.90, 0.97, 0.995], 0.05),
            Closedness::NotClosed
        );
        assert_eq!(closedness_verdict(&[0.96], 0.05), Closedness::Inconclusive);
        // stable ladder below threshold is closed
        assert_eq!(
            closedness_verdict(&[0.25, 0.2500001, 0.2499], 0.05),
            Closedness::Closed
        );
        assert_eq!(closedness_verdict(&[], 0.05), Closedness::Inconclusive);
    }

    #[test]
    fn rotation_invariance_of_sampled_report() {
        // rotating every sample point by a common unitary leaves all Gram
        // data invariant up to rounding
        let th = std::f64::consts::FRAC_PI_4;
        let u = linalg::seeded_unitary(2, 99);
        let v1 = Variety::Linear(line(2, &[1.0, 0.0]));
        let v2 = Variety::Linear(line(2, &[th.cos(), th.sin()]));
        let p1 = sample_variety(&v1, &SamplePlan::stratified(80, 0.9, 4)).unwrap();
        let p2 = sample_variety(&v2, &SamplePlan::stratified(80, 0.9, 5)).unwrap();
        let rotate = |pts: &[crate::ball::Point]| -> Vec<crate::ball::Point> {
            pts.iter()
                .map(|p| {
                    let v = DMatrix::from_column_slice(2, 1, p.coords());
                    crate::ball::Point::new((&u * v).column(0).iter().copied().collect())
                })
                .collect()
        };
        let report = |a: &[crate::ball::Point], b: &[crate::ball::Point]| -> AngleReport {
            let s1 = build_span(a, REL_CUTOFF).unwrap();
            let s2 = build_span(b, REL_CUTOFF).unwrap();
            let o = build_span(&[crate::ball::Point::origin(2)], REL_CUTOFF).unwrap();
            module_angle_sampled(&s1, &s2, Some(&o), DEFAULT_MARGIN).unwrap()
        };
        let plain = report(&p1, &p2);
        let rotated = report(&rotate(&p1), &rotate(&p2));
        let drift = (plain.norm_121 - rotated.norm_121).abs();
        assert!(drift < 1e-7, "rotation drift {drift}");
        assert_eq!(plain.ranks, rotated.ranks);
    }
}
