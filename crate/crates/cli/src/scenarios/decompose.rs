//! The decompose scenario: per-boundary-point hypothesis checks for the
//! decomposition theorem (transversality, clean intersection, localized
//! intersection equality, localized angle), the global verdict, and — when
//! positive — the sampled module-angle check against the localized
//! prediction.

use crate::config::{from_coords, to_coords, DecomposeConfig, Span3Source};
use crate::report::{write_csv, write_report, Report, ReportHeader};
use crate::scenarios::{derive_seed, ScenarioOutcome};
use anyhow::{bail, Context, Result};
use bergmod::angle::{linear_triple_angle_exact, module_angle_sampled, AngleReport};
use bergmod::ball::Point;
use bergmod::linalg::principal_angle_cosines;
use bergmod::span::{build_span, sample_variety, SamplePlan};
use bergmod::variety::{
    clean_intersection_check, localize, sphere_transversality, subspace_intersection,
    BoundaryPoint, LinearVariety, Variety,
};
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct TransversalityRecord {
    pub score: f64,
    pub transversal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalizedIntersectionRecord {
    pub dims_equal: bool,
    pub gap: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    pub point: Vec<[f64; 2]>,
    pub transversality: [TransversalityRecord; 3],
    pub clean: bool,
    pub clean_gap: f64,
    pub localized_dims: [usize; 3],
    /// Orthonormal bases of the localized models `M_{1x}, M_{2x}, M_{3x}`.
    pub localized_bases: [Vec<Vec<[f64; 2]>>; 3],
    pub localized_intersection: LocalizedIntersectionRecord,
    pub localized_cos_angle: f64,
    pub localized_angle: f64,
    pub localized_norm_121: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleCheck {
    pub rho_max: f64,
    pub span3_source: Span3Source,
    pub report: AngleReport,
    pub predicted_norm_121: f64,
    pub relative_gap: f64,
    pub within_ten_percent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub per_point: Vec<PointRecord>,
    pub min_localized_angle: f64,
    pub predicted_norm_121: f64,
    pub verdict_positive: bool,
    pub module_check: Option<ModuleCheck>,
}

fn basis_json(v: &LinearVariety) -> Vec<Vec<[f64; 2]>> {
    (0..v.dim())
        .map(|j| {
            let col: Vec<bergmod::C64> = v.basis().column(j).iter().copied().collect();
            from_coords(&col)
        })
        .collect()
}

pub fn run(cfg: &DecomposeConfig, out_dir: &Path) -> Result<ScenarioOutcome> {
    let v1 = cfg.m1.build().context("building M1")?;
    let v2 = cfg.m2.build().context("building M2")?;
    let v3 = cfg.m3.build().context("building M3")?;
    if cfg.boundary_points.is_empty() {
        bail!("decompose needs at least one boundary point");
    }
    if cfg.ladder.is_empty() {
        bail!("decompose needs a nonempty rho_max ladder");
    }

    let mut per_point = Vec::new();
    let mut min_angle = f64::INFINITY;
    let mut predicted = 0.0f64;
    for (pi, desc) in cfg.boundary_points.iter().enumerate() {
        let point = Point::new(to_coords(desc));
        let x = BoundaryPoint::new(point.clone())
            .with_context(|| format!("boundary point {pi} is not on the sphere"))?;
        for (name, v) in [("M1", &v1), ("M2", &v2), ("M3", &v3)] {
            let res = v.on_variety_residual(&point);
            if res > bergmod::variety::ON_VARIETY_TOL {
                bail!("boundary point {pi} is not on {name}: residual {res:.3e}");
            }
        }
        let t1 = v1.tangent_at(&point)?;
        let t2 = v2.tangent_at(&point)?;
        let t3 = v3.tangent_at(&point)?;
        let tr = [
            sphere_transversality(&t1, &x),
            sphere_transversality(&t2, &x),
            sphere_transversality(&t3, &x),
        ];
        let (clean, clean_gap) = clean_intersection_check(&t1, &t2, &t3)?;

        let l1 = localize(&v1, &x)?;
        let l2 = localize(&v2, &x)?;
        let l3 = localize(&v3, &x)?;
        let meet = subspace_intersection(&l1, &l2)?;
        let dims_equal = meet.dim() == l3.dim();
        let gap = if dims_equal && l3.dim() > 0 {
            principal_angle_cosines(meet.basis(), l3.basis())
                .last()
                .copied()
                .unwrap_or(1.0)
                .acos()
        } else if dims_equal {
            0.0
        } else {
            std::f64::consts::FRAC_PI_2
        };
        let localized_intersection = LocalizedIntersectionRecord {
            dims_equal,
            gap,
            pass: dims_equal && gap < 1e-8,
        };

        let (cos_loc, n121_loc) = linear_triple_angle_exact(&l1, &l2)?;
        let angle = cos_loc.clamp(0.0, 1.0).acos();
        let angle_positive = cos_loc < 1.0 - 1e-8;

        let pass =
            tr.iter().all(|(_, v)| *v) && clean && localized_intersection.pass && angle_positive;
        min_angle = min_angle.min(angle);
        predicted = predicted.max(n121_loc);

        per_point.push(PointRecord {
            point: from_coords(point.coords()),
            transversality: tr
                .map(|(score, transversal)| TransversalityRecord { score, transversal }),
            clean,
            clean_gap,
            localized_dims: [l1.dim(), l2.dim(), l3.dim()],
            localized_bases: [basis_json(&l1), basis_json(&l2), basis_json(&l3)],
            localized_intersection,
            localized_cos_angle: cos_loc,
            localized_angle: angle,
            localized_norm_121: n121_loc,
            pass,
        });
    }

    let verdict_positive = per_point.iter().all(|p| p.pass);

    // condition-(5) check: sampled module angle at the ladder top vs the
    // localized prediction
    let module_check = if verdict_positive {
        let rho_max = *cfg.ladder.last().unwrap();
        let p1 = sample_variety(
            &v1,
            &SamplePlan::stratified(cfg.m, rho_max, derive_seed(cfg.seed, 1)),
        )?;
        let p2 = sample_variety(
            &v2,
            &SamplePlan::stratified(cfg.m, rho_max, derive_seed(cfg.seed, 2)),
        )?;
        let p3 = match cfg.span3_source {
            Span3Source::IntersectionSamples => sample_variety(
                &v3,
                &SamplePlan::stratified((cfg.m / 2).max(1), rho_max, derive_seed(cfg.seed, 3)),
            )?,
            Span3Source::Localized => {
                let x = BoundaryPoint::new(Point::new(to_coords(&cfg.boundary_points[0])))?;
                let l3 = localize(&v3, &x)?;
                sample_variety(
                    &Variety::Linear(l3),
                    &SamplePlan::stratified((cfg.m / 2).max(1), rho_max, derive_seed(cfg.seed, 3)),
                )?
            }
        };
        let s1 = build_span(&p1, cfg.cutoff_rel)?;
        let s2 = build_span(&p2, cfg.cutoff_rel)?;
        let s3 = build_span(&p3, cfg.cutoff_rel)?;
        let report = module_angle_sampled(&s1, &s2, Some(&s3), cfg.margin)?;
        let relative_gap = if predicted > 1e-12 {
            (report.norm_121 - predicted).abs() / predicted
        } else {
            report.norm_121
        };
        Some(ModuleCheck {
            rho_max,
            span3_source: cfg.span3_source,
            report,
            predicted_norm_121: predicted,
            relative_gap,
            within_ten_percent: relative_gap <= 0.10,
        })
    } else {
        None
    };

    let results = DecompositionReport {
        per_point,
        min_localized_angle: min_angle,
        predicted_norm_121: predicted,
        verdict_positive,
        module_check,
    };

    // per-point CSV
    let rows: Vec<Vec<String>> = results
        .per_point
        .iter()
        .enumerate()
        .map(|(i, p)| {
            vec![
                i.to_string(),
                format!("{}", p.transversality[0].score),
                format!("{}", p.transversality[1].score),
                format!("{}", p.transversality[2].score),
                p.clean.to_string(),
                format!("{:.6e}", p.clean_gap),
                p.localized_intersection.pass.to_string(),
                format!("{:.6e}", p.localized_intersection.gap),
                format!("{:.12}", p.localized_angle),
                format!("{:.12}", p.localized_norm_121),
                p.pass.to_string(),
            ]
        })
        .collect();
    write_csv(
        out_dir,
        "points.csv",
        &[
            "point",
            "transversality_m1",
            "transversality_m2",
            "transversality_m3",
            "clean",
            "clean_gap",
            "localized_intersection_ok",
            "localized_gap",
            "localized_angle",
            "localized_norm_121",
            "pass",
        ],
        &rows,
    )?;

    let report = Report {
        header: ReportHeader::now(),
        scenario: "decompose",
        config: cfg.clone(),
        results: results.clone(),
    };
    write_report(out_dir, &report)?;

    let verdict_name = if results.verdict_positive {
        "positive"
    } else {
        "negative"
    };
    let pass = cfg
        .expected_verdict
        .as_deref()
        .map(|e| e == verdict_name)
        .unwrap_or(true);
    Ok(ScenarioOutcome {
        pass,
        summary: format!(
            "decompose: verdict {verdict_name}, min localized angle {:.6}",
            results.min_localized_angle
        ),
    })
}
