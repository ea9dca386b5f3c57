//! The linear-pair scenario: sampled kernel-span angle estimates against
//! the closed-form oracle for pairs of linear varieties, with a CSV sweep
//! over the angle list.

use crate::config::LinearPairConfig;
use crate::report::{write_csv, write_report, Report, ReportHeader};
use crate::scenarios::{derive_seed, ScenarioOutcome};
use anyhow::{bail, Context, Result};
use bergmod::angle::{linear_triple_angle_exact, module_angle_sampled, AngleReport, Closedness};
use bergmod::ball::Point;
use bergmod::span::{build_span, sample_variety, SamplePlan};
use bergmod::variety::{LinearVariety, Variety};
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct PairRow {
    /// Angle parameter for the two-lines family; absent for explicit pairs.
    pub theta: Option<f64>,
    pub m: usize,
    pub rho_max: f64,
    pub cos_exact: f64,
    pub norm_121_exact: f64,
    pub report: AngleReport,
    pub rel_err_121: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearPairResults {
    pub rows: Vec<PairRow>,
    pub scenario_verdict: Closedness,
}

fn line_pair(theta: f64) -> (LinearVariety, LinearVariety) {
    let e1 = LinearVariety::coordinate_plane(2, &[0]);
    let dir = vec![
        bergmod::C64::new(theta.cos(), 0.0),
        bergmod::C64::new(theta.sin(), 0.0),
    ];
    let tilted = LinearVariety::span_of(2, &[dir]).expect("line basis");
    (e1, tilted)
}

pub fn evaluate_pair(
    v1: &LinearVariety,
    v2: &LinearVariety,
    m: usize,
    rho_max: f64,
    cutoff_rel: f64,
    margin: f64,
    seed: u64,
) -> Result<(AngleReport, f64, f64)> {
    let p1 = sample_variety(
        &Variety::Linear(v1.clone()),
        &SamplePlan::stratified(m, rho_max, derive_seed(seed, 1)),
    )?;
    let p2 = sample_variety(
        &Variety::Linear(v2.clone()),
        &SamplePlan::stratified(m, rho_max, derive_seed(seed, 2)),
    )?;
    let s1 = build_span(&p1, cutoff_rel)?;
    let s2 = build_span(&p2, cutoff_rel)?;
    // intersection span: sample the exact intersection variety, or the
    // origin-only model when the varieties meet only at 0
    let v3 = bergmod::variety::subspace_intersection(v1, v2)?;
    let p3 = if v3.dim() == 0 {
        vec![Point::origin(v1.ambient_dim())]
    } else {
        sample_variety(
            &Variety::Linear(v3),
            &SamplePlan::stratified((m / 2).max(1), rho_max, derive_seed(seed, 3)),
        )?
    };
    let s3 = build_span(&p3, cutoff_rel)?;
    let report = module_angle_sampled(&s1, &s2, Some(&s3), margin)?;
    let (cos_exact, n121_exact) = linear_triple_angle_exact(v1, v2)?;
    Ok((report, cos_exact, n121_exact))
}

pub fn run(cfg: &LinearPairConfig, out_dir: &Path) -> Result<ScenarioOutcome> {
    let mut rows: Vec<PairRow> = Vec::new();
    let pairs: Vec<(Option<f64>, LinearVariety, LinearVariety)> = match &cfg.varieties {
        Some([d1, d2]) => {
            let v1 = d1.build().context("building first variety")?;
            let v2 = d2.build().context("building second variety")?;
            let (Variety::Linear(l1), Variety::Linear(l2)) = (v1, v2) else {
                bail!("linear-pair requires linear varieties through the origin");
            };
            vec![(None, l1, l2)]
        }
        None => cfg
            .thetas
            .iter()
            .map(|&t| {
                let (a, b) = line_pair(t);
                (Some(t), a, b)
            })
            .collect(),
    };

    for (i, (theta, v1, v2)) in pairs.iter().enumerate() {
        let (report, cos_exact, n121_exact) = evaluate_pair(
            v1,
            v2,
            cfg.m,
            cfg.rho_max,
            cfg.cutoff_rel,
            cfg.margin,
            derive_seed(cfg.seed, 10 + i as u64),
        )?;
        let rel_err_121 =
            (n121_exact > 1e-12).then(|| (report.norm_121 - n121_exact).abs() / n121_exact);
        rows.push(PairRow {
            theta: *theta,
            m: cfg.m,
            rho_max: cfg.rho_max,
            cos_exact,
            norm_121_exact: n121_exact,
            report,
            rel_err_121,
        });
    }

    let scenario_verdict = if rows.iter().all(|r| r.report.verdict == Closedness::Closed) {
        Closedness::Closed
    } else if rows
        .iter()
        .any(|r| r.report.verdict == Closedness::NotClosed)
    {
        Closedness::NotClosed
    } else {
        Closedness::Inconclusive
    };

    let mut csv_rows = Vec::new();
    for r in &rows {
        let mut row = vec![
            r.theta.map(|t| format!("{t:.12}")).unwrap_or_default(),
            r.m.to_string(),
            format!("{}", r.rho_max),
            format!("{:.12}", r.cos_exact),
            format!("{:.12}", r.norm_121_exact),
        ];
        row.extend(r.report.csv_record());
        row.push(
            r.rel_err_121
                .map(|e| format!("{e:.6e}"))
                .unwrap_or_default(),
        );
        csv_rows.push(row);
    }
    let mut header = vec!["theta", "m", "rho_max", "cos_exact", "norm_121_exact"];
    header.extend(AngleReport::csv_header());
    header.push("rel_err_121");
    write_csv(out_dir, "sweep.csv", &header, &csv_rows)?;

    let results = LinearPairResults {
        rows,
        scenario_verdict,
    };
    let report = Report {
        header: ReportHeader::now(),
        scenario: "linear-pair",
        config: cfg.clone(),
        results: results.clone(),
    };
    write_report(out_dir, &report)?;

    let verdict_name = match results.scenario_verdict {
        Closedness::Closed => "closed",
        Closedness::NotClosed => "not-closed",
        Closedness::Inconclusive => "inconclusive",
    };
    let pass = cfg
        .expected_verdict
        .as_deref()
        .map(|e| e == verdict_name)
        .unwrap_or(true);
    Ok(ScenarioOutcome {
        pass,
        summary: format!(
            "linear-pair: {} rows, verdict {verdict_name}",
            results.rows.len()
        ),
    })
}
