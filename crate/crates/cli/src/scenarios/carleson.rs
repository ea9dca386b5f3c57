//! The carleson scenario: builds or loads a discretized measure and runs
//! the three equivalent Carleson tests across the shell ladder.

use crate::config::{CarlesonConfig, MeasureSource};
use crate::report::{write_csv, write_report, Report, ReportHeader};
use crate::scenarios::ScenarioOutcome;
use anyhow::{Context, Result};
use bergmod::bergman::SampledFunction;
use bergmod::carleson::{carleson_report, CarlesonReport, TrendVerdict};
use bergmod::span::{equivalent_measure, SamplePlan, WeightedPointMeasure};
use bergmod::variety::LinearVariety;
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct CarlesonResults {
    pub report: CarlesonReport,
    /// "stable" when all three tests are stable, "growing" when all grow,
    /// "mixed" otherwise.
    pub overall: String,
    pub measure_points: usize,
    pub measure_mass: f64,
}

fn build_measure(cfg: &CarlesonConfig) -> Result<WeightedPointMeasure> {
    match &cfg.measure {
        MeasureSource::Csv { path } => {
            let file = std::fs::File::open(path)
                .with_context(|| format!("opening measure CSV {}", path.display()))?;
            Ok(WeightedPointMeasure::read_csv(file)?)
        }
        MeasureSource::Lebesgue { dim } => {
            let v = LinearVariety::full(*dim);
            let (nu, _) = equivalent_measure(
                &v,
                &SamplePlan::stratified(cfg.cells, cfg.rho_grid, cfg.seed),
            )?;
            Ok(nu)
        }
        MeasureSource::EquivalentLine { ambient_dim } => {
            let v = LinearVariety::coordinate_plane(*ambient_dim, &[0]);
            let (nu, _) = equivalent_measure(
                &v,
                &SamplePlan::stratified(cfg.cells, cfg.rho_grid, cfg.seed),
            )?;
            Ok(nu)
        }
        MeasureSource::RadialDensity { dim, exponent } => {
            let v = LinearVariety::full(*dim);
            let (nu, _) = equivalent_measure(
                &v,
                &SamplePlan::stratified(cfg.cells, cfg.rho_grid, cfg.seed),
            )?;
            let exponent = *exponent;
            Ok(nu.reweighted(|p| (1.0 - p.norm_sq()).powf(exponent))?)
        }
    }
}

/// All monomials in `dim` variables up to the given total degree.
fn monomial_corpus(dim: usize, degree: u32) -> Vec<SampledFunction> {
    let mut alphas: Vec<Vec<u32>> = vec![vec![0; dim]];
    let mut frontier = alphas.clone();
    for _ in 0..degree {
        let mut next = Vec::new();
        for a in &frontier {
            for i in 0..dim {
                let mut b = a.clone();
                b[i] += 1;
                if !next.contains(&b) && !alphas.contains(&b) {
                    next.push(b);
                }
            }
        }
        alphas.extend(next.iter().cloned());
        frontier = next;
    }
    alphas
        .into_iter()
        .map(|a| SampledFunction::monomial(dim, a))
        .collect()
}

pub fn run(cfg: &CarlesonConfig, out_dir: &Path) -> Result<ScenarioOutcome> {
    let nu = build_measure(cfg)?;
    let corpus = monomial_corpus(nu.dim(), cfg.corpus_degree);
    let report = carleson_report(
        &nu,
        &cfg.shells,
        cfg.seed,
        cfg.ratio_radius,
        &corpus,
        cfg.growth_exponent,
    )?;

    let overall = match (
        report.kernel_verdict,
        report.ratio_verdict,
        report.embedding_verdict,
    ) {
        (TrendVerdict::Stable, TrendVerdict::Stable, TrendVerdict::Stable) => "stable",
        (TrendVerdict::Growing, TrendVerdict::Growing, TrendVerdict::Growing) => "growing",
        _ => "mixed",
    }
    .to_string();

    if cfg.dump_measure {
        std::fs::create_dir_all(out_dir)?;
        let file = std::fs::File::create(out_dir.join("measure.csv"))?;
        nu.write_csv(file)?;
    }

    let shell_rows: Vec<Vec<String>> = report
        .per_shell
        .iter()
        .map(|s| {
            vec![
                format!("{}", s.shell),
                format!("{:.12e}", s.kernel_sup),
                format!("{:.12e}", s.ratio_sup),
                format!("{:.12e}", s.embedding_sup),
            ]
        })
        .collect();
    write_csv(
        out_dir,
        "shells.csv",
        &["shell", "kernel_sup", "ratio_sup", "embedding_sup"],
        &shell_rows,
    )?;

    let results = CarlesonResults {
        measure_points: nu.len(),
        measure_mass: nu.total_mass(),
        report,
        overall,
    };
    let doc = Report {
        header: ReportHeader::now(),
        scenario: "carleson",
        config: cfg.clone(),
        results: results.clone(),
    };
    write_report(out_dir, &doc)?;

    let pass = cfg
        .expected_verdict
        .as_deref()
        .map(|e| e == results.overall)
        .unwrap_or(true);
    Ok(ScenarioOutcome {
        pass,
        summary: format!(
            "carleson: kernel {:.4}, ratio {:.4}, embedding {:.4}, overall {}",
            results.report.sup_kernel,
            results.report.sup_ratio,
            results.report.embedding_ratio,
            results.overall
        ),
    })
}
