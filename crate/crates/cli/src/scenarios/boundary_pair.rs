//! The boundary-pair scenario: the tangential affine counterexample. Two
//! affine lines meeting only at a sphere point produce quotient modules
//! whose finite sections show `|Q2 Q1 Q2|` climbing toward 1 along a
//! `rho_max` ladder; the witness trace records the collapsing
//! pseudo-hyperbolic distance that drives it.

use crate::config::{to_c64, BoundaryPairConfig};
use crate::report::{write_csv, write_report, Report, ReportHeader};
use crate::scenarios::{derive_seed, ScenarioOutcome};
use anyhow::{bail, Result};
use bergmod::angle::{closedness_verdict, module_angle_sampled, AngleReport, Closedness};
use bergmod::ball::Point;
use bergmod::span::{build_span, sample_variety, SamplePlan};
use bergmod::variety::{tangential_pair_witness, AffineVariety, LinearVariety, Variety};
use bergmod::C64;
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct WitnessRow {
    pub r: f64,
    pub witness: Vec<[f64; 2]>,
    pub image: Vec<[f64; 2]>,
    pub rho: f64,
    /// `|image_2| / sqrt(1-r^2)`; bounded as `r -> 1`.
    pub tangential_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LadderRung {
    pub rho_max: f64,
    pub report: AngleReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryPairResults {
    pub witness_rows: Vec<WitnessRow>,
    pub ladder: Vec<LadderRung>,
    pub norm_121_ladder: Vec<f64>,
    pub verdict: Closedness,
    pub rho_strictly_decreasing: bool,
    pub norm_strictly_increasing: bool,
}

pub fn run(cfg: &BoundaryPairConfig, out_dir: &Path) -> Result<ScenarioOutcome> {
    let slope = to_c64(&cfg.slope);
    if slope.norm() < 1e-12 {
        bail!("degenerate slope 0: the affine line coincides with M1");
    }
    if cfg.ladder.is_empty() || cfg.ladder.windows(2).any(|w| w[1] <= w[0]) {
        bail!("ladder must be a strictly increasing list of rho_max values");
    }

    // witness trace
    let mut witness_rows = Vec::new();
    for &r in &cfg.ladder {
        let (w_r, image, rho) = tangential_pair_witness(slope, r)?;
        let tangential_ratio = image.coords()[1].norm() / (1.0 - r * r).sqrt();
        witness_rows.push(WitnessRow {
            r,
            witness: w_r.coords().iter().map(|c| [c.re, c.im]).collect(),
            image: image.coords().iter().map(|c| [c.re, c.im]).collect(),
            rho,
            tangential_ratio,
        });
    }

    // spans per rung: stratified background plus the witness pairs at or
    // below the rung
    let m1 = LinearVariety::coordinate_plane(2, &[0]);
    let base = Point::from_re(&[1.0, 0.0]);
    let dir = LinearVariety::span_of(2, &[vec![C64::new(1.0, 0.0), slope]])?;
    let m2 = AffineVariety::new(base, dir)?;

    let mut ladder = Vec::new();
    for (i, &rho_max) in cfg.ladder.iter().enumerate() {
        let mut pts1 = sample_variety(
            &Variety::Linear(m1.clone()),
            &SamplePlan::stratified(cfg.m, rho_max, derive_seed(cfg.seed, 2 * i as u64)),
        )?;
        let mut pts2 = sample_variety(
            &Variety::Affine(m2.clone()),
            &SamplePlan::stratified(cfg.m, rho_max, derive_seed(cfg.seed, 2 * i as u64 + 1)),
        )?;
        for &rw in cfg.witness_rungs.iter().filter(|&&rw| rw <= rho_max) {
            let (w_r, _, _) = tangential_pair_witness(slope, rw)?;
            pts1.push(Point::from_re(&[rw, 0.0]));
            if w_r.is_interior() {
                pts2.push(w_r);
            }
        }
        let s1 = build_span(&pts1, cfg.cutoff_rel)?;
        let s2 = build_span(&pts2, cfg.cutoff_rel)?;
        // the varieties meet only on the sphere: Q3 is the zero module
        let report = module_angle_sampled(&s1, &s2, None, cfg.margin)?;
        ladder.push(LadderRung { rho_max, report });
    }

    let norm_121_ladder: Vec<f64> = ladder.iter().map(|r| r.report.norm_121).collect();
    let verdict = closedness_verdict(&norm_121_ladder, cfg.margin);
    let rho_strictly_decreasing = witness_rows.windows(2).all(|w| w[1].rho < w[0].rho);
    let norm_strictly_increasing = norm_121_ladder.windows(2).all(|w| w[1] > w[0]);

    // CSVs: the witness trace and one angle row per rung
    let witness_csv: Vec<Vec<String>> = witness_rows
        .iter()
        .map(|w| {
            vec![
                format!("{}", w.r),
                format!("{:.12e}", w.witness[0][0]),
                format!("{:.12e}", w.witness[0][1]),
                format!("{:.12e}", w.witness[1][0]),
                format!("{:.12e}", w.witness[1][1]),
                format!("{:.12e}", w.image[0][0]),
                format!("{:.12e}", w.image[0][1]),
                format!("{:.12e}", w.image[1][0]),
                format!("{:.12e}", w.image[1][1]),
                format!("{:.12e}", w.rho),
                format!("{:.12e}", w.tangential_ratio),
            ]
        })
        .collect();
    write_csv(
        out_dir,
        "witness.csv",
        &[
            "r",
            "w_re0",
            "w_im0",
            "w_re1",
            "w_im1",
            "img_re0",
            "img_im0",
            "img_re1",
            "img_im1",
            "rho",
            "tangential_ratio",
        ],
        &witness_csv,
    )?;
    let mut ladder_rows = Vec::new();
    for rung in &ladder {
        let mut row = vec![format!("{}", rung.rho_max)];
        row.extend(rung.report.csv_record());
        ladder_rows.push(row);
    }
    let mut header = vec!["rho_max"];
    header.extend(AngleReport::csv_header());
    write_csv(out_dir, "ladder.csv", &header, &ladder_rows)?;

    let results = BoundaryPairResults {
        witness_rows,
        ladder,
        norm_121_ladder,
        verdict,
        rho_strictly_decreasing,
        norm_strictly_increasing,
    };
    let report = Report {
        header: ReportHeader::now(),
        scenario: "boundary-pair",
        config: cfg.clone(),
        results: results.clone(),
    };
    write_report(out_dir, &report)?;

    let verdict_name = match results.verdict {
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
            "boundary-pair: norms {:?}, verdict {verdict_name}",
            results.norm_121_ladder
        ),
    })
}
