//! Experiment configuration: one JSON document per run, scenario-tagged.
//!
//! All complex data is carried as `[re, im]` pairs so configs and reports
//! round-trip exactly through decimal serialization.

use anyhow::{bail, Context, Result};
use bergmod::poly::MultiPoly;
use bergmod::variety::{AffineVariety, GraphVariety, LinearVariety, Variety};
use bergmod::{ball::Point, C64};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub use bergmod::angle::DEFAULT_MARGIN;

/// `[re, im]` pair.
pub type ComplexPair = [f64; 2];
/// Complex vector as `[re, im]` pairs.
pub type ComplexVector = Vec<ComplexPair>;

pub fn to_c64(p: &ComplexPair) -> C64 {
    C64::new(p[0], p[1])
}

pub fn to_coords(v: &[ComplexPair]) -> Vec<C64> {
    v.iter().map(to_c64).collect()
}

pub fn from_coords(v: &[C64]) -> ComplexVector {
    v.iter().map(|c| [c.re, c.im]).collect()
}

/// Variety description schema shared between configs and reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum VarietyDesc {
    Linear {
        ambient_dim: usize,
        basis: Vec<ComplexVector>,
    },
    Affine {
        ambient_dim: usize,
        base: ComplexVector,
        basis: Vec<ComplexVector>,
    },
    Graph {
        ambient_dim: usize,
        intrinsic_dim: usize,
        /// One entry per graph component `F_{d+1}..F_n`.
        components: Vec<PolyDesc>,
        /// Optional ambient chart unitary (columns).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chart: Option<Vec<ComplexVector>>,
    },
}

/// Coefficient table of one polynomial component.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDesc {
    pub terms: Vec<TermDesc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDesc {
    pub powers: Vec<u32>,
    pub coeff: ComplexPair,
}

impl VarietyDesc {
    pub fn build(&self) -> Result<Variety> {
        match self {
            VarietyDesc::Linear { ambient_dim, basis } => {
                let vectors: Vec<Vec<C64>> = basis.iter().map(|v| to_coords(v)).collect();
                Ok(Variety::Linear(
                    LinearVariety::span_of(*ambient_dim, &vectors)
                        .context("building linear variety")?,
                ))
            }
            VarietyDesc::Affine {
                ambient_dim,
                base,
                basis,
            } => {
                let vectors: Vec<Vec<C64>> = basis.iter().map(|v| to_coords(v)).collect();
                let direction = LinearVariety::span_of(*ambient_dim, &vectors)
                    .context("building affine direction")?;
                Ok(Variety::Affine(
                    AffineVariety::new(Point::new(to_coords(base)), direction)
                        .context("building affine variety")?,
                ))
            }
            VarietyDesc::Graph {
                ambient_dim,
                intrinsic_dim,
                components,
                chart,
            } => {
                let polys: Vec<MultiPoly> = components
                    .iter()
                    .map(|p| {
                        let mut poly = MultiPoly::zero(*intrinsic_dim);
                        for t in &p.terms {
                            if t.powers.len() != *intrinsic_dim {
                                bail!(
                                    "term powers length {} != intrinsic dim {}",
                                    t.powers.len(),
                                    intrinsic_dim
                                );
                            }
                            poly = poly.add(&MultiPoly::monomial(
                                *intrinsic_dim,
                                t.powers.clone(),
                                to_c64(&t.coeff),
                            ));
                        }
                        Ok(poly)
                    })
                    .collect::<Result<_>>()?;
                let chart_matrix = chart.as_ref().map(|cols| {
                    let mut m = DMatrix::<C64>::zeros(*ambient_dim, cols.len());
                    for (j, col) in cols.iter().enumerate() {
                        for (i, entry) in col.iter().enumerate() {
                            m[(i, j)] = to_c64(entry);
                        }
                    }
                    m
                });
                Ok(Variety::Graph(
                    GraphVariety::new(*ambient_dim, polys, chart_matrix)
                        .context("building graph variety")?,
                ))
            }
        }
    }
}

/// Tolerances for the identities scenario; every residual in the report is
/// gated against one of these.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentityTolerances {
    pub involution: f64,
    pub identity1: f64,
    pub identity2: f64,
    pub rho_symmetry: f64,
    pub triangle_slack: f64,
    pub jacobian_rel: f64,
    pub grad_abs: f64,
    pub membership_disagreements: f64,
    pub volume_sigmas: f64,
    pub monomial_sigmas: f64,
    pub reproducing_sigmas: f64,
    pub uz_involution: f64,
}

impl Default for IdentityTolerances {
    fn default() -> Self {
        IdentityTolerances {
            involution: 1e-12,
            identity1: 1e-12,
            identity2: 1e-12,
            rho_symmetry: 1e-12,
            triangle_slack: 1e-12,
            jacobian_rel: 1e-6,
            grad_abs: 1e-6,
            membership_disagreements: 0.0,
            volume_sigmas: 3.0,
            monomial_sigmas: 3.0,
            reproducing_sigmas: 3.0,
            uz_involution: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentitiesConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub triples: usize,
    pub jacobian_pairs: usize,
    pub membership_points: usize,
    pub volume_mc_samples: usize,
    pub monomial_mc_samples: usize,
    pub tolerances: IdentityTolerances,
    pub out_dir: Option<PathBuf>,
}

impl Default for IdentitiesConfig {
    fn default() -> Self {
        IdentitiesConfig {
            seed: 7,
            dims: vec![2, 3],
            triples: 10_000,
            jacobian_pairs: 100,
            membership_points: 10_000,
            volume_mc_samples: 1_000_000,
            monomial_mc_samples: 200_000,
            tolerances: IdentityTolerances::default(),
            out_dir: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinearPairConfig {
    pub seed: u64,
    /// Angles for the two-lines-in-C^2 family.
    pub thetas: Vec<f64>,
    /// Explicit variety pair (must be linear through the origin);
    /// overrides `thetas` when present.
    pub varieties: Option<[VarietyDesc; 2]>,
    pub m: usize,
    pub rho_max: f64,
    pub margin: f64,
    pub cutoff_rel: f64,
    pub expected_verdict: Option<String>,
    pub out_dir: Option<PathBuf>,
}

impl Default for LinearPairConfig {
    fn default() -> Self {
        LinearPairConfig {
            seed: 11,
            thetas: vec![
                std::f64::consts::FRAC_PI_6,
                std::f64::consts::FRAC_PI_4,
                std::f64::consts::FRAC_PI_3,
            ],
            varieties: None,
            m: 200,
            rho_max: 0.95,
            margin: DEFAULT_MARGIN,
            cutoff_rel: 1e-10,
            expected_verdict: None,
            out_dir: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundaryPairConfig {
    pub seed: u64,
    pub slope: ComplexPair,
    /// `rho_max` refinement ladder.
    pub ladder: Vec<f64>,
    /// Witness parameters adjoined to the spans (those at or below the
    /// current rung).
    pub witness_rungs: Vec<f64>,
    pub m: usize,
    pub margin: f64,
    pub cutoff_rel: f64,
    pub expected_verdict: Option<String>,
    pub out_dir: Option<PathBuf>,
}

impl Default for BoundaryPairConfig {
    fn default() -> Self {
        BoundaryPairConfig {
            seed: 13,
            slope: [1.0, 0.0],
            ladder: vec![0.9, 0.99, 0.999],
            witness_rungs: vec![0.5, 0.7, 0.9, 0.97, 0.99, 0.997, 0.999],
            m: 120,
            margin: DEFAULT_MARGIN,
            cutoff_rel: 1e-10,
            expected_verdict: Some("not-closed".to_string()),
            out_dir: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Span3Source {
    IntersectionSamples,
    Localized,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub m1: VarietyDesc,
    pub m2: VarietyDesc,
    /// Description of the intersection variety (its tangent data feeds the
    /// clean-intersection check).
    pub m3: VarietyDesc,
    pub boundary_points: Vec<ComplexVector>,
    #[serde(default = "default_decompose_m")]
    pub m: usize,
    #[serde(default = "default_ladder")]
    pub ladder: Vec<f64>,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "default_cutoff")]
    pub cutoff_rel: f64,
    #[serde(default = "default_span3_source")]
    pub span3_source: Span3Source,
    #[serde(default)]
    pub expected_verdict: Option<String>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn default_seed() -> u64 {
    17
}
fn default_decompose_m() -> usize {
    150
}
fn default_ladder() -> Vec<f64> {
    vec![0.9, 0.99, 0.999]
}
fn default_margin() -> f64 {
    DEFAULT_MARGIN
}
fn default_cutoff() -> f64 {
    1e-10
}
fn default_span3_source() -> Span3Source {
    Span3Source::IntersectionSamples
}

/// Where the measure for the Carleson scenario comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeasureSource {
    /// Load from the measure CSV schema.
    Csv { path: PathBuf },
    /// Normalized Lebesgue measure on `B_dim` (dim <= 2), discretized on
    /// the graded grid.
    Lebesgue { dim: usize },
    /// Equivalent measure `c (1-|z|^2)^(n-1) dv` on the `e_1` line in
    /// `C^ambient_dim`.
    EquivalentLine { ambient_dim: usize },
    /// Lebesgue grid on `B_dim` reweighted by `(1-|w|^2)^exponent`
    /// (negative exponents model non-Carleson densities).
    RadialDensity { dim: usize, exponent: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarlesonConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub measure: MeasureSource,
    #[serde(default = "default_shells")]
    pub shells: Vec<f64>,
    #[serde(default = "default_ratio_radius")]
    pub ratio_radius: f64,
    #[serde(default = "default_corpus_degree")]
    pub corpus_degree: u32,
    #[serde(default = "default_growth_exponent")]
    pub growth_exponent: f64,
    /// Cell budget for builtin grids.
    #[serde(default = "default_cells")]
    pub cells: usize,
    /// Grid truncation radius for builtin grids.
    #[serde(default = "default_rho_grid")]
    pub rho_grid: f64,
    /// Write the discretized measure next to the report.
    #[serde(default)]
    pub dump_measure: bool,
    #[serde(default)]
    pub expected_verdict: Option<String>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn default_shells() -> Vec<f64> {
    bergmod::carleson::DEFAULT_SHELLS.to_vec()
}
fn default_ratio_radius() -> f64 {
    bergmod::carleson::DEFAULT_RATIO_RADIUS
}
fn default_corpus_degree() -> u32 {
    4
}
fn default_growth_exponent() -> f64 {
    bergmod::carleson::DEFAULT_GROWTH_EXPONENT
}
fn default_cells() -> usize {
    120_000
}
fn default_rho_grid() -> f64 {
    0.9999
}

/// The one-document experiment configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Identities(IdentitiesConfig),
    LinearPair(LinearPairConfig),
    BoundaryPair(BoundaryPairConfig),
    Decompose(DecomposeConfig),
    Carleson(CarlesonConfig),
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: ExperimentConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(config)
    }

    pub fn scenario_name(&self) -> &'static str {
        match self {
            ExperimentConfig::Identities(_) => "identities",
            ExperimentConfig::LinearPair(_) => "linear-pair",
            ExperimentConfig::BoundaryPair(_) => "boundary-pair",
            ExperimentConfig::Decompose(_) => "decompose",
            ExperimentConfig::Carleson(_) => "carleson",
        }
    }

    pub fn apply_seed_override(&mut self, seed: Option<u64>) {
        if let Some(s) = seed {
            match self {
                ExperimentConfig::Identities(c) => c.seed = s,
                ExperimentConfig::LinearPair(c) => c.seed = s,
                ExperimentConfig::BoundaryPair(c) => c.seed = s,
                ExperimentConfig::Decompose(c) => c.seed = s,
                ExperimentConfig::Carleson(c) => c.seed = s,
            }
        }
    }

    pub fn apply_ladder_override(&mut self, ladder: Option<Vec<f64>>) {
        if let Some(l) = ladder {
            match self {
                ExperimentConfig::BoundaryPair(c) => c.ladder = l,
                ExperimentConfig::Decompose(c) => c.ladder = l,
                ExperimentConfig::Carleson(c) => c.shells = l,
                _ => {}
            }
        }
    }

    pub fn out_dir(&self) -> Option<PathBuf> {
        match self {
            ExperimentConfig::Identities(c) => c.out_dir.clone(),
            ExperimentConfig::LinearPair(c) => c.out_dir.clone(),
            ExperimentConfig::BoundaryPair(c) => c.out_dir.clone(),
            ExperimentConfig::Decompose(c) => c.out_dir.clone(),
            ExperimentConfig::Carleson(c) => c.out_dir.clone(),
        }
    }
}
