//! The three equivalent Carleson-measure tests, applied to discretized
//! measures: the kernel-integral condition, the embedding condition over a
//! test corpus, and the ball-ratio condition.
//!
//! Discretized measures cannot certify non-Carleson behavior; reports carry
//! growth trends across a radial shell ladder, labeled as heuristic.

use crate::{
    ball::{ball_params, Point},
    bergman::SampledFunction,
    error::{Error, Result},
    rng,
    span::WeightedPointMeasure,
    C64,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default hyperbolic radius for the ball-ratio condition.
pub const DEFAULT_RATIO_RADIUS: f64 = 1.0;

/// Default radial shells of the evaluation grid.
pub const DEFAULT_SHELLS: [f64; 4] = [0.0, 0.5, 0.9, 0.99];

/// Default growth exponent: a test is flagged as growing when the last
/// two log-log slopes of the shell sups against `1-|z|^2` exceed this.
/// Saturating (Carleson) values have slopes decaying to 0; densities like
/// `(1-|w|^2)^(-a)` show slope `a`.
pub const DEFAULT_GROWTH_EXPONENT: f64 = 0.15;

/// Verdict for one Carleson test across the shell ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrendVerdict {
    /// Values stay bounded and stable across the ladder.
    Stable,
    /// Values grow like a power of `1/(1-|z|^2)` along the ladder: the
    /// heuristic signature of a non-Carleson density.
    Growing,
}

/// The evaluation grid: radial shells crossed with a deterministic
/// direction net of `2 n^2` points (the coordinate directions `e_j`,
/// `i e_j`, then seeded unit vectors); shell `0` contributes the origin.
pub fn radial_shell_zgrid(n: usize, shells: &[f64], seed: u64) -> Vec<Point> {
    let mut dirs: Vec<Vec<C64>> = Vec::new();
    for j in 0..n {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[j] = C64::new(1.0, 0.0);
        dirs.push(e.clone());
        e[j] = C64::new(0.0, 1.0);
        dirs.push(e);
    }
    let mut rng = rng::seeded(seed);
    while dirs.len() < 2 * n * n {
        dirs.push(rng::unit_direction(&mut rng, n));
    }
    let mut grid = Vec::new();
    for &s in shells {
        if s == 0.0 {
            grid.push(Point::origin(n));
        } else {
            for d in &dirs {
                grid.push(Point::new(d.iter().map(|c| c * s).collect()));
            }
        }
    }
    grid
}

/// Condition-1 integrand `(1-|z|^2)^(n+1) / |1-<w,z>|^(2(n+1))` integrated
/// against the measure, for one grid point.
pub fn carleson_kernel_value(nu: &WeightedPointMeasure, z: &Point) -> f64 {
    let n = z.dim() as i32;
    let scale = (1.0 - z.norm_sq()).powi(n + 1);
    nu.iter()
        .map(|(w, weight)| {
            let denom = (C64::new(1.0, 0.0) - crate::ball::point_inner(w, z)).norm_sqr();
            weight * scale / denom.powi(n + 1)
        })
        .sum()
}

/// Condition 1: `sup_z int (1-|z|^2)^(n+1)/|1-<w,z>|^(2(n+1)) dnu(w)` over
/// the grid.
pub fn carleson_kernel_sup(nu: &WeightedPointMeasure, zgrid: &[Point]) -> f64 {
    zgrid
        .par_iter()
        .map(|z| carleson_kernel_value(nu, z))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max)
}

/// Condition 3 value at one grid point: `nu(D(z,r)) / v_n(D(z,r))`.
pub fn carleson_ratio_value(nu: &WeightedPointMeasure, r: f64, z: &Point) -> Result<f64> {
    let ball = ball_params(z, r)?;
    let mass: f64 = nu
        .iter()
        .filter(|(w, _)| ball.contains(w))
        .map(|(_, weight)| weight)
        .sum();
    Ok(mass / ball.volume())
}

/// Condition 3: `sup_z nu(D(z,r))/v_n(D(z,r))` over the grid.
pub fn carleson_ratio_sup(nu: &WeightedPointMeasure, r: f64, zgrid: &[Point]) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::bad_parameter("ball radius must be positive"));
    }
    let values: Result<Vec<f64>> = zgrid
        .par_iter()
        .map(|z| carleson_ratio_value(nu, r, z))
        .collect();
    Ok(values?.into_iter().fold(0.0, f64::max))
}

/// Condition 2 ratio for one corpus member: `int |f|^2 dnu / |f|^2`.
pub fn carleson_embedding_value(nu: &WeightedPointMeasure, f: &SampledFunction) -> Result<f64> {
    let norm_sq = f.bergman_norm_sq()?;
    if norm_sq <= 0.0 {
        return Err(Error::bad_parameter("corpus member has zero Bergman norm"));
    }
    let integral: f64 = nu.iter().map(|(p, w)| w * f.eval_point(p).norm_sqr()).sum();
    Ok(integral / norm_sq)
}

/// Condition 2: max embedding ratio over the corpus (a finite-corpus lower
/// bound on the true embedding constant).
pub fn carleson_embedding_check(
    nu: &WeightedPointMeasure,
    corpus: &[SampledFunction],
) -> Result<f64> {
    let values: Result<Vec<f64>> = corpus
        .par_iter()
        .map(|f| carleson_embedding_value(nu, f))
        .collect();
    Ok(values?.into_iter().fold(0.0, f64::max))
}

/// The normalized kernel `k_z` as a corpus member (`|k_z| = 1` exactly).
pub fn normalized_kernel_function(z: &Point) -> Result<SampledFunction> {
    z.require_interior()?;
    let n = z.dim() as i32;
    let scale = (1.0 - z.norm_sq()).powi(n + 1).sqrt();
    let pole = z.clone();
    Ok(SampledFunction::from_fn(z.dim(), move |coords| {
        let w = Point::new(coords.to_vec());
        let denom = C64::new(1.0, 0.0) - crate::ball::point_inner(&w, &pole);
        scale * denom.powi(-(n + 1))
    })
    .with_norm_sq(1.0))
}

/// Per-shell suprema of the three tests.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShellValues {
    pub shell: f64,
    pub kernel_sup: f64,
    pub ratio_sup: f64,
    pub embedding_sup: f64,
}

/// Results of the three equivalent tests on one measure, with the grid
/// metadata needed to reproduce them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CarlesonReport {
    pub sup_kernel: f64,
    pub sup_ratio: f64,
    pub ratio_radius: f64,
    pub embedding_ratio: f64,
    pub per_shell: Vec<ShellValues>,
    pub shells: Vec<f64>,
    pub directions_per_shell: usize,
    pub zgrid_seed: u64,
    pub corpus_size: usize,
    pub growth_exponent: f64,
    pub kernel_verdict: TrendVerdict,
    pub ratio_verdict: TrendVerdict,
    pub embedding_verdict: TrendVerdict,
}

/// Log-log slope classification of shell sups against `delta = 1 - s^2`.
fn trend(shells: &[f64], values: &[f64], growth_exponent: f64) -> TrendVerdict {
    let pts: Vec<(f64, f64)> = shells
        .iter()
        .zip(values)
        .filter(|(_, &v)| v > 0.0)
        .map(|(&s, &v)| (1.0 - s * s, v))
        .collect();
    if pts.len() < 3 {
        return TrendVerdict::Stable;
    }
    let slopes: Vec<f64> = pts
        .windows(2)
        .map(|w| (w[1].1 / w[0].1).ln() / (w[0].0 / w[1].0).ln())
        .collect();
    let last_two = &slopes[slopes.len() - 2..];
    if last_two.iter().all(|&s| s >= growth_exponent) {
        TrendVerdict::Growing
    } else {
        TrendVerdict::Stable
    }
}

/// Run all three tests across the shell ladder.
///
/// The corpus is the caller's polynomial battery plus the normalized
/// kernels at the grid points (which tie condition 2 to condition 1
/// exactly: the embedding ratio of `k_z` is the condition-1 value at `z`).
pub fn carleson_report(
    nu: &WeightedPointMeasure,
    shells: &[f64],
    zgrid_seed: u64,
    ratio_radius: f64,
    polynomial_corpus: &[SampledFunction],
    growth_exponent: f64,
) -> Result<CarlesonReport> {
    if nu.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let n = nu.dim();
    let mut per_shell = Vec::new();
    for &s in shells {
        let grid = radial_shell_zgrid(n, &[s], zgrid_seed);
        let kernel_sup = carleson_kernel_sup(nu, &grid);
        let ratio_sup = carleson_ratio_sup(nu, ratio_radius, &grid)?;
        let mut corpus: Vec<SampledFunction> = Vec::new();
        for z in &grid {
            corpus.push(normalized_kernel_function(z)?);
        }
        let embedding_sup = carleson_embedding_check(nu, &corpus)?;
        per_shell.push(ShellValues {
            shell: s,
            kernel_sup,
            ratio_sup,
            embedding_sup,
        });
    }
    let full_grid = radial_shell_zgrid(n, shells, zgrid_seed);
    let sup_kernel = per_shell.iter().map(|s| s.kernel_sup).fold(0.0, f64::max);
    let sup_ratio = per_shell.iter().map(|s| s.ratio_sup).fold(0.0, f64::max);
    let mut corpus: Vec<SampledFunction> = polynomial_corpus.to_vec();
    for z in &full_grid {
        corpus.push(normalized_kernel_function(z)?);
    }
    let embedding_ratio = carleson_embedding_check(nu, &corpus)?;
    let kernel_values: Vec<f64> = per_shell.iter().map(|s| s.kernel_sup).collect();
    let ratio_values: Vec<f64> = per_shell.iter().map(|s| s.ratio_sup).collect();
    let embed_values: Vec<f64> = per_shell.iter().map(|s| s.embedding_sup).collect();
    Ok(CarlesonReport {
        sup_kernel,
        sup_ratio,
        ratio_radius,
        embedding_ratio,
        per_shell,
        shells: shells.to_vec(),
        directions_per_shell: 2 * n * n,
        zgrid_seed,
        corpus_size: polynomial_corpus.len(),
        growth_exponent,
        kernel_verdict: trend(shells, &kernel_values, growth_exponent),
        ratio_verdict: trend(shells, &ratio_values, growth_exponent),
        embedding_verdict: trend(shells, &embed_values, growth_exponent),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::span::{equivalent_measure, SamplePlan};
    use crate::variety::LinearVariety;

    /// Normalized Lebesgue discretization of B_1 (full-space slice).
    fn lebesgue_disc(cells: usize, rho: f64) -> WeightedPointMeasure {
        let v = LinearVariety::full(1);
        equivalent_measure(&v, &SamplePlan::stratified(cells, rho, 1))
            .unwrap()
            .0
    }

    #[test]
    fn lebesgue_disc_scores_near_one() {
        let nu = lebesgue_disc(120_000, 0.9999);
        let grid = radial_shell_zgrid(1, &DEFAULT_SHELLS, 0);
        let k = carleson_kernel_sup(&nu, &grid);
        assert!((k - 1.0).abs() < 0.05, "kernel sup {k}");
        let r = carleson_ratio_sup(&nu, 1.0, &grid).unwrap();
        assert!((r - 1.0).abs() < 0.05, "ratio sup {r}");
        let corpus: Vec<SampledFunction> = (0..4u32)
            .map(|k| SampledFunction::monomial(1, vec![k]))
            .collect();
        let e = carleson_embedding_check(&nu, &corpus).unwrap();
        assert!((e - 1.0).abs() < 0.05, "embedding {e}");
    }

    #[test]
    fn point_mass_at_origin() {
        let nu = WeightedPointMeasure::new(vec![Point::origin(2)], vec![1.0]).unwrap();
        // sup over grid of (1-|z|^2)^(n+1) = value at smallest |z| (origin)
        let grid = radial_shell_zgrid(2, &DEFAULT_SHELLS, 0);
        let k = carleson_kernel_sup(&nu, &grid);
        assert!((k - 1.0).abs() < 1e-12);
        // corpus {1, z1}: ratios {1, 0}
        let one = SampledFunction::constant(2, C64::new(1.0, 0.0));
        let z1 = SampledFunction::coordinate(2, 0);
        assert!((carleson_embedding_value(&nu, &one).unwrap() - 1.0).abs() < 1e-12);
        assert!(carleson_embedding_value(&nu, &z1).unwrap() < 1e-12);
    }

    #[test]
    fn kernel_identity_between_conditions_one_and_two() {
        let v = LinearVariety::coordinate_plane(2, &[0]);
        let (nu, _) = equivalent_measure(&v, &SamplePlan::stratified(5_000, 0.999, 1)).unwrap();
        let z = Point::new(vec![C64::new(0.3, 0.1), C64::new(0.2, -0.4)]);
        let cond1 = carleson_kernel_value(&nu, &z);
        let cond2 =
            carleson_embedding_value(&nu, &normalized_kernel_function(&z).unwrap()).unwrap();
        assert!(
            (cond1 - cond2).abs() <= 1e-10 * cond1.max(1.0),
            "identity residual {}",
            (cond1 - cond2).abs()
        );
    }

    #[test]
    fn failing_density_grows_along_ladder() {
        let nu = lebesgue_disc(60_000, 0.9999);
        let failing = nu.reweighted(|p| (1.0 - p.norm_sq()).powf(-0.5)).unwrap();
        let shells = [0.5, 0.9, 0.99];
        let mut k_values = Vec::new();
        for &s in &shells {
            let grid = radial_shell_zgrid(1, &[s], 0);
            k_values.push(carleson_kernel_sup(&failing, &grid));
        }
        assert!(
            k_values.windows(2).all(|w| w[1] > 1.3 * w[0]),
            "no growth: {k_values:?}"
        );
        // the stable Lebesgue ladder stays flat
        let mut stable = Vec::new();
        for &s in &shells {
            let grid = radial_shell_zgrid(1, &[s], 0);
            stable.push(carleson_kernel_sup(&nu, &grid));
        }
        assert!(stable.windows(2).all(|w| w[1] < 1.3 * w[0]));
    }

    #[test]
    fn ratio_sup_is_monotone_in_weights() {
        let nu = lebesgue_disc(5_000, 0.99);
        let heavier = nu.reweighted(|p| 1.0 + p.norm_sq()).unwrap();
        let grid = radial_shell_zgrid(1, &[0.0, 0.5, 0.9], 0);
        let base = carleson_ratio_sup(&nu, 1.0, &grid).unwrap();
        let more = carleson_ratio_sup(&heavier, 1.0, &grid).unwrap();
        assert!(more >= base);
    }

    #[test]
    fn full_report_on_line_measure_is_stable() {
        let v = LinearVariety::coordinate_plane(2, &[0]);
        let (nu, _) = equivalent_measure(&v, &SamplePlan::stratified(40_000, 0.9999, 1)).unwrap();
        let corpus: Vec<SampledFunction> = vec![
            SampledFunction::constant(2, C64::new(1.0, 0.0)),
            SampledFunction::coordinate(2, 0),
            SampledFunction::coordinate(2, 1),
            SampledFunction::monomial(2, vec![2, 0]),
        ];
        let report = carleson_report(
            &nu,
            &DEFAULT_SHELLS,
            0,
            DEFAULT_RATIO_RADIUS,
            &corpus,
            DEFAULT_GROWTH_EXPONENT,
        )
        .unwrap();
        assert_eq!(report.kernel_verdict, TrendVerdict::Stable);
        assert_eq!(report.ratio_verdict, TrendVerdict::Stable);
        assert_eq!(report.embedding_verdict, TrendVerdict::Stable);
        assert!(report.sup_kernel.is_finite() && report.sup_kernel > 0.1);
    }

    #[test]
    fn grid_is_deterministic_with_coordinate_directions() {
        let g1 = radial_shell_zgrid(2, &[0.0, 0.5], 7);
        let g2 = radial_shell_zgrid(2, &[0.0, 0.5], 7);
        assert_eq!(g1.len(), g2.len());
        for (a, b) in g1.iter().zip(&g2) {
            assert_eq!(a.coords(), b.coords());
        }
        // 1 origin + 2n^2 directions at the nonzero shell
        assert_eq!(g1.len(), 1 + 8);
        // e1 direction present
        assert!(g1
            .iter()
            .any(|p| (p.coords()[0] - C64::new(0.5, 0.0)).norm() < 1e-15
                && p.coords()[1].norm() < 1e-15));
    }
}
