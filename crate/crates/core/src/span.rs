//! Finite-dimensional models of quotient modules: variety sampling, kernel
//! Gram matrices with rank-revealing whitening, sampled projections, the
//! exact linear-variety projection oracle, and equivalent measures.

use crate::{
    ball::{pseudo_distance, Point},
    bergman::{kernel_eval, SampledFunction},
    error::{Error, Result},
    linalg::{self, Whitening},
    rng,
    variety::{LinearVariety, Variety},
    C64,
};
use nalgebra::DMatrix;
use rand::Rng;
use std::io::{Read, Write};
use std::sync::Arc;

/// Sampling scheme for variety discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleScheme {
    /// Polar chart sampling with the radius CDF matching the slice measure
    /// `(1-r^2)^(n-d) r^(2d-1) dr`.
    StratifiedRandom,
    /// Greedy packing with pairwise pseudo-hyperbolic separation `delta`.
    SeparatedNet { delta: f64 },
}

/// Plan for sampling a variety inside the ball.
#[derive(Debug, Clone)]
pub struct SamplePlan {
    pub count: usize,
    pub rho_max: f64,
    pub scheme: SampleScheme,
    pub seed: u64,
}

impl SamplePlan {
    pub fn stratified(count: usize, rho_max: f64, seed: u64) -> Self {
        SamplePlan {
            count,
            rho_max,
            scheme: SampleScheme::StratifiedRandom,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::bad_parameter("sample count must be >= 1"));
        }
        if !(0.0 < self.rho_max && self.rho_max < 1.0) {
            return Err(Error::bad_parameter("rho_max must lie in (0, 1)"));
        }
        if let SampleScheme::SeparatedNet { delta } = self.scheme {
            if !(0.0 < delta && delta < 1.0) {
                return Err(Error::bad_parameter("separation delta must lie in (0, 1)"));
            }
        }
        Ok(())
    }
}

/// CDF of the slice radial law `(1-s^2)^k s^(2d-1) ds` on `[0, t]`,
/// unnormalized: `(1/2) int_0^(t^2) x^(d-1) (1-x)^k dx` expanded binomially.
fn slice_radial_cdf(t: f64, d: usize, k: usize) -> f64 {
    let x = t * t;
    let mut acc = 0.0;
    let mut binom = 1.0f64;
    for j in 0..=k {
        let power = (d + j) as f64;
        acc += binom * x.powf(power) / power;
        binom *= -((k - j) as f64) / (j + 1) as f64;
    }
    0.5 * acc
}

/// Inverse of the truncated slice radial CDF on `[r_lo, r_hi]`, by bisection.
fn slice_radius(u: f64, d: usize, k: usize, r_lo: f64, r_hi: f64) -> f64 {
    let f_lo = slice_radial_cdf(r_lo, d, k);
    let f_hi = slice_radial_cdf(r_hi, d, k);
    let target = f_lo + u * (f_hi - f_lo);
    let (mut lo, mut hi) = (r_lo, r_hi);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if slice_radial_cdf(mid, d, k) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One chart sample attempt; `None` means the proposal fell outside the
/// admissible region and the caller should retry.
fn chart_sample(v: &Variety, plan: &SamplePlan, rng: &mut impl Rng) -> Option<Point> {
    let n = v.ambient_dim();
    let d = v.dim();
    match v {
        Variety::Linear(lv) => {
            if d == 0 {
                return Some(Point::origin(n));
            }
            let rad = slice_radius(rng.gen(), d, n - d, 0.0, plan.rho_max);
            let dir = rng::unit_direction(rng, d);
            let u: Vec<C64> = dir.into_iter().map(|c| c * rad).collect();
            let coords = (lv.basis() * DMatrix::from_column_slice(d, 1, &u))
                .column(0)
                .iter()
                .copied()
                .collect();
            Some(Point::new(coords))
        }
        Variety::Affine(av) => {
            if d == 0 {
                let p = av.base.clone();
                return (p.norm() <= plan.rho_max).then_some(p);
            }
            // minimum attainable norm on the affine slice
            let tau_min = av.direction.off_space_residual(av.base.coords());
            if tau_min >= plan.rho_max {
                return None;
            }
            let tau = slice_radius(rng.gen(), d, n - d, tau_min.min(plan.rho_max), plan.rho_max);
            let dir = rng::unit_direction(rng, d);
            let bu = (av.direction.basis() * DMatrix::from_column_slice(d, 1, &dir))
                .column(0)
                .iter()
                .copied()
                .collect::<Vec<C64>>();
            // |base + rho * bu|^2 = tau^2, quadratic in rho >= 0
            let c1 = linalg::herm_inner(&bu, av.base.coords()).re;
            let disc = c1 * c1 - (av.base.norm_sq() - tau * tau);
            if disc < 0.0 {
                return None;
            }
            let rho = -c1 + disc.sqrt();
            if rho < 0.0 {
                return None;
            }
            let coords = av
                .base
                .coords()
                .iter()
                .zip(&bu)
                .map(|(b, u)| b + u * rho)
                .collect();
            Some(Point::new(coords))
        }
        Variety::Graph(gv) => {
            let tau = slice_radius(rng.gen(), d, n - d, 0.0, plan.rho_max);
            let dir = rng::unit_direction(rng, d);
            // |point(rho * dir)| is continuous with value >= rho; scan for a
            // bracket of |point| = tau on [0, tau] and bisect.
            let norm_at = |rho: f64| -> f64 {
                let u: Vec<C64> = dir.iter().map(|c| c * rho).collect();
                gv.point_from_chart(&u).norm()
            };
            let steps = 64;
            let mut lo = 0.0f64;
            let mut lo_val = norm_at(0.0);
            if lo_val > tau {
                return None;
            }
            let mut bracket = None;
            for i in 1..=steps {
                let hi = tau * i as f64 / steps as f64;
                let hi_val = norm_at(hi);
                if (lo_val <= tau) != (hi_val <= tau) {
                    bracket = Some((lo, hi));
                    break;
                }
                lo = hi;
                lo_val = hi_val;
            }
            let (mut a, mut b) = bracket.unwrap_or((tau, tau));
            for _ in 0..50 {
                let mid = 0.5 * (a + b);
                if norm_at(mid) <= tau {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let rho = 0.5 * (a + b);
            let u: Vec<C64> = dir.iter().map(|c| c * rho).collect();
            let p = gv.point_from_chart(&u);
            (p.norm() <= plan.rho_max + 1e-12).then_some(p)
        }
    }
}

/// Sample `plan.count` points on `V ∩ B_n` with `|lambda| <= rho_max`,
/// deterministically from the plan's seed. The separated-net scheme
/// guarantees pairwise pseudo-hyperbolic distance at least `delta` and
/// reports the achieved count if packing becomes infeasible.
pub fn sample_variety(v: &Variety, plan: &SamplePlan) -> Result<Vec<Point>> {
    plan.validate()?;
    let mut rng = rng::seeded(plan.seed);
    let mut out: Vec<Point> = Vec::with_capacity(plan.count);
    let budget = plan.count.saturating_mul(1000).max(10_000);
    let mut attempts = 0usize;
    while out.len() < plan.count && attempts < budget {
        attempts += 1;
        let Some(p) = chart_sample(v, plan, &mut rng) else {
            continue;
        };
        match plan.scheme {
            SampleScheme::StratifiedRandom => out.push(p),
            SampleScheme::SeparatedNet { delta } => {
                let mut ok = true;
                for q in &out {
                    if pseudo_distance(&p, q)? < delta {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    out.push(p);
                }
            }
        }
    }
    if out.len() < plan.count {
        return Err(Error::SamplingExhausted {
            requested: plan.count,
            achieved: out.len(),
        });
    }
    Ok(out)
}

/// Finite kernel span: sample points, their kernel Gram matrix, and a
/// rank-revealing whitening factorization.
#[derive(Debug, Clone)]
pub struct KernelSpan {
    points: Vec<Point>,
    ambient_dim: usize,
    gram: DMatrix<C64>,
    whitening: Whitening,
    rel_cutoff: f64,
}

/// Kernel Gram matrix `G[j][k] = <K_{p_k}, K_{q_j}> = K_{p_k}(q_j)` of two
/// point families (rows indexed by `rows`, columns by `cols`).
pub(crate) fn kernel_gram(rows: &[Point], cols: &[Point]) -> DMatrix<C64> {
    DMatrix::from_fn(rows.len(), cols.len(), |j, k| {
        kernel_eval(&cols[k], &rows[j])
    })
}

/// Assemble the Gram matrix of `span{K_lambda}` and whiten it with the
/// relative eigenvalue cutoff `rel_cutoff` (eigenvalues at or below
/// `rel_cutoff * lambda_max` are discarded).
pub fn build_span(points: &[Point], rel_cutoff: f64) -> Result<KernelSpan> {
    if points.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let n = points[0].dim();
    for p in points {
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: p.dim(),
            });
        }
        p.require_interior()?;
    }
    let gram = kernel_gram(points, points);
    let whitening = linalg::hermitian_whiten(&gram, rel_cutoff);
    Ok(KernelSpan {
        points: points.to_vec(),
        ambient_dim: n,
        gram,
        whitening,
        rel_cutoff,
    })
}

impl KernelSpan {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.whitening.rank
    }

    pub fn gram(&self) -> &DMatrix<C64> {
        &self.gram
    }

    pub fn whitening(&self) -> &DMatrix<C64> {
        &self.whitening.factor
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.whitening.eigenvalues
    }

    pub fn cutoff(&self) -> f64 {
        self.whitening.cutoff
    }

    pub fn rel_cutoff(&self) -> f64 {
        self.rel_cutoff
    }

    /// `|W^H G W - I|` on the retained range.
    pub fn whitening_residual(&self) -> f64 {
        let w = &self.whitening.factor;
        let r = self.whitening.rank;
        (w.adjoint() * &self.gram * w - DMatrix::<C64>::identity(r, r)).norm()
    }

    /// Write the sample set in the measure CSV schema with unit weights.
    pub fn write_sample_csv<W: Write>(&self, out: W) -> Result<()> {
        write_point_csv(out, &self.points, None)
    }
}

/// Result of projecting a function onto a kernel span: the kernel-basis
/// coefficients, the induced Bergman norm, and an evaluator.
#[derive(Clone)]
pub struct ProjectedFunction {
    pub coefficients: Vec<C64>,
    pub norm: f64,
    pub evaluator: SampledFunction,
}

/// Least-norm interpolant in the kernel span matching `f` on the sample
/// set, solved through the whitened system (`c = W W^H y`, the
/// pseudo-inverse of the Gram matrix on its numerical range). The returned
/// norm is the Bergman norm of the interpolant computed from Gram data.
pub fn project(span: &KernelSpan, f: &SampledFunction) -> Result<ProjectedFunction> {
    if f.dim() != span.ambient_dim {
        return Err(Error::DimensionMismatch {
            left: span.ambient_dim,
            right: f.dim(),
        });
    }
    let y = DMatrix::from_fn(span.points.len(), 1, |j, _| f.eval_point(&span.points[j]));
    let w = &span.whitening.factor;
    let a = w.adjoint() * &y;
    let c = w * &a;
    let coefficients: Vec<C64> = c.column(0).iter().copied().collect();
    let norm = a.norm();
    let pts = Arc::new(span.points.clone());
    let coef = Arc::new(coefficients.clone());
    let evaluator = SampledFunction::from_fn(span.ambient_dim, move |coords| {
        let wpt = Point::new(coords.to_vec());
        pts.iter()
            .zip(coef.iter())
            .map(|(p, c)| c * kernel_eval(p, &wpt))
            .sum()
    })
    .with_norm_sq(norm * norm);
    Ok(ProjectedFunction {
        coefficients,
        norm,
        evaluator,
    })
}

/// Exact projection oracle for a linear variety through the origin:
/// `(Q f)(w) = f(M w)` with `M` the orthogonal projection onto the variety.
pub fn project_oracle_linear(v: &LinearVariety, f: &SampledFunction) -> Result<SampledFunction> {
    if f.dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: v.ambient_dim(),
            right: f.dim(),
        });
    }
    let v = v.clone();
    let inner = f.clone();
    Ok(SampledFunction::from_fn(v.ambient_dim(), move |coords| {
        inner.eval(&v.project_vec(coords))
    }))
}

/// A weighted point cloud in the ball; the discretization of a measure.
#[derive(Debug, Clone)]
pub struct WeightedPointMeasure {
    points: Vec<Point>,
    weights: Vec<f64>,
    total_mass: f64,
}

impl WeightedPointMeasure {
    pub fn new(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                left: points.len(),
                right: weights.len(),
            });
        }
        if weights
            .iter()
            .any(|&w| w.is_nan() || w < 0.0 || !w.is_finite())
        {
            return Err(Error::bad_parameter(
                "weights must be finite and nonnegative",
            ));
        }
        let total_mass = weights.iter().sum();
        Ok(WeightedPointMeasure {
            points,
            weights,
            total_mass,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn dim(&self) -> usize {
        self.points.first().map(|p| p.dim()).unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.points.iter().zip(self.weights.iter().copied())
    }

    /// New measure with weights multiplied by a density factor.
    pub fn reweighted(&self, density: impl Fn(&Point) -> f64) -> Result<Self> {
        let weights: Vec<f64> = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * density(p))
            .collect();
        Self::new(self.points.clone(), weights)
    }

    /// CSV schema: `re0,im0,...,re{n-1},im{n-1},weight`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_point_csv(out, &self.points, Some(&self.weights))
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(input);
        let headers = reader.headers()?.clone();
        if headers.len() < 3 || (headers.len() - 1) % 2 != 0 {
            return Err(Error::bad_parameter(
                "measure CSV needs re/im column pairs plus a weight column",
            ));
        }
        let dim = (headers.len() - 1) / 2;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for record in reader.records() {
            let record = record?;
            let parse = |i: usize| -> Result<f64> {
                record
                    .get(i)
                    .ok_or_else(|| Error::bad_parameter("short CSV record"))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::bad_parameter(format!("bad float in measure CSV: {e}")))
            };
            let mut coords = Vec::with_capacity(dim);
            for j in 0..dim {
                coords.push(C64::new(parse(2 * j)?, parse(2 * j + 1)?));
            }
            points.push(Point::new(coords));
            weights.push(parse(2 * dim)?);
        }
        Self::new(points, weights)
    }
}

fn write_point_csv<W: Write>(out: W, points: &[Point], weights: Option<&[f64]>) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let dim = points.first().map(|p| p.dim()).unwrap_or(0);
    let mut header: Vec<String> = Vec::new();
    for j in 0..dim {
        header.push(format!("re{j}"));
        header.push(format!("im{j}"));
    }
    header.push("weight".to_string());
    writer.write_record(&header)?;
    for (i, p) in points.iter().enumerate() {
        let mut row: Vec<String> = Vec::new();
        for c in p.coords() {
            row.push(format!("{:.17e}", c.re));
            row.push(format!("{:.17e}", c.im));
        }
        row.push(format!("{:.17e}", weights.map(|w| w[i]).unwrap_or(1.0)));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Quadrature discretization of the equivalent measure
/// `c (1-|z|^2)^(n-d) dv_V` on `V ∩ B_n`, with `c` pinned by total mass 1
/// (the value forced by `int dmu = |Q 1|^2 = 1`). Returns the measure and
/// the normalizing constant `c`.
///
/// The grid is a tensor polar grid on the chart (polar for `d = 1`, Hopf
/// coordinates for `d = 2`) with exact cell measures, radial cells graded
/// dyadically toward the `rho_max` horizon, and total cell count steered by
/// `plan.count`.
pub fn equivalent_measure(
    v: &LinearVariety,
    plan: &SamplePlan,
) -> Result<(WeightedPointMeasure, f64)> {
    plan.validate()?;
    let n = v.ambient_dim();
    let d = v.dim();
    if d == 0 || d > 2 {
        return Err(Error::UnsupportedDimension { dim: d });
    }
    let k = (n - d) as i32;
    let rho_max = plan.rho_max;

    // Dyadic radial edges: uniform to 0.5, then halving shells to rho_max.
    let radial_edges = {
        let mut edges = vec![0.0, 0.125, 0.25, 0.375, 0.5];
        if rho_max <= 0.5 {
            edges = (0..=4).map(|i| rho_max * i as f64 / 4.0).collect();
        } else {
            let mut depth = 0.5f64;
            while 1.0 - depth > (1.0 - rho_max) * 1.0001 {
                depth = (1.0 - (1.0 - depth) / 2.0).min(rho_max);
                edges.push(depth);
            }
            if *edges.last().unwrap() < rho_max {
                edges.push(rho_max);
            }
        }
        edges
    };
    // Split each dyadic band into sub-cells.
    let per_band = 4usize;
    let mut r_edges = Vec::new();
    for w in radial_edges.windows(2) {
        for i in 0..per_band {
            r_edges.push(w[0] + (w[1] - w[0]) * i as f64 / per_band as f64);
        }
    }
    r_edges.push(rho_max);
    let bands = r_edges.len() - 1;

    let mut chart_points: Vec<Vec<C64>> = Vec::new();
    let mut cell_measures: Vec<f64> = Vec::new();
    match d {
        1 => {
            let theta_cap = (plan.count / bands).max(8);
            for w in r_edges.windows(2) {
                let (r0, r1) = (w[0], w[1]);
                if r1 <= r0 {
                    continue;
                }
                let rc = ((r0 * r0 + r1 * r1) / 2.0).sqrt();
                let n_theta = (((std::f64::consts::TAU * rc) / (r1 - r0)).ceil() as usize)
                    .clamp(8, theta_cap);
                let cell = (r1 * r1 - r0 * r0) / n_theta as f64;
                for j in 0..n_theta {
                    let th = (j as f64 + 0.5) * std::f64::consts::TAU / n_theta as f64;
                    chart_points.push(vec![C64::from_polar(rc, th)]);
                    cell_measures.push(cell);
                }
            }
        }
        2 => {
            // Hopf cells: v_2(cell) = [d(r^4)/4][d(sin^2 eta)/2] dth1 dth2 / (pi^2/2)
            let ang_budget = ((plan.count / bands).max(64) as f64).cbrt().ceil() as usize;
            let n_theta = (4 * ang_budget).max(8);
            let n_eta = ang_budget.max(4);
            let full = std::f64::consts::PI * std::f64::consts::PI / 2.0;
            for w in r_edges.windows(2) {
                let (r0, r1) = (w[0], w[1]);
                if r1 <= r0 {
                    continue;
                }
                let rc = ((r0.powi(4) + r1.powi(4)) / 2.0).powf(0.25);
                let dr4 = (r1.powi(4) - r0.powi(4)) / 4.0;
                for ie in 0..n_eta {
                    let e0 = std::f64::consts::FRAC_PI_2 * ie as f64 / n_eta as f64;
                    let e1 = std::f64::consts::FRAC_PI_2 * (ie + 1) as f64 / n_eta as f64;
                    let ec = ((e0.sin().powi(2) + e1.sin().powi(2)) / 2.0).sqrt().asin();
                    let deta = (e1.sin().powi(2) - e0.sin().powi(2)) / 2.0;
                    let dth = std::f64::consts::TAU / n_theta as f64;
                    let cell = dr4 * deta * dth * dth / full;
                    for j1 in 0..n_theta {
                        let t1 = (j1 as f64 + 0.5) * dth;
                        for j2 in 0..n_theta {
                            let t2 = (j2 as f64 + 0.5) * dth;
                            chart_points.push(vec![
                                C64::from_polar(rc * ec.cos(), t1),
                                C64::from_polar(rc * ec.sin(), t2),
                            ]);
                            cell_measures.push(cell);
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }

    let mut points = Vec::with_capacity(chart_points.len());
    let mut raw = Vec::with_capacity(chart_points.len());
    for (u, cell) in chart_points.iter().zip(&cell_measures) {
        let coords: Vec<C64> = (v.basis() * DMatrix::from_column_slice(d, 1, u))
            .column(0)
            .iter()
            .copied()
            .collect();
        let p = Point::new(coords);
        let density = (1.0 - p.norm_sq()).powi(k);
        raw.push(cell * density);
        points.push(p);
    }
    let total_raw: f64 = raw.iter().sum();
    let c = 1.0 / total_raw;
    let weights: Vec<f64> = raw.into_iter().map(|w| w * c).collect();
    Ok((WeightedPointMeasure::new(points, weights)?, c))
}
