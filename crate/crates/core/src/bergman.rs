//! Bergman-space primitives: reproducing kernels, monomial norms, seeded
//! Monte Carlo quadrature over the ball, the unitary `U_z`, and the
//! holomorphic oscillation estimate.

use crate::{
    ball::{ball_params, hyperbolic_distance, pseudo_distance, MoebiusMap, Point},
    error::{Error, Result},
    linalg::householder_to_e1,
    poly::MultiPoly,
    rng, C64,
};
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::sync::Arc;

/// The reproducing kernel `K_z(w) = (1 - <w,z>)^-(n+1)` of the Bergman
/// space on `B_n` with normalized volume.
#[derive(Debug, Clone)]
pub struct KernelFunction {
    pole: Point,
}

impl KernelFunction {
    pub fn new(pole: Point) -> Result<Self> {
        pole.require_interior()?;
        Ok(KernelFunction { pole })
    }

    pub fn pole(&self) -> &Point {
        &self.pole
    }

    pub fn eval(&self, w: &Point) -> C64 {
        kernel_eval(&self.pole, w)
    }

    /// `|K_z|^2 = K_z(z) = (1-|z|^2)^-(n+1)`, exact.
    pub fn norm_sq(&self) -> f64 {
        let n = self.pole.dim() as i32;
        (1.0 - self.pole.norm_sq()).powi(-(n + 1))
    }
}

pub(crate) fn kernel_eval(pole: &Point, w: &Point) -> C64 {
    let n = pole.dim() as i32;
    let denom = C64::new(1.0, 0.0) - crate::ball::point_inner(w, pole);
    denom.powi(-(n + 1))
}

/// `<K_lambda, K_eta> = K_lambda(eta)`, in closed form.
pub fn kernel_inner(lambda: &Point, eta: &Point) -> Result<C64> {
    lambda.require_interior()?;
    eta.require_interior()?;
    if lambda.dim() != eta.dim() {
        return Err(Error::DimensionMismatch {
            left: lambda.dim(),
            right: eta.dim(),
        });
    }
    Ok(kernel_eval(lambda, eta))
}

/// `|k_z - k_w|` for normalized kernels, in closed form:
/// `sqrt(2 - 2 Re <k_z, k_w>)`.
pub fn normalized_kernel_distance(z: &Point, w: &Point) -> Result<f64> {
    let inner = kernel_inner(z, w)?;
    let n = z.dim() as i32;
    let nz = (1.0 - z.norm_sq()).powi(-(n + 1)).sqrt();
    let nw = (1.0 - w.norm_sq()).powi(-(n + 1)).sqrt();
    let cos = (inner / (nz * nw)).re;
    Ok((2.0 - 2.0 * cos).max(0.0).sqrt())
}

/// Squared Bergman norm of the monomial `z^alpha` on `B_n`:
/// `alpha! n! / (n + |alpha|)!`.
pub fn monomial_norm_sq(alpha: &[u32], n: usize) -> f64 {
    let total: u32 = alpha.iter().sum();
    let mut value = 1.0f64;
    for &a in alpha {
        for k in 2..=a {
            value *= k as f64;
        }
    }
    for j in 1..=total {
        value /= (n as u32 + j) as f64;
    }
    value
}

/// A function on the ball carried as an evaluator, preferring an exact
/// monomial-coefficient form when one is available.
#[derive(Clone)]
pub struct SampledFunction {
    dim: usize,
    form: Form,
    norm_sq_hint: Option<f64>,
}

type DynEval = Arc<dyn Fn(&[C64]) -> C64 + Send + Sync>;

#[derive(Clone)]
enum Form {
    Poly(MultiPoly),
    Dyn(DynEval),
}

impl std::fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.form {
            Form::Poly(p) => write!(f, "SampledFunction::Poly(deg {})", p.degree()),
            Form::Dyn(_) => write!(f, "SampledFunction::Dyn(dim {})", self.dim),
        }
    }
}

impl SampledFunction {
    pub fn from_poly(poly: MultiPoly) -> Self {
        SampledFunction {
            dim: poly.nvars(),
            form: Form::Poly(poly),
            norm_sq_hint: None,
        }
    }

    pub fn constant(dim: usize, value: C64) -> Self {
        Self::from_poly(MultiPoly::constant(dim, value))
    }

    /// The coordinate function `z_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        Self::from_poly(MultiPoly::coordinate(dim, i))
    }

    pub fn monomial(dim: usize, powers: Vec<u32>) -> Self {
        Self::from_poly(MultiPoly::monomial(dim, powers, C64::new(1.0, 0.0)))
    }

    pub fn from_fn(dim: usize, f: impl Fn(&[C64]) -> C64 + Send + Sync + 'static) -> Self {
        SampledFunction {
            dim,
            form: Form::Dyn(Arc::new(f)),
            norm_sq_hint: None,
        }
    }

    /// Attach an externally known squared Bergman norm (used for evaluator
    /// forms such as normalized kernels, where the norm is known exactly).
    pub fn with_norm_sq(mut self, norm_sq: f64) -> Self {
        self.norm_sq_hint = Some(norm_sq);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, coords: &[C64]) -> C64 {
        match &self.form {
            Form::Poly(p) => p.eval(coords),
            Form::Dyn(f) => f(coords),
        }
    }

    pub fn eval_point(&self, p: &Point) -> C64 {
        self.eval(p.coords())
    }

    pub fn poly(&self) -> Option<&MultiPoly> {
        match &self.form {
            Form::Poly(p) => Some(p),
            Form::Dyn(_) => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.poly().map(|p| p.degree())
    }

    /// Exact squared Bergman norm: from the coefficient form when present
    /// (monomial orthogonality), otherwise from the attached hint.
    pub fn bergman_norm_sq(&self) -> Result<f64> {
        if let Some(h) = self.norm_sq_hint {
            return Ok(h);
        }
        match &self.form {
            Form::Poly(p) => Ok(p
                .terms()
                .map(|(powers, coeff)| coeff.norm_sqr() * monomial_norm_sq(powers, self.dim))
                .sum()),
            Form::Dyn(_) => Err(Error::PolynomialRequired),
        }
    }
}

/// Result of a Monte Carlo quadrature: estimate, scalar standard error of
/// the complex mean, and the sample count.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub value: C64,
    pub std_err: f64,
    pub count: usize,
}

const MC_SHARD: usize = 32_768;

/// Unbiased estimate of `int_{B_n} f dv` under the normalized measure.
///
/// Sampling is rejection-free polar (radius via the inverse CDF `u^(1/2n)`,
/// direction via a normalized complex Gaussian). Samples are sharded; shard
/// RNG streams derive from the root seed, so the result is independent of
/// the worker count.
pub fn mc_integrate_ball(f: &SampledFunction, count: usize, seed: u64) -> Result<McEstimate> {
    if count == 0 {
        return Err(Error::bad_parameter("sample count must be >= 1"));
    }
    let n = f.dim();
    let shards = count.div_ceil(MC_SHARD);
    let partials: Vec<Result<(C64, f64)>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = rng::seeded_stream(seed, shard as u64);
            let lo = shard * MC_SHARD;
            let hi = ((shard + 1) * MC_SHARD).min(count);
            let mut sum = C64::new(0.0, 0.0);
            let mut sum_sq = 0.0f64;
            for _ in lo..hi {
                let p = rng::uniform_ball_point(&mut rng, n);
                let v = f.eval(&p);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::NonFiniteSample);
                }
                sum += v;
                sum_sq += v.norm_sqr();
            }
            Ok((sum, sum_sq))
        })
        .collect();
    let mut sum = C64::new(0.0, 0.0);
    let mut sum_sq = 0.0;
    for p in partials {
        let (s, q) = p?;
        sum += s;
        sum_sq += q;
    }
    let nf = count as f64;
    let mean = sum / nf;
    let var = (sum_sq / nf - mean.norm_sqr()).max(0.0);
    Ok(McEstimate {
        value: mean,
        std_err: (var / nf).sqrt(),
        count,
    })
}

/// The unitary `U_z f = (f o phi_z) k_z`, with `k_z` the normalized kernel.
/// `U_z` is self-inverse on the Bergman space.
pub fn u_z_apply(z: &Point, f: &SampledFunction) -> Result<SampledFunction> {
    z.require_interior()?;
    if f.dim() != z.dim() {
        return Err(Error::DimensionMismatch {
            left: z.dim(),
            right: f.dim(),
        });
    }
    let map = MoebiusMap::new(z.clone())?;
    let n = z.dim() as i32;
    let kz_scale = (1.0 - z.norm_sq()).powi(n + 1).sqrt();
    let pole = z.clone();
    let inner = f.clone();
    let dim = z.dim();
    Ok(SampledFunction::from_fn(dim, move |coords| {
        let w = Point::new(coords.to_vec());
        let denom = C64::new(1.0, 0.0) - crate::ball::point_inner(&w, &pole);
        match map.apply(&w) {
            Ok(img) => inner.eval(img.coords()) * kz_scale * denom.powi(-(n + 1)),
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    }))
}

/// Both sides of the holomorphic oscillation estimate with the unknown
/// constant factored out: returns `(|g(z)-g(w)|^2,
/// rho(z,w)^2 (1-|w|^2)^-(d+1) int_{D(w,1)} |g|^2 dv)`.
///
/// The integral over the hyperbolic ball `D(w, 1)` is exact for coefficient
/// form `g`: the ellipsoid is pulled back to the round ball by a complex
/// affine map and integrated by monomial orthogonality.
pub fn oscillation_check(g: &SampledFunction, z: &Point, w: &Point) -> Result<(f64, f64)> {
    let d = z.dim();
    if w.dim() != d || g.dim() != d {
        return Err(Error::DimensionMismatch {
            left: d,
            right: w.dim().max(g.dim()),
        });
    }
    let beta = hyperbolic_distance(z, w)?;
    if beta >= 0.5 {
        return Err(Error::precondition(format!(
            "oscillation estimate requires beta(z,w) < 1/2, got {beta:.4}"
        )));
    }
    let poly = g.poly().ok_or(Error::PolynomialRequired)?;
    let lhs = (g.eval_point(z) - g.eval_point(w)).norm_sqr();

    let ball = ball_params(w, 1.0)?;
    // Complex affine map carrying B_d onto the ellipsoid D(w, 1).
    let axes: Vec<f64> = std::iter::once(ball.axial_radius)
        .chain(std::iter::repeat_n(ball.transverse_radius, d - 1))
        .collect();
    let a = if w.norm() > 0.0 {
        let h = householder_to_e1(w.coords())?; // h * (w/|w|) = e1
        let mut m = h.adjoint();
        for (j, &ax) in axes.iter().enumerate() {
            for i in 0..d {
                let v = m[(i, j)];
                m[(i, j)] = v * ax;
            }
        }
        m
    } else {
        DMatrix::from_diagonal_element(d, d, C64::new(ball.s_r, 0.0))
    };
    let pulled = poly.compose_affine(&a, ball.ellipsoid_center.coords());
    let integral: f64 = pulled
        .terms()
        .map(|(powers, coeff)| coeff.norm_sqr() * monomial_norm_sq(powers, d))
        .sum::<f64>()
        * ball.volume();

    let rho = pseudo_distance(z, w)?;
    let rhs = rho * rho / (1.0 - w.norm_sq()).powi(d as i32 + 1) * integral;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kernel_inner_closed_forms() {
        let o = Point::origin(2);
        assert!((kernel_inner(&o, &o).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        // n = 1, lambda = eta = 1/2: (3/4)^-2 = 16/9
        let h = Point::from_re(&[0.5]);
        assert!((kernel_inner(&h, &h).unwrap() - c(16.0 / 9.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn kernel_hermitian_symmetry() {
        let mut rng = crate::rng::seeded(3);
        for _ in 0..50 {
            let z = Point::new(crate::rng::uniform_ball_point(&mut rng, 2));
            let w = Point::new(crate::rng::uniform_ball_point(&mut rng, 2));
            if !z.is_interior() || !w.is_interior() {
                continue;
            }
            let a = kernel_inner(&z, &w).unwrap();
            let b = kernel_inner(&w, &z).unwrap();
            assert!((a - b.conj()).norm() < 1e-10 * a.norm());
        }
    }

    #[test]
    fn normalized_distance_limits() {
        let z = Point::new(vec![c(0.3, 0.1), c(0.0, 0.2)]);
        assert!(normalized_kernel_distance(&z, &z).unwrap() < 1e-12);
        // (0, w) with |w| -> 1: distance increases to sqrt(2) from below
        let d1 =
            normalized_kernel_distance(&Point::origin(2), &Point::from_re(&[0.9, 0.0])).unwrap();
        let d2 =
            normalized_kernel_distance(&Point::origin(2), &Point::from_re(&[0.999, 0.0])).unwrap();
        assert!(d1 < d2 && d2 < 2f64.sqrt());
        assert!(2f64.sqrt() - d2 < 0.01);
    }

    #[test]
    fn monomial_norms_match_formula() {
        assert!((monomial_norm_sq(&[0, 0], 2) - 1.0).abs() < 1e-15);
        assert!((monomial_norm_sq(&[1, 0], 2) - 1.0 / 3.0).abs() < 1e-15);
        assert!((monomial_norm_sq(&[2], 1) - 1.0 / 3.0).abs() < 1e-15);
        // n = 2, alpha = (1,1): 1*1*2!/4! = 1/12
        assert!((monomial_norm_sq(&[1, 1], 2) - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn mc_constant_is_exact() {
        let f = SampledFunction::constant(2, c(1.0, 0.0));
        let est = mc_integrate_ball(&f, 10_000, 5).unwrap();
        assert!((est.value - c(1.0, 0.0)).norm() < 1e-12);
        assert!(est.std_err < 1e-12);
    }

    #[test]
    fn mc_matches_monomial_norm() {
        // |z1|^2 over B_2 = 1/3
        let f = SampledFunction::from_fn(2, |z| c(z[0].norm_sqr(), 0.0));
        let est = mc_integrate_ball(&f, 200_000, 7).unwrap();
        assert!(
            (est.value.re - 1.0 / 3.0).abs() < 3.0 * est.std_err,
            "got {} +- {}",
            est.value.re,
            est.std_err
        );
        // odd moment vanishes
        let g = SampledFunction::coordinate(2, 0);
        let est = mc_integrate_ball(&g, 200_000, 8).unwrap();
        assert!(est.value.norm() < 3.0 * est.std_err + 1e-6);
    }

    #[test]
    fn mc_is_deterministic_and_sharding_stable() {
        let f = SampledFunction::from_fn(2, |z| z[0] * z[1] + c(0.25, 0.0));
        let a = mc_integrate_ball(&f, 70_000, 42).unwrap();
        let b = mc_integrate_ball(&f, 70_000, 42).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.std_err, b.std_err);
    }

    #[test]
    fn mc_rejects_non_finite() {
        let f = SampledFunction::from_fn(1, |_| c(f64::NAN, 0.0));
        assert!(matches!(
            mc_integrate_ball(&f, 100, 1),
            Err(Error::NonFiniteSample)
        ));
    }

    #[test]
    fn u_z_of_one_is_normalized_kernel() {
        let z = Point::new(vec![c(0.4, 0.1), c(-0.2, 0.0)]);
        let one = SampledFunction::constant(2, c(1.0, 0.0));
        let uz1 = u_z_apply(&z, &one).unwrap();
        let w = Point::new(vec![c(0.1, -0.3), c(0.2, 0.2)]);
        let n = 2i32;
        let expected = (1.0 - z.norm_sq()).powi(n + 1).sqrt()
            * (C64::new(1.0, 0.0) - crate::ball::point_inner(&w, &z)).powi(-(n + 1));
        assert!((uz1.eval_point(&w) - expected).norm() < 1e-13);
    }

    #[test]
    fn u_z_is_an_involution_pointwise() {
        let z = Point::new(vec![c(0.3, -0.2), c(0.1, 0.4)]);
        let f = SampledFunction::from_poly(
            MultiPoly::monomial(2, vec![2, 0], c(1.0, 0.0)).add(&MultiPoly::monomial(
                2,
                vec![0, 1],
                c(0.0, 2.0),
            )),
        );
        let uuf = u_z_apply(&z, &u_z_apply(&z, &f).unwrap()).unwrap();
        let mut rng = crate::rng::seeded(9);
        for _ in 0..100 {
            let w = Point::new(
                crate::rng::uniform_ball_point(&mut rng, 2)
                    .into_iter()
                    .map(|v| v * 0.95)
                    .collect(),
            );
            let diff = (uuf.eval_point(&w) - f.eval_point(&w)).norm();
            assert!(diff < 1e-10, "involution defect {diff}");
        }
    }

    #[test]
    fn oscillation_trivial_cases() {
        let g = SampledFunction::constant(2, c(3.0, 1.0));
        let z = Point::from_re(&[0.1, 0.0]);
        let w = Point::from_re(&[0.15, 0.05]);
        let (lhs, _) = oscillation_check(&g, &z, &w).unwrap();
        assert!(lhs == 0.0);
        let (lhs, rhs) =
            oscillation_check(&SampledFunction::coordinate(2, 0), &z, &z.clone()).unwrap();
        assert!(lhs == 0.0 && rhs == 0.0);
    }

    #[test]
    fn oscillation_rejects_distant_pairs() {
        let g = SampledFunction::coordinate(1, 0);
        let z = Point::from_re(&[0.0]);
        let w = Point::from_re(&[0.9]);
        assert!(matches!(
            oscillation_check(&g, &z, &w),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn oscillation_integral_matches_monte_carlo() {
        // cross-check the exact ellipsoid integral against MC on D(w,1)
        let g = SampledFunction::from_poly(
            MultiPoly::monomial(2, vec![1, 1], c(1.0, 0.0)).add(&MultiPoly::monomial(
                2,
                vec![2, 0],
                c(0.5, -0.5),
            )),
        );
        let w = Point::new(vec![c(0.3, 0.1), c(-0.1, 0.2)]);
        let z = Point::new(vec![c(0.32, 0.1), c(-0.1, 0.18)]);
        let (_, rhs) = oscillation_check(&g, &z, &w).unwrap();
        // MC of the same quantity
        let ball = ball_params(&w, 1.0).unwrap();
        let gg = g.clone();
        let bb = ball.clone();
        let ind = SampledFunction::from_fn(2, move |coords| {
            let p = Point::new(coords.to_vec());
            if bb.contains(&p) {
                c(gg.eval(coords).norm_sqr(), 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let est = mc_integrate_ball(&ind, 400_000, 17).unwrap();
        let rho = pseudo_distance(&z, &w).unwrap();
        let mc_rhs = rho * rho / (1.0 - w.norm_sq()).powi(3) * est.value.re;
        let tol = rho * rho / (1.0 - w.norm_sq()).powi(3) * 3.0 * est.std_err;
        assert!(
            (rhs - mc_rhs).abs() <= tol + 1e-12,
            "exact {rhs} vs mc {mc_rhs} (tol {tol})"
        );
    }
}
