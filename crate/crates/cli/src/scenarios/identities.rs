//! The identities scenario: drives the closed-form invariant suites of the
//! ball geometry and Bergman primitives and reports residual maxima.

use crate::config::IdentitiesConfig;
use crate::report::{write_report, Report, ReportHeader};
use crate::scenarios::{derive_seed, ScenarioOutcome};
use anyhow::Result;
use bergmod::ball::{
    ball_params, grad_sq_moebius_at_zero, hyperbolic_distance, moebius_identity_residuals,
    moebius_jacobian_det, pseudo_distance, MoebiusMap, Point,
};
use bergmod::bergman::{mc_integrate_ball, monomial_norm_sq, u_z_apply, SampledFunction};
use bergmod::oracle::{ball_volume_mc, grad_sq_fd, jacobian_det_fd};
use bergmod::poly::MultiPoly;
use bergmod::{rng, C64};
use rand::Rng;
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub dim: usize,
    /// Residual maximum (or sigma count for Monte Carlo checks).
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentitiesResults {
    pub checks: Vec<CheckRecord>,
    pub all_pass: bool,
}

fn interior(rng: &mut impl Rng, n: usize, rad: f64) -> Point {
    Point::new(
        rng::uniform_ball_point(rng, n)
            .into_iter()
            .map(|v| v * rad)
            .collect(),
    )
}

pub fn run(cfg: &IdentitiesConfig, out_dir: &Path) -> Result<ScenarioOutcome> {
    let tol = &cfg.tolerances;
    let mut checks: Vec<CheckRecord> = Vec::new();
    let mut push = |name: &str, dim: usize, value: f64, tolerance: f64| {
        checks.push(CheckRecord {
            name: name.to_string(),
            dim,
            value,
            tolerance,
            pass: value <= tolerance,
        });
    };

    for (di, &n) in cfg.dims.iter().enumerate() {
        let mut rng = rng::seeded(derive_seed(cfg.seed, di as u64));

        // Moebius involution and the two fundamental identities
        let (mut inv_max, mut id1_max, mut id2_max) = (0.0f64, 0.0f64, 0.0f64);
        let (mut sym_max, mut tri_max) = (0.0f64, 0.0f64);
        for _ in 0..cfg.triples {
            let a = interior(&mut rng, n, 0.9);
            let z = interior(&mut rng, n, 0.9);
            let w = interior(&mut rng, n, 0.9);
            let map = MoebiusMap::new(a.clone())?;
            let round = map.apply(&map.apply(&w)?)?;
            let inv: f64 = round
                .coords()
                .iter()
                .zip(w.coords())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            inv_max = inv_max.max(inv);
            let (r1, r2) = moebius_identity_residuals(&a, &z, &w)?;
            id1_max = id1_max.max(r1);
            id2_max = id2_max.max(r2);
            sym_max = sym_max.max((pseudo_distance(&z, &w)? - pseudo_distance(&w, &z)?).abs());
            let slack = hyperbolic_distance(&a, &w)?
                - hyperbolic_distance(&a, &z)?
                - hyperbolic_distance(&z, &w)?;
            tri_max = tri_max.max(slack);
        }
        push("moebius_involution", n, inv_max, tol.involution);
        push("identity_1", n, id1_max, tol.identity1);
        push("identity_2", n, id2_max, tol.identity2);
        push("rho_symmetry", n, sym_max, tol.rho_symmetry);
        push("beta_triangle_slack", n, tri_max, tol.triangle_slack);

        // Jacobian formula vs finite differences
        let mut jac_rel = 0.0f64;
        for _ in 0..cfg.jacobian_pairs {
            let z = interior(&mut rng, n, 0.9);
            let w = interior(&mut rng, n, 0.9);
            let formula = moebius_jacobian_det(&z, &w)?;
            let fd = jacobian_det_fd(&z, &w, 1e-5)?;
            jac_rel = jac_rel.max((formula - fd).abs() / formula);
        }
        push("jacobian_fd_rel", n, jac_rel, tol.jacobian_rel);

        // Gradient lemma vs central differences, plus exact tail zeros
        let mut grad_abs = 0.0f64;
        let mut tail_max = 0.0f64;
        for k in 0..60 {
            let z = if k == 0 {
                Point::origin(n)
            } else {
                interior(&mut rng, n, 0.9)
            };
            let formula = grad_sq_moebius_at_zero(&z)?;
            for g in formula.iter().skip(1) {
                tail_max = tail_max.max(g.norm());
            }
            if z.norm() == 0.0 {
                continue;
            }
            let fd = grad_sq_fd(&z, 1e-5)?;
            for (a, b) in formula.iter().zip(&fd) {
                grad_abs = grad_abs.max((a - b).norm());
            }
        }
        push("grad_sq_fd_abs", n, grad_abs, tol.grad_abs);
        push("grad_sq_tail", n, tail_max, 0.0);

        // Hyperbolic-ball membership: ellipsoid test vs rho test
        let center = interior(&mut rng, n, 0.7);
        let ball = ball_params(&center, 0.8)?;
        let mut disagreements = 0usize;
        for _ in 0..cfg.membership_points {
            let w = interior(&mut rng, n, 0.9999);
            let by_ellipsoid = ball.contains(&w);
            let by_rho = pseudo_distance(&center, &w)? < ball.s_r;
            if by_ellipsoid != by_rho {
                disagreements += 1;
            }
        }
        push(
            "membership_disagreements",
            n,
            disagreements as f64,
            tol.membership_disagreements,
        );

        // U_z involution pointwise
        let z = interior(&mut rng, n, 0.8);
        let f = SampledFunction::from_poly(MultiPoly::coordinate(n, 0).add(&MultiPoly::monomial(
            n,
            {
                let mut p = vec![0u32; n];
                p[n - 1] = 2;
                p
            },
            C64::new(0.5, -0.25),
        )));
        let uuf = u_z_apply(&z, &u_z_apply(&z, &f)?)?;
        let mut uz_max = 0.0f64;
        for _ in 0..200 {
            let w = interior(&mut rng, n, 0.95);
            uz_max = uz_max.max((uuf.eval_point(&w) - f.eval_point(&w)).norm());
        }
        push("uz_involution", n, uz_max, tol.uz_involution);
    }

    // Hyperbolic-ball volumes vs Monte Carlo (B_2 fixtures)
    let volume_cases = [
        (Point::origin(2), 0.5),
        (Point::origin(2), 1.0),
        (Point::from_re(&[0.5, 0.0]), 0.5),
        (Point::from_re(&[0.5, 0.0]), 1.0),
        (Point::from_re(&[0.9, 0.0]), 0.5),
        (Point::from_re(&[0.9, 0.0]), 1.0),
    ];
    let mut vol_sigmas = 0.0f64;
    for (i, (z, r)) in volume_cases.iter().enumerate() {
        let ball = ball_params(z, *r)?;
        let (estimate, se) = ball_volume_mc(
            &ball,
            cfg.volume_mc_samples,
            derive_seed(cfg.seed, 100 + i as u64),
        );
        vol_sigmas = vol_sigmas.max((ball.volume() - estimate).abs() / se);
    }
    push("ball_volume_mc_sigmas", 2, vol_sigmas, tol.volume_sigmas);

    // Monomial norms vs Monte Carlo
    let mut mono_sigmas = 0.0f64;
    for &n in cfg.dims.iter().filter(|&&n| n <= 3) {
        for total in 0..=3u32 {
            let mut alpha = vec![0u32; n];
            alpha[0] = total;
            if n > 1 && total > 1 {
                // spread the degree over two variables as well
                alpha[0] = total - 1;
                alpha[1] = 1;
            }
            let alpha_cl = alpha.clone();
            let f = SampledFunction::from_fn(n, move |zs| {
                let mut acc = 1.0;
                for (z, &p) in zs.iter().zip(&alpha_cl) {
                    acc *= z.norm_sqr().powi(p as i32);
                }
                C64::new(acc, 0.0)
            });
            let est = mc_integrate_ball(
                &f,
                cfg.monomial_mc_samples,
                derive_seed(cfg.seed, 200 + (n * 10) as u64 + total as u64),
            )?;
            let exact = monomial_norm_sq(&alpha, n);
            mono_sigmas = mono_sigmas.max((est.value.re - exact).abs() / est.std_err.max(1e-12));
        }
    }
    push(
        "monomial_norm_mc_sigmas",
        0,
        mono_sigmas,
        tol.monomial_sigmas,
    );

    // Reproducing property via Monte Carlo (B_2)
    let z = Point::new(vec![C64::new(0.3, 0.2), C64::new(-0.1, 0.4)]);
    let mut rep_sigmas = 0.0f64;
    for (i, poly) in [
        MultiPoly::constant(2, C64::new(1.0, 0.0)),
        MultiPoly::coordinate(2, 0),
        MultiPoly::monomial(2, vec![2, 1], C64::new(1.0, -0.5)),
        MultiPoly::monomial(2, vec![0, 4], C64::new(0.0, 1.0)),
    ]
    .iter()
    .enumerate()
    {
        let f = SampledFunction::from_poly(poly.clone());
        let zc = z.clone();
        let fc = f.clone();
        let integrand = SampledFunction::from_fn(2, move |w| {
            let wp = Point::new(w.to_vec());
            let kz = (C64::new(1.0, 0.0) - bergmod::ball::point_inner(&wp, &zc)).powi(-3);
            fc.eval(w) * kz.conj()
        });
        let est = mc_integrate_ball(
            &integrand,
            cfg.monomial_mc_samples.max(100_000),
            derive_seed(cfg.seed, 300 + i as u64),
        )?;
        rep_sigmas = rep_sigmas.max((est.value - f.eval_point(&z)).norm() / est.std_err.max(1e-12));
    }
    push(
        "reproducing_mc_sigmas",
        2,
        rep_sigmas,
        tol.reproducing_sigmas,
    );

    let all_pass = checks.iter().all(|c| c.pass);
    let results = IdentitiesResults { checks, all_pass };
    let report = Report {
        header: ReportHeader::now(),
        scenario: "identities",
        config: cfg.clone(),
        results: results.clone(),
    };
    write_report(out_dir, &report)?;
    let failed: Vec<&str> = results
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    Ok(ScenarioOutcome {
        pass: results.all_pass,
        summary: if results.all_pass {
            format!("identities: all {} checks passed", results.checks.len())
        } else {
            format!("identities: FAILED checks: {}", failed.join(", "))
        },
    })
}
