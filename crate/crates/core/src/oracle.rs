//! Independent numerical oracles: finite-difference derivatives of the
//! Moebius map and Monte Carlo hit counting for hyperbolic-ball volumes.
//!
//! These deliberately avoid the closed forms they are used to check: the
//! Jacobian and gradient oracles differentiate the map itself, and the
//! volume oracle counts membership hits.

use crate::{
    ball::{HyperbolicBall, MoebiusMap, Point},
    error::Result,
    linalg::householder_to_e1,
    rng, C64,
};
use nalgebra::DMatrix;

/// Real `2n x 2n` Jacobian determinant of `phi_z` at `w` by central
/// differences with step `h`.
pub fn jacobian_det_fd(z: &Point, w: &Point, h: f64) -> Result<f64> {
    let map = MoebiusMap::new(z.clone())?;
    let n = z.dim();
    let eval = |coords: &[C64]| -> Result<Vec<f64>> {
        let img = map.apply(&Point::new(coords.to_vec()))?;
        Ok(img.coords().iter().flat_map(|c| [c.re, c.im]).collect())
    };
    let mut jac = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for j in 0..2 * n {
        let mut plus = w.coords().to_vec();
        let mut minus = w.coords().to_vec();
        let delta = if j % 2 == 0 {
            C64::new(h, 0.0)
        } else {
            C64::new(0.0, h)
        };
        plus[j / 2] += delta;
        minus[j / 2] -= delta;
        let fp = eval(&plus)?;
        let fm = eval(&minus)?;
        for i in 0..2 * n {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(jac.determinant().abs())
}

/// Holomorphic partials `d/dw_j |phi_z(w)|^2` at `w = 0`, computed by
/// central differences in the same rotated frame used by
/// [`crate::ball::grad_sq_moebius_at_zero`].
pub fn grad_sq_fd(z: &Point, h: f64) -> Result<Vec<C64>> {
    let n = z.dim();
    let map = MoebiusMap::new(z.clone())?;
    let back = if z.norm() > 0.0 {
        householder_to_e1(z.coords())?.adjoint()
    } else {
        DMatrix::identity(n, n)
    };
    let eval = |u: &[C64]| -> Result<f64> {
        let v = DMatrix::from_column_slice(n, 1, u);
        let w = Point::new((&back * v).column(0).iter().copied().collect());
        Ok(map.apply(&w)?.norm_sq())
    };
    let mut grad = Vec::with_capacity(n);
    for j in 0..n {
        let mut u = vec![C64::new(0.0, 0.0); n];
        u[j] = C64::new(h, 0.0);
        let px = eval(&u)?;
        u[j] = C64::new(-h, 0.0);
        let mx = eval(&u)?;
        u[j] = C64::new(0.0, h);
        let py = eval(&u)?;
        u[j] = C64::new(0.0, -h);
        let my = eval(&u)?;
        let dx = (px - mx) / (2.0 * h);
        let dy = (py - my) / (2.0 * h);
        // d/dw = (d/dx - i d/dy) / 2
        grad.push(C64::new(dx / 2.0, -dy / 2.0));
    }
    Ok(grad)
}

/// Monte Carlo membership estimate of the normalized volume of a
/// hyperbolic ball: hit fraction and its standard error.
pub fn ball_volume_mc(ball: &HyperbolicBall, samples: usize, seed: u64) -> (f64, f64) {
    let n = ball.center.dim();
    let mut rng = rng::seeded(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let p = Point::new(rng::uniform_ball_point(&mut rng, n));
        if ball.contains(&p) {
            hits += 1;
        }
    }
    let estimate = hits as f64 / samples as f64;
    let se = (estimate * (1.0 - estimate) / samples as f64)
        .sqrt()
        .max(1e-12);
    (estimate, se)
}
