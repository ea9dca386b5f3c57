//! Closed-form geometry of the complex unit ball: Moebius automorphisms,
//! the pseudo-hyperbolic and hyperbolic metrics, hyperbolic balls, and the
//! derivative of `|phi_z|^2` at the origin.

use crate::{
    error::{Error, Result},
    linalg::{self, herm_inner},
    C64,
};

/// Interior tolerance: points with `1 - |z|^2` below this are rejected by
/// interior-only operations.
pub const INTERIOR_TOL: f64 = 1e-12;

/// Slack allowed on `|z|^2 <= 1` for closed-ball membership.
pub const CLOSED_BALL_TOL: f64 = 1e-9;

/// A point of the closed unit ball in `C^n`; the universal coordinate type.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<C64>,
}

impl Point {
    pub fn new(coords: Vec<C64>) -> Self {
        Point { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Point {
            coords: vec![C64::new(0.0, 0.0); dim],
        }
    }

    /// Point with the given real coordinates.
    pub fn from_re(coords: &[f64]) -> Self {
        Point {
            coords: coords.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn norm_sq(&self) -> f64 {
        linalg::norm_sq(&self.coords)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Point {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn is_interior(&self) -> bool {
        1.0 - self.norm_sq() >= INTERIOR_TOL
    }

    pub(crate) fn require_interior(&self) -> Result<()> {
        let defect = 1.0 - self.norm_sq();
        if defect < INTERIOR_TOL {
            return Err(Error::BoundaryViolation {
                defect,
                tol: INTERIOR_TOL,
            });
        }
        Ok(())
    }

    pub(crate) fn require_closed_ball(&self) -> Result<()> {
        let excess = self.norm_sq() - 1.0;
        if excess > CLOSED_BALL_TOL {
            return Err(Error::bad_parameter(format!(
                "point lies outside the closed ball by {excess:.3e}"
            )));
        }
        Ok(())
    }
}

/// Hermitian pairing `<z, w> = sum z_i conj(w_i)` of two points.
pub fn point_inner(z: &Point, w: &Point) -> C64 {
    herm_inner(z.coords(), w.coords())
}

/// The involutive automorphism `phi_z` of the ball exchanging `0` and `z`.
///
/// `P_z` denotes the projection onto the complex line `C z` and
/// `Q_z = I - P_z`; by convention `P_0` is the zero map, so `phi_0 = -id`.
#[derive(Debug, Clone)]
pub struct MoebiusMap {
    base: Point,
}

impl MoebiusMap {
    /// `base` must be strictly interior.
    pub fn new(base: Point) -> Result<Self> {
        base.require_interior()?;
        Ok(MoebiusMap { base })
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    fn line_projection(&self, w: &Point) -> Vec<C64> {
        let zn = self.base.norm_sq();
        if zn == 0.0 {
            return vec![C64::new(0.0, 0.0); w.dim()];
        }
        let factor = point_inner(w, &self.base) / zn;
        self.base.coords().iter().map(|c| c * factor).collect()
    }

    /// Apply `phi_z` to a point of the closed ball.
    pub fn apply(&self, w: &Point) -> Result<Point> {
        if w.dim() != self.base.dim() {
            return Err(Error::DimensionMismatch {
                left: self.base.dim(),
                right: w.dim(),
            });
        }
        w.require_closed_ball()?;
        let denom = C64::new(1.0, 0.0) - point_inner(w, &self.base);
        if denom.norm() < 1e-14 {
            return Err(Error::DegenerateDenominator {
                value: denom.norm(),
            });
        }
        let s = (1.0 - self.base.norm_sq()).sqrt();
        let pw = self.line_projection(w);
        let coords = self
            .base
            .coords()
            .iter()
            .zip(w.coords())
            .zip(&pw)
            .map(|((zi, wi), pi)| (zi - pi - s * (wi - pi)) / denom)
            .collect();
        Ok(Point::new(coords))
    }
}

/// Residuals of the two fundamental Moebius identities at `(a, z, w)`:
/// the first for `1 - <phi_a(z), phi_a(w)>` against its product form, the
/// second for the `w = z` specialization `1 - |phi_a(z)|^2`.
pub fn moebius_identity_residuals(a: &Point, z: &Point, w: &Point) -> Result<(f64, f64)> {
    a.require_interior()?;
    z.require_interior()?;
    w.require_interior()?;
    let map = MoebiusMap::new(a.clone())?;
    let fz = map.apply(z)?;
    let fw = map.apply(w)?;
    let one = C64::new(1.0, 0.0);
    let lhs1 = one - point_inner(&fz, &fw);
    let rhs1 = (one - point_inner(a, a)) * (one - point_inner(z, w))
        / ((one - point_inner(z, a)) * (one - point_inner(a, w)));
    let res1 = (lhs1 - rhs1).norm();

    let lhs2 = 1.0 - fz.norm_sq();
    let rhs2 = (1.0 - a.norm_sq()) * (1.0 - z.norm_sq()) / (one - point_inner(z, a)).norm_sqr();
    let res2 = (lhs2 - rhs2).abs();
    Ok((res1, res2))
}

/// Real Jacobian determinant of `phi_z` at `w`:
/// `(1-|z|^2)^(n+1) / |1-<w,z>|^(2(n+1))`.
pub fn moebius_jacobian_det(z: &Point, w: &Point) -> Result<f64> {
    z.require_interior()?;
    w.require_interior()?;
    let n = z.dim() as i32;
    let denom = (C64::new(1.0, 0.0) - point_inner(w, z)).norm_sqr();
    Ok((1.0 - z.norm_sq()).powi(n + 1) / denom.powi(n + 1))
}

/// Pseudo-hyperbolic metric `rho(z, w) = |phi_z(w)|`.
pub fn pseudo_distance(z: &Point, w: &Point) -> Result<f64> {
    z.require_interior()?;
    w.require_interior()?;
    let map = MoebiusMap::new(z.clone())?;
    Ok(map.apply(w)?.norm())
}

/// Hyperbolic metric `beta = (1/2) log((1+rho)/(1-rho))`.
pub fn hyperbolic_distance(z: &Point, w: &Point) -> Result<f64> {
    let rho = pseudo_distance(z, w)?;
    Ok(0.5 * ((1.0 + rho) / (1.0 - rho)).ln())
}

/// The hyperbolic ball `D(z, r)` and its ellipsoid description: center `c`,
/// radius `s_r * rho_ell` in the `z` direction and `s_r * sqrt(rho_ell)` in
/// the perpendicular directions, where `s_r = tanh r` and
/// `rho_ell = (1-|z|^2)/(1-s_r^2 |z|^2)`.
#[derive(Debug, Clone)]
pub struct HyperbolicBall {
    pub center: Point,
    pub radius: f64,
    pub s_r: f64,
    pub rho_ell: f64,
    pub ellipsoid_center: Point,
    pub axial_radius: f64,
    pub transverse_radius: f64,
}

/// Derived ellipsoid data of `D(z, r)`.
pub fn ball_params(z: &Point, r: f64) -> Result<HyperbolicBall> {
    z.require_interior()?;
    if r <= 0.0 {
        return Err(Error::bad_parameter("hyperbolic radius must be positive"));
    }
    let s_r = r.tanh();
    let zn = z.norm_sq();
    let rho_ell = (1.0 - zn) / (1.0 - s_r * s_r * zn);
    let c_factor = (1.0 - s_r * s_r) / (1.0 - s_r * s_r * zn);
    let ellipsoid_center = Point::new(z.coords().iter().map(|c| c * c_factor).collect());
    Ok(HyperbolicBall {
        center: z.clone(),
        radius: r,
        s_r,
        rho_ell,
        ellipsoid_center,
        axial_radius: s_r * rho_ell,
        transverse_radius: s_r * rho_ell.sqrt(),
    })
}

impl HyperbolicBall {
    /// Membership via the ellipsoid inequality
    /// `|Pw - c|^2/(s_r rho)^2 + |Qw|^2/(s_r^2 rho) < 1`.
    pub fn contains(&self, w: &Point) -> bool {
        let z = &self.center;
        let zn = z.norm_sq();
        let s2 = self.s_r * self.s_r;
        if zn == 0.0 {
            return w.norm_sq() / s2 < 1.0;
        }
        let factor = point_inner(w, z) / zn;
        let pw: Vec<C64> = z.coords().iter().map(|c| c * factor).collect();
        let diff: Vec<C64> = pw
            .iter()
            .zip(self.ellipsoid_center.coords())
            .map(|(a, b)| a - b)
            .collect();
        let qw_norm_sq: f64 = w
            .coords()
            .iter()
            .zip(&pw)
            .map(|(wi, pi)| (wi - pi).norm_sqr())
            .sum();
        linalg::norm_sq(&diff) / (s2 * self.rho_ell * self.rho_ell)
            + qw_norm_sq / (s2 * self.rho_ell)
            < 1.0
    }

    /// Normalized volume `s_r^(2n) * rho_ell^(n+1)` (the ellipsoid volume
    /// under the normalization `v(B_n) = 1`).
    pub fn volume(&self) -> f64 {
        let n = self.center.dim() as i32;
        self.s_r.powi(2 * n) * self.rho_ell.powi(n + 1)
    }
}

/// Normalized volume of the hyperbolic ball `D(z, r)`.
pub fn ball_volume(z: &Point, r: f64) -> Result<f64> {
    Ok(ball_params(z, r)?.volume())
}

/// Holomorphic partial derivatives of `|phi_z(w)|^2` at `w = 0`, expressed
/// in the rotated basis that carries `z/|z|` to `e_1` (a deterministic
/// Householder reflection). First entry `conj(z'_1)(|z'_1|^2 - 1)` with
/// `z'_1 = |z|`; all others vanish.
pub fn grad_sq_moebius_at_zero(z: &Point) -> Result<Vec<C64>> {
    z.require_interior()?;
    let n = z.dim();
    let mut grad = vec![C64::new(0.0, 0.0); n];
    let r = z.norm();
    if r > 0.0 {
        grad[0] = C64::new(r * (r * r - 1.0), 0.0);
    }
    Ok(grad)
}
