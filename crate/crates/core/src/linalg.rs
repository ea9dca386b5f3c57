//! Complex linear algebra helpers shared by the geometry and span modules.
//!
//! Rank decisions all use a single knob: a relative singular-value (or
//! eigenvalue) cutoff against the largest one. `REL_CUTOFF` is the default.

use crate::{error::Result, rng, Error, C64};
use nalgebra::{DMatrix, SymmetricEigen};

/// Default relative cutoff for all rank decisions.
pub const REL_CUTOFF: f64 = 1e-10;

/// Hermitian inner product `<a, b> = sum a_i conj(b_i)`.
pub fn herm_inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn norm_sq(a: &[C64]) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    norm_sq(a).sqrt()
}

/// Largest singular value; zero for empty matrices.
pub fn operator_norm(a: &DMatrix<C64>) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |m, &s| s.max(m))
}

/// Orthonormal basis of the column space, retaining singular directions with
/// `sigma > rel_cutoff * sigma_max`.
pub fn orthonormal_columns(a: &DMatrix<C64>, rel_cutoff: f64) -> DMatrix<C64> {
    if a.ncols() == 0 || a.nrows() == 0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("svd with u requested");
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| s.max(m));
    if smax == 0.0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let kept: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > rel_cutoff * smax)
        .map(|(i, _)| i)
        .collect();
    u.select_columns(&kept)
}

/// Orthonormal basis of the nullspace of `a`, via the singular directions
/// with `sigma <= rel_cutoff * sigma_max`.
pub fn nullspace(a: &DMatrix<C64>, rel_cutoff: f64) -> DMatrix<C64> {
    let n = a.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Pad with zero rows so the thin SVD carries a full set of right
    // singular vectors.
    let mut m = a.clone();
    if m.nrows() < n {
        let pad = n - m.nrows();
        let at = m.nrows();
        m = m.insert_rows(at, pad, C64::new(0.0, 0.0));
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("svd with v requested");
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| s.max(m));
    let kept: Vec<usize> = (0..n)
        .filter(|&i| {
            let s = if i < svd.singular_values.len() {
                svd.singular_values[i]
            } else {
                0.0
            };
            smax == 0.0 || s <= rel_cutoff * smax
        })
        .collect();
    v_t.adjoint().select_columns(&kept)
}

/// Orthonormal basis of `range(b1) ∩ range(b2)` for orthonormal inputs,
/// computed from the nullspace of the stacked orthogonal complements.
pub fn intersection_basis(b1: &DMatrix<C64>, b2: &DMatrix<C64>, rel_cutoff: f64) -> DMatrix<C64> {
    let n = b1.nrows();
    assert_eq!(n, b2.nrows(), "ambient dimensions must agree");
    let p1 = b1 * b1.adjoint();
    let p2 = b2 * b2.adjoint();
    let eye = DMatrix::<C64>::identity(n, n);
    let mut stacked = DMatrix::zeros(2 * n, n);
    stacked.view_mut((0, 0), (n, n)).copy_from(&(&eye - &p1));
    stacked.view_mut((n, 0), (n, n)).copy_from(&(&eye - &p2));
    nullspace(&stacked, rel_cutoff)
}

/// Cosines of the principal angles between the column spaces of two
/// orthonormal bases, descending (so angles ascend). Clamped to `[0, 1]`.
pub fn principal_angle_cosines(b1: &DMatrix<C64>, b2: &DMatrix<C64>) -> Vec<f64> {
    if b1.ncols() == 0 || b2.ncols() == 0 {
        return Vec::new();
    }
    let cross = b1.adjoint() * b2;
    let mut cos: Vec<f64> = cross
        .svd(false, false)
        .singular_values
        .iter()
        .map(|&s| s.clamp(0.0, 1.0))
        .collect();
    cos.sort_by(|a, b| b.partial_cmp(a).unwrap());
    cos
}

/// Whitening factor of a Hermitian positive semidefinite Gram matrix.
#[derive(Debug, Clone)]
pub struct Whitening {
    /// `m x rank` factor with `W^H G W = I` on the retained range.
    pub factor: DMatrix<C64>,
    /// All eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    pub rank: usize,
    /// Absolute cutoff that was applied.
    pub cutoff: f64,
}

/// Eigendecomposition-based whitening with relative cutoff
/// `rel_cutoff * lambda_max`. Eigenvalues at or below the cutoff are
/// discarded; the retained factor satisfies `W^H G W = I` up to rounding.
pub fn hermitian_whiten(g: &DMatrix<C64>, rel_cutoff: f64) -> Whitening {
    let m = g.nrows();
    assert_eq!(m, g.ncols());
    if m == 0 {
        return Whitening {
            factor: DMatrix::zeros(0, 0),
            eigenvalues: Vec::new(),
            rank: 0,
            cutoff: 0.0,
        };
    }
    let eig = SymmetricEigen::new(g.clone());
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let lambda_max = eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let cutoff = rel_cutoff * lambda_max;
    let rank = eigenvalues.iter().take_while(|&&l| l > cutoff).count();
    let mut factor = DMatrix::zeros(m, rank);
    for (k, &i) in order.iter().take(rank).enumerate() {
        let scale = 1.0 / eigenvalues[k].sqrt();
        factor
            .column_mut(k)
            .copy_from(&(eig.eigenvectors.column(i) * C64::new(scale, 0.0)));
    }
    Whitening {
        factor,
        eigenvalues,
        rank,
        cutoff,
    }
}

/// Unitary `R` with `R * (v/|v|) = e_1`, built from a Householder reflection
/// followed by a diagonal phase fix. Deterministic and numerically stable.
pub fn householder_to_e1(v: &[C64]) -> Result<DMatrix<C64>> {
    let n = v.len();
    let vnorm = norm(v);
    if vnorm < 1e-300 {
        return Err(Error::bad_parameter("cannot rotate the zero vector"));
    }
    let u: Vec<C64> = v.iter().map(|c| c / vnorm).collect();
    let phase = if u[0].norm() < 1e-300 {
        C64::new(1.0, 0.0)
    } else {
        u[0] / u[0].norm()
    };
    // w = u + phase * e1; H = I - 2 w w^H / |w|^2 sends u to -phase * e1.
    let mut w = u.clone();
    w[0] += phase;
    let wns = norm_sq(&w);
    let mut h = DMatrix::<C64>::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] -= 2.0 / wns * w[i] * w[j].conj();
        }
    }
    // Scale the first row so the image is exactly +e1.
    for j in 0..n {
        let val = h[(0, j)];
        h[(0, j)] = -phase.conj() * val;
    }
    Ok(h)
}

/// Seeded Haar-like unitary (QR of a complex Gaussian matrix with positive
/// diagonal phases); used by rotation-invariance tests and direction nets.
pub fn seeded_unitary(n: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = rng::seeded(seed);
    let g = DMatrix::from_fn(n, n, |_, _| {
        C64::new(
            rng::standard_normal(&mut rng),
            rng::standard_normal(&mut rng),
        )
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                let val = q[(i, j)];
                q[(i, j)] = val * phase;
            }
        }
    }
    q
}

/// Column matrix assembled from coordinate vectors.
pub fn matrix_from_columns(nrows: usize, cols: &[Vec<C64>]) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(nrows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        assert_eq!(c.len(), nrows);
        for i in 0..nrows {
            m[(i, j)] = c[i];
        }
    }
    m
}
