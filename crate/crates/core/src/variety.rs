//! Linear, affine, and polynomial-graph varieties: tangent spaces, sphere
//! transversality, clean intersections, boundary-point localization, and
//! the tangential-pair witness construction.

use crate::{
    ball::{MoebiusMap, Point},
    error::{Error, Result},
    linalg::{self, REL_CUTOFF},
    poly::MultiPoly,
    C64,
};
use nalgebra::DMatrix;

/// Residual tolerance for "the point lies on the variety".
pub const ON_VARIETY_TOL: f64 = 1e-8;

/// Tolerance on `| |x| - 1 |` for boundary points.
pub const BOUNDARY_POINT_TOL: f64 = 1e-10;

/// Transversality score threshold.
pub const TRANSVERSALITY_TOL: f64 = 1e-6;

/// A complex subspace of `C^n` carried as an orthonormal basis
/// (`n x d` columns); `d = 0` encodes the zero subspace.
#[derive(Debug, Clone)]
pub struct LinearVariety {
    basis: DMatrix<C64>,
}

impl LinearVariety {
    /// Wrap an orthonormal basis, validating orthonormality to `1e-12`.
    pub fn from_orthonormal(basis: DMatrix<C64>) -> Result<Self> {
        let d = basis.ncols();
        let g = basis.adjoint() * &basis;
        let res = (&g - DMatrix::<C64>::identity(d, d)).norm();
        if res > 1e-12 {
            return Err(Error::bad_parameter(format!(
                "basis columns are not orthonormal (residual {res:.3e})"
            )));
        }
        Ok(LinearVariety { basis })
    }

    /// Orthonormalize an arbitrary spanning set (rank-revealing; dependent
    /// vectors are dropped at the singular-value cutoff).
    pub fn span_of(ambient: usize, vectors: &[Vec<C64>]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    left: ambient,
                    right: v.len(),
                });
            }
        }
        let m = linalg::matrix_from_columns(ambient, vectors);
        Ok(LinearVariety {
            basis: linalg::orthonormal_columns(&m, REL_CUTOFF),
        })
    }

    /// The zero subspace of `C^n`.
    pub fn zero(ambient: usize) -> Self {
        LinearVariety {
            basis: DMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        LinearVariety {
            basis: DMatrix::identity(ambient, ambient),
        }
    }

    /// Span of the listed coordinate axes.
    pub fn coordinate_plane(ambient: usize, axes: &[usize]) -> Self {
        let mut basis = DMatrix::zeros(ambient, axes.len());
        for (j, &a) in axes.iter().enumerate() {
            basis[(a, j)] = C64::new(1.0, 0.0);
        }
        LinearVariety { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<C64> {
        &self.basis
    }

    /// `|(I - P) x|`: distance of `x` from the subspace.
    pub fn off_space_residual(&self, x: &[C64]) -> f64 {
        let v = DMatrix::from_column_slice(x.len(), 1, x);
        let proj = &self.basis * (self.basis.adjoint() * &v);
        (v - proj).norm()
    }

    /// Apply the orthogonal projection onto the subspace.
    pub fn project_vec(&self, x: &[C64]) -> Vec<C64> {
        let v = DMatrix::from_column_slice(x.len(), 1, x);
        let proj = &self.basis * (self.basis.adjoint() * &v);
        proj.column(0).iter().copied().collect()
    }
}

/// An affine subspace `base + direction`.
#[derive(Debug, Clone)]
pub struct AffineVariety {
    pub base: Point,
    pub direction: LinearVariety,
}

impl AffineVariety {
    pub fn new(base: Point, direction: LinearVariety) -> Result<Self> {
        if base.dim() != direction.ambient_dim() {
            return Err(Error::DimensionMismatch {
                left: base.dim(),
                right: direction.ambient_dim(),
            });
        }
        base.require_closed_ball()?;
        Ok(AffineVariety { base, direction })
    }
}

/// A polynomial graph `w = chart * (u, F(u))` over a `d`-dimensional chart,
/// with `F: C^d -> C^(n-d)` stored as coefficient tables. The chart unitary
/// adapts the ambient basis to the graph (identity by default).
#[derive(Debug, Clone)]
pub struct GraphVariety {
    ambient: usize,
    intrinsic: usize,
    graph_map: Vec<MultiPoly>,
    chart: DMatrix<C64>,
}

impl GraphVariety {
    pub fn new(
        ambient: usize,
        graph_map: Vec<MultiPoly>,
        chart: Option<DMatrix<C64>>,
    ) -> Result<Self> {
        let intrinsic = ambient
            .checked_sub(graph_map.len())
            .ok_or_else(|| Error::bad_parameter("graph map has more components than ambient"))?;
        if intrinsic == 0 {
            return Err(Error::bad_parameter(
                "graph must have intrinsic dimension >= 1",
            ));
        }
        for f in &graph_map {
            if f.nvars() != intrinsic {
                return Err(Error::DimensionMismatch {
                    left: intrinsic,
                    right: f.nvars(),
                });
            }
        }
        let chart = match chart {
            Some(u) => {
                if u.nrows() != ambient || u.ncols() != ambient {
                    return Err(Error::DimensionMismatch {
                        left: ambient,
                        right: u.nrows(),
                    });
                }
                let res = (u.adjoint() * &u - DMatrix::<C64>::identity(ambient, ambient)).norm();
                if res > 1e-10 {
                    return Err(Error::bad_parameter(format!(
                        "chart matrix is not unitary (residual {res:.3e})"
                    )));
                }
                u
            }
            None => DMatrix::identity(ambient, ambient),
        };
        Ok(GraphVariety {
            ambient,
            intrinsic,
            graph_map,
            chart,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic
    }

    pub fn graph_map(&self) -> &[MultiPoly] {
        &self.graph_map
    }

    /// Ambient point over chart coordinates `u`.
    pub fn point_from_chart(&self, u: &[C64]) -> Point {
        assert_eq!(u.len(), self.intrinsic);
        let mut adapted: Vec<C64> = u.to_vec();
        adapted.extend(self.graph_map.iter().map(|f| f.eval(u)));
        let v = DMatrix::from_column_slice(self.ambient, 1, &adapted);
        Point::new((&self.chart * v).column(0).iter().copied().collect())
    }

    /// Chart coordinates of an ambient point (first `d` adapted
    /// coordinates) and the graph residual at that point.
    pub fn chart_coords(&self, p: &Point) -> (Vec<C64>, f64) {
        let v = DMatrix::from_column_slice(self.ambient, 1, p.coords());
        let adapted = self.chart.adjoint() * v;
        let u: Vec<C64> = adapted
            .column(0)
            .iter()
            .take(self.intrinsic)
            .copied()
            .collect();
        let residual: f64 = self
            .graph_map
            .iter()
            .enumerate()
            .map(|(i, f)| (adapted[(self.intrinsic + i, 0)] - f.eval(&u)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        (u, residual)
    }
}

/// A point on the unit sphere, validated to `| |x| - 1 | < 1e-10`.
#[derive(Debug, Clone)]
pub struct BoundaryPoint {
    point: Point,
}

impl BoundaryPoint {
    pub fn new(point: Point) -> Result<Self> {
        let defect = (point.norm() - 1.0).abs();
        if defect >= BOUNDARY_POINT_TOL {
            return Err(Error::NotOnBoundary { defect });
        }
        Ok(BoundaryPoint { point })
    }

    pub fn point(&self) -> &Point {
        &self.point
    }

    pub fn coords(&self) -> &[C64] {
        self.point.coords()
    }

    pub fn dim(&self) -> usize {
        self.point.dim()
    }
}

/// Variety in one of the three supported input forms.
#[derive(Debug, Clone)]
pub enum Variety {
    Linear(LinearVariety),
    Affine(AffineVariety),
    Graph(GraphVariety),
}

impl Variety {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Variety::Linear(v) => v.ambient_dim(),
            Variety::Affine(v) => v.direction.ambient_dim(),
            Variety::Graph(v) => v.ambient_dim(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Variety::Linear(v) => v.dim(),
            Variety::Affine(v) => v.direction.dim(),
            Variety::Graph(v) => v.intrinsic_dim(),
        }
    }

    /// Distance-like residual of `p` from the variety (exact for linear and
    /// affine forms, graph-equation residual for graphs).
    pub fn on_variety_residual(&self, p: &Point) -> f64 {
        match self {
            Variety::Linear(v) => v.off_space_residual(p.coords()),
            Variety::Affine(v) => {
                let shifted: Vec<C64> = p
                    .coords()
                    .iter()
                    .zip(v.base.coords())
                    .map(|(a, b)| a - b)
                    .collect();
                v.direction.off_space_residual(&shifted)
            }
            Variety::Graph(v) => v.chart_coords(p).1,
        }
    }

    /// Tangent space at a point of the variety.
    pub fn tangent_at(&self, p: &Point) -> Result<LinearVariety> {
        match self {
            Variety::Linear(v) => {
                check_on_variety(self.on_variety_residual(p))?;
                Ok(v.clone())
            }
            Variety::Affine(v) => {
                check_on_variety(self.on_variety_residual(p))?;
                Ok(v.direction.clone())
            }
            Variety::Graph(v) => tangent_space(v, p),
        }
    }
}

fn check_on_variety(residual: f64) -> Result<()> {
    if residual > ON_VARIETY_TOL {
        return Err(Error::NotOnVariety {
            residual,
            tol: ON_VARIETY_TOL,
        });
    }
    Ok(())
}

/// Hermitian idempotent projection matrix `B B^H` of a linear variety.
pub fn projection_matrix(v: &LinearVariety) -> DMatrix<C64> {
    v.basis() * v.basis().adjoint()
}

/// Orthonormal basis of the exact intersection, via the nullspace of the
/// stacked orthogonal complements with singular-value cutoff.
pub fn subspace_intersection(v1: &LinearVariety, v2: &LinearVariety) -> Result<LinearVariety> {
    if v1.ambient_dim() != v2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: v1.ambient_dim(),
            right: v2.ambient_dim(),
        });
    }
    let basis = linalg::intersection_basis(v1.basis(), v2.basis(), REL_CUTOFF);
    Ok(LinearVariety { basis })
}

/// Principal angles between `v1 ⊖ modulo` and `v2 ⊖ modulo`, ascending,
/// in radians. `modulo` must be contained in both inputs.
pub fn principal_angles(
    v1: &LinearVariety,
    v2: &LinearVariety,
    modulo: &LinearVariety,
) -> Result<Vec<f64>> {
    let n = v1.ambient_dim();
    if v2.ambient_dim() != n || modulo.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: v2.ambient_dim().max(modulo.ambient_dim()),
        });
    }
    for (label, v) in [("v1", v1), ("v2", v2)] {
        let mut worst = 0.0f64;
        for j in 0..modulo.dim() {
            let col: Vec<C64> = modulo.basis().column(j).iter().copied().collect();
            worst = worst.max(v.off_space_residual(&col));
        }
        if worst > ON_VARIETY_TOL {
            return Err(Error::precondition(format!(
                "modulo subspace is not contained in {label} (residual {worst:.3e})"
            )));
        }
    }
    let deflate = |v: &LinearVariety| -> DMatrix<C64> {
        if modulo.dim() == 0 {
            return v.basis().clone();
        }
        let p3 = projection_matrix(modulo);
        let eye = DMatrix::<C64>::identity(n, n);
        linalg::orthonormal_columns(&((&eye - &p3) * v.basis()), REL_CUTOFF)
    };
    let b1 = deflate(v1);
    let b2 = deflate(v2);
    let mut angles: Vec<f64> = linalg::principal_angle_cosines(&b1, &b2)
        .into_iter()
        .map(|c| c.acos())
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(angles)
}

/// Tangent space of a graph variety at an on-variety point: the complex
/// span of the columns `(e_i, dF/du_i)` carried through the chart unitary.
pub fn tangent_space(v: &GraphVariety, p: &Point) -> Result<LinearVariety> {
    if p.dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: v.ambient_dim(),
        });
    }
    let (u, residual) = v.chart_coords(p);
    check_on_variety(residual)?;
    let d = v.intrinsic_dim();
    let n = v.ambient_dim();
    let mut cols = DMatrix::<C64>::zeros(n, d);
    for j in 0..d {
        cols[(j, j)] = C64::new(1.0, 0.0);
        for (i, f) in v.graph_map().iter().enumerate() {
            cols[(d + i, j)] = f.partial(j).eval(&u);
        }
    }
    let ambient_cols = &v.chart * cols;
    Ok(LinearVariety {
        basis: linalg::orthonormal_columns(&ambient_cols, REL_CUTOFF),
    })
}

/// Transversality of a complex tangent space with the sphere at `x`.
///
/// A complex subspace lies inside the sphere's real tangent space iff it is
/// complex-orthogonal to `x`, so the score `|P_T x|` is zero exactly in the
/// non-transversal case; the verdict is `score > 1e-6`.
pub fn sphere_transversality(t: &LinearVariety, x: &BoundaryPoint) -> (f64, bool) {
    let score = if t.dim() == 0 {
        0.0
    } else {
        let v = DMatrix::from_column_slice(x.dim(), 1, x.coords());
        (t.basis().adjoint() * v).norm()
    };
    (score, score > TRANSVERSALITY_TOL)
}

/// Clean-intersection check `T1 ∩ T2 = T3` by dimension and subspace gap
/// (largest principal angle, radians). `T3` must be contained in both.
pub fn clean_intersection_check(
    t1: &LinearVariety,
    t2: &LinearVariety,
    t3: &LinearVariety,
) -> Result<(bool, f64)> {
    for (label, t) in [("T1", t1), ("T2", t2)] {
        let mut worst = 0.0f64;
        for j in 0..t3.dim() {
            let col: Vec<C64> = t3.basis().column(j).iter().copied().collect();
            worst = worst.max(t.off_space_residual(&col));
        }
        if worst > ON_VARIETY_TOL {
            return Err(Error::precondition(format!(
                "T3 is not contained in {label} (residual {worst:.3e})"
            )));
        }
    }
    let meet = subspace_intersection(t1, t2)?;
    if meet.dim() != t3.dim() {
        return Ok((false, std::f64::consts::FRAC_PI_2));
    }
    if t3.dim() == 0 {
        return Ok((true, 0.0));
    }
    let cos = linalg::principal_angle_cosines(meet.basis(), t3.basis());
    let gap = cos.last().copied().unwrap_or(0.0).acos();
    Ok((gap < 1e-8, gap))
}

/// Tangent-plane localization of a variety at a boundary point:
/// orthonormal basis of `(T ∩ x_perp) + C x`, where `T` is the tangent
/// space at `x`.
pub fn localize(v: &Variety, x: &BoundaryPoint) -> Result<LinearVariety> {
    let residual = v.on_variety_residual(x.point());
    check_on_variety(residual)?;
    let tangent = v.tangent_at(x.point())?;
    let n = x.dim();
    // v in T with <v, x> = 0: nullspace of the row x^H B.
    let mut cols: Vec<Vec<C64>> = Vec::new();
    if tangent.dim() > 0 {
        let xv = DMatrix::from_column_slice(n, 1, x.coords());
        let row = xv.adjoint() * tangent.basis(); // 1 x d
        let ns = linalg::nullspace(&row, REL_CUTOFF);
        let part = tangent.basis() * ns;
        for j in 0..part.ncols() {
            cols.push(part.column(j).iter().copied().collect());
        }
    }
    cols.push(x.coords().to_vec());
    LinearVariety::span_of(n, &cols)
}

/// The tangential-pair witness of the affine counterexample in `C^2`:
/// `M1 = {z_2 = 0}`, `M2 = {(t, slope (t-1))}`, meeting only at
/// `x = (1, 0)` on the sphere. Returns the witness `w_r = (r, slope (r-1))`
/// on `M2`, its image under `phi_{r x}` (first coordinate exactly zero,
/// second `O((1-r^2)^(1/2))`), and `rho(r x, w_r)`.
pub fn tangential_pair_witness(slope: C64, r: f64) -> Result<(Point, Point, f64)> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::bad_parameter(format!(
            "witness parameter r must lie in (0,1), got {r}"
        )));
    }
    let w_r = Point::new(vec![C64::new(r, 0.0), slope * C64::new(r - 1.0, 0.0)]);
    let base = Point::from_re(&[r, 0.0]);
    let map = MoebiusMap::new(base.clone())?;
    let image = map.apply(&w_r)?;
    let rho = image.norm();
    Ok((w_r, image, rho))
}
