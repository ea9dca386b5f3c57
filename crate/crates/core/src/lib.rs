//! Numerical laboratory for quotient modules of the Bergman space on the
//! complex unit ball.
//!
//! The crate models, at desk scale, the objects behind the closedness
//! question for sums of quotient modules `Q = span{K_lambda : lambda in M}`
//! attached to analytic varieties `M`:
//!
//! * [`ball`] — Moebius automorphisms `phi_z`, the pseudo-hyperbolic and
//!   hyperbolic metrics, hyperbolic balls and their ellipsoid description.
//! * [`bergman`] — reproducing kernels, monomial norms, the unitary `U_z`,
//!   seeded Monte Carlo quadrature and the holomorphic oscillation estimate.
//! * [`variety`] — linear/affine/graph varieties, tangent spaces, sphere
//!   transversality, clean intersections and boundary-point localization.
//! * [`span`] — finite kernel spans with whitened Gram factorizations,
//!   sampled projections and equivalent measures on linear slices.
//! * [`angle`] — angles between subspaces, operator-norm estimates for
//!   `Q2 Q1 Q2 - Q3`, alternating-projection decay and closedness verdicts.
//! * [`carleson`] — the three equivalent Carleson-measure tests applied to
//!   discretized measures.
//!
//! All operations are pure functions on immutable values; every stochastic
//! operation takes an explicit seed and is reproducible bit for bit.

pub mod angle;
pub mod ball;
pub mod bergman;
pub mod carleson;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod rng;
pub mod span;
pub mod variety;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex<f64>;

pub use angle::{
    alternating_projection_decay, closedness_verdict, linear_triple_angle_exact,
    module_angle_sampled, subspace_angle_finite, AngleReport, Closedness,
};
pub use ball::{
    ball_params, ball_volume, grad_sq_moebius_at_zero, hyperbolic_distance,
    moebius_identity_residuals, moebius_jacobian_det, pseudo_distance, HyperbolicBall, MoebiusMap,
    Point,
};
pub use bergman::{
    kernel_inner, mc_integrate_ball, monomial_norm_sq, normalized_kernel_distance,
    oscillation_check, u_z_apply, KernelFunction, McEstimate, SampledFunction,
};
pub use carleson::{
    carleson_embedding_check, carleson_kernel_sup, carleson_ratio_sup, radial_shell_zgrid,
    CarlesonReport, TrendVerdict,
};
pub use error::{Error, Result};
pub use span::{
    build_span, equivalent_measure, project, project_oracle_linear, sample_variety, KernelSpan,
    ProjectedFunction, SamplePlan, SampleScheme, WeightedPointMeasure,
};
pub use variety::{
    clean_intersection_check, localize, principal_angles, projection_matrix, sphere_transversality,
    subspace_intersection, tangent_space, tangential_pair_witness, AffineVariety, BoundaryPoint,
    GraphVariety, LinearVariety, Variety,
};
