//! Volumes and moments of sublevel sets of homogeneous and generalized
//! polynomials, with solvers and optimality certificates for the sparse,
//! weighted and Gram-trace representation problems.

pub mod certificates;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod solvers;
pub mod special;
pub mod volume;

pub use certificates::{certify_p1, certify_p2, certify_p3, refute_ld_for_p3, Certificate, Refutation};
pub use error::{Error, Result};
pub use linalg::{Eigen, SymMatrix};
pub use poly::{
    expand_gram, norms, Convention, Degree, Document, ExponentVector, GeneralizedPolynomial,
    GramForm, NormReport,
};
pub use volume::{
    closed_form_ball_moment, closed_form_ball_volume, finite_volume_test, Backend, EngineConfig,
    Estimate, FeasibilityVerdict, MomentMatrix, MomentTable, VolumeEstimate,
};
pub use solvers::{
    scale_gram_to_target_volume, scale_to_target_volume, solve_p1, solve_p2, solve_p3, Problem,
    Solution, SolveConfig, SolveResult,
};
