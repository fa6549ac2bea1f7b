//! Exact computation with Hessian varieties of projective hypersurfaces.
//!
//! A hypersurface `V(F) ⊂ P^n` is sent by its Hessian map into the space of
//! symmetric matrices `P(S²V)`; the closure of the image is the Hessian
//! variety of `F`. This crate computes graded pieces of Hessian-variety
//! ideals in the forward direction and recovers hypersurfaces from Hessian
//! varieties in the inverse direction:
//!
//! * cubics, any `n ≥ 2`, through the gradient-tuple space `W`;
//! * binary cubics (`n = 1`), through an explicit fiber construction and a
//!   rational involution;
//! * quartics, `n` even, through the unique Veronese variety containing the
//!   Hessian variety, a graded free resolution, and a group-element solve;
//! * binary quartics (`n = 1`), through a pencil-of-conics pattern;
//! * diagonal forms `Σ λ_i x_i^d`, where the full fiber is enumerated.
//!
//! Everything is exact: arbitrary-precision rationals by default, a prime
//! field `F_p` on request. There is no Gröbner-basis engine; all ideal
//! manipulation is graded linear algebra.

pub mod cli;
pub mod fixtures;
pub mod forward;
pub mod linalg;
pub mod poly;
pub mod recover3;
pub mod recover4;
pub mod symsq;
pub mod verify;
pub mod waring;

use thiserror::Error;

/// Errors surfaced by the recovery and forward pipelines. Dimension and
/// arity mismatches inside the linear algebra are programming errors and
/// panic instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input polynomial is not squarefree (probabilistic check failed: {0})")]
    NotSquarefree(String),
    #[error("no point found on the hypersurface within the retry budget")]
    NoPointFound,
    #[error("matrix is not in the image of the symmetric-square representation: {0}")]
    NotInRhoImage(String),
    #[error("recovery is not unique: the witness space has dimension {0} > 1")]
    NotUnique(usize),
    #[error("empty fiber: the witness space is zero")]
    EmptyFiber,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("degenerate point configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("coefficient vector lies on the locus of cubes of linear forms")]
    OnTwistedCubic,
    #[error("syzygy rank mismatch: {0}")]
    SyzygyRankMismatch(String),
    #[error("resolution shape mismatch: {0}")]
    ResolutionShapeMismatch(String),
    #[error("chart is not generic: {0}")]
    ChartNotGeneric(String),
    #[error("parametrization failed: {0}")]
    ParametrizationFailed(String),
    #[error("group-element solve is ambiguous: solution space has dimension {0}")]
    RhoSolveAmbiguous(usize),
    #[error("inconsistent pencil: {0}")]
    InconsistentPencil(String),
    #[error("kernel is not one-dimensional (dimension {0}); degree formula violated or input degenerate")]
    KernelNotUnique(usize),
    #[error("degree budget exceeded: needed {needed}, budget {budget}")]
    DegreeBudget { needed: u32, budget: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
