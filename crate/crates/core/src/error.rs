use thiserror::Error;

use crate::graph::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("disks {0:?} are not mutually tangent (max |invdist - 1| = {1:.3e})")]
    NotTangent([usize; 3], f64),

    #[error("disk escaped to half-plane/exterior under Moebius map")]
    EscapedDisk,

    #[error("inconsistent configuration: {0}")]
    Inconsistent(String),

    #[error("edge {0} is not present")]
    EdgeAbsent(Edge),

    #[error("edge {0} is not flippable")]
    NotFlippable(Edge),

    #[error("graph is not planar: {0}")]
    NotPlanar(String),

    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("disks {i} and {j} overlap (inversive distance {invdist:.6})")]
    NotAPacking { i: usize, j: usize, invdist: f64 },

    /// The pinned or center-pinned Jacobian became numerically singular.
    #[error("left manifold chart: sigma_min/sigma_max = {0:.3e}")]
    Singular(f64),

    #[error("flow step failed: {0}")]
    StepFailure(String),

    #[error("flow exceeded {0} steps")]
    MaxSteps(usize),

    #[error("f_plus not strictly decreasing at s = {s}: {prev} -> {next}")]
    NonMonotone { s: f64, prev: f64, next: f64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by the caller's input rather than by the solver.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Precondition(_)
                | Error::NotPlanar(_)
                | Error::InvalidTriangulation(_)
                | Error::EdgeAbsent(_)
                | Error::NotFlippable(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}
