use crate::graph::{Edge, VertexId};

/// Errors raised by the combinatorial and numeric layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// `G ∪ f` is not tree-decomposable.
    #[error("NotBaseNonEdge: {0} does not make the graph tree-decomposable")]
    NotBaseNonEdge(Edge),
    /// The graph is already rigid (or over-braced), so it has no Cayley parameter.
    #[error("NotOneDof: the graph is not a 1-dof graph")]
    NotOneDof,
    /// The requested base pair is an edge or names a missing vertex.
    #[error("InvalidBase: {0} is not a non-edge of the graph")]
    InvalidBase(Edge),
    /// A realization step found its base pair too far apart or too close.
    #[error("TriangleViolation: triangle inequality fails at step {step}")]
    TriangleViolation { step: usize },
    /// The base pair of a step coincides.
    #[error("DegenerateBase: base pair coincides at step {step}")]
    DegenerateBase { step: usize },
    /// An extreme graph is not tree-decomposable, so it cannot be solved by ruler and compass.
    #[error("NotSupported: extreme graph of step {step} is not tree-decomposable")]
    NotSupported { step: usize },
    /// No four-cycle of clusters links two consecutive base pairs.
    #[error("FourCycleNotFound: no four-cycle links base pairs {from} and {to}")]
    FourCycleNotFound { from: Edge, to: Edge },
    /// The construction has more than one last-level vertex.
    #[error("NotOnePath: the construction has {paths} paths")]
    NotOnePath { paths: usize },
    /// A computation would exceed its configured size budget.
    #[error("Budget: {what} would need {needed} but the cap is {cap}")]
    Budget { what: &'static str, needed: u128, cap: u128 },
    /// More than one orientation entry vanishes at an endpoint.
    #[error("AmbiguousEndpoint: several steps are collinear at l_f = {lf}")]
    AmbiguousEndpoint { lf: f64 },
    /// Two realizations do not share a minimal realization type.
    #[error("TypeMismatch: {0}")]
    TypeMismatch(String),
    /// A quadrilateral with the given sides does not close.
    #[error("Unrealizable: sides {0:?} violate the polygon inequality")]
    Unrealizable([f64; 4]),
    /// A numeric argument lies outside the domain of a formula.
    #[error("DomainError: {0}")]
    DomainError(String),
    /// The linkage data is inconsistent.
    #[error("InvalidLinkage: {0}")]
    InvalidLinkage(String),
    /// A vertex id is not part of the graph.
    #[error("UnknownVertex: {0}")]
    UnknownVertex(VertexId),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotBaseNonEdge(_) => "NotBaseNonEdge",
            Error::NotOneDof => "NotOneDof",
            Error::InvalidBase(_) => "InvalidBase",
            Error::TriangleViolation { .. } => "TriangleViolation",
            Error::DegenerateBase { .. } => "DegenerateBase",
            Error::NotSupported { .. } => "NotSupported",
            Error::FourCycleNotFound { .. } => "FourCycleNotFound",
            Error::NotOnePath { .. } => "NotOnePath",
            Error::Budget { .. } => "Budget",
            Error::AmbiguousEndpoint { .. } => "AmbiguousEndpoint",
            Error::TypeMismatch(_) => "TypeMismatch",
            Error::Unrealizable(_) => "Unrealizable",
            Error::DomainError(_) => "DomainError",
            Error::InvalidLinkage(_) => "InvalidLinkage",
            Error::UnknownVertex(_) => "UnknownVertex",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
