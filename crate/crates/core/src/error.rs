use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. [`Error::code`] gives the stable
/// kebab-case identifier used by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    InvalidGraph(String),
    #[error("{0}")]
    InvalidCurveSystem(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("angle {0} is a vertex angle")]
    ThetaOnCriticalValue(String),
    #[error("{0}")]
    TreePropertyViolation(String),
    #[error("cycle breaks at step {0}")]
    CycleNotClosed(usize),
    #[error("no lattice point satisfies the constraints")]
    Infeasible,
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("orientation cochain is not a coboundary (curve {0})")]
    CocycleViolation(String),
    #[error("twist is already zero")]
    NothingToResolve,
    #[error("regions {0} and {1} sit at different potential levels")]
    LevelMismatch(String, String),
    #[error("{0}")]
    PatternMismatch(String),
    #[error("vertices {0} and {1} are not adjacent in angular order")]
    NotAdjacent(String, String),
    #[error("vertices {0} and {1} have different Morse indices")]
    IndexMismatch(String, String),
    #[error("vertices {0} and {1} share an edge")]
    SharedEdge(String, String),
    #[error("handle must run forward: source angle {0} is not below destination angle {1}")]
    NonPositiveHandle(String, String),
    #[error("position {1} is not interior to edge {0}")]
    PositionOnVertex(String, String),
    #[error("handle would create a repeller on edge {0}")]
    RepellerCreated(String),
    #[error("variation is zero")]
    ZeroVariation,
    #[error("no such surgery case: {0}")]
    InvalidCase(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse-error",
            Error::InvalidGraph(_) => "invalid-graph",
            Error::InvalidCurveSystem(_) => "invalid-curve-system",
            Error::UnknownEdge(_) => "unknown-edge",
            Error::UnknownVertex(_) => "unknown-vertex",
            Error::ThetaOnCriticalValue(_) => "theta-on-critical-value",
            Error::TreePropertyViolation(_) => "tree-property-violation",
            Error::CycleNotClosed(_) => "cycle-not-closed",
            Error::Infeasible => "infeasible",
            Error::Overflow => "overflow",
            Error::CocycleViolation(_) => "cocycle-violation",
            Error::NothingToResolve => "nothing-to-resolve",
            Error::LevelMismatch(..) => "level-mismatch",
            Error::PatternMismatch(_) => "pattern-mismatch",
            Error::NotAdjacent(..) => "not-adjacent",
            Error::IndexMismatch(..) => "index-mismatch",
            Error::SharedEdge(..) => "shared-edge",
            Error::NonPositiveHandle(..) => "non-positive-handle",
            Error::PositionOnVertex(..) => "position-on-vertex",
            Error::RepellerCreated(_) => "repeller-created",
            Error::ZeroVariation => "zero-variation",
            Error::InvalidCase(_) => "invalid-case",
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
