use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field of order {0} is too large for this implementation")]
    FieldTooLarge(u64),

    #[error("Legendre requires odd prime field")]
    LegendreNeedsOddPrime,

    #[error("order defined only on prime fields")]
    OrderNeedsPrimeField,

    #[error("identical points")]
    IdenticalPoints,

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("horizontal slope excluded")]
    HorizontalSlope,

    #[error("singular curve")]
    SingularCurve,

    #[error("exhaustive limit: q = {0} exceeds 4")]
    ExhaustiveLimit(u32),

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("vertex {0} is uncolored")]
    UncoloredVertex(usize),

    #[error("phase-1 bound violated at edge {edge}: {blue} blue vertices")]
    PhaseOneBound { edge: usize, blue: usize },

    #[error(
        "phase-2 infeasible at edge {edge}: need {needed} recolors, \
         {available} private vertices available (|R|={private}, |C|={captured}, |D|={disjoint})"
    )]
    PhaseTwoInfeasible {
        edge: usize,
        needed: usize,
        available: usize,
        private: usize,
        captured: usize,
        disjoint: usize,
    },

    #[error("malformed input: {0}")]
    Input(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
