use thiserror::Error;

/// Errors from the polynomial layer.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("point does not assign variable `{0}`")]
    MissingVariable(String),
    #[error("cannot parse polynomial `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// Errors from charts, blowups and principalization.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ChartError {
    #[error("unknown variable `{0}` in chart")]
    UnknownVariable(String),
    #[error("chart `{child}` is not a descendant of `{parent}`")]
    NotDescendant { parent: String, child: String },
    #[error("ideal generator `{0}` does not pull back to a monomial")]
    NonMonomialIdeal(String),
    #[error("point assigns variables outside the chart: {0}")]
    PointOutsideChart(String),
    #[error("principalization exceeded {0} blowup steps")]
    PrincipalizationOverflow(usize),
    #[error("empty center")]
    EmptyCenter,
}

/// Errors from the two-term-complex layer.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("sampled ranks disagree on the component: {0:?}")]
    RankDisagreement(Vec<usize>),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Errors from dual-graph validation; one named variant per invariant.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("reference to unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not a tree (compact type requires first Betti number 0)")]
    NotATree,
    #[error("vertex genera sum to {found}, expected g = {expected}")]
    GenusMismatch { expected: u32, found: u32 },
    #[error("vertex degrees sum to {found}, expected d = {expected}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("vertex `{vertex}` hosts {found} divisor points, expected d_v*k = {expected}")]
    DivisorCountMismatch {
        vertex: String,
        expected: u32,
        found: u32,
    },
    #[error("vertex `{vertex}` hosts {found} markers, expected g_v = {expected}")]
    MarkerCountMismatch {
        vertex: String,
        expected: u32,
        found: u32,
    },
    #[error("divisor point `{divisor}` sits on contracted (degree-0) vertex `{vertex}`")]
    DivisorOnContracted { divisor: String, vertex: String },
    #[error("total divisor count {found} differs from m = d*k = {expected}")]
    DivisorTotalMismatch { expected: u32, found: u32 },
    #[error("marker ids must be 1..=g, got `{0}`")]
    BadMarkerId(String),
    #[error("edge `{0}` has identical endpoints (loops are not compact type)")]
    LoopEdge(String),
}

/// Errors from structural-matrix construction and the pipelines.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("coefficient at ({row},{col}) is not a local unit: `{entry}`")]
    NonUnitCoefficient {
        row: usize,
        col: usize,
        entry: String,
    },
    #[error("operation requires genus 1, graph has genus {0}")]
    GenusNotOne(u32),
    #[error("determinantal ideal I_{level} has a generator outside the decidable monomial class: `{generator}`")]
    NonMonomialLadder { level: usize, generator: String },
    #[error("diagonalization failed on chart `{chart}` at {point}: {detail}")]
    DiagonalizationFailed {
        chart: String,
        point: String,
        detail: String,
    },
    #[error("diagonalizability undecided on chart `{chart}` at {point}: {reason}")]
    Undecided {
        chart: String,
        point: String,
        reason: String,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Errors from the component decomposition and verification layer.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("system is not diagonalized: {0}")]
    NotDiagonalized(String),
    #[error("no main component: diagonal entry z_{0} is identically zero")]
    NoMainComponent(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
