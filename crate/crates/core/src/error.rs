use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed group table: {0}")]
    MalformedGroup(String),
    #[error("group axiom violated: {0}")]
    GroupAxiom(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("objects live on different groups")]
    GroupMismatch,
    #[error("cocycle tables mix exact and float phases")]
    MixedMode,
    #[error("not a 2-cocycle (max residual {residual:.3e})")]
    NotCocycle { residual: f64 },
    #[error("exact phases required; snap the float cocycle first")]
    FloatMode,
    #[error("entry ({g},{h}) is {distance:.3e} away from every {denominator}-th root of unity")]
    SnapRefused {
        g: usize,
        h: usize,
        distance: f64,
        denominator: u64,
    },
    #[error("group order {order} exceeds the enumeration bound {bound}")]
    OrderTooLarge { order: usize, bound: usize },
    #[error("Q({g})Q({h})Q({g}{h})^-1 is not a scalar (defect {defect:.3e})")]
    NotProjective { g: usize, h: usize, defect: f64 },
    #[error("cocycle is not in normalized gauge")]
    Unnormalized,
    #[error("dense dimension {needed} exceeds the cap {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vector is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },
    #[error("transfer operator is degenerate (|lambda_2| = {second:.6})")]
    DegenerateTransfer { second: f64 },
    #[error("state is not invariant under element {g} (|lambda| = {modulus:.12})")]
    NotInvariant { g: usize, modulus: f64 },
    #[error("extracted action is inconsistent (scalar defect {defect:.3e})")]
    ExtractionInconsistent { defect: f64 },
    #[error("window too small for element {g}: factorization residual {residual:.3e}, try w >= {suggest}")]
    WindowTooSmall {
        g: usize,
        residual: f64,
        suggest: usize,
    },
    #[error("vector does not transform in a one-dimensional representation (residual {residual:.3e})")]
    NotCharacterVector { residual: f64 },
    #[error("gate is not equivariant (commutation residual {residual:.3e})")]
    NotEquivariant { residual: f64 },
    #[error("trace distance {t} is outside the regime of the bound")]
    BoundInapplicable { t: f64 },
    #[error("not a density matrix (smallest eigenvalue {min_eigenvalue:.3e}, trace {trace:.12})")]
    NotDensityMatrix { min_eigenvalue: f64, trace: f64 },
    #[error("internal consistency check failed: {0}")]
    SelfCheck(String),
    #[error("regions overlap")]
    OverlappingRegions,
    #[error("purification needs rank {rank} but only {available} is available")]
    PurificationRank { rank: usize, available: usize },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("linear algebra failure: {0}")]
    Linalg(String),
    #[error("power iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code used in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedGroup(_) => "malformed_group",
            Error::GroupAxiom(_) => "group_axiom",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::GroupMismatch => "group_mismatch",
            Error::MixedMode => "mixed_mode",
            Error::NotCocycle { .. } => "not_cocycle",
            Error::FloatMode => "float_mode",
            Error::SnapRefused { .. } => "classification_refused",
            Error::OrderTooLarge { .. } => "order_too_large",
            Error::NotProjective { .. } => "not_projective",
            Error::Unnormalized => "unnormalized",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotNormalized { .. } => "not_normalized",
            Error::DegenerateTransfer { .. } => "degenerate_transfer",
            Error::NotInvariant { .. } => "not_invariant",
            Error::ExtractionInconsistent { .. } => "extraction_inconsistent",
            Error::WindowTooSmall { .. } => "window_too_small",
            Error::NotCharacterVector { .. } => "not_character_vector",
            Error::NotEquivariant { .. } => "not_equivariant",
            Error::BoundInapplicable { .. } => "bound_inapplicable",
            Error::NotDensityMatrix { .. } => "not_density_matrix",
            Error::SelfCheck(_) => "self_check",
            Error::OverlappingRegions => "overlapping_regions",
            Error::PurificationRank { .. } => "purification_rank",
            Error::Overflow => "overflow",
            Error::Linalg(_) => "linalg",
            Error::NoConvergence { .. } => "no_convergence",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}
