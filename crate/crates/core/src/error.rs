use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("edge {edge} out of range (graph has {count} edges)")]
    EdgeOutOfRange { edge: usize, count: usize },

    #[error("vertex subset must be non-empty and proper")]
    ImproperSubset,

    #[error("missing weight for edge {0}")]
    MissingWeight(String),

    #[error("symbol {0:?} is not in the alphabet")]
    ForeignSymbol(char),

    #[error("gram {gram:?} has length {found}, expected {expected}")]
    GramLength {
        gram: String,
        found: usize,
        expected: usize,
    },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("ranking domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("ranks are not a bijection onto 0..{0}")]
    NotBijective(usize),

    #[error("weights of {0} and {1} are tied")]
    Tie(String, String),

    #[error("weight of {0} is not a positive integer")]
    NotPositive(String),

    #[error("weights are not balanced at vertex {0}")]
    Unbalanced(String),

    #[error("Dyck configuration at {{{vertices}}} (cut word {word})")]
    DyckConfiguration { vertices: String, word: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("malformed input: {0}")]
    Format(String),

    /// A proven invariant failed to hold. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::EdgeOutOfRange { .. } => "edge_out_of_range",
            Error::ImproperSubset => "improper_subset",
            Error::MissingWeight(_) => "missing_weight",
            Error::ForeignSymbol(_) => "foreign_symbol",
            Error::GramLength { .. } => "gram_length",
            Error::InvalidFrame(_) => "invalid_frame",
            Error::DomainMismatch(_) => "domain_mismatch",
            Error::NotBijective(_) => "not_bijective",
            Error::Tie(..) => "tie",
            Error::NotPositive(_) => "not_positive",
            Error::Unbalanced(_) => "unbalanced",
            Error::DyckConfiguration { .. } => "dyck_configuration",
            Error::Precondition(_) => "precondition",
            Error::ResourceGuard(_) => "resource_guard",
            Error::Format(_) => "format",
            Error::Invariant(_) => "internal",
        }
    }
}
