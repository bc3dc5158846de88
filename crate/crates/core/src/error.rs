use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // lattice
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: i64 },
    #[error("expected a rank-one lattice, got rank {rank}")]
    RankNotOne { rank: usize },

    // polytope
    #[error("not a simple polytope: {0}")]
    NotSimple(String),
    #[error("edge graph is disconnected")]
    Disconnected,
    #[error("vertex orientations are inconsistent at vertex {vertex:?}")]
    NonOrientable { vertex: Vec<usize> },
    #[error("at most 64 facets are supported, got {0}")]
    TooManyFacets(usize),

    // qtoric
    #[error("vertex {vertex:?} is singular: determinant {det}")]
    SingularVertex { vertex: Vec<usize>, det: i64 },
    #[error("column {0} is not primitive")]
    NonPrimitiveColumn(usize),

    // cohomology / oracle
    #[error("evaluation point lies on a weight hyperplane")]
    GenericPointOnHyperplane,
    #[error("localization sum is not an integer: {0}")]
    NonIntegralResult(String),
    #[error("top-degree quotient has dimension {0}, expected 1")]
    QuotientNotRankOne(usize),
    #[error("operation only supported in dimension {supported}, got {got}")]
    DimensionUnsupported { supported: usize, got: usize },

    // gkm
    #[error("axial weights disagree beyond sign on edge {edge:?}")]
    InconsistentWeights { edge: (usize, usize) },
    #[error("GKM graph carries no facet supports")]
    MissingFacetSupport,
    #[error("facet {facet}: {source}")]
    Facet {
        facet: usize,
        #[source]
        source: Box<Error>,
    },

    // families
    #[error("wrong polytope: {0}")]
    WrongPolytope(String),
    #[error("cohomology is not of connected-sum type: {0}")]
    NotConnectedSumCohomology(String),
    #[error("search space of {size} candidates exceeds the cap of {cap}")]
    SearchSpaceTooLarge { size: u128, cap: u128 },

    // document
    #[error("invalid document: {0}")]
    Document(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Overflow => "overflow",
            Error::NotSquare { .. } => "not_square",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotUnimodular { .. } => "not_unimodular",
            Error::RankNotOne { .. } => "rank_not_one",
            Error::NotSimple(_) => "not_simple",
            Error::Disconnected => "disconnected",
            Error::NonOrientable { .. } => "non_orientable",
            Error::TooManyFacets(_) => "too_many_facets",
            Error::SingularVertex { .. } => "singular_vertex",
            Error::NonPrimitiveColumn(_) => "non_primitive_column",
            Error::GenericPointOnHyperplane => "generic_point_on_hyperplane",
            Error::NonIntegralResult(_) => "non_integral_result",
            Error::QuotientNotRankOne(_) => "quotient_not_rank_one",
            Error::DimensionUnsupported { .. } => "dimension_unsupported",
            Error::InconsistentWeights { .. } => "inconsistent_weights",
            Error::MissingFacetSupport => "missing_facet_support",
            Error::Facet { .. } => "facet",
            Error::WrongPolytope(_) => "wrong_polytope",
            Error::NotConnectedSumCohomology(_) => "not_connected_sum_cohomology",
            Error::SearchSpaceTooLarge { .. } => "search_space_too_large",
            Error::Document(_) => "document",
        }
    }

    /// Errors that indicate a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NonIntegralResult(_) | Error::InconsistentWeights { .. } | Error::QuotientNotRankOne(_)
        )
    }
}
