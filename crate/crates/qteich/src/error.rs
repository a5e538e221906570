//! Crate-wide error type.
//!
//! Errors are split by origin so the CLI can map them onto exit codes:
//! input/parse problems exit with 2, domain failures (singular weights,
//! mismatched representations, gate failures in numerical solves) exit with 1.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed combinatorial data: bad face tables, non-contiguous edge
    /// labels, an edge used more than twice, and similar structural defects.
    #[error("invalid triangulation: {0}")]
    Surface(String),

    /// An operation was asked of an edge that does not support it, e.g.
    /// flipping a boundary edge or the folded edge of a once-punctured monogon.
    #[error("edge {edge} is not flippable: {reason}")]
    NotFlippable { edge: usize, reason: String },

    /// Invalid root-of-unity parameters (N < 2, even c, or gcd(c, N) > 1).
    #[error("invalid quantum parameters: {0}")]
    Params(String),

    /// Weight-system level failures: wrong vector length, zero weight, or a
    /// flip at an edge whose weight sits on the singular locus x = -1.
    #[error("invalid weight system: {0}")]
    Weights(String),

    /// A flip was requested at edge {edge} whose weight is too close to the
    /// singular value -1 for the rational coordinate change to be evaluated.
    #[error("weight x[{edge}] = {value} is within {tol:e} of the singular value -1; the coordinate change is undefined there")]
    SingularWeight { edge: usize, value: String, tol: f64 },

    /// Representation-level failures: load/weight inconsistency, dimension cap
    /// exceeded, non-scalar matrix where a scalar was required.
    #[error("invalid representation: {0}")]
    Rep(String),

    /// The two representations handed to an intertwiner solve are not
    /// isomorphic (different classification data or incompatible loads).
    #[error("representations are not isomorphic: {0}")]
    NotIsomorphic(String),

    /// The numerical null space of an intertwining system did not pass the
    /// rank-one gates (smallest singular value must be < low_gate * sigma_max
    /// and the second smallest > high_gate * sigma_max).
    #[error("intertwining system failed the rank-one null-space gate: sigma_min = {sigma_min:e}, sigma_next = {sigma_next:e}, sigma_max = {sigma_max:e}{note}")]
    NullSpaceGate {
        sigma_min: f64,
        sigma_next: f64,
        sigma_max: f64,
        note: String,
    },

    /// A phase that must be an N-th root of unity failed to snap to one.
    #[error("phase {value} is not an N-th root of unity to tolerance {tol:e} ({context})")]
    PhaseSnap {
        value: String,
        tol: f64,
        context: String,
    },

    /// The per-face phase equations of a same-triangulation solve are
    /// insoluble: the face loads of the two representations cannot be
    /// reconciled edge by edge.
    #[error("inconsistent face loads: {0}")]
    InconsistentLoads(String),

    /// A mapping-class check was requested for data that is not a fixed point
    /// of the induced weight action.
    #[error("weights are not fixed by the path + relabeling: {0}")]
    NotFixedPoint(String),

    /// Degenerate development: coincident ideal vertices or a vanishing
    /// projective coordinate pair.
    #[error("degenerate development: {0}")]
    Degenerate(String),

    /// A matrix that must be inverted is numerically singular.
    #[error("singular matrix in {context}: |det| = {det:e}")]
    SingularMatrix { context: String, det: f64 },

    /// The peripheral element is too close to +/- identity for an eigenline
    /// to be selected.
    #[error("ambiguous eigenline: {0}")]
    AmbiguousEigenline(String),

    /// Requested operator dimension exceeds the configured cap.
    #[error("operator dimension {dim} exceeds the cap {cap}; raise --max-dim to allow this")]
    DimCap { dim: usize, cap: usize },

    /// I/O failure reading or writing an artifact file.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON input.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// Malformed inline argument (paths, relabelings, complex literals).
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// CLI exit code for this error: 2 for malformed input, 1 for domain
    /// errors discovered while computing.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Json(_) | Error::Parse(_) => 2,
            _ => 1,
        }
    }
}
