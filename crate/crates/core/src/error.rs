//! Crate-wide error type.
//!
//! Errors fall into four broad families, which the CLI maps onto exit codes:
//! input/parse problems, precision exhaustion (a computation would need
//! coefficients outside the known window of a truncated series), structural
//! preconditions (non-invertible series, maps that do not normalize the unit,
//! malformed graphs), and verification failures reported by check suites.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input (series, tree, basis, character or graph files).
    #[error("parse error: {0}")]
    Parse(String),

    /// An operation would need coefficients beyond the known precision window.
    #[error("precision exhausted: {0}")]
    Precision(String),

    /// Inversion of a series that is zero or indistinguishable from zero.
    #[error("series not invertible: {0}")]
    NotInvertible(String),

    /// Evaluation at z = 0 of a series with a nonzero principal part.
    #[error("pole at evaluation point")]
    PoleAtEvaluation,

    /// Exponential of a series whose valuation is not certified to be >= 1.
    #[error("exponential requires valuation >= 1: {0}")]
    ExpValuation(String),

    /// A convolution-group operation applied to a map with phi(1) != 1.
    #[error("map does not send the unit to 1: {0}")]
    NotUnitNormalized(String),

    /// A Lie-side operation applied to a map with alpha(1) != 0.
    #[error("map does not vanish on the unit: {0}")]
    NotVanishingOnUnit(String),

    /// A character was evaluated on a generator missing from its table.
    #[error("character has no value for generator {0}")]
    MissingGenerator(String),

    /// Two maps from different contexts were combined.
    #[error("maps belong to different contexts: {0}")]
    ContextMismatch(String),

    /// Iterated reduced coproduct of an element with a unit component.
    #[error("iterated reduced coproduct is undefined on elements with a unit component")]
    UnitComponent,

    /// Graph-side structural failures (disconnected input, bad subgraph, ...).
    #[error("graph error: {0}")]
    Graph(String),

    /// Canonicalization refused an input above the size bound.
    #[error("size bound exceeded: {0}")]
    SizeBound(String),

    /// A map failed the membership test for the negative flow-stable group.
    #[error("not in G^Phi_-: {0}")]
    NotInGroupPhi(String),
}

pub type Result<T> = std::result::Result<T, Error>;
