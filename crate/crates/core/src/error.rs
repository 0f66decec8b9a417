use thiserror::Error;

/// Failure modes shared by every construction in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("label error: {0}")]
    Label(String),
    #[error("composition error: {0}")]
    Composition(String),
    #[error("universality error: {0}")]
    Universality(String),
    #[error("axis error: {0}")]
    Axis(String),
    #[error("stochasticity error: {0}")]
    Stochastic(String),
    #[error("base error: {0}")]
    Base(String),
    #[error("fibre error: {0}")]
    Fibre(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error("port error: {0}")]
    Port(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("cell error: {0}")]
    Cell(String),
    #[error("size error: {0}")]
    Size(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
