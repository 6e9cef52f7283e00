use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {conductor} is not divisible by {needed}")]
    ConductorTooSmall { conductor: u64, needed: u64 },
    #[error("subgroups live in different ambient groups")]
    AmbientMismatch,
    #[error("morphism is not invertible")]
    NotInvertible,
    #[error("pairing is not perfect")]
    NotPerfect,
    #[error("inconsistent quotient data: {0}")]
    InconsistentQuotient(String),
    #[error("group of order {order} exceeds the enumeration guard {limit}")]
    SizeGuard { order: u64, limit: u64 },
    #[error("invalid Lie ring: {axiom} fails at {witness:?}")]
    InvalidLieRing { axiom: String, witness: Vec<usize> },
    #[error("nilpotence class {class} is not below p = {p}")]
    ClassTooLarge { class: usize, p: u64 },
    #[error("element lies outside the polarization")]
    OutsidePolarization,
    #[error("not a polarization: {0}")]
    NotPolarization(String),
    #[error("polarizations are not neighbors")]
    NotNeighbors,
    #[error("not a Lagrangian: {0}")]
    NotLagrangian(String),
    #[error("degenerate form")]
    Degenerate,
    #[error("composite is not scalar")]
    NotScalar,
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
