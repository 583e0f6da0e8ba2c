use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid carrier: {0}")]
    InvalidCarrier(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("variable map error: {0}")]
    InvalidVariableMap(String),
    #[error("cannot identify a variable with itself (index {0})")]
    SameIndex(usize),
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("function is constant")]
    ConstantFunction,
    #[error("arity gap undefined: function has {0} essential variable(s), at least 2 required")]
    ArityGapUndefined(usize),
    #[error("variable x{} is inessential", .0 + 1)]
    InessentialVariable(usize),
    #[error("expected arity {expected}, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("expected a function on {{0,1}}: {0}")]
    NotBoolean(String),
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("poset is not a lattice: {0}")]
    NotALattice(String),
    #[error("lattice is not distributive")]
    NotDistributive,
    #[error("poset is not a chain")]
    NotAChain,
    #[error("poset is not pseudo-directed")]
    NotPseudoDirected,
    #[error("poset is not bidirected")]
    NotBidirected,
    #[error("function is not order-preserving")]
    NotOrderPreserving,
    #[error("expected a < b in the lattice order")]
    BoundsNotIncreasing,
    #[error("boundary condition violated: {0}")]
    BoundaryCondition(String),
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
