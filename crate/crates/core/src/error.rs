use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("multiplier k = {k} out of range 1..{p}")]
    KOutOfRange { p: u64, k: u64 },

    #[error("k-set must not be empty")]
    EmptyKSet,

    #[error("{variant} expects {expected} k values, got {actual}")]
    Arity {
        variant: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("qubit {qubit} out of range for {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("a gate may touch at most {limit} qubits")]
    GateTooWide { limit: usize },

    #[error("qubit {0} used more than once by one gate")]
    OverlappingQubits(usize),

    #[error("gate {gate} expects {expected} target qubit(s), got {actual}")]
    GateArity {
        gate: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite gate parameter in {0}")]
    NonFiniteParameter(&'static str),

    #[error("{n_qubits} qubits exceeds the limit of {limit} for this operation")]
    TooManyQubits { n_qubits: usize, limit: usize },

    #[error("no rewrite rule for gate `{gate}` in the {basis} basis")]
    NoRule { gate: String, basis: &'static str },

    #[error("unknown {kind} `{value}`")]
    UnknownName { kind: &'static str, value: String },

    #[error("d = {d} exceeds the {available} available multipliers")]
    SetTooLarge { d: usize, available: usize },

    #[error("invalid probability {name} = {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("shot count must be positive")]
    NoShots,

    #[error("qasm parse error on line {line}: {message}")]
    Qasm { line: usize, message: String },
}
