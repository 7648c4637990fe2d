use crate::bits::BitString;
use crate::exact::ExactNumber;
use thiserror::Error;

/// Errors shared across the workbench.
///
/// Several variants are *legal outcomes* of a procedure run on a toy machine
/// rather than defects (e.g. `EmptyS`, `NoWitness` situations); callers decide.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain is not prefix-free: {shorter} is a prefix of {longer}")]
    NotPrefixFree { shorter: BitString, longer: BitString },

    #[error("need {needed} expansion bits, only {have} supplied")]
    InsufficientBits { needed: u64, have: u64 },

    #[error("oracle query {query} of length {len} exceeds declared bound {bound}")]
    QueryTooLong { query: BitString, len: u64, bound: u64 },

    #[error("Kraft overflow at request #{index:?}: length {requested} needs 2^-{requested} but running sum is {kraft_sum}")]
    KraftOverflow {
        index: Option<usize>,
        requested: u64,
        kraft_sum: ExactNumber,
    },

    #[error("machine has no halting program within the horizon")]
    EmptyDomain,

    #[error("S(V; a_{{k-1}}) is empty at stage {stage}")]
    EmptyS { stage: u64 },

    #[error("{program} is not a deepest program: {witness} runs longer within the length bound")]
    NotDeepest { program: BitString, witness: BitString },

    #[error("enumeration lists {program}, which is not in the machine's domain")]
    BadEnumeration { program: BitString },

    #[error("complexity value missing for prefix length {n}")]
    MissingH { n: u64 },

    #[error("sequence is not strictly increasing at index {index}")]
    NotIncreasing { index: usize },

    #[error("no index in the supplied approximation window is usable")]
    WindowExhausted,

    #[error("expansion window violates the run-length condition (run of {run} at bit {position})")]
    RunViolation { position: u64, run: u64 },

    #[error("interval too wide to certify the comparison; raise the precision")]
    PrecisionUnreachable,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
