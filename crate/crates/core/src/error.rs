use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("moduli are not pairwise coprime")]
    NonCoprimeModuli,
    #[error("invalid input: {0}")]
    Input(String),
    #[error("defining polynomial has the rational root {0}")]
    RationalRoot(String),
    #[error("defining polynomial is not squarefree")]
    NotSquarefree,
    #[error("basis is not closed under multiplication")]
    NotClosed,
    #[error("first basis element must be 1")]
    FirstBasisNotOne,
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("{0} divides the index [o_K : Z[theta]]; its decomposition must be supplied")]
    IndexDivisor(BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("ideal is not coprime to the modulus")]
    NotCoprime,
    #[error("principality search inconclusive: {0}")]
    Inconclusive(String),
    #[error("field is not imaginary quadratic")]
    NotImaginaryQuadratic,
    #[error("class group data rejected: {0}")]
    Verification(String),
    #[error("fundamental units are required for a field of unit rank {0}")]
    MissingUnits(usize),
    #[error("residue ring of size {0} exceeds the enumeration bound")]
    ResidueRingTooLarge(BigInt),
    #[error("{0} is ramified, divides the modulus or the order index")]
    RamifiedOrExcluded(BigInt),
    #[error("{0} divides the polynomial discriminant")]
    DividesDiscriminant(BigInt),
    #[error("group has a free part")]
    InfiniteGroup,
    #[error("exact sequence check failed: {0}")]
    Exactness(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("basis is rank deficient")]
    RankDeficient,
}

impl Error {
    /// True for errors caused by malformed or inconsistent user input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input(_)
                | Error::RationalRoot(_)
                | Error::NotSquarefree
                | Error::NotClosed
                | Error::FirstBasisNotOne
                | Error::SingularBasis
                | Error::IndexDivisor(_)
                | Error::Verification(_)
                | Error::MissingUnits(_)
                | Error::RankDeficient
                | Error::Hypothesis(_)
                | Error::RamifiedOrExcluded(_)
                | Error::DividesDiscriminant(_)
                | Error::NotImaginaryQuadratic
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
