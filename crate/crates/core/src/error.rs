use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different fields ({0} vs {1})")]
    MixedFields(Field, Field),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("characteristic polynomial does not split over {0}")]
    EigenvaluesNotSplit(Field),
    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("operation needs a prime field, got {0}")]
    UnsupportedField(Field),
    #[error("matrix does not commute with J")]
    NotInCentralizer,
    #[error("polynomial does not have constant term 1")]
    NotUnipotentUnit,
    #[error("polynomial has a nonzero constant term")]
    ConstantTermPresent,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("matrix is not upper triangular")]
    NotUpperTriangular,
    #[error("family members do not commute")]
    NotCommuting,
    #[error("module is not uniserial: {0}")]
    NotUniserial(String),
    #[error("derived subalgebra does not act nilpotently")]
    NotAdmissible,
    #[error("module is annihilated by the derived subalgebra")]
    AnnihilatedByDerived,
    #[error("images do not satisfy the bracket relations")]
    NotRepresentation,
    #[error("characteristic mismatch: expected {expected}, got {got}")]
    CharacteristicMismatch { expected: u64, got: u64 },
    #[error("class representative is not canonical")]
    NotCanonical,
    #[error("characteristic violation: {0}")]
    CharacteristicViolation(String),
    #[error("algebra has no weight 1 basis vector to play the role of v")]
    MissingWeightOne,
    #[error("normalization of the distinguished vector fails: {0}")]
    FunctionalNormalization(String),
    #[error("Y is not in canonical form D + F[J^p]J")]
    NotCanonicalY,
    #[error("map image leaves the ad D eigenspace: {0}")]
    MapRangeViolation(String),
    #[error("annihilator is not a hyperplane: {0}")]
    HyperplaneViolation(String),
    #[error("isomorphism search exhausted {0} samples without a certificate")]
    InconclusiveSearch(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Variant name, for reports and exit-status mapping.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MixedFields(..) => "MixedFields",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotPrime(..) => "NotPrime",
            Error::DimensionMismatch(..) => "DimensionMismatch",
            Error::SingularMatrix => "SingularMatrix",
            Error::EigenvaluesNotSplit(..) => "EigenvaluesNotSplit",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::UnsupportedField(..) => "UnsupportedField",
            Error::NotInCentralizer => "NotInCentralizer",
            Error::NotUnipotentUnit => "NotUnipotentUnit",
            Error::ConstantTermPresent => "ConstantTermPresent",
            Error::IndexOutOfRange(..) => "IndexOutOfRange",
            Error::NotUpperTriangular => "NotUpperTriangular",
            Error::NotCommuting => "NotCommuting",
            Error::NotUniserial(..) => "NotUniserial",
            Error::NotAdmissible => "NotAdmissible",
            Error::AnnihilatedByDerived => "AnnihilatedByDerived",
            Error::NotRepresentation => "NotRepresentation",
            Error::CharacteristicMismatch { .. } => "CharacteristicMismatch",
            Error::NotCanonical => "NotCanonical",
            Error::CharacteristicViolation(..) => "CharacteristicViolation",
            Error::MissingWeightOne => "MissingWeightOne",
            Error::FunctionalNormalization(..) => "FunctionalNormalization",
            Error::NotCanonicalY => "NotCanonicalY",
            Error::MapRangeViolation(..) => "MapRangeViolation",
            Error::HyperplaneViolation(..) => "HyperplaneViolation",
            Error::InconclusiveSearch(..) => "InconclusiveSearch",
            Error::Parse(..) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
