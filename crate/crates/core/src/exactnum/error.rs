use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("no positive real root")]
    NoPositiveRoot,
    #[error("isolating interval does not contain exactly one root of the minimal polynomial")]
    NotARoot,
    #[error("division by zero in the number field")]
    DivisionByZero,
    #[error("operands live in different number fields")]
    MixedAmbientField,
    #[error("eigenvalue is not simple (kernel dimension {kernel_dim}, algebraic multiplicity {multiplicity})")]
    NotSimpleEigenvalue { kernel_dim: usize, multiplicity: usize },
    #[error("eigenvector coordinate {index} is not positive")]
    NonPositiveEigenvector { index: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("root moduli could not be separated from the circle of radius {radius} at the precision cap")]
    Undecided { radius: String },
}
