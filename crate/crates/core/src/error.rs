use alloc::string::String;

use crate::var::Var;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
/// Leaf and slope indices are stored 0-based and printed 1-based.
pub enum Error {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("exponent at {position} is not a rational literal")]
    NonRationalExponent { position: usize },

    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("polynomial has degree 0 in {0}")]
    DegreeZero(Var),
    #[error("discriminant division left a nonzero remainder")]
    DiscriminantRemainder,

    #[error("logarithm or fractional power evaluated on its branch cut")]
    BranchCut,
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable {0} is not bound")]
    UnboundVariable(Var),
    #[error("non-finite value")]
    NonFinite,

    #[error("leading coefficient a_0 is zero")]
    ZeroLeadingCoefficient,
    #[error("web needs at least one leaf")]
    EmptyWeb,
    #[error("slopes {} and {} coincide", .0 + 1, .1 + 1)]
    NotInGeneralPosition(usize, usize),
    #[error("foliation {} has a vertical leaf (d/d{var} F = 0)", .index + 1)]
    VerticalLeaf { index: usize, var: Var },
    #[error("declared degree {declared} does not match {found}")]
    DegreeMismatch { declared: usize, found: usize },
    #[error("expression uses variable {0} outside the web coordinates")]
    ForeignVariable(Var),
    #[error("slope {} has a pole at the requested point", .0 + 1)]
    SlopePole(usize),
    #[error("leaf index {} out of range", .0 + 1)]
    LeafIndex(usize),

    #[error("expression is not a rational function")]
    NotRational,
    #[error("operation needs degree at least {need}, web has degree {got}")]
    DegreeTooLow { need: usize, got: usize },
    #[error("web is in coefficient form and has no closed-form slopes")]
    NoClosedFormSlopes,
    #[error("Vandermonde block of the first three slopes is singular")]
    SingularVandermonde,
    #[error("vector fields use different coordinates")]
    CoordinateMismatch,

    #[error("ansatz needs {needed} unknowns, budget is {limit}")]
    ResourceLimit { needed: usize, limit: usize },
    #[error("field is not a symmetry (leaf {})", .leaf + 1)]
    NotASymmetry { leaf: usize },
    #[error("basis is linearly dependent")]
    LinearlyDependent,
    #[error("every sample point was excluded")]
    EmptyPlan,
    #[error("empty input")]
    EmptyInput,
    #[error("{0}")]
    Invalid(String),
}
