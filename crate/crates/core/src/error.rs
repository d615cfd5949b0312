use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus is not irreducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("modulus must be monic of degree {expected}")]
    InvalidModulus { expected: u32 },
    #[error("extension degree {0} is outside 1..=12")]
    DegreeTooLarge(u32),
    #[error("field order {p}^{e} does not fit the element encoding")]
    FieldTooLarge { p: u64, e: u32 },
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("no embedding of F_{from} into F_{into}")]
    NoEmbedding { from: u64, into: u64 },
    #[error("field order {field} is not a power of {base}")]
    NotAPowerOfBase { field: u64, base: u64 },
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("coefficient {0} does not lie in the field")]
    CoefficientOutOfField(String),
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("operation needs a nonzero binary form")]
    ZeroForm,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("the spanning rows are linearly dependent")]
    DependentSpan,
    #[error("the Hessian test requires odd characteristic")]
    EvenCharacteristic,
    #[error("Groebner computation exceeded degree cap {cap} (reached {degree})")]
    DegreeCapExceeded { cap: u32, degree: u32 },
    #[error("Groebner basis is incomplete")]
    IncompleteBasis,
    #[error("the gradient vanishes at this point")]
    SingularPoint,
    #[error("the point does not lie on the surface")]
    PointNotOnSurface,
    #[error("extension degree {k} exceeds the scan cap {cap}")]
    ExtensionTooLarge { k: u32, cap: u32 },
    #[error("the surface polynomial is zero")]
    ZeroSurface,
    #[error("polynomial is a perfect p-th power, so the surface is not reduced")]
    NotReduced,
    #[error("field order {q} exceeds the census budget {max}")]
    BudgetExceeded { q: u64, max: u64 },
    #[error("no smooth surface found")]
    NoSmoothFound,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
