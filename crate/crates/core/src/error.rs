use thiserror::Error;

pub type Result<T, E = NcapError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NcapError {
    #[error("row {row}, column `{column}`: token `{token}` has no encoding entry")]
    Encoding {
        row: usize,
        column: String,
        token: String,
    },

    #[error("{0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("missing value for platform `{platform}`, feature `{feature}`")]
    MissingValue { platform: String, feature: String },

    #[error("feature `{feature}` has no present values")]
    DegenerateColumn { feature: String },

    #[error("{0}")]
    Domain(String),

    #[error("column is too short: need at least {needed} value(s), got {got}")]
    EmptyColumn { needed: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("weighted product needs positive values; platform `{platform}`, feature `{feature}` is {value}")]
    ProductDomain {
        platform: String,
        feature: String,
        value: f64,
    },

    #[error("platform `{platform}` has no perception layer")]
    InadmissibleProfile { platform: String },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("method mismatch: `{left}` vs `{right}`")]
    MethodMismatch { left: String, right: String },

    #[error("agreement needs at least 2 methods, got {0}")]
    InsufficientMethods(usize),
}

impl NcapError {
    /// Stable class name, used by the CLI for machine-parsable failures.
    pub fn class(&self) -> &'static str {
        match self {
            Self::Encoding { .. } => "EncodingError",
            Self::Format(_) => "FormatError",
            Self::Config(_) => "ConfigError",
            Self::MissingValue { .. } => "MissingValueError",
            Self::DegenerateColumn { .. } => "DegenerateColumnError",
            Self::Domain(_) => "DomainError",
            Self::EmptyColumn { .. } => "EmptyColumnError",
            Self::Dimension(_) => "DimensionError",
            Self::ProductDomain { .. } => "ProductDomainError",
            Self::InadmissibleProfile { .. } => "InadmissibleProfileError",
            Self::EmptyInput(_) => "EmptyInputError",
            Self::MethodMismatch { .. } => "MethodMismatchError",
            Self::InsufficientMethods(_) => "InsufficientMethodsError",
        }
    }
}
