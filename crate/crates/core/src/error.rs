use alloc::string::String;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Shapes disagree, or an input is too small for the requested operation.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A scalar argument lies outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Samples cannot support a distribution fit (too few, zero variance, single-signed).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Sharpness-based patch selection left nothing to fit.
    #[error(
        "no patch survived sharpness selection (fraction {fraction}, peak sharpness {peak}); \
         try a lower sharpness fraction"
    )]
    Selection { fraction: f64, peak: f64 },

    /// Not enough feature vectors to estimate a covariance.
    #[error("insufficient data: need at least {needed} feature vectors, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// Two models (or a model and a feature configuration) were built under different settings.
    #[error("incompatible model: field `{field}` differs ({left} vs {right})")]
    IncompatibleModel {
        field: &'static str,
        left: String,
        right: String,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
