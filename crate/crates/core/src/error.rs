use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("domain error: {op} at {value}")]
    Domain { op: &'static str, value: f64 },

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("exponent at byte {offset} is not an integer literal")]
    NonIntegerExponent { offset: usize },

    #[error("function `{name}` takes {expected} argument(s), got {got}")]
    Arity { name: String, expected: usize, got: usize },

    #[error("operation `{op}` is not supported over {ring}")]
    Unsupported { ring: &'static str, op: String },

    #[error("empty sampling domain for coordinate `{coord}`")]
    EmptyDomain { coord: String },

    #[error("metric is not positive definite at {point:?}")]
    NotPositiveDefinite { point: alloc::vec::Vec<f64> },

    #[error("metric is singular")]
    SingularMetric,

    #[error("Gram-Schmidt breakdown: metric is degenerate")]
    GramSchmidt,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid structure constants: {0}")]
    StructureConstants(String),

    #[error("({c}, {s}) is not a Pythagorean pair: c^2 + s^2 != 1")]
    NotPythagorean { c: String, s: String },

    #[error("warping function is not positive ({value}) at {point:?}")]
    NonPositiveWarping { value: f64, point: alloc::vec::Vec<f64> },

    #[error("normal field has ambient length {norm} (expected 1)")]
    NonUnitNormal { norm: f64 },

    #[error("normal field is not orthogonal to the immersion (residual {residual})")]
    NotNormal { residual: f64 },

    #[error("immersion is rank deficient at {point:?}")]
    RankDeficient { point: alloc::vec::Vec<f64> },

    #[error("chart metric differs from the induced metric by {residual}")]
    MetricMismatch { residual: f64 },

    #[error("ambient structure is not Kaehler (residual {residual})")]
    NotKaehler { residual: f64 },

    #[error("horizontal lift is singular")]
    SingularLift,

    #[error("frame carriers are not supported here; use the group's global chart")]
    FrameCarrier,

    #[error("structure fails validation: {0}")]
    Invalid(String),

    #[error("unknown target `{0}`")]
    UnknownTarget(String),
}
