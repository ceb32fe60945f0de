use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coefficient at index {index} lies in the gap p < k < p+n (p={p}, n={n})")]
    GapViolation { index: usize, p: u32, n: u32 },

    #[error("coefficient index {index} outside [{lo}, {hi}]")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("shift {shift} exceeds nonzero coefficient index {index}")]
    ShiftUnderflow { index: usize, shift: i64 },

    #[error("denominator vanishes at z = {z}")]
    DenominatorVanishes { z: Complex64 },

    #[error("function vanishes on the contour at z = {z}")]
    ZeroOnContour { z: Complex64 },

    #[error("winding number unstable: accumulated phase {phase} is not a multiple of 2pi")]
    UnstableWinding { phase: f64 },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("no admissible theta samples remain after excluding poles")]
    SingularTheta,

    #[error("expected {expected} zeros in the disk, winding number gives {found}")]
    ExtraZeros { expected: i64, found: i64 },

    #[error("unknown classical function '{0}'")]
    UnknownName(String),

    #[error("line {line}: {msg}")]
    MalformedFile { line: usize, msg: String },

    #[error("line {line}: {msg}")]
    InvariantViolation { line: usize, msg: String },

    #[error("maximum of |w| on the circle is degenerate ({value})")]
    DegenerateMax { value: f64 },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
