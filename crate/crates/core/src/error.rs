use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("level {0} is outside the supported range 0..=4")]
    LevelOutOfRange(u8),

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u8, right: u8 },

    #[error("expected {expected} coordinates at level {level}, got {got}")]
    CoordCount { level: u8, expected: usize, got: usize },

    #[error("operation requires level {expected}, got level {got}")]
    WrongLevel { expected: u8, got: u8 },

    #[error("cannot embed level {from} into lower level {to}")]
    EmbedDown { from: u8, to: u8 },

    #[error("zero has no inverse")]
    ZeroInverse,

    #[error("set contains zero")]
    ZeroInSet,

    #[error("set is empty")]
    EmptySet,

    #[error("x and phi(x) coincide; S_x is undefined")]
    SameQuotient,

    #[error("degenerate R: {size} element(s) in the chosen dyadic bucket; the bound is undefined")]
    DegenerateR { size: usize },

    #[error("mode requires {0}")]
    ModeRequirement(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("declared flag `{0}` does not hold for the loaded set")]
    FlagMismatch(&'static str),

    #[error("invalid config field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("candidate generation failed after {0} attempts")]
    Generation(usize),

    #[error("fresh re-evaluation of the best set disagrees with its recorded score: {0}")]
    Reverification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
