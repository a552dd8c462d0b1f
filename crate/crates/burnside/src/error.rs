use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponent {0} is even")]
    EvenExponent(i64),
    #[error("exponent {0} is below 593 (use lab mode for small exponents)")]
    ExponentTooSmall(i64),
    #[error("need at least two generators, got {0}")]
    TooFewGenerators(u32),
    #[error("at most 26 generators are supported, got {0}")]
    TooManyGenerators(u32),
    #[error("invalid nesting constant: {0}")]
    InvalidTau(String),

    #[error("word is empty")]
    EmptyWord,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("letter {letter} is outside the {m}-generator alphabet")]
    LetterOutOfRange { letter: char, m: u32 },

    #[error("word is not a fractional power of the given period")]
    NotAFractionalPower,
    #[error("periods are powers of a common root")]
    CommutingPeriods,
    #[error("word is not a prefix of a power of the period")]
    NotAPrefixOfPower,
    #[error("period is not primitive")]
    PeriodNotPrimitive,
    #[error("span lies outside the host word")]
    SpanOutOfRange,
    #[error("need at least 3 repetitions, got {0}")]
    TooFewRepetitions(usize),

    #[error("word is not primitive")]
    NotPrimitive,
    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,

    #[error("occurrences overlap or are ordered wrongly")]
    OverlappingSpansOrderedWrong,
    #[error("occurrence is not maximal")]
    NotMaximal,
    #[error("occurrence has rank {found}, expected {expected}")]
    RankMismatch { expected: u32, found: u32 },
    #[error("turn has no inverse")]
    NoInverse,
    #[error("sequence is not stable: {0}")]
    NotStable(String),
    #[error("parameters out of regime: {0}")]
    BadRegime(String),
    #[error("watchdog tripped: {0}")]
    Watchdog(String),
    #[error("no stabilization below rank bound {0}")]
    StabilizationWatchdog(u32),
    #[error("power form did not stabilize: {0}")]
    NotStabilized(String),
    #[error("no unique local seam occurrence")]
    SeamNotLocal,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EvenExponent(_) => "even-exponent",
            Error::ExponentTooSmall(_) => "exponent-too-small",
            Error::TooFewGenerators(_) => "too-few-generators",
            Error::TooManyGenerators(_) => "too-many-generators",
            Error::InvalidTau(_) => "invalid-tau",
            Error::EmptyWord => "empty-word",
            Error::Parse { .. } => "parse",
            Error::LetterOutOfRange { .. } => "letter-out-of-range",
            Error::NotAFractionalPower => "not-a-fractional-power",
            Error::CommutingPeriods => "commuting-periods",
            Error::NotAPrefixOfPower => "not-a-prefix-of-power",
            Error::PeriodNotPrimitive => "period-not-primitive",
            Error::SpanOutOfRange => "span-out-of-range",
            Error::TooFewRepetitions(_) => "too-few-repetitions",
            Error::NotPrimitive => "not-primitive",
            Error::NotCyclicallyReduced => "not-cyclically-reduced",
            Error::OverlappingSpansOrderedWrong => "overlapping-spans",
            Error::NotMaximal => "not-maximal",
            Error::RankMismatch { .. } => "rank-mismatch",
            Error::NoInverse => "no-inverse",
            Error::NotStable(_) => "not-stable",
            Error::BadRegime(_) => "bad-regime",
            Error::Watchdog(_) => "watchdog",
            Error::StabilizationWatchdog(_) => "stabilization-watchdog",
            Error::NotStabilized(_) => "not-stabilized",
            Error::SeamNotLocal => "seam-not-local",
            Error::InvariantViolation(_) => "invariant-violation",
        }
    }

    /// Failures of a computation's own checks, as opposed to bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::Watchdog(_) | Error::StabilizationWatchdog(_) | Error::NotStabilized(_) | Error::InvariantViolation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
