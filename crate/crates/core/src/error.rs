use thiserror::Error;

/// Crate-wide error type.
///
/// Stream evaluation, rule application, file parsing and the reducer all
/// funnel through this enum so that callers (CLI, FFI) can map outcomes to
/// exit codes and C status codes uniformly.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} exceeds the stream ceiling of {ceiling} (set STREAMLAB_MAX_PREFIX to raise it)")]
    CeilingExceeded { index: u64, ceiling: u64 },

    #[error("alphabet mismatch: expected {expected:?}, got {got:?}")]
    AlphabetMismatch { expected: String, got: String },

    #[error("operation requires the binary alphabet 01, got {got:?}")]
    NonBinaryAlphabet { got: String },

    #[error("invalid alphabet {text:?}: {reason}")]
    BadAlphabet { text: String, reason: String },

    #[error("letter {letter:?} is not in alphabet {alphabet:?}")]
    LetterOutsideAlphabet { letter: char, alphabet: String },

    #[error("no nonempty block found after scanning {scanned} consecutive blocks")]
    EmptyBlocks { scanned: u64 },

    #[error("fixture stream has only {len} letters; index {index} is past its end")]
    FixtureExhausted { len: usize, index: u64 },

    #[error("malformed encoded block {block} at stream index {index}: {reason}")]
    MalformedBlock { block: u64, index: u64, reason: String },

    #[error("transducer stalled: {steps} consecutive steps produced no output")]
    Stall { steps: u64 },

    #[error("unknown catalog entry {name:?}")]
    UnknownCatalogEntry { name: String },

    #[error("bad parameters for catalog entry {name:?}: {reason}")]
    BadCatalogParams { name: String, reason: String },

    #[error("window has length {got}, rule of radius {radius} needs {want}")]
    WindowLength { got: usize, radius: u64, want: usize },

    #[error("invalid rule: {0}")]
    BadRule(String),

    #[error("parse error in {what} at line {line}: {reason}")]
    FileFormat { what: &'static str, line: usize, reason: String },

    #[error("expression syntax error at offset {offset}: {reason}")]
    ExprSyntax { offset: usize, reason: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
