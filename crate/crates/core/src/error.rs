use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty dataset")]
    EmptyDataset,

    #[error("empty string is not a valid dataset member")]
    EmptyString,

    #[error("string {inner} is a substring of string {outer}")]
    NotSubstringFree { inner: usize, outer: usize },

    #[error("sentinel {symbol:?} occurs in string {index}")]
    SentinelPresent { symbol: char, index: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("m = {m} is too small for the {variant} variant (need m > {bound})")]
    MTooSmall {
        m: usize,
        variant: &'static str,
        bound: usize,
    },

    #[error("no gap to preserve: greedy length {greedy}, optimum {opt}, lambda {lambda}")]
    NoGap {
        greedy: usize,
        opt: usize,
        lambda: String,
    },

    #[error(
        "m cap {cap} exceeded without preserving the gap \
         (last m = {last_m}: greedy {greedy}, optimum {opt}, lambda {lambda})"
    )]
    MCapExceeded {
        cap: usize,
        last_m: usize,
        greedy: usize,
        opt: usize,
        lambda: String,
    },

    #[error(
        "dataset has {n} strings but the exact solver cap is {cap}; \
         raise the cap or shrink the dataset (brute force handles at most {brute_force_max})"
    )]
    TooManyStrings {
        n: usize,
        cap: usize,
        brute_force_max: usize,
    },

    #[error("undefined ratio: optimum length is zero")]
    UndefinedRatio,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("alphabet exhausted: {needed} symbols needed, {available} available")]
    AlphabetExhausted { needed: usize, available: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
