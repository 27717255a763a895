use thiserror::Error;

use crate::words::Generator;

/// Errors produced by the library.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("invalid generator {0}: indices violate 1 <= i < j")]
    BadIndices(String),

    #[error("generator {gen} is out of range for {context}")]
    OutOfRange { gen: Generator, context: String },

    #[error("generator {gen} is not in the alphabet of {context}")]
    AlphabetMismatch { gen: Generator, context: String },

    #[error("word is not a pure braid: {0}")]
    NonPure(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("word does not lie in L_{n}: iota-hat image is {image}")]
    NotInLn { n: usize, image: String },

    #[error("images do not define an automorphism of the free group of rank {rank}")]
    NotAutomorphism { rank: usize },

    #[error("normal form exceeds {limit} letters")]
    TooLarge { limit: usize },

    #[error("invalid group spec {0:?}")]
    GroupSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
