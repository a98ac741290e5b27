use std::fmt;

use quadembed::embedding::EmbeddingError;
use quadembed::groups::{PresentationError, TableError};
use quadembed::quadratic::QuadraticError;
use quadembed::surface::MapError;
use quadembed::words::WordParseError;

pub const EXIT_UNSOLVABLE: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_INPUT: u8 = 65;
pub const EXIT_VERIFICATION: u8 = 70;

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_VERIFICATION,
            message: message.into(),
        }
    }

    pub fn inconclusive(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INCONCLUSIVE,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<WordParseError> for Failure {
    fn from(e: WordParseError) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<PresentationError> for Failure {
    fn from(e: PresentationError) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<TableError> for Failure {
    fn from(e: TableError) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<MapError> for Failure {
    fn from(e: MapError) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<QuadraticError> for Failure {
    fn from(e: QuadraticError) -> Failure {
        match e {
            QuadraticError::Undecidable(_) => Failure::inconclusive(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<EmbeddingError> for Failure {
    fn from(e: EmbeddingError) -> Failure {
        use EmbeddingError::*;
        match e {
            Quadratic(q) => q.into(),
            BadN(_)
            | VWord { .. }
            | VariableOverflow { .. }
            | BaseRelators(_)
            | EquationIndex(_)
            | Overflow { .. }
            | Uncovered(_)
            | Retraction(_)
            | TupleMismatch { .. }
            | MissingRelator(_)
            | Presentation(_)
            | Table(_) => Failure::input(e.to_string()),
            SmallCancellation { .. }
            | TrivialRelator(_)
            | CodingRelator(_)
            | IndexBeyondBound { .. }
            | BoundViolated { .. }
            | TransportFailed(_)
            | RetractionFailed(_)
            | MissingSolution(_) => Failure::verification(e.to_string()),
        }
    }
}
