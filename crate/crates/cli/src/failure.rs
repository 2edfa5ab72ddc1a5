use std::fmt;

use caylink::Error;

/// Everything a command or request can fail with.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// The document or an argument could not be read.
    Parse(String),
    /// The input was read but the computation refused it.
    Domain(Error),
    Io(String),
}

impl Failure {
    /// 0 is success; 2 for domain errors, 3 for parse errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 3,
            Failure::Domain(_) => 2,
            Failure::Io(_) => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Failure::Parse(_) => "ParseError",
            Failure::Domain(e) => e.name(),
            Failure::Io(_) => "IoError",
        }
    }

    /// Errors about the shape of the input rather than about the numbers in it.
    pub fn is_input_error(&self) -> bool {
        match self {
            Failure::Parse(_) => true,
            Failure::Domain(e) => matches!(
                e,
                Error::NotBaseNonEdge(_)
                    | Error::NotOneDof
                    | Error::InvalidBase(_)
                    | Error::InvalidLinkage(_)
                    | Error::UnknownVertex(_)
                    | Error::NotOnePath { .. }
            ),
            Failure::Io(_) => false,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse(m) => write!(f, "parse error: {m}"),
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;
