use mumsteer_core::Error;

pub const OK: u8 = 0;
pub const INTERNAL: u8 = 1;
pub const VALIDATION: u8 = 2;
pub const BAD_INPUT: u8 = 3;
pub const IO: u8 = 4;
pub const BAD_BRACKET: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn bad_input(message: impl Into<String>) -> Self {
        Self::new(BAD_INPUT, message)
    }

    /// Construction failures count as validation failures rather than bad
    /// input.
    pub fn from_build(e: Error) -> Self {
        match e {
            Error::Degenerate(_)
            | Error::NotPositive { .. }
            | Error::Validation(_)
            | Error::InvalidParameter(_) => Self::new(VALIDATION, e.to_string()),
            other => other.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_) => IO,
            Error::Csv(c) if c.is_io_error() => IO,
            Error::BadBracket { .. } => BAD_BRACKET,
            Error::NoConvergence { .. } | Error::NumericalIntegrity(_) => INTERNAL,
            _ => BAD_INPUT,
        };
        Self::new(code, e.to_string())
    }
}
