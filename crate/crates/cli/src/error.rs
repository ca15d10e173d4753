use std::fmt;
use std::io;

/// Process exit codes. Stable across releases.
pub mod exit {
    pub const IO: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const INSUFFICIENT_DATA: u8 = 3;
    pub const NO_GROWTH: u8 = 4;
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: exit::PARSE,
            message: message.into(),
        }
    }

    pub fn io(context: impl fmt::Display, err: io::Error) -> Self {
        Self {
            code: exit::IO,
            message: format!("{context}: {err}"),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<spacelife::Error> for CliError {
    fn from(err: spacelife::Error) -> Self {
        use spacelife::Error as E;
        let code = match &err {
            E::Io(_) => exit::IO,
            E::Csv(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => exit::IO,
            E::InsufficientData { .. } | E::EmptySeries | E::EmptyAfterWindow | E::DegenerateAbscissa => {
                exit::INSUFFICIENT_DATA
            }
            E::NoGrowth(_) => exit::NO_GROWTH,
            _ => exit::PARSE,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        let code = if err.is_io() { exit::IO } else { exit::PARSE };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
