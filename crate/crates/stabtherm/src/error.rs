use std::fmt;

use stabtherm_core::Error;

/// Failure categories and their process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Category {
    /// Malformed configuration, unknown model, invalid grid: exit 2.
    Input,
    /// A size cap would be exceeded: exit 3.
    Refused,
    /// The computation ran and the checked claim did not hold: exit 4.
    CheckFailed,
}

impl Category {
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Input => 2,
            Category::Refused => 3,
            Category::CheckFailed => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Input => "input error",
            Category::Refused => "resource refusal",
            Category::CheckFailed => "check failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub category: Category,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            category: Category::Input,
            message: message.into(),
        }
    }

    pub fn refused(message: impl Into<String>) -> Self {
        CliError {
            category: Category::Refused,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.category.exit_code()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.category.name(), self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::InvalidInput(_) => CliError::input(message),
            Error::CapExceeded { .. } | Error::TruncationTooLarge { .. } => CliError::refused(message),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(format!("i/o error: {e}"))
    }
}
