use stylodetect::Error;

pub const INPUT: u8 = 2;
pub const SCHEMA: u8 = 3;
pub const CORRUPT: u8 = 4;
pub const TRAINING: u8 = 5;

/// A message and the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: INPUT,
            message: message.into(),
        }
    }

    pub fn training(message: impl Into<String>) -> Self {
        Failure {
            code: TRAINING,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::SchemaMismatch { .. } => SCHEMA,
            Error::Format(_) | Error::Integrity(_) => CORRUPT,
            Error::Fit(_) | Error::Diverged { .. } => TRAINING,
            _ => INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}
