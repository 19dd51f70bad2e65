use std::fmt;

use crate::code40::Code40Error;
use crate::config::ConfigError;
use crate::data_model::Violation;
use crate::epc::EpcError;
use crate::fixed::FixedError;
use crate::hybrid::HybridError;
use crate::tagmem::TagMemError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_DECODE: u8 = 3;
pub const EXIT_LIFECYCLE: u8 = 4;
pub const EXIT_IO: u8 = 5;

/// A failure with a stable error code and the process exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub exit: u8,
    pub message: String,
    pub violations: Vec<Violation>,
}

impl CliError {
    pub fn new(code: &'static str, exit: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            exit,
            message: message.into(),
            violations: Vec::new(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new("usage", EXIT_VALIDATION, message)
    }

    pub fn document(message: impl Into<String>) -> Self {
        Self::new("invalid_document", EXIT_VALIDATION, message)
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Self::new("io", EXIT_IO, format!("{}: {e}", path.display()))
    }

    fn invalid_record(v: Vec<Violation>) -> Self {
        Self {
            code: "invalid_record",
            exit: EXIT_VALIDATION,
            message: format!("record has {} violation(s)", v.len()),
            violations: v,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)?;
        for v in &self.violations {
            write!(f, "\n  - {v}")?;
        }
        Ok(())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io(..) => Self::new("io", EXIT_IO, e.to_string()),
            _ => Self::new("invalid_config", EXIT_VALIDATION, e.to_string()),
        }
    }
}

impl From<FixedError> for CliError {
    fn from(e: FixedError) -> Self {
        let code = match &e {
            FixedError::WrongLength(_) => "wrong_length",
            FixedError::CrcMismatch { .. } => "crc_mismatch",
            FixedError::PadViolation { .. } => "pad_violation",
            FixedError::UnsupportedVersion(_) => "unsupported_version",
            FixedError::InvalidRecord(v) => return Self::invalid_record(v.clone()),
        };
        Self::new(code, EXIT_DECODE, e.to_string())
    }
}

impl From<EpcError> for CliError {
    fn from(e: EpcError) -> Self {
        let (code, exit) = match &e {
            EpcError::WidthMismatch { .. } => ("width_mismatch", EXIT_VALIDATION),
            EpcError::HeaderMismatch { .. } => ("header_mismatch", EXIT_VALIDATION),
            EpcError::InvalidLength(_) => ("invalid_length", EXIT_DECODE),
            EpcError::UnknownHeader(_) => ("unknown_header", EXIT_DECODE),
            EpcError::LengthSchemeMismatch { .. } => ("length_scheme_mismatch", EXIT_DECODE),
        };
        Self::new(code, exit, e.to_string())
    }
}

impl From<TagMemError> for CliError {
    fn from(e: TagMemError) -> Self {
        let (code, exit) = match &e {
            TagMemError::BankOverflow { .. } => ("bank_overflow", EXIT_DECODE),
            TagMemError::UnknownBank(_) => ("unknown_bank", EXIT_DECODE),
            TagMemError::BankEmpty(_) => ("bank_empty", EXIT_DECODE),
            TagMemError::UnknownProfile(_) => ("unknown_profile", EXIT_VALIDATION),
            TagMemError::ProfileParse(_) => ("invalid_profile", EXIT_VALIDATION),
            TagMemError::DumpParse { .. } => ("dump_parse", EXIT_DECODE),
        };
        Self::new(code, exit, e.to_string())
    }
}

impl From<HybridError> for CliError {
    fn from(e: HybridError) -> Self {
        let (code, exit) = match e {
            HybridError::Epc(e) => return e.into(),
            HybridError::TagMemory(e) => return e.into(),
            HybridError::Fixed(e) => return e.into(),
            HybridError::InvalidRecord(v) => return Self::invalid_record(v),
            HybridError::ProfileTooSmall { .. } => ("profile_too_small", EXIT_VALIDATION),
            HybridError::SerialOverflow { .. } => ("serial_overflow", EXIT_VALIDATION),
            HybridError::Code40 { ref source, .. } => match source {
                Code40Error::CharacterOutOfRepertoire { .. } | Code40Error::InputTooLong { .. } => {
                    ("code40_repertoire", EXIT_VALIDATION)
                }
                _ => ("code40_decode", EXIT_DECODE),
            },
            HybridError::UserMemoryTruncated { .. } => ("user_memory_truncated", EXIT_DECODE),
            HybridError::ContextConflict(_) => ("context_conflict", EXIT_VALIDATION),
            HybridError::UnregisteredPublication(_) => {
                ("unregistered_publication", EXIT_VALIDATION)
            }
            HybridError::NotHybridScheme(_) => ("not_hybrid_scheme", EXIT_DECODE),
            HybridError::MalformedSerial(_) => ("malformed_serial", EXIT_DECODE),
            HybridError::AfiMirrorMismatch { .. } => ("afi_mirror_mismatch", EXIT_DECODE),
            HybridError::FieldWidthOverflow { .. } => ("field_width_overflow", EXIT_VALIDATION),
            HybridError::IllegalTransition { .. } => ("illegal_transition", EXIT_LIFECYCLE),
            HybridError::MissingParams(_) => ("missing_params", EXIT_LIFECYCLE),
        };
        Self::new(code, exit, e.to_string())
    }
}
