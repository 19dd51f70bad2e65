//! The 32-byte fixed-length library block.
//!
//! | offset | width | content                                   |
//! |--------|-------|-------------------------------------------|
//! | 0      | 1     | version/usage byte (`0x11`)               |
//! | 1      | 2     | set info: parts in item, part number      |
//! | 3      | 16    | primary item id, ASCII, `0x00` fill       |
//! | 19     | 2     | CRC-16 over bytes 0..19 and 21..32, BE    |
//! | 21     | 11    | ISIL, ASCII, `0x00` fill                  |
//!
//! The block has no home for the AFI or the publication type. Decoding
//! fills the AFI with a caller-supplied default and leaves the publication
//! type empty.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::code40::Code40Alphabet;
use crate::crc::{crc16, crc16_update};
use crate::data_model::{
    validate_record_with, Afi, EpcSchemeName, Isil, LibraryItemRecord, PrimaryItemId, SchemeTable,
    SetInfo, Violation, ISIL_MAX_CHARS, PRIMARY_ID_MAX_CHARS, SET_INFO_BYTES,
};

pub const BLOCK_LEN: usize = 32;
pub const PAD: u8 = 0x00;
/// Layout version 1, usage "circulating item".
pub const VERSION_BYTE: u8 = 0x11;
/// AFI given to records decoded from a fixed block unless configured otherwise.
pub const DEFAULT_AFI: Afi = Afi(0xC2);

pub const VERSION: usize = 0;
pub const SET_INFO: Range<usize> = 1..1 + SET_INFO_BYTES;
pub const PRIMARY_ID: Range<usize> = 3..3 + PRIMARY_ID_MAX_CHARS;
pub const CRC: Range<usize> = 19..21;
pub const ISIL: Range<usize> = 21..21 + ISIL_MAX_CHARS;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixedError {
    #[error("fixed block must be {BLOCK_LEN} bytes, got {0}")]
    WrongLength(usize),
    #[error("CRC mismatch: stored {stored:#06x}, computed {computed:#06x}")]
    CrcMismatch { stored: u16, computed: u16 },
    #[error("pad byte inside {field} at offset {offset}")]
    PadViolation { field: &'static str, offset: usize },
    #[error("unsupported version/usage byte {0:#04x}")]
    UnsupportedVersion(u8),
    #[error("invalid record: {}", join_violations(.0))]
    InvalidRecord(Vec<Violation>),
}

pub(crate) fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A byte-exact fixed block. Construction through [`encode_fixed`] or
/// [`FixedBlock::from_bytes`] guarantees the length; the CRC is checked on
/// decode.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedBlock([u8; BLOCK_LEN]);

impl FixedBlock {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FixedError> {
        let raw: [u8; BLOCK_LEN] = bytes
            .try_into()
            .map_err(|_| FixedError::WrongLength(bytes.len()))?;
        Ok(Self(raw))
    }

    pub fn from_hex(hex_digits: &str) -> Result<Self, FixedError> {
        let bytes = hex::decode(hex_digits.trim())
            .map_err(|_| FixedError::WrongLength(hex_digits.trim().len() / 2))?;
        Self::from_bytes(&bytes)
    }

    pub fn as_bytes(&self) -> &[u8; BLOCK_LEN] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn stored_crc(&self) -> u16 {
        u16::from_be_bytes([self.0[CRC.start], self.0[CRC.start + 1]])
    }

    pub fn computed_crc(&self) -> u16 {
        block_crc(&self.0)
    }

    pub fn decode(&self, default_afi: Afi) -> Result<LibraryItemRecord, FixedError> {
        decode_fixed_with(&self.0, default_afi, &Code40Alphabet::default())
    }
}

impl fmt::Display for FixedBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for FixedBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FixedBlock({})", self.to_hex())
    }
}

fn block_crc(raw: &[u8; BLOCK_LEN]) -> u16 {
    crc16_update(crc16(&raw[..CRC.start]), &raw[CRC.end..])
}

pub fn encode_fixed(record: &LibraryItemRecord) -> Result<FixedBlock, FixedError> {
    encode_fixed_with(record, &Code40Alphabet::default())
}

pub fn encode_fixed_with(
    record: &LibraryItemRecord,
    alphabet: &Code40Alphabet,
) -> Result<FixedBlock, FixedError> {
    let class_bits = SchemeTable::default().get(EpcSchemeName::Epc198).class_bits;
    let mut violations = validate_record_with(record, alphabet, class_bits);
    // text fields are stored one ASCII byte per character
    for (position, ch) in record.primary_id.as_str().chars().enumerate() {
        if !ch.is_ascii() {
            violations.push(Violation::PrimaryIdCharacter { ch, position });
        }
    }
    if !violations.is_empty() {
        violations.sort();
        violations.dedup();
        return Err(FixedError::InvalidRecord(violations));
    }

    let mut raw = [PAD; BLOCK_LEN];
    raw[VERSION] = VERSION_BYTE;
    raw[SET_INFO].copy_from_slice(&record.set_info.to_bytes());
    let id = record.primary_id.as_str().as_bytes();
    raw[PRIMARY_ID.start..PRIMARY_ID.start + id.len()].copy_from_slice(id);
    let isil = record.isil.as_str().as_bytes();
    raw[ISIL.start..ISIL.start + isil.len()].copy_from_slice(isil);
    let crc = block_crc(&raw);
    raw[CRC].copy_from_slice(&crc.to_be_bytes());
    Ok(FixedBlock(raw))
}

/// Decodes with [`DEFAULT_AFI`].
pub fn decode_fixed(bytes: &[u8]) -> Result<LibraryItemRecord, FixedError> {
    decode_fixed_with(bytes, DEFAULT_AFI, &Code40Alphabet::default())
}

pub fn decode_fixed_with(
    bytes: &[u8],
    default_afi: Afi,
    alphabet: &Code40Alphabet,
) -> Result<LibraryItemRecord, FixedError> {
    let block = FixedBlock::from_bytes(bytes)?;
    let (stored, computed) = (block.stored_crc(), block.computed_crc());
    if stored != computed {
        return Err(FixedError::CrcMismatch { stored, computed });
    }
    let raw = block.0;
    if raw[VERSION] != VERSION_BYTE {
        return Err(FixedError::UnsupportedVersion(raw[VERSION]));
    }
    let record = LibraryItemRecord {
        primary_id: PrimaryItemId::new(strip_pad(&raw, PRIMARY_ID, "primary_id")?),
        isil: Isil::new(strip_pad(&raw, ISIL, "isil")?),
        set_info: SetInfo::from_bytes([raw[SET_INFO.start], raw[SET_INFO.start + 1]]),
        publication_type: None,
        afi: default_afi,
    };
    let class_bits = SchemeTable::default().get(EpcSchemeName::Epc198).class_bits;
    let violations = validate_record_with(&record, alphabet, class_bits);
    if !violations.is_empty() {
        return Err(FixedError::InvalidRecord(violations));
    }
    Ok(record)
}

fn strip_pad(
    raw: &[u8; BLOCK_LEN],
    range: Range<usize>,
    field: &'static str,
) -> Result<String, FixedError> {
    let bytes = &raw[range.clone()];
    let content_len = bytes.iter().rposition(|&b| b != PAD).map_or(0, |p| p + 1);
    if let Some(p) = bytes[..content_len].iter().position(|&b| b == PAD) {
        return Err(FixedError::PadViolation {
            field,
            offset: range.start + p,
        });
    }
    // one byte per character
    Ok(bytes[..content_len].iter().map(|&b| b as char).collect())
}
