//! Library UII carried inside an EPC code.
//!
//! A hybrid tag keeps a valid 198-bit EPC in block 01 while the library data
//! rides along:
//!
//! - serial (140 bits): zero fill, then the Code 40 primary id, then the AFI
//!   byte. A 16-character id takes 96 bits, so the payload is 104 bits.
//! - manager number: publisher or provider organization.
//! - object class: publication type id (UNIMARC/ONIX, via the registry) or
//!   raw bits when the class is not registered.
//! - block 11 (user memory): ISIL length byte, ISIL bytes, set info (2 bytes).
//!
//! The AFI is also mirrored to the system area on profiles that keep it
//! there.

mod convert;
mod lifecycle;

pub use convert::{convert_fixed_to_hybrid, convert_hybrid_to_fixed};
pub use lifecycle::{detect_stage, publisher_tag, transition, LifecycleStage, TransitionParams};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bits;
use crate::code40::{decode_code40, encode_code40, Code40Error};
use crate::config::CodecConfig;
use crate::data_model::{
    validate_record_with, Afi, AfiLocation, EpcFields, EpcSchemeName, Isil, LibraryItemRecord,
    PrimaryItemId, PublicationType, SetInfo, TagProfile, Violation, SET_INFO_BYTES,
};
use crate::epc::{decode_epc_with, encode_epc, EpcError};
use crate::fixed::{join_violations, FixedError};
use crate::tagmem::{BankId, TagImage, TagMemError};

const AFI_BITS: usize = 8;
const GROUP_BITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HybridError {
    #[error("bank {bank} too small: needs {needed} bits, profile has {available}")]
    ProfileTooSmall {
        bank: BankId,
        needed: usize,
        available: usize,
    },
    #[error("serial payload of {needed} bits exceeds the {capacity}-bit serial field")]
    SerialOverflow { needed: usize, capacity: usize },
    #[error(transparent)]
    Epc(#[from] EpcError),
    #[error("bank {bank} bit {bit_offset}: {source}")]
    Code40 {
        bank: BankId,
        bit_offset: usize,
        #[source]
        source: Code40Error,
    },
    #[error("user memory truncated: needs {needed} bytes, has {available}")]
    UserMemoryTruncated { needed: usize, available: usize },
    #[error(transparent)]
    TagMemory(#[from] TagMemError),
    #[error(transparent)]
    Fixed(#[from] FixedError),
    #[error("invalid record: {}", join_violations(.0))]
    InvalidRecord(Vec<Violation>),
    #[error("context conflict: {0}")]
    ContextConflict(String),
    #[error("publication type {0} is not registered")]
    UnregisteredPublication(PublicationType),
    #[error("block 01 holds a {0} code; hybrid tags use EPC198")]
    NotHybridScheme(EpcSchemeName),
    #[error("serial field is not a library payload: {0}")]
    MalformedSerial(String),
    #[error("AFI mirror {mirror} disagrees with the serial AFI {serial}")]
    AfiMirrorMismatch { serial: Afi, mirror: Afi },
    #[error("{field} value {value} does not fit in {width} bits")]
    FieldWidthOverflow {
        field: &'static str,
        value: String,
        width: usize,
    },
    #[error("illegal lifecycle transition {from} -> {to}")]
    IllegalTransition {
        from: LifecycleStage,
        to: LifecycleStage,
    },
    #[error("missing transition parameter `{0}`")]
    MissingParams(&'static str),
}

/// Source of the object-class field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectClassSource {
    Publication(PublicationType),
    Raw(Bits),
}

/// EPC-side data a hybrid tag carries besides the library record.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gs1Context {
    pub manager_number: Bits,
    pub object_class: ObjectClassSource,
}

impl Gs1Context {
    /// Object-class bits at `width`, checking registration and width.
    pub fn object_class_bits(
        &self,
        width: usize,
        config: &CodecConfig,
    ) -> Result<Bits, HybridError> {
        match &self.object_class {
            ObjectClassSource::Publication(p) => {
                if !config.publications.contains(p) {
                    return Err(HybridError::UnregisteredPublication(p.clone()));
                }
                Bits::from_u64(p.numeric_id, width).map_err(|_| HybridError::FieldWidthOverflow {
                    field: "object_class",
                    value: p.numeric_id.to_string(),
                    width,
                })
            }
            ObjectClassSource::Raw(bits) => {
                if bits.len() != width {
                    return Err(EpcError::WidthMismatch {
                        field: "object_class",
                        expected: width,
                        actual: bits.len(),
                    }
                    .into());
                }
                if let Some(p) = bits
                    .to_u64()
                    .and_then(|v| config.publications.reverse_lookup(v).ok())
                {
                    return Err(HybridError::ContextConflict(format!(
                        "raw object class {bits} is the registered publication type {p}"
                    )));
                }
                Ok(bits.clone())
            }
        }
    }

    fn publication(&self) -> Option<&PublicationType> {
        match &self.object_class {
            ObjectClassSource::Publication(p) => Some(p),
            ObjectClassSource::Raw(_) => None,
        }
    }
}

/// Code 40 primary id followed by the AFI byte, checked against the hybrid
/// scheme's serial width.
pub fn build_serial_payload(
    primary_id: &PrimaryItemId,
    afi: Afi,
    config: &CodecConfig,
) -> Result<Bits, HybridError> {
    let capacity = config.hybrid_scheme().serial_bits;
    let code40 = encode_code40(primary_id.as_str(), &config.alphabet).map_err(|source| {
        HybridError::Code40 {
            bank: BankId::Block01Epc,
            bit_offset: 0,
            source,
        }
    })?;
    let mut payload = Bits::from_bytes(&code40);
    payload.extend_from(&Bits::from_bytes(&[afi.0]));
    if payload.len() > capacity {
        return Err(HybridError::SerialOverflow {
            needed: payload.len(),
            capacity,
        });
    }
    Ok(payload)
}

/// Splits a serial field into primary id and AFI. `serial_offset` is the
/// serial's bit position in block 01, used for error context.
pub fn parse_serial_payload(
    serial: &Bits,
    serial_offset: usize,
    config: &CodecConfig,
) -> Result<(PrimaryItemId, Afi), HybridError> {
    if serial.len() < AFI_BITS + GROUP_BITS {
        return Err(HybridError::MalformedSerial(format!(
            "{} bits cannot hold a payload",
            serial.len()
        )));
    }
    let body_len = serial.len() - AFI_BITS;
    let afi = Afi(serial.slice(body_len, AFI_BITS).to_u64().expect("8 bits") as u8);
    let lead = body_len % GROUP_BITS;
    if !serial.slice(0, lead).is_zero() {
        return Err(HybridError::MalformedSerial(format!(
            "the {lead} leading fill bits are not zero"
        )));
    }
    let groups: Vec<u16> = (lead..body_len)
        .step_by(GROUP_BITS)
        .map(|at| serial.slice(at, GROUP_BITS).to_u64().expect("16 bits") as u16)
        .collect();
    let first = groups
        .iter()
        .position(|&g| g != 0)
        .ok_or_else(|| HybridError::MalformedSerial("no Code 40 groups".into()))?;
    let group_offset = |g: usize| serial_offset + lead + (first + g) * GROUP_BITS;
    let text_groups = &groups[first..];
    // zero fill is only allowed in front of the text
    if let Some(g) = text_groups.iter().position(|&g| g == 0) {
        return Err(HybridError::Code40 {
            bank: BankId::Block01Epc,
            bit_offset: group_offset(g),
            source: Code40Error::EmbeddedPad { group: g },
        });
    }
    let bytes: Vec<u8> = text_groups.iter().flat_map(|g| g.to_be_bytes()).collect();
    let text = decode_code40(&bytes, &config.alphabet).map_err(|source| {
        let g = match source {
            Code40Error::GroupValueOutOfRange { group, .. }
            | Code40Error::EmbeddedPad { group } => group,
            _ => 0,
        };
        HybridError::Code40 {
            bank: BankId::Block01Epc,
            bit_offset: group_offset(g),
            source,
        }
    })?;
    Ok((PrimaryItemId::new(text), afi))
}

/// Length-prefixed ISIL followed by the set info.
pub fn user_memory_payload(isil: &Isil, set_info: SetInfo) -> Bits {
    let mut bytes = Vec::with_capacity(1 + isil.as_str().len() + SET_INFO_BYTES);
    bytes.push(isil.as_str().len() as u8);
    bytes.extend_from_slice(isil.as_str().as_bytes());
    bytes.extend_from_slice(&set_info.to_bytes());
    Bits::from_bytes(&bytes)
}

pub fn parse_user_memory(bits: &Bits) -> Result<(Isil, SetInfo), HybridError> {
    let bytes = bits
        .as_bytes()
        .ok_or_else(|| HybridError::UserMemoryTruncated {
            needed: bits.len().div_ceil(8),
            available: bits.len() / 8,
        })?;
    let Some((&len, rest)) = bytes.split_first() else {
        return Err(HybridError::UserMemoryTruncated {
            needed: 1,
            available: 0,
        });
    };
    let needed = 1 + len as usize + SET_INFO_BYTES;
    if bytes.len() < needed {
        return Err(HybridError::UserMemoryTruncated {
            needed,
            available: bytes.len(),
        });
    }
    let isil: String = rest[..len as usize].iter().map(|&b| b as char).collect();
    let set = &rest[len as usize..len as usize + SET_INFO_BYTES];
    Ok((Isil::new(isil), SetInfo::from_bytes([set[0], set[1]])))
}

fn validate(record: &LibraryItemRecord, config: &CodecConfig) -> Result<(), HybridError> {
    let mut violations =
        validate_record_with(record, &config.alphabet, config.hybrid_scheme().class_bits);
    for (position, ch) in record.isil.as_str().chars().enumerate() {
        if !ch.is_ascii() {
            violations.push(Violation::IsilCharacter { ch, position });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(HybridError::InvalidRecord(violations))
    }
}

pub fn encode_hybrid(
    record: &LibraryItemRecord,
    ctx: &Gs1Context,
    profile: &TagProfile,
    config: &CodecConfig,
) -> Result<TagImage, HybridError> {
    validate(record, config)?;
    let scheme = *config.hybrid_scheme();
    if ctx.manager_number.len() != scheme.manager_bits {
        return Err(EpcError::WidthMismatch {
            field: "manager_number",
            expected: scheme.manager_bits,
            actual: ctx.manager_number.len(),
        }
        .into());
    }
    let object_class = ctx.object_class_bits(scheme.class_bits, config)?;
    if record.publication_type.as_ref() != ctx.publication() {
        return Err(HybridError::ContextConflict(format!(
            "record publication type {} does not match the context object class",
            record
                .publication_type
                .as_ref()
                .map_or("(none)".to_string(), |p| p.to_string())
        )));
    }

    if profile.epc_block_bits < scheme.total_bits() {
        return Err(HybridError::ProfileTooSmall {
            bank: BankId::Block01Epc,
            needed: scheme.total_bits(),
            available: profile.epc_block_bits,
        });
    }
    let user = user_memory_payload(&record.isil, record.set_info);
    if profile.user_memory_bits < user.len() {
        return Err(HybridError::ProfileTooSmall {
            bank: BankId::Block11User,
            needed: user.len(),
            available: profile.user_memory_bits,
        });
    }

    let payload = build_serial_payload(&record.primary_id, record.afi, config)?;
    let mut serial = Bits::zeros(scheme.serial_bits - payload.len());
    serial.extend_from(&payload);
    let code = encode_epc(&EpcFields::new(
        scheme,
        ctx.manager_number.clone(),
        object_class,
        serial,
    ))?;

    let mut tag = TagImage::new(profile.clone())
        .write_bank(BankId::Block01Epc, code)?
        .write_bank(BankId::Block11User, user)?;
    if profile.afi_location == AfiLocation::SystemArea {
        tag = tag.write_bank(BankId::System, Bits::from_bytes(&[record.afi.0]))?;
    }
    Ok(tag)
}

pub fn decode_hybrid(
    tag: &TagImage,
    config: &CodecConfig,
) -> Result<(LibraryItemRecord, Gs1Context), HybridError> {
    let code = tag.read_bank(BankId::Block01Epc)?;
    let fields = decode_epc_with(code, &config.schemes)?;
    if fields.scheme.name != EpcSchemeName::Epc198 {
        return Err(HybridError::NotHybridScheme(fields.scheme.name));
    }
    let serial_offset = code.len() - fields.scheme.serial_bits;
    let (primary_id, afi) = parse_serial_payload(&fields.serial, serial_offset, config)?;
    let user = tag.read_bank(BankId::Block11User).map_err(|e| match e {
        TagMemError::BankEmpty(_) => HybridError::UserMemoryTruncated {
            needed: 1,
            available: 0,
        },
        other => other.into(),
    })?;
    let (isil, set_info) = parse_user_memory(user)?;

    if let Some(mirror) = tag.afi_mirror() {
        if mirror != afi {
            return Err(HybridError::AfiMirrorMismatch {
                serial: afi,
                mirror,
            });
        }
    }

    let object_class = match fields
        .object_class
        .to_u64()
        .and_then(|v| config.publications.reverse_lookup(v).ok())
    {
        Some(p) => ObjectClassSource::Publication(p),
        None => ObjectClassSource::Raw(fields.object_class.clone()),
    };
    let ctx = Gs1Context {
        manager_number: fields.manager_number,
        object_class,
    };
    let record = LibraryItemRecord {
        primary_id,
        isil,
        set_info,
        publication_type: ctx.publication().cloned(),
        afi,
    };
    validate(&record, config)?;
    Ok((record, ctx))
}
