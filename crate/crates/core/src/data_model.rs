//! Domain types shared by every codec.
//!
//! Values here are plain data. A [`LibraryItemRecord`] may hold out-of-range
//! content (it is what a caller handed us); [`validate_record`] reports every
//! violated constraint at once, and the encoders refuse records that do not
//! validate.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bits;
use crate::code40::Code40Alphabet;

/// Characters in a primary item identifier (one byte each in the fixed block).
pub const PRIMARY_ID_MAX_CHARS: usize = 16;
/// Characters in an ISIL (one byte each).
pub const ISIL_MAX_CHARS: usize = 11;
/// Serialized width of the set information: parts in item, part number.
pub const SET_INFO_BYTES: usize = 2;
pub const HEADER_BITS: usize = 8;
/// Serial widths allowed for full-size EPC schemes (96 bits and up).
pub const SERIAL_BITS_MIN: usize = 36;
pub const SERIAL_BITS_MAX: usize = 180;
/// Serial width of the 198-bit scheme.
pub const EPC198_SERIAL_BITS: usize = 140;
/// Block 01 capacity of the ICODE ILT profile.
pub const ICODE_ILT_EPC_BLOCK_BITS: usize = 240;

/// Library item identifier, stored lowercase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub struct PrimaryItemId(String);

impl PrimaryItemId {
    /// Case-folds to lowercase; content is checked by [`validate_record`].
    pub fn new(value: impl AsRef<str>) -> Self {
        Self(value.as_ref().to_lowercase())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }
}

impl From<String> for PrimaryItemId {
    fn from(s: String) -> Self {
        Self::new(s)
    }
}

impl From<PrimaryItemId> for String {
    fn from(id: PrimaryItemId) -> Self {
        id.0
    }
}

impl fmt::Display for PrimaryItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// International Standard Identifier for Libraries, e.g. `DK-710100`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Isil(String);

impl Isil {
    pub fn new(value: impl Into<String>) -> Self {
        Self(value.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn is_isil_char(c: char) -> bool {
        c.is_ascii_alphanumeric() || c == '-' || c == ':'
    }
}

impl fmt::Display for Isil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Position of an item within a multi-part set.
///
/// `part_number == 0` marks an item that is not part of a set, in which
/// case `parts_in_item` must be 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetInfo {
    pub parts_in_item: u8,
    pub part_number: u8,
}

impl SetInfo {
    pub const SINGLE: SetInfo = SetInfo {
        parts_in_item: 1,
        part_number: 1,
    };

    pub fn new(parts_in_item: u8, part_number: u8) -> Self {
        Self {
            parts_in_item,
            part_number,
        }
    }

    pub fn to_bytes(self) -> [u8; SET_INFO_BYTES] {
        [self.parts_in_item, self.part_number]
    }

    pub fn from_bytes(bytes: [u8; SET_INFO_BYTES]) -> Self {
        Self::new(bytes[0], bytes[1])
    }
}

impl fmt::Display for SetInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.part_number, self.parts_in_item)
    }
}

/// Application Family Identifier byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Afi(pub u8);

impl fmt::Display for Afi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:02x}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PublicationSystem {
    #[serde(rename = "UNIMARC")]
    Unimarc,
    #[serde(rename = "ONIX")]
    Onix,
}

impl PublicationSystem {
    pub fn as_str(self) -> &'static str {
        match self {
            PublicationSystem::Unimarc => "UNIMARC",
            PublicationSystem::Onix => "ONIX",
        }
    }
}

impl std::str::FromStr for PublicationSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "UNIMARC" => Ok(PublicationSystem::Unimarc),
            "ONIX" => Ok(PublicationSystem::Onix),
            other => Err(format!("unknown publication system `{other}`")),
        }
    }
}

impl fmt::Display for PublicationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A publication-type code and the numeric id it occupies in the EPC
/// object-class field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PublicationType {
    pub system: PublicationSystem,
    pub code: String,
    pub numeric_id: u64,
}

impl fmt::Display for PublicationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}#{}", self.system, self.code, self.numeric_id)
    }
}

/// Logical library-side description of one tagged item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LibraryItemRecord {
    pub primary_id: PrimaryItemId,
    pub isil: Isil,
    pub set_info: SetInfo,
    #[serde(default)]
    pub publication_type: Option<PublicationType>,
    pub afi: Afi,
}

/// One violated record constraint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Violation {
    PrimaryIdEmpty,
    PrimaryIdTooLong { len: usize },
    PrimaryIdCharacter { ch: char, position: usize },
    IsilEmpty,
    IsilTooLong { len: usize },
    IsilCharacter { ch: char, position: usize },
    IsilPrefix,
    PartsInItemZero,
    PartNumberExceedsParts { part_number: u8, parts_in_item: u8 },
    UnsetPartInMultiPartSet { parts_in_item: u8 },
    PublicationIdTooWide { numeric_id: u64, width: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PrimaryIdEmpty => write!(f, "primary_id is empty"),
            Violation::PrimaryIdTooLong { len } => {
                write!(f, "primary_id length > {PRIMARY_ID_MAX_CHARS} (got {len})")
            }
            Violation::PrimaryIdCharacter { ch, position } => write!(
                f,
                "primary_id character {ch:?} at position {position} is outside the Code 40 repertoire"
            ),
            Violation::IsilEmpty => write!(f, "isil is empty"),
            Violation::IsilTooLong { len } => {
                write!(f, "isil length > {ISIL_MAX_CHARS} (got {len})")
            }
            Violation::IsilCharacter { ch, position } => write!(
                f,
                "isil character {ch:?} at position {position} is not a letter, digit, '-' or ':'"
            ),
            Violation::IsilPrefix => write!(
                f,
                "isil prefix before the first '-' must be non-empty and colon-free, with a non-empty suffix"
            ),
            Violation::PartsInItemZero => write!(f, "parts_in_item must be at least 1"),
            Violation::PartNumberExceedsParts {
                part_number,
                parts_in_item,
            } => write!(
                f,
                "part_number > parts_in_item ({part_number} > {parts_in_item})"
            ),
            Violation::UnsetPartInMultiPartSet { parts_in_item } => write!(
                f,
                "part_number 0 requires parts_in_item = 1 (got {parts_in_item})"
            ),
            Violation::PublicationIdTooWide { numeric_id, width } => write!(
                f,
                "publication_type numeric_id {numeric_id} does not fit the {width}-bit object class"
            ),
        }
    }
}

/// Every constraint `record` violates, checked against the default Code 40
/// alphabet and the default scheme table's 198-bit object-class width.
pub fn validate_record(record: &LibraryItemRecord) -> Vec<Violation> {
    let class_bits = SchemeTable::default().get(EpcSchemeName::Epc198).class_bits;
    validate_record_with(record, &Code40Alphabet::default(), class_bits)
}

/// Deterministic: the result is sorted and free of duplicates.
pub fn validate_record_with(
    record: &LibraryItemRecord,
    alphabet: &Code40Alphabet,
    class_bits: usize,
) -> Vec<Violation> {
    let mut out = BTreeSet::new();

    let id = record.primary_id.as_str();
    let id_len = id.chars().count();
    if id_len == 0 {
        out.insert(Violation::PrimaryIdEmpty);
    }
    if id_len > PRIMARY_ID_MAX_CHARS {
        out.insert(Violation::PrimaryIdTooLong { len: id_len });
    }
    for (position, ch) in id.chars().enumerate() {
        if !alphabet.contains_text_char(ch) {
            out.insert(Violation::PrimaryIdCharacter { ch, position });
        }
    }

    let isil = record.isil.as_str();
    let isil_len = isil.chars().count();
    if isil_len == 0 {
        out.insert(Violation::IsilEmpty);
    }
    if isil_len > ISIL_MAX_CHARS {
        out.insert(Violation::IsilTooLong { len: isil_len });
    }
    for (position, ch) in isil.chars().enumerate() {
        if !Isil::is_isil_char(ch) {
            out.insert(Violation::IsilCharacter { ch, position });
        }
    }
    if let Some((prefix, suffix)) = isil.split_once('-') {
        if prefix.is_empty() || prefix.contains(':') || suffix.is_empty() {
            out.insert(Violation::IsilPrefix);
        }
    }

    let SetInfo {
        parts_in_item,
        part_number,
    } = record.set_info;
    if parts_in_item == 0 {
        out.insert(Violation::PartsInItemZero);
    }
    if part_number > parts_in_item {
        out.insert(Violation::PartNumberExceedsParts {
            part_number,
            parts_in_item,
        });
    }
    if part_number == 0 && parts_in_item > 1 {
        out.insert(Violation::UnsetPartInMultiPartSet { parts_in_item });
    }

    if let Some(p) = &record.publication_type {
        if class_bits < 64 && p.numeric_id >> class_bits != 0 {
            out.insert(Violation::PublicationIdTooWide {
                numeric_id: p.numeric_id,
                width: class_bits,
            });
        }
    }

    out.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EpcSchemeName {
    #[serde(rename = "EPC64")]
    Epc64,
    #[serde(rename = "EPC96")]
    Epc96,
    #[serde(rename = "EPC198")]
    Epc198,
}

impl EpcSchemeName {
    pub const ALL: [EpcSchemeName; 3] = [
        EpcSchemeName::Epc64,
        EpcSchemeName::Epc96,
        EpcSchemeName::Epc198,
    ];

    pub fn total_bits(self) -> usize {
        match self {
            EpcSchemeName::Epc64 => 64,
            EpcSchemeName::Epc96 => 96,
            EpcSchemeName::Epc198 => 198,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EpcSchemeName::Epc64 => "EPC64",
            EpcSchemeName::Epc96 => "EPC96",
            EpcSchemeName::Epc198 => "EPC198",
        }
    }
}

impl fmt::Display for EpcSchemeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Field widths and header value of one EPC code length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EpcScheme {
    pub name: EpcSchemeName,
    pub header: u8,
    pub manager_bits: usize,
    pub class_bits: usize,
    pub serial_bits: usize,
}

impl EpcScheme {
    pub const HEADER_BITS: usize = HEADER_BITS;

    pub fn total_bits(&self) -> usize {
        self.name.total_bits()
    }

    pub fn header_bits(&self) -> usize {
        HEADER_BITS
    }

    pub fn field_widths_sum(&self) -> usize {
        HEADER_BITS + self.manager_bits + self.class_bits + self.serial_bits
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeTableError {
    #[error("{scheme}: field widths sum to {sum}, expected {total}")]
    WidthSum {
        scheme: EpcSchemeName,
        sum: usize,
        total: usize,
    },
    #[error("{scheme}: serial width {serial_bits} outside {SERIAL_BITS_MIN}..={SERIAL_BITS_MAX}")]
    SerialEnvelope {
        scheme: EpcSchemeName,
        serial_bits: usize,
    },
    #[error("EPC198 serial width must be {EPC198_SERIAL_BITS}, got {0}")]
    Epc198Serial(usize),
    #[error("header {header:#04x} is shared by {first} and {second}")]
    DuplicateHeader {
        header: u8,
        first: EpcSchemeName,
        second: EpcSchemeName,
    },
    #[error("{0}: field widths above 64 bits are only allowed for the serial")]
    FieldTooWide(EpcSchemeName),
}

/// The three shipped EPC schemes, one per code length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeTable {
    // indexed in EpcSchemeName::ALL order
    schemes: [EpcScheme; 3],
}

impl Default for SchemeTable {
    fn default() -> Self {
        Self::new([
            EpcScheme {
                name: EpcSchemeName::Epc64,
                header: 0x2F,
                manager_bits: 28,
                class_bits: 8,
                serial_bits: 20,
            },
            EpcScheme {
                name: EpcSchemeName::Epc96,
                header: 0x30,
                manager_bits: 28,
                class_bits: 24,
                serial_bits: 36,
            },
            EpcScheme {
                name: EpcSchemeName::Epc198,
                header: 0x36,
                manager_bits: 28,
                class_bits: 22,
                serial_bits: EPC198_SERIAL_BITS,
            },
        ])
        .expect("shipped scheme table is valid")
    }
}

impl SchemeTable {
    /// Validates widths and header uniqueness. The 64-bit scheme is a legacy
    /// width and is exempt from the serial envelope.
    pub fn new(mut schemes: [EpcScheme; 3]) -> Result<Self, SchemeTableError> {
        schemes.sort_by_key(|s| s.name);
        for (s, name) in schemes.iter().zip(EpcSchemeName::ALL) {
            assert_eq!(s.name, name, "scheme table needs one entry per code length");
            let sum = s.field_widths_sum();
            if sum != s.total_bits() {
                return Err(SchemeTableError::WidthSum {
                    scheme: s.name,
                    sum,
                    total: s.total_bits(),
                });
            }
            if s.manager_bits > 64 || s.class_bits > 64 {
                return Err(SchemeTableError::FieldTooWide(s.name));
            }
            if s.total_bits() >= 96 && !(SERIAL_BITS_MIN..=SERIAL_BITS_MAX).contains(&s.serial_bits)
            {
                return Err(SchemeTableError::SerialEnvelope {
                    scheme: s.name,
                    serial_bits: s.serial_bits,
                });
            }
            if s.name == EpcSchemeName::Epc198 && s.serial_bits != EPC198_SERIAL_BITS {
                return Err(SchemeTableError::Epc198Serial(s.serial_bits));
            }
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if schemes[i].header == schemes[j].header {
                    return Err(SchemeTableError::DuplicateHeader {
                        header: schemes[i].header,
                        first: schemes[i].name,
                        second: schemes[j].name,
                    });
                }
            }
        }
        Ok(Self { schemes })
    }

    pub fn get(&self, name: EpcSchemeName) -> &EpcScheme {
        &self.schemes[name as usize]
    }

    pub fn by_header(&self, header: u8) -> Option<&EpcScheme> {
        self.schemes.iter().find(|s| s.header == header)
    }

    pub fn iter(&self) -> impl Iterator<Item = &EpcScheme> {
        self.schemes.iter()
    }
}

/// The shipped schemes.
pub fn scheme_table() -> Vec<EpcScheme> {
    SchemeTable::default().iter().copied().collect()
}

/// The four fields of one EPC code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpcFields {
    pub scheme: EpcScheme,
    pub header: Bits,
    pub manager_number: Bits,
    pub object_class: Bits,
    pub serial: Bits,
}

impl EpcFields {
    /// Header taken from the scheme. Widths are checked by the encoder.
    pub fn new(scheme: EpcScheme, manager_number: Bits, object_class: Bits, serial: Bits) -> Self {
        Self {
            header: Bits::from_u64(scheme.header as u64, HEADER_BITS).expect("8-bit header"),
            scheme,
            manager_number,
            object_class,
            serial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Band {
    /// 13.56 MHz, ISO/IEC 18000-3 Mode 3 (EPC Class 1 HF).
    #[serde(rename = "HF_MODE3")]
    HfMode3,
    /// 860-960 MHz, ISO/IEC 18000-63 Type C (EPC C1G2).
    #[serde(rename = "UHF_TYPEC")]
    UhfTypeC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AfiLocation {
    #[serde(rename = "IN_EPC_BLOCK")]
    InEpcBlock,
    #[serde(rename = "SYSTEM_AREA")]
    SystemArea,
}

impl Band {
    pub fn as_str(self) -> &'static str {
        match self {
            Band::HfMode3 => "HF_MODE3",
            Band::UhfTypeC => "UHF_TYPEC",
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl AfiLocation {
    pub fn as_str(self) -> &'static str {
        match self {
            AfiLocation::InEpcBlock => "IN_EPC_BLOCK",
            AfiLocation::SystemArea => "SYSTEM_AREA",
        }
    }
}

impl fmt::Display for AfiLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Memory geometry of a tag family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TagProfile {
    pub name: String,
    pub band: Band,
    pub epc_block_bits: usize,
    pub user_memory_bits: usize,
    pub afi_location: AfiLocation,
}

impl TagProfile {
    pub fn icode_ilt() -> Self {
        Self {
            name: "ICODE_ILT".into(),
            band: Band::HfMode3,
            epc_block_bits: ICODE_ILT_EPC_BLOCK_BITS,
            user_memory_bits: 1024,
            afi_location: AfiLocation::InEpcBlock,
        }
    }

    pub fn generic_uhf_typec() -> Self {
        Self {
            name: "GENERIC_UHF_TYPEC".into(),
            band: Band::UhfTypeC,
            epc_block_bits: 96,
            user_memory_bits: 512,
            afi_location: AfiLocation::SystemArea,
        }
    }
}

pub mod field {
    //! Field names used in loss reports.
    pub const MANAGER_NUMBER: &str = "manager_number";
    pub const OBJECT_CLASS: &str = "object_class";
    pub const SERIAL: &str = "serial";
    pub const PRIMARY_ID: &str = "primary_id";
    pub const ISIL: &str = "isil";
    pub const SET_INFO: &str = "set_info";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LossDirection {
    #[serde(rename = "TO_EPC_VIEW")]
    ToEpcView,
    #[serde(rename = "TO_LIBRARY_VIEW")]
    ToLibraryView,
}

impl fmt::Display for LossDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LossDirection::ToEpcView => "TO_EPC_VIEW",
            LossDirection::ToLibraryView => "TO_LIBRARY_VIEW",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LostField {
    pub field: String,
    pub previous_value: String,
}

/// Fields destroyed or overwritten by a conversion or lifecycle transition.
/// Empty exactly when nothing was lost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LossReport {
    pub direction: LossDirection,
    pub lost_fields: Vec<LostField>,
}

impl LossReport {
    pub fn new(direction: LossDirection) -> Self {
        Self {
            direction,
            lost_fields: Vec::new(),
        }
    }

    pub fn record(&mut self, field: &str, previous_value: impl fmt::Display) {
        self.lost_fields.push(LostField {
            field: field.to_string(),
            previous_value: previous_value.to_string(),
        });
    }

    pub fn is_lossless(&self) -> bool {
        self.lost_fields.is_empty()
    }

    pub fn field_names(&self) -> BTreeSet<&str> {
        self.lost_fields.iter().map(|f| f.field.as_str()).collect()
    }

    pub fn contains(&self, field: &str) -> bool {
        self.lost_fields.iter().any(|f| f.field == field)
    }

    /// One `field=previous_value` line per lost field.
    pub fn to_text(&self) -> String {
        self.lost_fields
            .iter()
            .map(|f| format!("{}={}\n", f.field, f.previous_value))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("loss report serializes")
    }
}
