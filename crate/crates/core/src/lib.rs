//! Bit-exact codecs for library RFID tag memory.
//!
//! Three representations of one tagged library item, and the conversions
//! between them:
//!
//! - [`fixed`]: the 32-byte fixed-length library block with its CRC.
//! - [`epc`]: four-field EPC binary codes at 64, 96 and 198 bits.
//! - [`hybrid`]: an EPC198 code whose serial carries the Code 40
//!   compacted library item id plus AFI, with the ISIL and set info in user
//!   memory. Conversions and lifecycle transitions report exactly which
//!   fields they destroy.
//!
//! ```
//! use rfid28560::prelude::*;
//!
//! let config = CodecConfig::default();
//! let record = LibraryItemRecord {
//!     primary_id: PrimaryItemId::new("3001234567890123"),
//!     isil: Isil::new("DK-710100"),
//!     set_info: SetInfo::SINGLE,
//!     publication_type: None,
//!     afi: Afi(0xC2),
//! };
//! let ctx = Gs1Context {
//!     manager_number: "28:00012345".parse().unwrap(),
//!     object_class: ObjectClassSource::Raw("22:002000".parse().unwrap()),
//! };
//! let tag = encode_hybrid(&record, &ctx, &TagProfile::icode_ilt(), &config).unwrap();
//! assert_eq!(tag.read_bank(BankId::Block01Epc).unwrap().len(), 198);
//!
//! let (block, loss) = convert_hybrid_to_fixed(&tag, &config).unwrap();
//! assert_eq!(block.as_bytes().len(), 32);
//! assert!(loss.contains("manager_number"));
//! ```

pub mod bits;
pub mod cli;
pub mod code40;
pub mod config;
pub mod crc;
pub mod data_model;
pub mod epc;
pub mod fixed;
pub mod hybrid;
pub mod registry;
pub mod tagmem;

pub mod prelude {
    pub use crate::bits::Bits;
    pub use crate::code40::{decode_code40, encode_code40, Code40Alphabet};
    pub use crate::config::CodecConfig;
    pub use crate::crc::crc16;
    pub use crate::data_model::{
        scheme_table, validate_record, Afi, EpcFields, EpcScheme, EpcSchemeName, Isil,
        LibraryItemRecord, LossDirection, LossReport, PrimaryItemId, PublicationSystem,
        PublicationType, SetInfo, TagProfile,
    };
    pub use crate::epc::{decode_epc, encode_epc, serial_capacity};
    pub use crate::fixed::{decode_fixed, encode_fixed, FixedBlock};
    pub use crate::hybrid::{
        build_serial_payload, convert_fixed_to_hybrid, convert_hybrid_to_fixed, decode_hybrid,
        detect_stage, encode_hybrid, publisher_tag, transition, Gs1Context, LifecycleStage,
        ObjectClassSource, TransitionParams,
    };
    pub use crate::tagmem::{load_profile, BankId, TagImage};
}
