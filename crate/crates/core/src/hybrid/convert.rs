//! Conversions between the fixed block and hybrid tags.

use crate::config::CodecConfig;
use crate::data_model::{field, LibraryItemRecord, LossDirection, LossReport, TagProfile};
use crate::fixed::{decode_fixed_with, encode_fixed_with, FixedBlock};
use crate::tagmem::TagImage;

use super::{decode_hybrid, encode_hybrid, Gs1Context, HybridError, ObjectClassSource};

/// Library fields present in `before` that `after` no longer carries.
fn library_field_losses(
    before: &LibraryItemRecord,
    after: &LibraryItemRecord,
    report: &mut LossReport,
) {
    if before.primary_id != after.primary_id {
        report.record(field::PRIMARY_ID, &before.primary_id);
    }
    if before.isil != after.isil {
        report.record(field::ISIL, &before.isil);
    }
    if before.set_info != after.set_info {
        report.record(field::SET_INFO, before.set_info);
    }
}

/// The fixed block holds no EPC fields, so nothing is lost; the context
/// supplies manager number and object class. The record takes the
/// configured default AFI.
pub fn convert_fixed_to_hybrid(
    block: &FixedBlock,
    ctx: &Gs1Context,
    profile: &TagProfile,
    config: &CodecConfig,
) -> Result<(TagImage, LossReport), HybridError> {
    let mut record = decode_fixed_with(block.as_bytes(), config.default_afi, &config.alphabet)?;
    record.publication_type = match &ctx.object_class {
        ObjectClassSource::Publication(p) => Some(p.clone()),
        ObjectClassSource::Raw(_) => None,
    };
    let tag = encode_hybrid(&record, ctx, profile, config)?;
    let (written, _) = decode_hybrid(&tag, config)?;
    let mut report = LossReport::new(LossDirection::ToEpcView);
    library_field_losses(&record, &written, &mut report);
    Ok((tag, report))
}

/// Library fields survive; the manager number and object class have no
/// home in the fixed block and are reported lost.
pub fn convert_hybrid_to_fixed(
    tag: &TagImage,
    config: &CodecConfig,
) -> Result<(FixedBlock, LossReport), HybridError> {
    let (record, ctx) = decode_hybrid(tag, config)?;
    let class_bits = ctx.object_class_bits(config.hybrid_scheme().class_bits, config)?;
    let block = encode_fixed_with(&record, &config.alphabet)?;
    let written = decode_fixed_with(block.as_bytes(), config.default_afi, &config.alphabet)?;

    let mut report = LossReport::new(LossDirection::ToLibraryView);
    report.record(field::MANAGER_NUMBER, &ctx.manager_number);
    report.record(field::OBJECT_CLASS, &class_bits);
    library_field_losses(&record, &written, &mut report);
    Ok((block, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Bits;
    use crate::data_model::{Afi, Isil, PrimaryItemId, SetInfo};
    use crate::fixed::{encode_fixed, FixedError};

    fn record() -> LibraryItemRecord {
        LibraryItemRecord {
            primary_id: PrimaryItemId::new("3001234567890123"),
            isil: Isil::new("DK-710100"),
            set_info: SetInfo::SINGLE,
            publication_type: None,
            afi: Afi(0xC2),
        }
    }

    fn ctx() -> Gs1Context {
        Gs1Context {
            manager_number: Bits::from_u64(0x12345, 28).unwrap(),
            object_class: ObjectClassSource::Raw(Bits::from_u64(0x2000, 22).unwrap()),
        }
    }

    #[test]
    fn fixed_hybrid_fixed() {
        let cfg = CodecConfig::default();
        let block = encode_fixed(&record()).unwrap();
        let (tag, loss) =
            convert_fixed_to_hybrid(&block, &ctx(), &TagProfile::icode_ilt(), &cfg).unwrap();
        assert!(loss.is_lossless());
        assert_eq!(loss.direction, LossDirection::ToEpcView);
        let (back, loss) = convert_hybrid_to_fixed(&tag, &cfg).unwrap();
        assert_eq!(back, block);
        assert_eq!(
            loss.to_text(),
            "manager_number=28:00012345\nobject_class=22:002000\n"
        );
    }

    #[test]
    fn corrupted_block_propagates() {
        let cfg = CodecConfig::default();
        let mut raw = *encode_fixed(&record()).unwrap().as_bytes();
        raw[7] ^= 1;
        let block = FixedBlock::from_bytes(&raw).unwrap();
        assert!(matches!(
            convert_fixed_to_hybrid(&block, &ctx(), &TagProfile::icode_ilt(), &cfg),
            Err(HybridError::Fixed(FixedError::CrcMismatch { .. }))
        ));
    }
}
