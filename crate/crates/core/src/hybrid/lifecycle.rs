//! Rerecording EPC fields as an item moves through its lifecycle.
//!
//! ```text
//! PUBLISHER_TAGGED -> LIBRARY_ACCESSIONED <-> EXTERNAL_TRANSIT
//! ```
//!
//! Publisher and transit tags carry a plain EPC in block 01 with the AFI in
//! the system area. Accession rewrites block 01 as a hybrid tag; leaving for
//! external transit puts a plain EPC serial back and drops the library
//! primary id.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::config::CodecConfig;
use crate::data_model::{
    field, Afi, EpcFields, EpcScheme, LibraryItemRecord, LossDirection, LossReport, TagProfile,
};
use crate::epc::{decode_epc_with, encode_epc, EpcError};
use crate::tagmem::{BankId, TagImage};

use super::{
    decode_hybrid, encode_hybrid, parse_user_memory, Gs1Context, HybridError, ObjectClassSource,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LifecycleStage {
    #[serde(rename = "PUBLISHER_TAGGED")]
    PublisherTagged,
    #[serde(rename = "LIBRARY_ACCESSIONED")]
    LibraryAccessioned,
    #[serde(rename = "EXTERNAL_TRANSIT")]
    ExternalTransit,
}

impl LifecycleStage {
    pub const ALL: [LifecycleStage; 3] = [
        LifecycleStage::PublisherTagged,
        LifecycleStage::LibraryAccessioned,
        LifecycleStage::ExternalTransit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LifecycleStage::PublisherTagged => "PUBLISHER_TAGGED",
            LifecycleStage::LibraryAccessioned => "LIBRARY_ACCESSIONED",
            LifecycleStage::ExternalTransit => "EXTERNAL_TRANSIT",
        }
    }

    pub fn can_transition_to(self, to: LifecycleStage) -> bool {
        use LifecycleStage::*;
        matches!(
            (self, to),
            (PublisherTagged, LibraryAccessioned)
                | (LibraryAccessioned, ExternalTransit)
                | (ExternalTransit, LibraryAccessioned)
        )
    }

    pub fn afi(self, config: &CodecConfig) -> Afi {
        match self {
            LifecycleStage::PublisherTagged => config.stage_afi.publisher_tagged,
            LifecycleStage::LibraryAccessioned => config.stage_afi.library_accessioned,
            LifecycleStage::ExternalTransit => config.stage_afi.external_transit,
        }
    }
}

impl fmt::Display for LifecycleStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for LifecycleStage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LifecycleStage::ALL
            .into_iter()
            .find(|st| st.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown lifecycle stage `{s}`"))
    }
}

/// Inputs a transition needs. Accession reads `record` (and
/// `minimal_rewrite` / `object_class`); external transit reads `serial`,
/// the optional field overrides and `erase_user_memory`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionParams {
    #[serde(default)]
    pub record: Option<LibraryItemRecord>,
    /// Keep the existing object class and rewrite the serial only.
    #[serde(default)]
    pub minimal_rewrite: bool,
    #[serde(default)]
    pub serial: Option<Bits>,
    #[serde(default)]
    pub manager_number: Option<Bits>,
    #[serde(default)]
    pub object_class: Option<Bits>,
    #[serde(default)]
    pub erase_user_memory: bool,
}

/// A plain-EPC tag as a publisher would write it, AFI in the system area.
pub fn publisher_tag(
    fields: &EpcFields,
    profile: &TagProfile,
    config: &CodecConfig,
) -> Result<TagImage, HybridError> {
    let code = encode_epc(fields)?;
    if code.len() > profile.epc_block_bits {
        return Err(HybridError::ProfileTooSmall {
            bank: BankId::Block01Epc,
            needed: code.len(),
            available: profile.epc_block_bits,
        });
    }
    Ok(TagImage::new(profile.clone())
        .write_bank(BankId::Block01Epc, code)?
        .write_bank(
            BankId::System,
            Bits::from_bytes(&[config.stage_afi.publisher_tagged.0]),
        )?)
}

/// Accessioned if block 01 and user memory decode as a hybrid tag,
/// otherwise publisher tagged. Transit tags look like publisher tags.
pub fn detect_stage(tag: &TagImage, config: &CodecConfig) -> LifecycleStage {
    if decode_hybrid(tag, config).is_ok() {
        LifecycleStage::LibraryAccessioned
    } else {
        LifecycleStage::PublisherTagged
    }
}

fn refit(field: &'static str, bits: &Bits, width: usize) -> Result<Bits, HybridError> {
    if bits.len() == width {
        return Ok(bits.clone());
    }
    bits.to_u64()
        .and_then(|v| Bits::from_u64(v, width).ok())
        .ok_or_else(|| HybridError::FieldWidthOverflow {
            field,
            value: bits.to_string(),
            width,
        })
}

fn plain_epc(tag: &TagImage, config: &CodecConfig) -> Result<EpcFields, HybridError> {
    Ok(decode_epc_with(
        tag.read_bank(BankId::Block01Epc)?,
        &config.schemes,
    )?)
}

/// Moves `tag` from stage `from` to stage `to`, returning the rewritten
/// image and what it lost. The AFI is set to the target stage's value.
pub fn transition(
    tag: &TagImage,
    from: LifecycleStage,
    to: LifecycleStage,
    params: &TransitionParams,
    config: &CodecConfig,
) -> Result<(TagImage, LossReport), HybridError> {
    if !from.can_transition_to(to) {
        return Err(HybridError::IllegalTransition { from, to });
    }
    match to {
        LifecycleStage::LibraryAccessioned => accession(tag, params, config),
        LifecycleStage::ExternalTransit => external_transit(tag, params, config),
        LifecycleStage::PublisherTagged => unreachable!("no edge into PUBLISHER_TAGGED"),
    }
}

fn accession(
    tag: &TagImage,
    params: &TransitionParams,
    config: &CodecConfig,
) -> Result<(TagImage, LossReport), HybridError> {
    let before = plain_epc(tag, config)?;
    let scheme = *config.hybrid_scheme();
    let mut record = params
        .record
        .clone()
        .ok_or(HybridError::MissingParams("record"))?;
    record.afi = LifecycleStage::LibraryAccessioned.afi(config);

    let manager_number = refit(
        "manager_number",
        &before.manager_number,
        scheme.manager_bits,
    )?;
    let object_class = if params.minimal_rewrite {
        let class = refit("object_class", &before.object_class, scheme.class_bits)?;
        let registered = class
            .to_u64()
            .and_then(|v| config.publications.reverse_lookup(v).ok());
        match (&record.publication_type, registered) {
            (None, Some(p)) => {
                record.publication_type = Some(p.clone());
                ObjectClassSource::Publication(p)
            }
            (None, None) => ObjectClassSource::Raw(class),
            (Some(want), Some(p)) if *want == p => ObjectClassSource::Publication(p),
            (Some(want), _) => {
                return Err(HybridError::ContextConflict(format!(
                    "minimal rewrite keeps object class {class}, record asks for {want}"
                )))
            }
        }
    } else if let Some(p) = &record.publication_type {
        ObjectClassSource::Publication(p.clone())
    } else if let Some(raw) = &params.object_class {
        ObjectClassSource::Raw(raw.clone())
    } else {
        return Err(HybridError::MissingParams("record.publication_type"));
    };

    let ctx = Gs1Context {
        manager_number,
        object_class,
    };
    let after = encode_hybrid(&record, &ctx, tag.profile(), config)?;
    let class_after = ctx.object_class_bits(scheme.class_bits, config)?;

    let mut report = LossReport::new(LossDirection::ToLibraryView);
    if before.manager_number != ctx.manager_number {
        report.record(field::MANAGER_NUMBER, &before.manager_number);
    }
    if before.object_class != class_after {
        report.record(field::OBJECT_CLASS, &before.object_class);
    }
    // the plain serial gives way to the library payload
    report.record(field::SERIAL, &before.serial);
    if let Ok(bits) = tag.read_bank(BankId::Block11User) {
        if let Ok((isil, set_info)) = parse_user_memory(bits) {
            if isil != record.isil {
                report.record(field::ISIL, &isil);
            }
            if set_info != record.set_info {
                report.record(field::SET_INFO, set_info);
            }
        }
    }
    Ok((after, report))
}

fn external_transit(
    tag: &TagImage,
    params: &TransitionParams,
    config: &CodecConfig,
) -> Result<(TagImage, LossReport), HybridError> {
    let (record, ctx) = decode_hybrid(tag, config)?;
    let scheme: EpcScheme = *config.hybrid_scheme();
    let serial = params
        .serial
        .clone()
        .ok_or(HybridError::MissingParams("serial"))?;
    let class_before = ctx.object_class_bits(scheme.class_bits, config)?;
    let manager_number = params
        .manager_number
        .clone()
        .unwrap_or_else(|| ctx.manager_number.clone());
    let object_class = params
        .object_class
        .clone()
        .unwrap_or_else(|| class_before.clone());
    for (name, bits, width) in [
        ("manager_number", &manager_number, scheme.manager_bits),
        ("object_class", &object_class, scheme.class_bits),
        ("serial", &serial, scheme.serial_bits),
    ] {
        if bits.len() != width {
            return Err(EpcError::WidthMismatch {
                field: name,
                expected: width,
                actual: bits.len(),
            }
            .into());
        }
    }
    let code = encode_epc(&EpcFields::new(
        scheme,
        manager_number.clone(),
        object_class.clone(),
        serial,
    ))?;
    let mut after = tag.write_bank(BankId::Block01Epc, code)?.write_bank(
        BankId::System,
        Bits::from_bytes(&[LifecycleStage::ExternalTransit.afi(config).0]),
    )?;
    if params.erase_user_memory {
        after = after.clear_bank(BankId::Block11User);
    }

    let mut report = LossReport::new(LossDirection::ToEpcView);
    if manager_number != ctx.manager_number {
        report.record(field::MANAGER_NUMBER, &ctx.manager_number);
    }
    if object_class != class_before {
        report.record(field::OBJECT_CLASS, &class_before);
    }
    report.record(field::PRIMARY_ID, &record.primary_id);
    if params.erase_user_memory {
        report.record(field::ISIL, &record.isil);
        report.record(field::SET_INFO, record.set_info);
    }
    Ok((after, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data_model::{
        EpcSchemeName, Isil, PrimaryItemId, PublicationSystem, PublicationType, SetInfo,
    };

    fn cfg() -> CodecConfig {
        CodecConfig::default()
    }

    fn publisher(cfg: &CodecConfig) -> TagImage {
        let s = *cfg.schemes.get(EpcSchemeName::Epc198);
        let fields = EpcFields::new(
            s,
            Bits::from_u64(0x12345, 28).unwrap(),
            Bits::from_u64(261, 22).unwrap(),
            Bits::from_u128(0xABCDEF0123, 140).unwrap(),
        );
        publisher_tag(&fields, &TagProfile::icode_ilt(), cfg).unwrap()
    }

    fn library_record() -> LibraryItemRecord {
        LibraryItemRecord {
            primary_id: PrimaryItemId::new("3001234567890123"),
            isil: Isil::new("DK-710100"),
            set_info: SetInfo::SINGLE,
            publication_type: Some(PublicationType {
                system: PublicationSystem::Unimarc,
                code: "a".into(),
                numeric_id: 1,
            }),
            afi: Afi(0),
        }
    }

    #[test]
    fn edges() {
        use LifecycleStage::*;
        let legal: Vec<_> = LifecycleStage::ALL
            .iter()
            .flat_map(|a| LifecycleStage::ALL.iter().map(move |b| (*a, *b)))
            .filter(|(a, b)| a.can_transition_to(*b))
            .collect();
        assert_eq!(
            legal,
            vec![
                (PublisherTagged, LibraryAccessioned),
                (LibraryAccessioned, ExternalTransit),
                (ExternalTransit, LibraryAccessioned)
            ]
        );
    }

    #[test]
    fn accession_keeps_manager_and_rewrites_serial_and_class() {
        let c = cfg();
        let tag = publisher(&c);
        let params = TransitionParams {
            record: Some(library_record()),
            ..Default::default()
        };
        let (acc, loss) = transition(
            &tag,
            LifecycleStage::PublisherTagged,
            LifecycleStage::LibraryAccessioned,
            &params,
            &c,
        )
        .unwrap();
        let (r, ctx) = decode_hybrid(&acc, &c).unwrap();
        assert_eq!(ctx.manager_number, Bits::from_u64(0x12345, 28).unwrap());
        assert_eq!(r.afi, Afi(0xC2));
        assert_eq!(r.primary_id.as_str(), "3001234567890123");
        assert_eq!(
            loss.field_names().into_iter().collect::<Vec<_>>(),
            vec!["object_class", "serial"]
        );
        assert_eq!(detect_stage(&acc, &c), LifecycleStage::LibraryAccessioned);
        assert_eq!(detect_stage(&tag, &c), LifecycleStage::PublisherTagged);
    }

    #[test]
    fn minimal_rewrite_keeps_class() {
        let c = cfg();
        let mut record = library_record();
        record.publication_type = None;
        let params = TransitionParams {
            record: Some(record),
            minimal_rewrite: true,
            ..Default::default()
        };
        let (acc, loss) = transition(
            &publisher(&c),
            LifecycleStage::PublisherTagged,
            LifecycleStage::LibraryAccessioned,
            &params,
            &c,
        )
        .unwrap();
        assert_eq!(
            loss.field_names().into_iter().collect::<Vec<_>>(),
            vec!["serial"]
        );
        let (r, _) = decode_hybrid(&acc, &c).unwrap();
        assert_eq!(r.publication_type.unwrap().numeric_id, 261);
    }

    #[test]
    fn transit_loses_the_primary_id() {
        let c = cfg();
        let params = TransitionParams {
            record: Some(library_record()),
            ..Default::default()
        };
        let (acc, _) = transition(
            &publisher(&c),
            LifecycleStage::PublisherTagged,
            LifecycleStage::LibraryAccessioned,
            &params,
            &c,
        )
        .unwrap();
        let params = TransitionParams {
            serial: Some(Bits::from_u64(77, 140).unwrap()),
            ..Default::default()
        };
        let (out, loss) = transition(
            &acc,
            LifecycleStage::LibraryAccessioned,
            LifecycleStage::ExternalTransit,
            &params,
            &c,
        )
        .unwrap();
        assert!(loss.contains("primary_id"));
        assert_eq!(loss.to_text(), "primary_id=3001234567890123\n");
        assert_eq!(out.afi_mirror(), Some(Afi(0)));
        assert!(out.read_bank(BankId::Block11User).is_ok());
    }

    #[test]
    fn illegal_and_missing() {
        let c = cfg();
        let tag = publisher(&c);
        assert_eq!(
            transition(
                &tag,
                LifecycleStage::ExternalTransit,
                LifecycleStage::PublisherTagged,
                &TransitionParams::default(),
                &c
            ),
            Err(HybridError::IllegalTransition {
                from: LifecycleStage::ExternalTransit,
                to: LifecycleStage::PublisherTagged
            })
        );
        assert_eq!(
            transition(
                &tag,
                LifecycleStage::PublisherTagged,
                LifecycleStage::LibraryAccessioned,
                &TransitionParams::default(),
                &c
            ),
            Err(HybridError::MissingParams("record"))
        );
    }

    #[test]
    fn stage_names() {
        assert_eq!(
            "library_accessioned".parse::<LifecycleStage>(),
            Ok(LifecycleStage::LibraryAccessioned)
        );
        assert!("SHELVED".parse::<LifecycleStage>().is_err());
    }
}
