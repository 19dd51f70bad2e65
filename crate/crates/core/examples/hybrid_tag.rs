//! A library record carried inside an EPC198 code.

use rfid28560::prelude::*;

fn main() -> Result<(), rfid28560::hybrid::HybridError> {
    let config = CodecConfig::default();
    let onix_bc = config.publications.iter().find(|p| p.code == "BC").unwrap();
    let record = LibraryItemRecord {
        primary_id: PrimaryItemId::new("3001234567890123"),
        isil: Isil::new("DK-710100"),
        set_info: SetInfo::SINGLE,
        publication_type: Some(onix_bc.clone()),
        afi: Afi(0xC2),
    };
    let ctx = Gs1Context {
        manager_number: "28:00012345".parse().unwrap(),
        object_class: ObjectClassSource::Publication(onix_bc),
    };

    let payload = build_serial_payload(&record.primary_id, record.afi, &config)?;
    println!(
        "serial payload {} bits of {}: {payload}",
        payload.len(),
        config.hybrid_scheme().serial_bits
    );

    let tag = encode_hybrid(&record, &ctx, &TagProfile::icode_ilt(), &config)?;
    print!("{}", tag.to_dump());

    let (back, back_ctx) = decode_hybrid(&tag, &config)?;
    assert_eq!((back, back_ctx), (record, ctx));
    println!("decoded back to the same record and context");

    // a plain UHF tag has no room for the 198-bit code
    let err = encode_hybrid(
        &record_again(),
        &ctx_raw(),
        &TagProfile::generic_uhf_typec(),
        &config,
    )
    .unwrap_err();
    println!("GENERIC_UHF_TYPEC: {err}");
    Ok(())
}

fn record_again() -> LibraryItemRecord {
    LibraryItemRecord {
        primary_id: PrimaryItemId::new("b0047"),
        isil: Isil::new("US-DLC"),
        set_info: SetInfo::SINGLE,
        publication_type: None,
        afi: Afi(0xC2),
    }
}

fn ctx_raw() -> Gs1Context {
    Gs1Context {
        manager_number: "28:00000001".parse().unwrap(),
        object_class: ObjectClassSource::Raw("22:002000".parse().unwrap()),
    }
}
