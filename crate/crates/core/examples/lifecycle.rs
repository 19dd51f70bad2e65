//! Publisher tag, library accession, then external transit.

use rfid28560::bits::Bits;
use rfid28560::prelude::*;

fn show(stage: LifecycleStage, tag: &TagImage, loss: Option<&LossReport>) {
    println!("== {stage}");
    print!("{}", tag.to_dump());
    if let Some(loss) = loss {
        print!("{}", loss.to_text());
    }
}

fn main() {
    let config = CodecConfig::default();
    let scheme = *config.hybrid_scheme();
    let fields = EpcFields::new(
        scheme,
        Bits::from_u64(0x0012345, scheme.manager_bits).unwrap(),
        Bits::from_u64(0xABC, scheme.class_bits).unwrap(),
        Bits::from_u128(
            0x8000_0000_0000_0000_0000_0000_0000_1234,
            scheme.serial_bits,
        )
        .unwrap(),
    );
    let tag = publisher_tag(&fields, &TagProfile::icode_ilt(), &config).unwrap();
    let stage = detect_stage(&tag, &config);
    show(stage, &tag, None);

    let unimarc_a = config.publications.iter().find(|p| p.code == "a").unwrap();
    let params = TransitionParams {
        record: Some(LibraryItemRecord {
            primary_id: PrimaryItemId::new("3001234567890123"),
            isil: Isil::new("DK-710100"),
            set_info: SetInfo::SINGLE,
            publication_type: Some(unimarc_a),
            afi: Afi(0),
        }),
        ..Default::default()
    };
    let to = LifecycleStage::LibraryAccessioned;
    let (tag, loss) = transition(&tag, stage, to, &params, &config).unwrap();
    show(to, &tag, Some(&loss));

    let params = TransitionParams {
        serial: Some(Bits::from_u64(0x77, scheme.serial_bits).unwrap()),
        ..Default::default()
    };
    let (transit, loss) =
        transition(&tag, to, LifecycleStage::ExternalTransit, &params, &config).unwrap();
    show(LifecycleStage::ExternalTransit, &transit, Some(&loss));

    let err = transition(
        &transit,
        LifecycleStage::ExternalTransit,
        LifecycleStage::PublisherTagged,
        &TransitionParams::default(),
        &config,
    )
    .unwrap_err();
    println!("== {err}");
}
