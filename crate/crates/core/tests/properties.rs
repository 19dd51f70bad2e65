mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;

use rfid28560::bits::Bits;
use rfid28560::code40::{decode_code40, encode_code40, Code40Alphabet};
use rfid28560::config::CodecConfig;
use rfid28560::data_model::{validate_record, EpcSchemeName, LossDirection, TagProfile};
use rfid28560::epc::{decode_epc, encode_epc};
use rfid28560::fixed::{decode_fixed, encode_fixed, DEFAULT_AFI};
use rfid28560::hybrid::{
    convert_fixed_to_hybrid, convert_hybrid_to_fixed, decode_hybrid, encode_hybrid, publisher_tag,
    transition, LifecycleStage, TransitionParams,
};
use rfid28560::tagmem::{ProfileTable, TagImage};

/// Random serial with the top bit set, so it never reads as a library payload.
fn plain_serial(g: &mut rand::rngs::StdRng, width: usize) -> Bits {
    let mut b = random_bits(g, width);
    b.set(0, true);
    b
}

proptest! {
    #[test]
    fn fixed_round_trip(seed in any::<u64>()) {
        let r = random_record(&mut rng(seed), None, DEFAULT_AFI);
        let block = encode_fixed(&r).unwrap();
        prop_assert_eq!(decode_fixed(block.as_bytes()).unwrap(), r);
    }

    #[test]
    fn fixed_detects_any_single_bit_flip(seed in any::<u64>(), bit in 0usize..256) {
        let r = random_record(&mut rng(seed), None, DEFAULT_AFI);
        let mut raw = *encode_fixed(&r).unwrap().as_bytes();
        raw[bit / 8] ^= 0x80 >> (bit % 8);
        prop_assert!(decode_fixed(&raw).is_err());
    }

    #[test]
    fn hybrid_round_trip(seed in any::<u64>(), uhf in any::<bool>()) {
        let cfg = CodecConfig::default();
        let (r, ctx) = random_hybrid_pair(&mut rng(seed), &cfg);
        let profile = if uhf {
            // wide enough for EPC198, AFI in the system area
            let mut p = TagProfile::generic_uhf_typec();
            p.epc_block_bits = 256;
            p
        } else {
            TagProfile::icode_ilt()
        };
        let tag = encode_hybrid(&r, &ctx, &profile, &cfg).unwrap();
        prop_assert_eq!(decode_hybrid(&tag, &cfg).unwrap(), (r, ctx));
    }

    #[test]
    fn epc_round_trip(seed in any::<u64>(), which in 0usize..3) {
        let cfg = CodecConfig::default();
        let scheme = cfg.schemes.get(EpcSchemeName::ALL[which]);
        let f = random_epc_fields(&mut rng(seed), scheme);
        let code = encode_epc(&f).unwrap();
        prop_assert_eq!(code.len(), scheme.total_bits());
        prop_assert_eq!(decode_epc(&code).unwrap(), f);
    }

    #[test]
    fn decode_epc_total_on_arbitrary_bits(seed in any::<u64>(), len in 0usize..260) {
        let bits = random_bits(&mut rng(seed), len);
        if let Ok(f) = decode_epc(&bits) {
            prop_assert_eq!(encode_epc(&f).unwrap(), bits);
        }
    }

    #[test]
    fn bits_text_round_trip(seed in any::<u64>(), len in 0usize..300) {
        let b = random_bits(&mut rng(seed), len);
        prop_assert_eq!(b.to_string().parse::<Bits>().unwrap(), b);
    }

    #[test]
    fn code40_is_case_insensitive(text in "[a-zA-Z0-9:.-]{0,48}") {
        let a = Code40Alphabet::default();
        let bytes = encode_code40(&text, &a).unwrap();
        prop_assert_eq!(&bytes, &encode_code40(&text.to_ascii_lowercase(), &a).unwrap());
        prop_assert_eq!(decode_code40(&bytes, &a).unwrap(), text.to_ascii_lowercase());
    }

    #[test]
    fn validation_is_sorted_and_stable(
        id in ".{0,20}", isil in ".{0,14}", parts in any::<u8>(), part in any::<u8>(),
    ) {
        let mut r = random_record(&mut rng(0), None, DEFAULT_AFI);
        r.primary_id = rfid28560::data_model::PrimaryItemId::new(id);
        r.isil = rfid28560::data_model::Isil::new(isil);
        r.set_info = rfid28560::data_model::SetInfo::new(parts, part);
        let v = validate_record(&r);
        prop_assert_eq!(&v, &validate_record(&r));
        prop_assert!(v.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(v.is_empty(), encode_fixed(&r).is_ok());
    }

    #[test]
    fn dump_round_trip(seed in any::<u64>()) {
        let cfg = CodecConfig::default();
        let (r, ctx) = random_hybrid_pair(&mut rng(seed), &cfg);
        let tag = encode_hybrid(&r, &ctx, &TagProfile::icode_ilt(), &cfg).unwrap();
        prop_assert_eq!(TagImage::parse_dump(&tag.to_dump(), &ProfileTable::default()).unwrap(), tag);
    }

    #[test]
    fn conversion_loss_equals_view_diff(seed in any::<u64>()) {
        let cfg = CodecConfig::default();
        let mut g = rng(seed);
        let (mut r, ctx) = random_hybrid_pair(&mut g, &cfg);
        r.afi = cfg.default_afi;
        let block = encode_fixed(&r).unwrap();

        let (tag, loss) =
            convert_fixed_to_hybrid(&block, &ctx, &TagProfile::icode_ilt(), &cfg).unwrap();
        prop_assert_eq!(loss.direction, LossDirection::ToEpcView);
        prop_assert_eq!(report_map(&loss), view_loss(&fixed_view(&block, &cfg), &tag_view(&tag, &cfg)));

        let (back, loss) = convert_hybrid_to_fixed(&tag, &cfg).unwrap();
        prop_assert_eq!(back, block);
        prop_assert_eq!(report_map(&loss), view_loss(&tag_view(&tag, &cfg), &fixed_view(&back, &cfg)));
    }

    #[test]
    fn lifecycle_loss_equals_view_diff(seed in any::<u64>()) {
        let cfg = CodecConfig::default();
        let mut g = rng(seed);
        let scheme = *cfg.hybrid_scheme();
        let publisher = publisher_tag(
            &random_epc_fields(&mut g, &scheme),
            &TagProfile::icode_ilt(),
            &cfg,
        )
        .unwrap();
        let (record, _) = random_hybrid_pair(&mut g, &cfg);
        let params = TransitionParams {
            record: Some(record.clone()),
            minimal_rewrite: false,
            object_class: Some(random_raw_class(&mut g, &cfg)),
            ..Default::default()
        };
        let (acc, loss) = transition(
            &publisher,
            LifecycleStage::PublisherTagged,
            LifecycleStage::LibraryAccessioned,
            &params,
            &cfg,
        )
        .unwrap();
        prop_assert_eq!(report_map(&loss), view_loss(&tag_view(&publisher, &cfg), &tag_view(&acc, &cfg)));

        let params = TransitionParams {
            serial: Some(plain_serial(&mut g, scheme.serial_bits)),
            manager_number: g.random_bool(0.5).then(|| random_bits(&mut g, scheme.manager_bits)),
            object_class: g.random_bool(0.5).then(|| random_bits(&mut g, scheme.class_bits)),
            erase_user_memory: g.random_bool(0.5),
            ..Default::default()
        };
        let (transit, loss) = transition(
            &acc,
            LifecycleStage::LibraryAccessioned,
            LifecycleStage::ExternalTransit,
            &params,
            &cfg,
        )
        .unwrap();
        prop_assert_eq!(report_map(&loss), view_loss(&tag_view(&acc, &cfg), &tag_view(&transit, &cfg)));
    }
}
