//! Converting between the fixed block and a hybrid tag, with loss reports.

use rfid28560::fixed::encode_fixed;
use rfid28560::prelude::*;

fn main() {
    let config = CodecConfig::default();
    let record = LibraryItemRecord {
        primary_id: PrimaryItemId::new("3001234567890123"),
        isil: Isil::new("DK-710100"),
        set_info: SetInfo::SINGLE,
        publication_type: None,
        afi: config.default_afi,
    };
    let block = encode_fixed(&record).unwrap();
    let ctx = Gs1Context {
        manager_number: "28:00012345".parse().unwrap(),
        object_class: ObjectClassSource::Raw("22:002000".parse().unwrap()),
    };

    let (tag, loss) =
        convert_fixed_to_hybrid(&block, &ctx, &TagProfile::icode_ilt(), &config).unwrap();
    println!("fixed -> hybrid, lossless: {}", loss.is_lossless());

    let (back, loss) = convert_hybrid_to_fixed(&tag, &config).unwrap();
    println!("hybrid -> fixed, identical block: {}", back == block);
    print!("{}", loss.to_text());
    println!("{}", loss.to_json());
}
