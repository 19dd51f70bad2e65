//! Tag profiles, bank capacities and the text dump format.

use rfid28560::bits::Bits;
use rfid28560::tagmem::{
    bank_capacity, load_profile, parse_profile, BankId, ProfileTable, TagImage,
};

fn main() {
    let custom = parse_profile(
        "name = \"BIG_UHF\"\nband = \"UHF_TYPEC\"\nepc_block_bits = 256\n\
         user_memory_bits = 2048\nafi_location = \"SYSTEM_AREA\"\n",
    )
    .unwrap();
    let profiles = [
        load_profile("ICODE_ILT").unwrap(),
        load_profile("GENERIC_UHF_TYPEC").unwrap(),
        custom.clone(),
    ];
    for p in &profiles {
        let caps: Vec<String> = [BankId::Block01Epc, BankId::Block11User, BankId::System]
            .iter()
            .map(|&b| format!("{b}={:?}", bank_capacity(p, b)))
            .collect();
        println!(
            "{:<18} {:<9} {:<12} {}",
            p.name,
            p.band.as_str(),
            p.afi_location.as_str(),
            caps.join(" ")
        );
    }

    let tag = TagImage::new(profiles[1].clone())
        .write_bank(BankId::Block01Epc, Bits::from_u64(0x30, 8).unwrap())
        .unwrap()
        .write_bank(BankId::System, Bits::from_bytes(&[0xC2]))
        .unwrap();
    let dump = tag.to_dump();
    print!("{dump}");
    let back = TagImage::parse_dump(&dump, &ProfileTable::default()).unwrap();
    assert_eq!(back, tag);

    let overflow = tag.write_bank(BankId::Block01Epc, Bits::zeros(198));
    println!("{}", overflow.unwrap_err());
    let truncated = "profile:ICODE_ILT\nbank:01 len:198 hex:0d80\n";
    println!(
        "{}",
        TagImage::parse_dump(truncated, &ProfileTable::default()).unwrap_err()
    );
}
