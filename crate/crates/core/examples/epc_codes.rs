//! The three four-field EPC schemes and how a header selects one.

use rfid28560::bits::Bits;
use rfid28560::epc::{decode_epc, encode_epc, field_layout, serial_capacity};
use rfid28560::prelude::*;

fn main() {
    for scheme in scheme_table() {
        let layout: Vec<String> = field_layout(&scheme)
            .iter()
            .map(|(name, offset, width)| format!("{name}@{offset}[{width}]"))
            .collect();
        println!(
            "{:<6} header {:#04x}  {:>3} bits  serial {:>3}  {}",
            scheme.name.as_str(),
            scheme.header,
            scheme.total_bits(),
            serial_capacity(&scheme),
            layout.join(" ")
        );
    }

    let epc96 = scheme_table()[1];
    let fields = EpcFields::new(
        epc96,
        Bits::from_u64(0x0012345, epc96.manager_bits).unwrap(),
        Bits::from_u64(0x000105, epc96.class_bits).unwrap(),
        Bits::from_u64(42, epc96.serial_bits).unwrap(),
    );
    let code = encode_epc(&fields).unwrap();
    println!("\nEPC96 code  {code}");
    let back = decode_epc(&code).unwrap();
    println!("serial      {}", back.serial.to_u64().unwrap());

    let mut bogus = code.clone();
    bogus.set(7, !bogus.get(7));
    println!("header 0x31 -> {}", decode_epc(&bogus).unwrap_err());
}
