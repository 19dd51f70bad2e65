//! Encode a record into the 32-byte fixed block, then show what a single
//! flipped bit does to it.

use rfid28560::fixed::{decode_fixed, encode_fixed, FixedError};
use rfid28560::prelude::*;

fn main() -> Result<(), FixedError> {
    let record = LibraryItemRecord {
        primary_id: PrimaryItemId::new("3001234567890123"),
        isil: Isil::new("DK-710100"),
        set_info: SetInfo::new(2, 1),
        publication_type: None,
        afi: Afi(0xC2),
    };
    let block = encode_fixed(&record)?;
    println!("block  {}", block.to_hex());
    println!(
        "crc    stored {:#06x}, computed {:#06x}",
        block.stored_crc(),
        block.computed_crc()
    );
    println!("back   {:?}", decode_fixed(block.as_bytes())?);

    let mut damaged = *block.as_bytes();
    damaged[5] ^= 0x04;
    match decode_fixed(&damaged) {
        Err(e) => println!("damaged block: {e}"),
        Ok(_) => unreachable!("the CRC catches every single-bit error"),
    }

    let too_long = LibraryItemRecord {
        primary_id: PrimaryItemId::new("12345678901234567"),
        set_info: SetInfo::new(2, 3),
        ..record
    };
    if let Err(FixedError::InvalidRecord(violations)) = encode_fixed(&too_long) {
        for v in violations {
            println!("rejected: {v}");
        }
    }
    Ok(())
}
