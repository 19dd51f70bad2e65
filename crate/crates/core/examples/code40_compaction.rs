//! Code 40 packs three characters into 16 bits.
//!
//! cargo run --example code40_compaction -- 3001234567890123

use rfid28560::code40::{decode_code40, encode_code40, pack_group, Code40Alphabet};

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "3001234567890123".into());
    let alphabet = Code40Alphabet::default();

    let bytes = match encode_code40(&text, &alphabet) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("text     {text:?} ({} chars)", text.chars().count());
    println!("packed   {} ({} bytes)", hex::encode(&bytes), bytes.len());
    println!("ascii    {} bytes", text.len());

    for (i, chunk) in text.as_bytes().chunks(3).enumerate() {
        let values: Vec<u8> = chunk
            .iter()
            .map(|&c| alphabet.value_of(c as char).unwrap())
            .collect();
        let v = |k: usize| values.get(k).copied().unwrap_or(0);
        println!(
            "group {i}  {:<3} -> {:>2},{:>2},{:>2} -> {:#06x}",
            String::from_utf8_lossy(chunk),
            v(0),
            v(1),
            v(2),
            pack_group(v(0), v(1), v(2))
        );
    }
    println!("decoded  {:?}", decode_code40(&bytes, &alphabet).unwrap());
}
