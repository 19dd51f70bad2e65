//! Shipped registries and overriding them from a directory.
//!
//! cargo run --example registries -- path/to/registry-dir

use std::path::PathBuf;

use rfid28560::config::CodecConfig;
use rfid28560::data_model::PublicationSystem;

fn main() {
    let config = match std::env::args().nth(1).map(PathBuf::from) {
        Some(dir) => match CodecConfig::from_dir(&dir) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{e}");
                std::process::exit(2);
            }
        },
        None => CodecConfig::default(),
    };

    println!(
        "publication types ({} bits):",
        config.publications.class_bits()
    );
    for p in config.publications.iter() {
        println!("  {:<8} {:<3} {}", p.system.as_str(), p.code, p.numeric_id);
    }
    let id = config
        .publications
        .lookup(PublicationSystem::Onix, "BC")
        .ok();
    println!("ONIX BC -> {id:?}");

    println!("managers:");
    for (number, name) in config.managers.iter() {
        println!("  {number}  {name}");
    }

    for s in config.schemes.iter() {
        println!(
            "scheme {} header {:#04x}: {}/{}/{}",
            s.name, s.header, s.manager_bits, s.class_bits, s.serial_bits
        );
    }
    println!("stage AFIs: {:?}", config.stage_afi);
}
