//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

pub mod golden;

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};

use rfid28560::bits::Bits;
use rfid28560::config::CodecConfig;
use rfid28560::data_model::{
    Afi, EpcFields, EpcScheme, Isil, LibraryItemRecord, PrimaryItemId, PublicationType, SetInfo,
};
use rfid28560::epc::decode_epc_with;
use rfid28560::fixed::FixedBlock;
use rfid28560::hybrid::{decode_hybrid, parse_user_memory, Gs1Context, ObjectClassSource};
use rfid28560::tagmem::{BankId, TagImage};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// CRC-16, polynomial 0x1021, init 0xFFFF, one bit at a time.
pub fn crc16_bitwise(data: &[u8]) -> u16 {
    let mut crc: u16 = 0xFFFF;
    for &byte in data {
        for i in (0..8).rev() {
            let bit = (byte >> i) & 1 == 1;
            let top = crc & 0x8000 != 0;
            crc <<= 1;
            if bit != top {
                crc ^= 0x1021;
            }
        }
    }
    crc
}

/// CRC of a fixed block: bytes 0..19 then 21..32.
pub fn fixed_crc_oracle(block: &[u8; 32]) -> u16 {
    let mut covered = block[..19].to_vec();
    covered.extend_from_slice(&block[21..]);
    crc16_bitwise(&covered)
}

pub const CODE40_SYMBOLS: &str = " abcdefghijklmnopqrstuvwxyz0123456789-:.";
pub const CODE40_TEXT: &str = "abcdefghijklmnopqrstuvwxyz0123456789-:.";

/// Every group value mapped to its three symbols, by enumeration of all
/// 40^3 triples.
pub struct Code40Oracle {
    by_value: BTreeMap<u16, [char; 3]>,
    by_triple: BTreeMap<[char; 3], u16>,
}

impl Code40Oracle {
    pub fn enumerate() -> Self {
        let symbols: Vec<char> = CODE40_SYMBOLS.chars().collect();
        let mut by_value = BTreeMap::new();
        let mut by_triple = BTreeMap::new();
        let mut next: u16 = 1;
        for &a in &symbols {
            for &b in &symbols {
                for &c in &symbols {
                    by_value.insert(next, [a, b, c]);
                    by_triple.insert([a, b, c], next);
                    next = next.wrapping_add(1);
                }
            }
        }
        Self {
            by_value,
            by_triple,
        }
    }

    pub fn max_value(&self) -> u16 {
        *self.by_value.keys().last().unwrap()
    }

    pub fn triple(&self, value: u16) -> [char; 3] {
        self.by_value[&value]
    }

    pub fn encode(&self, text: &str) -> Vec<u8> {
        let mut chars: Vec<char> = text.to_ascii_lowercase().chars().collect();
        while !chars.len().is_multiple_of(3) {
            chars.push(' ');
        }
        chars
            .chunks(3)
            .flat_map(|t| self.by_triple[&[t[0], t[1], t[2]]].to_be_bytes())
            .collect()
    }

    pub fn decode(&self, bytes: &[u8]) -> Option<String> {
        let mut s = String::new();
        for pair in bytes.chunks(2) {
            let v = u16::from_be_bytes([pair[0], *pair.get(1)?]);
            s.extend(self.by_value.get(&v)?);
        }
        Some(s.trim_end_matches(' ').to_string())
    }
}

pub fn random_text(rng: &mut StdRng, alphabet: &str, len: usize) -> String {
    let chars: Vec<char> = alphabet.chars().collect();
    (0..len).map(|_| *chars.choose(rng).unwrap()).collect()
}

pub fn random_isil(rng: &mut StdRng) -> Isil {
    const UPPER: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    const ALNUM: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
    let prefix_len = rng.random_range(1..=4);
    let suffix_len = rng.random_range(1..=(11 - prefix_len - 1));
    let mut s = random_text(rng, UPPER, prefix_len);
    s.push('-');
    s.push_str(&random_text(rng, &format!("{ALNUM}-:"), suffix_len));
    Isil::new(s)
}

pub fn random_set_info(rng: &mut StdRng) -> SetInfo {
    let parts = rng.random_range(1..=u8::MAX);
    let part = if parts == 1 {
        rng.random_range(0..=1)
    } else {
        rng.random_range(1..=parts)
    };
    SetInfo::new(parts, part)
}

/// A valid record. `publication` is copied in as-is.
pub fn random_record(
    rng: &mut StdRng,
    publication: Option<PublicationType>,
    afi: Afi,
) -> LibraryItemRecord {
    let len = rng.random_range(1..=16);
    LibraryItemRecord {
        primary_id: PrimaryItemId::new(random_text(rng, CODE40_TEXT, len)),
        isil: random_isil(rng),
        set_info: random_set_info(rng),
        publication_type: publication,
        afi,
    }
}

pub fn random_bits(rng: &mut StdRng, width: usize) -> Bits {
    let mut b = Bits::zeros(width);
    for i in 0..width {
        b.set(i, rng.random_bool(0.5));
    }
    b
}

/// Raw object-class bits that are not a registered publication id.
pub fn random_raw_class(rng: &mut StdRng, config: &CodecConfig) -> Bits {
    let width = config.hybrid_scheme().class_bits;
    loop {
        let b = random_bits(rng, width);
        let registered = b
            .to_u64()
            .is_some_and(|v| config.publications.reverse_lookup(v).is_ok());
        if !registered {
            return b;
        }
    }
}

/// A valid record and a matching context for the hybrid codec.
pub fn random_hybrid_pair(
    rng: &mut StdRng,
    config: &CodecConfig,
) -> (LibraryItemRecord, Gs1Context) {
    let scheme = config.hybrid_scheme();
    let publications: Vec<PublicationType> = config.publications.iter().collect();
    let (publication, object_class) = if rng.random_bool(0.5) {
        let p = publications.choose(rng).unwrap().clone();
        (Some(p.clone()), ObjectClassSource::Publication(p))
    } else {
        (None, ObjectClassSource::Raw(random_raw_class(rng, config)))
    };
    let afi = Afi(rng.random());
    let record = random_record(rng, publication, afi);
    let ctx = Gs1Context {
        manager_number: random_bits(rng, scheme.manager_bits),
        object_class,
    };
    (record, ctx)
}

pub fn random_epc_fields(rng: &mut StdRng, scheme: &EpcScheme) -> EpcFields {
    EpcFields::new(
        *scheme,
        random_bits(rng, scheme.manager_bits),
        random_bits(rng, scheme.class_bits),
        random_bits(rng, scheme.serial_bits),
    )
}

/// Field name to rendered value, as a reader of one representation sees it.
pub type View = BTreeMap<&'static str, String>;

pub fn fixed_view(block: &FixedBlock, config: &CodecConfig) -> View {
    let r = block.decode(config.default_afi).expect("decodable block");
    library_view(&r)
}

fn library_view(r: &LibraryItemRecord) -> View {
    BTreeMap::from([
        ("primary_id", r.primary_id.to_string()),
        ("isil", r.isil.to_string()),
        ("set_info", r.set_info.to_string()),
    ])
}

/// Hybrid tags show their library fields; any other tag shows the plain
/// EPC fields plus whatever user memory still holds.
pub fn tag_view(tag: &TagImage, config: &CodecConfig) -> View {
    if let Ok((record, ctx)) = decode_hybrid(tag, config) {
        let class = ctx
            .object_class_bits(config.hybrid_scheme().class_bits, config)
            .unwrap();
        let mut v = library_view(&record);
        v.insert("manager_number", ctx.manager_number.to_string());
        v.insert("object_class", class.to_string());
        return v;
    }
    let code = tag.read_bank(BankId::Block01Epc).expect("block 01");
    let f = decode_epc_with(code, &config.schemes).expect("plain EPC");
    let mut v = BTreeMap::from([
        ("manager_number", f.manager_number.to_string()),
        ("object_class", f.object_class.to_string()),
        ("serial", f.serial.to_string()),
    ]);
    if let Ok((isil, set_info)) = tag
        .read_bank(BankId::Block11User)
        .map_err(|_| ())
        .and_then(|b| parse_user_memory(b).map_err(|_| ()))
    {
        v.insert("isil", isil.to_string());
        v.insert("set_info", set_info.to_string());
    }
    v
}

/// Fields of `before` whose value `after` no longer shows.
pub fn view_loss(before: &View, after: &View) -> View {
    before
        .iter()
        .filter(|(k, v)| after.get(*k) != Some(*v))
        .map(|(k, v)| (*k, v.clone()))
        .collect()
}

/// The report as the same field-to-value map.
pub fn report_map(report: &rfid28560::data_model::LossReport) -> View {
    let names: BTreeMap<String, &'static str> = [
        "manager_number",
        "object_class",
        "serial",
        "primary_id",
        "isil",
        "set_info",
    ]
    .into_iter()
    .map(|n| (n.to_string(), n))
    .collect();
    report
        .lost_fields
        .iter()
        .map(|f| (names[&f.field], f.previous_value.clone()))
        .collect()
}
