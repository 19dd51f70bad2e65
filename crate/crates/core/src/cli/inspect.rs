//! Human-readable field tables for fixed blocks and tag dumps.

use std::fmt::Write;

use crate::bits::Bits;
use crate::code40::decode_code40;
use crate::config::CodecConfig;
use crate::data_model::{EpcFields, SET_INFO_BYTES};
use crate::epc::{decode_epc_with, field_layout};
use crate::fixed::{self, FixedBlock, BLOCK_LEN};
use crate::tagmem::{BankId, TagImage};

const AFI_BITS: usize = 8;
const GROUP_BITS: usize = 16;

struct Table {
    out: String,
}

impl Table {
    fn new(title: String, unit: &str) -> Self {
        let mut out = title;
        out.push('\n');
        let _ = writeln!(
            out,
            "  {:>6} {:>5}  {:<18} {:<40} value",
            format!("{unit}@"),
            "width",
            "field",
            "raw"
        );
        Self { out }
    }

    fn row(
        &mut self,
        depth: usize,
        offset: usize,
        width: usize,
        name: &str,
        raw: &str,
        value: &str,
    ) {
        let name = format!("{}{name}", "  ".repeat(depth));
        let _ = writeln!(
            self.out,
            "  {offset:>6} {width:>5}  {name:<18} {raw:<40} {value}"
        );
    }
}

fn quoted(bytes: &[u8]) -> String {
    format!("{:?}", String::from_utf8_lossy(bytes))
}

pub fn inspect_fixed(block: &FixedBlock, config: &CodecConfig) -> String {
    let b = block.as_bytes();
    let mut t = Table::new(format!("fixed block, {BLOCK_LEN} bytes"), "byte");
    let hex_of = |r: std::ops::Range<usize>| hex::encode(&b[r]);
    let v = b[fixed::VERSION];
    t.row(
        0,
        fixed::VERSION,
        1,
        "version",
        &hex::encode([v]),
        &if v == fixed::VERSION_BYTE {
            format!("{v:#04x} supported")
        } else {
            format!("{v:#04x} unsupported")
        },
    );
    let s = fixed::SET_INFO.start;
    t.row(
        0,
        s,
        1,
        "parts_in_item",
        &hex_of(s..s + 1),
        &b[s].to_string(),
    );
    t.row(
        0,
        s + 1,
        1,
        "part_number",
        &hex_of(s + 1..s + 2),
        &b[s + 1].to_string(),
    );
    let id = &b[fixed::PRIMARY_ID];
    t.row(
        0,
        fixed::PRIMARY_ID.start,
        fixed::PRIMARY_ID.len(),
        "primary_id",
        &hex_of(fixed::PRIMARY_ID),
        &quoted(strip_pad(id)),
    );
    let (stored, computed) = (block.stored_crc(), block.computed_crc());
    t.row(
        0,
        fixed::CRC.start,
        fixed::CRC.len(),
        "crc",
        &hex_of(fixed::CRC),
        &format!(
            "stored {stored:#06x}, computed {computed:#06x}, {}",
            if stored == computed { "ok" } else { "MISMATCH" }
        ),
    );
    t.row(
        0,
        fixed::ISIL.start,
        fixed::ISIL.len(),
        "isil",
        &hex_of(fixed::ISIL),
        &quoted(strip_pad(&b[fixed::ISIL])),
    );
    let mut out = t.out;
    match block.decode(config.default_afi) {
        Ok(_) => out.push_str("status: ok\n"),
        Err(e) => {
            let _ = writeln!(out, "status: {e}");
        }
    }
    out
}

fn strip_pad(bytes: &[u8]) -> &[u8] {
    let end = bytes
        .iter()
        .rposition(|&c| c != fixed::PAD)
        .map_or(0, |i| i + 1);
    &bytes[..end]
}

pub fn inspect_tag(tag: &TagImage, config: &CodecConfig) -> String {
    let p = tag.profile();
    let mut out = format!(
        "profile {} ({}, epc block {} bits, user memory {} bits, AFI {})\n",
        p.name, p.band, p.epc_block_bits, p.user_memory_bits, p.afi_location
    );
    for (bank, bits) in tag.banks() {
        let title = format!("bank {bank}, {} bits", bits.len());
        let mut t = Table::new(title, "bit");
        match bank {
            BankId::Block01Epc => epc_rows(&mut t, bits, config),
            BankId::Block11User => user_rows(&mut t, bits),
            BankId::System => {
                t.row(0, 0, bits.len(), "afi", &bits.to_string(), &afi_text(bits));
            }
        }
        out.push_str(&t.out);
    }
    out
}

fn afi_text(bits: &Bits) -> String {
    bits.to_u64()
        .map_or_else(|| "?".into(), |v| format!("{v:#04x}"))
}

fn epc_rows(t: &mut Table, bits: &Bits, config: &CodecConfig) {
    let fields = match decode_epc_with(bits, &config.schemes) {
        Ok(f) => f,
        Err(e) => {
            t.row(
                0,
                0,
                bits.len(),
                "code",
                &bits.to_string(),
                &format!("error: {e}"),
            );
            return;
        }
    };
    for (name, offset, width) in field_layout(&fields.scheme) {
        let raw = bits.slice(offset, width);
        let value = match name {
            "header" => format!("{}", fields.scheme.name),
            "manager_number" => config
                .managers
                .lookup(&fields.manager_number)
                .map_or_else(|| "unregistered".into(), str::to_string),
            "object_class" => fields
                .object_class
                .to_u64()
                .and_then(|v| config.publications.reverse_lookup(v).ok())
                .map_or_else(
                    || format!("raw {}", raw.to_u64().map_or("?".into(), |v| v.to_string())),
                    |p| p.to_string(),
                ),
            _ => serial_layout(&fields),
        };
        t.row(0, offset, width, name, &raw.to_string(), &value);
        if name == "serial" {
            serial_rows(t, &fields, offset, config);
        }
    }
}

/// (fill, code40) widths when the serial looks like a library payload.
fn payload_split(serial: &Bits) -> Option<(usize, usize)> {
    let body = serial.len().checked_sub(AFI_BITS)?;
    let lead = body % GROUP_BITS;
    let groups: Vec<Bits> = (lead..body)
        .step_by(GROUP_BITS)
        .map(|at| serial.slice(at, GROUP_BITS))
        .collect();
    let first = groups.iter().position(|g| !g.is_zero())?;
    if !serial.slice(0, lead).is_zero() {
        return None;
    }
    let code40 = (groups.len() - first) * GROUP_BITS;
    Some((body - code40, code40))
}

fn serial_layout(fields: &EpcFields) -> String {
    match payload_split(&fields.serial) {
        Some((fill, code40)) if fields.scheme.serial_bits >= AFI_BITS + GROUP_BITS => {
            format!("fill[{fill}] ‖ code40[{code40}] ‖ afi[{AFI_BITS}]")
        }
        _ => "plain serial".into(),
    }
}

fn serial_rows(t: &mut Table, fields: &EpcFields, offset: usize, config: &CodecConfig) {
    let Some((fill, code40)) = payload_split(&fields.serial) else {
        return;
    };
    let s = &fields.serial;
    let fill_bits = s.slice(0, fill);
    t.row(1, offset, fill, "fill", &fill_bits.to_string(), "zero");
    let text_bits = s.slice(fill, code40);
    let text = match text_bits
        .as_bytes()
        .map(|b| decode_code40(b, &config.alphabet))
    {
        Some(Ok(text)) => format!("{text:?}"),
        Some(Err(e)) => format!("error: {e}"),
        None => "?".into(),
    };
    t.row(
        1,
        offset + fill,
        code40,
        "code40",
        &text_bits.to_string(),
        &text,
    );
    let afi = s.slice(fill + code40, AFI_BITS);
    t.row(
        1,
        offset + fill + code40,
        AFI_BITS,
        "afi",
        &afi.to_string(),
        &afi_text(&afi),
    );
}

fn user_rows(t: &mut Table, bits: &Bits) {
    let bytes = bits.to_padded_bytes();
    let Some(&len) = bytes.first() else {
        return;
    };
    t.row(
        0,
        0,
        8,
        "isil_len",
        &bits.slice(0, 8).to_string(),
        &len.to_string(),
    );
    let len = len as usize;
    if bytes.len() < 1 + len + SET_INFO_BYTES {
        t.row(
            0,
            8,
            bits.len() - 8,
            "rest",
            &bits.slice(8, bits.len() - 8).to_string(),
            &format!("error: truncated, needs {} bytes", 1 + len + SET_INFO_BYTES),
        );
        return;
    }
    let isil = &bytes[1..1 + len];
    t.row(
        0,
        8,
        len * 8,
        "isil",
        &bits.slice(8, len * 8).to_string(),
        &quoted(isil),
    );
    let at = 8 + len * 8;
    t.row(
        0,
        at,
        8,
        "parts_in_item",
        &bits.slice(at, 8).to_string(),
        &bytes[1 + len].to_string(),
    );
    t.row(
        0,
        at + 8,
        8,
        "part_number",
        &bits.slice(at + 8, 8).to_string(),
        &bytes[2 + len].to_string(),
    );
    let used = at + 16;
    if bits.len() > used {
        t.row(
            0,
            used,
            bits.len() - used,
            "unused",
            &bits.slice(used, bits.len() - used).to_string(),
            "",
        );
    }
}
