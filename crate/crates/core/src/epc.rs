//! Four-field EPC binary codes at 64, 96 and 198 bits.
//!
//! A code is `header ‖ manager_number ‖ object_class ‖ serial`, most
//! significant bit first. The 8-bit header selects the scheme and therefore
//! every other field width. Manager number and object class are opaque bit
//! containers here; no company-prefix partitioning is applied.

use thiserror::Error;

use crate::bits::Bits;
use crate::data_model::{EpcFields, EpcScheme, EpcSchemeName, SchemeTable, HEADER_BITS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpcError {
    #[error("{field} is {actual} bits, scheme expects {expected}")]
    WidthMismatch {
        field: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("header {header:#04x} does not match scheme {scheme} (expects {expected:#04x})")]
    HeaderMismatch {
        scheme: EpcSchemeName,
        header: u64,
        expected: u8,
    },
    #[error("code length {0} is not 64, 96 or 198 bits")]
    InvalidLength(usize),
    #[error("unknown header {0:#04x}")]
    UnknownHeader(u8),
    #[error(
        "header {header:#04x} selects {scheme} ({expected} bits) but the code is {actual} bits"
    )]
    LengthSchemeMismatch {
        header: u8,
        scheme: EpcSchemeName,
        expected: usize,
        actual: usize,
    },
}

fn check_width(field: &'static str, bits: &Bits, expected: usize) -> Result<(), EpcError> {
    if bits.len() != expected {
        return Err(EpcError::WidthMismatch {
            field,
            expected,
            actual: bits.len(),
        });
    }
    Ok(())
}

pub fn encode_epc(fields: &EpcFields) -> Result<Bits, EpcError> {
    let s = &fields.scheme;
    check_width("header", &fields.header, HEADER_BITS)?;
    check_width("manager_number", &fields.manager_number, s.manager_bits)?;
    check_width("object_class", &fields.object_class, s.class_bits)?;
    check_width("serial", &fields.serial, s.serial_bits)?;
    let header = fields.header.to_u64().expect("8 bits");
    if header != s.header as u64 {
        return Err(EpcError::HeaderMismatch {
            scheme: s.name,
            header,
            expected: s.header,
        });
    }
    let code = Bits::concat([
        &fields.header,
        &fields.manager_number,
        &fields.object_class,
        &fields.serial,
    ]);
    debug_assert_eq!(code.len(), s.total_bits());
    Ok(code)
}

/// Decodes against the shipped scheme table.
pub fn decode_epc(bits: &Bits) -> Result<EpcFields, EpcError> {
    decode_epc_with(bits, &SchemeTable::default())
}

pub fn decode_epc_with(bits: &Bits, table: &SchemeTable) -> Result<EpcFields, EpcError> {
    let len = bits.len();
    if !EpcSchemeName::ALL.iter().any(|n| n.total_bits() == len) {
        return Err(EpcError::InvalidLength(len));
    }
    let header = bits.slice(0, HEADER_BITS).to_u64().expect("8 bits") as u8;
    let scheme = *table
        .by_header(header)
        .ok_or(EpcError::UnknownHeader(header))?;
    if scheme.total_bits() != len {
        return Err(EpcError::LengthSchemeMismatch {
            header,
            scheme: scheme.name,
            expected: scheme.total_bits(),
            actual: len,
        });
    }
    let (m, c) = (scheme.manager_bits, scheme.class_bits);
    Ok(EpcFields {
        scheme,
        header: bits.slice(0, HEADER_BITS),
        manager_number: bits.slice(HEADER_BITS, m),
        object_class: bits.slice(HEADER_BITS + m, c),
        serial: bits.slice(HEADER_BITS + m + c, scheme.serial_bits),
    })
}

pub fn serial_capacity(scheme: &EpcScheme) -> usize {
    scheme.serial_bits
}

/// Bit offset and width of each field, in code order.
pub fn field_layout(scheme: &EpcScheme) -> [(&'static str, usize, usize); 4] {
    let (m, c) = (scheme.manager_bits, scheme.class_bits);
    [
        ("header", 0, HEADER_BITS),
        ("manager_number", HEADER_BITS, m),
        ("object_class", HEADER_BITS + m, c),
        ("serial", HEADER_BITS + m + c, scheme.serial_bits),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_fields(name: EpcSchemeName) -> EpcFields {
        let s = *SchemeTable::default().get(name);
        EpcFields::new(
            s,
            Bits::zeros(s.manager_bits),
            Bits::zeros(s.class_bits),
            Bits::zeros(s.serial_bits),
        )
    }

    #[test]
    fn zero_payload_epc96() {
        let code = encode_epc(&zero_fields(EpcSchemeName::Epc96)).unwrap();
        assert_eq!(code.len(), 96);
        assert_eq!(code.slice(0, 8).to_u64(), Some(0x30));
        assert!(code.slice(8, 88).is_zero());
    }

    #[test]
    fn epc198_serial_is_the_final_140_bits() {
        let mut f = zero_fields(EpcSchemeName::Epc198);
        f.serial = Bits::from_u128(u128::MAX, 128)
            .map(|low| {
                let mut s = Bits::zeros(12);
                s.extend_from(&low);
                s
            })
            .unwrap();
        let code = encode_epc(&f).unwrap();
        assert_eq!(code.len(), 198);
        assert_eq!(code.slice(58, 140), f.serial);
        assert_eq!(decode_epc(&code).unwrap(), f);
    }

    #[test]
    fn width_mismatch() {
        let mut f = zero_fields(EpcSchemeName::Epc64);
        f.object_class = Bits::zeros(9);
        assert_eq!(
            encode_epc(&f),
            Err(EpcError::WidthMismatch {
                field: "object_class",
                expected: 8,
                actual: 9
            })
        );
    }

    #[test]
    fn header_must_match_scheme() {
        let mut f = zero_fields(EpcSchemeName::Epc64);
        f.header = Bits::from_u64(0x30, 8).unwrap();
        assert!(matches!(
            encode_epc(&f),
            Err(EpcError::HeaderMismatch { .. })
        ));
    }

    #[test]
    fn cross_scheme_header() {
        let mut bits = Bits::zeros(96);
        let header = Bits::from_u64(0x36, 8).unwrap();
        for i in 0..8 {
            bits.set(i, header.get(i));
        }
        assert_eq!(
            decode_epc(&bits),
            Err(EpcError::LengthSchemeMismatch {
                header: 0x36,
                scheme: EpcSchemeName::Epc198,
                expected: 198,
                actual: 96
            })
        );
    }

    #[test]
    fn unknown_header_and_length() {
        assert_eq!(
            decode_epc(&Bits::zeros(96)),
            Err(EpcError::UnknownHeader(0))
        );
        assert_eq!(
            decode_epc(&Bits::zeros(97)),
            Err(EpcError::InvalidLength(97))
        );
    }

    #[test]
    fn capacities() {
        let t = SchemeTable::default();
        assert_eq!(serial_capacity(t.get(EpcSchemeName::Epc198)), 140);
        assert_eq!(serial_capacity(t.get(EpcSchemeName::Epc96)), 36);
        assert_eq!(serial_capacity(t.get(EpcSchemeName::Epc64)), 20);
    }

    #[test]
    fn layout_offsets_are_contiguous() {
        for s in SchemeTable::default().iter() {
            let layout = field_layout(s);
            let mut next = 0;
            for (_, offset, width) in layout {
                assert_eq!(offset, next);
                next += width;
            }
            assert_eq!(next, s.total_bits());
        }
    }
}
