//! Length-exact bit strings.
//!
//! EPC codes are not byte aligned (a 198-bit code spans 25 bytes with two
//! bits to spare), so every field and bank payload is carried as a [`Bits`]
//! value that knows its true length. Bits are stored most significant first.
//!
//! The external rendering is `<bitlen>:<hex>`. The hex part is the value
//! right-aligned in the smallest whole number of bytes, so any padding bits
//! are leading zeros: a 198-bit code renders as `198:` followed by 50 hex
//! digits whose top two bits are padding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("value {value:#x} does not fit in {width} bits")]
    ValueTooWide { value: u128, width: usize },
    #[error("malformed bit string `{0}`: expected `<bitlen>:<hex>`")]
    Malformed(String),
    #[error(
        "bit string declares {len} bits but carries {digits} hex digits (expected {expected})"
    )]
    DigitCount {
        len: usize,
        digits: usize,
        expected: usize,
    },
    #[error("bit string declares {len} bits but its padding bits are not zero")]
    NonZeroPadding { len: usize },
    #[error("invalid hex: {0}")]
    Hex(String),
}

/// An owned, length-exact bit string.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    // left-aligned; bits past `len` in the last byte are always zero
    bytes: Vec<u8>,
}

impl Bits {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            bytes: vec![0; len.div_ceil(8)],
        }
    }

    /// Whole bytes, in order; the length is `8 * bytes.len()`.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self {
            len: bytes.len() * 8,
            bytes: bytes.to_vec(),
        }
    }

    /// `width` low-order bits of `value`, most significant first.
    pub fn from_u128(value: u128, width: usize) -> Result<Self, BitsError> {
        if width < 128 && value >> width != 0 {
            return Err(BitsError::ValueTooWide { value, width });
        }
        let mut out = Self::zeros(width);
        for i in 0..width.min(128) {
            if (value >> i) & 1 == 1 {
                out.set(width - 1 - i, true);
            }
        }
        Ok(out)
    }

    pub fn from_u64(value: u64, width: usize) -> Result<Self, BitsError> {
        Self::from_u128(value as u128, width)
    }

    /// Numeric value, if the string is at most 128 bits long.
    pub fn to_u128(&self) -> Option<u128> {
        if self.len > 128 {
            return None;
        }
        Some(self.iter().fold(0u128, |acc, b| (acc << 1) | b as u128))
    }

    pub fn to_u64(&self) -> Option<u64> {
        if self.len > 64 {
            return None;
        }
        self.to_u128().map(|v| v as u64)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.bytes.iter().all(|&b| b == 0)
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(
            index < self.len,
            "bit index {index} out of range {}",
            self.len
        );
        self.bytes[index / 8] & (0x80 >> (index % 8)) != 0
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(
            index < self.len,
            "bit index {index} out of range {}",
            self.len
        );
        let mask = 0x80 >> (index % 8);
        if value {
            self.bytes[index / 8] |= mask;
        } else {
            self.bytes[index / 8] &= !mask;
        }
    }

    pub fn flip(&mut self, index: usize) {
        let v = self.get(index);
        self.set(index, !v);
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    pub fn extend_from(&mut self, other: &Bits) {
        if self.len.is_multiple_of(8) {
            self.bytes.extend_from_slice(&other.bytes);
            self.len += other.len;
        } else {
            for bit in other.iter() {
                self.push(bit);
            }
        }
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Bits>) -> Bits {
        let mut out = Bits::new();
        for p in parts {
            out.extend_from(p);
        }
        out
    }

    /// Copy of `len` bits starting at `start`.
    pub fn slice(&self, start: usize, len: usize) -> Bits {
        assert!(
            start + len <= self.len,
            "slice {start}+{len} out of range {}",
            self.len
        );
        let mut out = Bits::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Left-aligned byte view. Returns `None` unless the length is a whole
    /// number of bytes.
    pub fn as_bytes(&self) -> Option<&[u8]> {
        self.len.is_multiple_of(8).then_some(&self.bytes[..])
    }

    /// Right-aligned bytes: the value left-padded with zero bits to the next
    /// byte boundary.
    pub fn to_padded_bytes(&self) -> Vec<u8> {
        let pad = self.bytes.len() * 8 - self.len;
        let mut padded = Bits::zeros(pad);
        padded.extend_from(self);
        padded.bytes
    }

    /// Inverse of [`Bits::to_padded_bytes`].
    pub fn from_padded_bytes(bytes: &[u8], len: usize) -> Result<Self, BitsError> {
        let expected = len.div_ceil(8);
        if bytes.len() != expected {
            return Err(BitsError::DigitCount {
                len,
                digits: bytes.len() * 2,
                expected: expected * 2,
            });
        }
        let all = Bits::from_bytes(bytes);
        let pad = expected * 8 - len;
        if !all.slice(0, pad).is_zero() {
            return Err(BitsError::NonZeroPadding { len });
        }
        Ok(all.slice(pad, len))
    }

    /// Lowercase right-aligned hex, without the length prefix.
    pub fn to_hex(&self) -> String {
        hex::encode(self.to_padded_bytes())
    }

    pub fn from_hex(hex_digits: &str, len: usize) -> Result<Self, BitsError> {
        let expected = len.div_ceil(8) * 2;
        if hex_digits.len() != expected {
            return Err(BitsError::DigitCount {
                len,
                digits: hex_digits.len(),
                expected,
            });
        }
        let bytes = hex::decode(hex_digits).map_err(|e| BitsError::Hex(e.to_string()))?;
        Self::from_padded_bytes(&bytes, len)
    }

    /// Binary digits, for annotated dumps.
    pub fn to_binary_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.len, self.to_hex())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

impl FromStr for Bits {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (len, digits) = s
            .split_once(':')
            .ok_or_else(|| BitsError::Malformed(s.to_string()))?;
        let len: usize = len
            .trim()
            .parse()
            .map_err(|_| BitsError::Malformed(s.to_string()))?;
        Bits::from_hex(digits.trim(), len)
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_198_bits_with_two_padding_bits() {
        let mut b = Bits::zeros(198);
        b.set(0, true);
        let s = b.to_string();
        assert_eq!(&s[..4], "198:");
        assert_eq!(s.len() - 4, 50);
        // the first real bit sits just after two padding bits
        assert!(s[4..].starts_with("2"));
    }

    #[test]
    fn numeric_round_trip() {
        let b = Bits::from_u64(0x2F, 8).unwrap();
        assert_eq!(b.to_string(), "8:2f");
        assert_eq!(b.to_u64(), Some(0x2F));
        assert!(Bits::from_u64(256, 8).is_err());
        assert_eq!(Bits::from_u64(5, 3).unwrap().to_binary_string(), "101");
    }

    #[test]
    fn rejects_nonzero_padding() {
        assert!(matches!(
            "6:ff".parse::<Bits>(),
            Err(BitsError::NonZeroPadding { len: 6 })
        ));
        assert!(matches!(
            "8:fff".parse::<Bits>(),
            Err(BitsError::DigitCount { .. })
        ));
        assert!("nonsense".parse::<Bits>().is_err());
    }

    #[test]
    fn zero_length() {
        let b: Bits = "0:".parse().unwrap();
        assert!(b.is_empty());
        assert_eq!(b.to_string(), "0:");
    }

    proptest! {
        #[test]
        fn text_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..260)) {
            let mut b = Bits::new();
            for bit in &bits {
                b.push(*bit);
            }
            let parsed: Bits = b.to_string().parse().unwrap();
            prop_assert_eq!(&parsed, &b);
            prop_assert_eq!(parsed.iter().collect::<Vec<_>>(), bits);
        }

        #[test]
        fn slice_of_concat(a in 0u64..1 << 20, b in any::<u64>()) {
            let x = Bits::from_u64(a, 20).unwrap();
            let y = Bits::from_u64(b, 64).unwrap();
            let joined = Bits::concat([&x, &y]);
            prop_assert_eq!(joined.len(), 84);
            prop_assert_eq!(joined.slice(0, 20), x);
            prop_assert_eq!(joined.slice(20, 64), y);
        }
    }
}
