//! URN Code 40 text compaction.
//!
//! Three characters from a 40-symbol repertoire pack into one 16-bit group
//! as `v1 * 1600 + v2 * 40 + v3 + 1`, stored big-endian. Short final
//! triples are filled with the pad symbol (value 0). The `+ 1` keeps an
//! all-zero group out of the code space, so erased memory never decodes as
//! text.

use std::fmt;
use std::path::Path;

use thiserror::Error;

/// Longest text accepted by [`encode_code40`] (16 groups, 32 bytes).
pub const MAX_TEXT_CHARS: usize = 48;
pub const SYMBOL_COUNT: usize = 40;
/// Largest group value the packing can emit.
pub const MAX_GROUP_VALUE: u16 = 39 * 1600 + 39 * 40 + 39 + 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Code40Error {
    #[error("character {ch:?} at position {position} is outside the Code 40 repertoire")]
    CharacterOutOfRepertoire { ch: char, position: usize },
    #[error("input of {len} characters exceeds the {MAX_TEXT_CHARS}-character limit")]
    InputTooLong { len: usize },
    #[error("Code 40 input has odd length {len}")]
    OddLengthInput { len: usize },
    #[error("group {group} has value {value}, outside 1..={MAX_GROUP_VALUE}")]
    GroupValueOutOfRange { group: usize, value: u16 },
    #[error("pad symbol inside the text at group {group}")]
    EmbeddedPad { group: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("alphabet has {0} entries, expected {SYMBOL_COUNT}")]
    WrongSize(usize),
    #[error("value {0} is assigned twice")]
    DuplicateValue(u8),
    #[error("character {0:?} is assigned twice")]
    DuplicateChar(char),
    #[error("io: {0}")]
    Io(String),
}

/// Bijection between symbol values 0..40 and characters. Value 0 is pad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code40Alphabet {
    table: [char; SYMBOL_COUNT],
}

impl Default for Code40Alphabet {
    /// pad (space), `a`-`z`, `0`-`9`, `-`, `:`, `.`
    fn default() -> Self {
        let mut table = [' '; SYMBOL_COUNT];
        let chars = ('a'..='z').chain('0'..='9').chain(['-', ':', '.']);
        for (slot, c) in table[1..].iter_mut().zip(chars) {
            *slot = c;
        }
        Self { table }
    }
}

impl Code40Alphabet {
    pub fn from_table(table: [char; SYMBOL_COUNT]) -> Result<Self, AlphabetError> {
        for (i, c) in table.iter().enumerate() {
            if table[..i].contains(c) {
                return Err(AlphabetError::DuplicateChar(*c));
            }
        }
        Ok(Self { table })
    }

    /// Parses 40 lines of `value<TAB>character`. Blank lines and `#`
    /// comments are skipped.
    pub fn parse(text: &str) -> Result<Self, AlphabetError> {
        let mut slots: [Option<char>; SYMBOL_COUNT] = [None; SYMBOL_COUNT];
        let mut count = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (value, ch) = raw.split_once('\t').ok_or_else(|| AlphabetError::Parse {
                line,
                message: "expected `value<TAB>character`".into(),
            })?;
            let value: u8 = value.trim().parse().map_err(|_| AlphabetError::Parse {
                line,
                message: format!("bad value `{value}`"),
            })?;
            if value as usize >= SYMBOL_COUNT {
                return Err(AlphabetError::Parse {
                    line,
                    message: format!("value {value} outside 0..{SYMBOL_COUNT}"),
                });
            }
            let mut chars = ch.chars();
            let c = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(AlphabetError::Parse {
                        line,
                        message: format!("expected exactly one character, got {ch:?}"),
                    })
                }
            };
            if slots[value as usize].replace(c).is_some() {
                return Err(AlphabetError::DuplicateValue(value));
            }
            count += 1;
        }
        if count != SYMBOL_COUNT {
            return Err(AlphabetError::WrongSize(count));
        }
        let table = slots.map(|c| c.expect("all 40 values present"));
        Self::from_table(table)
    }

    pub fn load(path: &Path) -> Result<Self, AlphabetError> {
        let text = std::fs::read_to_string(path).map_err(|e| AlphabetError::Io(e.to_string()))?;
        Self::parse(&text)
    }

    /// Canonical override-file rendering.
    pub fn to_file_string(&self) -> String {
        self.table
            .iter()
            .enumerate()
            .map(|(v, c)| format!("{v}\t{c}\n"))
            .collect()
    }

    pub fn pad_char(&self) -> char {
        self.table[0]
    }

    pub fn char_of(&self, value: u8) -> Option<char> {
        self.table.get(value as usize).copied()
    }

    /// Symbol value of a text character. Matching is case-insensitive for
    /// ASCII letters; the pad character is not a text character.
    pub fn value_of(&self, c: char) -> Option<u8> {
        let find = |c: char| {
            self.table[1..]
                .iter()
                .position(|&t| t == c)
                .map(|p| p as u8 + 1)
        };
        find(c)
            .or_else(|| find(c.to_ascii_lowercase()))
            .or_else(|| find(c.to_ascii_uppercase()))
    }

    pub fn contains_text_char(&self, c: char) -> bool {
        self.value_of(c).is_some()
    }
}

/// The 16-bit value of one symbol triple.
pub fn pack_group(v1: u8, v2: u8, v3: u8) -> u16 {
    v1 as u16 * 1600 + v2 as u16 * 40 + v3 as u16 + 1
}

pub fn unpack_group(group: u16) -> Option<[u8; 3]> {
    if group == 0 || group > MAX_GROUP_VALUE {
        return None;
    }
    let v = group - 1;
    Some([(v / 1600) as u8, (v / 40 % 40) as u8, (v % 40) as u8])
}

/// Packs `text` into `2 * ceil(len / 3)` bytes.
pub fn encode_code40(text: &str, alphabet: &Code40Alphabet) -> Result<Vec<u8>, Code40Error> {
    let len = text.chars().count();
    if len > MAX_TEXT_CHARS {
        return Err(Code40Error::InputTooLong { len });
    }
    let values = text
        .chars()
        .enumerate()
        .map(|(position, ch)| {
            alphabet
                .value_of(ch)
                .ok_or(Code40Error::CharacterOutOfRepertoire { ch, position })
        })
        .collect::<Result<Vec<u8>, _>>()?;

    let mut out = Vec::with_capacity(len.div_ceil(3) * 2);
    for triple in values.chunks(3) {
        let at = |i: usize| triple.get(i).copied().unwrap_or(0);
        out.extend_from_slice(&pack_group(at(0), at(1), at(2)).to_be_bytes());
    }
    Ok(out)
}

/// Inverse of [`encode_code40`].
///
/// Trailing all-zero groups read as erased memory and end the text; a zero
/// group followed by a non-zero one is an embedded pad.
pub fn decode_code40(bytes: &[u8], alphabet: &Code40Alphabet) -> Result<String, Code40Error> {
    if !bytes.len().is_multiple_of(2) {
        return Err(Code40Error::OddLengthInput { len: bytes.len() });
    }
    let groups: Vec<u16> = bytes
        .chunks(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]))
        .collect();
    let Some(last) = groups.iter().rposition(|&g| g != 0) else {
        return Ok(String::new());
    };

    let mut text = String::with_capacity((last + 1) * 3);
    for (index, &group) in groups[..=last].iter().enumerate() {
        if group == 0 {
            return Err(Code40Error::EmbeddedPad { group: index });
        }
        let symbols = unpack_group(group).ok_or(Code40Error::GroupValueOutOfRange {
            group: index,
            value: group,
        })?;
        // pad only as a trailing fill of the final group
        let is_last = index == last;
        let mut seen_pad = false;
        for (pos, &v) in symbols.iter().enumerate() {
            if v == 0 {
                if !is_last || pos == 0 {
                    return Err(Code40Error::EmbeddedPad { group: index });
                }
                seen_pad = true;
            } else if seen_pad {
                return Err(Code40Error::EmbeddedPad { group: index });
            } else {
                text.push(alphabet.char_of(v).expect("symbol value < 40"));
            }
        }
    }
    Ok(text)
}

impl fmt::Display for Code40Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.table[1..].iter().collect();
        write!(f, "[pad {:?}] {}", self.pad_char(), s)
    }
}
