//! Bank-addressed tag memory images.
//!
//! Banks use the block names of partitioned library tags: `01` holds the
//! EPC/UII, `11` is user memory, and `SYS` is an 8-bit system area holding
//! the AFI outside block 01. Every write is checked against the profile, so
//! an image can never exceed its tag's capacity. Images are values: writes
//! return a new image and leave the original untouched.
//!
//! Dump format, one line per written bank after a profile line:
//!
//! ```text
//! profile:ICODE_ILT
//! bank:01 len:198 hex:<right-aligned hex>
//! bank:11 len:112 hex:<hex>
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::Bits;
use crate::data_model::{Afi, TagProfile};

pub const SYSTEM_BANK_BITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BankId {
    Block01Epc,
    Block11User,
    System,
}

impl BankId {
    pub const ALL: [BankId; 3] = [BankId::Block01Epc, BankId::Block11User, BankId::System];

    pub fn as_str(self) -> &'static str {
        match self {
            BankId::Block01Epc => "01",
            BankId::Block11User => "11",
            BankId::System => "SYS",
        }
    }
}

impl fmt::Display for BankId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BankId {
    type Err = TagMemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "01" => Ok(BankId::Block01Epc),
            "11" => Ok(BankId::Block11User),
            "SYS" => Ok(BankId::System),
            other => Err(TagMemError::UnknownBank(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TagMemError {
    #[error("bank {bank} holds {capacity} bits, attempted {attempted}")]
    BankOverflow {
        bank: BankId,
        capacity: usize,
        attempted: usize,
    },
    #[error("unknown bank `{0}`")]
    UnknownBank(String),
    #[error("bank {0} has not been written")]
    BankEmpty(BankId),
    #[error("unknown profile `{0}`")]
    UnknownProfile(String),
    #[error("profile parse error: {0}")]
    ProfileParse(String),
    #[error("dump line {line}: {message}")]
    DumpParse { line: usize, message: String },
}

/// Bank capacity in bits, or `None` if the profile has no such bank.
pub fn bank_capacity(profile: &TagProfile, bank: BankId) -> Option<usize> {
    let bits = match bank {
        BankId::Block01Epc => profile.epc_block_bits,
        BankId::Block11User => profile.user_memory_bits,
        BankId::System => SYSTEM_BANK_BITS,
    };
    (bits > 0).then_some(bits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagImage {
    profile: TagProfile,
    banks: BTreeMap<BankId, Bits>,
}

impl TagImage {
    /// A blank image: no bank written.
    pub fn new(profile: TagProfile) -> Self {
        Self {
            profile,
            banks: BTreeMap::new(),
        }
    }

    pub fn profile(&self) -> &TagProfile {
        &self.profile
    }

    pub fn write_bank(&self, bank: BankId, bits: Bits) -> Result<TagImage, TagMemError> {
        let capacity = bank_capacity(&self.profile, bank)
            .ok_or_else(|| TagMemError::UnknownBank(bank.to_string()))?;
        if bits.len() > capacity {
            return Err(TagMemError::BankOverflow {
                bank,
                capacity,
                attempted: bits.len(),
            });
        }
        let mut next = self.clone();
        next.banks.insert(bank, bits);
        Ok(next)
    }

    pub fn read_bank(&self, bank: BankId) -> Result<&Bits, TagMemError> {
        if bank_capacity(&self.profile, bank).is_none() {
            return Err(TagMemError::UnknownBank(bank.to_string()));
        }
        self.banks.get(&bank).ok_or(TagMemError::BankEmpty(bank))
    }

    /// Returns the image with `bank` erased.
    pub fn clear_bank(&self, bank: BankId) -> TagImage {
        let mut next = self.clone();
        next.banks.remove(&bank);
        next
    }

    pub fn banks(&self) -> impl Iterator<Item = (BankId, &Bits)> {
        self.banks.iter().map(|(k, v)| (*k, v))
    }

    /// AFI held in the system area, if any.
    pub fn afi_mirror(&self) -> Option<Afi> {
        self.banks
            .get(&BankId::System)
            .and_then(|b| b.to_u64())
            .map(|v| Afi(v as u8))
    }

    pub fn to_dump(&self) -> String {
        let mut out = format!("profile:{}\n", self.profile.name);
        for (bank, bits) in &self.banks {
            out.push_str(&format!(
                "bank:{} len:{} hex:{}\n",
                bank,
                bits.len(),
                bits.to_hex()
            ));
        }
        out
    }

    /// Parses [`TagImage::to_dump`] output. Blank lines and `#` comments are
    /// ignored.
    pub fn parse_dump(text: &str, profiles: &ProfileTable) -> Result<TagImage, TagMemError> {
        let mut image: Option<TagImage> = None;
        let mut seen_any = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            seen_any = true;
            let err = |message: String| TagMemError::DumpParse { line, message };
            if let Some(name) = l.strip_prefix("profile:") {
                if image.is_some() {
                    return Err(err("duplicate profile line".into()));
                }
                image = Some(TagImage::new(profiles.get(name.trim())?.clone()));
                continue;
            }
            let current = image
                .as_ref()
                .ok_or_else(|| err("expected `profile:<name>` before bank lines".into()))?;
            let mut parts = l.split_whitespace();
            let (Some(b), Some(n), Some(h), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(err(format!(
                    "expected `bank:<id> len:<bits> hex:<data>`, got `{l}`"
                )));
            };
            let field = |part: &str, key: &str| {
                part.strip_prefix(key)
                    .map(str::to_string)
                    .ok_or_else(|| err(format!("expected `{key}` field, got `{part}`")))
            };
            let bank: BankId = field(b, "bank:")?.parse()?;
            let len: usize = field(n, "len:")?
                .parse()
                .map_err(|_| err(format!("bad bit length in `{n}`")))?;
            let bits = Bits::from_hex(&field(h, "hex:")?, len).map_err(|e| err(e.to_string()))?;
            if current.banks.contains_key(&bank) {
                return Err(err(format!("bank {bank} listed twice")));
            }
            image = Some(current.write_bank(bank, bits)?);
        }
        match image {
            Some(img) => Ok(img),
            None if seen_any => Err(TagMemError::DumpParse {
                line: 1,
                message: "missing profile line".into(),
            }),
            None => Err(TagMemError::DumpParse {
                line: 0,
                message: "empty dump".into(),
            }),
        }
    }
}

/// Named tag profiles. Ships ICODE_ILT and GENERIC_UHF_TYPEC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileTable {
    profiles: BTreeMap<String, TagProfile>,
}

impl Default for ProfileTable {
    fn default() -> Self {
        let mut profiles = BTreeMap::new();
        for p in [TagProfile::icode_ilt(), TagProfile::generic_uhf_typec()] {
            profiles.insert(p.name.clone(), p);
        }
        Self { profiles }
    }
}

impl ProfileTable {
    pub fn get(&self, name: &str) -> Result<&TagProfile, TagMemError> {
        self.profiles
            .get(name)
            .ok_or_else(|| TagMemError::UnknownProfile(name.to_string()))
    }

    /// Adds or replaces a profile by name.
    pub fn insert(&mut self, profile: TagProfile) {
        self.profiles.insert(profile.name.clone(), profile);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.profiles.keys().map(String::as_str)
    }
}

/// A shipped profile by name.
pub fn load_profile(name: &str) -> Result<TagProfile, TagMemError> {
    ProfileTable::default().get(name).cloned()
}

/// A profile from a TOML file with the [`TagProfile`] keys.
pub fn load_profile_file(path: &Path) -> Result<TagProfile, TagMemError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| TagMemError::ProfileParse(e.to_string()))?;
    parse_profile(&text)
}

pub fn parse_profile(text: &str) -> Result<TagProfile, TagMemError> {
    toml::from_str(text).map_err(|e| TagMemError::ProfileParse(e.to_string()))
}
