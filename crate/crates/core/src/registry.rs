//! Lookup tables consulted by the codecs.
//!
//! Both formats are UTF-8 CSV with a required header row; `#` lines are
//! comments:
//!
//! ```text
//! system,code,numeric_id
//! ONIX,BC,257
//!
//! manager_hex,width_bits,name
//! 0012345,28,Example Publishing House
//! ```
//!
//! Loading validates every invariant and rejects duplicate keys. Writing
//! back with `to_csv` is canonical, so load, write, load is a fixpoint.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::bits::Bits;
use crate::data_model::{PublicationSystem, PublicationType};

pub const PUBLICATION_HEADER: [&str; 3] = ["system", "code", "numeric_id"];
pub const MANAGER_HEADER: [&str; 3] = ["manager_hex", "width_bits", "name"];

/// Illustrative, non-normative tables bundled with the crate.
pub const SHIPPED_PUBLICATION_TYPES: &str = include_str!("../data/publication_types.csv");
pub const SHIPPED_MANAGERS: &str = include_str!("../data/managers.csv");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: duplicate key {key}")]
    DuplicateKey { line: u64, key: String },
    #[error("line {line}: value {value} does not fit in {width} bits")]
    WidthOverflow {
        line: u64,
        value: String,
        width: usize,
    },
    #[error("{0} is not registered")]
    NotRegistered(String),
    #[error("io: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegistryKind {
    PublicationTypes,
    Managers,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Registry {
    PublicationTypes(PublicationTypeRegistry),
    Managers(ManagerDirectory),
}

/// Loads a registry file. `class_bits` bounds publication numeric ids.
pub fn load_registry(
    path: &Path,
    kind: RegistryKind,
    class_bits: usize,
) -> Result<Registry, RegistryError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RegistryError::Io(format!("{}: {e}", path.display())))?;
    Ok(match kind {
        RegistryKind::PublicationTypes => {
            Registry::PublicationTypes(PublicationTypeRegistry::from_csv(&text, class_bits)?)
        }
        RegistryKind::Managers => Registry::Managers(ManagerDirectory::from_csv(&text)?),
    })
}

fn rows(text: &str, header: [&str; 3]) -> Result<Vec<(u64, [String; 3])>, RegistryError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let found = reader.headers().map_err(|e| RegistryError::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if found.iter().collect::<Vec<_>>() != header {
        return Err(RegistryError::Parse {
            line: 1,
            message: format!(
                "expected header `{}`, found `{}`",
                header.join(","),
                found.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| RegistryError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 3 {
            return Err(RegistryError::Parse {
                line,
                message: format!("expected 3 columns, got {}", rec.len()),
            });
        }
        out.push((
            line,
            [rec[0].to_string(), rec[1].to_string(), rec[2].to_string()],
        ));
    }
    Ok(out)
}

fn parse_number(line: u64, s: &str) -> Result<u64, RegistryError> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| RegistryError::Parse {
        line,
        message: format!("bad number `{s}`"),
    })
}

/// UNIMARC/ONIX publication-type codes and their object-class ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PublicationTypeRegistry {
    class_bits: usize,
    entries: BTreeMap<(PublicationSystem, String), u64>,
    reverse: BTreeMap<u64, (PublicationSystem, String)>,
}

impl PublicationTypeRegistry {
    pub fn empty(class_bits: usize) -> Self {
        Self {
            class_bits,
            ..Default::default()
        }
    }

    pub fn shipped(class_bits: usize) -> Self {
        Self::from_csv(SHIPPED_PUBLICATION_TYPES, class_bits)
            .expect("shipped publication registry is valid")
    }

    pub fn from_csv(text: &str, class_bits: usize) -> Result<Self, RegistryError> {
        let mut reg = Self::empty(class_bits);
        for (line, [system, code, id]) in rows(text, PUBLICATION_HEADER)? {
            let system: PublicationSystem = system
                .parse()
                .map_err(|message| RegistryError::Parse { line, message })?;
            if code.is_empty() {
                return Err(RegistryError::Parse {
                    line,
                    message: "empty code".into(),
                });
            }
            let numeric_id = parse_number(line, &id)?;
            reg.insert_at(
                line,
                PublicationType {
                    system,
                    code,
                    numeric_id,
                },
            )?;
        }
        Ok(reg)
    }

    pub fn insert(&mut self, p: PublicationType) -> Result<(), RegistryError> {
        self.insert_at(0, p)
    }

    fn insert_at(&mut self, line: u64, p: PublicationType) -> Result<(), RegistryError> {
        if self.class_bits < 64 && p.numeric_id >> self.class_bits != 0 {
            return Err(RegistryError::WidthOverflow {
                line,
                value: p.numeric_id.to_string(),
                width: self.class_bits,
            });
        }
        let key = (p.system, p.code.clone());
        if self.entries.contains_key(&key) {
            return Err(RegistryError::DuplicateKey {
                line,
                key: format!("{},{}", p.system, p.code),
            });
        }
        if self.reverse.contains_key(&p.numeric_id) {
            return Err(RegistryError::DuplicateKey {
                line,
                key: format!("numeric_id {}", p.numeric_id),
            });
        }
        self.entries.insert(key.clone(), p.numeric_id);
        self.reverse.insert(p.numeric_id, key);
        Ok(())
    }

    pub fn class_bits(&self) -> usize {
        self.class_bits
    }

    pub fn lookup(&self, system: PublicationSystem, code: &str) -> Result<u64, RegistryError> {
        self.entries
            .get(&(system, code.to_string()))
            .copied()
            .ok_or_else(|| RegistryError::NotRegistered(format!("{system},{code}")))
    }

    pub fn reverse_lookup(&self, numeric_id: u64) -> Result<PublicationType, RegistryError> {
        self.reverse
            .get(&numeric_id)
            .map(|(system, code)| PublicationType {
                system: *system,
                code: code.clone(),
                numeric_id,
            })
            .ok_or_else(|| RegistryError::NotRegistered(format!("numeric_id {numeric_id}")))
    }

    /// True if `p` is registered under exactly this id.
    pub fn contains(&self, p: &PublicationType) -> bool {
        self.lookup(p.system, &p.code).ok() == Some(p.numeric_id)
    }

    pub fn iter(&self) -> impl Iterator<Item = PublicationType> + '_ {
        self.reverse
            .iter()
            .map(|(id, (system, code))| PublicationType {
                system: *system,
                code: code.clone(),
                numeric_id: *id,
            })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical CSV, ordered by numeric id.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", PUBLICATION_HEADER.join(","));
        for p in self.iter() {
            out.push_str(&format!(
                "{},{},{}\n",
                p.system,
                csv_field(&p.code),
                p.numeric_id
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '#']) || s.trim() != s {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Manager numbers and the organizations that own them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ManagerDirectory {
    entries: BTreeMap<Bits, String>,
}

impl ManagerDirectory {
    pub fn shipped() -> Self {
        Self::from_csv(SHIPPED_MANAGERS).expect("shipped manager directory is valid")
    }

    pub fn from_csv(text: &str) -> Result<Self, RegistryError> {
        let mut dir = Self::default();
        for (line, [hex_value, width, name]) in rows(text, MANAGER_HEADER)? {
            let width: usize = width.parse().map_err(|_| RegistryError::Parse {
                line,
                message: format!("bad width `{width}`"),
            })?;
            if width == 0 || width > 64 {
                return Err(RegistryError::Parse {
                    line,
                    message: format!("width {width} outside 1..=64"),
                });
            }
            let value = u64::from_str_radix(&hex_value, 16).map_err(|_| RegistryError::Parse {
                line,
                message: format!("bad hex `{hex_value}`"),
            })?;
            let key = Bits::from_u64(value, width).map_err(|_| RegistryError::WidthOverflow {
                line,
                value: hex_value.clone(),
                width,
            })?;
            if dir.entries.contains_key(&key) {
                return Err(RegistryError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            dir.entries.insert(key, name);
        }
        Ok(dir)
    }

    pub fn lookup(&self, manager_number: &Bits) -> Option<&str> {
        self.entries.get(manager_number).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Bits, &str)> {
        self.entries.iter().map(|(k, v)| (k, v.as_str()))
    }

    /// Canonical CSV, ordered by width then value.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", MANAGER_HEADER.join(","));
        let mut keys: Vec<_> = self.entries.iter().collect();
        keys.sort_by_key(|(k, _)| (k.len(), k.to_u64()));
        for (k, name) in keys {
            out.push_str(&format!("{},{},{}\n", k.to_hex(), k.len(), csv_field(name)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLASS_BITS: usize = 22;

    #[test]
    fn distinct_rows_load() {
        let r = PublicationTypeRegistry::from_csv(
            "system,code,numeric_id\nONIX,BB,257\nONIX,BC,258\n",
            CLASS_BITS,
        )
        .unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.lookup(PublicationSystem::Onix, "BC"), Ok(258));
        let back = r.reverse_lookup(258).unwrap();
        assert_eq!(
            (back.system, back.code.as_str()),
            (PublicationSystem::Onix, "BC")
        );
        assert!(matches!(
            r.reverse_lookup(7),
            Err(RegistryError::NotRegistered(_))
        ));
        assert!(matches!(
            r.lookup(PublicationSystem::Unimarc, "a"),
            Err(RegistryError::NotRegistered(_))
        ));
    }

    #[test]
    fn duplicate_numeric_id() {
        let e = PublicationTypeRegistry::from_csv(
            "system,code,numeric_id\nONIX,BB,257\nUNIMARC,a,257\n",
            CLASS_BITS,
        )
        .unwrap_err();
        assert_eq!(
            e,
            RegistryError::DuplicateKey {
                line: 3,
                key: "numeric_id 257".into()
            }
        );
        let e = PublicationTypeRegistry::from_csv(
            "system,code,numeric_id\nONIX,BB,1\nONIX,BB,2\n",
            CLASS_BITS,
        )
        .unwrap_err();
        assert!(matches!(e, RegistryError::DuplicateKey { line: 3, .. }));
    }

    #[test]
    fn numeric_id_width_boundary() {
        let max = (1u64 << CLASS_BITS) - 1;
        let ok = format!("system,code,numeric_id\nONIX,BB,{max}\n");
        assert!(PublicationTypeRegistry::from_csv(&ok, CLASS_BITS).is_ok());
        let over = format!("system,code,numeric_id\nONIX,BB,{}\n", max + 1);
        assert!(matches!(
            PublicationTypeRegistry::from_csv(&over, CLASS_BITS),
            Err(RegistryError::WidthOverflow {
                line: 2,
                width: 22,
                ..
            })
        ));
    }

    #[test]
    fn header_and_row_errors() {
        assert!(matches!(
            PublicationTypeRegistry::from_csv("a,b,c\n", CLASS_BITS),
            Err(RegistryError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            PublicationTypeRegistry::from_csv("system,code,numeric_id\nMARC21,x,1\n", CLASS_BITS),
            Err(RegistryError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PublicationTypeRegistry::from_csv("system,code,numeric_id\nONIX,x,one\n", CLASS_BITS),
            Err(RegistryError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PublicationTypeRegistry::from_csv("system,code,numeric_id\nONIX,x\n", CLASS_BITS),
            Err(RegistryError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn shipped_tables_are_fixpoints() {
        let p = PublicationTypeRegistry::shipped(CLASS_BITS);
        assert!(p.len() >= 12);
        let again = PublicationTypeRegistry::from_csv(&p.to_csv(), CLASS_BITS).unwrap();
        assert_eq!(again, p);
        assert_eq!(again.to_csv(), p.to_csv());

        let m = ManagerDirectory::shipped();
        assert!(m.len() >= 12);
        let again = ManagerDirectory::from_csv(&m.to_csv()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn manager_directory() {
        let d =
            ManagerDirectory::from_csv("manager_hex,width_bits,name\n0012345,28,\"Acme, Ltd\"\n")
                .unwrap();
        let key = Bits::from_u64(0x12345, 28).unwrap();
        assert_eq!(d.lookup(&key), Some("Acme, Ltd"));
        assert_eq!(ManagerDirectory::from_csv(&d.to_csv()).unwrap(), d);
        assert!(matches!(
            ManagerDirectory::from_csv("manager_hex,width_bits,name\n1ff,8,x\n"),
            Err(RegistryError::WidthOverflow { line: 2, .. })
        ));
        assert!(matches!(
            ManagerDirectory::from_csv("manager_hex,width_bits,name\n01,8,x\n1,8,y\n"),
            Err(RegistryError::DuplicateKey { line: 3, .. })
        ));
    }
}
