//! Table-driven configuration shared by the codecs.
//!
//! Shipped defaults are embedded. A registry directory can override any of
//! them with these optional files:
//!
//! - `config.toml`: scheme widths and headers, tag profiles, AFI values
//! - `publication_types.csv`, `managers.csv`: see [`crate::registry`]
//! - `alphabet.tsv`: Code 40 table, see [`crate::code40`]
//!
//! `config.toml` keys, all optional:
//!
//! ```toml
//! default_afi = 0xC2             # AFI given to records read from a fixed block
//!
//! [stage_afi]
//! PUBLISHER_TAGGED = 0x00
//! LIBRARY_ACCESSIONED = 0xC2
//! EXTERNAL_TRANSIT = 0x00
//!
//! [schemes.EPC96]                # any of EPC64, EPC96, EPC198
//! header = 0x30
//! manager_bits = 28
//! class_bits = 24
//! serial_bits = 36
//!
//! [profiles.MY_TAG]              # adds or replaces a profile
//! band = "UHF_TYPEC"             # or "HF_MODE3"
//! epc_block_bits = 256
//! user_memory_bits = 512
//! afi_location = "SYSTEM_AREA"   # or "IN_EPC_BLOCK"
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::code40::{AlphabetError, Code40Alphabet};
use crate::data_model::{
    Afi, AfiLocation, Band, EpcScheme, EpcSchemeName, SchemeTable, SchemeTableError, TagProfile,
};
use crate::fixed::DEFAULT_AFI;
use crate::registry::{ManagerDirectory, PublicationTypeRegistry, RegistryError};
use crate::tagmem::ProfileTable;

pub const CONFIG_FILE: &str = "config.toml";
pub const PUBLICATION_FILE: &str = "publication_types.csv";
pub const MANAGER_FILE: &str = "managers.csv";
pub const ALPHABET_FILE: &str = "alphabet.tsv";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{file}: {message}")]
    Parse { file: String, message: String },
    #[error(transparent)]
    Schemes(#[from] SchemeTableError),
    #[error("{file}: {source}")]
    Registry {
        file: String,
        #[source]
        source: RegistryError,
    },
    #[error("{file}: {source}")]
    Alphabet {
        file: String,
        #[source]
        source: AlphabetError,
    },
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
}

/// AFI written at each lifecycle stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageAfis {
    pub publisher_tagged: Afi,
    pub library_accessioned: Afi,
    pub external_transit: Afi,
}

impl Default for StageAfis {
    fn default() -> Self {
        Self {
            publisher_tagged: Afi(0x00),
            library_accessioned: Afi(0xC2),
            external_transit: Afi(0x00),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodecConfig {
    pub schemes: SchemeTable,
    pub profiles: ProfileTable,
    pub alphabet: Code40Alphabet,
    pub publications: PublicationTypeRegistry,
    pub managers: ManagerDirectory,
    pub stage_afi: StageAfis,
    pub default_afi: Afi,
}

impl Default for CodecConfig {
    fn default() -> Self {
        let schemes = SchemeTable::default();
        let class_bits = schemes.get(EpcSchemeName::Epc198).class_bits;
        Self {
            schemes,
            profiles: ProfileTable::default(),
            alphabet: Code40Alphabet::default(),
            publications: PublicationTypeRegistry::shipped(class_bits),
            managers: ManagerDirectory::shipped(),
            stage_afi: StageAfis::default(),
            default_afi: DEFAULT_AFI,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    default_afi: Option<u8>,
    #[serde(default)]
    stage_afi: StageAfiFile,
    #[serde(default)]
    schemes: BTreeMap<EpcSchemeName, SchemeOverride>,
    #[serde(default)]
    profiles: BTreeMap<String, ProfileFile>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct StageAfiFile {
    #[serde(rename = "PUBLISHER_TAGGED")]
    publisher_tagged: Option<u8>,
    #[serde(rename = "LIBRARY_ACCESSIONED")]
    library_accessioned: Option<u8>,
    #[serde(rename = "EXTERNAL_TRANSIT")]
    external_transit: Option<u8>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeOverride {
    header: Option<u8>,
    manager_bits: Option<usize>,
    class_bits: Option<usize>,
    serial_bits: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    band: Band,
    epc_block_bits: usize,
    user_memory_bits: usize,
    afi_location: AfiLocation,
}

impl CodecConfig {
    /// Applies `config.toml` text on top of the current values. Scheme
    /// changes re-validate the table and re-check the publication registry
    /// against the new object-class width.
    pub fn apply_toml(&mut self, text: &str) -> Result<(), ConfigError> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| ConfigError::Parse {
            file: CONFIG_FILE.into(),
            message: e.to_string(),
        })?;
        if let Some(afi) = file.default_afi {
            self.default_afi = Afi(afi);
        }
        let s = &mut self.stage_afi;
        if let Some(v) = file.stage_afi.publisher_tagged {
            s.publisher_tagged = Afi(v);
        }
        if let Some(v) = file.stage_afi.library_accessioned {
            s.library_accessioned = Afi(v);
        }
        if let Some(v) = file.stage_afi.external_transit {
            s.external_transit = Afi(v);
        }
        if !file.schemes.is_empty() {
            let mut schemes: [EpcScheme; 3] = EpcSchemeName::ALL.map(|n| *self.schemes.get(n));
            for (name, o) in &file.schemes {
                let s = &mut schemes[*name as usize];
                s.header = o.header.unwrap_or(s.header);
                s.manager_bits = o.manager_bits.unwrap_or(s.manager_bits);
                s.class_bits = o.class_bits.unwrap_or(s.class_bits);
                s.serial_bits = o.serial_bits.unwrap_or(s.serial_bits);
            }
            self.schemes = SchemeTable::new(schemes)?;
            let class_bits = self.schemes.get(EpcSchemeName::Epc198).class_bits;
            let mut publications = PublicationTypeRegistry::empty(class_bits);
            for p in self.publications.iter() {
                publications
                    .insert(p)
                    .map_err(|source| ConfigError::Registry {
                        file: CONFIG_FILE.into(),
                        source,
                    })?;
            }
            self.publications = publications;
        }
        for (name, p) in file.profiles {
            self.profiles.insert(TagProfile {
                name,
                band: p.band,
                epc_block_bits: p.epc_block_bits,
                user_memory_bits: p.user_memory_bits,
                afi_location: p.afi_location,
            });
        }
        Ok(())
    }

    /// Shipped defaults overridden by whichever files `dir` contains.
    pub fn from_dir(dir: &Path) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let read = |name: &str| -> Result<Option<String>, ConfigError> {
            let path = dir.join(name);
            match std::fs::read_to_string(&path) {
                Ok(text) => Ok(Some(text)),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
                Err(e) => Err(ConfigError::Io(path.display().to_string(), e)),
            }
        };
        if !dir.is_dir() {
            return Err(ConfigError::Io(
                dir.display().to_string(),
                std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
            ));
        }
        if let Some(text) = read(CONFIG_FILE)? {
            cfg.apply_toml(&text)?;
        }
        if let Some(text) = read(ALPHABET_FILE)? {
            cfg.alphabet =
                Code40Alphabet::parse(&text).map_err(|source| ConfigError::Alphabet {
                    file: ALPHABET_FILE.into(),
                    source,
                })?;
        }
        if let Some(text) = read(PUBLICATION_FILE)? {
            let class_bits = cfg.schemes.get(EpcSchemeName::Epc198).class_bits;
            cfg.publications =
                PublicationTypeRegistry::from_csv(&text, class_bits).map_err(|source| {
                    ConfigError::Registry {
                        file: PUBLICATION_FILE.into(),
                        source,
                    }
                })?;
        }
        if let Some(text) = read(MANAGER_FILE)? {
            cfg.managers =
                ManagerDirectory::from_csv(&text).map_err(|source| ConfigError::Registry {
                    file: MANAGER_FILE.into(),
                    source,
                })?;
        }
        Ok(cfg)
    }

    /// The scheme used for hybrid tags.
    pub fn hybrid_scheme(&self) -> &EpcScheme {
        self.schemes.get(EpcSchemeName::Epc198)
    }
}
