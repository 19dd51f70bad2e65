use serde::{Deserialize, Serialize};

use crate::data_model::LibraryItemRecord;
use crate::hybrid::Gs1Context;

pub const SCHEMA_VERSION: u32 = 1;

/// JSON document carrying one record, as read and written by the CLI.
///
/// ```json
/// {
///   "schema": 1,
///   "record": {
///     "primary_id": "3001234567890123",
///     "isil": "DK-710100",
///     "set_info": { "parts_in_item": 1, "part_number": 1 },
///     "publication_type": { "system": "ONIX", "code": "BC", "numeric_id": 261 },
///     "afi": 194
///   },
///   "gs1_context": {
///     "manager_number": "28:00012345",
///     "object_class": { "publication": { "system": "ONIX", "code": "BC", "numeric_id": 261 } }
///   },
///   "profile": "ICODE_ILT"
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordDocument {
    pub schema: u32,
    pub record: LibraryItemRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gs1_context: Option<Gs1Context>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
}

impl RecordDocument {
    pub fn parse(text: &str) -> Result<Self, String> {
        let doc: RecordDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if doc.schema != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                doc.schema
            ));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}
