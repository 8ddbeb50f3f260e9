//! Runtime values and object identity.

use chrono::NaiveDate;
use serde_json::json;

/// Handle to one object in one [`ObjectStore`](super::ObjectStore).
/// Ids count up from 1 and are never reused within a store's lifetime,
/// so traces stay stable even across deletes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(u64);

impl ObjectId {
    pub(crate) fn new(raw: u64) -> Self {
        ObjectId(raw)
    }

    pub fn as_u64(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for ObjectId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// One stored field value. `Absent` models an optional field that was
/// left empty; validation guarantees the other variants are well formed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Str(String),
    Num(i64),
    Date(NaiveDate),
    EnumVal { enum_name: String, literal: String },
    Ref(ObjectId),
    RefList(Vec<ObjectId>),
    Absent,
}

impl Value {
    pub fn is_absent(&self) -> bool {
        matches!(self, Value::Absent)
    }

    /// Canonical JSON rendering used by traces, snapshots and descriptors.
    /// References are wrapped so they cannot be confused with numbers.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Str(s) => json!(s),
            Value::Num(n) => json!(n),
            Value::Date(d) => json!(d.format("%Y-%m-%d").to_string()),
            Value::EnumVal { enum_name, literal } => json!(format!("{enum_name}.{literal}")),
            Value::Ref(id) => json!({ "$ref": id.as_u64() }),
            Value::RefList(ids) => {
                json!({ "$refs": ids.iter().map(|id| id.as_u64()).collect::<Vec<_>>() })
            }
            Value::Absent => serde_json::Value::Null,
        }
    }
}
