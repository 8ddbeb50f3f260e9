//! Observable flow events and their canonical serialization.
//!
//! Traces are the golden-file currency of the interpreter: one JSON
//! object per line, keys sorted, LF endings. Identical runs must produce
//! byte-identical traces.

use std::collections::BTreeMap;

use serde_json::{Map, Value as Json};

use super::validate::ValidationViolation;
use super::value::{ObjectId, Value};

pub type ObjectSnapshot = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    EnterAction {
        action: String,
    },
    ViewShown {
        action: String,
        view: String,
        object: Option<ObjectSnapshot>,
    },
    ObjectCreated {
        action: String,
        class: String,
        id: ObjectId,
        object: ObjectSnapshot,
    },
    GuardEvaluated {
        guard: String,
        result: bool,
    },
    TransitionTaken {
        from: String,
        to: String,
    },
    ValidationRejected {
        action: String,
        violations: Vec<ValidationViolation>,
    },
    FlowCompleted,
}

impl TraceEvent {
    pub fn kind(&self) -> &'static str {
        match self {
            TraceEvent::EnterAction { .. } => "EnterAction",
            TraceEvent::ViewShown { .. } => "ViewShown",
            TraceEvent::ObjectCreated { .. } => "ObjectCreated",
            TraceEvent::GuardEvaluated { .. } => "GuardEvaluated",
            TraceEvent::TransitionTaken { .. } => "TransitionTaken",
            TraceEvent::ValidationRejected { .. } => "ValidationRejected",
            TraceEvent::FlowCompleted => "FlowCompleted",
        }
    }

    pub fn to_json(&self) -> Json {
        let mut map = Map::new();
        map.insert("event".into(), self.kind().into());
        match self {
            TraceEvent::EnterAction { action } => {
                map.insert("action".into(), action.clone().into());
            }
            TraceEvent::ViewShown { action, view, object } => {
                map.insert("action".into(), action.clone().into());
                map.insert("view".into(), view.clone().into());
                if let Some(snapshot) = object {
                    map.insert("object".into(), snapshot_json(snapshot));
                }
            }
            TraceEvent::ObjectCreated { action, class, id, object } => {
                map.insert("action".into(), action.clone().into());
                map.insert("class".into(), class.clone().into());
                map.insert("id".into(), id.as_u64().into());
                map.insert("object".into(), snapshot_json(object));
            }
            TraceEvent::GuardEvaluated { guard, result } => {
                map.insert("guard".into(), guard.clone().into());
                map.insert("result".into(), (*result).into());
            }
            TraceEvent::TransitionTaken { from, to } => {
                map.insert("from".into(), from.clone().into());
                map.insert("to".into(), to.clone().into());
            }
            TraceEvent::ValidationRejected { action, violations } => {
                map.insert("action".into(), action.clone().into());
                map.insert(
                    "violations".into(),
                    violations.iter().map(ValidationViolation::to_json).collect(),
                );
            }
            TraceEvent::FlowCompleted => {}
        }
        Json::Object(map)
    }
}

fn snapshot_json(snapshot: &ObjectSnapshot) -> Json {
    let mut map = Map::new();
    for (field, value) in snapshot {
        map.insert(field.clone(), value.to_json());
    }
    Json::Object(map)
}

/// One compact JSON object per event, LF-terminated. serde_json keeps
/// object keys sorted, which makes the output canonical.
pub fn render_trace(events: &[TraceEvent]) -> String {
    let mut out = String::new();
    for event in events {
        out.push_str(&event.to_json().to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn events_serialize_with_sorted_keys() {
        let event = TraceEvent::ObjectCreated {
            action: "Registration".into(),
            class: "Person".into(),
            id: ObjectId::new(1),
            object: BTreeMap::from([
                ("name".into(), Value::Str("Ann".into())),
                ("age".into(), Value::Num(18)),
                ("email".into(), Value::Absent),
            ]),
        };
        assert_eq!(
            event.to_json().to_string(),
            "{\"action\":\"Registration\",\"class\":\"Person\",\"event\":\"ObjectCreated\",\"id\":1,\"object\":{\"age\":18,\"email\":null,\"name\":\"Ann\"}}"
        );
    }

    #[test]
    fn view_shown_omits_a_missing_object() {
        let event = TraceEvent::ViewShown {
            action: "Done".into(),
            view: "Person.error".into(),
            object: None,
        };
        assert_eq!(
            event.to_json().to_string(),
            "{\"action\":\"Done\",\"event\":\"ViewShown\",\"view\":\"Person.error\"}"
        );
    }

    #[test]
    fn render_trace_is_line_oriented() {
        let events = [
            TraceEvent::EnterAction { action: "A".into() },
            TraceEvent::FlowCompleted,
        ];
        assert_eq!(
            render_trace(&events),
            "{\"action\":\"A\",\"event\":\"EnterAction\"}\n{\"event\":\"FlowCompleted\"}\n"
        );
    }
}
