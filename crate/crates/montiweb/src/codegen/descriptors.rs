//! Machine-readable descriptors: a schema echo of the symbol table and a
//! flow echo of the resolved activities. Both serialize with sorted keys
//! and LF endings so they are stable golden files.

use std::collections::BTreeMap;

use serde_json::{json, Value as Json};

use crate::activity::{ActionContent, ActivityDef, Endpoint};
use crate::classdiagram::CardinalityMax;
use crate::linker::{AttrType, SymbolTable};

fn pretty(value: &Json) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("descriptors are valid JSON");
    text.push('\n');
    text
}

fn type_name(ty: &AttrType) -> &str {
    match ty {
        AttrType::Base(base) => base.name(),
        AttrType::Enum(name) => name,
    }
}

/// Lists every class, enum, and relation of the table. The document
/// depends only on class-diagram symbols, never on views or activities.
pub fn emit_schema_descriptor(table: &SymbolTable) -> String {
    let classes: Vec<Json> = table
        .classes
        .values()
        .map(|class| {
            let attributes: Vec<Json> = class
                .attributes
                .iter()
                .map(|(name, ty)| json!({ "name": name, "type": type_name(ty) }))
                .collect();
            json!({ "attributes": attributes, "name": class.name })
        })
        .collect();

    let enums: Vec<Json> = table
        .enums
        .values()
        .map(|en| json!({ "literals": en.literals, "name": en.name }))
        .collect();

    let relations: Vec<Json> = table
        .classes
        .values()
        .flat_map(|class| &class.relations)
        .map(|relation| {
            let max: Json = match relation.cardinality.max {
                CardinalityMax::Bounded(m) => m.into(),
                CardinalityMax::Unbounded => "unbounded".into(),
            };
            json!({
                "cardinality": { "max": max, "min": relation.cardinality.min },
                "kind": relation.kind.keyword(),
                "role": relation.role,
                "source": relation.source_class,
                "sourceRole": relation.source_role,
                "synthetic": relation.synthetic,
                "target": relation.target_class,
            })
        })
        .collect();

    pretty(&json!({ "classes": classes, "enums": enums, "relations": relations }))
}

fn endpoint_json(endpoint: &Endpoint) -> (Json, Json) {
    match endpoint {
        Endpoint::Initial(_) => ("initial".into(), Json::Null),
        Endpoint::Final(_) => ("final".into(), Json::Null),
        Endpoint::ActionRef { action, param, .. } => {
            (action.as_str().into(), param.as_deref().into())
        }
    }
}

/// Echoes every resolved activity: actions with their params and views,
/// transitions with canonically re-printed guard texts.
pub fn emit_flow_descriptor(activities: &BTreeMap<String, ActivityDef>) -> String {
    let activities: Vec<Json> = activities
        .values()
        .map(|activity| {
            let actions: Vec<Json> = activity
                .actions
                .iter()
                .map(|action| {
                    let params = |list: &[crate::activity::ParamDecl]| -> Vec<Json> {
                        list.iter()
                            .map(|p| json!({ "class": p.type_name, "name": p.name }))
                            .collect()
                    };
                    match &action.content {
                        ActionContent::ViewCall(call) => json!({
                            "inputs": params(&action.inputs),
                            "kind": "view",
                            "name": action.name,
                            "outputs": params(&action.outputs),
                            "view": format!("{}.{}", call.class_name, call.view_name),
                        }),
                        ActionContent::OpaqueCode(_) => json!({
                            "inputs": params(&action.inputs),
                            "kind": "code",
                            "name": action.name,
                            "outputs": params(&action.outputs),
                        }),
                    }
                })
                .collect();

            let transitions: Vec<Json> = activity
                .transitions
                .iter()
                .map(|transition| {
                    let sources: Vec<Json> = transition
                        .sources
                        .iter()
                        .map(|source| match source {
                            Endpoint::Initial(_) => "initial".into(),
                            Endpoint::Final(_) => "final".into(),
                            Endpoint::ActionRef { action, param, .. } => {
                                json!({ "action": action, "param": param.as_deref() })
                            }
                        })
                        .collect();
                    let alternatives: Vec<Json> = transition
                        .alternatives
                        .iter()
                        .map(|alternative| {
                            let (target, param) = endpoint_json(&alternative.target);
                            json!({
                                "guard": alternative.guard.as_ref().map(|g| g.to_string()),
                                "param": param,
                                "target": target,
                            })
                        })
                        .collect();
                    json!({ "alternatives": alternatives, "sources": sources })
                })
                .collect();

            json!({
                "actions": actions,
                "name": activity.name,
                "transitions": transitions,
            })
        })
        .collect();

    pretty(&json!({ "activities": activities }))
}
