//! Scripted flow execution.
//!
//! A script is a JSON array of action-input records and replaces the
//! browser: each record feeds one step. Replaying the same script over
//! the same model yields a byte-identical trace.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::diag::codes;
use crate::linker::LinkedModel;

use super::session::{start_session, ActionInput, SessionStatus};
use super::trace::TraceEvent;
use super::RuntimeError;

/// One scripted step: the action it addresses plus its raw input.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptEntry {
    pub action: String,
    #[serde(default)]
    pub fields: BTreeMap<String, String>,
    #[serde(default)]
    pub children: BTreeMap<String, Vec<BTreeMap<String, String>>>,
    #[serde(default)]
    pub links: BTreeMap<String, Vec<String>>,
}

impl ScriptEntry {
    fn input(&self) -> ActionInput {
        ActionInput {
            fields: self.fields.clone(),
            children: self.children.clone(),
            links: self.links.clone(),
        }
    }
}

pub fn parse_script(text: &str) -> Result<Vec<ScriptEntry>, serde_json::Error> {
    serde_json::from_str(text)
}

/// Outcome of one scripted run: the trace up to completion or failure.
#[derive(Debug)]
pub struct ScriptRun {
    pub trace: Vec<TraceEvent>,
    pub status: SessionStatus,
    pub error: Option<RuntimeError>,
}

impl ScriptRun {
    fn failed(trace: Vec<TraceEvent>, error: RuntimeError) -> Self {
        ScriptRun {
            trace,
            status: SessionStatus::Failed,
            error: Some(error),
        }
    }
}

/// Drives a session from start to completion or failure. Entries must
/// name actions in visit order; a validation rejection stays at the same
/// action, so a retrying script simply repeats the action name.
pub fn run_script(
    model: &LinkedModel,
    activity_name: &str,
    script: &[ScriptEntry],
    seed: u64,
) -> ScriptRun {
    let mut session = match start_session(model, activity_name, seed) {
        Ok(session) => session,
        Err(err) => return ScriptRun::failed(Vec::new(), err),
    };

    let mut entries = script.iter();
    while session.status() == SessionStatus::Running {
        let current = session
            .current_action_name()
            .expect("a running session is at an action")
            .to_string();
        let Some(entry) = entries.next() else {
            let err = RuntimeError::new(
                codes::SCRIPT_EXHAUSTED,
                format!("script exhausted while the flow awaits input for `{current}`"),
            );
            return ScriptRun::failed(session.into_trace(), err);
        };
        if entry.action != current {
            let err = RuntimeError::new(
                codes::SCRIPT_ACTION_MISMATCH,
                format!(
                    "script provides input for `{}`, but the flow is at `{current}`",
                    entry.action
                ),
            );
            return ScriptRun::failed(session.into_trace(), err);
        }
        if let Err(err) = session.step(&entry.input()) {
            return ScriptRun::failed(session.into_trace(), err);
        }
    }

    ScriptRun {
        status: session.status(),
        trace: session.into_trace(),
        error: None,
    }
}
