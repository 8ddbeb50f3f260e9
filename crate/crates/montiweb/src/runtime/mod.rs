//! Typed in-memory runtime: object store, validation engine, and the
//! activity interpreter.
//!
//! Everything here operates on a [`LinkedModel`](crate::linker::LinkedModel)
//! that is free of errors. The store enforces composition life cycles and
//! cardinalities, `validate_field` turns raw text into [`Value`]s under the
//! effective view annotations, and [`FlowSession`] walks an activity from
//! `initial` to `final`, recording every observable step as a trace event.

mod guard;
mod script;
mod session;
mod store;
mod trace;
mod validate;
mod value;

use std::fmt;

pub use guard::eval_guard;
pub use script::{parse_script, run_script, ScriptEntry, ScriptRun};
pub use session::{start_session, ActionInput, FlowSession, SessionStatus};
pub use store::{ObjectRecord, ObjectSpec, ObjectStore};
pub use trace::{render_trace, TraceEvent};
pub use validate::{validate_field, ValidationRule, ValidationViolation};
pub use value::{ObjectId, Value};

/// A runtime failure, carrying the same MW code namespace the static
/// checks use so the CLI can report both uniformly.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct RuntimeError {
    pub code: &'static str,
    pub message: String,
}

impl RuntimeError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        RuntimeError {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)
    }
}
