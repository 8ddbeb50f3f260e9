//! The activity interpreter.
//!
//! A session owns one store and walks one activity. Editor actions
//! validate their input and create (or, given an argument, update) an
//! object; display actions snapshot their argument. Afterwards the
//! outgoing transition fires: alternatives are tried in declaration
//! order and the first true guard wins. A validation failure is not an
//! error; the session stays at the same action and awaits better input.

use std::collections::BTreeMap;

use crate::activity::{
    ActionContent, ActionDef, ActivityDef, Alternative, Endpoint, ViewCall,
};
use crate::classdiagram::{CardinalityMax, RelationKind};
use crate::classviews::ViewModifier;
use crate::diag::codes;
use crate::linker::{FieldBinding, LinkedModel, ResolvedElement, ViewSymbol};

use super::guard::eval_guard;
use super::store::{ObjectSpec, ObjectStore};
use super::trace::TraceEvent;
use super::validate::{validate_field, ValidationRule, ValidationViolation};
use super::value::ObjectId;
use super::RuntimeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionStatus {
    Running,
    Completed,
    Failed,
}

/// Raw input for one step: field texts, composition children as nested
/// field maps, and association links as decimal object ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActionInput {
    pub fields: BTreeMap<String, String>,
    pub children: BTreeMap<String, Vec<BTreeMap<String, String>>>,
    pub links: BTreeMap<String, Vec<String>>,
}

#[derive(Debug)]
pub struct FlowSession<'m> {
    model: &'m LinkedModel,
    activity: &'m ActivityDef,
    store: ObjectStore,
    bindings: BTreeMap<String, ObjectId>,
    current: Option<String>,
    trace: Vec<TraceEvent>,
    status: SessionStatus,
    seed: u64,
}

/// Starts a session and moves it to the unique successor of `initial`.
/// The model must be free of errors.
pub fn start_session<'m>(
    model: &'m LinkedModel,
    activity_name: &str,
    seed: u64,
) -> Result<FlowSession<'m>, RuntimeError> {
    if model.has_errors() {
        return Err(RuntimeError::new(
            codes::UNKNOWN_ENTITY,
            "the model has errors; fix them before running",
        ));
    }
    let Some(activity) = model.activity(activity_name) else {
        return Err(RuntimeError::new(
            codes::UNKNOWN_ENTITY,
            format!("unknown activity `{activity_name}`"),
        ));
    };

    let mut session = FlowSession {
        model,
        activity,
        store: ObjectStore::new(),
        bindings: BTreeMap::new(),
        current: None,
        trace: Vec::new(),
        status: SessionStatus::Running,
        seed,
    };
    let candidates = session.candidates_from(|source| matches!(source, Endpoint::Initial(_)));
    session.select_and_enter("initial", &candidates, false)?;
    Ok(session)
}

impl<'m> FlowSession<'m> {
    pub fn status(&self) -> SessionStatus {
        self.status
    }

    pub fn current_action(&self) -> Option<&'m ActionDef> {
        let name = self.current.as_deref()?;
        self.activity.actions.iter().find(|a| a.name == name)
    }

    pub fn current_action_name(&self) -> Option<&str> {
        self.current.as_deref()
    }

    /// The view the current action renders, if it is a view action.
    pub fn current_view(&self) -> Option<&'m ViewSymbol> {
        match &self.current_action()?.content {
            ActionContent::ViewCall(call) => {
                self.model.table.view(&call.class_name, &call.view_name)
            }
            ActionContent::OpaqueCode(_) => None,
        }
    }

    /// The captcha challenge the current action expects, if any.
    pub fn captcha_challenge(&self) -> Option<String> {
        self.current_view()
            .filter(|view| view.captcha)
            .map(|_| self.seed.to_string())
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    pub fn into_trace(self) -> Vec<TraceEvent> {
        self.trace
    }

    pub fn store(&self) -> &ObjectStore {
        &self.store
    }

    pub fn bindings(&self) -> &BTreeMap<String, ObjectId> {
        &self.bindings
    }

    /// Executes the current action with the given input, then fires its
    /// outgoing transition. On a validation failure the session stays at
    /// the same action; on a runtime error it is marked failed.
    pub fn step(&mut self, input: &ActionInput) -> Result<(), RuntimeError> {
        if self.status != SessionStatus::Running {
            return Err(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                "the session is not running",
            ));
        }
        let action = self
            .current_action()
            .expect("a running session is at an action");

        match &action.content {
            ActionContent::OpaqueCode(_) => {
                return Err(self.fail(RuntimeError::new(
                    codes::CODE_NOT_EXECUTABLE,
                    format!("`code` action `{}` cannot be executed", action.name),
                )));
            }
            ActionContent::ViewCall(call) => {
                let view = self
                    .model
                    .table
                    .view(&call.class_name, &call.view_name)
                    .expect("view calls are resolved in an error-free model");
                let outcome = if view.modifier == ViewModifier::Editor {
                    self.execute_editor(action, call, view, input)?
                } else {
                    self.execute_display(action, call, view, input)?
                };
                if outcome == StepOutcome::Rejected {
                    return Ok(());
                }
            }
        }

        let name = action.name.clone();
        let candidates = self.candidates_from(|source| {
            matches!(source, Endpoint::ActionRef { action, .. } if *action == name)
        });
        self.select_and_enter(&name, &candidates, true)
    }

    /// All (source endpoint, alternative) pairs leaving matching sources,
    /// in declaration order.
    fn candidates_from<F>(&self, mut matches: F) -> Vec<(&'m Endpoint, &'m Alternative)>
    where
        F: FnMut(&Endpoint) -> bool,
    {
        let mut candidates = Vec::new();
        for transition in &self.activity.transitions {
            let Some(source) = transition.sources.iter().find(|s| matches(s)) else {
                continue;
            };
            for alternative in &transition.alternatives {
                candidates.push((source, alternative));
            }
        }
        candidates
    }

    fn select_and_enter(
        &mut self,
        from: &str,
        candidates: &[(&'m Endpoint, &'m Alternative)],
        record_transition: bool,
    ) -> Result<(), RuntimeError> {
        if candidates.is_empty() {
            return Err(self.fail(RuntimeError::new(
                codes::NO_MATCHING_GUARD,
                format!("no transition leaves `{from}`"),
            )));
        }
        for (source, alternative) in candidates {
            if let Some(guard) = &alternative.guard {
                let result = match eval_guard(guard, &self.bindings, &self.store) {
                    Ok(result) => result,
                    Err(err) => return Err(self.fail(err)),
                };
                self.trace.push(TraceEvent::GuardEvaluated {
                    guard: guard.to_string(),
                    result,
                });
                if !result {
                    continue;
                }
            }
            return self.enter(from, source, &alternative.target, record_transition);
        }
        Err(self.fail(RuntimeError::new(
            codes::NO_MATCHING_GUARD,
            format!("no alternative matched leaving `{from}`"),
        )))
    }

    fn enter(
        &mut self,
        from: &str,
        source: &Endpoint,
        target: &Endpoint,
        record_transition: bool,
    ) -> Result<(), RuntimeError> {
        match target {
            Endpoint::Final(_) => {
                if record_transition {
                    self.trace.push(TraceEvent::TransitionTaken {
                        from: from.to_string(),
                        to: "final".to_string(),
                    });
                }
                self.trace.push(TraceEvent::FlowCompleted);
                self.status = SessionStatus::Completed;
                self.current = None;
                Ok(())
            }
            Endpoint::ActionRef { action, param, .. } => {
                if let Some(in_param) = param {
                    let Endpoint::ActionRef {
                        action: source_action,
                        param: Some(out_param),
                        ..
                    } = source
                    else {
                        unreachable!("flow targets without a flowing source are link errors");
                    };
                    let Some(id) = self.bindings.get(out_param).copied() else {
                        return Err(self.fail(RuntimeError::new(
                            codes::GUARD_EVAL,
                            format!(
                                "out-param `{out_param}` of `{source_action}` was never bound"
                            ),
                        )));
                    };
                    self.bindings.insert(in_param.clone(), id);
                }
                if record_transition {
                    self.trace.push(TraceEvent::TransitionTaken {
                        from: from.to_string(),
                        to: action.clone(),
                    });
                }
                self.trace.push(TraceEvent::EnterAction {
                    action: action.clone(),
                });
                self.current = Some(action.clone());
                Ok(())
            }
            Endpoint::Initial(_) => unreachable!("the parser rejects `initial` as a target"),
        }
    }

    fn execute_editor(
        &mut self,
        action: &ActionDef,
        call: &ViewCall,
        view: &ViewSymbol,
        input: &ActionInput,
    ) -> Result<StepOutcome, RuntimeError> {
        let editing = match &call.argument {
            Some(arg_param) => Some(self.argument_object(arg_param)?),
            None => None,
        };
        if editing.is_some() && !input.children.is_empty() {
            return Err(self.fail(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                "an editor call with an argument commits in place and cannot create children",
            )));
        }

        let mut violations = Vec::new();
        let mut values = BTreeMap::new();
        let mut children: BTreeMap<String, Vec<ObjectSpec>> = BTreeMap::new();
        let mut links: Vec<(String, ObjectId)> = Vec::new();
        let mut known_fields = Vec::new();
        let mut known_children = Vec::new();
        let mut known_links = Vec::new();

        for element in &view.elements {
            let ResolvedElement::Field(field) = element else {
                continue;
            };
            if field.mode != ViewModifier::Editor {
                continue;
            }
            match &field.binding {
                FieldBinding::Attribute(ty) => {
                    known_fields.push(field.name.as_str());
                    let raw = input.fields.get(&field.name).map(String::as_str);
                    if editing.is_some() && raw.is_none() {
                        continue;
                    }
                    match validate_field(
                        &self.model.table,
                        &field.name,
                        ty,
                        &field.annotations,
                        raw.unwrap_or(""),
                    ) {
                        Ok(value) => {
                            values.insert(field.name.clone(), value);
                        }
                        Err(mut bad) => violations.append(&mut bad),
                    }
                }
                FieldBinding::Role(relation) if relation.kind == RelationKind::Composition => {
                    known_children.push(field.name.as_str());
                    let specs = self.validate_children(
                        &relation.target_class,
                        &field.name,
                        input.children.get(&field.name).map_or(&[][..], Vec::as_slice),
                        &mut violations,
                    )?;
                    children.insert(field.name.clone(), specs);
                }
                FieldBinding::Role(_) => {
                    known_links.push(field.name.as_str());
                    for label in input.links.get(&field.name).map_or(&[][..], Vec::as_slice) {
                        let id = self.resolve_label(label)?;
                        links.push((field.name.clone(), id));
                    }
                }
            }
        }

        for name in input.fields.keys() {
            if name == "captcha" && view.captcha {
                continue;
            }
            if !known_fields.contains(&name.as_str()) {
                return Err(self.fail(RuntimeError::new(
                    codes::UNKNOWN_ENTITY,
                    format!("view `{}` has no editable field `{name}`", view.qualified_name()),
                )));
            }
        }
        for role in input.children.keys() {
            if !known_children.contains(&role.as_str()) {
                return Err(self.fail(RuntimeError::new(
                    codes::UNKNOWN_ENTITY,
                    format!(
                        "view `{}` has no editable composition `{role}`",
                        view.qualified_name()
                    ),
                )));
            }
        }
        for role in input.links.keys() {
            if !known_links.contains(&role.as_str()) {
                return Err(self.fail(RuntimeError::new(
                    codes::UNKNOWN_ENTITY,
                    format!(
                        "view `{}` has no editable association `{role}`",
                        view.qualified_name()
                    ),
                )));
            }
        }

        if editing.is_none() {
            let class = &self.model.table.classes[&call.class_name];
            for relation in &class.relations {
                if relation.kind != RelationKind::Composition {
                    continue;
                }
                let count = children.get(&relation.role).map_or(0, Vec::len);
                if !relation.cardinality.admits(count) {
                    let max = match relation.cardinality.max {
                        CardinalityMax::Bounded(m) => Some(m),
                        CardinalityMax::Unbounded => None,
                    };
                    violations.push(ValidationViolation::new(
                        &relation.role,
                        ValidationRule::Cardinality {
                            min: relation.cardinality.min,
                            max,
                            count,
                        },
                        format!("`{}` has {count} children, which violates its cardinality", relation.role),
                        count.to_string(),
                    ));
                }
            }
        }

        if view.captcha {
            let answer = input.fields.get("captcha").map(String::as_str).unwrap_or("");
            if answer != self.seed.to_string() {
                violations.push(ValidationViolation::new(
                    "captcha",
                    ValidationRule::Captcha,
                    "the captcha answer does not match the challenge",
                    answer,
                ));
            }
        }

        if !violations.is_empty() {
            self.trace.push(TraceEvent::ValidationRejected {
                action: action.name.clone(),
                violations,
            });
            return Ok(StepOutcome::Rejected);
        }

        let id = match editing {
            Some(id) => {
                if let Err(err) = self.store.update_fields(id, values) {
                    return Err(self.fail(err));
                }
                id
            }
            None => {
                let spec = ObjectSpec { values, children };
                match self.store.create_object(&self.model.table, &call.class_name, &spec) {
                    Ok(id) => id,
                    Err(err) => return Err(self.fail(err)),
                }
            }
        };
        for (role, target) in links {
            if let Err(err) = self.store.link_objects(&self.model.table, id, &role, target) {
                return Err(self.fail(err));
            }
        }

        let out_param = call
            .assign_to
            .as_ref()
            .expect("editor calls assign their result in an error-free model");
        self.bindings.insert(out_param.clone(), id);
        self.trace.push(TraceEvent::ObjectCreated {
            action: action.name.clone(),
            class: call.class_name.clone(),
            id,
            object: self.store.snapshot(id).unwrap(),
        });
        Ok(StepOutcome::Proceeded)
    }

    fn execute_display(
        &mut self,
        action: &ActionDef,
        call: &ViewCall,
        view: &ViewSymbol,
        input: &ActionInput,
    ) -> Result<StepOutcome, RuntimeError> {
        if !input.fields.is_empty() || !input.children.is_empty() || !input.links.is_empty() {
            return Err(self.fail(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                format!("display action `{}` takes no input", action.name),
            )));
        }
        let object = match &call.argument {
            Some(param) => {
                let id = self.argument_object(param)?;
                Some(self.store.snapshot(id).unwrap())
            }
            None => None,
        };
        self.trace.push(TraceEvent::ViewShown {
            action: action.name.clone(),
            view: view.qualified_name(),
            object,
        });
        Ok(StepOutcome::Proceeded)
    }

    fn validate_children(
        &mut self,
        child_class: &str,
        role: &str,
        entries: &[BTreeMap<String, String>],
        violations: &mut Vec<ValidationViolation>,
    ) -> Result<Vec<ObjectSpec>, RuntimeError> {
        let class = &self.model.table.classes[child_class];
        let mut specs = Vec::new();
        for (index, entry) in entries.iter().enumerate() {
            for name in entry.keys() {
                if !class.attributes.contains_key(name) {
                    let err = RuntimeError::new(
                        codes::UNKNOWN_ENTITY,
                        format!("class `{child_class}` has no attribute `{name}`"),
                    );
                    return Err(self.fail(err));
                }
            }
            let mut values = BTreeMap::new();
            for (name, ty) in &class.attributes {
                let Some(raw) = entry.get(name) else {
                    continue;
                };
                match validate_field(&self.model.table, name, ty, &[], raw) {
                    Ok(value) => {
                        values.insert(name.clone(), value);
                    }
                    Err(bad) => {
                        for mut violation in bad {
                            violation.attribute = format!("{role}[{index}].{}", violation.attribute);
                            violations.push(violation);
                        }
                    }
                }
            }
            specs.push(ObjectSpec::with_values(values));
        }
        Ok(specs)
    }

    fn resolve_label(&mut self, label: &str) -> Result<ObjectId, RuntimeError> {
        let Ok(raw) = label.parse::<u64>() else {
            return Err(self.fail(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                format!("link label `{label}` is not an object id"),
            )));
        };
        let id = ObjectId::new(raw);
        if self.store.object(id).is_none() {
            return Err(self.fail(RuntimeError::new(
                codes::UNKNOWN_ENTITY,
                format!("link label `{label}` names no live object"),
            )));
        }
        Ok(id)
    }

    fn argument_object(&mut self, param: &str) -> Result<ObjectId, RuntimeError> {
        let Some(id) = self.bindings.get(param).copied() else {
            let err = RuntimeError::new(
                codes::GUARD_EVAL,
                format!("param `{param}` is not bound"),
            );
            return Err(self.fail(err));
        };
        if self.store.object(id).is_none() {
            let err = RuntimeError::new(
                codes::GUARD_EVAL,
                format!("object {id} bound to `{param}` no longer exists"),
            );
            return Err(self.fail(err));
        }
        Ok(id)
    }

    fn fail(&mut self, err: RuntimeError) -> RuntimeError {
        self.status = SessionStatus::Failed;
        self.current = None;
        err
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StepOutcome {
    Proceeded,
    Rejected,
}
