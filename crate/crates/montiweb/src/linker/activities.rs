//! Resolution of activity diagrams against the symbol table.
//!
//! Binds view calls, checks call shapes and object flow, types guards,
//! and applies the structural flow checks. Guard operands whose leading
//! segment names an enum are rebound to qualified enum literals here, so
//! downstream consumers see `Operand::EnumLiteral` already resolved.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;

use crate::activity::{
    ActionContent, ActivityDef, Alternative, CompareOp, Endpoint, GuardExpr, Operand,
    TransitionStmt, ViewCall,
};
use crate::classviews::ViewModifier;
use crate::diag::{codes, Diagnostic};
use crate::span::SourceSpan;

use super::symbols::{AttrType, BaseType, SymbolTable};

/// Resolves all activities. Returns the rebound activities keyed by name
/// together with the diagnostics of this stage.
pub fn resolve_activities(
    activities: &[ActivityDef],
    table: &SymbolTable,
) -> (BTreeMap<String, ActivityDef>, Vec<Diagnostic>) {
    let mut resolved = BTreeMap::new();
    let mut diags = Vec::new();
    let mut first_seen: BTreeMap<&str, &SourceSpan> = BTreeMap::new();

    for activity in activities {
        if let Some(first) = first_seen.get(activity.name.as_str()) {
            diags.push(
                Diagnostic::error(
                    codes::DUPLICATE_ACTIVITY,
                    format!("activity `{}` is defined more than once", activity.name),
                    activity.span.clone(),
                )
                .with_related((*first).clone(), "first defined here"),
            );
            continue;
        }
        first_seen.insert(&activity.name, &activity.span);
        let activity = ActivityResolver {
            table,
            params: BTreeMap::new(),
            diags: &mut diags,
        }
        .resolve(activity);
        resolved.insert(activity.name.clone(), activity);
    }

    (resolved, diags)
}

/// In- and out-params of one action, each mapped to its class name.
#[derive(Default)]
struct ActionParams {
    inputs: BTreeMap<String, String>,
    outputs: BTreeMap<String, String>,
}

struct ActivityResolver<'a> {
    table: &'a SymbolTable,
    params: BTreeMap<String, ActionParams>,
    diags: &'a mut Vec<Diagnostic>,
}

impl<'a> ActivityResolver<'a> {
    fn resolve(mut self, activity: &ActivityDef) -> ActivityDef {
        let mut resolved = activity.clone();

        for action in &activity.actions {
            let mut params = ActionParams::default();
            for (decl, map) in action
                .inputs
                .iter()
                .map(|d| (d, 0))
                .chain(action.outputs.iter().map(|d| (d, 1)))
            {
                if !self.table.classes.contains_key(&decl.type_name) {
                    let message = if self.table.enums.contains_key(&decl.type_name) {
                        format!(
                            "parameter `{}` has enum type `{}`, but parameters are objects",
                            decl.name, decl.type_name
                        )
                    } else {
                        format!(
                            "unknown class `{}` for parameter `{}`",
                            decl.type_name, decl.name
                        )
                    };
                    self.diags.push(Diagnostic::error(
                        codes::PARAM_TYPE_MISMATCH,
                        message,
                        decl.span.clone(),
                    ));
                }
                let target = if map == 0 {
                    &mut params.inputs
                } else {
                    &mut params.outputs
                };
                target.insert(decl.name.clone(), decl.type_name.clone());
            }
            self.params.insert(action.name.clone(), params);
        }

        for action in &activity.actions {
            match &action.content {
                ActionContent::ViewCall(call) => self.check_view_call(&action.name, call),
                ActionContent::OpaqueCode(code) => self.diags.push(Diagnostic::warning(
                    codes::CODE_ACTION,
                    format!(
                        "`code` action `{}` cannot be executed by the interpreter",
                        action.name
                    ),
                    code.span.clone(),
                )),
            }
        }

        let mut final_targeted = false;
        let mut initial_transitions: Vec<usize> = Vec::new();
        for (index, transition) in resolved.transitions.iter_mut().enumerate() {
            if transition
                .sources
                .iter()
                .any(|s| matches!(s, Endpoint::Initial(_)))
            {
                initial_transitions.push(index);
            }
            self.check_transition(transition, &mut final_targeted);
        }

        match initial_transitions.len() {
            0 => self.diags.push(Diagnostic::error(
                codes::INITIAL_TRANSITIONS,
                format!("activity `{}` has no transition from `initial`", activity.name),
                activity.span.clone(),
            )),
            1 => {}
            _ => {
                let first = resolved.transitions[initial_transitions[0]].span.clone();
                for &index in &initial_transitions[1..] {
                    self.diags.push(
                        Diagnostic::error(
                            codes::INITIAL_TRANSITIONS,
                            "the activity already has an `initial` transition",
                            resolved.transitions[index].span.clone(),
                        )
                        .with_related(first.clone(), "first `initial` transition here"),
                    );
                }
            }
        }

        if !final_targeted {
            self.diags.push(Diagnostic::warning(
                codes::NO_FINAL,
                format!("no transition in `{}` reaches `final`", activity.name),
                activity.span.clone(),
            ));
        }

        if initial_transitions.len() == 1 {
            self.check_reachability(&resolved, initial_transitions[0]);
        }

        resolved
    }

    fn check_view_call(&mut self, action_name: &str, call: &ViewCall) {
        let qualified = format!("{}.{}", call.class_name, call.view_name);
        let Some(view) = self.table.view(&call.class_name, &call.view_name) else {
            self.diags.push(Diagnostic::error(
                codes::UNKNOWN_VIEW,
                format!("unresolved view `{qualified}`"),
                call.span.clone(),
            ));
            return;
        };
        if view.modifier == ViewModifier::Field {
            self.diags.push(Diagnostic::error(
                codes::UNKNOWN_VIEW,
                format!("field view `{qualified}` cannot be invoked from an activity"),
                call.span.clone(),
            ));
            return;
        }

        let mut errors: Vec<String> = Vec::new();
        let params = &self.params[action_name];
        let check_argument = |arg: &str, errors: &mut Vec<String>| {
            match params.inputs.get(arg) {
                None => errors.push(format!(
                    "argument `{arg}` is not an in-param of action `{action_name}`"
                )),
                Some(ty) if ty != &call.class_name => errors.push(format!(
                    "argument `{arg}` has type `{ty}`, but the view belongs to `{}`",
                    call.class_name
                )),
                Some(_) => {}
            }
        };
        match view.modifier {
            ViewModifier::Editor => {
                match &call.assign_to {
                    None => errors.push(
                        "an editor-view call must assign its result to an out-param".to_string(),
                    ),
                    Some(name) => match params.outputs.get(name) {
                        None => errors.push(format!(
                            "`{name}` is not an out-param of action `{action_name}`"
                        )),
                        Some(ty) if ty != &call.class_name => errors.push(format!(
                            "out-param `{name}` has type `{ty}`, but `{qualified}` edits `{}`",
                            call.class_name
                        )),
                        Some(_) => {}
                    },
                }
                if let Some(arg) = &call.argument {
                    check_argument(arg, &mut errors);
                }
            }
            ViewModifier::Display => {
                if call.assign_to.is_some() {
                    errors.push("a display-view call does not produce a result".to_string());
                }
                match &call.argument {
                    Some(arg) => check_argument(arg, &mut errors),
                    None => {
                        if view.has_bound_fields() {
                            errors.push(format!(
                                "view `{qualified}` renders attributes of `{}` and needs an object argument",
                                call.class_name
                            ));
                        }
                    }
                }
            }
            ViewModifier::Field => unreachable!("rejected above"),
        }
        for message in errors {
            self.diags.push(Diagnostic::error(
                codes::PARAM_TYPE_MISMATCH,
                message,
                call.span.clone(),
            ));
        }
    }

    fn check_transition(&mut self, transition: &mut TransitionStmt, final_targeted: &mut bool) {
        for source in &transition.sources {
            if let Endpoint::ActionRef {
                action,
                param,
                span,
            } = source
            {
                let Some(params) = self.params.get(action) else {
                    self.diags.push(Diagnostic::error(
                        codes::UNKNOWN_ENDPOINT,
                        format!("unknown action `{action}`"),
                        span.clone(),
                    ));
                    continue;
                };
                if let Some(p) = param {
                    if !params.outputs.contains_key(p) {
                        self.diags.push(Diagnostic::error(
                            codes::UNKNOWN_ENDPOINT,
                            format!("`{p}` is not an out-param of action `{action}`"),
                            span.clone(),
                        ));
                    }
                }
            }
        }

        let scope = self.guard_scope(&transition.sources);
        for alternative in &mut transition.alternatives {
            self.check_target(&transition.sources, alternative, final_targeted);
            if let Some(guard) = &mut alternative.guard {
                self.check_guard(guard, &scope);
            }
        }
    }

    fn check_target(
        &mut self,
        sources: &[Endpoint],
        alternative: &mut Alternative,
        final_targeted: &mut bool,
    ) {
        match &alternative.target {
            Endpoint::Final(_) => *final_targeted = true,
            Endpoint::Initial(_) => {} // rejected by the parser
            Endpoint::ActionRef {
                action,
                param,
                span,
            } => {
                let Some(params) = self.params.get(action) else {
                    self.diags.push(Diagnostic::error(
                        codes::UNKNOWN_ENDPOINT,
                        format!("unknown action `{action}`"),
                        span.clone(),
                    ));
                    return;
                };
                match param {
                    None => {
                        if !params.inputs.is_empty() {
                            self.diags.push(Diagnostic::error(
                                codes::PARAM_TYPE_MISMATCH,
                                format!(
                                    "action `{action}` declares in-params; bind one with `{action}.{}`",
                                    params.inputs.keys().next().unwrap()
                                ),
                                span.clone(),
                            ));
                        }
                    }
                    Some(p) => {
                        let Some(target_type) = params.inputs.get(p).cloned() else {
                            self.diags.push(Diagnostic::error(
                                codes::UNKNOWN_ENDPOINT,
                                format!("`{p}` is not an in-param of action `{action}`"),
                                span.clone(),
                            ));
                            return;
                        };
                        self.check_object_flow(sources, p, &target_type, span);
                    }
                }
            }
        }
    }

    /// Every source must offer an out-param of the target's type when the
    /// alternative binds a target in-param.
    fn check_object_flow(
        &mut self,
        sources: &[Endpoint],
        target_param: &str,
        target_type: &str,
        span: &SourceSpan,
    ) {
        for source in sources {
            match source {
                Endpoint::Initial(_) => self.diags.push(Diagnostic::error(
                    codes::PARAM_TYPE_MISMATCH,
                    format!("`initial` provides no object to bind `{target_param}`"),
                    span.clone(),
                )),
                Endpoint::Final(_) => {}
                Endpoint::ActionRef {
                    action,
                    param,
                    span: source_span,
                } => {
                    let Some(params) = self.params.get(action) else {
                        continue; // unknown action already reported
                    };
                    match param {
                        None => self.diags.push(Diagnostic::error(
                            codes::PARAM_TYPE_MISMATCH,
                            format!(
                                "source `{action}` must select an out-param to flow into `{target_param}`"
                            ),
                            source_span.clone(),
                        )),
                        Some(sp) => {
                            let Some(source_type) = params.outputs.get(sp) else {
                                continue; // bad suffix already reported
                            };
                            if source_type != target_type {
                                self.diags.push(Diagnostic::error(
                                    codes::PARAM_TYPE_MISMATCH,
                                    format!(
                                        "object flow type mismatch: `{action}.{sp}` is `{source_type}`, but `{target_param}` expects `{target_type}`"
                                    ),
                                    span.clone(),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    /// Params visible to guards: the union of the source actions' params.
    fn guard_scope(&self, sources: &[Endpoint]) -> BTreeMap<String, String> {
        let mut scope = BTreeMap::new();
        for source in sources {
            if let Endpoint::ActionRef { action, .. } = source {
                if let Some(params) = self.params.get(action) {
                    for (name, ty) in params.inputs.iter().chain(params.outputs.iter()) {
                        scope.insert(name.clone(), ty.clone());
                    }
                }
            }
        }
        scope
    }

    fn check_guard(&mut self, guard: &mut GuardExpr, scope: &BTreeMap<String, String>) {
        match guard {
            GuardExpr::Or(lhs, rhs) | GuardExpr::And(lhs, rhs) => {
                self.check_guard(lhs, scope);
                self.check_guard(rhs, scope);
            }
            GuardExpr::Compare { op, lhs, rhs } => {
                self.rebind_operand(lhs);
                self.rebind_operand(rhs);
                let left = self.operand_type(lhs, scope);
                let right = self.operand_type(rhs, scope);
                if let (Some(left), Some(right)) = (left, right) {
                    let span = lhs.span().merge(rhs.span());
                    self.check_compare(*op, &left, &right, lhs, rhs, span);
                }
            }
        }
    }

    /// `Brand.AUDI` parses as param `Brand`, attribute `AUDI`; when the
    /// leading segment names an enum it becomes a qualified literal.
    fn rebind_operand(&mut self, operand: &mut Operand) {
        let Operand::ParamAttribute {
            param,
            attribute,
            span,
        } = operand
        else {
            return;
        };
        let Some(en) = self.table.enums.get(param.as_str()) else {
            return;
        };
        if !en.has_literal(attribute) {
            self.diags.push(Diagnostic::error(
                codes::GUARD_TYPE,
                format!("enum `{}` has no literal `{}`", param, attribute),
                span.clone(),
            ));
        }
        *operand = Operand::EnumLiteral {
            enum_name: param.clone(),
            literal: attribute.clone(),
            span: span.clone(),
        };
    }

    fn operand_type(
        &mut self,
        operand: &Operand,
        scope: &BTreeMap<String, String>,
    ) -> Option<GuardType> {
        match operand {
            Operand::Int(..) => Some(GuardType::IntLit),
            Operand::Str(..) => Some(GuardType::StrLit),
            Operand::EnumLiteral { enum_name, .. } => Some(GuardType::Enum(enum_name.clone())),
            Operand::ParamAttribute {
                param,
                attribute,
                span,
            } => {
                let Some(class_name) = scope.get(param) else {
                    self.diags.push(Diagnostic::error(
                        codes::UNDECLARED_GUARD_PARAM,
                        format!("guard references undeclared param `{param}`"),
                        span.clone(),
                    ));
                    return None;
                };
                let class = self.table.classes.get(class_name)?;
                match class.attributes.get(attribute) {
                    Some(AttrType::Base(base)) => Some(match base {
                        BaseType::MWString => GuardType::Str,
                        BaseType::Email => GuardType::Email,
                        BaseType::Number => GuardType::Num,
                        BaseType::MWDate => GuardType::Date,
                    }),
                    Some(AttrType::Enum(name)) => Some(GuardType::Enum(name.clone())),
                    None => {
                        if class.relation(attribute).is_some() {
                            self.diags.push(Diagnostic::error(
                                codes::GUARD_TYPE,
                                format!(
                                    "relation role `{attribute}` cannot be compared in a guard"
                                ),
                                span.clone(),
                            ));
                        } else {
                            self.diags.push(Diagnostic::error(
                                codes::UNKNOWN_ATTRIBUTE,
                                format!(
                                    "class `{class_name}` has no attribute `{attribute}`"
                                ),
                                span.clone(),
                            ));
                        }
                        None
                    }
                }
            }
        }
    }

    fn check_compare(
        &mut self,
        op: CompareOp,
        left: &GuardType,
        right: &GuardType,
        lhs: &Operand,
        rhs: &Operand,
        span: SourceSpan,
    ) {
        use GuardType::*;

        let ordering_forbidden = |name: &str| {
            format!(
                "ordering comparison `{}` is not defined for {name}",
                op.symbol()
            )
        };

        match (left, right) {
            (Num | IntLit, Num | IntLit) => {}
            (Str | StrLit, Str | StrLit) | (Email, Email | StrLit) | (StrLit, Email) => {
                if op.is_ordering() {
                    let name = if matches!((left, right), (Email, _) | (_, Email)) {
                        "Email"
                    } else {
                        "MWString"
                    };
                    self.diags.push(Diagnostic::error(
                        codes::GUARD_TYPE,
                        ordering_forbidden(name),
                        span,
                    ));
                }
            }
            (Date, Date) => {}
            (Date, StrLit) | (StrLit, Date) => {
                let literal = if matches!(left, StrLit) { lhs } else { rhs };
                if let Operand::Str(text, lit_span) = literal {
                    if NaiveDate::parse_from_str(text, "%Y-%m-%d").is_err() {
                        self.diags.push(Diagnostic::error(
                            codes::GUARD_TYPE,
                            format!("`{text}` is not a date literal (YYYY-MM-DD)"),
                            lit_span.clone(),
                        ));
                    }
                }
            }
            (Enum(a), Enum(b)) => {
                if a != b {
                    self.diags.push(Diagnostic::error(
                        codes::GUARD_TYPE,
                        format!("type mismatch: enum `{a}` vs enum `{b}`"),
                        span,
                    ));
                } else if op.is_ordering() {
                    self.diags.push(Diagnostic::error(
                        codes::GUARD_TYPE,
                        ordering_forbidden(&format!("enum `{a}`")),
                        span,
                    ));
                }
            }
            (Enum(a), StrLit) | (StrLit, Enum(a)) => {
                self.diags.push(Diagnostic::error(
                    codes::GUARD_TYPE,
                    format!("compare enum attributes against qualified literals like `{a}.LITERAL`"),
                    span,
                ));
            }
            _ => {
                self.diags.push(Diagnostic::error(
                    codes::GUARD_TYPE,
                    format!(
                        "type mismatch: {} vs {}",
                        left.describe(),
                        right.describe()
                    ),
                    span,
                ));
            }
        }
    }

    /// Warns about actions the flow can never enter.
    fn check_reachability(&mut self, activity: &ActivityDef, initial_index: usize) {
        let mut edges: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        let mut roots: BTreeSet<&str> = BTreeSet::new();

        for (index, transition) in activity.transitions.iter().enumerate() {
            let targets: Vec<&str> = transition
                .alternatives
                .iter()
                .filter_map(|a| match &a.target {
                    Endpoint::ActionRef { action, .. } => Some(action.as_str()),
                    _ => None,
                })
                .collect();
            if index == initial_index {
                roots.extend(&targets);
            }
            for source in &transition.sources {
                if let Endpoint::ActionRef { action, .. } = source {
                    edges.entry(action).or_default().extend(&targets);
                }
            }
        }

        let mut reachable = roots.clone();
        let mut frontier: Vec<&str> = roots.into_iter().collect();
        while let Some(node) = frontier.pop() {
            for &next in edges.get(node).into_iter().flatten() {
                if reachable.insert(next) {
                    frontier.push(next);
                }
            }
        }

        for action in &activity.actions {
            if !reachable.contains(action.name.as_str()) {
                self.diags.push(Diagnostic::warning(
                    codes::UNREACHABLE_ACTION,
                    format!("action `{}` is unreachable from `initial`", action.name),
                    action.span.clone(),
                ));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum GuardType {
    Num,
    Str,
    Email,
    Date,
    Enum(String),
    IntLit,
    StrLit,
}

impl GuardType {
    fn describe(&self) -> String {
        match self {
            GuardType::Num | GuardType::IntLit => "Number".to_string(),
            GuardType::Str | GuardType::StrLit => "MWString".to_string(),
            GuardType::Email => "Email".to_string(),
            GuardType::Date => "MWDate".to_string(),
            GuardType::Enum(name) => format!("enum `{name}`"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::symbols::build_symbol_table;
    use super::super::views::resolve_classviews;
    use super::*;
    use crate::activity::parse_activity;
    use crate::classdiagram::parse_classdiagram;
    use crate::classviews::parse_classviews;
    use crate::diag::Severity;

    const CARSHARING_CD: &str = include_str!("../../fixtures/carsharing/Carsharing.cd");
    const PERSON_CV: &str = include_str!("../../fixtures/carsharing/Person.cv");
    const REGISTRATION_AD: &str = include_str!("../../fixtures/carsharing/UserRegistration.ad");
    const FIXED_AD: &str = include_str!("../../fixtures/carsharing_fixed/UserRegistration.ad");

    fn carsharing_symbols() -> SymbolTable {
        let diagram = parse_classdiagram(CARSHARING_CD, "Carsharing.cd").unwrap();
        let (mut table, diags) = build_symbol_table(&[diagram]);
        assert!(diags.is_empty(), "{diags:?}");
        let views = parse_classviews(PERSON_CV, "Person.cv").unwrap();
        let diags = resolve_classviews(&[views], &mut table);
        assert!(diags.is_empty(), "{diags:?}");
        table
    }

    fn resolve_one(ad_src: &str, table: &SymbolTable) -> (BTreeMap<String, ActivityDef>, Vec<Diagnostic>) {
        let activity = parse_activity(ad_src, "test.ad").expect("activity parses");
        resolve_activities(&[activity], table)
    }

    #[test]
    fn verbatim_fixture_has_exactly_one_error() {
        let table = carsharing_symbols();
        let (_, diags) = resolve_one(REGISTRATION_AD, &table);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].code, codes::UNKNOWN_VIEW);
        assert_eq!(diags[0].severity, Severity::Error);
        assert!(diags[0].message.contains("Person.registrationError"));
    }

    #[test]
    fn corrected_fixture_is_clean() {
        let table = carsharing_symbols();
        let (resolved, diags) = resolve_one(FIXED_AD, &table);
        assert!(diags.is_empty(), "{diags:?}");
        assert!(resolved.contains_key("UserRegistration"));
    }

    #[test]
    fn guard_rebinds_enum_literals() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Pick { out: Car c; view: c = Car.carEditor(); }\
            action Show { in: Car c; view: Car.carView(c); }\
            initial -> Pick;\
            Pick.c -> [c.brand == Brand.AUDI] Show.c | [c.brand != Brand.AUDI] Show.c;\
            Show -> final;\
        }";
        // carEditor and carView are not in the fixture file; build them here.
        let mut table = table;
        let extra = parse_classviews(
            "Car { editor carEditor { brand; numSeats; } display carView { brand; } }",
            "Car.cv",
        )
        .unwrap();
        let diags = resolve_classviews(&[extra], &mut table);
        assert!(diags.is_empty(), "{diags:?}");

        let (resolved, diags) = resolve_one(src, &table);
        assert!(diags.is_empty(), "{diags:?}");
        let activity = &resolved["A"];
        let guard = activity.transitions[1].alternatives[0].guard.as_ref().unwrap();
        match guard {
            GuardExpr::Compare { rhs, .. } => assert!(matches!(
                rhs,
                Operand::EnumLiteral { enum_name, literal, .. }
                    if enum_name == "Brand" && literal == "AUDI"
            )),
            other => panic!("expected compare, got {other:?}"),
        }
    }

    fn flow_fixture(guard_line: &str) -> String {
        format!(
            "activity A {{\
               action Reg {{ out: Person p; view: p = Person.registration(); }}\
               action Done {{ in: Person p; view: Person.welcome(p); }}\
               initial -> Reg;\
               Reg.p -> [{guard_line}] Done.p;\
               Done -> final;\
             }}"
        )
    }

    fn guard_diags(guard_line: &str) -> Vec<Diagnostic> {
        let table = carsharing_symbols();
        let (_, diags) = resolve_one(&flow_fixture(guard_line), &table);
        diags
    }

    #[test]
    fn undeclared_guard_param() {
        let diags = guard_diags("q.age >= 18");
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].code, codes::UNDECLARED_GUARD_PARAM);
    }

    #[test]
    fn ordering_on_string_rejected() {
        let diags = guard_diags("p.name >= 18");
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].code, codes::GUARD_TYPE);

        let diags = guard_diags("p.name < \"Bob\"");
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].code, codes::GUARD_TYPE);
        assert!(diags[0].message.contains("ordering"));
    }

    #[test]
    fn string_equality_allowed() {
        assert!(guard_diags("p.name == \"Ann\"").is_empty());
        assert!(guard_diags("p.name != \"Ann\" && p.age >= 18").is_empty());
    }

    #[test]
    fn email_ordering_rejected() {
        let diags = guard_diags("p.email > \"a@b.c\"");
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("Email"));
    }

    #[test]
    fn unknown_guard_attribute() {
        let diags = guard_diags("p.height >= 18");
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::UNKNOWN_ATTRIBUTE);
    }

    #[test]
    fn role_in_guard_rejected() {
        let diags = guard_diags("p.cars == 1");
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::GUARD_TYPE);
        assert!(diags[0].message.contains("role"));
    }

    #[test]
    fn date_literal_checked_at_link_time() {
        let table = carsharing_symbols();
        let mut table = table;
        let extra = parse_classviews(
            "Car { editor carEditor { constYear; } display carView { constYear; } }",
            "Car.cv",
        )
        .unwrap();
        resolve_classviews(&[extra], &mut table);
        let src = |guard: &str| {
            format!(
                "activity A {{\
                   action Reg {{ out: Car c; view: c = Car.carEditor(); }}\
                   action Done {{ in: Car c; view: Car.carView(c); }}\
                   initial -> Reg;\
                   Reg.c -> [{guard}] Done.c;\
                   Done -> final;\
                 }}"
            )
        };
        let (_, diags) = resolve_one(&src("c.constYear >= \"2019-05-01\""), &table);
        assert!(diags.is_empty(), "{diags:?}");
        let (_, diags) = resolve_one(&src("c.constYear >= \"soon\""), &table);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::GUARD_TYPE);
        assert!(diags[0].message.contains("date literal"));
    }

    #[test]
    fn enum_against_string_rejected() {
        let table = carsharing_symbols();
        let mut table = table;
        let extra = parse_classviews(
            "Car { editor carEditor { brand; } display carView { brand; } }",
            "Car.cv",
        )
        .unwrap();
        resolve_classviews(&[extra], &mut table);
        let src = "activity A {\
            action Reg { out: Car c; view: c = Car.carEditor(); }\
            action Done { in: Car c; view: Car.carView(c); }\
            initial -> Reg;\
            Reg.c -> [c.brand == \"AUDI\"] Done.c;\
            Done -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::GUARD_TYPE);
        assert!(diags[0].message.contains("Brand.LITERAL"));
    }

    #[test]
    fn unknown_enum_literal_rejected() {
        let table = carsharing_symbols();
        let mut table = table;
        let extra = parse_classviews(
            "Car { editor carEditor { brand; } display carView { brand; } }",
            "Car.cv",
        )
        .unwrap();
        resolve_classviews(&[extra], &mut table);
        let src = "activity A {\
            action Reg { out: Car c; view: c = Car.carEditor(); }\
            action Done { in: Car c; view: Car.carView(c); }\
            initial -> Reg;\
            Reg.c -> [c.brand == Brand.NSU] Done.c;\
            Done -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::GUARD_TYPE);
        assert!(diags[0].message.contains("NSU"));
    }

    #[test]
    fn editor_call_must_assign() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Reg { out: Person p; view: Person.registration(); }\
            initial -> Reg;\
            Reg -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].code, codes::PARAM_TYPE_MISMATCH);
        assert!(diags[0].message.contains("out-param"));
    }

    #[test]
    fn editor_assign_target_must_be_out_param() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Reg { in: Person p; view: p = Person.registration(); }\
            initial -> Reg.p;\
            Reg -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        // The bad assign and the impossible initial object flow both fire.
        assert!(diags.iter().any(|d| d.code == codes::PARAM_TYPE_MISMATCH
            && d.message.contains("not an out-param")));
    }

    #[test]
    fn editor_assign_type_mismatch() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Reg { out: Car c; view: c = Person.registration(); }\
            initial -> Reg;\
            Reg -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::PARAM_TYPE_MISMATCH);
        assert!(diags[0].message.contains("Car"));
    }

    #[test]
    fn display_call_cannot_assign() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Reg { out: Person p; view: p = Person.registration(); }\
            action Show { in: Person p; out: Person q; view: q = Person.welcome(p); }\
            initial -> Reg;\
            Reg.p -> Show.p;\
            Show -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert!(diags[0].message.contains("does not produce a result"));
    }

    #[test]
    fn display_with_fields_needs_argument() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Reg { out: Person p; view: p = Person.registration(); }\
            action Show { in: Person p; view: Person.welcome(); }\
            initial -> Reg;\
            Reg.p -> Show.p;\
            Show -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert!(diags[0].message.contains("needs an object argument"));
    }

    #[test]
    fn text_only_display_without_argument_is_fine() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Reg { out: Person p; view: p = Person.registration(); }\
            action Oops { view: Person.error(); }\
            initial -> Reg;\
            Reg -> Oops;\
            Oops -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert!(diags.is_empty(), "{diags:?}");
    }

    #[test]
    fn field_view_cannot_be_invoked() {
        let mut table = carsharing_symbols();
        let extra = parse_classviews(
            "Car { field carBasics { brand; } }",
            "Car.cv",
        )
        .unwrap();
        resolve_classviews(&[extra], &mut table);
        let src = "activity A {\
            action Show { view: Car.carBasics(); }\
            initial -> Show;\
            Show -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::UNKNOWN_VIEW);
        assert!(diags[0].message.contains("field view"));
    }

    #[test]
    fn unknown_action_endpoint() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Oops { view: Person.error(); }\
            initial -> Oops;\
            Oops -> Ghost;\
        }";
        let (_, diags) = resolve_one(src, &table);
        // Unknown endpoint plus the missing-final warning.
        assert!(diags.iter().any(|d| d.code == codes::UNKNOWN_ENDPOINT));
        assert!(diags.iter().any(|d| d.code == codes::NO_FINAL));
    }

    #[test]
    fn target_with_in_params_needs_suffix() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Reg { out: Person p; view: p = Person.registration(); }\
            action Show { in: Person p; view: Person.welcome(p); }\
            initial -> Reg;\
            Reg -> Show;\
            Show -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].code, codes::PARAM_TYPE_MISMATCH);
        assert!(diags[0].message.contains("Show.p"));
    }

    #[test]
    fn object_flow_type_mismatch() {
        let mut table = carsharing_symbols();
        let extra = parse_classviews(
            "Car { editor carEditor { brand; } display carView { brand; } }",
            "Car.cv",
        )
        .unwrap();
        resolve_classviews(&[extra], &mut table);
        let src = "activity A {\
            action Reg { out: Car c; view: c = Car.carEditor(); }\
            action Show { in: Person p; view: Person.welcome(p); }\
            initial -> Reg;\
            Reg.c -> Show.p;\
            Show -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].code, codes::PARAM_TYPE_MISMATCH);
        assert!(diags[0].message.contains("type mismatch"));
    }

    #[test]
    fn exactly_one_initial_transition() {
        let table = carsharing_symbols();
        let none = "activity A {\
            action Oops { view: Person.error(); }\
            Oops -> final;\
        }";
        let (_, diags) = resolve_one(none, &table);
        assert!(diags.iter().any(|d| d.code == codes::INITIAL_TRANSITIONS));

        let two = "activity A {\
            action Oops { view: Person.error(); }\
            initial -> Oops;\
            initial -> Oops;\
            Oops -> final;\
        }";
        let (_, diags) = resolve_one(two, &table);
        let dupes: Vec<_> = diags
            .iter()
            .filter(|d| d.code == codes::INITIAL_TRANSITIONS)
            .collect();
        assert_eq!(dupes.len(), 1);
        assert!(!dupes[0].related.is_empty());
    }

    #[test]
    fn missing_final_warns() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Oops { view: Person.error(); }\
            initial -> Oops;\
            Oops -> Oops;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::NO_FINAL);
        assert_eq!(diags[0].severity, Severity::Warning);
    }

    #[test]
    fn initial_to_final_is_legal() {
        let table = carsharing_symbols();
        let (_, diags) = resolve_one("activity A { initial -> final; }", &table);
        assert!(diags.is_empty(), "{diags:?}");
    }

    #[test]
    fn unreachable_action_warns() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Oops { view: Person.error(); }\
            action Island { view: Person.error(); }\
            initial -> Oops;\
            Oops -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].code, codes::UNREACHABLE_ACTION);
        assert_eq!(diags[0].severity, Severity::Warning);
        assert!(diags[0].message.contains("Island"));
    }

    #[test]
    fn code_action_warns_but_links() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Work { code { legacy(); } }\
            initial -> Work;\
            Work -> final;\
        }";
        let (resolved, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::CODE_ACTION);
        assert_eq!(diags[0].severity, Severity::Warning);
        assert!(resolved.contains_key("A"));
    }

    #[test]
    fn duplicate_activity_names() {
        let table = carsharing_symbols();
        let a = parse_activity("activity A { initial -> final; }", "a.ad").unwrap();
        let b = parse_activity("activity A { initial -> final; }", "b.ad").unwrap();
        let (resolved, diags) = resolve_activities(&[a, b], &table);
        assert_eq!(resolved.len(), 1);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::DUPLICATE_ACTIVITY);
    }

    #[test]
    fn unknown_param_class() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Reg { out: Ghost g; view: g = Person.registration(); }\
            initial -> Reg;\
            Reg -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert!(diags
            .iter()
            .any(|d| d.code == codes::PARAM_TYPE_MISMATCH && d.message.contains("Ghost")));
    }

    #[test]
    fn enum_param_rejected() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Reg { out: Brand b; view: b = Person.registration(); }\
            initial -> Reg;\
            Reg -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert!(diags
            .iter()
            .any(|d| d.code == codes::PARAM_TYPE_MISMATCH && d.message.contains("enum type")));
    }

    #[test]
    fn unknown_view_class() {
        let table = carsharing_symbols();
        let src = "activity A {\
            action Show { view: Ghost.something(); }\
            initial -> Show;\
            Show -> final;\
        }";
        let (_, diags) = resolve_one(src, &table);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::UNKNOWN_VIEW);
        assert!(diags[0].message.contains("Ghost.something"));
    }
}
