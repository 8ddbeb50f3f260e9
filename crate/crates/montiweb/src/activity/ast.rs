//! AST for the activity-diagram language.

use std::fmt;

use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityDef {
    pub name: String,
    pub actions: Vec<ActionDef>,
    pub transitions: Vec<TransitionStmt>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDef {
    pub name: String,
    pub inputs: Vec<ParamDecl>,
    pub outputs: Vec<ParamDecl>,
    pub content: ActionContent,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamDecl {
    /// Class name, unresolved at parse time.
    pub type_name: String,
    pub name: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionContent {
    ViewCall(ViewCall),
    /// Embedded code, parsed opaquely and never executed.
    OpaqueCode(OpaqueCode),
}

/// `view: p = Person.registration();` or `view: Person.welcome(p);`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewCall {
    pub assign_to: Option<String>,
    pub class_name: String,
    pub view_name: String,
    pub argument: Option<String>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpaqueCode {
    pub text: String,
    pub span: SourceSpan,
}

/// `Registration.p -> [p.age >= 18] Welcome.p | [p.age < 18] Error.p;`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionStmt {
    pub sources: Vec<Endpoint>,
    pub alternatives: Vec<Alternative>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternative {
    pub guard: Option<GuardExpr>,
    pub target: Endpoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Initial(SourceSpan),
    Final(SourceSpan),
    ActionRef {
        action: String,
        /// Object-flow suffix: `Registration.p` passes param `p`.
        param: Option<String>,
        span: SourceSpan,
    },
}

impl Endpoint {
    pub fn span(&self) -> &SourceSpan {
        match self {
            Endpoint::Initial(span) | Endpoint::Final(span) => span,
            Endpoint::ActionRef { span, .. } => span,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Endpoint::Initial(_) => "initial".to_string(),
            Endpoint::Final(_) => "final".to_string(),
            Endpoint::ActionRef {
                action,
                param: Some(param),
                ..
            } => format!("{action}.{param}"),
            Endpoint::ActionRef { action, .. } => action.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Ge,
    Le,
    Gt,
    Lt,
    Eq,
    Ne,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Ge => ">=",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Lt => "<",
            CompareOp::Eq => "==",
            CompareOp::Ne => "!=",
        }
    }

    /// Ordering operators are restricted to ordered types by the linker.
    pub fn is_ordering(self) -> bool {
        matches!(self, CompareOp::Ge | CompareOp::Le | CompareOp::Gt | CompareOp::Lt)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuardExpr {
    Or(Box<GuardExpr>, Box<GuardExpr>),
    And(Box<GuardExpr>, Box<GuardExpr>),
    Compare {
        op: CompareOp,
        lhs: Operand,
        rhs: Operand,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    /// `p.age`. The linker rebinds this to [`Operand::EnumLiteral`]
    /// when the leading segment names an enum rather than a param.
    ParamAttribute {
        param: String,
        attribute: String,
        span: SourceSpan,
    },
    Int(i64, SourceSpan),
    Str(String, SourceSpan),
    /// `Brand.AUDI` after linking; never produced by the parser.
    EnumLiteral {
        enum_name: String,
        literal: String,
        span: SourceSpan,
    },
}

impl Operand {
    pub fn span(&self) -> &SourceSpan {
        match self {
            Operand::ParamAttribute { span, .. }
            | Operand::Int(_, span)
            | Operand::Str(_, span)
            | Operand::EnumLiteral { span, .. } => span,
        }
    }
}

/// Canonical guard text: `||` binds weaker than `&&`, so only an `Or`
/// nested under an `And` needs parentheses. Traces and descriptors both
/// rely on this rendering being stable.
impl fmt::Display for GuardExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(expr: &GuardExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if matches!(expr, GuardExpr::Or(..)) {
                write!(f, "({expr})")
            } else {
                write!(f, "{expr}")
            }
        }
        match self {
            GuardExpr::Or(l, r) => write!(f, "{l} || {r}"),
            GuardExpr::And(l, r) => {
                side(l, f)?;
                write!(f, " && ")?;
                side(r, f)
            }
            GuardExpr::Compare { op, lhs, rhs } => write!(f, "{lhs} {} {rhs}", op.symbol()),
        }
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::ParamAttribute { param, attribute, .. } => write!(f, "{param}.{attribute}"),
            Operand::Int(v, _) => write!(f, "{v}"),
            Operand::Str(s, _) => {
                write!(f, "\"")?;
                for c in s.chars() {
                    match c {
                        '"' | '\\' => write!(f, "\\{c}")?,
                        _ => write!(f, "{c}")?,
                    }
                }
                write!(f, "\"")
            }
            Operand::EnumLiteral { enum_name, literal, .. } => write!(f, "{enum_name}.{literal}"),
        }
    }
}

impl GuardExpr {
    pub fn strip_spans(&mut self) {
        match self {
            GuardExpr::Or(l, r) | GuardExpr::And(l, r) => {
                l.strip_spans();
                r.strip_spans();
            }
            GuardExpr::Compare { lhs, rhs, .. } => {
                for operand in [lhs, rhs] {
                    match operand {
                        Operand::ParamAttribute { span, .. }
                        | Operand::Int(_, span)
                        | Operand::Str(_, span)
                        | Operand::EnumLiteral { span, .. } => *span = SourceSpan::synthetic(),
                    }
                }
            }
        }
    }
}

impl ActivityDef {
    pub fn strip_spans(&mut self) {
        self.span = SourceSpan::synthetic();
        for action in &mut self.actions {
            action.span = SourceSpan::synthetic();
            for param in action.inputs.iter_mut().chain(action.outputs.iter_mut()) {
                param.span = SourceSpan::synthetic();
            }
            match &mut action.content {
                ActionContent::ViewCall(call) => call.span = SourceSpan::synthetic(),
                ActionContent::OpaqueCode(code) => code.span = SourceSpan::synthetic(),
            }
        }
        for transition in &mut self.transitions {
            transition.span = SourceSpan::synthetic();
            for source in &mut transition.sources {
                strip_endpoint(source);
            }
            for alternative in &mut transition.alternatives {
                if let Some(guard) = &mut alternative.guard {
                    guard.strip_spans();
                }
                strip_endpoint(&mut alternative.target);
            }
        }
    }
}

fn strip_endpoint(endpoint: &mut Endpoint) {
    match endpoint {
        Endpoint::Initial(span) | Endpoint::Final(span) => *span = SourceSpan::synthetic(),
        Endpoint::ActionRef { span, .. } => *span = SourceSpan::synthetic(),
    }
}
