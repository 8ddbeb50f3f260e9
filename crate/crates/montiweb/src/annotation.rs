//! The `@Name(key=value, ...)` annotation sublanguage shared by all
//! frontends, plus qualified names like `Person.registration`.

use std::fmt;

use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnnotationValue {
    Int(i64),
    Bool(bool),
    Str(String),
}

impl fmt::Display for AnnotationValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnnotationValue::Int(v) => write!(f, "{v}"),
            AnnotationValue::Bool(v) => write!(f, "{v}"),
            AnnotationValue::Str(v) => write!(f, "\"{v}\""),
        }
    }
}

/// One `@Name` or `@Name(k=v, ...)` marker. Argument order is source order;
/// keys are unique within one annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub name: String,
    pub args: Vec<(String, AnnotationValue)>,
    pub span: SourceSpan,
}

impl Annotation {
    pub fn new(name: impl Into<String>) -> Self {
        Annotation {
            name: name.into(),
            args: Vec::new(),
            span: SourceSpan::synthetic(),
        }
    }

    pub fn with_arg(mut self, key: impl Into<String>, value: AnnotationValue) -> Self {
        self.args.push((key.into(), value));
        self
    }

    pub fn arg(&self, key: &str) -> Option<&AnnotationValue> {
        self.args.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn int_arg(&self, key: &str) -> Option<i64> {
        match self.arg(key) {
            Some(AnnotationValue::Int(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn bool_arg(&self, key: &str) -> Option<bool> {
        match self.arg(key) {
            Some(AnnotationValue::Bool(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn strip_spans(&mut self) {
        self.span = SourceSpan::synthetic();
    }
}

impl fmt::Display for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.name)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, (key, value)) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{key}={value}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Dotted identifier path, e.g. `Person.registration`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QualifiedName {
    pub segments: Vec<String>,
    pub span: SourceSpan,
}

impl QualifiedName {
    pub fn new(segments: Vec<String>) -> Self {
        debug_assert!(!segments.is_empty());
        QualifiedName {
            segments,
            span: SourceSpan::synthetic(),
        }
    }
}

impl fmt::Display for QualifiedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.segments.join("."))
    }
}
