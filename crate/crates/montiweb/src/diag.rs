//! Diagnostics shared by every pipeline stage.
//!
//! Codes are stable identifiers of the form `MWnnn`, namespaced by stage:
//! MW0xx lexical/syntactic, MW1xx class-diagram semantic, MW2xx classviews
//! semantic, MW3xx activity semantic, MW4xx cross-model, MW5xx runtime,
//! MW6xx generation.

use std::collections::BTreeMap;
use std::fmt;

use crate::span::SourceSpan;

/// Stable diagnostic codes, grouped by namespace.
pub mod codes {
    pub const UNEXPECTED_CHAR: &str = "MW001";
    pub const UNTERMINATED_STRING: &str = "MW002";
    pub const UNTERMINATED_COMMENT: &str = "MW003";
    pub const INT_OUT_OF_RANGE: &str = "MW004";
    pub const BAD_ANNOTATION: &str = "MW010";
    pub const SYNTAX: &str = "MW020";
    pub const EMPTY_VIEW_BODY: &str = "MW021";

    pub const DUPLICATE_IN_DIAGRAM: &str = "MW101";
    pub const CARDINALITY_RANGE: &str = "MW102";
    pub const UNDIRECTED_COMPOSITION: &str = "MW103";
    pub const DUPLICATE_ACROSS_DIAGRAMS: &str = "MW104";
    pub const DUPLICATE_ROLE: &str = "MW105";

    pub const DUPLICATE_VIEW: &str = "MW201";
    pub const ANONYMOUS_VIEW: &str = "MW202";
    pub const ANNOTATION_MISUSE: &str = "MW203";
    pub const UNKNOWN_ANNOTATION: &str = "MW204";
    pub const DUPLICATE_CLASSVIEWS_FILE: &str = "MW205";

    pub const DUPLICATE_ACTION: &str = "MW301";
    pub const ENDPOINT_ROLE: &str = "MW302";
    pub const CODE_ACTION: &str = "MW303";
    pub const INITIAL_TRANSITIONS: &str = "MW304";
    pub const NO_FINAL: &str = "MW305";
    pub const DUPLICATE_PARAM: &str = "MW306";
    pub const DUPLICATE_ACTIVITY: &str = "MW307";

    pub const UNKNOWN_ATTRIBUTE_TYPE: &str = "MW401";
    pub const UNKNOWN_VIEW: &str = "MW402";
    pub const UNKNOWN_CLASS_FOR_VIEWS: &str = "MW403";
    pub const UNKNOWN_ATTRIBUTE: &str = "MW404";
    pub const UNKNOWN_INCLUDE: &str = "MW405";
    pub const INCLUDE_CYCLE: &str = "MW406";
    pub const PARAM_TYPE_MISMATCH: &str = "MW407";
    pub const UNDECLARED_GUARD_PARAM: &str = "MW408";
    pub const GUARD_TYPE: &str = "MW409";
    pub const UNKNOWN_ENDPOINT: &str = "MW410";
    pub const NO_ACTIVITIES: &str = "MW411";
    pub const UNREACHABLE_ACTION: &str = "MW412";

    pub const CARDINALITY_VIOLATION: &str = "MW501";
    pub const UNKNOWN_ENTITY: &str = "MW502";
    pub const CODE_NOT_EXECUTABLE: &str = "MW503";
    pub const GUARD_EVAL: &str = "MW504";
    pub const NO_MATCHING_GUARD: &str = "MW505";
    pub const SCRIPT_ACTION_MISMATCH: &str = "MW506";
    pub const SCRIPT_EXHAUSTED: &str = "MW507";

    pub const GENERATION_REFUSED: &str = "MW601";
    pub const GENERATION_IO: &str = "MW602";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => write!(f, "error"),
            Severity::Warning => write!(f, "warning"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub span: SourceSpan,
    pub related: Vec<(SourceSpan, String)>,
}

impl Diagnostic {
    pub fn error(code: &str, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic::new(Severity::Error, code, message, span)
    }

    pub fn warning(code: &str, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic::new(Severity::Warning, code, message, span)
    }

    fn new(severity: Severity, code: &str, message: impl Into<String>, span: SourceSpan) -> Self {
        let message = message.into();
        debug_assert!(is_valid_code(code), "bad diagnostic code {code:?}");
        debug_assert!(!message.is_empty());
        Diagnostic {
            severity,
            code: code.to_string(),
            message,
            span,
            related: Vec::new(),
        }
    }

    pub fn with_related(mut self, span: SourceSpan, note: impl Into<String>) -> Self {
        self.related.push((span, note.into()));
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Total ordering used for rendering: (file, line, column, code).
    pub fn sort_key(&self) -> (String, u32, u32, String) {
        (
            self.span.file.clone(),
            self.span.start_line,
            self.span.start_col,
            self.code.clone(),
        )
    }
}

fn is_valid_code(code: &str) -> bool {
    code.len() == 5 && code.starts_with("MW") && code[2..].bytes().all(|b| b.is_ascii_digit())
}

/// Styling applied by [`render_diagnostics`]. `Ansi` colors the severity word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderStyle {
    #[default]
    Plain,
    Ansi,
}

/// Render diagnostics deterministically: one block per diagnostic, ordered
/// by (file, start line, start column, code), with the offending source line
/// quoted and a caret marker underneath. `sources` maps file path to file
/// content; files missing from the map render without the quoted line.
pub fn render_diagnostics(
    diags: &[Diagnostic],
    sources: &BTreeMap<String, String>,
    style: RenderStyle,
) -> String {
    let mut sorted: Vec<&Diagnostic> = diags.iter().collect();
    sorted.sort_by_key(|d| d.sort_key());

    let mut out = String::new();
    for (i, diag) in sorted.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        render_one(&mut out, diag, sources, style);
    }
    out
}

fn render_one(
    out: &mut String,
    diag: &Diagnostic,
    sources: &BTreeMap<String, String>,
    style: RenderStyle,
) {
    let severity = match (style, diag.severity) {
        (RenderStyle::Plain, s) => s.to_string(),
        (RenderStyle::Ansi, Severity::Error) => format!("\x1b[1;31m{}\x1b[0m", Severity::Error),
        (RenderStyle::Ansi, Severity::Warning) => {
            format!("\x1b[1;33m{}\x1b[0m", Severity::Warning)
        }
    };
    out.push_str(&format!("{severity}[{}]: {}\n", diag.code, diag.message));
    render_location(out, &diag.span, sources);
    for (span, note) in &diag.related {
        out.push_str(&format!(" note: {note}\n"));
        render_location(out, span, sources);
    }
}

fn render_location(out: &mut String, span: &SourceSpan, sources: &BTreeMap<String, String>) {
    if span.is_synthetic() {
        return;
    }
    out.push_str(&format!(
        " --> {}:{}:{}\n",
        span.file, span.start_line, span.start_col
    ));
    let Some(text) = sources.get(&span.file) else {
        return;
    };
    let Some(line) = text.lines().nth(span.start_line as usize - 1) else {
        return;
    };
    let prefix = format!("  {}: ", span.start_line);
    out.push_str(&prefix);
    out.push_str(line);
    out.push('\n');

    let line_chars = line.chars().count() as u32;
    let col = span.start_col.min(line_chars + 1);
    let width = if span.end_line == span.start_line {
        span.end_col.saturating_sub(span.start_col).max(1)
    } else {
        (line_chars + 1).saturating_sub(col).max(1)
    };
    out.push_str(&" ".repeat(prefix.chars().count() + col as usize - 1));
    out.push_str(&"^".repeat(width as usize));
    out.push('\n');
}
