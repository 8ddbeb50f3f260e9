//! Source positions attached to every AST node and diagnostic.

use std::fmt;

/// A contiguous region of one source file.
///
/// Lines and columns are 1-based and count characters, not bytes. The end
/// column is exclusive: a single-character token at column 5 spans 5..6.
/// Programmatically built ASTs use [`SourceSpan::synthetic`], which carries
/// no file and compares equal to itself only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceSpan {
    pub file: String,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub fn new(
        file: impl Into<String>,
        start_line: u32,
        start_col: u32,
        end_line: u32,
        end_col: u32,
    ) -> Self {
        let span = SourceSpan {
            file: file.into(),
            start_line,
            start_col,
            end_line,
            end_col,
        };
        debug_assert!(
            (span.start_line, span.start_col) <= (span.end_line, span.end_col),
            "span start must not exceed end: {span:?}"
        );
        span
    }

    /// Placeholder span for nodes that were not parsed from a file.
    pub fn synthetic() -> Self {
        SourceSpan {
            file: String::new(),
            start_line: 1,
            start_col: 1,
            end_line: 1,
            end_col: 1,
        }
    }

    pub fn is_synthetic(&self) -> bool {
        self.file.is_empty()
    }

    /// Smallest span covering both `self` and `other`.
    ///
    /// Both spans must point into the same file; synthetic spans are absorbed.
    pub fn merge(&self, other: &SourceSpan) -> SourceSpan {
        if self.is_synthetic() {
            return other.clone();
        }
        if other.is_synthetic() {
            return self.clone();
        }
        let (start_line, start_col) = (self.start_line, self.start_col)
            .min((other.start_line, other.start_col));
        let (end_line, end_col) = (self.end_line, self.end_col).max((other.end_line, other.end_col));
        SourceSpan {
            file: self.file.clone(),
            start_line,
            start_col,
            end_line,
            end_col,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}
