//! Compiler toolchain for the MontiWeb modeling languages.
//!
//! Three textual languages describe a data-centric web application:
//! class diagrams (`.cd`) define the data structures, classviews (`.cv`)
//! project them onto web views, and activity diagrams (`.ad`) wire the
//! views into page flows. This crate parses all three, links them into
//! one model, checks project-wide consistency, generates a static web
//! scaffold, and interprets activity flows over a typed object store.

pub mod activity;
pub mod annotation;
pub mod classdiagram;
pub mod classviews;
pub mod cli;
pub mod codegen;
pub mod cursor;
pub mod diag;
pub mod lexer;
pub mod linker;
pub mod project;
pub mod runtime;
pub mod span;

pub use annotation::{Annotation, AnnotationValue, QualifiedName};
pub use diag::{codes, render_diagnostics, Diagnostic, RenderStyle, Severity};
pub use span::SourceSpan;
