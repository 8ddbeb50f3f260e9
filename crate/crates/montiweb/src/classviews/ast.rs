//! AST for the classviews language.

use crate::annotation::Annotation;
use crate::span::SourceSpan;

/// One `.cv` file: views for exactly one class, keyed by the leading
/// identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassviewsFile {
    pub annotations: Vec<Annotation>,
    pub class_name: String,
    pub attributes_block: Option<AttributesBlock>,
    pub views: Vec<ViewDef>,
    pub span: SourceSpan,
}

/// `attributes { ... }`: annotation rules that apply to all views in
/// the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributesBlock {
    pub entries: Vec<AttributesEntry>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributesEntry {
    pub annotations: Vec<Annotation>,
    pub attribute_name: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewModifier {
    Editor,
    Display,
    Field,
}

impl ViewModifier {
    pub fn keyword(self) -> &'static str {
        match self {
            ViewModifier::Editor => "editor",
            ViewModifier::Display => "display",
            ViewModifier::Field => "field",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "editor" => Some(ViewModifier::Editor),
            "display" => Some(ViewModifier::Display),
            "field" => Some(ViewModifier::Field),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewDef {
    pub annotations: Vec<Annotation>,
    pub modifier: ViewModifier,
    /// Anonymous views are legal but unreferenceable.
    pub name: Option<String>,
    /// Never empty; the grammar demands at least one element.
    pub elements: Vec<ViewElement>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViewElement {
    AttributeRef(AttributeRef),
    StaticText(StaticText),
    Include(Include),
}

/// `@AsImage(alt=false) email;`: a reference to an attribute or
/// relation role of the file's class, with an optional per-element
/// mode override.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeRef {
    pub annotations: Vec<Annotation>,
    pub modifier_override: Option<ViewModifier>,
    pub name: String,
    pub span: SourceSpan,
}

/// `text {Welcome to Carsharing Service}`; the interior is captured
/// raw, brace-balanced, with outer whitespace trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticText {
    pub annotations: Vec<Annotation>,
    pub text: String,
    pub span: SourceSpan,
}

/// `include protectedMail;`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Include {
    pub view_name: String,
    pub span: SourceSpan,
}

impl ViewElement {
    pub fn span(&self) -> &SourceSpan {
        match self {
            ViewElement::AttributeRef(el) => &el.span,
            ViewElement::StaticText(el) => &el.span,
            ViewElement::Include(el) => &el.span,
        }
    }
}

impl ClassviewsFile {
    pub fn strip_spans(&mut self) {
        self.span = SourceSpan::synthetic();
        for ann in &mut self.annotations {
            ann.strip_spans();
        }
        if let Some(block) = &mut self.attributes_block {
            block.span = SourceSpan::synthetic();
            for entry in &mut block.entries {
                entry.span = SourceSpan::synthetic();
                for ann in &mut entry.annotations {
                    ann.strip_spans();
                }
            }
        }
        for view in &mut self.views {
            view.span = SourceSpan::synthetic();
            for ann in &mut view.annotations {
                ann.strip_spans();
            }
            for element in &mut view.elements {
                match element {
                    ViewElement::AttributeRef(el) => {
                        el.span = SourceSpan::synthetic();
                        for ann in &mut el.annotations {
                            ann.strip_spans();
                        }
                    }
                    ViewElement::StaticText(el) => {
                        el.span = SourceSpan::synthetic();
                        for ann in &mut el.annotations {
                            ann.strip_spans();
                        }
                    }
                    ViewElement::Include(el) => {
                        el.span = SourceSpan::synthetic();
                    }
                }
            }
        }
    }
}
