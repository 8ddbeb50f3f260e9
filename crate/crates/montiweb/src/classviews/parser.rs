//! Recursive-descent parser for `.cv` files.
//!
//! Keywords are contextual: an attribute may be named `text`, `include`
//! or `display`; one token of lookahead past the identifier settles
//! what it is. `text { ... }` interiors are captured raw through the
//! cursor, so arbitrary prose is legal there.

use crate::cursor::Cursor;
use crate::diag::{codes, Diagnostic};
use crate::lexer::TokenKind;

use super::ast::*;

/// Contextual keywords of the classviews language.
pub const KEYWORDS: &[&str] = &["attributes", "editor", "display", "field", "text", "include"];

pub fn parse_classviews(src: &str, file: &str) -> Result<ClassviewsFile, Vec<Diagnostic>> {
    let mut cursor = Cursor::new(src, file);
    let parsed = parse_file(&mut cursor).map_err(|d| vec![d])?;
    let duplicates = check_duplicate_views(&parsed);
    if duplicates.is_empty() {
        Ok(parsed)
    } else {
        Err(duplicates)
    }
}

fn parse_file(cursor: &mut Cursor) -> Result<ClassviewsFile, Diagnostic> {
    let annotations = cursor.parse_annotations()?;
    let (class_name, name_span) = cursor.expect_ident("as the class name")?;
    cursor.expect(TokenKind::LBrace, "to open the classviews body")?;

    let mut file = ClassviewsFile {
        annotations,
        class_name,
        attributes_block: None,
        views: Vec::new(),
        span: name_span,
    };

    loop {
        if cursor.at(&TokenKind::RBrace)? {
            break;
        }
        if cursor.at_ident("attributes")? && cursor.peek2_kind()? == TokenKind::LBrace {
            let block = parse_attributes_block(cursor)?;
            if let Some(first) = &file.attributes_block {
                return Err(Diagnostic::error(
                    codes::SYNTAX,
                    "a classviews file may contain at most one attributes block",
                    block.span,
                )
                .with_related(first.span.clone(), "first block here"));
            }
            file.attributes_block = Some(block);
        } else {
            file.views.push(parse_view(cursor)?);
        }
    }
    let close = cursor.expect(TokenKind::RBrace, "to close the classviews body")?;
    cursor.expect_eof()?;
    file.span = file.span.merge(&close.span);
    Ok(file)
}

fn parse_attributes_block(cursor: &mut Cursor) -> Result<AttributesBlock, Diagnostic> {
    let kw = cursor.expect_keyword("attributes", "to begin the attributes block")?;
    cursor.expect(TokenKind::LBrace, "to open the attributes block")?;
    let mut entries = Vec::new();
    while !cursor.at(&TokenKind::RBrace)? {
        let annotations = cursor.parse_annotations()?;
        let (attribute_name, name_span) = cursor.expect_ident("as an attribute name")?;
        let semi = cursor.expect(TokenKind::Semi, "after the attribute rule")?;
        let span = annotations
            .first()
            .map(|a| a.span.clone())
            .unwrap_or(name_span)
            .merge(&semi.span);
        entries.push(AttributesEntry {
            annotations,
            attribute_name,
            span,
        });
    }
    let close = cursor.expect(TokenKind::RBrace, "to close the attributes block")?;
    Ok(AttributesBlock {
        entries,
        span: kw.span.merge(&close.span),
    })
}

fn parse_view(cursor: &mut Cursor) -> Result<ViewDef, Diagnostic> {
    let annotations = cursor.parse_annotations()?;
    let (modifier_word, modifier_span) =
        cursor.expect_ident("to begin a view (`editor`, `display` or `field`)")?;
    let modifier = match ViewModifier::from_keyword(&modifier_word) {
        Some(modifier) => modifier,
        None => {
            return Err(cursor.syntax_error(
                format!("expected `editor`, `display` or `field` to begin a view, found `{modifier_word}`"),
                modifier_span,
            ));
        }
    };
    let name = if let TokenKind::Ident(_) = cursor.peek_kind()? {
        Some(cursor.expect_ident("as the view name")?.0)
    } else {
        None
    };
    let open = cursor.expect(TokenKind::LBrace, "to open the view body")?;

    let mut elements = Vec::new();
    while !cursor.at(&TokenKind::RBrace)? {
        elements.push(parse_element(cursor)?);
    }
    let close = cursor.expect(TokenKind::RBrace, "to close the view body")?;

    let span = annotations
        .first()
        .map(|a| a.span.clone())
        .unwrap_or(modifier_span)
        .merge(&close.span);
    if elements.is_empty() {
        return Err(Diagnostic::error(
            codes::EMPTY_VIEW_BODY,
            match &name {
                Some(name) => format!("view `{name}` has no elements"),
                None => "anonymous view has no elements".to_string(),
            },
            open.span.merge(&close.span),
        ));
    }
    Ok(ViewDef {
        annotations,
        modifier,
        name,
        elements,
        span,
    })
}

fn parse_element(cursor: &mut Cursor) -> Result<ViewElement, Diagnostic> {
    let annotations = cursor.parse_annotations()?;

    if cursor.at_ident("text")? && cursor.peek2_kind()? == TokenKind::LBrace {
        let kw = cursor.bump()?;
        let (content, content_span) = cursor.raw_block("text")?;
        return Ok(ViewElement::StaticText(StaticText {
            annotations,
            text: content.trim().to_string(),
            span: kw.span.merge(&content_span),
        }));
    }

    if cursor.at_ident("include")? && matches!(cursor.peek2_kind()?, TokenKind::Ident(_)) {
        let kw = cursor.bump()?;
        if let Some(first) = annotations.first() {
            return Err(cursor.syntax_error(
                "annotations are not allowed on `include`; annotate the included view instead",
                first.span.clone(),
            ));
        }
        let (view_name, _) = cursor.expect_ident("as the included view name")?;
        let semi = cursor.expect(TokenKind::Semi, "after the include")?;
        return Ok(ViewElement::Include(Include {
            view_name,
            span: kw.span.merge(&semi.span),
        }));
    }

    // A leading modifier keyword followed by another identifier is a
    // per-element mode override; otherwise the word is the attribute
    // name itself.
    let (first_word, first_span) = cursor.expect_ident("as a view element")?;
    let (modifier_override, name) = match ViewModifier::from_keyword(&first_word) {
        Some(modifier) if matches!(cursor.peek_kind()?, TokenKind::Ident(_)) => {
            let (name, _) = cursor.expect_ident("as the attribute name")?;
            (Some(modifier), name)
        }
        _ => (None, first_word),
    };
    let semi = cursor.expect(TokenKind::Semi, "after the attribute reference")?;
    let span = annotations
        .first()
        .map(|a| a.span.clone())
        .unwrap_or(first_span)
        .merge(&semi.span);
    Ok(ViewElement::AttributeRef(AttributeRef {
        annotations,
        modifier_override,
        name,
        span,
    }))
}

fn check_duplicate_views(file: &ClassviewsFile) -> Vec<Diagnostic> {
    use std::collections::HashMap;
    let mut diags = Vec::new();
    let mut seen: HashMap<&str, &crate::span::SourceSpan> = HashMap::new();
    for view in &file.views {
        let Some(name) = &view.name else { continue };
        match seen.get(name.as_str()) {
            Some(first) => diags.push(
                Diagnostic::error(
                    codes::DUPLICATE_VIEW,
                    format!("view `{name}` is defined more than once"),
                    view.span.clone(),
                )
                .with_related((*first).clone(), "first defined here"),
            ),
            None => {
                seen.insert(name, &view.span);
            }
        }
    }
    diags
}
