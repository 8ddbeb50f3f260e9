//! Recursive-descent parser for `.cd` files.

use crate::cursor::Cursor;
use crate::diag::{codes, Diagnostic};
use crate::lexer::TokenKind;
use crate::span::SourceSpan;

use super::ast::*;

/// Contextual keywords of the class-diagram language. No view or
/// activity keyword appears here; the frontends stay disjoint.
pub const KEYWORDS: &[&str] = &["classdiagram", "class", "enum", "composition", "association"];

/// Parse one `.cd` file.
///
/// Syntax errors abort at the first offense; duplicate-name checks run
/// afterwards and report every violation.
pub fn parse_classdiagram(src: &str, file: &str) -> Result<ClassDiagram, Vec<Diagnostic>> {
    let mut cursor = Cursor::new(src, file);
    let diagram = parse_file(&mut cursor).map_err(|d| vec![d])?;
    let duplicates = check_duplicates(&diagram);
    if duplicates.is_empty() {
        Ok(diagram)
    } else {
        Err(duplicates)
    }
}

fn parse_file(cursor: &mut Cursor) -> Result<ClassDiagram, Diagnostic> {
    let kw = cursor.expect_keyword("classdiagram", "to begin a class diagram")?;
    let (name, _) = cursor.expect_ident("as the diagram name")?;
    cursor.expect(TokenKind::LBrace, "to open the diagram body")?;

    let mut diagram = ClassDiagram {
        name,
        classes: Vec::new(),
        enums: Vec::new(),
        relations: Vec::new(),
        span: kw.span,
    };

    loop {
        if cursor.at(&TokenKind::RBrace)? {
            break;
        }
        match cursor.peek_kind()? {
            TokenKind::Ident(word) if word == "class" => {
                diagram.classes.push(parse_class(cursor)?);
            }
            TokenKind::Ident(word) if word == "enum" => {
                diagram.enums.push(parse_enum(cursor)?);
            }
            TokenKind::Ident(word) if word == "composition" || word == "association" => {
                diagram.relations.push(parse_relation(cursor)?);
            }
            _ => {
                return Err(cursor.unexpected(
                    "in the diagram body",
                    "`class`, `enum`, `composition` or `association`",
                ));
            }
        }
    }
    let close = cursor.expect(TokenKind::RBrace, "to close the diagram body")?;
    cursor.expect_eof()?;
    diagram.span = diagram.span.merge(&close.span);
    Ok(diagram)
}

fn parse_class(cursor: &mut Cursor) -> Result<ClassDef, Diagnostic> {
    let kw = cursor.expect_keyword("class", "to begin a class")?;
    let (name, _) = cursor.expect_ident("as the class name")?;
    cursor.expect(TokenKind::LBrace, "to open the class body")?;
    let mut attributes = Vec::new();
    while !cursor.at(&TokenKind::RBrace)? {
        let (type_name, type_span) = cursor.expect_ident("as an attribute type")?;
        let (attr_name, name_span) = cursor.expect_ident("as the attribute name")?;
        cursor.expect(TokenKind::Semi, "after the attribute")?;
        attributes.push(AttributeDef {
            type_name,
            name: attr_name,
            span: type_span.merge(&name_span),
        });
    }
    let close = cursor.expect(TokenKind::RBrace, "to close the class body")?;
    Ok(ClassDef {
        name,
        attributes,
        span: kw.span.merge(&close.span),
    })
}

fn parse_enum(cursor: &mut Cursor) -> Result<EnumDef, Diagnostic> {
    let kw = cursor.expect_keyword("enum", "to begin an enum")?;
    let (name, _) = cursor.expect_ident("as the enum name")?;
    cursor.expect(TokenKind::LBrace, "to open the enum body")?;
    let mut literals = Vec::new();
    loop {
        let (lit, span) = cursor.expect_ident("as an enum literal")?;
        literals.push(EnumLiteral { name: lit, span });
        if !cursor.eat(&TokenKind::Comma)? {
            break;
        }
    }
    cursor.expect(TokenKind::Semi, "after the enum literals")?;
    let close = cursor.expect(TokenKind::RBrace, "to close the enum body")?;
    Ok(EnumDef {
        name,
        literals,
        span: kw.span.merge(&close.span),
    })
}

fn parse_relation(cursor: &mut Cursor) -> Result<RelationDef, Diagnostic> {
    let kw = cursor.bump()?;
    let kind = match &kw.kind {
        TokenKind::Ident(word) if word == "composition" => RelationKind::Composition,
        TokenKind::Ident(word) if word == "association" => RelationKind::Association,
        _ => unreachable!("dispatcher checks the keyword"),
    };
    let (source_class, _) = cursor.expect_ident("as the relation source class")?;
    let source_role = parse_role(cursor)?;
    if cursor.at(&TokenKind::LBracket)? {
        let span = cursor.peek()?.span.clone();
        return Err(cursor.syntax_error(
            "cardinality is only allowed on the target side of a relation",
            span,
        ));
    }

    let directed = if cursor.eat(&TokenKind::Arrow)? {
        true
    } else if cursor.at(&TokenKind::Minus)? {
        cursor.bump()?;
        cursor.expect(TokenKind::Minus, "to complete the `--` connector")?;
        false
    } else {
        return Err(cursor.unexpected("between the relation endpoints", "`->` or `--`"));
    };

    let target_role = parse_role(cursor)?;
    let (target_class, _) = cursor.expect_ident("as the relation target class")?;
    let target_cardinality = if cursor.at(&TokenKind::LBracket)? {
        parse_bracketed_cardinality(cursor)?
    } else {
        Cardinality::exactly_one()
    };
    let semi = cursor.expect(TokenKind::Semi, "after the relation")?;
    Ok(RelationDef {
        kind,
        source_class,
        source_role,
        target_class,
        target_role,
        target_cardinality,
        directed,
        span: kw.span.merge(&semi.span),
    })
}

fn parse_role(cursor: &mut Cursor) -> Result<Option<String>, Diagnostic> {
    if !cursor.eat(&TokenKind::LParen)? {
        return Ok(None);
    }
    let (role, _) = cursor.expect_ident("as a role name")?;
    cursor.expect(TokenKind::RParen, "to close the role")?;
    Ok(Some(role))
}

fn parse_bracketed_cardinality(cursor: &mut Cursor) -> Result<Cardinality, Diagnostic> {
    let open = cursor.expect(TokenKind::LBracket, "to open the cardinality")?;
    let (min, max) = cardinality_body(cursor)?;
    let close = cursor.expect(TokenKind::RBracket, "to close the cardinality")?;
    Ok(Cardinality::new(min, max, open.span.merge(&close.span)))
}

/// Parse the interior of a cardinality bracket, or `None` for the
/// implicit exactly-one cardinality.
///
/// Forms: `*` → [0,unbounded]; `n` → [n,n]; `n..m` → [n,m]; `n..*` →
/// [n,unbounded]. An inverted range is MW102; anything else is MW020.
pub fn parse_cardinality(text: Option<&str>) -> Result<Cardinality, Diagnostic> {
    let text = match text {
        None => return Ok(Cardinality::exactly_one()),
        Some(text) => text,
    };
    let mut cursor = Cursor::new(text, "<cardinality>");
    let (min, max) = cardinality_body(&mut cursor)?;
    if !cursor.at(&TokenKind::Eof)? {
        return Err(cursor.unexpected("after the cardinality", "end of input"));
    }
    Ok(Cardinality::new(min, max, SourceSpan::synthetic()))
}

fn cardinality_body(cursor: &mut Cursor) -> Result<(u32, CardinalityMax), Diagnostic> {
    if cursor.eat(&TokenKind::Star)? {
        return Ok((0, CardinalityMax::Unbounded));
    }
    let (min, min_span) = expect_bound(cursor)?;
    if !cursor.eat(&TokenKind::DotDot)? {
        return Ok((min, CardinalityMax::Bounded(min)));
    }
    if cursor.eat(&TokenKind::Star)? {
        return Ok((min, CardinalityMax::Unbounded));
    }
    let (max, max_span) = expect_bound(cursor)?;
    if max < min {
        return Err(Diagnostic::error(
            codes::CARDINALITY_RANGE,
            format!("cardinality upper bound {max} is smaller than lower bound {min}"),
            min_span.merge(&max_span),
        ));
    }
    Ok((min, CardinalityMax::Bounded(max)))
}

fn expect_bound(cursor: &mut Cursor) -> Result<(u32, SourceSpan), Diagnostic> {
    let token = cursor.peek()?;
    if let TokenKind::Int(v) = token.kind {
        let span = token.span.clone();
        if v < 0 || v > u32::MAX as i64 {
            return Err(cursor.syntax_error(format!("cardinality bound {v} is out of range"), span));
        }
        cursor.bump()?;
        Ok((v as u32, span))
    } else {
        Err(cursor.unexpected("as a cardinality bound", "`*` or a non-negative integer"))
    }
}

fn check_duplicates(diagram: &ClassDiagram) -> Vec<Diagnostic> {
    use std::collections::HashMap;
    let mut diags = Vec::new();

    let mut top_level: HashMap<&str, &SourceSpan> = HashMap::new();
    let mut named: Vec<(&str, &SourceSpan)> = diagram
        .classes
        .iter()
        .map(|c| (c.name.as_str(), &c.span))
        .chain(diagram.enums.iter().map(|e| (e.name.as_str(), &e.span)))
        .collect();
    named.sort_by_key(|(_, span)| (span.start_line, span.start_col));
    for (name, span) in named {
        match top_level.get(name) {
            Some(first) => diags.push(duplicate(
                format!("`{name}` is defined more than once in this diagram"),
                span,
                first,
            )),
            None => {
                top_level.insert(name, span);
            }
        }
    }

    for class in &diagram.classes {
        let mut seen: HashMap<&str, &SourceSpan> = HashMap::new();
        for attr in &class.attributes {
            match seen.get(attr.name.as_str()) {
                Some(first) => diags.push(duplicate(
                    format!("attribute `{}` is declared twice in class `{}`", attr.name, class.name),
                    &attr.span,
                    first,
                )),
                None => {
                    seen.insert(&attr.name, &attr.span);
                }
            }
        }
    }

    for en in &diagram.enums {
        let mut seen: HashMap<&str, &SourceSpan> = HashMap::new();
        for lit in &en.literals {
            match seen.get(lit.name.as_str()) {
                Some(first) => diags.push(duplicate(
                    format!("literal `{}` is declared twice in enum `{}`", lit.name, en.name),
                    &lit.span,
                    first,
                )),
                None => {
                    seen.insert(&lit.name, &lit.span);
                }
            }
        }
    }

    diags
}

fn duplicate(message: String, span: &SourceSpan, first: &SourceSpan) -> Diagnostic {
    Diagnostic::error(codes::DUPLICATE_IN_DIAGRAM, message, span.clone())
        .with_related(first.clone(), "first defined here")
}
