//! Recursive-descent parser for `.ad` files.

use crate::cursor::Cursor;
use crate::diag::{codes, Diagnostic};
use crate::lexer::TokenKind;
use crate::span::SourceSpan;

use super::ast::*;

/// Contextual keywords of the activity language.
pub const KEYWORDS: &[&str] = &[
    "activity", "action", "in", "out", "view", "code", "initial", "final",
];

pub fn parse_activity(src: &str, file: &str) -> Result<ActivityDef, Vec<Diagnostic>> {
    let mut cursor = Cursor::new(src, file);
    let activity = parse_file(&mut cursor).map_err(|d| vec![d])?;
    let problems = check_structure(&activity);
    if problems.is_empty() {
        Ok(activity)
    } else {
        Err(problems)
    }
}

/// Parse the interior of a `[ ]` guard.
pub fn parse_guard(text: &str) -> Result<GuardExpr, Diagnostic> {
    let mut cursor = Cursor::new(text, "<guard>");
    let guard = parse_guard_expr(&mut cursor)?;
    if !cursor.at(&TokenKind::Eof)? {
        return Err(cursor.unexpected("after the guard", "end of input"));
    }
    Ok(guard)
}

fn parse_file(cursor: &mut Cursor) -> Result<ActivityDef, Diagnostic> {
    let kw = cursor.expect_keyword("activity", "to begin an activity")?;
    let (name, _) = cursor.expect_ident("as the activity name")?;
    cursor.expect(TokenKind::LBrace, "to open the activity body")?;

    let mut activity = ActivityDef {
        name,
        actions: Vec::new(),
        transitions: Vec::new(),
        span: kw.span,
    };
    loop {
        if cursor.at(&TokenKind::RBrace)? {
            break;
        }
        if cursor.at_ident("action")? && matches!(cursor.peek2_kind()?, TokenKind::Ident(_)) {
            activity.actions.push(parse_action(cursor)?);
        } else {
            activity.transitions.push(parse_transition(cursor)?);
        }
    }
    let close = cursor.expect(TokenKind::RBrace, "to close the activity body")?;
    cursor.expect_eof()?;
    activity.span = activity.span.merge(&close.span);
    Ok(activity)
}

fn parse_action(cursor: &mut Cursor) -> Result<ActionDef, Diagnostic> {
    let kw = cursor.expect_keyword("action", "to begin an action")?;
    let (name, name_span) = cursor.expect_ident("as the action name")?;
    if name == "initial" || name == "final" {
        return Err(cursor.syntax_error(
            format!("an action cannot be named `{name}`; the name is reserved for flow endpoints"),
            name_span,
        ));
    }
    cursor.expect(TokenKind::LBrace, "to open the action body")?;

    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut content: Option<ActionContent> = None;

    while !cursor.at(&TokenKind::RBrace)? {
        let (word, word_span) = cursor.expect_ident("in the action body")?;
        match word.as_str() {
            "in" => {
                cursor.expect(TokenKind::Colon, "after `in`")?;
                parse_params(cursor, &mut inputs)?;
            }
            "out" => {
                cursor.expect(TokenKind::Colon, "after `out`")?;
                parse_params(cursor, &mut outputs)?;
            }
            "view" => {
                cursor.expect(TokenKind::Colon, "after `view`")?;
                let call = parse_view_call(cursor)?;
                set_content(&mut content, ActionContent::ViewCall(call), &word_span, cursor)?;
            }
            "code" => {
                let (text, code_span) = cursor.raw_block("code")?;
                let code = OpaqueCode {
                    text: text.trim().to_string(),
                    span: word_span.merge(&code_span),
                };
                set_content(&mut content, ActionContent::OpaqueCode(code), &word_span, cursor)?;
            }
            _ => {
                return Err(cursor.syntax_error(
                    format!("expected `in`, `out`, `view` or `code` in the action body, found `{word}`"),
                    word_span,
                ));
            }
        }
    }
    let close = cursor.expect(TokenKind::RBrace, "to close the action body")?;

    let content = match content {
        Some(content) => content,
        None => {
            return Err(cursor.syntax_error(
                format!("action `{name}` must declare a `view` or `code` content"),
                kw.span.merge(&close.span),
            ));
        }
    };
    Ok(ActionDef {
        name,
        inputs,
        outputs,
        content,
        span: kw.span.merge(&close.span),
    })
}

fn set_content(
    slot: &mut Option<ActionContent>,
    content: ActionContent,
    span: &SourceSpan,
    cursor: &Cursor,
) -> Result<(), Diagnostic> {
    if slot.is_some() {
        return Err(cursor.syntax_error(
            "an action has exactly one `view` or `code` content",
            span.clone(),
        ));
    }
    *slot = Some(content);
    Ok(())
}

fn parse_params(cursor: &mut Cursor, into: &mut Vec<ParamDecl>) -> Result<(), Diagnostic> {
    loop {
        let (type_name, type_span) = cursor.expect_ident("as the parameter type")?;
        let (name, name_span) = cursor.expect_ident("as the parameter name")?;
        into.push(ParamDecl {
            type_name,
            name,
            span: type_span.merge(&name_span),
        });
        if !cursor.eat(&TokenKind::Comma)? {
            break;
        }
    }
    cursor.expect(TokenKind::Semi, "after the parameter declaration")?;
    Ok(())
}

fn parse_view_call(cursor: &mut Cursor) -> Result<ViewCall, Diagnostic> {
    let (first, first_span) = cursor.expect_ident("as the view call")?;
    let (assign_to, class_name) = if cursor.eat(&TokenKind::Eq)? {
        let (class_name, _) = cursor.expect_ident("as the class name")?;
        (Some(first), class_name)
    } else {
        (None, first)
    };
    cursor.expect(TokenKind::Dot, "between class and view name")?;
    let (view_name, _) = cursor.expect_ident("as the view name")?;
    cursor.expect(TokenKind::LParen, "to open the argument list")?;
    let argument = if let TokenKind::Ident(_) = cursor.peek_kind()? {
        let (arg, _) = cursor.expect_ident("as the view argument")?;
        if cursor.at(&TokenKind::Comma)? {
            let span = cursor.peek()?.span.clone();
            return Err(cursor.syntax_error("view calls take at most one argument", span));
        }
        Some(arg)
    } else {
        None
    };
    cursor.expect(TokenKind::RParen, "to close the argument list")?;
    let semi = cursor.expect(TokenKind::Semi, "after the view call")?;
    Ok(ViewCall {
        assign_to,
        class_name,
        view_name,
        argument,
        span: first_span.merge(&semi.span),
    })
}

fn parse_transition(cursor: &mut Cursor) -> Result<TransitionStmt, Diagnostic> {
    let first_span = cursor.peek()?.span.clone();
    let mut sources = vec![parse_endpoint(cursor)?];
    while cursor.eat(&TokenKind::Pipe)? {
        sources.push(parse_endpoint(cursor)?);
    }
    cursor.expect(TokenKind::Arrow, "after the transition sources")?;
    let mut alternatives = vec![parse_alternative(cursor)?];
    while cursor.eat(&TokenKind::Pipe)? {
        alternatives.push(parse_alternative(cursor)?);
    }
    let semi = cursor.expect(TokenKind::Semi, "after the transition")?;
    Ok(TransitionStmt {
        sources,
        alternatives,
        span: first_span.merge(&semi.span),
    })
}

fn parse_alternative(cursor: &mut Cursor) -> Result<Alternative, Diagnostic> {
    let guard = if cursor.eat(&TokenKind::LBracket)? {
        let guard = parse_guard_expr(cursor)?;
        cursor.expect(TokenKind::RBracket, "to close the guard")?;
        Some(guard)
    } else {
        None
    };
    let target = parse_endpoint(cursor)?;
    Ok(Alternative { guard, target })
}

fn parse_endpoint(cursor: &mut Cursor) -> Result<Endpoint, Diagnostic> {
    let (name, span) = cursor.expect_ident("as a transition endpoint")?;
    match name.as_str() {
        "initial" => Ok(Endpoint::Initial(span)),
        "final" => Ok(Endpoint::Final(span)),
        _ => {
            let (param, span) = if cursor.eat(&TokenKind::Dot)? {
                let (param, param_span) = cursor.expect_ident("as the object-flow parameter")?;
                (Some(param), span.merge(&param_span))
            } else {
                (None, span)
            };
            Ok(Endpoint::ActionRef {
                action: name,
                param,
                span,
            })
        }
    }
}

fn parse_guard_expr(cursor: &mut Cursor) -> Result<GuardExpr, Diagnostic> {
    let mut lhs = parse_guard_and(cursor)?;
    while cursor.eat(&TokenKind::OrOr)? {
        let rhs = parse_guard_and(cursor)?;
        lhs = GuardExpr::Or(Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn parse_guard_and(cursor: &mut Cursor) -> Result<GuardExpr, Diagnostic> {
    let mut lhs = parse_guard_atom(cursor)?;
    while cursor.eat(&TokenKind::AndAnd)? {
        let rhs = parse_guard_atom(cursor)?;
        lhs = GuardExpr::And(Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn parse_guard_atom(cursor: &mut Cursor) -> Result<GuardExpr, Diagnostic> {
    if cursor.eat(&TokenKind::LParen)? {
        let inner = parse_guard_expr(cursor)?;
        cursor.expect(TokenKind::RParen, "to close the group")?;
        return Ok(inner);
    }
    let lhs = parse_operand(cursor)?;
    let op = parse_compare_op(cursor)?;
    let rhs = parse_operand(cursor)?;
    Ok(GuardExpr::Compare { op, lhs, rhs })
}

fn parse_compare_op(cursor: &mut Cursor) -> Result<CompareOp, Diagnostic> {
    let op = match cursor.peek_kind()? {
        TokenKind::Ge => CompareOp::Ge,
        TokenKind::Le => CompareOp::Le,
        TokenKind::Gt => CompareOp::Gt,
        TokenKind::Lt => CompareOp::Lt,
        TokenKind::EqEq => CompareOp::Eq,
        TokenKind::Ne => CompareOp::Ne,
        _ => return Err(cursor.unexpected("in the guard", "a comparison operator")),
    };
    cursor.bump()?;
    Ok(op)
}

fn parse_operand(cursor: &mut Cursor) -> Result<Operand, Diagnostic> {
    match cursor.peek_kind()? {
        TokenKind::Int(v) => {
            let span = cursor.bump()?.span;
            Ok(Operand::Int(v, span))
        }
        TokenKind::Minus => {
            let minus = cursor.bump()?;
            match cursor.peek_kind()? {
                TokenKind::Int(v) => {
                    let span = cursor.bump()?.span;
                    Ok(Operand::Int(-v, minus.span.merge(&span)))
                }
                _ => Err(cursor.unexpected("after `-`", "an integer")),
            }
        }
        TokenKind::Str(v) => {
            let span = cursor.bump()?.span;
            Ok(Operand::Str(v, span))
        }
        TokenKind::Ident(_) => {
            let (param, span) = cursor.expect_ident("as a guard operand")?;
            cursor.expect(TokenKind::Dot, "in the guard operand (`param.attribute`)")?;
            let (attribute, attr_span) = cursor.expect_ident("as the attribute name")?;
            Ok(Operand::ParamAttribute {
                param,
                attribute,
                span: span.merge(&attr_span),
            })
        }
        _ => Err(cursor.unexpected("in the guard", "an operand")),
    }
}

fn check_structure(activity: &ActivityDef) -> Vec<Diagnostic> {
    use std::collections::HashMap;
    let mut diags = Vec::new();

    let mut seen: HashMap<&str, &SourceSpan> = HashMap::new();
    for action in &activity.actions {
        match seen.get(action.name.as_str()) {
            Some(first) => diags.push(
                Diagnostic::error(
                    codes::DUPLICATE_ACTION,
                    format!("action `{}` is defined more than once", action.name),
                    action.span.clone(),
                )
                .with_related((*first).clone(), "first defined here"),
            ),
            None => {
                seen.insert(&action.name, &action.span);
            }
        }

        let mut params: HashMap<&str, &SourceSpan> = HashMap::new();
        for param in action.inputs.iter().chain(action.outputs.iter()) {
            match params.get(param.name.as_str()) {
                Some(first) => diags.push(
                    Diagnostic::error(
                        codes::DUPLICATE_PARAM,
                        format!(
                            "parameter `{}` is declared twice in action `{}`",
                            param.name, action.name
                        ),
                        param.span.clone(),
                    )
                    .with_related((*first).clone(), "first declared here"),
                ),
                None => {
                    params.insert(&param.name, &param.span);
                }
            }
        }
    }

    for transition in &activity.transitions {
        for source in &transition.sources {
            if let Endpoint::Final(span) = source {
                diags.push(Diagnostic::error(
                    codes::ENDPOINT_ROLE,
                    "`final` cannot be a transition source",
                    span.clone(),
                ));
            }
        }
        for alternative in &transition.alternatives {
            if let Endpoint::Initial(span) = &alternative.target {
                diags.push(Diagnostic::error(
                    codes::ENDPOINT_ROLE,
                    "`initial` cannot be a transition target",
                    span.clone(),
                ));
            }
        }
    }

    diags
}
