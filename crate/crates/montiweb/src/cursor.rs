//! Parser cursor shared by the three frontends: on-demand lexing with two
//! tokens of lookahead, plus the annotation parser every language reuses.
//!
//! Lexing on demand matters for `text { ... }` and `code { ... }` blocks:
//! their interior is captured raw through [`Cursor::raw_block`] and never
//! tokenized, so arbitrary prose (including characters outside the token
//! set) is legal there.

use std::collections::VecDeque;

use crate::annotation::{Annotation, AnnotationValue};
use crate::diag::{codes, Diagnostic};
use crate::lexer::{Lexer, Token, TokenKind};
use crate::span::SourceSpan;

pub struct Cursor<'a> {
    lexer: Lexer<'a>,
    buf: VecDeque<Token>,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str, file: &str) -> Self {
        Cursor {
            lexer: Lexer::new(src, file),
            buf: VecDeque::new(),
        }
    }

    fn fill(&mut self, n: usize) -> Result<(), Diagnostic> {
        while self.buf.len() < n {
            let token = self.lexer.next_token()?;
            self.buf.push_back(token);
        }
        Ok(())
    }

    pub fn peek(&mut self) -> Result<&Token, Diagnostic> {
        self.fill(1)?;
        Ok(&self.buf[0])
    }

    pub fn peek_kind(&mut self) -> Result<TokenKind, Diagnostic> {
        Ok(self.peek()?.kind.clone())
    }

    pub fn peek2_kind(&mut self) -> Result<TokenKind, Diagnostic> {
        self.fill(2)?;
        Ok(self.buf[1].kind.clone())
    }

    pub fn bump(&mut self) -> Result<Token, Diagnostic> {
        self.fill(1)?;
        Ok(self.buf.pop_front().unwrap())
    }

    pub fn at(&mut self, kind: &TokenKind) -> Result<bool, Diagnostic> {
        Ok(&self.peek()?.kind == kind)
    }

    /// True when the next token is the identifier `name`.
    pub fn at_ident(&mut self, name: &str) -> Result<bool, Diagnostic> {
        Ok(matches!(&self.peek()?.kind, TokenKind::Ident(n) if n == name))
    }

    pub fn eat(&mut self, kind: &TokenKind) -> Result<bool, Diagnostic> {
        if self.at(kind)? {
            self.bump()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub fn expect(&mut self, kind: TokenKind, context: &str) -> Result<Token, Diagnostic> {
        let token = self.peek()?;
        if token.kind == kind {
            self.bump()
        } else {
            Err(self.unexpected(context, &kind.describe()))
        }
    }

    pub fn expect_ident(&mut self, context: &str) -> Result<(String, SourceSpan), Diagnostic> {
        let token = self.peek()?;
        if let TokenKind::Ident(name) = &token.kind {
            let name = name.clone();
            let span = token.span.clone();
            self.bump()?;
            Ok((name, span))
        } else {
            Err(self.unexpected(context, "an identifier"))
        }
    }

    /// Consume the identifier `name` or fail.
    pub fn expect_keyword(&mut self, name: &str, context: &str) -> Result<Token, Diagnostic> {
        if self.at_ident(name)? {
            self.bump()
        } else {
            Err(self.unexpected(context, &format!("`{name}`")))
        }
    }

    /// Syntax error positioned at the current token.
    pub fn unexpected(&mut self, context: &str, expected: &str) -> Diagnostic {
        let (found, span) = match self.peek() {
            Ok(token) => (token.kind.describe(), token.span.clone()),
            Err(diag) => return diag.clone(),
        };
        Diagnostic::error(
            codes::SYNTAX,
            format!("expected {expected} {context}, found {found}"),
            span,
        )
    }

    pub fn syntax_error(&self, message: impl Into<String>, span: SourceSpan) -> Diagnostic {
        Diagnostic::error(codes::SYNTAX, message, span)
    }

    /// Raw capture of a brace-balanced block; the opening `{` must be the
    /// current token. Returns (interior, interior span).
    pub fn raw_block(&mut self, what: &str) -> Result<(String, SourceSpan), Diagnostic> {
        let open = self.expect(TokenKind::LBrace, &format!("to open the {what} block"))?;
        debug_assert!(
            self.buf.is_empty(),
            "lookahead across a raw block boundary would tokenize its interior"
        );
        match self.lexer.raw_balanced_block() {
            Some((content, span)) => Ok((content, span)),
            None => Err(self.syntax_error(format!("unterminated {what} block"), open.span)),
        }
    }

    /// Parse zero or more leading annotations.
    pub fn parse_annotations(&mut self) -> Result<Vec<Annotation>, Diagnostic> {
        let mut annotations = Vec::new();
        while self.at(&TokenKind::At)? {
            annotations.push(self.parse_annotation()?);
        }
        Ok(annotations)
    }

    /// Parse one annotation; the cursor must be positioned at `@`.
    ///
    /// Argument values are integers (optionally negative), the booleans
    /// `true`/`false`, or quoted strings. Malformed argument lists yield
    /// MW010.
    pub fn parse_annotation(&mut self) -> Result<Annotation, Diagnostic> {
        let at = self.expect(TokenKind::At, "to begin an annotation")?;
        let (name, name_span) = match self.peek()?.kind.clone() {
            TokenKind::Ident(name) => {
                let span = self.bump()?.span;
                (name, span)
            }
            other => {
                return Err(Diagnostic::error(
                    codes::BAD_ANNOTATION,
                    format!("expected annotation name after `@`, found {}", other.describe()),
                    self.peek()?.span.clone(),
                ));
            }
        };
        let mut annotation = Annotation {
            name,
            args: Vec::new(),
            span: at.span.merge(&name_span),
        };
        if !self.at(&TokenKind::LParen)? {
            return Ok(annotation);
        }
        self.bump()?;
        loop {
            let (key, key_span) = match self.peek()?.kind.clone() {
                TokenKind::Ident(key) => {
                    let span = self.bump()?.span;
                    (key, span)
                }
                other => {
                    return Err(Diagnostic::error(
                        codes::BAD_ANNOTATION,
                        format!("expected argument name, found {}", other.describe()),
                        self.peek()?.span.clone(),
                    ));
                }
            };
            if annotation.args.iter().any(|(k, _)| *k == key) {
                return Err(Diagnostic::error(
                    codes::BAD_ANNOTATION,
                    format!("duplicate annotation argument `{key}`"),
                    key_span,
                ));
            }
            if !self.eat(&TokenKind::Eq)? {
                return Err(Diagnostic::error(
                    codes::BAD_ANNOTATION,
                    format!("expected `=` after argument `{key}`"),
                    self.peek()?.span.clone(),
                ));
            }
            let value = self.parse_annotation_value()?;
            annotation.args.push((key, value));
            match self.peek()?.kind.clone() {
                TokenKind::Comma => {
                    self.bump()?;
                }
                TokenKind::RParen => {
                    let close = self.bump()?;
                    annotation.span = annotation.span.merge(&close.span);
                    return Ok(annotation);
                }
                other => {
                    return Err(Diagnostic::error(
                        codes::BAD_ANNOTATION,
                        format!("expected `,` or `)` in argument list, found {}", other.describe()),
                        self.peek()?.span.clone(),
                    ));
                }
            }
        }
    }

    fn parse_annotation_value(&mut self) -> Result<AnnotationValue, Diagnostic> {
        match self.peek()?.kind.clone() {
            TokenKind::Int(v) => {
                self.bump()?;
                Ok(AnnotationValue::Int(v))
            }
            TokenKind::Minus => {
                self.bump()?;
                match self.peek()?.kind.clone() {
                    TokenKind::Int(v) => {
                        self.bump()?;
                        Ok(AnnotationValue::Int(-v))
                    }
                    other => Err(Diagnostic::error(
                        codes::BAD_ANNOTATION,
                        format!("expected integer after `-`, found {}", other.describe()),
                        self.peek()?.span.clone(),
                    )),
                }
            }
            TokenKind::Str(v) => {
                self.bump()?;
                Ok(AnnotationValue::Str(v))
            }
            TokenKind::Ident(word) if word == "true" || word == "false" => {
                self.bump()?;
                Ok(AnnotationValue::Bool(word == "true"))
            }
            other => Err(Diagnostic::error(
                codes::BAD_ANNOTATION,
                format!(
                    "expected integer, boolean or quoted string, found {}",
                    other.describe()
                ),
                self.peek()?.span.clone(),
            )),
        }
    }

    pub fn expect_eof(&mut self) -> Result<(), Diagnostic> {
        if self.at(&TokenKind::Eof)? {
            Ok(())
        } else {
            Err(self.unexpected("after the top-level definition", "end of file"))
        }
    }
}
