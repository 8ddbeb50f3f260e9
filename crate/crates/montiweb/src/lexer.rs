//! Shared lexer for the three modeling languages.
//!
//! All frontends use one token set; keywords are contextual and arrive as
//! plain identifiers. `//` line comments and `/* */` block comments are
//! skipped. Lexing is total: every input either yields tokens or a
//! diagnostic, never a panic.

use crate::diag::{codes, Diagnostic};
use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Dot,
    DotDot,
    Colon,
    Eq,
    EqEq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
    Pipe,
    At,
    Arrow,
    Minus,
    Star,
    Eof,
}

impl TokenKind {
    /// Short human-readable name for error messages.
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("`{name}`"),
            TokenKind::Int(v) => format!("`{v}`"),
            TokenKind::Str(_) => "string literal".to_string(),
            TokenKind::LBrace => "`{`".to_string(),
            TokenKind::RBrace => "`}`".to_string(),
            TokenKind::LParen => "`(`".to_string(),
            TokenKind::RParen => "`)`".to_string(),
            TokenKind::LBracket => "`[`".to_string(),
            TokenKind::RBracket => "`]`".to_string(),
            TokenKind::Semi => "`;`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
            TokenKind::Dot => "`.`".to_string(),
            TokenKind::DotDot => "`..`".to_string(),
            TokenKind::Colon => "`:`".to_string(),
            TokenKind::Eq => "`=`".to_string(),
            TokenKind::EqEq => "`==`".to_string(),
            TokenKind::Ne => "`!=`".to_string(),
            TokenKind::Lt => "`<`".to_string(),
            TokenKind::Le => "`<=`".to_string(),
            TokenKind::Gt => "`>`".to_string(),
            TokenKind::Ge => "`>=`".to_string(),
            TokenKind::AndAnd => "`&&`".to_string(),
            TokenKind::OrOr => "`||`".to_string(),
            TokenKind::Pipe => "`|`".to_string(),
            TokenKind::At => "`@`".to_string(),
            TokenKind::Arrow => "`->`".to_string(),
            TokenKind::Minus => "`-`".to_string(),
            TokenKind::Star => "`*`".to_string(),
            TokenKind::Eof => "end of file".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

pub struct Lexer<'a> {
    src: &'a str,
    file: String,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str, file: &str) -> Self {
        Lexer {
            src,
            file: file.to_string(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_char2(&self) -> Option<char> {
        let mut chars = self.src[self.pos..].chars();
        chars.next();
        chars.next()
    }

    fn bump_char(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span_from(&self, start_line: u32, start_col: u32) -> SourceSpan {
        SourceSpan::new(&self.file, start_line, start_col, self.line, self.col)
    }

    fn here(&self, width: u32) -> SourceSpan {
        SourceSpan::new(&self.file, self.line, self.col, self.line, self.col + width)
    }

    fn skip_trivia(&mut self) -> Result<(), Diagnostic> {
        loop {
            match self.peek_char() {
                Some(c) if c.is_whitespace() => {
                    self.bump_char();
                }
                Some('/') if self.peek_char2() == Some('/') => {
                    while let Some(c) = self.peek_char() {
                        if c == '\n' {
                            break;
                        }
                        self.bump_char();
                    }
                }
                Some('/') if self.peek_char2() == Some('*') => {
                    let (line, col) = (self.line, self.col);
                    self.bump_char();
                    self.bump_char();
                    loop {
                        match self.peek_char() {
                            Some('*') if self.peek_char2() == Some('/') => {
                                self.bump_char();
                                self.bump_char();
                                break;
                            }
                            Some(_) => {
                                self.bump_char();
                            }
                            None => {
                                return Err(Diagnostic::error(
                                    codes::UNTERMINATED_COMMENT,
                                    "unterminated block comment",
                                    SourceSpan::new(&self.file, line, col, line, col + 2),
                                ));
                            }
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    /// Next token, or a diagnostic for input the token set cannot represent.
    pub fn next_token(&mut self) -> Result<Token, Diagnostic> {
        self.skip_trivia()?;
        let (start_line, start_col) = (self.line, self.col);
        let kind = match self.peek_char() {
            None => TokenKind::Eof,
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(c) = self.peek_char() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        self.bump_char();
                    } else {
                        break;
                    }
                }
                TokenKind::Ident(name)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(c) = self.peek_char() {
                    if c.is_ascii_digit() {
                        digits.push(c);
                        self.bump_char();
                    } else {
                        break;
                    }
                }
                match digits.parse::<i64>() {
                    Ok(v) => TokenKind::Int(v),
                    Err(_) => {
                        return Err(Diagnostic::error(
                            codes::INT_OUT_OF_RANGE,
                            format!("integer literal `{digits}` does not fit in 64 bits"),
                            self.span_from(start_line, start_col),
                        ));
                    }
                }
            }
            Some('"') => {
                self.bump_char();
                let mut value = String::new();
                loop {
                    match self.peek_char() {
                        Some('"') => {
                            self.bump_char();
                            break;
                        }
                        Some('\n') | None => {
                            return Err(Diagnostic::error(
                                codes::UNTERMINATED_STRING,
                                "unterminated string literal",
                                self.span_from(start_line, start_col),
                            ));
                        }
                        Some(c) => {
                            value.push(c);
                            self.bump_char();
                        }
                    }
                }
                TokenKind::Str(value)
            }
            Some(c) => {
                let two = |lexer: &mut Self, kind: TokenKind| {
                    lexer.bump_char();
                    lexer.bump_char();
                    kind
                };
                match (c, self.peek_char2()) {
                    ('-', Some('>')) => two(self, TokenKind::Arrow),
                    ('=', Some('=')) => two(self, TokenKind::EqEq),
                    ('!', Some('=')) => two(self, TokenKind::Ne),
                    ('<', Some('=')) => two(self, TokenKind::Le),
                    ('>', Some('=')) => two(self, TokenKind::Ge),
                    ('&', Some('&')) => two(self, TokenKind::AndAnd),
                    ('|', Some('|')) => two(self, TokenKind::OrOr),
                    ('.', Some('.')) => two(self, TokenKind::DotDot),
                    _ => {
                        let single = match c {
                            '{' => Some(TokenKind::LBrace),
                            '}' => Some(TokenKind::RBrace),
                            '(' => Some(TokenKind::LParen),
                            ')' => Some(TokenKind::RParen),
                            '[' => Some(TokenKind::LBracket),
                            ']' => Some(TokenKind::RBracket),
                            ';' => Some(TokenKind::Semi),
                            ',' => Some(TokenKind::Comma),
                            '.' => Some(TokenKind::Dot),
                            ':' => Some(TokenKind::Colon),
                            '=' => Some(TokenKind::Eq),
                            '<' => Some(TokenKind::Lt),
                            '>' => Some(TokenKind::Gt),
                            '|' => Some(TokenKind::Pipe),
                            '@' => Some(TokenKind::At),
                            '-' => Some(TokenKind::Minus),
                            '*' => Some(TokenKind::Star),
                            _ => None,
                        };
                        match single {
                            Some(kind) => {
                                self.bump_char();
                                kind
                            }
                            None => {
                                let span = self.here(1);
                                return Err(Diagnostic::error(
                                    codes::UNEXPECTED_CHAR,
                                    format!("unexpected character `{c}`"),
                                    span,
                                ));
                            }
                        }
                    }
                }
            }
        };
        Ok(Token {
            kind,
            span: self.span_from(start_line, start_col),
        })
    }

    /// Consume raw source until the `}` matching an already-consumed `{`.
    ///
    /// Used for `text { ... }` and `code { ... }` blocks whose interior is
    /// captured verbatim, so the content is never tokenized. Only brace
    /// nesting is tracked. Returns the interior (closing brace excluded) and
    /// its span, or `None` when the file ends first.
    pub fn raw_balanced_block(&mut self) -> Option<(String, SourceSpan)> {
        let (start_line, start_col) = (self.line, self.col);
        let mut depth = 1u32;
        let mut content = String::new();
        loop {
            let (line, col) = (self.line, self.col);
            match self.bump_char() {
                Some('{') => {
                    depth += 1;
                    content.push('{');
                }
                Some('}') => {
                    depth -= 1;
                    if depth == 0 {
                        let span =
                            SourceSpan::new(&self.file, start_line, start_col, line, col);
                        return Some((content, span));
                    }
                    content.push('}');
                }
                Some(c) => content.push(c),
                None => return None,
            }
        }
    }
}

/// Tokenize a whole input. Mainly a test surface; the parsers lex on demand.
pub fn lex_all(src: &str, file: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut lexer = Lexer::new(src, file);
    let mut tokens = Vec::new();
    loop {
        let token = lexer.next_token()?;
        let done = token.kind == TokenKind::Eof;
        tokens.push(token);
        if done {
            return Ok(tokens);
        }
    }
}
