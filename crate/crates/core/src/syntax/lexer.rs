use std::fmt;
use std::sync::Arc;

use crate::diagnostic::{codes, Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Comma,
    Colon,
    Dot,
    Star,
    Arrow,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "`{s}`"),
            TokenKind::Int(v) => write!(f, "integer `{v}`"),
            TokenKind::Str(_) => f.write_str("string literal"),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Semi => f.write_str("`;`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Colon => f.write_str("`:`"),
            TokenKind::Dot => f.write_str("`.`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::Arrow => f.write_str("`->`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

struct Cursor<'s> {
    chars: std::iter::Peekable<std::str::Chars<'s>>,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> (u32, u32) {
        (self.line, self.col)
    }
}

/// Splits `text` into tokens. Lexical errors are reported as `E-PARSE`
/// diagnostics and the offending characters skipped. The token stream always
/// ends with `Eof`.
pub fn tokenize(file: &Arc<str>, text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    // end position of the last consumed character
    let mut last = (1, 1);

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let start = cur.pos();
        let span_to = |end: (u32, u32)| SourceSpan::new(file.clone(), start, end);

        let kind = if c == '/' {
            cur.bump();
            if cur.peek() == Some('/') {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
                continue;
            }
            diags.push(Diagnostic::error(
                codes::PARSE,
                span_to(start),
                "unexpected character `/`",
            ));
            continue;
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    last = cur.pos();
                    cur.bump();
                } else {
                    break;
                }
            }
            TokenKind::Ident(s)
        } else if c.is_ascii_digit() || c == '-' {
            let mut s = String::new();
            last = cur.pos();
            cur.bump();
            if c == '-' && cur.peek() == Some('>') {
                last = cur.pos();
                cur.bump();
                tokens.push(Token {
                    kind: TokenKind::Arrow,
                    span: span_to(last),
                });
                continue;
            }
            s.push(c);
            while let Some(c) = cur.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    last = cur.pos();
                    cur.bump();
                } else {
                    break;
                }
            }
            match s.parse::<i64>() {
                Ok(v) => TokenKind::Int(v),
                Err(_) => {
                    let msg = if s == "-" {
                        "expected `->` or an integer after `-`".to_string()
                    } else {
                        format!("integer literal `{s}` is out of range")
                    };
                    diags.push(Diagnostic::error(codes::PARSE, span_to(last), msg));
                    continue;
                }
            }
        } else if c == '"' {
            last = start;
            cur.bump();
            let mut s = String::new();
            let mut closed = false;
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                last = cur.pos();
                cur.bump();
                match c {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' => {
                        let esc = cur.peek();
                        match esc {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            _ => {
                                diags.push(Diagnostic::error(
                                    codes::PARSE,
                                    SourceSpan::new(file.clone(), last, last),
                                    "invalid escape sequence in string literal",
                                ));
                            }
                        }
                        if esc.is_some_and(|e| e != '\n') {
                            last = cur.pos();
                            cur.bump();
                        }
                    }
                    c => s.push(c),
                }
            }
            if !closed {
                diags.push(Diagnostic::error(
                    codes::PARSE,
                    span_to(last),
                    "unterminated string literal",
                ));
                continue;
            }
            TokenKind::Str(s)
        } else {
            last = cur.pos();
            cur.bump();
            let kind = match c {
                '{' => TokenKind::LBrace,
                '}' => TokenKind::RBrace,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                ';' => TokenKind::Semi,
                ',' => TokenKind::Comma,
                ':' => TokenKind::Colon,
                '.' => TokenKind::Dot,
                '*' => TokenKind::Star,
                other => {
                    diags.push(Diagnostic::error(
                        codes::PARSE,
                        span_to(start),
                        format!("unexpected character `{}`", other.escape_default()),
                    ));
                    continue;
                }
            };
            kind
        };
        tokens.push(Token {
            kind,
            span: span_to(last),
        });
    }

    let end = cur.pos();
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: SourceSpan::new(file.clone(), end, end),
    });
    (tokens, diags)
}
