//! Recursive-descent parser for `.arc`, `.lib` and `.app` files.
//!
//! Errors inside a declaration are recovered from at the next `;` or `}` so
//! that a single run reports as many independent problems as possible.

use std::sync::Arc;

use crate::binding::{ApplicationConfig, RawBinding};
use crate::diagnostic::{codes, Diagnostic, SourceSpan};
use crate::model::{
    Architecture, ArgumentValue, Behavior, ComponentType, ConfigParam, Connector, Decl, Direction,
    Endpoint, EnumDecl, Identifier, Import, Library, LibraryKind, NameError, Port, QualifiedName,
    SubcomponentDecl,
};

use super::lexer::{tokenize, Token, TokenKind};

/// A parsed model, present only when no error was reported.
#[derive(Debug, Clone)]
pub struct ParseResult<T> {
    pub model: Option<T>,
    pub diagnostics: Vec<Diagnostic>,
}

impl<T> ParseResult<T> {
    pub fn into_result(self) -> Result<T, Vec<Diagnostic>> {
        match self.model {
            Some(m) => Ok(m),
            None => Err(self.diagnostics),
        }
    }
}

pub fn parse_architecture(file: &str, text: &str) -> ParseResult<Architecture> {
    Parser::run(file, text, Parser::architecture_file)
}

pub fn parse_library(file: &str, text: &str) -> ParseResult<Library> {
    Parser::run(file, text, Parser::library_file)
}

pub fn parse_appcfg(file: &str, text: &str) -> ParseResult<ApplicationConfig> {
    Parser::run(file, text, Parser::app_file)
}

/// Marker for an error that has already been recorded as a diagnostic.
struct Reported;

type PResult<T> = Result<T, Reported>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
}

impl Parser {
    fn run<T>(file: &str, text: &str, entry: fn(&mut Parser) -> PResult<T>) -> ParseResult<T> {
        let file: Arc<str> = Arc::from(file);
        let (tokens, diags) = tokenize(&file, text);
        let mut parser = Parser {
            tokens,
            pos: 0,
            diags,
        };
        let model = entry(&mut parser).ok();
        let mut diagnostics = parser.diags;
        crate::diagnostic::sort_diagnostics(&mut diagnostics);
        let failed = crate::diagnostic::has_errors(&diagnostics);
        ParseResult {
            model: if failed { None } else { model },
            diagnostics,
        }
    }

    // ---- token helpers ----

    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn peek_at(&self, offset: usize) -> &TokenKind {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos.saturating_sub(1)].span.clone()
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), TokenKind::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error_expected(&mut self, expected: &[&str]) -> Reported {
        // one report per position; cascades after recovery add nothing
        if self.diags.last().is_some_and(|d| d.span == self.span()) {
            return Reported;
        }
        let found = self.peek().to_string();
        let message = match expected {
            [one] => format!("expected {one}, found {found}"),
            many => format!("expected one of {}, found {found}", many.join(", ")),
        };
        self.diags
            .push(Diagnostic::error(codes::PARSE, self.span(), message));
        Reported
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<SourceSpan> {
        if *self.peek() == kind {
            Ok(self.bump().span)
        } else {
            Err(self.error_expected(&[&kind.to_string()]))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<SourceSpan> {
        if self.at_keyword(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.error_expected(&[&format!("`{kw}`")]))
        }
    }

    fn ident(&mut self) -> PResult<Identifier> {
        if let TokenKind::Ident(text) = self.peek() {
            match Identifier::new(text.clone()) {
                Ok(id) => {
                    self.bump();
                    Ok(id)
                }
                Err(NameError::Reserved(word)) => {
                    self.diags.push(Diagnostic::error(
                        codes::PARSE,
                        self.span(),
                        format!("expected identifier, found reserved word `{word}`"),
                    ));
                    Err(Reported)
                }
                Err(e) => {
                    self.diags
                        .push(Diagnostic::error(codes::PARSE, self.span(), e.to_string()));
                    Err(Reported)
                }
            }
        } else {
            Err(self.error_expected(&["identifier"]))
        }
    }

    /// Skips to just past the next `;`, or up to (not past) a `}` closing the
    /// current block.
    fn recover_member(&mut self) {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                TokenKind::Eof => return,
                TokenKind::Semi if depth == 0 => {
                    self.bump();
                    return;
                }
                TokenKind::LBrace => depth += 1,
                TokenKind::RBrace => {
                    if depth == 0 {
                        return;
                    }
                    depth -= 1;
                    if depth == 0 {
                        self.bump();
                        return;
                    }
                }
                _ => {}
            }
            self.bump();
        }
    }

    // ---- files ----

    fn architecture_file(&mut self) -> PResult<Architecture> {
        let start = self.expect_keyword("architecture")?;
        let name = self.ident()?;
        self.expect(TokenKind::LBrace)?;
        let imports = self.imports();
        let mut decls = Vec::new();
        let root;
        let root_span;
        loop {
            if self.at_keyword("root") {
                self.bump();
                root_span = self.span();
                root = self.ident()?;
                self.expect(TokenKind::Semi)?;
                break;
            }
            if matches!(self.peek(), TokenKind::Eof | TokenKind::RBrace) {
                return Err(self.error_expected(&[
                    "`abstract`",
                    "`component`",
                    "`enum`",
                    "`root`",
                ]));
            }
            match self.declaration(&["`abstract`", "`component`", "`enum`", "`root`"]) {
                Ok(d) => decls.push(d),
                Err(Reported) => self.recover_member(),
            }
        }
        let end = self.expect(TokenKind::RBrace)?;
        self.expect(TokenKind::Eof)?;
        Ok(Architecture {
            name,
            imports,
            decls,
            root,
            root_span,
            span: start.to(&end),
        })
    }

    fn library_file(&mut self) -> PResult<Library> {
        let start = self.expect_keyword("library")?;
        let name = self.ident()?;
        self.expect(TokenKind::Colon)?;
        let kind = match self.peek().clone() {
            TokenKind::Ident(s) if s == "model" => LibraryKind::Model,
            TokenKind::Ident(s) if s == "implementation" => LibraryKind::Implementation,
            TokenKind::Ident(s) => {
                self.diags.push(Diagnostic::error(
                    codes::KIND,
                    self.span(),
                    format!("library kind must be `model` or `implementation`, found `{s}`"),
                ));
                // keep going to surface further errors; the model is discarded
                LibraryKind::Model
            }
            _ => return Err(self.error_expected(&["`model`", "`implementation`"])),
        };
        self.bump();
        self.expect(TokenKind::LBrace)?;
        let imports = self.imports();
        let mut decls = Vec::new();
        while !matches!(self.peek(), TokenKind::RBrace | TokenKind::Eof) {
            match self.declaration(&["`abstract`", "`component`", "`enum`", "`}`"]) {
                Ok(d) => decls.push(d),
                Err(Reported) => self.recover_member(),
            }
        }
        let end = self.expect(TokenKind::RBrace)?;
        self.expect(TokenKind::Eof)?;
        Ok(Library {
            name,
            kind,
            imports,
            decls,
            span: start.to(&end),
        })
    }

    fn app_file(&mut self) -> PResult<ApplicationConfig> {
        let imports = self.imports();
        let start = self.expect_keyword("application")?;
        let name = self.ident()?;
        self.expect_keyword("for")?;
        let target_arch = self.ident()?;
        self.expect(TokenKind::LBrace)?;
        let mut bindings = Vec::new();
        while !matches!(self.peek(), TokenKind::RBrace | TokenKind::Eof) {
            match self.bind_clause() {
                Ok(b) => bindings.push(b),
                Err(Reported) => self.recover_member(),
            }
        }
        let end = self.expect(TokenKind::RBrace)?;
        self.expect(TokenKind::Eof)?;
        Ok(ApplicationConfig {
            name,
            target_arch,
            imports,
            bindings,
            span: start.to(&end),
        })
    }

    // ---- declarations ----

    fn imports(&mut self) -> Vec<Import> {
        let mut imports = Vec::new();
        while self.at_keyword("import") {
            match self.import() {
                Ok(i) => imports.push(i),
                Err(Reported) => self.recover_member(),
            }
        }
        imports
    }

    fn import(&mut self) -> PResult<Import> {
        let start = self.expect_keyword("import")?;
        let name = self.ident()?;
        self.expect(TokenKind::Dot)?;
        self.expect(TokenKind::Star)?;
        let end = self.expect(TokenKind::Semi)?;
        Ok(Import {
            name,
            span: start.to(&end),
        })
    }

    fn declaration(&mut self, expected: &[&str]) -> PResult<Decl> {
        if self.at_keyword("enum") {
            self.enum_decl().map(Decl::Enum)
        } else if self.at_keyword("abstract") || self.at_keyword("component") {
            self.type_decl().map(Decl::Component)
        } else {
            Err(self.error_expected(expected))
        }
    }

    fn enum_decl(&mut self) -> PResult<EnumDecl> {
        let start = self.expect_keyword("enum")?;
        let name = self.ident()?;
        self.expect(TokenKind::LBrace)?;
        let mut literals = vec![self.ident()?];
        while self.eat(&TokenKind::Comma) {
            literals.push(self.ident()?);
        }
        let end = self.expect(TokenKind::RBrace)?;
        Ok(EnumDecl {
            name,
            literals,
            span: start.to(&end),
        })
    }

    fn type_decl(&mut self) -> PResult<ComponentType> {
        let start = self.span();
        let is_abstract = self.eat_keyword("abstract");
        self.expect_keyword("component")?;
        let name = self.ident()?;

        let mut params = Vec::new();
        if self.eat(&TokenKind::LParen) {
            loop {
                let p_start = self.span();
                let ty = self.ident()?;
                let pname = self.ident()?;
                params.push(ConfigParam {
                    name: pname,
                    ty,
                    span: p_start.to(&self.prev_span()),
                });
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
            self.expect(TokenKind::RParen)?;
        }
        let super_type = if self.eat_keyword("extends") {
            Some(self.ident()?)
        } else {
            None
        };
        let rts = if self.eat_keyword("rts") {
            match self.peek().clone() {
                TokenKind::Str(s) => {
                    self.bump();
                    Some(s)
                }
                _ => return Err(self.error_expected(&["string literal"])),
            }
        } else {
            None
        };
        self.expect(TokenKind::LBrace)?;

        let mut ty = ComponentType {
            name,
            is_abstract,
            params,
            ports: Vec::new(),
            super_type,
            rts,
            behavior: None,
            subcomponents: Vec::new(),
            connectors: Vec::new(),
            span: start.clone(),
        };
        while !matches!(self.peek(), TokenKind::RBrace | TokenKind::Eof) {
            if self.member(&mut ty).is_err() {
                self.recover_member();
            }
        }
        let end = self.expect(TokenKind::RBrace)?;
        ty.span = start.to(&end);
        Ok(ty)
    }

    fn member(&mut self, ty: &mut ComponentType) -> PResult<()> {
        let start = self.span();
        if self.eat_keyword("port") {
            let direction = if self.eat_keyword("in") {
                Direction::In
            } else if self.eat_keyword("out") {
                Direction::Out
            } else {
                return Err(self.error_expected(&["`in`", "`out`"]));
            };
            let pty = self.ident()?;
            let name = self.ident()?;
            let end = self.expect(TokenKind::Semi)?;
            ty.ports.push(Port {
                name,
                direction,
                ty: pty,
                span: start.to(&end),
            });
        } else if self.eat_keyword("component") {
            let type_name = self.ident()?;
            let arguments = self.arguments()?;
            let name = self.ident()?;
            let end = self.expect(TokenKind::Semi)?;
            ty.subcomponents.push(SubcomponentDecl {
                name,
                type_name,
                arguments,
                span: start.to(&end),
            });
        } else if self.eat_keyword("connect") {
            let source = self.endpoint()?;
            self.expect(TokenKind::Arrow)?;
            let target = self.endpoint()?;
            let end = self.expect(TokenKind::Semi)?;
            ty.connectors.push(Connector {
                source,
                target,
                span: start.to(&end),
            });
        } else if self.eat_keyword("behavior") {
            let behavior = if self.eat_keyword("model") {
                Behavior::Model
            } else if self.eat_keyword("impl") {
                match self.peek().clone() {
                    TokenKind::Str(s) => {
                        self.bump();
                        Behavior::Impl(s)
                    }
                    _ => return Err(self.error_expected(&["string literal"])),
                }
            } else {
                return Err(self.error_expected(&["`model`", "`impl`"]));
            };
            let end = self.expect(TokenKind::Semi)?;
            if ty.behavior.is_some() {
                self.diags.push(Diagnostic::error(
                    codes::PARSE,
                    start.to(&end),
                    format!("component `{}` declares more than one behavior", ty.name),
                ));
                return Err(Reported);
            }
            ty.behavior = Some(behavior);
        } else {
            return Err(self.error_expected(&[
                "`port`",
                "`component`",
                "`connect`",
                "`behavior`",
                "`}`",
            ]));
        }
        Ok(())
    }

    fn endpoint(&mut self) -> PResult<Endpoint> {
        let first = self.ident()?;
        if self.eat(&TokenKind::Dot) {
            let port = self.ident()?;
            Ok(Endpoint {
                scd: Some(first),
                port,
            })
        } else {
            Ok(Endpoint {
                scd: None,
                port: first,
            })
        }
    }

    /// Optional parenthesised, nonempty argument list.
    fn arguments(&mut self) -> PResult<Vec<ArgumentValue>> {
        let mut args = Vec::new();
        if self.eat(&TokenKind::LParen) {
            loop {
                args.push(self.argument()?);
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
            self.expect(TokenKind::RParen)?;
        }
        Ok(args)
    }

    fn argument(&mut self) -> PResult<ArgumentValue> {
        match self.peek().clone() {
            TokenKind::Int(v) => {
                self.bump();
                Ok(ArgumentValue::Int(v))
            }
            TokenKind::Str(s) => {
                self.bump();
                Ok(ArgumentValue::Str(s))
            }
            TokenKind::Ident(s) if s == "true" || s == "false" => {
                self.bump();
                Ok(ArgumentValue::Bool(s == "true"))
            }
            TokenKind::Ident(_) if *self.peek_at(1) == TokenKind::Dot => {
                let enum_name = self.ident()?;
                self.expect(TokenKind::Dot)?;
                let literal = self.ident()?;
                Ok(ArgumentValue::Enum { enum_name, literal })
            }
            _ => Err(self.error_expected(&[
                "integer",
                "`true`",
                "`false`",
                "string literal",
                "enumeration literal",
            ])),
        }
    }

    fn bind_clause(&mut self) -> PResult<RawBinding> {
        let start = self.span();
        if !self.eat_keyword("bind") {
            return Err(self.error_expected(&["`bind`", "`}`"]));
        }
        let mut segments = vec![self.ident()?];
        while self.eat(&TokenKind::Dot) {
            segments.push(self.ident()?);
        }
        let path = QualifiedName::new(segments).expect("at least one segment parsed");
        self.expect_keyword("to")?;
        let target_type = self.ident()?;
        let added_args = self.arguments()?;
        let end = self.expect(TokenKind::Semi)?;
        Ok(RawBinding {
            path,
            target_type,
            added_args,
            span: start.to(&end),
        })
    }
}
