//! Recursive-descent parser producing [`ast::Program`].

use super::ast::*;
use super::lexer::{self, string_value, Lexed, Token, TokenKind};
use super::{ParseError, Span};

const MAX_DEPTH: usize = 500;
const PARSER_STACK_BYTES: usize = 256 * 1024 * 1024;

const RESERVED: &[&str] = &[
    "break", "case", "catch", "class", "const", "continue", "debugger", "default", "delete", "do",
    "else", "export", "extends", "finally", "for", "function", "if", "import", "in", "instanceof",
    "new", "return", "super", "switch", "this", "throw", "try", "typeof", "var", "void", "while",
    "with", "null", "true", "false", "enum",
];

const ASSIGN_OPS: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=", "&=", "|=", "^=", "&&=", "||=", "??=",
];

/// Parses a script or module.
///
/// Parsing runs on a helper thread with a large stack so that deeply nested
/// input fails with an error instead of overflowing the caller's stack.
pub fn parse_js(source: &str) -> Result<Program, ParseError> {
    on_large_stack(|| parse_program(source))
}

/// Runs `f` on a scoped thread with a generous stack.
pub fn on_large_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|scope| {
        match std::thread::Builder::new()
            .name("js-parse".into())
            .stack_size(PARSER_STACK_BYTES)
            .spawn_scoped(scope, f)
        {
            Ok(handle) => handle.join().unwrap_or_else(|panic| std::panic::resume_unwind(panic)),
            Err(e) => panic!("cannot spawn parser thread: {e}"),
        }
    })
}

/// Parses on the calling thread.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let lexed = lexer::tokenize(source)?;
    let mut p = Parser::new(source, lexed);
    let mut body = Vec::new();
    while !p.at_end() {
        body.push(p.parse_item()?);
    }
    Ok(Program {
        body,
        span: Span::new(0, source.len()),
    })
}

#[derive(Clone, Copy, Default)]
struct FnCtx {
    is_async: bool,
    is_generator: bool,
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    templates: std::collections::BTreeMap<usize, Vec<Span>>,
    pos: usize,
    prev_end: usize,
    depth: usize,
    ctx: FnCtx,
}

fn binary_precedence(op: &str) -> Option<u8> {
    Some(match op {
        "??" => 1,
        "||" => 2,
        "&&" => 3,
        "|" => 4,
        "^" => 5,
        "&" => 6,
        "==" | "!=" | "===" | "!==" => 7,
        "<" | ">" | "<=" | ">=" | "instanceof" | "in" => 8,
        "<<" | ">>" | ">>>" => 9,
        "+" | "-" => 10,
        "*" | "/" | "%" => 11,
        "**" => 12,
        _ => return None,
    })
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, lexed: Lexed) -> Self {
        Parser {
            src,
            tokens: lexed.tokens,
            templates: lexed.templates,
            pos: 0,
            prev_end: 0,
            depth: 0,
            ctx: FnCtx::default(),
        }
    }

    // ---- token cursor ----

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn tok(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn tok_at(&self, n: usize) -> Option<&Token> {
        self.tokens.get(self.pos + n)
    }

    fn text_at(&self, n: usize) -> &'a str {
        self.tok_at(n).map_or("", |t| &self.src[t.span.start..t.span.end])
    }

    fn text(&self) -> &'a str {
        self.text_at(0)
    }

    fn kind(&self) -> Option<TokenKind> {
        self.tok().map(|t| t.kind)
    }

    fn start(&self) -> usize {
        self.tok().map_or(self.src.len(), |t| t.span.start)
    }

    fn nl_before(&self) -> bool {
        self.tok().is_some_and(|t| t.nl_before)
    }

    /// Current token is the punctuator or word `s` (not a string/template/regex).
    fn is(&self, s: &str) -> bool {
        self.tok()
            .is_some_and(|t| matches!(t.kind, TokenKind::Punct | TokenKind::Word) && self.text() == s)
    }

    fn is_at(&self, n: usize, s: &str) -> bool {
        self.tok_at(n)
            .is_some_and(|t| matches!(t.kind, TokenKind::Punct | TokenKind::Word) && self.text_at(n) == s)
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos];
        self.pos += 1;
        self.prev_end = t.span.end;
        t
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let offset = self.start();
        let found = if self.at_end() {
            "end of input".to_string()
        } else {
            format!("'{}'", self.text())
        };
        ParseError::at(self.src, offset, format!("{}, found {found}", message.into()))
    }

    fn expect(&mut self, s: &str) -> Result<Token, ParseError> {
        if self.is(s) {
            Ok(self.bump())
        } else {
            Err(self.error(format!("expected '{s}'")))
        }
    }

    fn span_from(&self, start: usize) -> Span {
        Span::new(start, self.prev_end.max(start))
    }

    fn consume_semicolon(&mut self) -> Result<(), ParseError> {
        if self.eat(";") || self.is("}") || self.at_end() || self.nl_before() {
            Ok(())
        } else {
            Err(self.error("expected ';'"))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("nesting too deep"));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn is_ident_token(&self, n: usize) -> bool {
        self.tok_at(n)
            .is_some_and(|t| t.kind == TokenKind::Word && !RESERVED.contains(&self.text_at(n)))
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        if self.is_ident_token(0) {
            Ok(self.bump().text(self.src).to_string())
        } else {
            Err(self.error("expected identifier"))
        }
    }

    /// Any word, including reserved ones (property names).
    fn ident_name(&mut self) -> Result<String, ParseError> {
        if self.kind() == Some(TokenKind::Word) {
            Ok(self.bump().text(self.src).to_string())
        } else {
            Err(self.error("expected property name"))
        }
    }

    // ---- statements ----

    fn parse_item(&mut self) -> Result<Stmt, ParseError> {
        self.enter()?;
        let r = self.parse_item_inner();
        self.leave();
        r
    }

    fn parse_item_inner(&mut self) -> Result<Stmt, ParseError> {
        let start = self.start();
        if self.is("import") && !self.is_at(1, "(") && !self.is_at(1, ".") {
            return self.parse_import();
        }
        if self.is("export") {
            return self.parse_export();
        }
        self.parse_statement().map(|mut s| {
            s.span.start = s.span.start.min(start);
            s
        })
    }

    fn is_let_decl(&self) -> bool {
        self.is("let")
            && (self.is_ident_token(1) || self.is_at(1, "[") || self.is_at(1, "{") || self.is_at(1, "yield") || self.is_at(1, "await"))
    }

    fn is_async_function(&self) -> bool {
        self.is("async") && self.is_at(1, "function") && !self.tok_at(1).is_some_and(|t| t.nl_before)
    }

    fn parse_statement(&mut self) -> Result<Stmt, ParseError> {
        let start = self.start();
        if self.at_end() {
            return Err(self.error("expected statement"));
        }
        let kind = if self.kind() == Some(TokenKind::Punct) {
            match self.text() {
                "{" => StmtKind::Block(self.parse_block()?),
                ";" => {
                    self.bump();
                    StmtKind::Empty
                }
                _ => self.parse_expression_statement()?,
            }
        } else if self.kind() == Some(TokenKind::Word) {
            match self.text() {
                "var" | "const" => StmtKind::Var(self.parse_var_statement()?),
                "let" if self.is_let_decl() => StmtKind::Var(self.parse_var_statement()?),
                "function" => StmtKind::Function(Box::new(self.parse_function(false, true)?)),
                "async" if self.is_async_function() => {
                    self.bump();
                    StmtKind::Function(Box::new(self.parse_function(true, true)?))
                }
                "class" => StmtKind::Class(Box::new(self.parse_class(true)?)),
                "if" => self.parse_if()?,
                "for" => self.parse_for()?,
                "while" => {
                    self.bump();
                    self.expect("(")?;
                    let test = self.parse_expression(false)?;
                    self.expect(")")?;
                    let body = Box::new(self.parse_statement()?);
                    StmtKind::While { test, body }
                }
                "do" => {
                    self.bump();
                    let body = Box::new(self.parse_statement()?);
                    self.expect("while")?;
                    self.expect("(")?;
                    let test = self.parse_expression(false)?;
                    self.expect(")")?;
                    self.eat(";");
                    StmtKind::DoWhile { body, test }
                }
                "return" => {
                    self.bump();
                    let arg = if self.is(";") || self.is("}") || self.at_end() || self.nl_before() {
                        None
                    } else {
                        Some(self.parse_expression(false)?)
                    };
                    self.consume_semicolon()?;
                    StmtKind::Return(arg)
                }
                "break" | "continue" => {
                    let is_break = self.bump().text(self.src) == "break";
                    let label = if self.is_ident_token(0) && !self.nl_before() {
                        Some(self.ident()?)
                    } else {
                        None
                    };
                    self.consume_semicolon()?;
                    if is_break {
                        StmtKind::Break(label)
                    } else {
                        StmtKind::Continue(label)
                    }
                }
                "throw" => {
                    self.bump();
                    if self.nl_before() {
                        return Err(self.error("line break after throw"));
                    }
                    let arg = self.parse_expression(false)?;
                    self.consume_semicolon()?;
                    StmtKind::Throw(arg)
                }
                "try" => self.parse_try()?,
                "switch" => self.parse_switch()?,
                "with" => {
                    self.bump();
                    self.expect("(")?;
                    let object = self.parse_expression(false)?;
                    self.expect(")")?;
                    let body = Box::new(self.parse_statement()?);
                    StmtKind::With { object, body }
                }
                "debugger" => {
                    self.bump();
                    self.consume_semicolon()?;
                    StmtKind::Debugger
                }
                _ if self.is_ident_token(0) && self.is_at(1, ":") => {
                    let label = self.ident()?;
                    self.bump();
                    let body = Box::new(self.parse_statement()?);
                    StmtKind::Labeled { label, body }
                }
                _ => self.parse_expression_statement()?,
            }
        } else {
            self.parse_expression_statement()?
        };
        Ok(Stmt {
            kind,
            span: self.span_from(start),
        })
    }

    fn parse_expression_statement(&mut self) -> Result<StmtKind, ParseError> {
        let e = self.parse_expression(false)?;
        self.consume_semicolon()?;
        Ok(StmtKind::Expr(e))
    }

    fn parse_block(&mut self) -> Result<Vec<Stmt>, ParseError> {
        self.expect("{")?;
        let mut body = Vec::new();
        while !self.is("}") {
            if self.at_end() {
                return Err(self.error("expected '}'"));
            }
            body.push(self.parse_item()?);
        }
        self.bump();
        Ok(body)
    }

    fn parse_var_statement(&mut self) -> Result<VarDecl, ParseError> {
        let decl = self.parse_var_decl(false)?;
        self.consume_semicolon()?;
        Ok(decl)
    }

    fn parse_var_decl(&mut self, no_in: bool) -> Result<VarDecl, ParseError> {
        let kind = match self.bump().text(self.src) {
            "var" => VarKind::Var,
            "let" => VarKind::Let,
            _ => VarKind::Const,
        };
        let mut decls = Vec::new();
        loop {
            let start = self.start();
            let target = self.parse_binding_target()?;
            let init = if self.eat("=") {
                Some(self.parse_assign(no_in)?)
            } else {
                None
            };
            decls.push(VarDeclarator {
                target,
                init,
                span: self.span_from(start),
            });
            if !self.eat(",") {
                break;
            }
        }
        Ok(VarDecl { kind, decls })
    }

    fn parse_if(&mut self) -> Result<StmtKind, ParseError> {
        self.bump();
        self.expect("(")?;
        let test = self.parse_expression(false)?;
        self.expect(")")?;
        let cons = Box::new(self.parse_statement()?);
        let alt = if self.eat("else") {
            Some(Box::new(self.parse_statement()?))
        } else {
            None
        };
        Ok(StmtKind::If { test, cons, alt })
    }

    fn parse_for(&mut self) -> Result<StmtKind, ParseError> {
        self.bump();
        self.eat("await");
        self.expect("(")?;
        let mut init = None;
        if self.is("var") || self.is("const") || self.is_let_decl() {
            let decl = self.parse_var_decl(true)?;
            if self.is("of") || self.is("in") {
                return self.parse_for_in_rest(ForHead::Var(decl));
            }
            init = Some(ForInit::Var(decl));
        } else if !self.is(";") {
            let e = self.parse_expression(true)?;
            if self.is("of") || self.is("in") {
                let pat = self.expr_to_pat(e)?;
                return self.parse_for_in_rest(ForHead::Pat(pat));
            }
            init = Some(ForInit::Expr(e));
        }
        self.expect(";")?;
        let test = if self.is(";") { None } else { Some(self.parse_expression(false)?) };
        self.expect(";")?;
        let update = if self.is(")") { None } else { Some(self.parse_expression(false)?) };
        self.expect(")")?;
        let body = Box::new(self.parse_statement()?);
        Ok(StmtKind::For {
            init,
            test,
            update,
            body,
        })
    }

    fn parse_for_in_rest(&mut self, left: ForHead) -> Result<StmtKind, ParseError> {
        let of = self.bump().text(self.src) == "of";
        let right = if of { self.parse_assign(false)? } else { self.parse_expression(false)? };
        self.expect(")")?;
        let body = Box::new(self.parse_statement()?);
        Ok(StmtKind::ForIn { left, right, body, of })
    }

    fn parse_try(&mut self) -> Result<StmtKind, ParseError> {
        self.bump();
        let block = self.parse_block()?;
        let mut handler = None;
        if self.is("catch") {
            let start = self.start();
            self.bump();
            let param = if self.eat("(") {
                let p = self.parse_binding_target()?;
                self.expect(")")?;
                Some(p)
            } else {
                None
            };
            let body = self.parse_block()?;
            handler = Some(CatchClause {
                param,
                body,
                span: self.span_from(start),
            });
        }
        let finalizer = if self.eat("finally") { Some(self.parse_block()?) } else { None };
        if handler.is_none() && finalizer.is_none() {
            return Err(self.error("expected 'catch' or 'finally'"));
        }
        Ok(StmtKind::Try {
            block,
            handler,
            finalizer,
        })
    }

    fn parse_switch(&mut self) -> Result<StmtKind, ParseError> {
        self.bump();
        self.expect("(")?;
        let disc = self.parse_expression(false)?;
        self.expect(")")?;
        self.expect("{")?;
        let mut cases = Vec::new();
        while !self.eat("}") {
            let start = self.start();
            let test = if self.eat("default") {
                None
            } else {
                self.expect("case")?;
                Some(self.parse_expression(false)?)
            };
            self.expect(":")?;
            let mut body = Vec::new();
            while !self.is("case") && !self.is("default") && !self.is("}") {
                if self.at_end() {
                    return Err(self.error("expected '}'"));
                }
                body.push(self.parse_item()?);
            }
            cases.push(SwitchCase {
                test,
                body,
                span: self.span_from(start),
            });
        }
        Ok(StmtKind::Switch { disc, cases })
    }

    fn parse_module_source(&mut self) -> Result<String, ParseError> {
        if self.kind() == Some(TokenKind::Str) {
            let t = self.bump();
            Ok(string_value(t.text(self.src)))
        } else {
            Err(self.error("expected module specifier"))
        }
    }

    fn parse_import(&mut self) -> Result<Stmt, ParseError> {
        let start = self.start();
        self.bump();
        let mut specs = Vec::new();
        if self.kind() != Some(TokenKind::Str) {
            if self.is_ident_token(0) {
                let local = self.ident()?;
                specs.push(ImportSpec {
                    local,
                    imported: ImportedName::Default,
                });
                self.eat(",");
            }
            if self.eat("*") {
                self.expect("as")?;
                let local = self.ident()?;
                specs.push(ImportSpec {
                    local,
                    imported: ImportedName::Namespace,
                });
            } else if self.eat("{") {
                while !self.eat("}") {
                    let imported = if self.kind() == Some(TokenKind::Str) {
                        string_value(self.bump().text(self.src))
                    } else {
                        self.ident_name()?
                    };
                    let local = if self.eat("as") { self.ident()? } else { imported.clone() };
                    specs.push(ImportSpec {
                        local,
                        imported: ImportedName::Named(imported),
                    });
                    if !self.eat(",") {
                        self.expect("}")?;
                        break;
                    }
                }
            }
            self.expect("from")?;
        }
        let source = self.parse_module_source()?;
        self.consume_semicolon()?;
        Ok(Stmt {
            kind: StmtKind::Import { specs, source },
            span: self.span_from(start),
        })
    }

    fn parse_export(&mut self) -> Result<Stmt, ParseError> {
        let start = self.start();
        self.bump();
        let decl = if self.eat("default") {
            let e = if self.is("function") || self.is_async_function() {
                let fstart = self.start();
                let is_async = self.eat("async");
                let f = self.parse_function(is_async, false)?;
                Expr {
                    kind: ExprKind::Function(Box::new(f)),
                    span: self.span_from(fstart),
                }
            } else if self.is("class") {
                let cstart = self.start();
                let c = self.parse_class(false)?;
                Expr {
                    kind: ExprKind::Class(Box::new(c)),
                    span: self.span_from(cstart),
                }
            } else {
                let e = self.parse_assign(false)?;
                self.consume_semicolon()?;
                e
            };
            ExportDecl::Default(e)
        } else if self.eat("*") {
            let alias = if self.eat("as") { Some(self.ident_name()?) } else { None };
            self.expect("from")?;
            let source = self.parse_module_source()?;
            self.consume_semicolon()?;
            ExportDecl::All { alias, source }
        } else if self.eat("{") {
            let mut specs = Vec::new();
            while !self.eat("}") {
                let local = self.ident_name()?;
                let exported = if self.eat("as") { self.ident_name()? } else { local.clone() };
                specs.push(ExportSpec { local, exported });
                if !self.eat(",") {
                    self.expect("}")?;
                    break;
                }
            }
            let source = if self.eat("from") { Some(self.parse_module_source()?) } else { None };
            self.consume_semicolon()?;
            ExportDecl::Named { specs, source }
        } else {
            let inner = self.parse_statement()?;
            match inner.kind {
                StmtKind::Var(_) | StmtKind::Function(_) | StmtKind::Class(_) => {}
                _ => return Err(ParseError::at(self.src, inner.span.start, "expected declaration after export")),
            }
            ExportDecl::Decl(Box::new(inner))
        };
        Ok(Stmt {
            kind: StmtKind::Export(decl),
            span: self.span_from(start),
        })
    }

    // ---- functions and classes ----

    /// Parses from the `function` keyword. A preceding `async` must already be consumed.
    fn parse_function(&mut self, is_async: bool, require_name: bool) -> Result<Function, ParseError> {
        let start = if is_async {
            self.tokens[self.pos - 1].span.start
        } else {
            self.start()
        };
        self.expect("function")?;
        let is_generator = self.eat("*");
        let id = if self.is_ident_token(0) || (self.kind() == Some(TokenKind::Word) && matches!(self.text(), "yield" | "await")) {
            Some(self.bump().text(self.src).to_string())
        } else if require_name {
            return Err(self.error("expected function name"));
        } else {
            None
        };
        self.parse_function_rest(start, id, is_async, is_generator)
    }

    fn parse_function_rest(
        &mut self,
        start: usize,
        id: Option<String>,
        is_async: bool,
        is_generator: bool,
    ) -> Result<Function, ParseError> {
        let saved = self.ctx;
        self.ctx = FnCtx { is_async, is_generator };
        let params = self.parse_params()?;
        let body_start = self.start();
        let body = self.parse_block();
        self.ctx = saved;
        let body = body?;
        Ok(Function {
            id,
            params,
            body: FnBody::Block(body),
            is_async,
            is_generator,
            is_arrow: false,
            span: self.span_from(start),
            body_span: self.span_from(body_start),
        })
    }

    fn parse_params(&mut self) -> Result<Vec<Pat>, ParseError> {
        self.expect("(")?;
        let mut params = Vec::new();
        while !self.eat(")") {
            params.push(self.parse_binding_element()?);
            if !self.eat(",") {
                self.expect(")")?;
                break;
            }
        }
        Ok(params)
    }

    fn parse_class(&mut self, require_name: bool) -> Result<Class, ParseError> {
        let start = self.start();
        self.expect("class")?;
        let id = if self.is_ident_token(0) && !self.is("extends") {
            Some(self.ident()?)
        } else if require_name {
            return Err(self.error("expected class name"));
        } else {
            None
        };
        let super_class = if self.eat("extends") {
            Some(Box::new(self.parse_lhs()?))
        } else {
            None
        };
        self.expect("{")?;
        let mut members = Vec::new();
        while !self.eat("}") {
            if self.at_end() {
                return Err(self.error("expected '}'"));
            }
            if self.eat(";") {
                continue;
            }
            members.push(self.parse_class_member()?);
        }
        Ok(Class {
            id,
            super_class,
            members,
            span: self.span_from(start),
        })
    }

    /// True if the current word is a modifier rather than a member name.
    fn is_modifier(&self) -> bool {
        !(self.tok_at(1).is_none()
            || ["(", "=", ";", "}", ",", ":"].iter().any(|s| self.is_at(1, s)))
    }

    fn parse_class_member(&mut self) -> Result<ClassMember, ParseError> {
        let start = self.start();
        let mut is_static = false;
        if self.is("static") && self.is_modifier() {
            self.bump();
            if self.is("{") {
                let saved = self.ctx;
                self.ctx = FnCtx::default();
                let body = self.parse_block();
                self.ctx = saved;
                return Ok(ClassMember::StaticBlock {
                    body: body?,
                    span: self.span_from(start),
                });
            }
            is_static = true;
        }
        let (kind, is_async, is_generator) = self.parse_method_modifiers();
        let key = self.parse_prop_key()?;
        if self.is("(") {
            let kind = match (kind, &key) {
                (MethodKind::Method, PropKey::Ident(n)) if n == "constructor" && !is_static => MethodKind::Constructor,
                (MethodKind::Method, PropKey::Str(n)) if n == "constructor" && !is_static => MethodKind::Constructor,
                _ => kind,
            };
            let func = self.parse_function_rest(start, key.name().map(str::to_string), is_async, is_generator)?;
            return Ok(ClassMember::Method {
                key,
                kind,
                is_static,
                func,
                span: self.span_from(start),
            });
        }
        if kind != MethodKind::Method || is_async || is_generator {
            return Err(self.error("expected '('"));
        }
        let value = if self.eat("=") {
            let saved = self.ctx;
            self.ctx = FnCtx::default();
            let v = self.parse_assign(false);
            self.ctx = saved;
            Some(v?)
        } else {
            None
        };
        self.consume_semicolon()?;
        Ok(ClassMember::Field {
            key,
            value,
            is_static,
            span: self.span_from(start),
        })
    }

    /// Parses `async`, `*`, `get`, `set` prefixes of a method.
    fn parse_method_modifiers(&mut self) -> (MethodKind, bool, bool) {
        let mut is_async = false;
        if self.is("async") && self.is_modifier() && !self.tok_at(1).is_some_and(|t| t.nl_before) {
            self.bump();
            is_async = true;
        }
        let is_generator = self.eat("*");
        let mut kind = MethodKind::Method;
        if !is_async && !is_generator && (self.is("get") || self.is("set")) && self.is_modifier() {
            kind = if self.bump().text(self.src) == "get" { MethodKind::Get } else { MethodKind::Set };
        }
        (kind, is_async, is_generator)
    }

    fn parse_prop_key(&mut self) -> Result<PropKey, ParseError> {
        match self.kind() {
            Some(TokenKind::Word) => Ok(PropKey::Ident(self.bump().text(self.src).to_string())),
            Some(TokenKind::Str) => Ok(PropKey::Str(string_value(self.bump().text(self.src)))),
            Some(TokenKind::Num) => Ok(PropKey::Num(self.bump().text(self.src).to_string())),
            Some(TokenKind::Private) => Ok(PropKey::Private(self.bump().text(self.src)[1..].to_string())),
            Some(TokenKind::Punct) if self.is("[") => {
                self.bump();
                let e = self.parse_assign(false)?;
                self.expect("]")?;
                Ok(PropKey::Computed(Box::new(e)))
            }
            _ => Err(self.error("expected property key")),
        }
    }

    // ---- patterns ----

    fn parse_binding_target(&mut self) -> Result<Pat, ParseError> {
        let start = self.start();
        let kind = if self.eat("[") {
            let mut items = Vec::new();
            while !self.eat("]") {
                if self.eat(",") {
                    items.push(None);
                    continue;
                }
                items.push(Some(self.parse_binding_element()?));
                if !self.eat(",") {
                    self.expect("]")?;
                    break;
                }
            }
            PatKind::Array(items)
        } else if self.eat("{") {
            let mut props = Vec::new();
            while !self.eat("}") {
                if self.eat("...") {
                    props.push(PatProp::Rest(self.parse_binding_target()?));
                } else {
                    let kstart = self.start();
                    let key = self.parse_prop_key()?;
                    let value = if self.eat(":") {
                        self.parse_binding_element()?
                    } else {
                        let name = match &key {
                            PropKey::Ident(n) => n.clone(),
                            _ => return Err(self.error("expected ':'")),
                        };
                        let ident = Pat {
                            kind: PatKind::Ident(name),
                            span: self.span_from(kstart),
                        };
                        self.parse_default(ident, kstart)?
                    };
                    props.push(PatProp::KeyValue { key, value });
                }
                if !self.eat(",") {
                    self.expect("}")?;
                    break;
                }
            }
            PatKind::Object(props)
        } else if self.kind() == Some(TokenKind::Word) && (self.is_ident_token(0) || matches!(self.text(), "yield" | "await")) {
            PatKind::Ident(self.bump().text(self.src).to_string())
        } else {
            return Err(self.error("expected binding pattern"));
        };
        Ok(Pat {
            kind,
            span: self.span_from(start),
        })
    }

    fn parse_default(&mut self, target: Pat, start: usize) -> Result<Pat, ParseError> {
        if self.eat("=") {
            let right = self.parse_assign(false)?;
            Ok(Pat {
                kind: PatKind::Assign {
                    left: Box::new(target),
                    right: Box::new(right),
                },
                span: self.span_from(start),
            })
        } else {
            Ok(target)
        }
    }

    fn parse_binding_element(&mut self) -> Result<Pat, ParseError> {
        let start = self.start();
        if self.eat("...") {
            let inner = self.parse_binding_target()?;
            return Ok(Pat {
                kind: PatKind::Rest(Box::new(inner)),
                span: self.span_from(start),
            });
        }
        let target = self.parse_binding_target()?;
        self.parse_default(target, start)
    }

    fn expr_to_pat(&self, e: Expr) -> Result<Pat, ParseError> {
        let span = e.span;
        let kind = match e.kind {
            ExprKind::Ident(n) => PatKind::Ident(n),
            ExprKind::Member { .. } => PatKind::Expr(Box::new(e)),
            ExprKind::Array(items) => {
                let mut out = Vec::new();
                for item in items {
                    out.push(match item {
                        None => None,
                        Some(x) => Some(self.expr_to_pat(x)?),
                    });
                }
                PatKind::Array(out)
            }
            ExprKind::Object(props) => {
                let mut out = Vec::new();
                for p in props {
                    out.push(match p {
                        Prop::KeyValue { key, value, .. } => PatProp::KeyValue {
                            key,
                            value: self.expr_to_pat(value)?,
                        },
                        Prop::Shorthand { name, default, span } => {
                            let ident = Pat {
                                kind: PatKind::Ident(name.clone()),
                                span,
                            };
                            let value = match default {
                                Some(d) => Pat {
                                    kind: PatKind::Assign {
                                        left: Box::new(ident),
                                        right: Box::new(d),
                                    },
                                    span,
                                },
                                None => ident,
                            };
                            PatProp::KeyValue {
                                key: PropKey::Ident(name),
                                value,
                            }
                        }
                        Prop::Spread { arg, .. } => PatProp::Rest(self.expr_to_pat(arg)?),
                        Prop::Method { span, .. } => {
                            return Err(ParseError::at(self.src, span.start, "invalid destructuring target"))
                        }
                    });
                }
                PatKind::Object(out)
            }
            ExprKind::Assign { op, target, value } if op == "=" => PatKind::Assign {
                left: target,
                right: value,
            },
            ExprKind::Spread(inner) => PatKind::Rest(Box::new(self.expr_to_pat(*inner)?)),
            _ => return Err(ParseError::at(self.src, span.start, "invalid assignment target")),
        };
        Ok(Pat { kind, span })
    }

    // ---- expressions ----

    fn parse_expression(&mut self, no_in: bool) -> Result<Expr, ParseError> {
        let start = self.start();
        let first = self.parse_assign(no_in)?;
        if !self.is(",") {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat(",") {
            items.push(self.parse_assign(no_in)?);
        }
        Ok(Expr {
            kind: ExprKind::Seq(items),
            span: self.span_from(start),
        })
    }

    /// Index of the token matching the opening bracket at `self.pos + n`.
    fn matching_close(&self, n: usize) -> Option<usize> {
        let mut depth = 0usize;
        let mut i = self.pos + n;
        while let Some(t) = self.tokens.get(i) {
            if t.kind == TokenKind::Punct {
                match t.text(self.src) {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => {
                        depth = depth.checked_sub(1)?;
                        if depth == 0 {
                            return Some(i);
                        }
                    }
                    _ => {}
                }
            }
            i += 1;
        }
        None
    }

    fn arrow_ahead(&self, n: usize) -> bool {
        if self.is_at(n, "(") {
            self.matching_close(n).is_some_and(|close| {
                self.tokens.get(close + 1).is_some_and(|t| {
                    t.kind == TokenKind::Punct && t.text(self.src) == "=>" && !t.nl_before
                })
            })
        } else {
            (self.is_ident_token(n) || matches!(self.text_at(n), "yield" | "await")) && self.is_at(n + 1, "=>")
        }
    }

    fn parse_assign(&mut self, no_in: bool) -> Result<Expr, ParseError> {
        self.enter()?;
        let r = self.parse_assign_inner(no_in);
        self.leave();
        r
    }

    fn parse_assign_inner(&mut self, no_in: bool) -> Result<Expr, ParseError> {
        let start = self.start();
        if self.is("async") && !self.tok_at(1).is_some_and(|t| t.nl_before) && self.arrow_ahead(1) {
            self.bump();
            return self.parse_arrow(start, true, no_in);
        }
        if self.arrow_ahead(0) {
            return self.parse_arrow(start, false, no_in);
        }
        if self.ctx.is_generator && self.is("yield") {
            self.bump();
            let delegate = self.eat("*");
            let arg = if self.nl_before()
                || self.at_end()
                || matches!(self.text(), ")" | "]" | "}" | "," | ";" | ":")
                    && self.kind() == Some(TokenKind::Punct)
            {
                None
            } else {
                Some(Box::new(self.parse_assign(no_in)?))
            };
            return Ok(Expr {
                kind: ExprKind::Yield { arg, delegate },
                span: self.span_from(start),
            });
        }
        let left = self.parse_conditional(no_in)?;
        if self.kind() == Some(TokenKind::Punct) && ASSIGN_OPS.contains(&self.text()) {
            let op = self.bump().text(self.src).to_string();
            let target = if op == "=" {
                self.expr_to_pat(left)?
            } else {
                match left.kind {
                    ExprKind::Ident(_) | ExprKind::Member { .. } => self.expr_to_pat(left)?,
                    _ => return Err(ParseError::at(self.src, left.span.start, "invalid assignment target")),
                }
            };
            let value = self.parse_assign(no_in)?;
            return Ok(Expr {
                kind: ExprKind::Assign {
                    op,
                    target: Box::new(target),
                    value: Box::new(value),
                },
                span: self.span_from(start),
            });
        }
        Ok(left)
    }

    fn parse_arrow(&mut self, start: usize, is_async: bool, no_in: bool) -> Result<Expr, ParseError> {
        let saved = self.ctx;
        self.ctx = FnCtx {
            is_async,
            is_generator: false,
        };
        let params = if self.is("(") {
            self.parse_params()
        } else {
            let pstart = self.start();
            let name = self.bump().text(self.src).to_string();
            Ok(vec![Pat {
                kind: PatKind::Ident(name),
                span: self.span_from(pstart),
            }])
        };
        let result = params.and_then(|params| {
            self.expect("=>")?;
            let body_start = self.start();
            let body = if self.is("{") {
                FnBody::Block(self.parse_block()?)
            } else {
                FnBody::Expr(Box::new(self.parse_assign(no_in)?))
            };
            Ok((params, body, self.span_from(body_start)))
        });
        self.ctx = saved;
        let (params, body, body_span) = result?;
        let span = self.span_from(start);
        Ok(Expr {
            kind: ExprKind::Arrow(Box::new(Function {
                id: None,
                params,
                body,
                is_async,
                is_generator: false,
                is_arrow: true,
                span,
                body_span,
            })),
            span,
        })
    }

    fn parse_conditional(&mut self, no_in: bool) -> Result<Expr, ParseError> {
        let start = self.start();
        let test = self.parse_binary(0, no_in)?;
        if !self.eat("?") {
            return Ok(test);
        }
        let cons = self.parse_assign(false)?;
        self.expect(":")?;
        let alt = self.parse_assign(no_in)?;
        Ok(Expr {
            kind: ExprKind::Cond {
                test: Box::new(test),
                cons: Box::new(cons),
                alt: Box::new(alt),
            },
            span: self.span_from(start),
        })
    }

    fn current_binary_op(&self, no_in: bool) -> Option<(&'a str, u8)> {
        let t = self.tok()?;
        let text = self.text();
        match t.kind {
            TokenKind::Punct => binary_precedence(text).map(|p| (text, p)),
            TokenKind::Word if text == "instanceof" || (text == "in" && !no_in) => binary_precedence(text).map(|p| (text, p)),
            _ => None,
        }
    }

    fn parse_binary(&mut self, min_prec: u8, no_in: bool) -> Result<Expr, ParseError> {
        let start = self.start();
        let mut left = self.parse_unary()?;
        while let Some((op, prec)) = self.current_binary_op(no_in) {
            if prec <= min_prec {
                break;
            }
            self.bump();
            // `**` is right-associative
            let next_min = if op == "**" { prec - 1 } else { prec };
            self.enter()?;
            let right = self.parse_binary(next_min, no_in);
            self.leave();
            let right = right?;
            left = Expr {
                kind: ExprKind::Binary {
                    op: op.to_string(),
                    left: Box::new(left),
                    right: Box::new(right),
                },
                span: self.span_from(start),
            };
        }
        Ok(left)
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        let start = self.start();
        let text = self.text();
        let is_unary_punct = self.kind() == Some(TokenKind::Punct) && matches!(text, "!" | "~" | "+" | "-");
        let is_unary_word = self.kind() == Some(TokenKind::Word) && matches!(text, "typeof" | "void" | "delete");
        if is_unary_punct || is_unary_word {
            self.bump();
            self.enter()?;
            let arg = self.parse_unary();
            self.leave();
            return Ok(Expr {
                kind: ExprKind::Unary {
                    op: text.to_string(),
                    arg: Box::new(arg?),
                },
                span: self.span_from(start),
            });
        }
        if self.ctx.is_async && self.is("await") {
            self.bump();
            self.enter()?;
            let arg = self.parse_unary();
            self.leave();
            return Ok(Expr {
                kind: ExprKind::Await(Box::new(arg?)),
                span: self.span_from(start),
            });
        }
        if self.kind() == Some(TokenKind::Punct) && matches!(text, "++" | "--") {
            self.bump();
            self.enter()?;
            let arg = self.parse_unary();
            self.leave();
            return Ok(Expr {
                kind: ExprKind::Update {
                    op: text.to_string(),
                    prefix: true,
                    arg: Box::new(arg?),
                },
                span: self.span_from(start),
            });
        }
        let e = self.parse_lhs()?;
        if self.kind() == Some(TokenKind::Punct) && matches!(self.text(), "++" | "--") && !self.nl_before() {
            let op = self.bump().text(self.src).to_string();
            return Ok(Expr {
                kind: ExprKind::Update {
                    op,
                    prefix: false,
                    arg: Box::new(e),
                },
                span: self.span_from(start),
            });
        }
        Ok(e)
    }

    /// Call and member expressions, including `new`.
    fn parse_lhs(&mut self) -> Result<Expr, ParseError> {
        let start = self.start();
        let base = if self.is("new") { self.parse_new()? } else { self.parse_primary()? };
        self.parse_suffixes(start, base, true)
    }

    fn parse_new(&mut self) -> Result<Expr, ParseError> {
        let start = self.start();
        self.bump();
        if self.eat(".") {
            let prop = self.ident_name()?;
            return Ok(Expr {
                kind: ExprKind::MetaProp(format!("new.{prop}")),
                span: self.span_from(start),
            });
        }
        self.enter()?;
        let callee = if self.is("new") { self.parse_new() } else { self.parse_primary() };
        self.leave();
        let callee = callee?;
        let cstart = callee.span.start;
        let callee = self.parse_suffixes(cstart, callee, false)?;
        let args = if self.is("(") { self.parse_args()? } else { Vec::new() };
        Ok(Expr {
            kind: ExprKind::New {
                callee: Box::new(callee),
                args,
            },
            span: self.span_from(start),
        })
    }

    fn parse_args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect("(")?;
        let mut args = Vec::new();
        while !self.eat(")") {
            let start = self.start();
            if self.eat("...") {
                let arg = self.parse_assign(false)?;
                args.push(Expr {
                    kind: ExprKind::Spread(Box::new(arg)),
                    span: self.span_from(start),
                });
            } else {
                args.push(self.parse_assign(false)?);
            }
            if !self.eat(",") {
                self.expect(")")?;
                break;
            }
        }
        Ok(args)
    }

    fn parse_member_prop(&mut self) -> Result<MemberProp, ParseError> {
        match self.kind() {
            Some(TokenKind::Private) => Ok(MemberProp::Private(self.bump().text(self.src)[1..].to_string())),
            _ => Ok(MemberProp::Ident(self.ident_name()?)),
        }
    }

    fn parse_suffixes(&mut self, start: usize, mut e: Expr, allow_call: bool) -> Result<Expr, ParseError> {
        loop {
            let kind = if self.eat(".") {
                ExprKind::Member {
                    object: Box::new(e),
                    prop: self.parse_member_prop()?,
                    optional: false,
                }
            } else if self.is("?.") {
                if !allow_call {
                    return Err(self.error("optional chain in new expression"));
                }
                self.bump();
                if self.is("(") {
                    ExprKind::Call {
                        callee: Box::new(e),
                        args: self.parse_args()?,
                        optional: true,
                    }
                } else if self.eat("[") {
                    let key = self.parse_expression(false)?;
                    self.expect("]")?;
                    ExprKind::Member {
                        object: Box::new(e),
                        prop: MemberProp::Computed(Box::new(key)),
                        optional: true,
                    }
                } else {
                    ExprKind::Member {
                        object: Box::new(e),
                        prop: self.parse_member_prop()?,
                        optional: true,
                    }
                }
            } else if self.eat("[") {
                let key = self.parse_expression(false)?;
                self.expect("]")?;
                ExprKind::Member {
                    object: Box::new(e),
                    prop: MemberProp::Computed(Box::new(key)),
                    optional: false,
                }
            } else if allow_call && self.is("(") {
                ExprKind::Call {
                    callee: Box::new(e),
                    args: self.parse_args()?,
                    optional: false,
                }
            } else if self.kind() == Some(TokenKind::Template) {
                let exprs = self.parse_template_exprs()?;
                ExprKind::TaggedTemplate {
                    tag: Box::new(e),
                    exprs,
                }
            } else {
                return Ok(e);
            };
            e = Expr {
                kind,
                span: self.span_from(start),
            };
        }
    }

    fn parse_template_exprs(&mut self) -> Result<Vec<Expr>, ParseError> {
        let tok = self.bump();
        let subs = self.templates.get(&tok.span.start).cloned().unwrap_or_default();
        let mut exprs = Vec::new();
        for sub in subs {
            let mut lexed = lexer::tokenize(&self.src[sub.start..sub.end]).map_err(|e| ParseError::at(self.src, sub.start + e.offset, e.message))?;
            for t in &mut lexed.tokens {
                t.span = Span::new(t.span.start + sub.start, t.span.end + sub.start);
            }
            lexed.templates = lexed
                .templates
                .into_iter()
                .map(|(k, v)| {
                    let v = v.into_iter().map(|s| Span::new(s.start + sub.start, s.end + sub.start)).collect();
                    (k + sub.start, v)
                })
                .collect();
            let mut inner = Parser::new(self.src, lexed);
            inner.ctx = self.ctx;
            inner.depth = self.depth;
            inner.prev_end = sub.start;
            let e = inner.parse_expression(false)?;
            if !inner.at_end() {
                return Err(inner.error("unexpected token in template substitution"));
            }
            exprs.push(e);
        }
        Ok(exprs)
    }

    fn parse_primary(&mut self) -> Result<Expr, ParseError> {
        let start = self.start();
        let Some(tok) = self.tok().copied() else {
            return Err(self.error("expected expression"));
        };
        let text = tok.text(self.src);
        let kind = match tok.kind {
            TokenKind::Num => {
                self.bump();
                ExprKind::Lit(Lit::Num(text.to_string()))
            }
            TokenKind::Str => {
                self.bump();
                ExprKind::Lit(Lit::Str(string_value(text)))
            }
            TokenKind::Regex => {
                self.bump();
                ExprKind::Lit(Lit::Regex(text.to_string()))
            }
            TokenKind::Template => ExprKind::Template(self.parse_template_exprs()?),
            TokenKind::Private => {
                // `#x in obj`
                self.bump();
                ExprKind::Ident(text.to_string())
            }
            TokenKind::Word => match text {
                "this" => {
                    self.bump();
                    ExprKind::This
                }
                "super" => {
                    self.bump();
                    ExprKind::Super
                }
                "null" => {
                    self.bump();
                    ExprKind::Lit(Lit::Null)
                }
                "true" | "false" => {
                    self.bump();
                    ExprKind::Lit(Lit::Bool(text == "true"))
                }
                "function" => ExprKind::Function(Box::new(self.parse_function(false, false)?)),
                "async" if self.is_async_function() => {
                    self.bump();
                    ExprKind::Function(Box::new(self.parse_function(true, false)?))
                }
                "class" => ExprKind::Class(Box::new(self.parse_class(false)?)),
                "import" => {
                    self.bump();
                    if self.eat(".") {
                        let prop = self.ident_name()?;
                        ExprKind::MetaProp(format!("import.{prop}"))
                    } else if self.is("(") {
                        ExprKind::Import
                    } else {
                        return Err(self.error("unexpected 'import'"));
                    }
                }
                _ if self.is_ident_token(0) || matches!(text, "yield" | "await") => {
                    self.bump();
                    ExprKind::Ident(text.to_string())
                }
                _ => return Err(self.error("unexpected keyword")),
            },
            TokenKind::Punct => match text {
                "(" => {
                    self.bump();
                    let e = self.parse_expression(false)?;
                    self.expect(")")?;
                    return Ok(e);
                }
                "[" => self.parse_array()?,
                "{" => self.parse_object()?,
                _ => return Err(self.error("expected expression")),
            },
        };
        Ok(Expr {
            kind,
            span: self.span_from(start),
        })
    }

    fn parse_array(&mut self) -> Result<ExprKind, ParseError> {
        self.bump();
        let mut items = Vec::new();
        while !self.eat("]") {
            if self.eat(",") {
                items.push(None);
                continue;
            }
            let start = self.start();
            let item = if self.eat("...") {
                let arg = self.parse_assign(false)?;
                Expr {
                    kind: ExprKind::Spread(Box::new(arg)),
                    span: self.span_from(start),
                }
            } else {
                self.parse_assign(false)?
            };
            items.push(Some(item));
            if !self.eat(",") {
                self.expect("]")?;
                break;
            }
        }
        Ok(ExprKind::Array(items))
    }

    fn parse_object(&mut self) -> Result<ExprKind, ParseError> {
        self.bump();
        let mut props = Vec::new();
        while !self.eat("}") {
            if self.at_end() {
                return Err(self.error("expected '}'"));
            }
            props.push(self.parse_object_prop()?);
            if !self.eat(",") {
                self.expect("}")?;
                break;
            }
        }
        Ok(ExprKind::Object(props))
    }

    fn parse_object_prop(&mut self) -> Result<Prop, ParseError> {
        let start = self.start();
        if self.eat("...") {
            let arg = self.parse_assign(false)?;
            return Ok(Prop::Spread {
                arg,
                span: self.span_from(start),
            });
        }
        let (kind, is_async, is_generator) = self.parse_method_modifiers();
        let key_is_ident = self.kind() == Some(TokenKind::Word);
        let key = self.parse_prop_key()?;
        if self.is("(") {
            let func = self.parse_function_rest(start, key.name().map(str::to_string), is_async, is_generator)?;
            return Ok(Prop::Method {
                key,
                kind,
                func,
                span: self.span_from(start),
            });
        }
        if kind != MethodKind::Method || is_async || is_generator {
            return Err(self.error("expected '('"));
        }
        if self.eat(":") {
            let value = self.parse_assign(false)?;
            return Ok(Prop::KeyValue {
                key,
                value,
                span: self.span_from(start),
            });
        }
        match key {
            PropKey::Ident(name) if key_is_ident => {
                let default = if self.eat("=") { Some(self.parse_assign(false)?) } else { None };
                Ok(Prop::Shorthand {
                    name,
                    default,
                    span: self.span_from(start),
                })
            }
            _ => Err(self.error("expected ':'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> Program {
        parse_js(src).unwrap_or_else(|e| panic!("{src}: {e}"))
    }

    #[test]
    fn single_var_declaration_span() {
        let p = parse("var x = 1;");
        assert_eq!(p.body.len(), 1);
        assert_eq!(p.body[0].kind.name(), "VariableDeclaration");
        assert_eq!(p.body[0].span, Span::new(0, 10));
    }

    #[test]
    fn class_with_constructor() {
        let p = parse("class A { constructor() {} }");
        let StmtKind::Class(c) = &p.body[0].kind else { panic!() };
        assert_eq!(c.id.as_deref(), Some("A"));
        assert!(c.constructor().is_some());
    }

    #[test]
    fn malformed_function_fails() {
        let e = parse_js("function (").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn asi_and_restricted_return() {
        let p = parse("function f() {\n return\n 1 }\nvar a = 1\nvar b = 2");
        assert_eq!(p.body.len(), 3);
        let StmtKind::Function(f) = &p.body[0].kind else { panic!() };
        assert_eq!(f.body_stmts().len(), 2);
        assert!(matches!(f.body_stmts()[0].kind, StmtKind::Return(None)));
    }

    #[test]
    fn arrows_and_destructuring() {
        let p = parse("const f = async ({a, b = 2}, ...rest) => a + b; [x, y] = [y, x]; ({p, q} = obj);");
        assert_eq!(p.body.len(), 3);
        let StmtKind::Var(d) = &p.body[0].kind else { panic!() };
        let f = d.decls[0].init.as_ref().unwrap().as_function().unwrap();
        assert!(f.is_async && f.is_arrow);
        assert_eq!(f.params.len(), 2);
    }

    #[test]
    fn modern_syntax_parses() {
        let src = r#"
            import def, { a as b, c } from './m';
            import * as ns from "ns";
            export const k = 1;
            export default class extends Base { static #count = 0; get v() { return this.#v } static { init(); } }
            export { b as bee };
            export * from './other';
            async function* gen() { for await (const x of src) { yield* x; } }
            const o = { ...rest, [key]: 1, m() {}, get g() { return 1 }, async am() { await z } };
            let t = tag`a${b}c${ {d: 1}.d }`;
            a?.b?.[c]?.(d) ?? e;
            x **= 2 ** 3 ** 2;
            label: for (var i = 0, j; i < n; i++) { if (i in obj) continue label; else break; }
            switch (v) { case 1: f(); break; default: g() }
            try { h() } catch { } finally { }
            do x++; while (x < 5)
            new a.b.C(1).run();
            new.target;
            var re = /[/]+/g.exec(s);
        "#;
        let p = parse(src);
        assert_eq!(p.body.len(), 18);
    }

    #[test]
    fn object_literal_in_arrow_body_and_paren() {
        parse("var f = () => ({a: 1}); var g = (a, b) => { return a };");
        parse("if (a) b(); else if (c) d(); else { e() }");
        parse("for (const [k, v] of Object.entries(o)) {} for (k in o) ;");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_js("var = 3;").is_err());
        assert!(parse_js("a b").is_err());
        assert!(parse_js("({a:1} = 2").is_err());
        assert!(parse_js("1 = 2").is_err());
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let src = format!("x = {}1{};", "(".repeat(5000), ")".repeat(5000));
        assert!(parse_js(&src).is_err());
    }

    #[test]
    fn deep_but_legal_nesting_parses_and_drops() {
        let src = format!("x = {}1{};", "[".repeat(450), "]".repeat(450));
        let p = parse(&src);
        assert_eq!(p.body.len(), 1);
    }

    #[test]
    fn statement_spans_cover_semicolons() {
        let src = "a();\nb()\nfunction f() {}";
        let p = parse(src);
        let slices: Vec<_> = p.body.iter().map(|s| &src[s.span.start..s.span.end]).collect();
        assert_eq!(slices, ["a();", "b()", "function f() {}"]);
    }
}
