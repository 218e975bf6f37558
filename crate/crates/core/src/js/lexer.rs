//! JavaScript tokenizer.
//!
//! Produces a flat token vector with byte offsets. Template literals are a
//! single token; the byte ranges of their `${...}` substitutions are recorded
//! separately so the parser can descend into them.

use std::collections::BTreeMap;

use super::{ParseError, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    /// Identifier names, including keywords and reserved words.
    Word,
    Punct,
    Num,
    Str,
    Template,
    Regex,
    /// `#name` inside classes.
    Private,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
    /// A line terminator appears between the previous token and this one.
    pub nl_before: bool,
}

impl Token {
    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.span.start..self.span.end]
    }
}

#[derive(Debug, Clone, Default)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    /// Template token start offset -> substitution expression spans.
    pub templates: BTreeMap<usize, Vec<Span>>,
}

const PUNCTUATORS: &[&str] = &[
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "??=", "=>", "==", "!=",
    "<=", ">=", "&&", "||", "??", "?.", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=",
    "^=", "**", "<<", ">>", "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/",
    "%", "&", "|", "^", "!", "~", "?", ":", "=", ".", "@",
];

/// Keywords after which a `/` starts a regular expression rather than a division.
const REGEX_AFTER_WORDS: &[&str] = &[
    "return", "typeof", "instanceof", "in", "of", "new", "delete", "void", "throw", "case", "do",
    "else", "yield", "await",
];

pub fn tokenize(src: &str) -> Result<Lexed, ParseError> {
    let mut lexer = Lexer {
        src,
        bytes: src.as_bytes(),
        pos: 0,
        templates: BTreeMap::new(),
    };
    let mut tokens = Vec::new();
    lexer.skip_hashbang();
    let mut regex_ok = true;
    while let Some(tok) = lexer.next_token(regex_ok)? {
        regex_ok = regex_allowed_after(&tok, src);
        tokens.push(tok);
    }
    Ok(Lexed {
        tokens,
        templates: lexer.templates,
    })
}

fn regex_allowed_after(tok: &Token, src: &str) -> bool {
    match tok.kind {
        TokenKind::Word => REGEX_AFTER_WORDS.contains(&tok.text(src)),
        TokenKind::Punct => !matches!(tok.text(src), ")" | "]" | "}"),
        _ => false,
    }
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    templates: BTreeMap<usize, Vec<Span>>,
}

impl<'a> Lexer<'a> {
    fn error(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError::at(self.src, offset, message)
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<u8> {
        self.bytes.get(self.pos + n).copied()
    }

    fn current_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_hashbang(&mut self) {
        if self.src.starts_with("#!") {
            while let Some(c) = self.current_char() {
                if is_line_terminator(c) {
                    break;
                }
                self.pos += c.len_utf8();
            }
        }
    }

    /// Skips whitespace and comments; reports whether a line terminator was crossed.
    fn skip_trivia(&mut self) -> Result<bool, ParseError> {
        let mut newline = false;
        loop {
            let Some(c) = self.current_char() else {
                return Ok(newline);
            };
            if is_line_terminator(c) {
                newline = true;
                self.pos += c.len_utf8();
            } else if c.is_whitespace() || c == '\u{feff}' {
                self.pos += c.len_utf8();
            } else if c == '/' && self.peek_at(1) == Some(b'/') {
                while let Some(c) = self.current_char() {
                    if is_line_terminator(c) {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
            } else if c == '/' && self.peek_at(1) == Some(b'*') {
                let start = self.pos;
                self.pos += 2;
                loop {
                    match self.current_char() {
                        None => return Err(self.error(start, "unterminated comment")),
                        Some('*') if self.peek_at(1) == Some(b'/') => {
                            self.pos += 2;
                            break;
                        }
                        Some(c) => {
                            if is_line_terminator(c) {
                                newline = true;
                            }
                            self.pos += c.len_utf8();
                        }
                    }
                }
            } else if c == '<' && self.src[self.pos..].starts_with("<!--") {
                // HTML-like comment, tolerated in scripts
                while let Some(c) = self.current_char() {
                    if is_line_terminator(c) {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
            } else {
                return Ok(newline);
            }
        }
    }

    fn next_token(&mut self, regex_ok: bool) -> Result<Option<Token>, ParseError> {
        let nl_before = self.skip_trivia()?;
        let start = self.pos;
        let Some(c) = self.current_char() else {
            return Ok(None);
        };
        let kind = if is_id_start(c) || c == '\\' {
            self.read_word()?;
            TokenKind::Word
        } else if c == '#' {
            self.pos += 1;
            match self.current_char() {
                Some(c) if is_id_start(c) => {
                    self.read_word()?;
                    TokenKind::Private
                }
                _ => return Err(self.error(start, "unexpected character '#'")),
            }
        } else if c.is_ascii_digit() || (c == '.' && self.peek_at(1).is_some_and(|b| b.is_ascii_digit())) {
            self.read_number()?;
            TokenKind::Num
        } else if c == '"' || c == '\'' {
            self.read_string(c)?;
            TokenKind::Str
        } else if c == '`' {
            self.read_template()?;
            TokenKind::Template
        } else if c == '/' && regex_ok {
            self.read_regex()?;
            TokenKind::Regex
        } else {
            self.read_punct()?;
            TokenKind::Punct
        };
        Ok(Some(Token {
            kind,
            span: Span::new(start, self.pos),
            nl_before,
        }))
    }

    fn read_word(&mut self) -> Result<(), ParseError> {
        while let Some(c) = self.current_char() {
            if c == '\\' {
                // unicode escape in identifier: \uXXXX or \u{...}
                let start = self.pos;
                self.pos += 1;
                if self.peek() != Some(b'u') {
                    return Err(self.error(start, "invalid escape in identifier"));
                }
                self.pos += 1;
                if self.peek() == Some(b'{') {
                    while let Some(b) = self.peek() {
                        self.pos += 1;
                        if b == b'}' {
                            break;
                        }
                    }
                } else {
                    for _ in 0..4 {
                        match self.peek() {
                            Some(b) if b.is_ascii_hexdigit() => self.pos += 1,
                            _ => return Err(self.error(start, "invalid unicode escape")),
                        }
                    }
                }
            } else if is_id_continue(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        Ok(())
    }

    fn read_number(&mut self) -> Result<(), ParseError> {
        let start = self.pos;
        if self.peek() == Some(b'0') && matches!(self.peek_at(1), Some(b'x' | b'X' | b'o' | b'O' | b'b' | b'B')) {
            self.pos += 2;
            while let Some(b) = self.peek() {
                if b.is_ascii_hexdigit() || b == b'_' {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        } else {
            self.eat_digits();
            if self.peek() == Some(b'.') {
                self.pos += 1;
                self.eat_digits();
            }
            if matches!(self.peek(), Some(b'e' | b'E')) {
                self.pos += 1;
                if matches!(self.peek(), Some(b'+' | b'-')) {
                    self.pos += 1;
                }
                if !self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    return Err(self.error(start, "malformed exponent"));
                }
                self.eat_digits();
            }
        }
        if self.peek() == Some(b'n') {
            self.pos += 1;
        }
        if self.current_char().is_some_and(is_id_start) {
            return Err(self.error(self.pos, "identifier directly after number"));
        }
        Ok(())
    }

    fn eat_digits(&mut self) {
        while let Some(b) = self.peek() {
            if b.is_ascii_digit() || b == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn read_string(&mut self, quote: char) -> Result<(), ParseError> {
        let start = self.pos;
        self.pos += 1;
        loop {
            match self.current_char() {
                None => return Err(self.error(start, "unterminated string literal")),
                Some('\\') => {
                    self.pos += 1;
                    if let Some(c) = self.current_char() {
                        self.pos += c.len_utf8();
                        if c == '\r' && self.peek() == Some(b'\n') {
                            self.pos += 1;
                        }
                    }
                }
                Some(c) if c == quote => {
                    self.pos += 1;
                    return Ok(());
                }
                Some('\n' | '\r') => return Err(self.error(start, "unterminated string literal")),
                Some(c) => self.pos += c.len_utf8(),
            }
        }
    }

    fn read_template(&mut self) -> Result<(), ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut subs = Vec::new();
        loop {
            match self.current_char() {
                None => return Err(self.error(start, "unterminated template literal")),
                Some('\\') => {
                    self.pos += 1;
                    if let Some(c) = self.current_char() {
                        self.pos += c.len_utf8();
                    }
                }
                Some('`') => {
                    self.pos += 1;
                    break;
                }
                Some('$') if self.peek_at(1) == Some(b'{') => {
                    self.pos += 2;
                    let expr_start = self.pos;
                    let expr_end = self.skip_substitution(start)?;
                    subs.push(Span::new(expr_start, expr_end));
                }
                Some(c) => self.pos += c.len_utf8(),
            }
        }
        self.templates.insert(start, subs);
        Ok(())
    }

    /// Lexes past the `}` closing a template substitution; returns the brace offset.
    fn skip_substitution(&mut self, template_start: usize) -> Result<usize, ParseError> {
        let mut depth = 0usize;
        let mut regex_ok = true;
        loop {
            let Some(tok) = self.next_token(regex_ok)? else {
                return Err(self.error(template_start, "unterminated template literal"));
            };
            if tok.kind == TokenKind::Punct {
                match tok.text(self.src) {
                    "{" => depth += 1,
                    "}" if depth == 0 => return Ok(tok.span.start),
                    "}" => depth -= 1,
                    _ => {}
                }
            }
            regex_ok = regex_allowed_after(&tok, self.src);
        }
    }

    fn read_regex(&mut self) -> Result<(), ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut in_class = false;
        loop {
            match self.current_char() {
                None | Some('\n' | '\r') => return Err(self.error(start, "unterminated regular expression")),
                Some('\\') => {
                    self.pos += 1;
                    if let Some(c) = self.current_char() {
                        self.pos += c.len_utf8();
                    }
                }
                Some('[') => {
                    in_class = true;
                    self.pos += 1;
                }
                Some(']') => {
                    in_class = false;
                    self.pos += 1;
                }
                Some('/') if !in_class => {
                    self.pos += 1;
                    break;
                }
                Some(c) => self.pos += c.len_utf8(),
            }
        }
        while let Some(c) = self.current_char() {
            if is_id_continue(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        Ok(())
    }

    fn read_punct(&mut self) -> Result<(), ParseError> {
        let rest = &self.src[self.pos..];
        for p in PUNCTUATORS {
            if rest.starts_with(p) {
                // `?.` followed by a digit is a conditional operator and a number
                if *p == "?." && rest.as_bytes().get(2).is_some_and(|b| b.is_ascii_digit()) {
                    continue;
                }
                self.pos += p.len();
                return Ok(());
            }
        }
        let c = self.current_char().unwrap_or('\0');
        Err(self.error(self.pos, format!("unexpected character {c:?}")))
    }
}

fn is_line_terminator(c: char) -> bool {
    matches!(c, '\n' | '\r' | '\u{2028}' | '\u{2029}')
}

fn is_id_start(c: char) -> bool {
    c == '$' || c == '_' || c.is_alphabetic()
}

fn is_id_continue(c: char) -> bool {
    c == '$' || c == '_' || c == '\u{200c}' || c == '\u{200d}' || c.is_alphanumeric()
}

/// Decodes the value of a string literal token (quotes included in `raw`).
pub fn string_value(raw: &str) -> String {
    let inner = &raw[1..raw.len().saturating_sub(1).max(1)];
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('r') => out.push('\r'),
            Some('b') => out.push('\u{8}'),
            Some('f') => out.push('\u{c}'),
            Some('v') => out.push('\u{b}'),
            Some('0') => out.push('\0'),
            Some('x') => {
                let hex: String = chars.by_ref().take(2).collect();
                if let Some(ch) = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32) {
                    out.push(ch);
                }
            }
            Some('u') => {
                let hex: String = if chars.peek() == Some(&'{') {
                    chars.next();
                    chars.by_ref().take_while(|c| *c != '}').collect()
                } else {
                    chars.by_ref().take(4).collect()
                };
                if let Some(ch) = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32) {
                    out.push(ch);
                }
            }
            Some('\r') => {
                if chars.peek() == Some(&'\n') {
                    chars.next();
                }
            }
            Some('\n' | '\u{2028}' | '\u{2029}') => {}
            Some(other) => out.push(other),
            None => {}
        }
    }
    out
}
