//! Classifies top-level JavaScript program units into classes, functions,
//! variables and statement blocks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::js::ast::*;
use crate::js::lexer::{self, Token};
use crate::js::visit::{self, Visit};
use crate::js::{self as jsfront, ParseError, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Class,
    Function,
    Variable,
    Block,
}

impl EntityKind {
    pub fn letter(self) -> char {
        match self {
            EntityKind::Class => 'C',
            EntityKind::Function => 'F',
            EntityKind::Variable => 'V',
            EntityKind::Block => 'B',
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EntityKind::Class => "Class",
            EntityKind::Function => "Function",
            EntityKind::Variable => "Variable",
            EntityKind::Block => "Block",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DefinitionStyle {
    FunctionDeclaration,
    VariableDeclaredFunction,
    MethodDefinition,
    PrototypeFunction,
    ExportsFunction,
    NotApplicable,
}

impl DefinitionStyle {
    pub fn as_str(self) -> &'static str {
        match self {
            DefinitionStyle::FunctionDeclaration => "FunctionDeclaration",
            DefinitionStyle::VariableDeclaredFunction => "VariableDeclaredFunction",
            DefinitionStyle::MethodDefinition => "MethodDefinition",
            DefinitionStyle::PrototypeFunction => "PrototypeFunction",
            DefinitionStyle::ExportsFunction => "ExportsFunction",
            DefinitionStyle::NotApplicable => "NotApplicable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RefKind {
    Call,
    ReadWrite,
    ClassUse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    /// `None` is the Unknown token.
    pub type_token: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub kind: EntityKind,
    pub signature: String,
    pub module_path: String,
    /// Signature without the module prefix, e.g. `Benchmark.run`.
    pub local_name: String,
    /// Enclosing class for methods, constructor fields and prototype members.
    pub owner: Option<String>,
    pub char_range: Span,
    pub definition_style: DefinitionStyle,
    pub parameters: Vec<Param>,
    /// Functions: inferred return token (`void` when nothing is returned).
    /// Variables: inferred value kind.
    pub return_type: Option<String>,
    pub type_tokens: BTreeSet<String>,
    pub token_sequence: Vec<String>,
    pub statements: Vec<String>,
    pub referenced_names: BTreeSet<(String, RefKind)>,
}

/// Where an imported alias comes from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ImportBinding {
    /// The module specifier as written.
    pub source: String,
    /// Imported member, `None` for the module object itself.
    pub member: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EntitySet {
    pub module_path: String,
    pub entities: Vec<Entity>,
    /// Class/Function/Variable signature to index into `entities`.
    pub by_signature: BTreeMap<String, usize>,
    pub imports: BTreeMap<String, ImportBinding>,
}

impl EntitySet {
    pub fn get(&self, signature: &str) -> Option<&Entity> {
        self.by_signature.get(signature).map(|&i| &self.entities[i])
    }

    pub fn of_kind(&self, kind: EntityKind) -> impl Iterator<Item = &Entity> {
        self.entities.iter().filter(move |e| e.kind == kind)
    }

    /// Tab-separated dump sorted by start offset.
    pub fn dump(&self) -> String {
        let mut rows: Vec<&Entity> = self.entities.iter().collect();
        rows.sort_by(|a, b| {
            (a.char_range.start, a.char_range.end, &a.signature).cmp(&(b.char_range.start, b.char_range.end, &b.signature))
        });
        let mut out = String::new();
        for e in rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                e.kind,
                e.signature,
                e.char_range.start,
                e.char_range.end,
                e.definition_style.as_str()
            ));
        }
        out
    }
}

/// `lib/fs.js` becomes `lib.fs`.
pub fn module_path_of(path: &str) -> String {
    let trimmed = path.strip_suffix(".js").unwrap_or(path);
    trimmed.trim_start_matches("./").replace(['/', '\\'], ".")
}

/// The type tokens used by a function or variable body.
pub fn infer_type_tokens(entity: &Entity) -> &BTreeSet<String> {
    &entity.type_tokens
}

/// Parses `source` and extracts its entities.
pub fn extract_source(source: &str, module_path: &str) -> Result<EntitySet, ParseError> {
    jsfront::on_large_stack(|| {
        let program = jsfront::parser::parse_program(source)?;
        Ok(extract_entities(&program, module_path, source))
    })
}

pub fn extract_entities(program: &Program, module_path: &str, source: &str) -> EntitySet {
    let tokens = lexer::tokenize(source).map(|l| l.tokens).unwrap_or_default();
    let mut ex = Extractor {
        src: source,
        module: module_path.to_string(),
        tokens,
        imports: BTreeMap::new(),
        class_names: collect_class_uses(program),
        set: EntitySet {
            module_path: module_path.to_string(),
            ..EntitySet::default()
        },
        block_run: Vec::new(),
    };
    // imports first so that wrapper detection sees every alias
    for stmt in &program.body {
        ex.record_imports(stmt);
    }
    for stmt in &program.body {
        ex.top_level(stmt);
    }
    ex.flush_block();
    ex.set.imports = std::mem::take(&mut ex.imports);
    ex.set
}

// ---- helpers over the AST ----

struct ClassUses(BTreeSet<String>);

impl Visit for ClassUses {
    fn visit_expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Member {
                object,
                prop: MemberProp::Ident(p),
                ..
            } if p == "prototype" => {
                if let ExprKind::Ident(n) = &object.kind {
                    self.0.insert(n.clone());
                }
            }
            ExprKind::New { callee, .. } => {
                if let ExprKind::Ident(n) = &callee.kind {
                    self.0.insert(n.clone());
                }
            }
            _ => {}
        }
        visit::walk_expr(self, e);
    }
}

/// Names whose prototype is referenced or which are used with `new`.
fn collect_class_uses(program: &Program) -> BTreeSet<String> {
    let mut v = ClassUses(BTreeSet::new());
    visit::walk_stmts(&mut v, &program.body);
    v.0
}

fn last_segment(name: &str) -> &str {
    name.rsplit('.').next().unwrap_or(name)
}

/// Literal or constructed kind of an expression.
pub(crate) fn value_kind(e: &Expr) -> Option<String> {
    let s = match &e.kind {
        ExprKind::Lit(Lit::Num(_)) => "number",
        ExprKind::Lit(Lit::Str(_)) | ExprKind::Template(_) => "string",
        ExprKind::Lit(Lit::Bool(_)) => "boolean",
        ExprKind::Lit(Lit::Null) => "null",
        ExprKind::Lit(Lit::Regex(_)) => "regexp",
        ExprKind::Array(_) => "array",
        ExprKind::Object(_) => "object",
        ExprKind::Function(_) | ExprKind::Arrow(_) => "function",
        ExprKind::New { callee, .. } => {
            return callee.dotted_name().map(|n| last_segment(&n).to_string());
        }
        ExprKind::Unary { op, arg } => match op.as_str() {
            "!" | "delete" => "boolean",
            "typeof" => "string",
            "-" | "+" | "~" => "number",
            "void" => return None,
            _ => return value_kind(arg),
        },
        ExprKind::Binary { op, left, right } => match op.as_str() {
            "==" | "!=" | "===" | "!==" | "<" | ">" | "<=" | ">=" | "instanceof" | "in" => "boolean",
            "-" | "*" | "/" | "%" | "**" | "<<" | ">>" | ">>>" | "&" | "|" | "^" => "number",
            "+" => {
                let (l, r) = (value_kind(left), value_kind(right));
                if l.as_deref() == Some("string") || r.as_deref() == Some("string") {
                    "string"
                } else if l.as_deref() == Some("number") && r.as_deref() == Some("number") {
                    "number"
                } else {
                    return None;
                }
            }
            "||" | "??" => return value_kind(right).or_else(|| value_kind(left)),
            "&&" => return value_kind(right),
            _ => return None,
        },
        ExprKind::Cond { cons, alt, .. } => return value_kind(cons).or_else(|| value_kind(alt)),
        ExprKind::Seq(items) => return items.last().and_then(value_kind),
        ExprKind::Update { .. } => "number",
        _ => return None,
    };
    Some(s.to_string())
}

/// Names declared anywhere inside a subtree (flow-insensitive).
#[derive(Default)]
struct Declared(BTreeSet<String>);

impl Declared {
    fn add_decl(&mut self, d: &VarDecl) {
        for decl in &d.decls {
            self.0.extend(decl.target.bound_names());
        }
    }
}

impl Visit for Declared {
    fn visit_stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::Var(d) => self.add_decl(d),
            StmtKind::For {
                init: Some(ForInit::Var(d)),
                ..
            }
            | StmtKind::ForIn {
                left: ForHead::Var(d), ..
            } => self.add_decl(d),
            StmtKind::Try {
                handler: Some(CatchClause { param: Some(p), .. }),
                ..
            } => self.0.extend(p.bound_names()),
            StmtKind::Class(c) => {
                if let Some(id) = &c.id {
                    self.0.insert(id.clone());
                }
            }
            _ => {}
        }
        visit::walk_stmt(self, s);
    }

    fn visit_function(&mut self, f: &Function) {
        if let Some(id) = &f.id {
            self.0.insert(id.clone());
        }
        for p in &f.params {
            self.0.extend(p.bound_names());
        }
        visit::walk_function(self, f);
    }
}

struct Refs<'a> {
    locals: &'a BTreeSet<String>,
    out: BTreeSet<(String, RefKind)>,
}

impl Refs<'_> {
    fn add(&mut self, name: String, kind: RefKind) {
        let head = name.split('.').next().unwrap_or("");
        if head != "this" && self.locals.contains(head) {
            return;
        }
        self.out.insert((name, kind));
    }

    fn visit_computed_parts(&mut self, e: &Expr) {
        if let ExprKind::Member { object, prop, .. } = &e.kind {
            self.visit_computed_parts(object);
            if let MemberProp::Computed(k) = prop {
                self.visit_expr(k);
            }
        }
    }
}

impl Visit for Refs<'_> {
    fn visit_expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Ident(n) => self.add(n.clone(), RefKind::ReadWrite),
            ExprKind::This => {}
            ExprKind::Member { .. } => match e.dotted_name() {
                Some(n) => {
                    self.add(n, RefKind::ReadWrite);
                    self.visit_computed_parts(e);
                }
                None => visit::walk_expr(self, e),
            },
            ExprKind::Call { callee, args, .. } => {
                match callee.dotted_name() {
                    Some(n) => {
                        self.add(n, RefKind::Call);
                        self.visit_computed_parts(callee);
                    }
                    None => self.visit_expr(callee),
                }
                for a in args {
                    self.visit_expr(a);
                }
            }
            ExprKind::New { callee, args } => {
                match callee.dotted_name() {
                    Some(n) => self.add(n, RefKind::ClassUse),
                    None => self.visit_expr(callee),
                }
                for a in args {
                    self.visit_expr(a);
                }
            }
            ExprKind::TaggedTemplate { tag, exprs } => {
                match tag.dotted_name() {
                    Some(n) => self.add(n, RefKind::Call),
                    None => self.visit_expr(tag),
                }
                for x in exprs {
                    self.visit_expr(x);
                }
            }
            ExprKind::Object(props) => {
                for p in props {
                    if let Prop::Shorthand { name, .. } = p {
                        self.add(name.clone(), RefKind::ReadWrite);
                    }
                }
                visit::walk_expr(self, e);
            }
            _ => visit::walk_expr(self, e),
        }
    }

    fn visit_pat(&mut self, p: &Pat) {
        match &p.kind {
            PatKind::Ident(n) => self.add(n.clone(), RefKind::ReadWrite),
            _ => visit::walk_pat(self, p),
        }
    }

    fn visit_class(&mut self, c: &Class) {
        if let Some(s) = &c.super_class {
            if let Some(n) = s.dotted_name() {
                self.add(n, RefKind::ClassUse);
            }
        }
        for m in &c.members {
            match m {
                ClassMember::Method { func, .. } => self.visit_function(func),
                ClassMember::Field { value: Some(v), .. } => self.visit_expr(v),
                ClassMember::Field { .. } => {}
                ClassMember::StaticBlock { body, .. } => visit::walk_stmts(self, body),
            }
        }
    }
}

/// Literal kinds and constructed class names appearing in a subtree.
#[derive(Default)]
struct TypeUses(BTreeSet<String>);

impl Visit for TypeUses {
    fn visit_expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Lit(_)
            | ExprKind::Template(_)
            | ExprKind::Array(_)
            | ExprKind::Object(_)
            | ExprKind::Function(_)
            | ExprKind::Arrow(_) => {
                if let Some(k) = value_kind(e) {
                    self.0.insert(k);
                }
            }
            ExprKind::New { callee, .. } => {
                if let Some(n) = callee.dotted_name() {
                    self.0.insert(last_segment(&n).to_string());
                }
            }
            _ => {}
        }
        visit::walk_expr(self, e);
    }
}

/// Collects `return` arguments without entering nested functions.
#[derive(Default)]
struct Returns<'a> {
    values: Vec<&'a Expr>,
    bare: usize,
}

impl<'a> Returns<'a> {
    fn stmts(&mut self, stmts: &'a [Stmt]) {
        for s in stmts {
            self.stmt(s);
        }
    }

    fn stmt(&mut self, s: &'a Stmt) {
        match &s.kind {
            StmtKind::Return(Some(e)) => self.values.push(e),
            StmtKind::Return(None) => self.bare += 1,
            StmtKind::If { cons, alt, .. } => {
                self.stmt(cons);
                if let Some(a) = alt {
                    self.stmt(a);
                }
            }
            StmtKind::Block(b) => self.stmts(b),
            StmtKind::For { body, .. }
            | StmtKind::ForIn { body, .. }
            | StmtKind::While { body, .. }
            | StmtKind::DoWhile { body, .. }
            | StmtKind::Labeled { body, .. }
            | StmtKind::With { body, .. } => self.stmt(body),
            StmtKind::Try {
                block,
                handler,
                finalizer,
            } => {
                self.stmts(block);
                if let Some(h) = handler {
                    self.stmts(&h.body);
                }
                if let Some(f) = finalizer {
                    self.stmts(f);
                }
            }
            StmtKind::Switch { cases, .. } => {
                for c in cases {
                    self.stmts(&c.body);
                }
            }
            _ => {}
        }
    }
}

/// Assignments `p = <expr>` to a given name anywhere in a function body.
struct AssignsTo<'a> {
    name: &'a str,
    found: Option<String>,
}

impl Visit for AssignsTo<'_> {
    fn visit_expr(&mut self, e: &Expr) {
        if self.found.is_some() {
            return;
        }
        if let ExprKind::Assign { op, target, value } = &e.kind {
            if matches!(op.as_str(), "=" | "||=" | "??=") && target.simple_name() == Some(self.name) {
                let inferred = match &value.kind {
                    ExprKind::Binary { op, left, right }
                        if matches!(op.as_str(), "||" | "??")
                            && matches!(&left.kind, ExprKind::Ident(n) if n == self.name) =>
                    {
                        value_kind(right)
                    }
                    _ => value_kind(value),
                };
                if inferred.is_some() {
                    self.found = inferred;
                    return;
                }
            }
        }
        visit::walk_expr(self, e);
    }
}

fn param_type(p: &Pat, body: &Function) -> Option<String> {
    match &p.kind {
        PatKind::Assign { left, right } => value_kind(right).or_else(|| param_type(left, body)),
        PatKind::Object(_) => Some("object".to_string()),
        PatKind::Array(_) | PatKind::Rest(_) => Some("array".to_string()),
        PatKind::Ident(n) => {
            let mut v = AssignsTo { name: n, found: None };
            match &body.body {
                FnBody::Block(stmts) => visit::walk_stmts(&mut v, stmts),
                FnBody::Expr(e) => v.visit_expr(e),
            }
            v.found
        }
        PatKind::Expr(_) => None,
    }
}

fn function_params(f: &Function) -> Vec<Param> {
    f.params
        .iter()
        .map(|p| Param {
            name: p.simple_name().map_or_else(|| "_".to_string(), str::to_string),
            type_token: param_type(p, f),
        })
        .collect()
}

fn infer_return_type(f: &Function, params: &[Param]) -> Option<String> {
    let mut r = Returns::default();
    let exprs: Vec<&Expr> = match &f.body {
        FnBody::Expr(e) => vec![e],
        FnBody::Block(stmts) => {
            r.stmts(stmts);
            if r.values.is_empty() {
                return Some("void".to_string());
            }
            r.values.clone()
        }
    };
    let local_fns: BTreeSet<&str> = f
        .body_stmts()
        .iter()
        .filter_map(|s| match &s.kind {
            StmtKind::Function(g) => g.id.as_deref(),
            _ => None,
        })
        .collect();
    exprs.iter().find_map(|e| {
        value_kind(e).or_else(|| match &e.kind {
            ExprKind::Ident(n) if local_fns.contains(n.as_str()) => Some("function".to_string()),
            ExprKind::Ident(n) => params.iter().find(|p| &p.name == n).and_then(|p| p.type_token.clone()),
            _ => None,
        })
    })
}

fn normalize(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

// ---- extraction ----

/// What an entity's attributes are computed from.
enum Body<'a> {
    Function { func: &'a Function, outer: Option<&'a Expr> },
    Value(Option<&'a Expr>),
    Class(&'a Class),
    Stmts(Vec<&'a Stmt>),
}

struct Draft<'a> {
    kind: EntityKind,
    local_name: String,
    owner: Option<String>,
    range: Span,
    style: DefinitionStyle,
    body: Body<'a>,
}

enum TopLevel {
    Neutral,
    Qualifying,
}

struct Extractor<'s, 'a> {
    src: &'s str,
    module: String,
    tokens: Vec<Token>,
    imports: BTreeMap<String, ImportBinding>,
    class_names: BTreeSet<String>,
    set: EntitySet,
    block_run: Vec<&'a Stmt>,
}

/// Strips `module.exports.`/`exports.` and splits `X.prototype.y`.
/// Returns (owner, local name, style hint).
fn assignment_name(dotted: &str) -> (Option<String>, String, DefinitionStyle) {
    if dotted == "module.exports" || dotted == "exports" {
        return (None, "exports".to_string(), DefinitionStyle::ExportsFunction);
    }
    for prefix in ["module.exports.", "exports."] {
        if let Some(rest) = dotted.strip_prefix(prefix) {
            return (None, rest.to_string(), DefinitionStyle::ExportsFunction);
        }
    }
    if let Some(rest) = dotted.strip_prefix("this.") {
        return (None, rest.to_string(), DefinitionStyle::VariableDeclaredFunction);
    }
    if let Some((owner, member)) = dotted.split_once(".prototype.") {
        return (
            Some(owner.to_string()),
            format!("{owner}.{member}"),
            DefinitionStyle::PrototypeFunction,
        );
    }
    (None, dotted.to_string(), DefinitionStyle::VariableDeclaredFunction)
}

impl<'s, 'a> Extractor<'s, 'a> {
    fn slice(&self, span: Span) -> &'s str {
        &self.src[span.start..span.end.min(self.src.len())]
    }

    fn record_import(&mut self, local: String, source: &str, member: Option<String>) {
        self.imports.entry(local).or_insert(ImportBinding {
            source: source.to_string(),
            member,
        });
    }

    /// `require('m')`, `require('m').x`, `require('m')(...)`: the specifier and member.
    fn require_of(e: &Expr) -> Option<(&str, Option<String>)> {
        if let Some(src) = e.require_source() {
            return Some((src, None));
        }
        match &e.kind {
            ExprKind::Member {
                object,
                prop: MemberProp::Ident(p),
                ..
            } => object.require_source().map(|s| (s, Some(p.clone()))),
            ExprKind::Call { callee, .. } => callee.require_source().map(|s| (s, None)),
            ExprKind::Await(inner) => Self::require_of(inner),
            _ => None,
        }
    }

    fn record_imports(&mut self, stmt: &Stmt) {
        match &stmt.kind {
            StmtKind::Import { specs, source } => {
                for s in specs {
                    let member = match &s.imported {
                        ImportedName::Named(n) => Some(n.clone()),
                        _ => None,
                    };
                    self.record_import(s.local.clone(), source, member);
                }
            }
            StmtKind::Var(d) => {
                for decl in &d.decls {
                    let Some((source, member)) = decl.init.as_ref().and_then(Self::require_of) else {
                        continue;
                    };
                    match &decl.target.kind {
                        PatKind::Ident(n) => self.record_import(n.clone(), source, member.clone()),
                        PatKind::Object(props) => {
                            for p in props {
                                if let PatProp::KeyValue { key, value } = p {
                                    if let (Some(k), Some(local)) = (key.name(), value.simple_name()) {
                                        self.record_import(local.to_string(), source, Some(k.to_string()));
                                    }
                                }
                            }
                        }
                        _ => {}
                    }
                }
            }
            StmtKind::Export(ExportDecl::Decl(inner)) => self.record_imports(inner),
            _ => {}
        }
    }

    fn is_import_bound(&self, callee: &Expr) -> bool {
        callee
            .dotted_name()
            .is_some_and(|n| self.imports.contains_key(n.split('.').next().unwrap_or("")))
    }

    /// The function produced by a right-hand side: a function expression, or a
    /// call to an imported wrapper taking a function expression.
    fn function_rhs(&self, e: &'a Expr) -> Option<(&'a Function, Option<&'a Expr>)> {
        if let Some(f) = e.as_function() {
            return Some((f, None));
        }
        if let ExprKind::Call { callee, args, .. } = &e.kind {
            if self.is_import_bound(callee) {
                return args.iter().find_map(Expr::as_function).map(|f| (f, Some(e)));
            }
        }
        None
    }

    fn top_level(&mut self, stmt: &'a Stmt) {
        let outcome = self.classify(stmt, stmt);
        match outcome {
            Ok(drafts) => {
                let mut added = false;
                for d in drafts {
                    added |= self.push(d);
                }
                if added {
                    self.flush_block();
                } else {
                    self.block_run.push(stmt);
                }
            }
            Err(TopLevel::Neutral) => self.flush_block(),
            Err(TopLevel::Qualifying) => self.block_run.push(stmt),
        }
    }

    /// Entity drafts for a top-level statement, or why it defines none.
    fn classify(&self, stmt: &'a Stmt, outer: &'a Stmt) -> Result<Vec<Draft<'a>>, TopLevel> {
        match &stmt.kind {
            StmtKind::Import { .. } | StmtKind::Empty => Err(TopLevel::Neutral),
            StmtKind::Export(ExportDecl::Decl(inner)) => self.classify(inner, outer),
            StmtKind::Export(ExportDecl::Default(e)) => Ok(self.export_default(e, outer.span)),
            StmtKind::Export(_) => Err(TopLevel::Neutral),
            StmtKind::Function(f) => {
                let name = f.id.clone().unwrap_or_default();
                Ok(self.function_or_class(name, f, None, outer.span, DefinitionStyle::FunctionDeclaration))
            }
            StmtKind::Class(c) => Ok(self.class_drafts(c.id.clone().unwrap_or_default(), c, outer.span)),
            StmtKind::Var(d) => self.var_drafts(d, outer.span),
            StmtKind::Expr(e) => match &e.kind {
                ExprKind::Lit(Lit::Str(_)) => Err(TopLevel::Neutral),
                _ if e.is_require_chain() => Err(TopLevel::Neutral),
                ExprKind::Assign { op, target, value } if op == "=" => self.assignment_drafts(target, value, outer.span),
                _ => Err(TopLevel::Qualifying),
            },
            _ => Err(TopLevel::Qualifying),
        }
    }

    fn export_default(&self, e: &'a Expr, range: Span) -> Vec<Draft<'a>> {
        match &e.kind {
            ExprKind::Function(f) | ExprKind::Arrow(f) => {
                let name = f.id.clone().unwrap_or_else(|| "default".to_string());
                self.function_or_class(name, f, None, range, DefinitionStyle::ExportsFunction)
            }
            ExprKind::Class(c) => self.class_drafts(c.id.clone().unwrap_or_else(|| "default".to_string()), c, range),
            _ => vec![Draft {
                kind: EntityKind::Variable,
                local_name: "default".to_string(),
                owner: None,
                range,
                style: DefinitionStyle::NotApplicable,
                body: Body::Value(Some(e)),
            }],
        }
    }

    fn var_drafts(&self, d: &'a VarDecl, stmt_span: Span) -> Result<Vec<Draft<'a>>, TopLevel> {
        let single = d.decls.len() == 1;
        let mut drafts = Vec::new();
        let mut all_required = true;
        for decl in &d.decls {
            let range = if single { stmt_span } else { decl.span };
            if let Some(init) = &decl.init {
                if init.is_require_chain() {
                    continue;
                }
            }
            all_required = false;
            let simple = decl.target.simple_name().filter(|_| matches!(decl.target.kind, PatKind::Ident(_)));
            match (simple, decl.init.as_ref()) {
                (Some(name), Some(init)) => {
                    if let ExprKind::Class(c) = &init.kind {
                        drafts.extend(self.class_drafts(name.to_string(), c, range));
                    } else if let Some((f, wrapper)) = self.function_rhs(init) {
                        drafts.extend(self.function_or_class(
                            name.to_string(),
                            f,
                            wrapper,
                            range,
                            DefinitionStyle::VariableDeclaredFunction,
                        ));
                    } else {
                        drafts.push(self.variable(name.to_string(), None, range, Some(init)));
                    }
                }
                _ => {
                    for name in decl.target.bound_names() {
                        drafts.push(self.variable(name, None, range, decl.init.as_ref()));
                    }
                }
            }
        }
        if all_required {
            Err(TopLevel::Neutral)
        } else {
            Ok(drafts)
        }
    }

    fn assignment_drafts(&self, target: &'a Pat, value: &'a Expr, range: Span) -> Result<Vec<Draft<'a>>, TopLevel> {
        if value.is_require_chain() {
            return Err(TopLevel::Neutral);
        }
        let dotted = match &target.kind {
            PatKind::Ident(n) => n.clone(),
            PatKind::Expr(e) => e.dotted_name().ok_or(TopLevel::Qualifying)?,
            _ => return Err(TopLevel::Qualifying),
        };
        // X.prototype = { ... }
        if let Some(owner) = dotted.strip_suffix(".prototype") {
            if let ExprKind::Object(props) = &value.kind {
                return Ok(self.object_members(props, Some(owner), DefinitionStyle::PrototypeFunction));
            }
        }
        let (owner, name, style) = assignment_name(&dotted);
        if name == "exports" {
            if let ExprKind::Object(props) = &value.kind {
                let members = self.object_members(props, None, DefinitionStyle::ExportsFunction);
                if members.iter().any(|d| d.kind == EntityKind::Function) {
                    return Ok(members);
                }
            }
        }
        if let ExprKind::Class(c) = &value.kind {
            return Ok(self.class_drafts(name, c, range));
        }
        if let Some((f, wrapper)) = self.function_rhs(value) {
            if owner.is_none() && !name.contains('.') && style == DefinitionStyle::VariableDeclaredFunction {
                return Ok(self.function_or_class(name, f, wrapper, range, style));
            }
            return Ok(vec![self.function(name, owner, f, wrapper, range, style)]);
        }
        Ok(vec![self.variable(name, owner, range, Some(value))])
    }

    /// Members of `module.exports = {...}` or `X.prototype = {...}`.
    fn object_members(&self, props: &'a [Prop], owner: Option<&str>, style: DefinitionStyle) -> Vec<Draft<'a>> {
        let qualify = |k: &str| match owner {
            Some(o) => format!("{o}.{k}"),
            None => k.to_string(),
        };
        let mut out = Vec::new();
        for p in props {
            match p {
                Prop::KeyValue { key, value, span } => {
                    let Some(k) = key.name() else { continue };
                    if let Some((f, wrapper)) = self.function_rhs(value) {
                        out.push(self.function(qualify(k), owner.map(str::to_string), f, wrapper, *span, style));
                    } else if !matches!(value.kind, ExprKind::Ident(_)) {
                        out.push(self.variable(qualify(k), owner.map(str::to_string), *span, Some(value)));
                    }
                }
                Prop::Method { key, func, span, .. } => {
                    if let Some(k) = key.name() {
                        out.push(self.function(qualify(k), owner.map(str::to_string), func, None, *span, style));
                    }
                }
                Prop::Shorthand { .. } | Prop::Spread { .. } => {}
            }
        }
        out
    }

    fn variable(&self, name: String, owner: Option<String>, range: Span, init: Option<&'a Expr>) -> Draft<'a> {
        Draft {
            kind: EntityKind::Variable,
            local_name: name,
            owner,
            range,
            style: DefinitionStyle::NotApplicable,
            body: Body::Value(init),
        }
    }

    fn function(
        &self,
        name: String,
        owner: Option<String>,
        func: &'a Function,
        outer: Option<&'a Expr>,
        range: Span,
        style: DefinitionStyle,
    ) -> Draft<'a> {
        Draft {
            kind: EntityKind::Function,
            local_name: name,
            owner,
            range,
            style,
            body: Body::Function { func, outer },
        }
    }

    /// A function definition, reclassified as a class when it is used as one.
    fn function_or_class(
        &self,
        name: String,
        func: &'a Function,
        outer: Option<&'a Expr>,
        range: Span,
        style: DefinitionStyle,
    ) -> Vec<Draft<'a>> {
        if !self.class_names.contains(&name) {
            return vec![self.function(name, None, func, outer, range, style)];
        }
        let mut out = vec![Draft {
            kind: EntityKind::Class,
            local_name: name.clone(),
            owner: None,
            range,
            style: DefinitionStyle::NotApplicable,
            body: Body::Function { func, outer },
        }];
        out.push(self.function(
            format!("{name}.constructor"),
            Some(name.clone()),
            func,
            None,
            func.body_span,
            style,
        ));
        out.extend(self.constructor_fields(&name, func));
        out
    }

    fn constructor_fields(&self, class: &str, ctor: &'a Function) -> Vec<Draft<'a>> {
        let mut out = Vec::new();
        for s in ctor.body_stmts() {
            let StmtKind::Expr(Expr {
                kind: ExprKind::Assign { op, target, value },
                ..
            }) = &s.kind
            else {
                continue;
            };
            if op != "=" {
                continue;
            }
            let PatKind::Expr(t) = &target.kind else { continue };
            let ExprKind::Member {
                object,
                prop: MemberProp::Ident(field),
                ..
            } = &t.kind
            else {
                continue;
            };
            let is_self = match &object.kind {
                ExprKind::This => true,
                ExprKind::Ident(n) => n == "self",
                _ => false,
            };
            if !is_self {
                continue;
            }
            let name = format!("{class}.{field}");
            if let Some((f, wrapper)) = self.function_rhs(value) {
                out.push(self.function(
                    name,
                    Some(class.to_string()),
                    f,
                    wrapper,
                    s.span,
                    DefinitionStyle::VariableDeclaredFunction,
                ));
            } else {
                out.push(self.variable(name, Some(class.to_string()), s.span, Some(value)));
            }
        }
        out
    }

    fn class_drafts(&self, name: String, class: &'a Class, range: Span) -> Vec<Draft<'a>> {
        let mut out = vec![Draft {
            kind: EntityKind::Class,
            local_name: name.clone(),
            owner: None,
            range,
            style: DefinitionStyle::NotApplicable,
            body: Body::Class(class),
        }];
        for m in &class.members {
            match m {
                ClassMember::Method { key, kind, func, span, .. } => {
                    let Some(k) = key.name() else { continue };
                    let k = if matches!(key, PropKey::Private(_)) { format!("#{k}") } else { k.to_string() };
                    out.push(self.function(
                        format!("{name}.{k}"),
                        Some(name.clone()),
                        func,
                        None,
                        *span,
                        DefinitionStyle::MethodDefinition,
                    ));
                    if *kind == MethodKind::Constructor {
                        out.extend(self.constructor_fields(&name, func));
                    }
                }
                ClassMember::Field { key, value, span, .. } => {
                    let Some(k) = key.name() else { continue };
                    let k = if matches!(key, PropKey::Private(_)) { format!("#{k}") } else { k.to_string() };
                    let local = format!("{name}.{k}");
                    match value.as_ref().and_then(|v| self.function_rhs(v)) {
                        Some((f, wrapper)) => out.push(self.function(
                            local,
                            Some(name.clone()),
                            f,
                            wrapper,
                            *span,
                            DefinitionStyle::MethodDefinition,
                        )),
                        None => out.push(self.variable(local, Some(name.clone()), *span, value.as_ref())),
                    }
                }
                ClassMember::StaticBlock { .. } => {}
            }
        }
        out
    }

    fn flush_block(&mut self) {
        if self.block_run.is_empty() {
            return;
        }
        let stmts = std::mem::take(&mut self.block_run);
        let range = Span::new(stmts[0].span.start, stmts[stmts.len() - 1].span.end);
        let draft = Draft {
            kind: EntityKind::Block,
            local_name: range.start.to_string(),
            owner: None,
            range,
            style: DefinitionStyle::NotApplicable,
            body: Body::Stmts(stmts),
        };
        self.push(draft);
    }

    /// Builds and stores an entity; returns false for a duplicate signature.
    fn push(&mut self, d: Draft<'a>) -> bool {
        let signature = format!("{}.{}", self.module, d.local_name);
        if d.kind != EntityKind::Block && self.set.by_signature.contains_key(&signature) {
            return false;
        }
        if d.range.is_empty() {
            return false;
        }
        let entity = self.build(d, signature);
        if entity.kind != EntityKind::Block {
            self.set.by_signature.insert(entity.signature.clone(), self.set.entities.len());
        }
        self.set.entities.push(entity);
        true
    }

    fn tokens_in(&self, range: Span) -> Vec<String> {
        let first = self.tokens.partition_point(|t| t.span.start < range.start);
        self.tokens[first..]
            .iter()
            .take_while(|t| t.span.end <= range.end)
            .map(|t| t.text(self.src).to_string())
            .collect()
    }

    fn render_stmts(&self, stmts: &[Stmt], out: &mut Vec<String>) {
        for s in stmts {
            self.render_stmt(s, out);
        }
    }

    fn header(&self, s: &Stmt, child_start: usize, out: &mut Vec<String>) {
        let text = normalize(self.slice(Span::new(s.span.start, child_start.max(s.span.start))));
        if !text.is_empty() {
            out.push(text);
        }
    }

    fn render_stmt(&self, s: &Stmt, out: &mut Vec<String>) {
        match &s.kind {
            StmtKind::Block(body) => self.render_stmts(body, out),
            StmtKind::If { cons, alt, .. } => {
                self.header(s, cons.span.start, out);
                self.render_stmt(cons, out);
                if let Some(a) = alt {
                    out.push("else".to_string());
                    self.render_stmt(a, out);
                }
            }
            StmtKind::For { body, .. }
            | StmtKind::ForIn { body, .. }
            | StmtKind::While { body, .. }
            | StmtKind::Labeled { body, .. }
            | StmtKind::With { body, .. } => {
                self.header(s, body.span.start, out);
                self.render_stmt(body, out);
            }
            StmtKind::DoWhile { body, .. } => {
                self.header(s, body.span.start, out);
                self.render_stmt(body, out);
                let tail = normalize(self.slice(Span::new(body.span.end, s.span.end)));
                if !tail.is_empty() {
                    out.push(tail);
                }
            }
            StmtKind::Try {
                block,
                handler,
                finalizer,
            } => {
                out.push("try".to_string());
                self.render_stmts(block, out);
                if let Some(h) = handler {
                    let end = h.body.first().map_or(h.span.end, |b| b.span.start);
                    let text = normalize(self.slice(Span::new(h.span.start, end)));
                    out.push(text.trim_end_matches(['{', '}', ' ']).to_string());
                    self.render_stmts(&h.body, out);
                }
                if let Some(f) = finalizer {
                    out.push("finally".to_string());
                    self.render_stmts(f, out);
                }
            }
            StmtKind::Switch { cases, .. } => {
                let end = cases.first().map_or(s.span.end, |c| c.span.start);
                self.header(s, end, out);
                for c in cases {
                    let end = c.body.first().map_or(c.span.end, |b| b.span.start);
                    let text = normalize(self.slice(Span::new(c.span.start, end)));
                    if !text.is_empty() {
                        out.push(text);
                    }
                    self.render_stmts(&c.body, out);
                }
            }
            _ => {
                let text = normalize(self.slice(s.span));
                if !text.is_empty() {
                    out.push(text);
                }
            }
        }
    }

    fn build(&self, d: Draft<'a>, signature: String) -> Entity {
        let token_sequence = self.tokens_in(d.range);
        let mut declared = Declared::default();
        let mut types = TypeUses::default();
        let mut statements = Vec::new();
        let mut parameters = Vec::new();
        let mut return_type = None;
        match &d.body {
            Body::Function { func, outer } => {
                declared.visit_function(func);
                match outer {
                    Some(o) => visit::walk_expr(&mut types, o),
                    None => visit::walk_function(&mut types, func),
                }
                match &func.body {
                    FnBody::Block(stmts) => self.render_stmts(stmts, &mut statements),
                    FnBody::Expr(e) => statements.push(normalize(self.slice(e.span))),
                }
                if d.kind == EntityKind::Function {
                    parameters = function_params(func);
                    return_type = infer_return_type(func, &parameters);
                }
            }
            Body::Value(init) => {
                if let Some(e) = init {
                    declared.visit_expr(e);
                    types.visit_expr(e);
                    return_type = value_kind(e);
                }
                statements.push(normalize(self.slice(d.range)));
            }
            Body::Class(c) => {
                declared.visit_class(c);
                visit::walk_class(&mut types, c);
                for m in &c.members {
                    let span = match m {
                        ClassMember::Method { span, .. }
                        | ClassMember::Field { span, .. }
                        | ClassMember::StaticBlock { span, .. } => *span,
                    };
                    statements.push(normalize(self.slice(span)));
                }
            }
            Body::Stmts(stmts) => {
                for s in stmts {
                    declared.visit_stmt(s);
                    types.visit_stmt(s);
                    self.render_stmt(s, &mut statements);
                }
            }
        }
        let mut refs = Refs {
            locals: &declared.0,
            out: BTreeSet::new(),
        };
        match &d.body {
            Body::Function { func, outer } => match outer {
                Some(o) => refs.visit_expr(o),
                None => visit::walk_function(&mut refs, func),
            },
            Body::Value(Some(e)) => refs.visit_expr(e),
            Body::Value(None) => {}
            Body::Class(c) => refs.visit_class(c),
            Body::Stmts(stmts) => {
                for s in stmts {
                    refs.visit_stmt(s);
                }
            }
        }
        let referenced_names = refs.out;
        let mut type_tokens = types.0;
        for (name, _) in &referenced_names {
            let head = name.split('.').next().unwrap_or("");
            if self.imports.contains_key(head) {
                type_tokens.insert(head.to_string());
            }
        }
        Entity {
            kind: d.kind,
            signature,
            module_path: self.module.clone(),
            local_name: d.local_name,
            owner: d.owner,
            char_range: d.range,
            definition_style: if d.kind == EntityKind::Function {
                d.style
            } else {
                DefinitionStyle::NotApplicable
            },
            parameters,
            return_type,
            type_tokens,
            token_sequence,
            statements,
            referenced_names,
        }
    }
}
