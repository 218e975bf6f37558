//! ESTree-shaped syntax tree with byte-offset spans.

use super::Span;

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Var,
    Let,
    Const,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDeclarator {
    pub target: Pat,
    pub init: Option<Expr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDecl {
    pub kind: VarKind,
    pub decls: Vec<VarDeclarator>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ForInit {
    Var(VarDecl),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ForHead {
    Var(VarDecl),
    Pat(Pat),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatchClause {
    pub param: Option<Pat>,
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchCase {
    pub test: Option<Expr>,
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ImportedName {
    Default,
    Namespace,
    Named(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImportSpec {
    pub local: String,
    pub imported: ImportedName,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExportSpec {
    pub local: String,
    pub exported: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExportDecl {
    /// `export var|let|const|function|class ...`
    Decl(Box<Stmt>),
    /// `export default ...`; function and class declarations appear as expressions.
    Default(Expr),
    Named {
        specs: Vec<ExportSpec>,
        source: Option<String>,
    },
    All {
        alias: Option<String>,
        source: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Expr(Expr),
    Var(VarDecl),
    Function(Box<Function>),
    Class(Box<Class>),
    Return(Option<Expr>),
    If {
        test: Expr,
        cons: Box<Stmt>,
        alt: Option<Box<Stmt>>,
    },
    Block(Vec<Stmt>),
    For {
        init: Option<ForInit>,
        test: Option<Expr>,
        update: Option<Expr>,
        body: Box<Stmt>,
    },
    ForIn {
        left: ForHead,
        right: Expr,
        body: Box<Stmt>,
        of: bool,
    },
    While {
        test: Expr,
        body: Box<Stmt>,
    },
    DoWhile {
        body: Box<Stmt>,
        test: Expr,
    },
    Break(Option<String>),
    Continue(Option<String>),
    Throw(Expr),
    Try {
        block: Vec<Stmt>,
        handler: Option<CatchClause>,
        finalizer: Option<Vec<Stmt>>,
    },
    Switch {
        disc: Expr,
        cases: Vec<SwitchCase>,
    },
    Labeled {
        label: String,
        body: Box<Stmt>,
    },
    With {
        object: Expr,
        body: Box<Stmt>,
    },
    Import {
        specs: Vec<ImportSpec>,
        source: String,
    },
    Export(ExportDecl),
    Empty,
    Debugger,
}

impl StmtKind {
    pub fn name(&self) -> &'static str {
        match self {
            StmtKind::Expr(_) => "ExpressionStatement",
            StmtKind::Var(_) => "VariableDeclaration",
            StmtKind::Function(_) => "FunctionDeclaration",
            StmtKind::Class(_) => "ClassDeclaration",
            StmtKind::Return(_) => "ReturnStatement",
            StmtKind::If { .. } => "IfStatement",
            StmtKind::Block(_) => "BlockStatement",
            StmtKind::For { .. } => "ForStatement",
            StmtKind::ForIn { of: false, .. } => "ForInStatement",
            StmtKind::ForIn { of: true, .. } => "ForOfStatement",
            StmtKind::While { .. } => "WhileStatement",
            StmtKind::DoWhile { .. } => "DoWhileStatement",
            StmtKind::Break(_) => "BreakStatement",
            StmtKind::Continue(_) => "ContinueStatement",
            StmtKind::Throw(_) => "ThrowStatement",
            StmtKind::Try { .. } => "TryStatement",
            StmtKind::Switch { .. } => "SwitchStatement",
            StmtKind::Labeled { .. } => "LabeledStatement",
            StmtKind::With { .. } => "WithStatement",
            StmtKind::Import { .. } => "ImportDeclaration",
            StmtKind::Export(_) => "ExportDeclaration",
            StmtKind::Empty => "EmptyStatement",
            StmtKind::Debugger => "DebuggerStatement",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FnBody {
    Block(Vec<Stmt>),
    /// Concise arrow body.
    Expr(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Function {
    pub id: Option<String>,
    pub params: Vec<Pat>,
    pub body: FnBody,
    pub is_async: bool,
    pub is_generator: bool,
    pub is_arrow: bool,
    pub span: Span,
    pub body_span: Span,
}

impl Function {
    pub fn body_stmts(&self) -> &[Stmt] {
        match &self.body {
            FnBody::Block(stmts) => stmts,
            FnBody::Expr(_) => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Class {
    pub id: Option<String>,
    pub super_class: Option<Box<Expr>>,
    pub members: Vec<ClassMember>,
    pub span: Span,
}

impl Class {
    pub fn constructor(&self) -> Option<&Function> {
        self.members.iter().find_map(|m| match m {
            ClassMember::Method {
                kind: MethodKind::Constructor,
                func,
                ..
            } => Some(func),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodKind {
    Constructor,
    Method,
    Get,
    Set,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassMember {
    Method {
        key: PropKey,
        kind: MethodKind,
        is_static: bool,
        func: Function,
        span: Span,
    },
    Field {
        key: PropKey,
        value: Option<Expr>,
        is_static: bool,
        span: Span,
    },
    StaticBlock {
        body: Vec<Stmt>,
        span: Span,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum PropKey {
    Ident(String),
    Str(String),
    Num(String),
    Private(String),
    Computed(Box<Expr>),
}

impl PropKey {
    /// Static name of the key, if it has one.
    pub fn name(&self) -> Option<&str> {
        match self {
            PropKey::Ident(s) | PropKey::Str(s) | PropKey::Num(s) | PropKey::Private(s) => Some(s),
            PropKey::Computed(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prop {
    KeyValue {
        key: PropKey,
        value: Expr,
        span: Span,
    },
    Shorthand {
        name: String,
        /// Cover-grammar default (`{a = 1} = obj`), only valid as a pattern.
        default: Option<Expr>,
        span: Span,
    },
    Method {
        key: PropKey,
        kind: MethodKind,
        func: Function,
        span: Span,
    },
    Spread {
        arg: Expr,
        span: Span,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Lit {
    Num(String),
    Str(String),
    Bool(bool),
    Null,
    Regex(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MemberProp {
    Ident(String),
    Private(String),
    Computed(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Ident(String),
    This,
    Super,
    Lit(Lit),
    Template(Vec<Expr>),
    TaggedTemplate {
        tag: Box<Expr>,
        exprs: Vec<Expr>,
    },
    Array(Vec<Option<Expr>>),
    Object(Vec<Prop>),
    Function(Box<Function>),
    Arrow(Box<Function>),
    Class(Box<Class>),
    Unary {
        op: String,
        arg: Box<Expr>,
    },
    Update {
        op: String,
        prefix: bool,
        arg: Box<Expr>,
    },
    Binary {
        op: String,
        left: Box<Expr>,
        right: Box<Expr>,
    },
    Assign {
        op: String,
        target: Box<Pat>,
        value: Box<Expr>,
    },
    Cond {
        test: Box<Expr>,
        cons: Box<Expr>,
        alt: Box<Expr>,
    },
    Call {
        callee: Box<Expr>,
        args: Vec<Expr>,
        optional: bool,
    },
    New {
        callee: Box<Expr>,
        args: Vec<Expr>,
    },
    Member {
        object: Box<Expr>,
        prop: MemberProp,
        optional: bool,
    },
    Seq(Vec<Expr>),
    Spread(Box<Expr>),
    Yield {
        arg: Option<Box<Expr>>,
        delegate: bool,
    },
    Await(Box<Expr>),
    /// `new.target` or `import.meta`.
    MetaProp(String),
    /// The callee of a dynamic `import(...)`.
    Import,
}

impl Expr {
    /// Dotted name for identifier/`this`/static member chains, e.g. `a.b.c` or `this.x`.
    pub fn dotted_name(&self) -> Option<String> {
        match &self.kind {
            ExprKind::Ident(name) => Some(name.clone()),
            ExprKind::This => Some("this".to_string()),
            ExprKind::Member {
                object,
                prop: MemberProp::Ident(p),
                ..
            } => object.dotted_name().map(|base| format!("{base}.{p}")),
            ExprKind::Member {
                object,
                prop: MemberProp::Computed(key),
                ..
            } => match &key.kind {
                ExprKind::Lit(Lit::Str(p)) => object.dotted_name().map(|base| format!("{base}.{p}")),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn as_function(&self) -> Option<&Function> {
        match &self.kind {
            ExprKind::Function(f) | ExprKind::Arrow(f) => Some(f),
            _ => None,
        }
    }

    /// Module specifier of `require('x')`.
    pub fn require_source(&self) -> Option<&str> {
        match &self.kind {
            ExprKind::Call { callee, args, .. } if matches!(&callee.kind, ExprKind::Ident(n) if n == "require") => {
                match args.first().map(|a| &a.kind) {
                    Some(ExprKind::Lit(Lit::Str(s))) => Some(s),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// True when the expression is a `require(...)` call, possibly followed by member accesses or calls.
    pub fn is_require_chain(&self) -> bool {
        match &self.kind {
            ExprKind::Call { callee, .. } => {
                self.require_source().is_some()
                    || matches!(&callee.kind, ExprKind::Ident(n) if n == "require")
                    || callee.is_require_chain()
            }
            ExprKind::Member { object, .. } => object.is_require_chain(),
            ExprKind::Await(arg) => arg.is_require_chain(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pat {
    pub kind: PatKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatProp {
    KeyValue { key: PropKey, value: Pat },
    Rest(Pat),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatKind {
    Ident(String),
    /// Member-expression assignment target.
    Expr(Box<Expr>),
    Array(Vec<Option<Pat>>),
    Object(Vec<PatProp>),
    Assign { left: Box<Pat>, right: Box<Expr> },
    Rest(Box<Pat>),
}

impl Pat {
    /// Identifiers bound by the pattern, in source order.
    pub fn bound_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut Vec<String>) {
        match &self.kind {
            PatKind::Ident(n) => out.push(n.clone()),
            PatKind::Expr(_) => {}
            PatKind::Array(items) => {
                for p in items.iter().flatten() {
                    p.collect_names(out);
                }
            }
            PatKind::Object(props) => {
                for p in props {
                    match p {
                        PatProp::KeyValue { value, .. } => value.collect_names(out),
                        PatProp::Rest(p) => p.collect_names(out),
                    }
                }
            }
            PatKind::Assign { left, .. } => left.collect_names(out),
            PatKind::Rest(p) => p.collect_names(out),
        }
    }

    /// The simple identifier name, looking through a default value.
    pub fn simple_name(&self) -> Option<&str> {
        match &self.kind {
            PatKind::Ident(n) => Some(n),
            PatKind::Assign { left, .. } => left.simple_name(),
            PatKind::Rest(p) => p.simple_name(),
            _ => None,
        }
    }
}
