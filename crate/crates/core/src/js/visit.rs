//! Read-only traversal over the syntax tree.
//!
//! Override a `visit_*` method and call the matching `walk_*` function to
//! continue into children.

use super::ast::*;

pub trait Visit {
    fn visit_stmt(&mut self, s: &Stmt) {
        walk_stmt(self, s);
    }
    fn visit_expr(&mut self, e: &Expr) {
        walk_expr(self, e);
    }
    fn visit_pat(&mut self, p: &Pat) {
        walk_pat(self, p);
    }
    fn visit_function(&mut self, f: &Function) {
        walk_function(self, f);
    }
    fn visit_class(&mut self, c: &Class) {
        walk_class(self, c);
    }
}

pub fn walk_stmts<V: Visit + ?Sized>(v: &mut V, stmts: &[Stmt]) {
    for s in stmts {
        v.visit_stmt(s);
    }
}

fn walk_var_decl<V: Visit + ?Sized>(v: &mut V, d: &VarDecl) {
    for decl in &d.decls {
        v.visit_pat(&decl.target);
        if let Some(init) = &decl.init {
            v.visit_expr(init);
        }
    }
}

pub fn walk_stmt<V: Visit + ?Sized>(v: &mut V, s: &Stmt) {
    match &s.kind {
        StmtKind::Expr(e) | StmtKind::Throw(e) => v.visit_expr(e),
        StmtKind::Var(d) => walk_var_decl(v, d),
        StmtKind::Function(f) => v.visit_function(f),
        StmtKind::Class(c) => v.visit_class(c),
        StmtKind::Return(arg) => {
            if let Some(e) = arg {
                v.visit_expr(e);
            }
        }
        StmtKind::If { test, cons, alt } => {
            v.visit_expr(test);
            v.visit_stmt(cons);
            if let Some(alt) = alt {
                v.visit_stmt(alt);
            }
        }
        StmtKind::Block(body) => walk_stmts(v, body),
        StmtKind::For {
            init,
            test,
            update,
            body,
        } => {
            match init {
                Some(ForInit::Var(d)) => walk_var_decl(v, d),
                Some(ForInit::Expr(e)) => v.visit_expr(e),
                None => {}
            }
            if let Some(t) = test {
                v.visit_expr(t);
            }
            if let Some(u) = update {
                v.visit_expr(u);
            }
            v.visit_stmt(body);
        }
        StmtKind::ForIn { left, right, body, .. } => {
            match left {
                ForHead::Var(d) => walk_var_decl(v, d),
                ForHead::Pat(p) => v.visit_pat(p),
            }
            v.visit_expr(right);
            v.visit_stmt(body);
        }
        StmtKind::While { test, body } | StmtKind::DoWhile { body, test } => {
            v.visit_expr(test);
            v.visit_stmt(body);
        }
        StmtKind::Try {
            block,
            handler,
            finalizer,
        } => {
            walk_stmts(v, block);
            if let Some(h) = handler {
                if let Some(p) = &h.param {
                    v.visit_pat(p);
                }
                walk_stmts(v, &h.body);
            }
            if let Some(f) = finalizer {
                walk_stmts(v, f);
            }
        }
        StmtKind::Switch { disc, cases } => {
            v.visit_expr(disc);
            for c in cases {
                if let Some(t) = &c.test {
                    v.visit_expr(t);
                }
                walk_stmts(v, &c.body);
            }
        }
        StmtKind::Labeled { body, .. } => v.visit_stmt(body),
        StmtKind::With { object, body } => {
            v.visit_expr(object);
            v.visit_stmt(body);
        }
        StmtKind::Export(ExportDecl::Decl(inner)) => v.visit_stmt(inner),
        StmtKind::Export(ExportDecl::Default(e)) => v.visit_expr(e),
        StmtKind::Export(_) | StmtKind::Import { .. } => {}
        StmtKind::Break(_) | StmtKind::Continue(_) | StmtKind::Empty | StmtKind::Debugger => {}
    }
}

fn walk_prop_key<V: Visit + ?Sized>(v: &mut V, key: &PropKey) {
    if let PropKey::Computed(e) = key {
        v.visit_expr(e);
    }
}

pub fn walk_expr<V: Visit + ?Sized>(v: &mut V, e: &Expr) {
    match &e.kind {
        ExprKind::Ident(_)
        | ExprKind::This
        | ExprKind::Super
        | ExprKind::Lit(_)
        | ExprKind::MetaProp(_)
        | ExprKind::Import => {}
        ExprKind::Template(exprs) | ExprKind::Seq(exprs) => {
            for x in exprs {
                v.visit_expr(x);
            }
        }
        ExprKind::TaggedTemplate { tag, exprs } => {
            v.visit_expr(tag);
            for x in exprs {
                v.visit_expr(x);
            }
        }
        ExprKind::Array(items) => {
            for x in items.iter().flatten() {
                v.visit_expr(x);
            }
        }
        ExprKind::Object(props) => {
            for p in props {
                match p {
                    Prop::KeyValue { key, value, .. } => {
                        walk_prop_key(v, key);
                        v.visit_expr(value);
                    }
                    Prop::Shorthand { default, .. } => {
                        if let Some(d) = default {
                            v.visit_expr(d);
                        }
                    }
                    Prop::Method { key, func, .. } => {
                        walk_prop_key(v, key);
                        v.visit_function(func);
                    }
                    Prop::Spread { arg, .. } => v.visit_expr(arg),
                }
            }
        }
        ExprKind::Function(f) | ExprKind::Arrow(f) => v.visit_function(f),
        ExprKind::Class(c) => v.visit_class(c),
        ExprKind::Unary { arg, .. } | ExprKind::Update { arg, .. } | ExprKind::Spread(arg) | ExprKind::Await(arg) => {
            v.visit_expr(arg)
        }
        ExprKind::Binary { left, right, .. } => {
            v.visit_expr(left);
            v.visit_expr(right);
        }
        ExprKind::Assign { target, value, .. } => {
            v.visit_pat(target);
            v.visit_expr(value);
        }
        ExprKind::Cond { test, cons, alt } => {
            v.visit_expr(test);
            v.visit_expr(cons);
            v.visit_expr(alt);
        }
        ExprKind::Call { callee, args, .. } | ExprKind::New { callee, args } => {
            v.visit_expr(callee);
            for a in args {
                v.visit_expr(a);
            }
        }
        ExprKind::Member { object, prop, .. } => {
            v.visit_expr(object);
            if let MemberProp::Computed(k) = prop {
                v.visit_expr(k);
            }
        }
        ExprKind::Yield { arg, .. } => {
            if let Some(a) = arg {
                v.visit_expr(a);
            }
        }
    }
}

pub fn walk_pat<V: Visit + ?Sized>(v: &mut V, p: &Pat) {
    match &p.kind {
        PatKind::Ident(_) => {}
        PatKind::Expr(e) => v.visit_expr(e),
        PatKind::Array(items) => {
            for x in items.iter().flatten() {
                v.visit_pat(x);
            }
        }
        PatKind::Object(props) => {
            for prop in props {
                match prop {
                    PatProp::KeyValue { key, value } => {
                        walk_prop_key(v, key);
                        v.visit_pat(value);
                    }
                    PatProp::Rest(p) => v.visit_pat(p),
                }
            }
        }
        PatKind::Assign { left, right } => {
            v.visit_pat(left);
            v.visit_expr(right);
        }
        PatKind::Rest(inner) => v.visit_pat(inner),
    }
}

pub fn walk_function<V: Visit + ?Sized>(v: &mut V, f: &Function) {
    for p in &f.params {
        v.visit_pat(p);
    }
    match &f.body {
        FnBody::Block(stmts) => walk_stmts(v, stmts),
        FnBody::Expr(e) => v.visit_expr(e),
    }
}

pub fn walk_class<V: Visit + ?Sized>(v: &mut V, c: &Class) {
    if let Some(s) = &c.super_class {
        v.visit_expr(s);
    }
    for m in &c.members {
        match m {
            ClassMember::Method { key, func, .. } => {
                walk_prop_key(v, key);
                v.visit_function(func);
            }
            ClassMember::Field { key, value, .. } => {
                walk_prop_key(v, key);
                if let Some(x) = value {
                    v.visit_expr(x);
                }
            }
            ClassMember::StaticBlock { body, .. } => walk_stmts(v, body),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::js::parse_js;

    struct Idents(Vec<String>);

    impl Visit for Idents {
        fn visit_expr(&mut self, e: &Expr) {
            if let ExprKind::Ident(n) = &e.kind {
                self.0.push(n.clone());
            }
            walk_expr(self, e);
        }
    }

    #[test]
    fn visits_nested_identifiers_in_order() {
        let p = parse_js("function f(a) { return g(a, () => h); } class C { m() { k } }").unwrap();
        let mut v = Idents(Vec::new());
        walk_stmts(&mut v, &p.body);
        assert_eq!(v.0, ["g", "a", "h", "k"]);
    }
}
