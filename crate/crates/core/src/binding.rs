//! Heuristic name resolution across the files edited by one commit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::entity::{module_path_of, Entity, EntityKind, EntitySet, RefKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeLabel {
    /// Function or class access.
    F,
    /// Variable access.
    V,
    Containment,
}

impl EdgeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::F => "f",
            EdgeLabel::V => "v",
            EdgeLabel::Containment => "containment",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "f" => Some(EdgeLabel::F),
            "v" => Some(EdgeLabel::V),
            "containment" => Some(EdgeLabel::Containment),
            _ => None,
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An import alias resolved to a module path of the project.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportTarget {
    pub module_path: String,
    pub member: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct ProjectIndex {
    /// (module path, local name) to (signature, kind).
    pub definitions: BTreeMap<(String, String), (String, EntityKind)>,
    /// Per module: alias to imported module.
    pub imports: BTreeMap<String, BTreeMap<String, ImportTarget>>,
}

/// Joins a relative specifier onto the importing module's directory.
/// Non-relative specifiers (packages) map to their own dotted form.
pub fn resolve_specifier(importer: &str, spec: &str) -> String {
    if !(spec.starts_with("./") || spec.starts_with("../")) {
        return module_path_of(spec);
    }
    let mut parts: Vec<&str> = importer.split('.').collect();
    parts.pop();
    for seg in spec.split('/') {
        match seg {
            "." | "" => {}
            ".." => {
                parts.pop();
            }
            s => parts.push(s),
        }
    }
    module_path_of(&parts.join("/"))
}

impl ProjectIndex {
    pub fn build<'a>(sets: impl IntoIterator<Item = &'a EntitySet>) -> Self {
        let mut index = ProjectIndex::default();
        let sets: Vec<&EntitySet> = sets.into_iter().collect();
        let modules: BTreeSet<&str> = sets.iter().map(|s| s.module_path.as_str()).collect();
        for set in &sets {
            for e in &set.entities {
                if e.kind == EntityKind::Block {
                    continue;
                }
                index
                    .definitions
                    .entry((e.module_path.clone(), e.local_name.clone()))
                    .or_insert_with(|| (e.signature.clone(), e.kind));
            }
            let table = index.imports.entry(set.module_path.clone()).or_default();
            for (alias, binding) in &set.imports {
                let mut target = resolve_specifier(&set.module_path, &binding.source);
                if !modules.contains(target.as_str()) {
                    let with_index = format!("{target}.index");
                    if modules.contains(with_index.as_str()) {
                        target = with_index;
                    }
                }
                table.entry(alias.clone()).or_insert(ImportTarget {
                    module_path: target,
                    member: binding.member.clone(),
                });
            }
        }
        index
    }

    fn lookup(&self, module: &str, local: &str) -> Option<&(String, EntityKind)> {
        self.definitions.get(&(module.to_string(), local.to_string()))
    }

    /// Longest defined prefix of the dotted `segments` in `module`.
    fn lookup_prefix(&self, module: &str, segments: &[&str]) -> Option<(&(String, EntityKind), bool)> {
        (1..=segments.len()).rev().find_map(|n| {
            self.lookup(module, &segments[..n].join("."))
                .map(|d| (d, n == segments.len()))
        })
    }

    /// Resolves one referenced name used inside `entity`.
    pub fn resolve_name(&self, entity: &Entity, name: &str) -> Option<(String, EntityKind, bool)> {
        let module = entity.module_path.as_str();
        let mut segments: Vec<&str> = name.split('.').collect();
        if segments[0] == "this" {
            match &entity.owner {
                Some(owner) => {
                    segments[0] = owner;
                }
                None => {
                    segments.remove(0);
                }
            }
        }
        if let Some(p) = segments.iter().position(|s| *s == "prototype") {
            segments.remove(p);
        }
        if segments.is_empty() {
            return None;
        }
        if let Some(((sig, kind), whole)) = self.lookup_prefix(module, &segments) {
            return Some((sig.clone(), *kind, whole));
        }
        let target = self.imports.get(module)?.get(segments[0])?;
        let mut rest: Vec<&str> = Vec::new();
        if let Some(m) = &target.member {
            rest.push(m);
        }
        rest.extend_from_slice(&segments[1..]);
        if rest.is_empty() {
            for whole in ["exports", "default"] {
                if let Some((sig, kind)) = self.lookup(&target.module_path, whole) {
                    return Some((sig.clone(), *kind, true));
                }
            }
            return None;
        }
        self.lookup_prefix(&target.module_path, &rest)
            .map(|((sig, kind), whole)| (sig.clone(), *kind, whole))
    }

    /// Resolved dependencies of `entity` with their access labels.
    pub fn resolve_references(&self, entity: &Entity) -> BTreeSet<(String, EdgeLabel)> {
        let mut out = BTreeSet::new();
        for (name, ref_kind) in &entity.referenced_names {
            let Some((sig, kind, _)) = self.resolve_name(entity, name) else {
                continue;
            };
            let (sig, label) = match kind {
                EntityKind::Variable => (sig, EdgeLabel::V),
                EntityKind::Function | EntityKind::Block => (sig, EdgeLabel::F),
                EntityKind::Class => {
                    let ctor = format!("{sig}.constructor");
                    let has_ctor = self.definitions.values().any(|(s, _)| *s == ctor);
                    if *ref_kind != RefKind::ReadWrite && has_ctor {
                        (ctor, EdgeLabel::F)
                    } else {
                        (sig, EdgeLabel::F)
                    }
                }
            };
            if sig != entity.signature {
                out.insert((sig, label));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entity::extract_source;

    fn set(src: &str, path: &str) -> EntitySet {
        extract_source(src, &module_path_of(path)).unwrap()
    }

    #[test]
    fn specifiers() {
        assert_eq!(resolve_specifier("lib.b", "./a"), "lib.a");
        assert_eq!(resolve_specifier("lib.sub.b", "../a.js"), "lib.a");
        assert_eq!(resolve_specifier("b", "./tools/x"), "tools.x");
        assert_eq!(resolve_specifier("b", "fs"), "fs");
    }

    #[test]
    fn same_module_and_import() {
        let a = set("function foo() {}\nfunction bar() { foo(); baz(); }", "a.js");
        let b = set("const a = require('./a');\nfunction use() { a.foo(); }", "b.js");
        let idx = ProjectIndex::build([&a, &b]);
        let bar = a.get("a.bar").unwrap();
        assert_eq!(
            idx.resolve_references(bar).into_iter().collect::<Vec<_>>(),
            [("a.foo".to_string(), EdgeLabel::F)]
        );
        let using = b.get("b.use").unwrap();
        assert_eq!(
            idx.resolve_references(using).into_iter().collect::<Vec<_>>(),
            [("a.foo".to_string(), EdgeLabel::F)]
        );
    }

    #[test]
    fn local_shadows_import() {
        let a = set("function foo() {}", "a.js");
        let b = set("const foo = require('./a').foo;\nfunction foo2() {}\nvar x = 1;\nfunction g() { foo(); x = 2; }", "b.js");
        let idx = ProjectIndex::build([&a, &b]);
        let g = b.get("b.g").unwrap();
        assert_eq!(
            idx.resolve_references(g).into_iter().collect::<Vec<_>>(),
            [("a.foo".to_string(), EdgeLabel::F), ("b.x".to_string(), EdgeLabel::V)]
        );
        let c = set("function foo() {}\nconst a = require('./a');\nfunction g() { foo(); }", "c.js");
        let idx = ProjectIndex::build([&a, &c]);
        let refs = idx.resolve_references(c.get("c.g").unwrap());
        assert_eq!(refs.into_iter().collect::<Vec<_>>(), [("c.foo".to_string(), EdgeLabel::F)]);
    }

    #[test]
    fn class_use_goes_to_constructor_and_this_to_owner() {
        let a = set(
            "function B() { this.n = 0; }\nB.prototype.inc = function () { this.n++; this.log(); };\nB.prototype.log = function () {};\nvar b = new B();",
            "a.js",
        );
        let idx = ProjectIndex::build([&a]);
        let refs: Vec<_> = idx.resolve_references(a.get("a.B.inc").unwrap()).into_iter().collect();
        assert_eq!(refs, [("a.B.log".to_string(), EdgeLabel::F), ("a.B.n".to_string(), EdgeLabel::V)]);
        let refs: Vec<_> = idx.resolve_references(a.get("a.b").unwrap()).into_iter().collect();
        assert_eq!(refs, [("a.B.constructor".to_string(), EdgeLabel::F)]);
    }

    #[test]
    fn method_call_on_variable_is_variable_access() {
        let a = set("var binding = process.binding('fs');\nfunction w() { binding.write(1); }", "a.js");
        let idx = ProjectIndex::build([&a]);
        let refs: Vec<_> = idx.resolve_references(a.get("a.w").unwrap()).into_iter().collect();
        assert_eq!(refs, [("a.binding".to_string(), EdgeLabel::V)]);
    }
}
