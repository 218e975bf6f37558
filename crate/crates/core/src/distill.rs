//! Entity-level differencing of two versions of a file.

use std::fmt;
use std::str::FromStr;

use crate::entity::{Entity, EntityKind, EntitySet};
use crate::lcs::lcs_similarity;

/// Blocks must be strictly more similar than this to match.
pub const BLOCK_MATCH_THRESHOLD: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChangeOp {
    Added,
    Deleted,
    Changed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EditKind {
    AC,
    DC,
    AF,
    DF,
    CF,
    AV,
    DV,
    CV,
    AB,
    DB,
    CB,
}

impl EditKind {
    pub const ALL: [EditKind; 11] = [
        EditKind::AC,
        EditKind::DC,
        EditKind::AF,
        EditKind::DF,
        EditKind::CF,
        EditKind::AV,
        EditKind::DV,
        EditKind::CV,
        EditKind::AB,
        EditKind::DB,
        EditKind::CB,
    ];

    /// Returns `None` for the combinations that do not exist (changed classes).
    pub fn new(op: ChangeOp, kind: EntityKind) -> Option<Self> {
        use ChangeOp::*;
        use EntityKind::*;
        Some(match (op, kind) {
            (Added, Class) => EditKind::AC,
            (Deleted, Class) => EditKind::DC,
            (Changed, Class) => return None,
            (Added, Function) => EditKind::AF,
            (Deleted, Function) => EditKind::DF,
            (Changed, Function) => EditKind::CF,
            (Added, Variable) => EditKind::AV,
            (Deleted, Variable) => EditKind::DV,
            (Changed, Variable) => EditKind::CV,
            (Added, Block) => EditKind::AB,
            (Deleted, Block) => EditKind::DB,
            (Changed, Block) => EditKind::CB,
        })
    }

    pub fn op(self) -> ChangeOp {
        match self {
            EditKind::AC | EditKind::AF | EditKind::AV | EditKind::AB => ChangeOp::Added,
            EditKind::DC | EditKind::DF | EditKind::DV | EditKind::DB => ChangeOp::Deleted,
            EditKind::CF | EditKind::CV | EditKind::CB => ChangeOp::Changed,
        }
    }

    pub fn entity_kind(self) -> EntityKind {
        match self {
            EditKind::AC | EditKind::DC => EntityKind::Class,
            EditKind::AF | EditKind::DF | EditKind::CF => EntityKind::Function,
            EditKind::AV | EditKind::DV | EditKind::CV => EntityKind::Variable,
            EditKind::AB | EditKind::DB | EditKind::CB => EntityKind::Block,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EditKind::AC => "AC",
            EditKind::DC => "DC",
            EditKind::AF => "AF",
            EditKind::DF => "DF",
            EditKind::CF => "CF",
            EditKind::AV => "AV",
            EditKind::DV => "DV",
            EditKind::CV => "CV",
            EditKind::AB => "AB",
            EditKind::DB => "DB",
            EditKind::CB => "CB",
        }
    }
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownEditKind(pub String);

impl fmt::Display for UnknownEditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown edit kind `{}`", self.0)
    }
}

impl std::error::Error for UnknownEditKind {}

impl FromStr for EditKind {
    type Err = UnknownEditKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EditKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownEditKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityEdit {
    pub kind: EditKind,
    pub old: Option<Entity>,
    pub new: Option<Entity>,
}

impl EntityEdit {
    /// The version whose body defines current references: new unless deleted.
    pub fn current(&self) -> &Entity {
        self.new.as_ref().or(self.old.as_ref()).expect("edit carries an entity")
    }

    pub fn signature(&self) -> &str {
        &self.current().signature
    }
}

pub fn block_similarity(b1: &Entity, b2: &Entity) -> f64 {
    lcs_similarity(&b1.token_sequence, &b2.token_sequence)
}

pub fn diff_entity_sets(old: &EntitySet, new: &EntitySet) -> Vec<EntityEdit> {
    let mut edits = Vec::new();
    let (olds, news) = (named(old), named(new));
    let (mut i, mut j) = (0, 0);
    while i < olds.len() || j < news.len() {
        let ord = match (olds.get(i), news.get(j)) {
            (Some(o), Some(n)) => o.0.cmp(n.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Less => {
                let e = olds[i].1;
                edits.push(edit(ChangeOp::Deleted, Some(e), None));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let e = news[j].1;
                edits.push(edit(ChangeOp::Added, None, Some(e)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let (o, n) = (olds[i].1, news[j].1);
                if o.kind != n.kind {
                    edits.push(edit(ChangeOp::Deleted, Some(o), None));
                    edits.push(edit(ChangeOp::Added, None, Some(n)));
                } else if o.token_sequence != n.token_sequence && o.kind != EntityKind::Class {
                    edits.push(edit(ChangeOp::Changed, Some(o), Some(n)));
                }
                i += 1;
                j += 1;
            }
        }
    }
    edits.extend(diff_blocks(old, new));
    edits
}

fn named(s: &EntitySet) -> Vec<(&String, &Entity)> {
    s.by_signature.iter().map(|(k, &i)| (k, &s.entities[i])).collect()
}

fn edit(op: ChangeOp, old: Option<&Entity>, new: Option<&Entity>) -> EntityEdit {
    let kind_of = old.or(new).expect("one side present").kind;
    EntityEdit {
        kind: EditKind::new(op, kind_of).expect("valid edit combination"),
        old: old.cloned(),
        new: new.cloned(),
    }
}

fn diff_blocks(old: &EntitySet, new: &EntitySet) -> Vec<EntityEdit> {
    let ob: Vec<&Entity> = old.of_kind(EntityKind::Block).collect();
    let nb: Vec<&Entity> = new.of_kind(EntityKind::Block).collect();
    let mut pairs = Vec::new();
    for (i, o) in ob.iter().enumerate() {
        for (j, n) in nb.iter().enumerate() {
            let s = block_similarity(o, n);
            if s > BLOCK_MATCH_THRESHOLD {
                pairs.push((s, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(ob[a.1].char_range.start.cmp(&ob[b.1].char_range.start))
            .then(nb[a.2].char_range.start.cmp(&nb[b.2].char_range.start))
    });
    let mut old_used = vec![false; ob.len()];
    let mut new_used = vec![false; nb.len()];
    let mut edits = Vec::new();
    for (_, i, j) in pairs {
        if old_used[i] || new_used[j] {
            continue;
        }
        old_used[i] = true;
        new_used[j] = true;
        if ob[i].token_sequence != nb[j].token_sequence {
            edits.push(edit(ChangeOp::Changed, Some(ob[i]), Some(nb[j])));
        }
    }
    for (i, o) in ob.iter().enumerate() {
        if !old_used[i] {
            edits.push(edit(ChangeOp::Deleted, Some(o), None));
        }
    }
    for (j, n) in nb.iter().enumerate() {
        if !new_used[j] {
            edits.push(edit(ChangeOp::Added, None, Some(n)));
        }
    }
    edits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entity::extract_source;

    fn diff(a: &str, b: &str) -> Vec<(EditKind, String)> {
        let o = extract_source(a, "m").unwrap();
        let n = extract_source(b, "m").unwrap();
        diff_entity_sets(&o, &n)
            .into_iter()
            .map(|e| (e.kind, e.signature().to_string()))
            .collect()
    }

    #[test]
    fn added_changed_deleted() {
        let d = diff(
            "function a() { return 1; }\nfunction b() {}\nvar v = 1;",
            "function a() { return 2; }\nfunction c() {}\nvar v = 1;",
        );
        assert_eq!(
            d,
            [
                (EditKind::CF, "m.a".to_string()),
                (EditKind::DF, "m.b".to_string()),
                (EditKind::AF, "m.c".to_string())
            ]
        );
    }

    #[test]
    fn whitespace_only_is_no_edit() {
        assert!(diff("function a(){return 1}", "function a() {\n  return 1\n}").is_empty());
    }

    #[test]
    fn rename_is_delete_plus_add() {
        let d = diff("function a() { x(); }", "function b() { x(); }");
        assert_eq!(d, [(EditKind::DF, "m.a".to_string()), (EditKind::AF, "m.b".to_string())]);
    }

    #[test]
    fn blocks_match_by_similarity() {
        let d = diff("run(1, 2, 3);\nvar z;\nstop();", "run(1, 2, 4);\nvar z;\nlog(9 - 8 * 7);");
        assert_eq!(
            d,
            [
                (EditKind::CB, "m.0".to_string()),
                (EditKind::DB, "m.21".to_string()),
                (EditKind::AB, "m.21".to_string())
            ]
        );
    }

    #[test]
    fn greedy_prefers_best_match() {
        let o = "a(1);\nvar s;\na(1, 2, 3, 4);";
        let n = "a(1, 2, 3, 5);\nvar s;";
        let d = diff(o, n);
        assert_eq!(d[0], (EditKind::CB, "m.0".to_string()));
        let ed = diff_entity_sets(&extract_source(o, "m").unwrap(), &extract_source(n, "m").unwrap());
        assert_eq!(ed[0].old.as_ref().unwrap().char_range.start, 13);
    }

    #[test]
    fn edit_kind_round_trip() {
        for k in EditKind::ALL {
            assert_eq!(k.as_str().parse::<EditKind>().unwrap(), k);
            assert_eq!(EditKind::new(k.op(), k.entity_kind()), Some(k));
        }
        assert!("XX".parse::<EditKind>().is_err());
    }
}
