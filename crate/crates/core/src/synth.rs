//! Generated repositories with planted co-change patterns, used by the
//! acceptance suite, the CLI tests and demos.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use git2::{IndexAddOption, Repository, Signature, Time};

use crate::commit::FilePair;
use crate::error::{Error, Result};
use crate::fixtures::{FS_JS, FS_JS_OLD};
use crate::pattern::PatternId;

/// One commit: a message and the files it writes (`None` deletes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthCommit {
    pub message: String,
    pub files: Vec<(String, Option<String>)>,
}

impl SynthCommit {
    pub fn new(message: &str) -> Self {
        SynthCommit {
            message: message.to_string(),
            files: Vec::new(),
        }
    }

    pub fn write(mut self, path: &str, content: &str) -> Self {
        self.files.push((path.to_string(), Some(content.to_string())));
        self
    }

    pub fn delete(mut self, path: &str) -> Self {
        self.files.push((path.to_string(), None));
        self
    }
}

const EPOCH: i64 = 1_500_000_000;

/// Creates a git repository at `path` holding `commits` on `master`, with
/// fixed author and times so commit ids are reproducible.
pub fn write_repository(path: &Path, commits: &[SynthCommit]) -> Result<Vec<String>> {
    fs::create_dir_all(path)?;
    let repo = Repository::init(path).map_err(|e| Error::UnusableRepository {
        path: path.to_path_buf(),
        message: e.message().to_string(),
    })?;
    repo.set_head("refs/heads/master")?;
    let mut ids = Vec::with_capacity(commits.len());
    let mut parent: Option<git2::Oid> = None;
    for (i, c) in commits.iter().enumerate() {
        for (file, content) in &c.files {
            let full = path.join(file);
            match content {
                Some(text) => {
                    if let Some(dir) = full.parent() {
                        fs::create_dir_all(dir)?;
                    }
                    fs::write(&full, text)?;
                }
                None => {
                    if full.exists() {
                        fs::remove_file(&full)?;
                    }
                }
            }
        }
        let mut index = repo.index()?;
        index.add_all(["*"], IndexAddOption::DEFAULT, None)?;
        index.update_all(["*"], None)?;
        index.write()?;
        let tree = repo.find_tree(index.write_tree()?)?;
        let sig = Signature::new("Synth Author", "author@example.com", &Time::new(EPOCH + 3600 * i as i64, 0))?;
        let parents: Vec<git2::Commit> = parent.iter().map(|p| repo.find_commit(*p)).collect::<Result<_, _>>()?;
        let parent_refs: Vec<&git2::Commit> = parents.iter().collect();
        let oid = repo.commit(Some("HEAD"), &sig, &sig, &c.message, &tree, &parent_refs)?;
        parent = Some(oid);
        ids.push(oid.to_string());
    }
    Ok(ids)
}

/// Per commit, the `.js` file pairs it produces, in path order.
pub fn file_pairs(commits: &[SynthCommit]) -> Vec<Vec<FilePair>> {
    let mut state: BTreeMap<String, String> = BTreeMap::new();
    let mut out = Vec::with_capacity(commits.len());
    for c in commits {
        let mut pairs = Vec::new();
        for (path, content) in &c.files {
            let old = match content {
                Some(text) => state.insert(path.clone(), text.clone()),
                None => state.remove(path),
            };
            if path.ends_with(".js") && old != *content {
                pairs.push(FilePair {
                    path: path.clone(),
                    old_source: old,
                    new_source: content.clone(),
                });
            }
        }
        pairs.sort_by(|a, b| a.path.cmp(&b.path));
        out.push(pairs);
    }
    out
}

/// A store module whose callers all look up entries through one helper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub word: String,
    pub callers: usize,
    /// Whether `compare` also logs, sharing one peer with the callers.
    pub noisy_decoy: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Initial,
    Fixed(PatternId),
    /// The counter's initial value and the formatter reading it change.
    Retuned,
}

const VERBS: [&str; 4] = ["get", "has", "peek", "take"];

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

impl Family {
    pub fn new(word: &str, callers: usize) -> Self {
        assert!((1..=VERBS.len()).contains(&callers));
        Family {
            word: word.to_string(),
            callers,
            noisy_decoy: false,
        }
    }

    pub fn path(&self) -> String {
        format!("lib/{}.js", self.word)
    }

    pub fn module(&self) -> String {
        format!("lib.{}", self.word)
    }

    /// Signatures of the callers changed by a fix.
    pub fn caller_signatures(&self) -> Vec<String> {
        let cap = capitalize(&self.word);
        let mut s: Vec<String> = VERBS[..self.callers]
            .iter()
            .map(|v| format!("{}.{v}{cap}", self.module()))
            .collect();
        s.sort();
        s
    }

    /// Signature of the entity every caller depends on after a fix.
    pub fn hub_signature(&self, pattern: PatternId) -> String {
        let (w, cap) = (&self.word, capitalize(&self.word));
        let name = match pattern {
            PatternId::P1 => format!("lookup{cap}"),
            PatternId::P2 => format!("check{cap}"),
            _ => format!("{w}Limit"),
        };
        format!("{}.{name}", self.module())
    }

    pub fn source(&self, stage: Stage) -> String {
        let w = &self.word;
        let cap = capitalize(w);
        let p = match stage {
            Stage::Fixed(p) => Some(p),
            _ => None,
        };
        let lookup = |key: &str| match p {
            Some(PatternId::P1) => format!("lookup{cap}({key}, null)"),
            _ => format!("lookup{cap}({key})"),
        };
        let missing = |x: &str| match p {
            Some(PatternId::P2) => format!("!check{cap}({x})"),
            _ => format!("!{x}"),
        };
        let limit = match p {
            Some(PatternId::P3) => format!("  if ({w}Count > {w}Limit) {{\n    return null;\n  }}\n"),
            _ => String::new(),
        };
        let start = if stage == Stage::Retuned { 1 } else { 0 };
        let mut s = format!("var {w}Count = {start};\nvar {w}Table = {{}};\n");
        if p == Some(PatternId::P3) {
            s += &format!("var {w}Limit = 16;\n");
        }
        s += &format!("\nfunction log{cap}(message) {{\n  console.log('[{w}] ' + message);\n}}\n\n");
        if p == Some(PatternId::P1) {
            s += &format!(
                "function lookup{cap}(key, fallback) {{\n  var found = {w}Table[key];\n  return found === undefined ? fallback : found;\n}}\n\n"
            );
        } else {
            s += &format!("function lookup{cap}(key) {{\n  return {w}Table[key];\n}}\n\n");
        }
        if p == Some(PatternId::P2) {
            s += &format!(
                "function check{cap}(value) {{\n  return value !== undefined && value !== null && !value.stale;\n}}\n\n"
            );
        }
        let callers = [
            format!(
                "function get{cap}(key) {{\n{limit}  {w}Count += 1;\n  log{cap}('get ' + key);\n  var entry = {};\n  if ({}) {{\n    return null;\n  }}\n  return entry.value;\n}}\n\n",
                lookup("key"),
                missing("entry")
            ),
            format!(
                "function has{cap}(key) {{\n{limit}  var entry = {};\n  log{cap}('has ' + key);\n  {w}Count += 1;\n  return !({});\n}}\n\n",
                lookup("key"),
                missing("entry")
            ),
            format!(
                "function peek{cap}(key, options) {{\n{limit}  var entry = {};\n  if ({}) {{\n    log{cap}('peek miss ' + key);\n    return options && options.defaultValue;\n  }}\n  {w}Count += 1;\n  return {w}Table[key] === entry ? entry.value : undefined;\n}}\n\n",
                lookup("key"),
                missing("entry")
            ),
            format!(
                "function take{cap}(key) {{\n{limit}  {w}Count -= 1;\n  var entry = {};\n  if ({}) {{\n    log{cap}('take miss ' + key);\n    return null;\n  }}\n  delete {w}Table[key];\n  return entry.value;\n}}\n\n",
                lookup("key"),
                missing("entry")
            ),
        ];
        for c in &callers[..self.callers] {
            s += c;
        }
        let width = if stage == Stage::Retuned {
            format!("width + {w}Count")
        } else {
            "width".to_string()
        };
        s += &format!(
            "function format{cap}(value, width) {{\n  var text = String(value);\n  while (text.length < {width}) {{\n    text = ' ' + text;\n  }}\n  return text;\n}}\n\n"
        );
        let log_line = if self.noisy_decoy {
            format!("  log{cap}('compare');\n")
        } else {
            String::new()
        };
        s += &format!(
            "function compare{cap}s(a, b) {{\n{log_line}  if (a.rank === b.rank) {{\n    return a.name < b.name ? -1 : 1;\n  }}\n  return a.rank - b.rank;\n}}\n\n"
        );
        s += &format!(
            "function {w}Timer(ms, done) {{\n  var started = Date.now();\n  return setTimeout(function() {{\n    done(Date.now() - started);\n  }}, ms);\n}}\n\n"
        );
        s += &format!("function {w}Version() {{\n  return [1, 4, 2].join('.');\n}}\n");
        s
    }
}

fn fix_message(pattern: PatternId, word: &str) -> String {
    match pattern {
        PatternId::P1 => format!("Fix missing fallback in {word} lookup"),
        PatternId::P2 => format!("Fix stale {word} entries"),
        _ => format!("Fix unbounded {word} growth"),
    }
}

const WORDS: [&str; 21] = [
    "widget", "session", "route", "token", "queue", "cache", "socket", "bundle", "ticket", "cursor", "sensor",
    "record", "schema", "plugin", "layer", "stream", "channel", "invoice", "badge", "shelf", "parcel",
];

/// A fix commit planted in a generated repository.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedFix {
    /// Position in the commit list.
    pub ordinal: usize,
    pub pattern: PatternId,
    pub family: Family,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedRepository {
    pub commits: Vec<SynthCommit>,
    pub fixes: Vec<PlantedFix>,
}

/// About forty commits: families created three at a time without keywords,
/// one keyword fix per family (P1, P2 and P3 in turn) and README edits.
pub fn planted_repository() -> PlantedRepository {
    let mut commits = vec![SynthCommit::new("Initial layout").write("README.md", "# store\n")];
    let mut fixes = Vec::new();
    for group in 0..7 {
        let families: Vec<Family> = (0..3)
            .map(|k| {
                let i = group * 3 + k;
                let mut f = Family::new(WORDS[i], 3 + (group + k) % 2);
                f.noisy_decoy = i % 4 == 1;
                f
            })
            .collect();
        let mut create = SynthCommit::new(&format!(
            "Add {} stores",
            families.iter().map(|f| f.word.as_str()).collect::<Vec<_>>().join(", ")
        ));
        for f in &families {
            create = create.write(&f.path(), &f.source(Stage::Initial));
        }
        commits.push(create);
        for (k, f) in families.into_iter().enumerate() {
            let pattern = PatternId::RECOMMENDABLE[k];
            fixes.push(PlantedFix {
                ordinal: commits.len(),
                pattern,
                family: f.clone(),
            });
            commits.push(SynthCommit::new(&fix_message(pattern, &f.word)).write(&f.path(), &f.source(Stage::Fixed(pattern))));
            if k == 1 {
                commits.push(
                    SynthCommit::new(&format!("Document the {} store", f.word))
                        .write("README.md", &format!("# store\n\nSee lib/{}.js.\n", f.word)),
                );
            }
        }
    }
    PlantedRepository { commits, fixes }
}

/// The fs module added, then fixed by guarding seven callbacks while
/// `fs.read` is left unchanged.
pub fn fs_scenario() -> Vec<SynthCommit> {
    vec![
        SynthCommit::new("Add fs bindings").write("lib/fs.js", FS_JS_OLD),
        SynthCommit::new("Fix callback validation in fs").write("lib/fs.js", FS_JS),
    ]
}

/// Expected mining outcome of [`mining_corpus`]: commits per pattern.
pub const MINING_PLAN: [(PatternId, usize); 3] = [(PatternId::P1, 5), (PatternId::P2, 4), (PatternId::P3, 3)];

/// Fourteen commits after one creation commit: five P1 fixes, four P2, three
/// P3 and two unrelated counter retunes, every fix touching three callers.
pub fn mining_corpus() -> Vec<SynthCommit> {
    let mut plan: Vec<Option<PatternId>> = Vec::new();
    for (p, n) in MINING_PLAN {
        plan.extend(std::iter::repeat(Some(p)).take(n));
    }
    plan.extend([None, None]);
    let families: Vec<Family> = (0..plan.len()).map(|i| Family::new(WORDS[i], 3)).collect();
    let mut create = SynthCommit::new("Add stores");
    for f in &families {
        create = create.write(&f.path(), &f.source(Stage::Initial));
    }
    let mut commits = vec![create];
    for (f, p) in families.iter().zip(plan) {
        commits.push(match p {
            Some(p) => SynthCommit::new(&fix_message(p, &f.word)).write(&f.path(), &f.source(Stage::Fixed(p))),
            None => SynthCommit::new(&format!("Adjust {} padding", f.word)).write(&f.path(), &f.source(Stage::Retuned)),
        });
    }
    commits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commit::analyze_commit;
    use crate::distill::EditKind;
    use crate::entity::extract_source;

    #[test]
    fn every_stage_parses() {
        let mut f = Family::new("widget", 4);
        f.noisy_decoy = true;
        for stage in [Stage::Initial, Stage::Retuned]
            .into_iter()
            .chain(PatternId::RECOMMENDABLE.map(Stage::Fixed))
        {
            let set = extract_source(&f.source(stage), &f.module()).unwrap();
            assert!(set.get("lib.widget.takeWidget").is_some());
        }
    }

    #[test]
    fn fixes_produce_the_planted_match() {
        let f = Family::new("queue", 3);
        for p in PatternId::RECOMMENDABLE {
            let pair = FilePair::modified(&f.path(), &f.source(Stage::Initial), &f.source(Stage::Fixed(p)));
            let a = analyze_commit(1, &[pair]);
            let matches: Vec<_> = a.pattern_matches().into_iter().filter(|m| m.cf_set.len() >= 2).collect();
            assert_eq!(matches.len(), 1, "{p}");
            let m = &matches[0];
            assert_eq!(m.pattern, p);
            assert_eq!(m.em.signature(), f.hub_signature(p));
            let cfs: Vec<String> = m.cf_set.iter().map(|e| e.signature().to_string()).collect();
            assert_eq!(cfs, f.caller_signatures());
            assert!(m.cf_set.iter().all(|e| e.kind == EditKind::CF));
        }
    }

    #[test]
    fn file_pairs_track_state() {
        let commits = vec![
            SynthCommit::new("a").write("x.js", "var a = 1;").write("README.md", "r"),
            SynthCommit::new("b").write("x.js", "var a = 1;"),
            SynthCommit::new("c").write("x.js", "var a = 2;"),
            SynthCommit::new("d").delete("x.js"),
        ];
        let pairs = file_pairs(&commits);
        assert_eq!(pairs[0], [FilePair::added("x.js", "var a = 1;")]);
        assert!(pairs[1].is_empty());
        assert_eq!(pairs[2], [FilePair::modified("x.js", "var a = 1;", "var a = 2;")]);
        assert_eq!(pairs[3][0].new_source, None);
    }

    #[test]
    fn planted_repository_shape() {
        let r = planted_repository();
        assert!((35..=45).contains(&r.commits.len()), "{}", r.commits.len());
        for p in PatternId::RECOMMENDABLE {
            assert_eq!(r.fixes.iter().filter(|f| f.pattern == p).count(), 7);
        }
        let keywords = crate::repo::default_keywords();
        let is_kw = |m: &str| keywords.iter().any(|k| m.to_lowercase().contains(k.as_str()));
        let kw: Vec<usize> = (0..r.commits.len()).filter(|&i| is_kw(&r.commits[i].message)).collect();
        let expected: Vec<usize> = r.fixes.iter().map(|f| f.ordinal).collect();
        assert_eq!(kw, expected);
    }
}
