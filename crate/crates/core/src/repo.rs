//! Reading commits and file versions out of a git repository.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use git2::{Delta, DiffOptions, Oid, Repository, Sort};
use rayon::prelude::*;

use crate::commit::{analyze_commit, CommitAnalysis, FilePair, ParseFailure};
use crate::error::{Error, Result};
use crate::history::HistoryIndex;

pub const DEFAULT_KEYWORDS: [&str; 5] = ["bug", "fix", "error", "adjust", "failure"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitRef {
    pub id: String,
    pub message: String,
    pub parent_id: Option<String>,
    /// Position on the first-parent chain, oldest first.
    pub ordinal: usize,
    pub timestamp: i64,
}

impl CommitRef {
    pub fn matches_keywords(&self, keywords: &[String]) -> bool {
        let message = self.message.to_lowercase();
        keywords
            .iter()
            .any(|k| !k.is_empty() && message.contains(&k.to_lowercase()))
    }
}

pub struct GitRepo {
    path: PathBuf,
    repo: Repository,
}

impl GitRepo {
    pub fn open(path: &Path) -> Result<Self> {
        let repo = Repository::open(path).map_err(|e| Error::UnusableRepository {
            path: path.to_path_buf(),
            message: e.message().to_string(),
        })?;
        Ok(GitRepo {
            path: path.to_path_buf(),
            repo,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Commits reachable from HEAD along first parents, oldest first. An
    /// unborn HEAD gives no commits.
    pub fn first_parent_chain(&self) -> Result<Vec<CommitRef>> {
        let head = match self.repo.head() {
            Ok(h) => h,
            Err(e) if e.code() == git2::ErrorCode::UnbornBranch || e.code() == git2::ErrorCode::NotFound => {
                return Ok(Vec::new())
            }
            Err(e) => return Err(e.into()),
        };
        let head_id = head
            .target()
            .ok_or_else(|| Error::RepositoryCorruption("HEAD does not point to a commit".into()))?;
        let mut walk = self.repo.revwalk()?;
        walk.push(head_id)?;
        walk.simplify_first_parent()?;
        walk.set_sorting(Sort::TOPOLOGICAL | Sort::REVERSE)?;
        let mut out = Vec::new();
        for (ordinal, oid) in walk.enumerate() {
            let commit = self.repo.find_commit(oid?)?;
            out.push(CommitRef {
                id: commit.id().to_string(),
                message: commit.message().unwrap_or_default().to_string(),
                parent_id: commit.parent_ids().next().map(|p| p.to_string()),
                ordinal,
                timestamp: commit.time().seconds(),
            });
        }
        Ok(out)
    }

    /// First-parent commits whose message contains a keyword, ignoring case.
    pub fn scan_commits(&self, keywords: &[String]) -> Result<Vec<CommitRef>> {
        Ok(self
            .first_parent_chain()?
            .into_iter()
            .filter(|c| c.matches_keywords(keywords))
            .collect())
    }

    /// One pair per `.js` file differing from the first parent, by path.
    pub fn extract_file_pairs(&self, commit: &CommitRef) -> Result<Vec<FilePair>> {
        let oid = Oid::from_str(&commit.id).map_err(|_| Error::UnknownCommit(commit.id.clone()))?;
        let c = self
            .repo
            .find_commit(oid)
            .map_err(|_| Error::UnknownCommit(commit.id.clone()))?;
        let new_tree = c.tree()?;
        let old_tree = match c.parents().next() {
            Some(p) => Some(p.tree()?),
            None => None,
        };
        let mut opts = DiffOptions::new();
        opts.ignore_submodules(true);
        let diff = self
            .repo
            .diff_tree_to_tree(old_tree.as_ref(), Some(&new_tree), Some(&mut opts))?;
        let mut out = Vec::new();
        for delta in diff.deltas() {
            let path = delta
                .new_file()
                .path()
                .or_else(|| delta.old_file().path())
                .map(|p| p.to_string_lossy().replace('\\', "/"))
                .unwrap_or_default();
            if !path.ends_with(".js") {
                continue;
            }
            let (old, new) = match delta.status() {
                Delta::Added => (None, Some(delta.new_file().id())),
                Delta::Deleted => (Some(delta.old_file().id()), None),
                _ => (Some(delta.old_file().id()), Some(delta.new_file().id())),
            };
            let old_source = old.map(|id| self.blob_text(id)).transpose()?;
            let new_source = new.map(|id| self.blob_text(id)).transpose()?;
            if old_source == new_source {
                continue;
            }
            out.push(FilePair {
                path,
                old_source,
                new_source,
            });
        }
        out.sort_by(|a, b| a.path.cmp(&b.path));
        Ok(out)
    }

    fn blob_text(&self, id: Oid) -> Result<String> {
        let blob = self.repo.find_blob(id)?;
        Ok(String::from_utf8_lossy(blob.content()).into_owned())
    }

    /// The commit named by a full or abbreviated id, or any revision.
    pub fn resolve_commit(&self, spec: &str, chain: &[CommitRef]) -> Result<CommitRef> {
        let obj = self
            .repo
            .revparse_single(spec)
            .map_err(|_| Error::UnknownCommit(spec.to_string()))?;
        let commit = obj.peel_to_commit().map_err(|_| Error::UnknownCommit(spec.to_string()))?;
        let id = commit.id().to_string();
        chain
            .iter()
            .find(|c| c.id == id)
            .cloned()
            .ok_or_else(|| Error::UnknownCommit(format!("{spec} is not on the first-parent chain of HEAD")))
    }
}

/// A repository's first-parent history with per-commit analyses.
pub struct MinedRepository {
    pub name: String,
    pub chain: Vec<CommitRef>,
    /// Edited signatures of every chain commit.
    pub history: HistoryIndex,
    /// Analyses of the keyword commits, by ordinal.
    pub analyses: BTreeMap<usize, CommitAnalysis>,
    pub parse_failures: Vec<(usize, ParseFailure)>,
}

impl MinedRepository {
    pub fn keyword_commits(&self) -> impl Iterator<Item = &CommitRef> {
        self.analyses.keys().map(|&o| &self.chain[o])
    }
}

/// Analyses every commit of the first-parent chain, recording edits in the
/// history and keeping the analyses of keyword commits.
pub fn mine_repository(path: &Path, keywords: &[String]) -> Result<MinedRepository> {
    let repo = GitRepo::open(path)?;
    let chain = repo.first_parent_chain()?;
    let mut pairs = Vec::with_capacity(chain.len());
    for c in &chain {
        pairs.push(repo.extract_file_pairs(c)?);
    }
    let analyses: Vec<CommitAnalysis> = pairs
        .par_iter()
        .enumerate()
        .map(|(ordinal, p)| analyze_commit(ordinal, p))
        .collect();
    let mut history = HistoryIndex::new();
    let mut kept = BTreeMap::new();
    let mut parse_failures = Vec::new();
    for (a, c) in analyses.into_iter().zip(&chain) {
        history.record(a.ordinal, a.edited_signatures());
        parse_failures.extend(a.parse_failures.iter().map(|f| (a.ordinal, f.clone())));
        if c.matches_keywords(keywords) {
            kept.insert(a.ordinal, a);
        }
    }
    let name = path
        .canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| path.display().to_string());
    Ok(MinedRepository {
        name,
        chain,
        history,
        analyses: kept,
        parse_failures,
    })
}

/// History index over `commits` alone.
pub fn build_history_index(repo: &GitRepo, commits: &[CommitRef]) -> Result<(HistoryIndex, Vec<(usize, ParseFailure)>)> {
    let mut pairs = Vec::with_capacity(commits.len());
    for c in commits {
        pairs.push((c.ordinal, repo.extract_file_pairs(c)?));
    }
    let analyses: Vec<CommitAnalysis> = pairs.par_iter().map(|(o, p)| analyze_commit(*o, p)).collect();
    let mut history = HistoryIndex::new();
    let mut failures = Vec::new();
    for a in analyses {
        history.record(a.ordinal, a.edited_signatures());
        failures.extend(a.parse_failures.into_iter().map(|f| (a.ordinal, f)));
    }
    Ok((history, failures))
}

pub fn default_keywords() -> Vec<String> {
    DEFAULT_KEYWORDS.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{write_repository, SynthCommit};
    use std::collections::BTreeSet;

    fn kw(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn keyword_scan_is_case_insensitive() {
        let dir = tempfile::tempdir().unwrap();
        write_repository(
            dir.path(),
            &[
                SynthCommit::new("fix crash").write("a.js", "var a = 1;"),
                SynthCommit::new("add docs").write("README.md", "docs"),
                SynthCommit::new("Bug in parser").write("a.js", "var a = 2;"),
            ],
        )
        .unwrap();
        let repo = GitRepo::open(dir.path()).unwrap();
        let hits: Vec<usize> = repo.scan_commits(&default_keywords()).unwrap().iter().map(|c| c.ordinal).collect();
        assert_eq!(hits, [0, 2]);
        assert!(repo.scan_commits(&[]).unwrap().is_empty());
        let chain = repo.first_parent_chain().unwrap();
        assert_eq!(chain[0].parent_id, None);
        assert_eq!(chain[2].parent_id.as_deref(), Some(chain[1].id.as_str()));
        assert!(chain.iter().all(|c| c.id.len() == 40));
    }

    #[test]
    fn file_pairs_filter_non_js_and_root_adds() {
        let dir = tempfile::tempdir().unwrap();
        write_repository(
            dir.path(),
            &[
                SynthCommit::new("root").write("a.js", "var a = 1;").write("notes.txt", "n"),
                SynthCommit::new("docs").write("README.md", "docs"),
                SynthCommit::new("edit").write("lib/b.js", "var b = 1;").write("a.js", "var a = 2;"),
                SynthCommit::new("drop").delete("a.js"),
            ],
        )
        .unwrap();
        let repo = GitRepo::open(dir.path()).unwrap();
        let chain = repo.first_parent_chain().unwrap();
        assert_eq!(repo.extract_file_pairs(&chain[0]).unwrap(), [FilePair::added("a.js", "var a = 1;")]);
        assert!(repo.extract_file_pairs(&chain[1]).unwrap().is_empty());
        let edit = repo.extract_file_pairs(&chain[2]).unwrap();
        assert_eq!(
            edit,
            [
                FilePair::modified("a.js", "var a = 1;", "var a = 2;"),
                FilePair::added("lib/b.js", "var b = 1;")
            ]
        );
        let drop = repo.extract_file_pairs(&chain[3]).unwrap();
        assert_eq!((drop[0].old_source.is_some(), drop[0].new_source.is_none()), (true, true));
    }

    #[test]
    fn fixture_commit_gives_two_pairs() {
        let dir = tempfile::tempdir().unwrap();
        let mut first = SynthCommit::new("base");
        let mut second = SynthCommit::new("Fix message building");
        for (p, old, new) in crate::fixtures::BUILDMESSAGE_COMMIT {
            first = first.write(p, old);
            second = second.write(p, new);
        }
        write_repository(dir.path(), &[first, second]).unwrap();
        let repo = GitRepo::open(dir.path()).unwrap();
        let chain = repo.first_parent_chain().unwrap();
        let pairs = repo.extract_file_pairs(&chain[1]).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.iter().all(|p| p.old_source.is_some() && p.new_source.is_some()));
    }

    #[test]
    fn history_matches_hand_table() {
        let dir = tempfile::tempdir().unwrap();
        let commits = [
            SynthCommit::new("c0").write("a.js", "function f() { return 1; }\nfunction g() { return 1; }"),
            SynthCommit::new("c1").write("README.md", "x"),
            SynthCommit::new("c2").write("a.js", "function f() { return 2; }\nfunction g() { return 2; }"),
            SynthCommit::new("c3").write("b.js", "var k = 1;\nfunction h() { return k; }"),
            SynthCommit::new("c4").write("a.js", "function f() { return 2; }\nfunction g() { return 3; }"),
            SynthCommit::new("c5")
                .write("a.js", "function f() { return 5; }\nfunction g() { return 5; }")
                .write("b.js", "var k = 2;\nfunction h() { return k; }"),
        ];
        write_repository(dir.path(), &commits).unwrap();
        let mined = mine_repository(dir.path(), &kw(&["c2", "c5"])).unwrap();
        let table: Vec<(&str, Vec<usize>)> = vec![
            ("a.f", vec![0, 2, 5]),
            ("a.g", vec![0, 2, 4, 5]),
            ("b.h", vec![3]),
            ("b.k", vec![3, 5]),
        ];
        let expected: BTreeMap<String, BTreeSet<usize>> = table
            .into_iter()
            .map(|(s, o)| (s.to_string(), o.into_iter().collect()))
            .collect();
        assert_eq!(mined.history.edits_by_signature, expected);
        assert_eq!(mined.history.entities_by_commit[&1], BTreeSet::new());
        assert_eq!(mined.history.co_change_count("a.f", "a.g", 6), 3);
        assert_eq!(mined.analyses.keys().copied().collect::<Vec<_>>(), [2, 5]);
        let again = mine_repository(dir.path(), &kw(&["c2", "c5"])).unwrap();
        assert_eq!(again.chain, mined.chain);
        assert_eq!(again.history, mined.history);
        let repo = GitRepo::open(dir.path()).unwrap();
        let (h, failures) = build_history_index(&repo, &mined.chain).unwrap();
        assert_eq!(h, mined.history);
        assert!(failures.is_empty());
        assert!(build_history_index(&repo, &[]).unwrap().0.is_empty());
    }

    #[test]
    fn unusable_and_empty_repositories() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(GitRepo::open(dir.path()), Err(Error::UnusableRepository { .. })));
        Repository::init(dir.path()).unwrap();
        let mined = mine_repository(dir.path(), &default_keywords()).unwrap();
        assert!(mined.chain.is_empty() && mined.history.is_empty());
        let repo = GitRepo::open(dir.path()).unwrap();
        assert!(matches!(repo.resolve_commit("deadbeef", &[]), Err(Error::UnknownCommit(_))));
    }
}
