use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use corec::baselines::{DEFAULT_MIN_CONFIDENCE, DEFAULT_MIN_SUPPORT};
use corec::cdg::export_all;
use corec::commit::{analyze_commit, CommitAnalysis};
use corec::eval::pipeline::{dataset_of, feature_rows};
use corec::eval::{evaluate_project, recommend_pairs, report_csv, report_text, EvalConfig, MatchFeatures, Tool};
use corec::features::feature_table_csv;
use corec::ml::{load, save, train, Algorithm, ModelSpec, TrainedModel, DEFAULT_BOOST_ROUNDS, DEFAULT_TREE_COUNT};
use corec::pattern::mine::pattern_report;
use corec::pattern::{mine_rcps, PatternId};
use corec::repo::{mine_repository, GitRepo, MinedRepository, DEFAULT_KEYWORDS};

const DEFAULT_SEED: u64 = 20190;

#[derive(Parser, Debug)]
#[command(name = "corec", version, about = "Recommend functions to co-change in JavaScript repositories")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Options {
    /// Git repository to analyse; repeat for several projects.
    #[arg(long = "repo", global = true)]
    repos: Vec<PathBuf>,
    /// Comma-separated commit message keywords.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = DEFAULT_KEYWORDS.map(String::from))]
    keywords: Vec<String>,
    /// Comma-separated patterns among P1, P2, P3.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = PatternId::RECOMMENDABLE)]
    patterns: Vec<PatternId>,
    #[arg(long, global = true, default_value_t = Algorithm::AdaBoostForest)]
    algorithm: Algorithm,
    #[arg(long, global = true, default_value_t = DEFAULT_TREE_COUNT)]
    trees: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_BOOST_ROUNDS)]
    rounds: usize,
    #[arg(long, global = true, default_value_t = 5)]
    folds: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Minimum rule support for ROSE and TAR.
    #[arg(long, global = true, default_value_t = DEFAULT_MIN_SUPPORT)]
    support: usize,
    /// Minimum rule confidence for ROSE and TAR.
    #[arg(long, global = true, default_value_t = DEFAULT_MIN_CONFIDENCE)]
    confidence: f64,
    /// One classifier for all patterns instead of one per pattern.
    #[arg(long, global = true)]
    unified: bool,
    /// Comma-separated tools among corec, corec_u, rose, tar.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = Tool::ALL.map(|t| t.as_str().to_string()))]
    tools: Vec<String>,
    /// Worker threads; all cores by default.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, default_value = "corec-out")]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dump entities, edits and graphs of keyword commits and mine recurring patterns.
    Mine,
    /// Train one model per pattern, or one unified model.
    Train,
    /// Recommend unchanged functions to co-change with a commit.
    Recommend { commit: String },
    /// Compare CoRec, CoRec_u, ROSE and TAR with cross validation.
    Evaluate,
}

impl Options {
    fn spec(&self) -> ModelSpec {
        ModelSpec {
            algorithm: self.algorithm,
            tree_count: self.trees,
            boost_rounds: self.rounds,
            seed: self.seed,
        }
    }

    fn repos(&self) -> Result<&[PathBuf]> {
        if self.repos.is_empty() {
            bail!("no repository given; pass --repo <path>");
        }
        Ok(&self.repos)
    }

    fn patterns(&self) -> Result<Vec<PatternId>> {
        let mut ps = self.patterns.clone();
        ps.sort();
        ps.dedup();
        if let Some(p) = ps.iter().find(|p| !PatternId::RECOMMENDABLE.contains(p)) {
            bail!("pattern {p} is not used for recommendation; choose among P1, P2, P3");
        }
        Ok(ps)
    }

    fn tools(&self) -> Result<Vec<Tool>> {
        let mut ts = self
            .tools
            .iter()
            .map(|t| t.parse::<Tool>().map_err(anyhow::Error::msg))
            .collect::<Result<Vec<_>>>()?;
        ts.sort();
        ts.dedup();
        Ok(ts)
    }

    fn models_dir(&self) -> PathBuf {
        self.out.join("models")
    }
}

fn mine(path: &Path, opts: &Options) -> Result<MinedRepository> {
    log::info!("mining {}", path.display());
    let mined = mine_repository(path, &opts.keywords).with_context(|| format!("cannot mine {}", path.display()))?;
    for (ordinal, f) in &mined.parse_failures {
        log::warn!("commit {}: skipped {f}", mined.chain[*ordinal].id);
    }
    log::info!(
        "{}: {} commits, {} keyword commits",
        mined.name,
        mined.chain.len(),
        mined.analyses.len()
    );
    Ok(mined)
}

fn write(path: &Path, content: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, content).with_context(|| format!("cannot write {}", path.display()))
}

/// Output directory of one project, disambiguated by position when names repeat.
fn project_dirs(opts: &Options, mined: &[MinedRepository]) -> Vec<PathBuf> {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    mined
        .iter()
        .map(|m| {
            let n = seen.entry(&m.name).or_default();
            *n += 1;
            let name = if *n == 1 { m.name.clone() } else { format!("{}-{}", m.name, n) };
            opts.out.join(name)
        })
        .collect()
}

fn cmd_mine(opts: &Options) -> Result<()> {
    let mined: Vec<MinedRepository> = opts.repos()?.iter().map(|r| mine(r, opts)).collect::<Result<_>>()?;
    for (m, dir) in mined.iter().zip(project_dirs(opts, &mined)) {
        let mut commits = String::new();
        let mut entities = String::new();
        let mut edits = String::new();
        let mut cdgs = String::new();
        let mut matches = String::new();
        let mut graphs = Vec::new();
        for (ordinal, a) in &m.analyses {
            let c = &m.chain[*ordinal];
            let _ = writeln!(commits, "{ordinal}\t{}\t{}", c.id, c.message.lines().next().unwrap_or(""));
            let _ = write!(entities, "## {ordinal} {}\n{}", c.id, a.entity_dump());
            for line in a.edit_dump().lines() {
                let _ = writeln!(edits, "{ordinal}\t{line}");
            }
            if !a.cdgs.is_empty() {
                let _ = write!(cdgs, "## {ordinal} {}\n{}\n", c.id, export_all(&a.cdgs));
            }
            for pm in a.pattern_matches() {
                let cfs: Vec<&str> = pm.cf_set.iter().map(|e| e.signature()).collect();
                let _ = writeln!(matches, "{ordinal}\t{}\t{}\t{}", pm.pattern, pm.em.signature(), cfs.join(","));
            }
            graphs.push(a.pattern_graphs());
        }
        let rcps = mine_rcps(&graphs);
        let report = pattern_report(&rcps);
        write(&dir.join("commits.tsv"), commits)?;
        write(&dir.join("entities.txt"), entities)?;
        write(&dir.join("edits.tsv"), edits)?;
        write(&dir.join("cdgs.txt"), cdgs)?;
        write(&dir.join("matches.tsv"), matches)?;
        write(&dir.join("history.tsv"), m.history.dump())?;
        write(&dir.join("rcps.tsv"), &report)?;
        println!("{}: {} keyword commits, {} recurring patterns", m.name, m.analyses.len(), rcps.len());
        for r in &rcps {
            let id = PatternId::classify(&r.pattern).map_or("-".to_string(), |p| p.to_string());
            println!("  {id}\t{}\t{}\t{}", r.key, r.frequency, r.commit_count);
        }
    }
    Ok(())
}

fn model_path(opts: &Options, name: &str) -> PathBuf {
    opts.models_dir().join(format!("{name}.model"))
}

fn cmd_train(opts: &Options) -> Result<()> {
    let patterns = opts.patterns()?;
    let mined: Vec<MinedRepository> = opts.repos()?.iter().map(|r| mine(r, opts)).collect::<Result<_>>()?;
    let rows: Vec<_> = mined.iter().map(|m| feature_rows(m, &patterns)).collect();
    let commits_with = |p: PatternId| -> usize {
        rows.iter().map(|r| r.values().filter(|by| by.contains_key(&p)).count()).sum()
    };
    let counts: Vec<(PatternId, usize)> = patterns.iter().map(|&p| (p, commits_with(p))).collect();
    if counts.iter().all(|(_, n)| *n == 0) {
        let listing: Vec<String> = counts.iter().map(|(p, n)| format!("{p}: {n}")).collect();
        bail!("no usable training commits ({})", listing.join(", "));
    }
    let groups: Vec<(String, Vec<PatternId>)> = if opts.unified {
        vec![("unified".to_string(), patterns.clone())]
    } else {
        patterns.iter().map(|p| (p.to_string(), vec![*p])).collect()
    };
    for (name, ps) in groups {
        let mut data = corec::ml::Dataset::new(corec::features::FEATURE_COUNT);
        let mut table = Vec::new();
        for r in &rows {
            let d = dataset_of(r, &ps, |_| true)?;
            data.rows.extend(d.rows);
            data.labels.extend(d.labels);
            for by in r.values() {
                for p in &ps {
                    table.extend(by.get(p).into_iter().flatten().cloned());
                }
            }
        }
        if data.is_empty() {
            log::warn!("{name}: no usable commits; model skipped");
            continue;
        }
        let model = train(opts.spec(), &data)?;
        write(&model_path(opts, &name), save(&model))?;
        write(&opts.models_dir().join(format!("{name}.features.csv")), feature_table_csv(&table))?;
        println!(
            "{name}: {} samples ({} relevant) -> {}",
            data.len(),
            data.positives(),
            model_path(opts, &name).display()
        );
    }
    Ok(())
}

fn load_model(opts: &Options, name: &str) -> Result<TrainedModel> {
    let path = model_path(opts, name);
    let bytes = fs::read(&path).with_context(|| format!("cannot read model {}; run `corec train` first", path.display()))?;
    load(&bytes).with_context(|| format!("cannot load model {}", path.display()))
}

fn cmd_recommend(opts: &Options, commit: &str) -> Result<()> {
    let repos = opts.repos()?;
    if repos.len() > 1 {
        bail!("recommend takes exactly one --repo");
    }
    let patterns = opts.patterns()?;
    let mined = mine(&repos[0], opts)?;
    let git = GitRepo::open(&repos[0])?;
    let target = git.resolve_commit(commit, &mined.chain)?;
    let analysis: CommitAnalysis = match mined.analyses.get(&target.ordinal) {
        Some(a) => a.clone(),
        None => analyze_commit(target.ordinal, &git.extract_file_pairs(&target)?),
    };
    let matches: Vec<_> = analysis
        .pattern_matches()
        .into_iter()
        .filter(|m| patterns.contains(&m.pattern))
        .collect();
    if matches.is_empty() {
        println!("no recommendation basis");
        return Ok(());
    }
    let mut models: BTreeMap<String, TrainedModel> = BTreeMap::new();
    for m in &matches {
        let name = if opts.unified { "unified".to_string() } else { m.pattern.to_string() };
        if !models.contains_key(&name) {
            models.insert(name.clone(), load_model(opts, &name)?);
        }
        let fx = MatchFeatures::new(&m.em, &analysis, &mined.history);
        let known: Vec<_> = m.cf_set.iter().map(|e| e.current()).collect();
        let recs = recommend_pairs(&models[&name], &fx, &known, &m.uf_set)?;
        println!("{} {} {}", m.pattern, m.em.kind, m.em.signature());
        for cf in &m.cf_set {
            println!("  changed {}", cf.signature());
        }
        for r in &recs {
            println!("  recommend {} {:.3}", r.signature, r.score);
        }
        if recs.is_empty() {
            println!("  nothing to recommend");
        }
    }
    Ok(())
}

fn cmd_evaluate(opts: &Options) -> Result<()> {
    let cfg = EvalConfig {
        spec: opts.spec(),
        folds: opts.folds,
        patterns: opts.patterns()?,
        tools: opts.tools()?,
        min_support: opts.support,
        min_confidence: opts.confidence,
    };
    if cfg.folds < 2 {
        bail!("--folds must be at least 2");
    }
    let mut rows = Vec::new();
    for r in opts.repos()? {
        let mined = mine(r, opts)?;
        rows.extend(evaluate_project(&mined, &cfg)?);
    }
    let text = report_text(&rows);
    write(&opts.out.join("report.txt"), &text)?;
    write(&opts.out.join("report.csv"), report_csv(&rows))?;
    print!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let opts = &cli.opts;
    if let Some(n) = opts.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("cannot configure worker threads")?;
    }
    opts.spec().validate()?;
    match &cli.command {
        Command::Mine => cmd_mine(opts),
        Command::Train => cmd_train(opts),
        Command::Recommend { commit } => cmd_recommend(opts, commit),
        Command::Evaluate => cmd_evaluate(opts),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::FAILURE
        }
    }
}
