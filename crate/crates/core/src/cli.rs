//! Command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, ValueEnum};

use crate::canonical::{parse_canonical, CanonError, PreferencePolicy};
use crate::category::parse_category;
use crate::chart::{parse_exhaustive, parse_nf, ChartError, DEFAULT_CAP};
use crate::demos;
use crate::grammar::{load_lexicon, load_policy, Grammar, RulePolicy};
use crate::semantics::{group_into_classes, recipe_of, RecipeClass, SemanticsError, DEFAULT_MAX_STEPS};
use crate::tree::ParseTree;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Mode {
    /// Every derivation the grammar allows.
    All,
    /// Normal-form derivations only.
    Nf,
    /// One representative per normal-form key; works under any restriction.
    Canonical,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Show {
    Trees,
    Recipes,
    Counts,
    Classes,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Prefer {
    First,
    Left,
    Standard,
}

impl From<Prefer> for PreferencePolicy {
    fn from(p: Prefer) -> Self {
        match p {
            Prefer::First => PreferencePolicy::FirstFound,
            Prefer::Left => PreferencePolicy::MoreLeftBranching,
            Prefer::Standard => PreferencePolicy::FewerNonstandard,
        }
    }
}

/// Parse sentences with Combinatory Categorial Grammar, one parse per reading.
///
/// Tokens missing from the lexicon that parse as categories (such as `A/B`)
/// stand for themselves.
#[derive(Parser, Debug, Clone)]
#[command(name = "ccgnf", version)]
pub struct Args {
    /// Lexicon file: `word<TAB>category` lines.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Policy file: `key = value` lines (default: pure CCG).
    #[arg(long)]
    pub policy: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "nf")]
    pub mode: Mode,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "trees,counts")]
    pub show: Vec<Show>,
    /// Goal category for full parses (default S, or the policy's target).
    #[arg(long)]
    pub target: Option<String>,
    /// Maximum number of trees to unpack.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Which parse represents its class in canonical mode.
    #[arg(long, value_enum, default_value = "first")]
    pub prefer: Prefer,
    /// Run a bundled scenario instead of parsing a sentence.
    #[arg(long)]
    pub demo: Option<String>,
    /// Size parameter for the `modifiers` demo.
    #[arg(long)]
    pub n: Option<usize>,
    /// Print rule names, exact degrees and per-cell canonical state.
    #[arg(long, short)]
    pub verbose: bool,
    pub sentence: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub lexicon: Option<PathBuf>,
    pub policy: Option<PathBuf>,
    pub mode: Mode,
    pub show: Vec<Show>,
    pub target: Option<String>,
    pub cap: usize,
    pub prefer: PreferencePolicy,
    pub verbose: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lexicon: None,
            policy: None,
            mode: Mode::Nf,
            show: vec![Show::Trees, Show::Counts],
            target: None,
            cap: DEFAULT_CAP,
            prefer: PreferencePolicy::FirstFound,
            verbose: false,
        }
    }
}

impl From<&Args> for RunConfig {
    fn from(a: &Args) -> Self {
        RunConfig {
            lexicon: a.lexicon.clone(),
            policy: a.policy.clone(),
            mode: a.mode,
            show: a.show.clone(),
            target: a.target.clone(),
            cap: a.cap,
            prefer: a.prefer.into(),
            verbose: a.verbose,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Report {
    fn usage(msg: impl Into<String>) -> Report {
        Report { exit_code: 2, stdout: String::new(), stderr: format!("error: {}\n", msg.into()) }
    }
}

pub fn main_with_args(args: &Args) -> Report {
    if let Some(name) = &args.demo {
        return demos::run_demo(name, args.n);
    }
    run(&RunConfig::from(args), &args.sentence)
}

/// Loads the configured files and parses `sentence`.
pub fn run(config: &RunConfig, sentence: &[String]) -> Report {
    let entries = match &config.lexicon {
        None => Vec::new(),
        Some(path) => match std::fs::read_to_string(path) {
            Err(e) => return Report::usage(format!("{}: {e}", path.display())),
            Ok(text) => match load_lexicon(&text) {
                Ok(e) => e,
                Err(e) => return Report::usage(format!("{}: {e}", path.display())),
            },
        },
    };
    let policy_file = match &config.policy {
        None => None,
        Some(path) => match std::fs::read_to_string(path) {
            Err(e) => return Report::usage(format!("{}: {e}", path.display())),
            Ok(text) => match load_policy(&text) {
                Ok(p) => Some(p),
                Err(e) => return Report::usage(format!("{}: {e}", path.display())),
            },
        },
    };
    let words: Vec<&str> = sentence.iter().map(String::as_str).collect();
    let mut grammar = Grammar::new(entries, RulePolicy::default()).with_pseudo_words(true);
    let preset = RulePolicy::pure(grammar.max_arity_for(&words));
    grammar.policy = match &policy_file {
        Some(pf) => pf.apply_to(preset),
        None => preset,
    };
    let target = match (&config.target, policy_file.as_ref().and_then(|p| p.target.clone())) {
        (Some(t), _) => match parse_category(t) {
            Ok(c) => c,
            Err(e) => return Report::usage(format!("--target: {e}")),
        },
        (None, Some(t)) => t,
        (None, None) => grammar.target.clone(),
    };
    grammar.target = target;
    run_grammar(config, &grammar, &words)
}

/// Parses `words` with an already-built grammar and renders the report.
pub fn run_grammar(config: &RunConfig, g: &Grammar, words: &[&str]) -> Report {
    if words.is_empty() {
        return Report::usage("empty sentence");
    }
    if config.cap == 0 {
        return Report::usage("--cap must be at least 1");
    }
    if config.mode == Mode::Canonical && g.policy.enable_substitution {
        return Report::usage("canonical mode does not support enable_substitution");
    }
    let mut out = String::new();
    let mut err = String::new();
    let _ = writeln!(out, "sentence: {}", words.join(" "));
    let _ = writeln!(out, "mode: {}", mode_name(config.mode));
    let _ = writeln!(out, "target: {}", g.target);

    let outcome = match config.mode {
        Mode::All | Mode::Nf => chart_trees(config, g, words),
        Mode::Canonical => canonical_trees(config, g, words, &mut out),
    };
    let found = match outcome {
        Ok(f) => f,
        Err(RunError::Unknown(e)) => {
            let _ = writeln!(err, "error: {e}");
            return Report { exit_code: 1, stdout: out, stderr: err };
        }
        Err(RunError::Other(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return Report { exit_code: 1, stdout: out, stderr: err };
        }
    };
    if !found.pseudo.is_empty() {
        let listed: Vec<String> = found.pseudo.iter().map(|&i| format!("{}@{i}", words[i])).collect();
        let _ = writeln!(out, "pseudo-words: {}", listed.join(" "));
    }
    let classes = match group_into_classes(&found.trees, DEFAULT_MAX_STEPS) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return Report { exit_code: 1, stdout: out, stderr: err };
        }
    };
    for section in &config.show {
        match section {
            Show::Trees => {
                let _ = writeln!(out, "== trees ==");
                for t in &found.trees {
                    let _ = writeln!(out, "{}", t.render(config.verbose));
                }
            }
            Show::Recipes => {
                let _ = writeln!(out, "== recipes ==");
                for t in &found.trees {
                    match render_recipe(t, words) {
                        Ok(r) => {
                            let _ = writeln!(out, "{}  =>  {r}", t.render(config.verbose));
                        }
                        Err(e) => {
                            let _ = writeln!(err, "error: {e}");
                        }
                    }
                }
            }
            Show::Counts => {
                let _ = writeln!(out, "== counts ==");
                let _ = writeln!(out, "{}={}", count_name(config.mode), found.count);
                let _ = writeln!(out, "classes={}", classes.len());
                let _ = writeln!(out, "class_sizes={}", class_sizes(&classes));
            }
            Show::Classes => {
                let _ = writeln!(out, "== classes ==");
                for (i, c) in classes.iter().enumerate() {
                    let rep = &found.trees[c.members[0]];
                    let size = match &found.candidates {
                        Some(cands) => format!("size={} candidates={}", c.members.len(), cands[c.members[0]]),
                        None => format!("size={}", c.members.len()),
                    };
                    let _ = writeln!(
                        out,
                        "class {}: {size} recipe={}  rep={}",
                        i + 1,
                        c.recipe.render(words),
                        rep.render(config.verbose)
                    );
                }
            }
        }
    }
    let exit_code = if found.count > 0 {
        0
    } else {
        let _ = writeln!(err, "no parse of category {}", g.target);
        1
    };
    Report { exit_code, stdout: out, stderr: err }
}

fn render_recipe(t: &ParseTree, words: &[&str]) -> Result<String, SemanticsError> {
    let r = crate::semantics::beta_normalize(&recipe_of(t)?, DEFAULT_MAX_STEPS)?;
    Ok(r.render(words))
}

fn class_sizes(classes: &[RecipeClass]) -> String {
    classes.iter().map(|c| c.members.len().to_string()).collect::<Vec<_>>().join(",")
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::All => "all",
        Mode::Nf => "nf",
        Mode::Canonical => "canonical",
    }
}

fn count_name(m: Mode) -> &'static str {
    match m {
        Mode::All => "total",
        Mode::Nf => "nf",
        Mode::Canonical => "canonical",
    }
}

struct Found {
    trees: Vec<Arc<ParseTree>>,
    count: u128,
    pseudo: Vec<usize>,
    /// Canonical mode: candidates that mapped to each tree's key.
    candidates: Option<Vec<usize>>,
}

enum RunError {
    Unknown(ChartError),
    Other(String),
}

impl From<ChartError> for RunError {
    fn from(e: ChartError) -> Self {
        match e {
            ChartError::UnknownWords(_) | ChartError::EmptySentence => RunError::Unknown(e),
            other => RunError::Other(other.to_string()),
        }
    }
}

fn chart_trees(config: &RunConfig, g: &Grammar, words: &[&str]) -> Result<Found, RunError> {
    let chart = match config.mode {
        Mode::All => parse_exhaustive(words, g)?,
        _ => parse_nf(words, g)?,
    };
    let span = (0, words.len());
    let count = chart.count_trees(span, &g.target);
    let trees = chart.enumerate_trees(span, &g.target, config.cap)?;
    Ok(Found { trees, count, pseudo: chart.pseudo_positions.clone(), candidates: None })
}

fn canonical_trees(
    config: &RunConfig,
    g: &Grammar,
    words: &[&str],
    out: &mut String,
) -> Result<Found, RunError> {
    let chart = parse_canonical(words, g, &config.prefer).map_err(|e| match e {
        CanonError::Chart(c) => RunError::from(c),
        other => RunError::Other(other.to_string()),
    })?;
    if config.verbose {
        let _ = writeln!(out, "== canonical cells ==");
        for width in 1..=words.len() {
            for start in 0..=words.len() - width {
                for e in chart.entries(start, start + width) {
                    let _ = writeln!(
                        out,
                        "C[{start},{}] nf={} seen={}  {}",
                        start + width,
                        e.nf,
                        chart.class_size(e.nf),
                        e.tree.render(true)
                    );
                }
            }
        }
    }
    let parses = chart.parses();
    let candidates = parses.iter().map(|p| chart.class_size(p.nf)).collect();
    let trees: Vec<Arc<ParseTree>> = parses.into_iter().map(|p| p.tree).collect();
    Ok(Found {
        count: trees.len() as u128,
        trees,
        pseudo: chart.pseudo_positions.clone(),
        candidates: Some(candidates),
    })
}
