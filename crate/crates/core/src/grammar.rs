//! Lexicons, rule-set restrictions, and their file formats.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use thiserror::Error;

use crate::category::{parse_category, Category};
use crate::rules::{RuleInstance, RuleKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexEntry {
    pub word: String,
    pub category: Category,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct LoadError {
    pub line: usize,
    pub msg: String,
}

fn load_err(line: usize, msg: impl Into<String>) -> LoadError {
    LoadError { line, msg: msg.into() }
}

/// Reads `word<TAB>category` lines; `#` starts a comment.
pub fn load_lexicon(source: &str) -> Result<Vec<LexEntry>, LoadError> {
    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim_end();
        if line.trim().is_empty() {
            continue;
        }
        let (word, cat_text) = line
            .split_once('\t')
            .ok_or_else(|| load_err(line_no, "expected word<TAB>category"))?;
        let word = word.trim();
        if word.is_empty() || word.contains(char::is_whitespace) {
            return Err(load_err(line_no, format!("bad word {word:?}")));
        }
        let category =
            parse_category(cat_text.trim()).map_err(|e| load_err(line_no, e.to_string()))?;
        if !seen.insert((word.to_string(), category.clone())) {
            return Err(load_err(line_no, format!("duplicate entry {word}\t{category}")));
        }
        entries.push(LexEntry { word: word.to_string(), category });
    }
    Ok(entries)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Which rule instances a grammar admits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulePolicy {
    pub max_degree: usize,
    pub allow_crossing: bool,
    pub enable_substitution: bool,
    pub blocked: BTreeSet<RuleInstance>,
}

impl Default for RulePolicy {
    fn default() -> Self {
        RulePolicy {
            max_degree: 3,
            allow_crossing: true,
            enable_substitution: false,
            blocked: BTreeSet::new(),
        }
    }
}

impl RulePolicy {
    /// Every composition instance of degree up to `max_degree`.
    pub fn pure(max_degree: usize) -> RulePolicy {
        RulePolicy { max_degree, ..RulePolicy::default() }
    }

    /// Every composition instance of any degree.
    pub fn unbounded() -> RulePolicy {
        RulePolicy::pure(usize::MAX)
    }

    /// Pure preset whose degree bound is the largest arity among `cats`.
    pub fn pure_for<'a>(cats: impl IntoIterator<Item = &'a Category>) -> RulePolicy {
        RulePolicy::pure(cats.into_iter().map(Category::arity).max().unwrap_or(0))
    }

    pub fn with_substitution(mut self, on: bool) -> RulePolicy {
        self.enable_substitution = on;
        self
    }

    pub fn block(mut self, rule: RuleInstance) -> RulePolicy {
        self.blocked.insert(rule);
        self
    }

    pub fn rule_allowed(&self, r: &RuleInstance) -> bool {
        let kind_ok = match r.kind() {
            RuleKind::Compose { degree, .. } => degree <= self.max_degree,
            RuleKind::Substitute { .. } => self.enable_substitution,
        };
        kind_ok && (self.allow_crossing || !r.is_crossing()) && !self.blocked.contains(r)
    }
}

/// Parsed contents of a policy file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolicyFile {
    pub max_degree: Option<usize>,
    pub allow_crossing: Option<bool>,
    pub enable_substitution: Option<bool>,
    pub target: Option<Category>,
    pub blocked: Vec<RuleInstance>,
}

impl PolicyFile {
    /// Overlays the file's settings on `base`.
    pub fn apply_to(&self, mut base: RulePolicy) -> RulePolicy {
        if let Some(d) = self.max_degree {
            base.max_degree = d;
        }
        if let Some(c) = self.allow_crossing {
            base.allow_crossing = c;
        }
        if let Some(s) = self.enable_substitution {
            base.enable_substitution = s;
        }
        base.blocked.extend(self.blocked.iter().cloned());
        base
    }
}

/// Reads `key = value` lines. `block` may repeat, with the value
/// `<left> + <right> -> <output> [<rule>]`.
pub fn load_policy(source: &str) -> Result<PolicyFile, LoadError> {
    let mut pf = PolicyFile::default();
    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| load_err(line_no, "expected key = value"))?;
        let (key, value) = (key.trim(), value.trim());
        let err = |m: String| load_err(line_no, m);
        match key {
            "max_degree" => {
                pf.max_degree = Some(if value == "unbounded" {
                    usize::MAX
                } else {
                    value.parse().map_err(|_| err(format!("bad max_degree {value:?}")))?
                })
            }
            "allow_crossing" => pf.allow_crossing = Some(parse_bool(value).ok_or_else(|| err(format!("bad boolean {value:?}")))?),
            "enable_substitution" => {
                pf.enable_substitution =
                    Some(parse_bool(value).ok_or_else(|| err(format!("bad boolean {value:?}")))?)
            }
            "target" => pf.target = Some(parse_category(value).map_err(|e| err(e.to_string()))?),
            "block" => pf.blocked.push(parse_block(value).map_err(err)?),
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    Ok(pf)
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

fn parse_block(value: &str) -> Result<RuleInstance, String> {
    let value = value.trim_matches('"');
    let (lhs, rest) = value.split_once("->").ok_or("block needs '->'")?;
    let (left, right) = lhs.split_once('+').ok_or("block needs '<left> + <right>'")?;
    let rest = rest.trim();
    let open = rest.rfind('[').ok_or("block needs a [rule] suffix")?;
    let output_text = &rest[..open];
    let kind_text = rest[open + 1..].trim_end().strip_suffix(']').ok_or("unclosed [rule]")?;
    let parse = |t: &str| parse_category(t.trim()).map_err(|e| e.to_string());
    let (left, right, output) = (parse(left)?, parse(right)?, parse(output_text)?);
    let kind: RuleKind = kind_text.trim().parse().map_err(|e: crate::rules::BadRuleName| e.to_string())?;
    match RuleInstance::new(kind, &left, &right) {
        Some(r) if *r.output() == output => Ok(r),
        Some(r) => Err(format!("{kind} on {left} + {right} yields {}, not {output}", r.output())),
        None => Err(format!("{kind} does not apply to {left} + {right}")),
    }
}

/// Result of looking a token up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexLookup {
    pub categories: Vec<Category>,
    /// The token was not in the lexicon and was read as its own category.
    pub pseudo: bool,
}

#[derive(Clone, Debug)]
pub struct Grammar {
    pub lexicon: IndexMap<String, Vec<Category>>,
    pub policy: RulePolicy,
    pub target: Category,
    /// Accept tokens such as `A/B` that are absent from the lexicon but
    /// parse as categories.
    pub pseudo_words: bool,
}

impl Grammar {
    pub fn new(entries: impl IntoIterator<Item = LexEntry>, policy: RulePolicy) -> Grammar {
        let mut lexicon: IndexMap<String, Vec<Category>> = IndexMap::new();
        for e in entries {
            let cats = lexicon.entry(e.word).or_default();
            if !cats.contains(&e.category) {
                cats.push(e.category);
            }
        }
        Grammar {
            lexicon,
            policy,
            target: Category::atom("S").expect("valid atom"),
            pseudo_words: false,
        }
    }

    /// A grammar with no lexicon where every token names its own category.
    pub fn schematic(policy: RulePolicy) -> Grammar {
        Grammar::new(Vec::new(), policy).with_pseudo_words(true)
    }

    pub fn with_target(mut self, target: Category) -> Grammar {
        self.target = target;
        self
    }

    pub fn with_policy(mut self, policy: RulePolicy) -> Grammar {
        self.policy = policy;
        self
    }

    pub fn with_pseudo_words(mut self, on: bool) -> Grammar {
        self.pseudo_words = on;
        self
    }

    pub fn lookup(&self, word: &str) -> Option<LexLookup> {
        if let Some(cats) = self.lexicon.get(word) {
            return Some(LexLookup { categories: cats.clone(), pseudo: false });
        }
        if self.pseudo_words {
            if let Ok(c) = parse_category(word) {
                return Some(LexLookup { categories: vec![c], pseudo: true });
            }
        }
        None
    }

    pub fn rule_allowed(&self, r: &RuleInstance) -> bool {
        self.policy.rule_allowed(r)
    }

    /// Largest arity among the lexicon's categories and those of any
    /// pseudo-words in `words`.
    pub fn max_arity_for(&self, words: &[&str]) -> usize {
        let lex = self.lexicon.values().flatten().map(Category::arity);
        let sent = words
            .iter()
            .filter_map(|w| self.lookup(w))
            .flat_map(|l| l.categories)
            .map(|c| c.arity());
        lex.chain(sent).max().unwrap_or(0)
    }
}
