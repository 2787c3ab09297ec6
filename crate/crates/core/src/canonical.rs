//! Normal forms as equivalence-class keys.
//!
//! [`NfStore`] hash-conses normal-form trees and memoizes the normal form
//! of `<rule, nf(left), nf(right)>`, so the normal form of a new constituent
//! costs a table lookup plus at most a short rotation. [`parse_canonical`]
//! uses those keys to keep exactly one parse per semantic class even when
//! the grammar's rule set is arbitrarily restricted and some classes have
//! no legal normal-form parse.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::category::{Category, SlashDir};
use crate::chart::{lexical_categories, ChartError};
use crate::grammar::Grammar;
use crate::rules::{enumerate_rules, RuleInstance, RuleKind};
use crate::tags::{kind_admissible, TagClass};
use crate::tree::ParseTree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("normal forms are undefined for substitution ({0})")]
    Substitution(RuleKind),
    #[error("canonical parsing does not support substitution rules")]
    SubstitutionEnabled,
    #[error("{kind} does not apply to {left} + {right}")]
    Mismatch { kind: RuleKind, left: Category, right: Category },
    #[error("internal error: {0}")]
    Internal(String),
}

/// Sequence number of a hash-consed normal-form tree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NfId(pub usize);

impl fmt::Display for NfId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug)]
enum NfNode {
    Leaf { position: usize, word: Arc<str>, category: Category },
    Node { rule: RuleInstance, left: NfId, right: NfId },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum NfKey {
    Leaf(usize, Category),
    Node(RuleKind, NfId, NfId),
}

/// Per-sentence table of normal-form trees.
#[derive(Default, Debug)]
pub struct NfStore {
    nodes: Vec<NfNode>,
    interned: HashMap<NfKey, NfId>,
    /// `(rule, nf(left), nf(right)) -> nf(<rule, left, right>)`
    memo: HashMap<(RuleKind, NfId, NfId), NfId>,
}

impl NfStore {
    pub fn new() -> NfStore {
        NfStore::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn category(&self, id: NfId) -> &Category {
        match &self.nodes[id.0] {
            NfNode::Leaf { category, .. } => category,
            NfNode::Node { rule, .. } => rule.output(),
        }
    }

    pub fn tag(&self, id: NfId) -> TagClass {
        match &self.nodes[id.0] {
            NfNode::Leaf { .. } => TagClass::OT,
            NfNode::Node { rule, .. } => crate::tags::output_tag(rule),
        }
    }

    fn intern(&mut self, key: NfKey, node: NfNode) -> NfId {
        if let Some(&id) = self.interned.get(&key) {
            return id;
        }
        let id = NfId(self.nodes.len());
        self.nodes.push(node);
        self.interned.insert(key, id);
        id
    }

    pub fn leaf(&mut self, position: usize, word: &str, category: &Category) -> NfId {
        self.intern(
            NfKey::Leaf(position, category.clone()),
            NfNode::Leaf { position, word: Arc::from(word), category: category.clone() },
        )
    }

    /// Normal form of `<kind, a, b>` where `a` and `b` are already normal
    /// forms.
    pub fn combine(&mut self, kind: RuleKind, left: NfId, right: NfId) -> Result<NfId, CanonError> {
        if let Some(&id) = self.memo.get(&(kind, left, right)) {
            return Ok(id);
        }
        if kind.is_substitution() {
            return Err(CanonError::Substitution(kind));
        }
        let (lcat, rcat) = (self.category(left).clone(), self.category(right).clone());
        let rule = RuleInstance::new(kind, &lcat, &rcat).ok_or_else(|| CanonError::Mismatch {
            kind,
            left: lcat.clone(),
            right: rcat.clone(),
        })?;
        let id = if kind_admissible(kind, self.tag(left), self.tag(right)) {
            self.intern(NfKey::Node(kind, left, right), NfNode::Node { rule: rule.clone(), left, right })
        } else {
            let rotated = self.rotate(kind, left, right)?;
            if self.category(rotated) != rule.output() {
                return Err(CanonError::Internal(format!(
                    "rotation of {rule} produced {}",
                    self.category(rotated)
                )));
            }
            rotated
        };
        self.memo.insert((kind, left, right), id);
        Ok(id)
    }

    /// `<R, <Q, b1, b2>, c>  =>  <S, b1, nf(<T, b2, c>)>` for a forward `R`,
    /// with `T = R` and `S` of degree `n + q - 1`; mirrored for backward.
    fn rotate(&mut self, kind: RuleKind, left: NfId, right: NfId) -> Result<NfId, CanonError> {
        let RuleKind::Compose { dir, degree: n } = kind else {
            return Err(CanonError::Substitution(kind));
        };
        let primary = match dir {
            SlashDir::Forward => left,
            SlashDir::Backward => right,
        };
        let NfNode::Node { rule: q_rule, left: p1, right: p2 } = self.nodes[primary.0].clone() else {
            return Err(CanonError::Internal(format!("{kind} blocked on a leaf")));
        };
        let q = match q_rule.kind() {
            RuleKind::Compose { dir: qdir, degree } if qdir == dir && degree >= 1 => degree,
            other => {
                return Err(CanonError::Internal(format!(
                    "{kind} blocked but its functor was built by {other}"
                )))
            }
        };
        let outer = RuleKind::Compose { dir, degree: n + q - 1 };
        match dir {
            SlashDir::Forward => {
                let t = self.combine(kind, p2, right)?;
                self.combine(outer, p1, t)
            }
            SlashDir::Backward => {
                let t = self.combine(kind, left, p1)?;
                self.combine(outer, t, p2)
            }
        }
    }

    /// Normal-form key of an arbitrary composition-only tree.
    pub fn nf_of(&mut self, tree: &ParseTree) -> Result<NfId, CanonError> {
        match tree {
            ParseTree::Leaf { position, word, category } => Ok(self.leaf(*position, word, category)),
            ParseTree::Node { rule, left, right, .. } => {
                let l = self.nf_of(left)?;
                let r = self.nf_of(right)?;
                self.combine(rule.kind(), l, r)
            }
        }
    }

    /// Rebuilds the normal-form tree behind `id`.
    pub fn tree(&self, id: NfId) -> Arc<ParseTree> {
        match &self.nodes[id.0] {
            NfNode::Leaf { position, word, category } => {
                Arc::new(ParseTree::leaf(*position, word, category.clone()))
            }
            NfNode::Node { rule, left, right } => Arc::new(
                ParseTree::node(rule.clone(), self.tree(*left), self.tree(*right))
                    .expect("stored normal forms are category-consistent"),
            ),
        }
    }
}

/// The normal form of a composition-only tree.
pub fn nf_rewrite(tree: &ParseTree) -> Result<ParseTree, CanonError> {
    let mut store = NfStore::new();
    let id = store.nf_of(tree)?;
    Ok(Arc::unwrap_or_clone(store.tree(id)))
}

/// Whether two trees over the same words share a normal form.
pub fn nf_key_equal(a: &ParseTree, b: &ParseTree) -> Result<bool, CanonError> {
    let mut store = NfStore::new();
    Ok(store.nf_of(a)? == store.nf_of(b)?)
}

/// Decides which of two equivalent parses represents their class.
pub trait Preference {
    /// True when `candidate` should replace `incumbent`. Ties must return
    /// false.
    fn preferable_to(&self, candidate: &ParseTree, incumbent: &ParseTree) -> bool;
}

impl<F> Preference for F
where
    F: Fn(&ParseTree, &ParseTree) -> bool,
{
    fn preferable_to(&self, candidate: &ParseTree, incumbent: &ParseTree) -> bool {
        self(candidate, incumbent)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum PreferencePolicy {
    /// Keep whichever parse was built first.
    #[default]
    FirstFound,
    /// More internal nodes sitting on left-child edges wins.
    MoreLeftBranching,
    /// Fewer non-`-OT` nodes wins.
    FewerNonstandard,
}

impl Preference for PreferencePolicy {
    fn preferable_to(&self, candidate: &ParseTree, incumbent: &ParseTree) -> bool {
        match self {
            PreferencePolicy::FirstFound => false,
            PreferencePolicy::MoreLeftBranching => {
                candidate.left_branching_score() > incumbent.left_branching_score()
            }
            PreferencePolicy::FewerNonstandard => {
                candidate.nonstandard_count() < incumbent.nonstandard_count()
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalEntry {
    pub tree: Arc<ParseTree>,
    pub nf: NfId,
}

/// Output of [`parse_canonical`]: one representative per normal form in
/// every cell.
#[derive(Debug)]
pub struct CanonicalChart {
    words: Vec<Arc<str>>,
    cells: Vec<IndexMap<NfId, Arc<ParseTree>>>,
    pub store: NfStore,
    class_sizes: HashMap<NfId, usize>,
    pub target: Category,
    pub pseudo_positions: Vec<usize>,
}

impl CanonicalChart {
    fn index(&self, start: usize, end: usize) -> usize {
        let n = self.words.len();
        assert!(start < end && end <= n, "span ({start}, {end}) out of range for {n} words");
        start * (n + 1) + end
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn entries(&self, start: usize, end: usize) -> Vec<CanonicalEntry> {
        self.cells[self.index(start, end)]
            .iter()
            .map(|(nf, tree)| CanonicalEntry { tree: tree.clone(), nf: *nf })
            .collect()
    }

    /// Full-span representatives whose category is the grammar's target.
    pub fn parses(&self) -> Vec<CanonicalEntry> {
        self.entries(0, self.words.len())
            .into_iter()
            .filter(|e| *e.tree.category() == self.target)
            .collect()
    }

    /// Number of candidate parses that mapped to this key.
    pub fn class_size(&self, nf: NfId) -> usize {
        self.class_sizes.get(&nf).copied().unwrap_or(0)
    }

    pub fn nf_tree(&self, nf: NfId) -> Arc<ParseTree> {
        self.store.tree(nf)
    }
}

/// CKY parsing that keeps one parse per normal-form key in each cell.
///
/// A new candidate whose key is already present replaces the reigning
/// parse only when `prefer` says so.
pub fn parse_canonical(
    words: &[&str],
    g: &Grammar,
    prefer: &dyn Preference,
) -> Result<CanonicalChart, CanonError> {
    if g.policy.enable_substitution {
        return Err(CanonError::SubstitutionEnabled);
    }
    let (lex, pseudo_positions) = lexical_categories(words, g)?;
    let n = words.len();
    let mut chart = CanonicalChart {
        words: words.iter().map(|w| Arc::from(*w)).collect(),
        cells: vec![IndexMap::new(); (n + 1) * (n + 1)],
        store: NfStore::new(),
        class_sizes: HashMap::new(),
        target: g.target.clone(),
        pseudo_positions,
    };
    for (i, cats) in lex.into_iter().enumerate() {
        let idx = chart.index(i, i + 1);
        for c in cats {
            let nf = chart.store.leaf(i, words[i], &c);
            *chart.class_sizes.entry(nf).or_default() += 1;
            chart.cells[idx].insert(nf, Arc::new(ParseTree::leaf(i, words[i], c)));
        }
    }
    for width in 2..=n {
        for start in 0..=n - width {
            let end = start + width;
            let idx = chart.index(start, end);
            let mut cell: IndexMap<NfId, Arc<ParseTree>> = IndexMap::new();
            for mid in start + 1..end {
                let lefts = chart.entries(start, mid);
                let rights = chart.entries(mid, end);
                for l in &lefts {
                    for r in &rights {
                        for rule in enumerate_rules(
                            l.tree.category(),
                            r.tree.category(),
                            g.policy.max_degree,
                            false,
                        ) {
                            if !g.rule_allowed(&rule) {
                                continue;
                            }
                            let nf = chart.store.combine(rule.kind(), l.nf, r.nf)?;
                            let alpha = ParseTree::node(rule, l.tree.clone(), r.tree.clone())
                                .map_err(|e| CanonError::Internal(e.to_string()))?;
                            *chart.class_sizes.entry(nf).or_default() += 1;
                            match cell.get(&nf) {
                                None => {
                                    cell.insert(nf, Arc::new(alpha));
                                }
                                Some(reigning) if prefer.preferable_to(&alpha, reigning) => {
                                    cell.shift_remove(&nf);
                                    cell.insert(nf, Arc::new(alpha));
                                }
                                Some(_) => {}
                            }
                        }
                    }
                }
            }
            chart.cells[idx] = cell;
        }
    }
    Ok(chart)
}
