//! CKY chart parsing with packed derivations.
//!
//! Items are keyed by `(category, tag)`. In [`ParseMode::NormalForm`] a
//! derivation is only recorded when the normal-form tag constraints admit
//! it; [`ParseMode::Exhaustive`] keeps every grammatical derivation.

use std::collections::HashMap;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::category::Category;
use crate::grammar::Grammar;
use crate::rules::{enumerate_rules, RuleInstance};
use crate::tags::{nf_admissible, output_tag, TagClass};
use crate::tree::ParseTree;

/// Default limit on unpacked trees.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParseMode {
    Exhaustive,
    NormalForm,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error("unknown word(s): {}", .0.join(", "))]
    UnknownWords(Vec<String>),
    #[error("empty sentence")]
    EmptySentence,
    #[error("{count} trees exceed the cap of {cap}")]
    CapExceeded { count: u128, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    Lexical,
    Binary {
        rule: RuleInstance,
        mid: usize,
        /// Item index in cell `(start, mid)`.
        left: usize,
        /// Item index in cell `(mid, end)`.
        right: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Item {
    pub category: Category,
    pub tag: TagClass,
    pub derivations: Vec<Derivation>,
}

pub type ItemKey = (Category, TagClass);

#[derive(Clone, Debug, Default)]
pub struct Cell {
    pub items: IndexMap<ItemKey, Item>,
}

impl Cell {
    pub fn has_category(&self, c: &Category) -> bool {
        self.items.values().any(|it| it.category == *c)
    }
}

/// A combination the grammar allows but normal-form parsing refused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedUse {
    pub start: usize,
    pub mid: usize,
    pub end: usize,
    pub rule: RuleInstance,
    pub left_tag: TagClass,
    pub right_tag: TagClass,
}

type UnpackMemo = HashMap<(usize, usize, usize), Arc<Vec<Arc<ParseTree>>>>;

#[derive(Clone, Debug)]
pub struct Chart {
    pub mode: ParseMode,
    words: Vec<Arc<str>>,
    cells: Vec<Cell>,
    /// Positions whose categories came from the pseudo-word convention.
    pub pseudo_positions: Vec<usize>,
    pub blocked: Vec<BlockedUse>,
}

pub fn parse_exhaustive(words: &[&str], g: &Grammar) -> Result<Chart, ChartError> {
    Chart::build(words, g, ParseMode::Exhaustive)
}

pub fn parse_nf(words: &[&str], g: &Grammar) -> Result<Chart, ChartError> {
    Chart::build(words, g, ParseMode::NormalForm)
}

/// Lexical categories for every word, or the list of unknown words.
pub(crate) fn lexical_categories(
    words: &[&str],
    g: &Grammar,
) -> Result<(Vec<Vec<Category>>, Vec<usize>), ChartError> {
    if words.is_empty() {
        return Err(ChartError::EmptySentence);
    }
    let mut unknown = Vec::new();
    let mut pseudo = Vec::new();
    let mut cats = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        match g.lookup(w) {
            Some(l) => {
                if l.pseudo {
                    pseudo.push(i);
                }
                cats.push(l.categories);
            }
            None => unknown.push(w.to_string()),
        }
    }
    if unknown.is_empty() {
        Ok((cats, pseudo))
    } else {
        Err(ChartError::UnknownWords(unknown))
    }
}

impl Chart {
    pub fn build(words: &[&str], g: &Grammar, mode: ParseMode) -> Result<Chart, ChartError> {
        let (lex, pseudo_positions) = lexical_categories(words, g)?;
        let n = words.len();
        let mut chart = Chart {
            mode,
            words: words.iter().map(|w| Arc::from(*w)).collect(),
            cells: vec![Cell::default(); (n + 1) * (n + 1)],
            pseudo_positions,
            blocked: Vec::new(),
        };
        for (i, cats) in lex.into_iter().enumerate() {
            let cell = chart.cell_mut(i, i + 1);
            for c in cats {
                cell.items.entry((c.clone(), TagClass::OT)).or_insert_with(|| Item {
                    category: c,
                    tag: TagClass::OT,
                    derivations: vec![Derivation::Lexical],
                });
            }
        }
        let policy = &g.policy;
        let mut blocked = Vec::new();
        for width in 2..=n {
            for start in 0..=n - width {
                let end = start + width;
                let mut cell = Cell::default();
                for mid in start + 1..end {
                    let (lcell, rcell) = (chart.cell(start, mid), chart.cell(mid, end));
                    for (li, litem) in lcell.items.values().enumerate() {
                        for (ri, ritem) in rcell.items.values().enumerate() {
                            let rules = enumerate_rules(
                                &litem.category,
                                &ritem.category,
                                policy.max_degree,
                                policy.enable_substitution,
                            );
                            for rule in rules {
                                if !g.rule_allowed(&rule) {
                                    continue;
                                }
                                if mode == ParseMode::NormalForm
                                    && !nf_admissible(&rule, litem.tag, ritem.tag)
                                {
                                    blocked.push(BlockedUse {
                                        start,
                                        mid,
                                        end,
                                        rule,
                                        left_tag: litem.tag,
                                        right_tag: ritem.tag,
                                    });
                                    continue;
                                }
                                let tag = output_tag(&rule);
                                let key = (rule.output().clone(), tag);
                                let item = cell.items.entry(key).or_insert_with(|| Item {
                                    category: rule.output().clone(),
                                    tag,
                                    derivations: Vec::new(),
                                });
                                let d = Derivation::Binary { rule, mid, left: li, right: ri };
                                if !item.derivations.contains(&d) {
                                    item.derivations.push(d);
                                }
                            }
                        }
                    }
                }
                *chart.cell_mut(start, end) = cell;
            }
        }
        chart.blocked = blocked;
        Ok(chart)
    }

    fn index(&self, start: usize, end: usize) -> usize {
        let n = self.words.len();
        assert!(start < end && end <= n, "span ({start}, {end}) out of range for {n} words");
        start * (n + 1) + end
    }

    pub fn cell(&self, start: usize, end: usize) -> &Cell {
        &self.cells[self.index(start, end)]
    }

    fn cell_mut(&mut self, start: usize, end: usize) -> &mut Cell {
        let i = self.index(start, end);
        &mut self.cells[i]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> Vec<&str> {
        self.words.iter().map(|w| &**w).collect()
    }

    /// All spans `(start, end)` in CKY order.
    pub fn spans(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.words.len();
        (1..=n).flat_map(move |w| (0..=n - w).map(move |s| (s, s + w)))
    }

    /// Number of trees rooted in items of `category` over the span.
    pub fn count_trees(&self, span: (usize, usize), category: &Category) -> u128 {
        let mut memo = HashMap::new();
        self.cell(span.0, span.1)
            .items
            .values()
            .enumerate()
            .filter(|(_, it)| it.category == *category)
            .map(|(i, _)| self.count_item(span.0, span.1, i, &mut memo))
            .fold(0u128, u128::saturating_add)
    }

    fn count_item(
        &self,
        start: usize,
        end: usize,
        idx: usize,
        memo: &mut HashMap<(usize, usize, usize), u128>,
    ) -> u128 {
        if let Some(&c) = memo.get(&(start, end, idx)) {
            return c;
        }
        let item = &self.cell(start, end).items[idx];
        let mut total = 0u128;
        for d in &item.derivations {
            total = total.saturating_add(match d {
                Derivation::Lexical => 1,
                Derivation::Binary { mid, left, right, .. } => self
                    .count_item(start, *mid, *left, memo)
                    .saturating_mul(self.count_item(*mid, end, *right, memo)),
            });
        }
        memo.insert((start, end, idx), total);
        total
    }

    /// Unpacks every tree of `category` over the span, depth-first in
    /// derivation order. Fails without unpacking when there are more than
    /// `cap`.
    pub fn enumerate_trees(
        &self,
        span: (usize, usize),
        category: &Category,
        cap: usize,
    ) -> Result<Vec<Arc<ParseTree>>, ChartError> {
        let count = self.count_trees(span, category);
        if count > cap as u128 {
            return Err(ChartError::CapExceeded { count, cap });
        }
        let mut memo = HashMap::new();
        let mut out = Vec::new();
        for (i, it) in self.cell(span.0, span.1).items.values().enumerate() {
            if it.category == *category {
                out.extend(self.unpack(span.0, span.1, i, &mut memo).iter().cloned());
            }
        }
        Ok(out)
    }

    fn unpack(
        &self,
        start: usize,
        end: usize,
        idx: usize,
        memo: &mut UnpackMemo,
    ) -> Arc<Vec<Arc<ParseTree>>> {
        if let Some(v) = memo.get(&(start, end, idx)) {
            return v.clone();
        }
        let item = &self.cell(start, end).items[idx];
        let mut out = Vec::new();
        for d in &item.derivations {
            match d {
                Derivation::Lexical => out.push(Arc::new(ParseTree::leaf(
                    start,
                    &self.words[start],
                    item.category.clone(),
                ))),
                Derivation::Binary { rule, mid, left, right } => {
                    let ls = self.unpack(start, *mid, *left, memo);
                    let rs = self.unpack(*mid, end, *right, memo);
                    for l in ls.iter() {
                        for r in rs.iter() {
                            let t = ParseTree::node(rule.clone(), l.clone(), r.clone())
                                .expect("chart derivations are category-consistent");
                            out.push(Arc::new(t));
                        }
                    }
                }
            }
        }
        let out = Arc::new(out);
        memo.insert((start, end, idx), out.clone());
        out
    }

    /// Distinct categories present over the span, in first-seen order.
    pub fn categories(&self, start: usize, end: usize) -> Vec<Category> {
        let mut out: Vec<Category> = Vec::new();
        for it in self.cell(start, end).items.values() {
            if !out.contains(&it.category) {
                out.push(it.category.clone());
            }
        }
        out
    }
}
