use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::category::Category;
use crate::rules::{RuleInstance, RuleKind};
use crate::tags::{output_tag, TagClass};

/// A derivation over a contiguous run of words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ParseTree {
    Leaf {
        position: usize,
        word: Arc<str>,
        category: Category,
    },
    Node {
        rule: RuleInstance,
        left: Arc<ParseTree>,
        right: Arc<ParseTree>,
        tag: TagClass,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("rule {rule} does not match child categories {left} + {right}")]
    RuleMismatch { rule: String, left: Category, right: Category },
    #[error("children are not adjacent: left ends at {left_end}, right starts at {right_start}")]
    NotAdjacent { left_end: usize, right_start: usize },
}

impl ParseTree {
    pub fn leaf(position: usize, word: &str, category: Category) -> ParseTree {
        ParseTree::Leaf { position, word: Arc::from(word), category }
    }

    /// Joins two adjacent subtrees with `rule`, checking categories.
    pub fn node(
        rule: RuleInstance,
        left: Arc<ParseTree>,
        right: Arc<ParseTree>,
    ) -> Result<ParseTree, TreeError> {
        if rule.left() != left.category() || rule.right() != right.category() {
            return Err(TreeError::RuleMismatch {
                rule: rule.to_string(),
                left: left.category().clone(),
                right: right.category().clone(),
            });
        }
        if left.end() != right.start() {
            return Err(TreeError::NotAdjacent { left_end: left.end(), right_start: right.start() });
        }
        let tag = output_tag(&rule);
        Ok(ParseTree::Node { rule, left, right, tag })
    }

    /// Instantiates `kind` on the children's categories and joins them.
    pub fn combine(
        kind: RuleKind,
        left: Arc<ParseTree>,
        right: Arc<ParseTree>,
    ) -> Result<ParseTree, TreeError> {
        let rule = RuleInstance::new(kind, left.category(), right.category()).ok_or_else(|| {
            TreeError::RuleMismatch {
                rule: kind.to_string(),
                left: left.category().clone(),
                right: right.category().clone(),
            }
        })?;
        ParseTree::node(rule, left, right)
    }

    pub fn category(&self) -> &Category {
        match self {
            ParseTree::Leaf { category, .. } => category,
            ParseTree::Node { rule, .. } => rule.output(),
        }
    }

    pub fn tag(&self) -> TagClass {
        match self {
            ParseTree::Leaf { .. } => TagClass::OT,
            ParseTree::Node { tag, .. } => *tag,
        }
    }

    pub fn rule(&self) -> Option<&RuleInstance> {
        match self {
            ParseTree::Leaf { .. } => None,
            ParseTree::Node { rule, .. } => Some(rule),
        }
    }

    pub fn children(&self) -> Option<(&Arc<ParseTree>, &Arc<ParseTree>)> {
        match self {
            ParseTree::Leaf { .. } => None,
            ParseTree::Node { left, right, .. } => Some((left, right)),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, ParseTree::Leaf { .. })
    }

    /// Index of the first word covered.
    pub fn start(&self) -> usize {
        match self {
            ParseTree::Leaf { position, .. } => *position,
            ParseTree::Node { left, .. } => left.start(),
        }
    }

    /// One past the last word covered.
    pub fn end(&self) -> usize {
        match self {
            ParseTree::Leaf { position, .. } => position + 1,
            ParseTree::Node { right, .. } => right.end(),
        }
    }

    pub fn leaves(&self) -> Vec<(usize, &str, &Category)> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let ParseTree::Leaf { position, word, category } = t {
                out.push((*position, &**word, category));
            }
        });
        out
    }

    /// Pre-order walk.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ParseTree)) {
        f(self);
        if let ParseTree::Node { left, right, .. } = self {
            left.visit(f);
            right.visit(f);
        }
    }

    pub fn internal_nodes(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |t| n += usize::from(!t.is_leaf()));
        n
    }

    /// Internal nodes that are the left child of their parent.
    pub fn left_branching_score(&self) -> usize {
        match self {
            ParseTree::Leaf { .. } => 0,
            ParseTree::Node { left, right, .. } => {
                usize::from(!left.is_leaf()) + left.left_branching_score() + right.left_branching_score()
            }
        }
    }

    /// Nodes tagged anything other than `-OT`.
    pub fn nonstandard_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |t| n += usize::from(!t.tag().is_standard()));
        n
    }

    pub fn uses_substitution(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            found |= t.rule().is_some_and(|r| r.kind().is_substitution());
        });
        found
    }

    /// `[w]` for leaves, `[L R]<cat>-<TAG>` for nodes. Verbose mode adds the
    /// rule name and the exact composition degree.
    pub fn render(&self, verbose: bool) -> String {
        let mut s = String::new();
        self.render_into(&mut s, verbose);
        s
    }

    fn render_into(&self, out: &mut String, verbose: bool) {
        match self {
            ParseTree::Leaf { word, .. } => {
                out.push('[');
                out.push_str(word);
                out.push(']');
            }
            ParseTree::Node { rule, left, right, tag } => {
                out.push('[');
                left.render_into(out, verbose);
                out.push(' ');
                right.render_into(out, verbose);
                out.push(']');
                out.push_str(&rule.output().to_string());
                out.push('-');
                out.push_str(&tag.render(verbose));
                if verbose {
                    out.push_str(&format!("{{{}}}", rule.kind()));
                }
            }
        }
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}
