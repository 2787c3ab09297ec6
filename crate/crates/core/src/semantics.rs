//! Semantic recipes: the lambda term a derivation builds out of its word
//! meanings, kept abstract so that two derivations count as equivalent
//! only if they combine the words the same way for every lexical
//! interpretation.
//!
//! Bound variables use de Bruijn indices, so alpha-equivalence is plain
//! structural equality and recipes can be hashed.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::category::{Category, SlashDir};
use crate::rules::RuleKind;
use crate::tree::ParseTree;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Recipe {
    /// Meaning of the word at this 0-based position.
    Leaf(usize),
    /// de Bruijn index; 0 is the innermost enclosing binder.
    Var(usize),
    Lam(Box<Recipe>),
    App(Box<Recipe>, Box<Recipe>),
}

/// Default reduction budget.
pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error("beta reduction exceeded {0} steps")]
    BudgetExceeded(usize),
}

impl Recipe {
    pub fn app(f: Recipe, a: Recipe) -> Recipe {
        Recipe::App(Box::new(f), Box::new(a))
    }

    pub fn lam(body: Recipe) -> Recipe {
        Recipe::Lam(Box::new(body))
    }

    pub fn is_beta_normal(&self) -> bool {
        match self {
            Recipe::Leaf(_) | Recipe::Var(_) => true,
            Recipe::Lam(b) => b.is_beta_normal(),
            Recipe::App(f, a) => !matches!(**f, Recipe::Lam(_)) && f.is_beta_normal() && a.is_beta_normal(),
        }
    }

    pub fn max_leaf(&self) -> Option<usize> {
        match self {
            Recipe::Leaf(i) => Some(*i),
            Recipe::Var(_) => None,
            Recipe::Lam(b) => b.max_leaf(),
            Recipe::App(f, a) => f.max_leaf().max(a.max_leaf()),
        }
    }

    /// Renders with binders named `x1, x2, ...` by depth and leaves as
    /// `word_position`, e.g. `john_0(likes_1(mary_2))`.
    pub fn render(&self, words: &[&str]) -> String {
        let mut s = String::new();
        self.render_into(&mut s, words, 0);
        s
    }

    fn render_into(&self, out: &mut String, words: &[&str], depth: usize) {
        match self {
            Recipe::Leaf(i) => {
                let w = words.get(*i).copied().unwrap_or("w");
                if !w.is_empty() && w.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    let _ = write!(out, "{}_{i}", w.to_lowercase());
                } else {
                    let _ = write!(out, "w_{i}");
                }
            }
            Recipe::Var(k) => {
                let _ = write!(out, "x{}", depth - k);
            }
            Recipe::Lam(b) => {
                let _ = write!(out, "λx{}.", depth + 1);
                b.render_into(out, words, depth + 1);
            }
            Recipe::App(f, a) => {
                if matches!(**f, Recipe::Lam(_)) {
                    out.push('(');
                    f.render_into(out, words, depth);
                    out.push(')');
                } else {
                    f.render_into(out, words, depth);
                }
                out.push('(');
                a.render_into(out, words, depth);
                out.push(')');
            }
        }
    }
}

/// The unreduced recipe of a derivation.
///
/// `>Bn`/`<Bn` with functor meaning `f` and argument meaning `g` yields
/// `λc1...λcn. f(g(c1)...(cn))`; `>S`/`<S` yields `λz. f(z)(g(z))`.
pub fn recipe_of(tree: &ParseTree) -> Result<Recipe, SemanticsError> {
    match tree {
        ParseTree::Leaf { position, .. } => Ok(Recipe::Leaf(*position)),
        ParseTree::Node { rule, left, right, .. } => {
            let consistent = rule.left() == left.category()
                && rule.right() == right.category()
                && rule.kind().apply(left.category(), right.category()).as_ref() == Some(rule.output());
            if !consistent {
                return Err(SemanticsError::Malformed(format!(
                    "{rule} over children {} + {}",
                    left.category(),
                    right.category()
                )));
            }
            let l = recipe_of(left)?;
            let r = recipe_of(right)?;
            let (f, g) = match rule.kind().dir() {
                SlashDir::Forward => (l, r),
                SlashDir::Backward => (r, l),
            };
            Ok(match rule.kind() {
                RuleKind::Compose { degree, .. } => compose_recipe(f, g, degree),
                RuleKind::Substitute { .. } => Recipe::lam(Recipe::app(
                    Recipe::app(f, Recipe::Var(0)),
                    Recipe::app(g, Recipe::Var(0)),
                )),
            })
        }
    }
}

// f and g are closed apart from leaves, so no shifting is needed under the
// new binders.
fn compose_recipe(f: Recipe, g: Recipe, n: usize) -> Recipe {
    let applied = (0..n).fold(g, |acc, i| Recipe::app(acc, Recipe::Var(n - 1 - i)));
    (0..n).fold(Recipe::app(f, applied), |acc, _| Recipe::lam(acc))
}

/// Leftmost-outermost beta normalization with a step budget.
pub fn beta_normalize(r: &Recipe, max_steps: usize) -> Result<Recipe, SemanticsError> {
    let mut steps = 0;
    normalize(r.clone(), &mut steps, max_steps)
}

fn tick(steps: &mut usize, max: usize) -> Result<(), SemanticsError> {
    *steps += 1;
    if *steps > max {
        Err(SemanticsError::BudgetExceeded(max))
    } else {
        Ok(())
    }
}

fn normalize(t: Recipe, steps: &mut usize, max: usize) -> Result<Recipe, SemanticsError> {
    match t {
        Recipe::Leaf(_) | Recipe::Var(_) => Ok(t),
        Recipe::Lam(b) => Ok(Recipe::lam(normalize(*b, steps, max)?)),
        Recipe::App(f, a) => match whnf(*f, steps, max)? {
            Recipe::Lam(body) => {
                tick(steps, max)?;
                normalize(beta(*body, &a), steps, max)
            }
            head => Ok(Recipe::app(normalize(head, steps, max)?, normalize(*a, steps, max)?)),
        },
    }
}

/// Reduces the head until it is not a redex.
fn whnf(t: Recipe, steps: &mut usize, max: usize) -> Result<Recipe, SemanticsError> {
    match t {
        Recipe::App(f, a) => match whnf(*f, steps, max)? {
            Recipe::Lam(body) => {
                tick(steps, max)?;
                whnf(beta(*body, &a), steps, max)
            }
            head => Ok(Recipe::App(Box::new(head), a)),
        },
        other => Ok(other),
    }
}

fn beta(body: Recipe, arg: &Recipe) -> Recipe {
    shift(&subst(&body, 0, &shift(arg, 1, 0)), -1, 0)
}

fn shift(t: &Recipe, by: isize, cutoff: usize) -> Recipe {
    match t {
        Recipe::Leaf(_) => t.clone(),
        Recipe::Var(k) if *k >= cutoff => Recipe::Var((*k as isize + by) as usize),
        Recipe::Var(_) => t.clone(),
        Recipe::Lam(b) => Recipe::lam(shift(b, by, cutoff + 1)),
        Recipe::App(f, a) => Recipe::app(shift(f, by, cutoff), shift(a, by, cutoff)),
    }
}

fn subst(t: &Recipe, idx: usize, with: &Recipe) -> Recipe {
    match t {
        Recipe::Var(k) if *k == idx => with.clone(),
        Recipe::Leaf(_) | Recipe::Var(_) => t.clone(),
        Recipe::Lam(b) => Recipe::lam(subst(b, idx + 1, &shift(with, 1, 0))),
        Recipe::App(f, a) => Recipe::app(subst(f, idx, with), subst(a, idx, with)),
    }
}

/// Equality up to bound-variable renaming. Both inputs should already be
/// beta-normal.
pub fn alpha_equal(a: &Recipe, b: &Recipe) -> bool {
    a == b
}

pub fn normalized_recipe(tree: &ParseTree, max_steps: usize) -> Result<Recipe, SemanticsError> {
    beta_normalize(&recipe_of(tree)?, max_steps)
}

/// What a derivation means: its lexical choices plus its normalized
/// recipe. Trees over different lexical categories for the same words are
/// never equivalent, whatever their recipes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Reading {
    pub leaves: Vec<Category>,
    pub recipe: Recipe,
}

pub fn reading_of(tree: &ParseTree, max_steps: usize) -> Result<Reading, SemanticsError> {
    Ok(Reading {
        leaves: tree.leaves().into_iter().map(|(_, _, c)| c.clone()).collect(),
        recipe: normalized_recipe(tree, max_steps)?,
    })
}

/// Trees sharing one reading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecipeClass {
    pub leaves: Vec<Category>,
    pub recipe: Recipe,
    /// Indices into the input, in input order.
    pub members: Vec<usize>,
}

/// Partitions trees by reading; classes appear in order of their first
/// member.
pub fn group_into_classes<T: AsRef<ParseTree>>(
    trees: &[T],
    max_steps: usize,
) -> Result<Vec<RecipeClass>, SemanticsError> {
    let mut index: HashMap<Reading, usize> = HashMap::new();
    let mut classes: Vec<RecipeClass> = Vec::new();
    for (i, t) in trees.iter().enumerate() {
        let r = reading_of(t.as_ref(), max_steps)?;
        match index.get(&r) {
            Some(&c) => classes[c].members.push(i),
            None => {
                index.insert(r.clone(), classes.len());
                classes.push(RecipeClass { leaves: r.leaves, recipe: r.recipe, members: vec![i] });
            }
        }
    }
    Ok(classes)
}
