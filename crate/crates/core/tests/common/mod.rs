//! Shared helpers for integration tests: random grammars, brute-force
//! oracles, and the property checks run over whole charts.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use ccgnf::canonical::{nf_key_equal, nf_rewrite, parse_canonical, PreferencePolicy};
use ccgnf::semantics::{reading_of, Reading, DEFAULT_MAX_STEPS};
use ccgnf::{
    parse_exhaustive, parse_nf, Category, Grammar, LexEntry, ParseTree, RuleInstance, RuleKind,
    RulePolicy, SlashDir,
};

pub fn cat(s: &str) -> Category {
    ccgnf::parse_category(s).unwrap()
}

/// Closed-form Catalan numbers.
pub fn catalan(n: u64) -> u128 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// Counts binary bracketings of a forward application chain by trying
/// every split and checking that both halves reduce, without the chart.
pub fn brute_force_bracketings(cats: &[Category], max_degree: usize) -> u128 {
    fn derive(cats: &[Category], max_degree: usize) -> Vec<Category> {
        if cats.len() == 1 {
            return vec![cats[0].clone()];
        }
        let mut out = Vec::new();
        for split in 1..cats.len() {
            for l in derive(&cats[..split], max_degree) {
                for r in derive(&cats[split..], max_degree) {
                    for rule in ccgnf::enumerate_rules(&l, &r, max_degree, false) {
                        out.push(rule.output().clone());
                    }
                }
            }
        }
        out
    }
    derive(cats, max_degree).len() as u128
}

/// A forward chain `A1/A2 A2/A3 ... Ak`.
pub fn forward_chain(k: usize) -> Vec<String> {
    (1..k).map(|i| format!("A{i}/A{}", i + 1)).chain([format!("A{k}")]).collect()
}

/// A backward chain `Ak Ak-1\Ak ... A1\A2`.
pub fn backward_chain(k: usize) -> Vec<String> {
    std::iter::once(format!("A{k}"))
        .chain((1..k).rev().map(|i| format!("A{i}\\A{}", i + 1)))
        .collect()
}

pub fn is_right_branching(t: &ParseTree) -> bool {
    match t.children() {
        None => true,
        Some((l, r)) => l.is_leaf() && is_right_branching(r),
    }
}

pub fn is_left_branching(t: &ParseTree) -> bool {
    match t.children() {
        None => true,
        Some((l, r)) => r.is_leaf() && is_left_branching(l),
    }
}

fn built_by(t: &ParseTree) -> Option<RuleKind> {
    t.rule().map(|r| r.kind())
}

/// Declarative normal-form check on rule kinds alone (no tags): composition
/// output never serves as the functor of a same-direction rule, and only
/// degree-1 composition may feed substitution.
pub fn satisfies_nf_constraints(t: &ParseTree) -> bool {
    let mut ok = true;
    t.visit(&mut |node| {
        let (Some(rule), Some((l, r))) = (node.rule(), node.children()) else { return };
        let violates = match rule.kind() {
            RuleKind::Compose { dir: SlashDir::Forward, .. } => {
                matches!(built_by(l), Some(RuleKind::Compose { dir: SlashDir::Forward, degree }) if degree >= 1)
            }
            RuleKind::Compose { dir: SlashDir::Backward, .. } => {
                matches!(built_by(r), Some(RuleKind::Compose { dir: SlashDir::Backward, degree }) if degree >= 1)
            }
            RuleKind::Substitute { dir: SlashDir::Forward } => {
                matches!(built_by(l), Some(RuleKind::Compose { dir: SlashDir::Forward, degree }) if degree >= 2)
            }
            RuleKind::Substitute { dir: SlashDir::Backward } => {
                matches!(built_by(r), Some(RuleKind::Compose { dir: SlashDir::Backward, degree }) if degree >= 2)
            }
        };
        ok &= !violates;
    });
    ok
}

// ---------------------------------------------------------------------------
// Random grammars
// ---------------------------------------------------------------------------

const ATOMS: [&str; 4] = ["A", "B", "C", "D"];
pub const MAX_DEPTH: usize = 3;

pub fn random_category<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize) -> Category {
    if depth == 0 || rng.gen_bool(0.45) {
        return Category::atom(atoms.choose(rng).unwrap()).unwrap();
    }
    let res = random_category(rng, atoms, depth - 1);
    let arg = random_category(rng, atoms, depth - 1);
    let dir = if rng.gen_bool(0.5) { SlashDir::Forward } else { SlashDir::Backward };
    Category::slash(res, dir, arg)
}

/// Splits `target` into `k` lexical categories by running rule templates
/// backwards, so the result has at least one derivation of `target`.
fn split_category<R: Rng>(
    rng: &mut R,
    atoms: &[&str],
    target: &Category,
    k: usize,
    substitution: bool,
) -> Option<Vec<Category>> {
    if k == 1 {
        return (target.depth() <= MAX_DEPTH).then(|| vec![target.clone()]);
    }
    for _ in 0..20 {
        let kl = rng.gen_range(1..k);
        let y = random_category(rng, atoms, 1);
        let use_subst = substitution && target.arity() >= 1 && rng.gen_bool(0.25);
        let (left, right) = if use_subst {
            let (x, d1, z) = target.as_functor().unwrap();
            let fwd = rng.gen_bool(0.5);
            let yz = Category::slash(y.clone(), d1, z.clone());
            if fwd {
                (Category::slash(Category::forward(x.clone(), y), d1, z.clone()), yz)
            } else {
                (yz, Category::slash(Category::backward(x.clone(), y), d1, z.clone()))
            }
        } else {
            let n = rng.gen_range(0..=target.arity().min(2));
            let (x, pairs) = target.strip(n).unwrap();
            let secondary = Category::attach(y.clone(), pairs);
            if rng.gen_bool(0.5) {
                (Category::forward(x.clone(), y), secondary)
            } else {
                (secondary, Category::backward(x.clone(), y))
            }
        };
        if left.depth() > MAX_DEPTH || right.depth() > MAX_DEPTH {
            continue;
        }
        let (Some(mut l), Some(r)) = (
            split_category(rng, atoms, &left, kl, substitution),
            split_category(rng, atoms, &right, k - kl, substitution),
        ) else {
            continue;
        };
        l.extend(r);
        return Some(l);
    }
    None
}

/// A random lexicon plus sentences over it.
#[derive(Clone, Debug)]
pub struct RandomCase {
    pub entries: Vec<LexEntry>,
    pub sentences: Vec<Vec<String>>,
}

/// Up to four atoms, category depth at most three, at most three
/// categories per word, sentences of 3..=7 words.
pub fn random_case<R: Rng>(rng: &mut R, substitution: bool, sentences: usize) -> RandomCase {
    let n_atoms = rng.gen_range(1..=ATOMS.len());
    let atoms = &ATOMS[..n_atoms];
    let mut entries: Vec<LexEntry> = Vec::new();
    let mut lex: HashMap<String, BTreeSet<Category>> = HashMap::new();
    let mut out = Vec::new();
    let mut word_id = 0;
    for _ in 0..sentences {
        let k = rng.gen_range(3..=7);
        let target = random_category(rng, atoms, 1);
        let cats = match split_category(rng, atoms, &target, k, substitution) {
            Some(c) => c,
            None => (0..k).map(|_| random_category(rng, atoms, MAX_DEPTH)).collect(),
        };
        let mut sentence = Vec::new();
        for c in cats {
            // Reuse an existing word with room for one more category now and
            // then, so lexical ambiguity shows up.
            let reuse = lex
                .iter()
                .filter(|(_, cs)| cs.len() < 3 || cs.contains(&c))
                .map(|(w, _)| w.clone())
                .collect::<Vec<_>>();
            let word = if !reuse.is_empty() && rng.gen_bool(0.3) {
                let mut r = reuse;
                r.sort();
                r.choose(rng).unwrap().clone()
            } else {
                word_id += 1;
                format!("w{word_id}")
            };
            let set = lex.entry(word.clone()).or_default();
            if set.insert(c.clone()) {
                entries.push(LexEntry { word: word.clone(), category: c });
            }
            sentence.push(word);
        }
        out.push(sentence);
    }
    // Extra random categories for some words.
    let mut words: Vec<String> = lex.keys().cloned().collect();
    words.sort();
    for w in words {
        let set = lex.get_mut(&w).unwrap();
        while set.len() < 3 && rng.gen_bool(0.25) {
            let c = random_category(rng, atoms, MAX_DEPTH);
            if set.insert(c.clone()) {
                entries.push(LexEntry { word: w.clone(), category: c });
            }
        }
    }
    RandomCase { entries, sentences: out }
}

// ---------------------------------------------------------------------------
// Property checks over whole charts
// ---------------------------------------------------------------------------

/// Cells whose tree count exceeds this are skipped (and counted).
pub const CELL_CAP: usize = 4000;

#[derive(Default, Debug, Clone)]
pub struct PropertyStats {
    pub sentences: usize,
    pub cells_checked: usize,
    pub cells_skipped: usize,
    pub trees_checked: usize,
    pub full_parses: usize,
    /// Checked trees containing a substitution node.
    pub substitution_trees: usize,
    pub violations: Vec<String>,
}

impl PropertyStats {
    pub fn merge(&mut self, o: PropertyStats) {
        self.sentences += o.sentences;
        self.cells_checked += o.cells_checked;
        self.cells_skipped += o.cells_skipped;
        self.trees_checked += o.trees_checked;
        self.full_parses += o.full_parses;
        self.substitution_trees += o.substitution_trees;
        self.violations.extend(o.violations);
    }
}

fn recipe(t: &ParseTree) -> Reading {
    reading_of(t, DEFAULT_MAX_STEPS).expect("recipes normalize within budget")
}

/// (a) normal-form trees pairwise inequivalent, (b) the same recipe
/// classes as the exhaustive parse, and for composition-only grammars
/// (c) `nf_rewrite` idempotent, recipe-preserving and constraint-satisfying,
/// (d) normal-form keys agreeing with recipe equality. Checked in every
/// cell for every category.
pub fn check_nf_properties(words: &[&str], g: &Grammar) -> PropertyStats {
    let mut st = PropertyStats { sentences: 1, ..Default::default() };
    let all = parse_exhaustive(words, g).unwrap();
    let nf = parse_nf(words, g).unwrap();
    let composition_only = !g.policy.enable_substitution;
    let tag = words.join(" ");
    for (s, e) in all.spans() {
        for c in all.categories(s, e) {
            let (Ok(ex), Ok(nfs)) = (all.enumerate_trees((s, e), &c, CELL_CAP), nf.enumerate_trees((s, e), &c, CELL_CAP))
            else {
                st.cells_skipped += 1;
                continue;
            };
            st.cells_checked += 1;
            st.trees_checked += ex.len();
            st.substitution_trees += ex.iter().filter(|t| t.uses_substitution()).count();
            if (s, e) == (0, words.len()) {
                st.full_parses += ex.len();
            }
            let ex_recipes: Vec<Reading> = ex.iter().map(|t| recipe(t)).collect();
            let nf_recipes: Vec<Reading> = nfs.iter().map(|t| recipe(t)).collect();
            let nf_set: HashSet<&Reading> = nf_recipes.iter().collect();
            if nf_set.len() != nf_recipes.len() {
                st.violations.push(format!("(a) duplicate NF readings for {c} over {s}..{e} in [{tag}]"));
            }
            let ex_set: HashSet<&Reading> = ex_recipes.iter().collect();
            if ex_set != nf_set {
                st.violations.push(format!(
                    "(b) class sets differ for {c} over {s}..{e} in [{tag}]: exhaustive {} vs NF {}",
                    ex_set.len(),
                    nf_set.len()
                ));
            }
            for t in &nfs {
                if !satisfies_nf_constraints(t) {
                    st.violations.push(format!("tag soundness: NF chart produced {t}"));
                }
            }
            for t in &ex {
                let in_nf_chart = nfs.iter().any(|n| n == t);
                if in_nf_chart != satisfies_nf_constraints(t) {
                    st.violations.push(format!("tag soundness: {t} in NF chart = {in_nf_chart}"));
                }
            }
            if !composition_only {
                continue;
            }
            for (t, r) in ex.iter().zip(&ex_recipes) {
                let once = match nf_rewrite(t) {
                    Ok(x) => x,
                    Err(e) => {
                        st.violations.push(format!("(c) nf_rewrite failed on {t}: {e}"));
                        continue;
                    }
                };
                if nf_rewrite(&once).as_ref() != Ok(&once) {
                    st.violations.push(format!("(c) not idempotent on {t}"));
                }
                if recipe(&once) != *r {
                    st.violations.push(format!("(c) recipe changed: {t} -> {once}"));
                }
                if !satisfies_nf_constraints(&once) {
                    st.violations.push(format!("(c) result violates constraints: {once}"));
                }
            }
            // (d): nf_key_equal(a, b) <=> recipe(a) == recipe(b) on every pair,
            // checked via a shared store (equal keys are equal ids) and the
            // induced partitions.
            let mut store = ccgnf::NfStore::new();
            let keys: Vec<_> = ex.iter().map(|t| store.nf_of(t).unwrap()).collect();
            let mut by_key: HashMap<_, &Reading> = HashMap::new();
            let mut by_recipe: HashMap<&Reading, _> = HashMap::new();
            for (k, r) in keys.iter().zip(&ex_recipes) {
                if *by_key.entry(*k).or_insert(r) != r || *by_recipe.entry(r).or_insert(*k) != *k {
                    st.violations.push(format!("(d) key/oracle disagreement for {c} over {s}..{e} in [{tag}]"));
                    break;
                }
            }
            // Spot-check the public pairwise function on a few pairs.
            for i in 0..ex.len().min(4) {
                for j in 0..ex.len().min(4) {
                    let same = nf_key_equal(&ex[i], &ex[j]).unwrap();
                    if same != (ex_recipes[i] == ex_recipes[j]) {
                        st.violations.push(format!("(d) nf_key_equal wrong on {} vs {}", ex[i], ex[j]));
                    }
                }
            }
        }
    }
    st
}

/// Blocks a random subset of the rule instances the exhaustive chart uses,
/// sometimes also forbidding crossing or capping the degree.
pub fn random_restriction<R: Rng>(rng: &mut R, words: &[&str], g: &Grammar) -> RulePolicy {
    let all = parse_exhaustive(words, g).unwrap();
    let mut used: BTreeSet<RuleInstance> = BTreeSet::new();
    for (s, e) in all.spans() {
        for item in all.cell(s, e).items.values() {
            for d in &item.derivations {
                if let ccgnf::chart::Derivation::Binary { rule, .. } = d {
                    used.insert(rule.clone());
                }
            }
        }
    }
    let mut policy = g.policy.clone();
    let p = rng.gen_range(0.1..0.6);
    for r in used {
        if rng.gen_bool(p) {
            policy.blocked.insert(r);
        }
    }
    if rng.gen_bool(0.2) {
        policy.allow_crossing = false;
    }
    if rng.gen_bool(0.2) {
        policy.max_degree = rng.gen_range(0..=2);
    }
    policy
}

/// (e) Under `g`'s (restricted) policy, every canonical cell holds one
/// parse per recipe class of the exhaustive cell, and nothing else.
pub fn check_canonical(words: &[&str], g: &Grammar, prefer: PreferencePolicy) -> PropertyStats {
    let mut st = PropertyStats { sentences: 1, ..Default::default() };
    let all = parse_exhaustive(words, g).unwrap();
    let canon = parse_canonical(words, g, &prefer).unwrap();
    let tag = words.join(" ");
    for (s, e) in all.spans() {
        let entries = canon.entries(s, e);
        let mut canon_cats: Vec<Category> = entries.iter().map(|x| x.tree.category().clone()).collect();
        canon_cats.sort();
        canon_cats.dedup();
        let ex_cats = {
            let mut v = all.categories(s, e);
            v.sort();
            v
        };
        if canon_cats != ex_cats {
            st.violations.push(format!("(e) categories differ over {s}..{e} in [{tag}]"));
            continue;
        }
        for c in ex_cats {
            let Ok(ex) = all.enumerate_trees((s, e), &c, CELL_CAP) else {
                st.cells_skipped += 1;
                continue;
            };
            st.cells_checked += 1;
            st.trees_checked += ex.len();
            let ex_set: HashSet<Reading> = ex.iter().map(|t| recipe(t)).collect();
            let reps: Vec<Arc<ParseTree>> =
                entries.iter().filter(|x| *x.tree.category() == c).map(|x| x.tree.clone()).collect();
            let rep_recipes: Vec<Reading> = reps.iter().map(|t| recipe(t)).collect();
            let rep_set: HashSet<Reading> = rep_recipes.iter().cloned().collect();
            if rep_set.len() != rep_recipes.len() {
                st.violations.push(format!("(e) duplicate representatives for {c} over {s}..{e} in [{tag}]"));
            }
            if rep_set != ex_set {
                st.violations.push(format!(
                    "(e) class sets differ for {c} over {s}..{e} in [{tag}]: exhaustive {} vs canonical {}",
                    ex_set.len(),
                    rep_set.len()
                ));
            }
            for t in &reps {
                if !ex.iter().any(|x| x == t) {
                    st.violations.push(format!("(e) representative {t} is not a legal parse"));
                }
            }
        }
    }
    st
}
