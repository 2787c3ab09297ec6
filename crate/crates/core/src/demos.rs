//! Bundled scenarios with known answers.
//!
//! Each demo parses a fixed input and prints an expected-vs-actual table.
//! The report exits 0 only when every row matches.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::canonical::{nf_key_equal, nf_rewrite, parse_canonical, PreferencePolicy};
use crate::category::{parse_category, Category};
use crate::chart::{parse_exhaustive, parse_nf, Chart, DEFAULT_CAP};
use crate::cli::Report;
use crate::grammar::{load_lexicon, load_policy, Grammar, RulePolicy};
use crate::semantics::{group_into_classes, DEFAULT_MAX_STEPS};
use crate::tree::ParseTree;

pub const GALOOT_LEXICON: &str = include_str!("../data/galoot.lex");
pub const JOHN_LEXICON: &str = include_str!("../data/john.lex");
pub const BLOCKED_POLICY: &str = include_str!("../data/blocked.policy");

pub const GALOOT_SENTENCE: &str = "the galoot in the corner that I said Mary pretends to like";

pub const DEMOS: &[&str] = &["galoot", "john", "modifiers", "chain-fn5", "blocked"];

/// Largest `n` accepted by the `modifiers` demo.
pub const MAX_MODIFIERS: usize = 4;

struct Table {
    rows: Vec<(String, String, String)>,
}

impl Table {
    fn new() -> Table {
        Table { rows: Vec::new() }
    }

    fn row(&mut self, what: &str, expected: impl ToString, actual: impl ToString) {
        self.rows.push((what.to_string(), expected.to_string(), actual.to_string()));
    }

    fn all_ok(&self) -> bool {
        self.rows.iter().all(|(_, e, a)| e == a)
    }

    fn write(&self, out: &mut String) {
        let w0 = self.rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(8);
        let w1 = self.rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(8);
        let w2 = self.rows.iter().map(|r| r.2.len()).max().unwrap_or(0).max(6);
        let _ = writeln!(out, "{:w0$}  {:w1$}  {:w2$}  ok", "quantity", "expected", "actual");
        for (what, e, a) in &self.rows {
            let ok = if e == a { "yes" } else { "NO" };
            let _ = writeln!(out, "{what:w0$}  {e:w1$}  {a:w2$}  {ok}");
        }
    }
}

pub fn run_demo(name: &str, n: Option<usize>) -> Report {
    let mut out = String::new();
    let _ = writeln!(out, "demo: {name}");
    let table = match name {
        "galoot" => galoot(&mut out),
        "john" => john(&mut out),
        "modifiers" => {
            let n = n.unwrap_or(1);
            if n == 0 || n > MAX_MODIFIERS {
                return Report {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr: format!("error: modifiers takes 1 <= n <= {MAX_MODIFIERS}, got {n}\n"),
                };
            }
            modifiers(n, &mut out)
        }
        "chain-fn5" => double_b2_chain(&mut out),
        "blocked" => blocked(&mut out),
        _ => {
            return Report {
                exit_code: 2,
                stdout: String::new(),
                stderr: format!("error: unknown demo {name:?}; known demos: {}\n", DEMOS.join(", ")),
            }
        }
    };
    let table = match table {
        Ok(t) => t,
        Err(msg) => {
            return Report { exit_code: 1, stdout: out, stderr: format!("error: {msg}\n") };
        }
    };
    table.write(&mut out);
    let exit_code = if table.all_ok() { 0 } else { 1 };
    Report { exit_code, stdout: out, stderr: String::new() }
}

fn cat(s: &str) -> Category {
    parse_category(s).expect("built-in category")
}

fn sorted_sizes(sizes: impl IntoIterator<Item = usize>) -> String {
    let mut v: Vec<usize> = sizes.into_iter().collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    format!("{v:?}")
}

struct Counts {
    total: u128,
    class_sizes: Vec<usize>,
    nf: u128,
    nf_classes: usize,
    canonical: usize,
    canonical_classes: usize,
    /// Whether the NF and canonical parses fall in the same set of classes
    /// as the exhaustive ones.
    same_classes: bool,
    nf_trees: Vec<Arc<ParseTree>>,
}

fn counts(words: &[&str], g: &Grammar, cap: usize) -> Result<Counts, String> {
    let span = (0, words.len());
    let all = parse_exhaustive(words, g).map_err(|e| e.to_string())?;
    let total = all.count_trees(span, &g.target);
    let trees = all.enumerate_trees(span, &g.target, cap).map_err(|e| e.to_string())?;
    let classes = group_into_classes(&trees, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;

    let nf_chart = parse_nf(words, g).map_err(|e| e.to_string())?;
    let nf = nf_chart.count_trees(span, &g.target);
    let nf_trees = nf_chart.enumerate_trees(span, &g.target, cap).map_err(|e| e.to_string())?;

    let canon = parse_canonical(words, g, &PreferencePolicy::FirstFound).map_err(|e| e.to_string())?;
    let canon_trees: Vec<Arc<ParseTree>> = canon.parses().into_iter().map(|e| e.tree).collect();

    let readings = |ts: &[Arc<ParseTree>]| -> Result<Vec<_>, String> {
        let mut v: Vec<_> = group_into_classes(ts, DEFAULT_MAX_STEPS)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|c| (c.leaves, c.recipe))
            .collect();
        v.sort_by_key(|r| format!("{r:?}"));
        Ok(v)
    };
    let base = readings(&trees)?;
    let nf_r = readings(&nf_trees)?;
    let canon_r = readings(&canon_trees)?;
    Ok(Counts {
        total,
        class_sizes: classes.iter().map(|c| c.members.len()).collect(),
        nf,
        nf_classes: nf_r.len(),
        canonical: canon_trees.len(),
        canonical_classes: canon_r.len(),
        same_classes: base == nf_r && base == canon_r,
        nf_trees,
    })
}

fn galoot(out: &mut String) -> Result<Table, String> {
    let words: Vec<&str> = GALOOT_SENTENCE.split(' ').collect();
    let lex = load_lexicon(GALOOT_LEXICON).map_err(|e| e.to_string())?;
    let mut g = Grammar::new(lex, RulePolicy::default()).with_target(cat("NP"));
    g.policy = RulePolicy::pure(g.max_arity_for(&words));
    let _ = writeln!(out, "sentence: {} ({} tokens)", words.join(" "), words.len());
    let _ = writeln!(out, "target: NP, max degree {}", g.policy.max_degree);
    let c = counts(&words, &g, DEFAULT_CAP)?;
    for t in &c.nf_trees {
        let _ = writeln!(out, "nf parse: {}", t.render(false));
    }
    let mut t = Table::new();
    t.row("total", 252, c.total);
    t.row("class sizes", "[168, 84]", sorted_sizes(c.class_sizes.iter().copied()));
    t.row("nf", 2, c.nf);
    t.row("canonical", 2, c.canonical);
    t.row("same classes", true, c.same_classes);
    Ok(t)
}

fn john(out: &mut String) -> Result<Table, String> {
    let words = ["John", "likes", "Mary"];
    let lex = load_lexicon(JOHN_LEXICON).map_err(|e| e.to_string())?;
    let mut g = Grammar::new(lex, RulePolicy::default());
    g.policy = RulePolicy::pure(g.max_arity_for(&words));
    let c = counts(&words, &g, DEFAULT_CAP)?;
    let all = parse_exhaustive(&words, &g).map_err(|e| e.to_string())?;
    for t in all.enumerate_trees((0, 3), &g.target, DEFAULT_CAP).map_err(|e| e.to_string())? {
        let _ = writeln!(out, "parse: {}", t.render(true));
    }
    let nf_chart = parse_nf(&words, &g).map_err(|e| e.to_string())?;
    for b in &nf_chart.blocked {
        let _ = writeln!(
            out,
            "blocked: [{},{}) + [{},{}) {} {}-{} + {}-{}",
            b.start,
            b.mid,
            b.mid,
            b.end,
            b.rule.kind(),
            b.rule.left(),
            b.left_tag,
            b.rule.right(),
            b.right_tag
        );
    }
    let blocked: Vec<String> = nf_chart
        .blocked
        .iter()
        .map(|b| format!("{}-{} {} {}", b.rule.left(), b.left_tag, b.rule.kind(), b.rule.right()))
        .collect();
    let constituents = [("John likes", 0, 2, "S/NP"), ("likes Mary", 1, 3, "S\\NP")];
    let mut t = Table::new();
    t.row("total", 2, c.total);
    t.row("classes", 1, c.class_sizes.len());
    t.row("nf", 1, c.nf);
    t.row("nf parse", "[[John] [[likes] [Mary]]S\\NP-OT]S-OT", render_first(&c.nf_trees));
    for (label, s, e, want) in constituents {
        t.row(label, want, has(&all, s, e, want));
    }
    t.row("blocked", "[\"S/NP-FC1 >B0 NP\"]", format!("{blocked:?}"));
    Ok(t)
}

fn has(chart: &Chart, s: usize, e: usize, want: &str) -> String {
    if chart.cell(s, e).has_category(&cat(want)) {
        want.to_string()
    } else {
        "missing".to_string()
    }
}

fn render_first(ts: &[Arc<ParseTree>]) -> String {
    ts.first().map(|t| t.render(false)).unwrap_or_else(|| "none".to_string())
}

pub(crate) fn catalan(n: u64) -> u128 {
    binomial(2 * n, n) / (n as u128 + 1)
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// `(S/S)^n S (S\S)^n` as pseudo-words.
pub fn modifier_words(n: usize) -> Vec<&'static str> {
    let mut w = vec!["S/S"; n];
    w.push("S");
    w.extend(std::iter::repeat_n("S\\S", n));
    w
}

fn modifiers(n: usize, out: &mut String) -> Result<Table, String> {
    let words = modifier_words(n);
    let g = Grammar::schematic(RulePolicy::unbounded());
    let _ = writeln!(out, "sentence: {}", words.join(" "));
    let c = counts(&words, &g, DEFAULT_CAP)?;
    let classes = c.class_sizes.len();
    let mut t = Table::new();
    // Every bracketing of the string is a derivation, so the total is a
    // Catalan number; the class count comes from the recipe oracle above.
    t.row("total", catalan(2 * n as u64), c.total);
    t.row("classes = C(2n,n)", binomial(2 * n as u64, n as u64), classes);
    t.row("nf = classes", classes, c.nf);
    t.row("canonical = classes", classes, c.canonical);
    t.row("nf classes", classes, c.nf_classes);
    t.row("canonical classes", classes, c.canonical_classes);
    t.row("same classes", true, c.same_classes);
    Ok(t)
}

fn double_b2_chain(out: &mut String) -> Result<Table, String> {
    let words = ["A/B", "B/C", "C/D/E"];
    let g = Grammar::schematic(RulePolicy::pure(2)).with_target(cat("A/D/E"));
    let all = parse_exhaustive(&words, &g).map_err(|e| e.to_string())?;
    let trees = all.enumerate_trees((0, 3), &g.target, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let nf_chart = parse_nf(&words, &g).map_err(|e| e.to_string())?;
    let nf = nf_chart.enumerate_trees((0, 3), &g.target, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let nf_tree = nf.first().cloned();
    let left = trees.iter().find(|t| t.start() == 0 && t.children().is_some_and(|(l, _)| l.end() == 2));
    let rules = |t: &ParseTree| {
        let mut v = Vec::new();
        t.visit(&mut |n| {
            if let Some(r) = n.rule() {
                v.push(r.kind().to_string());
            }
        });
        v.join(",")
    };
    let mut t = Table::new();
    t.row("total", 2, trees.len());
    t.row("nf", 1, nf.len());
    if let Some(nf_tree) = &nf_tree {
        let _ = writeln!(out, "nf parse: {}", nf_tree.render(true));
        t.row("nf rules", ">B2,>B2", rules(nf_tree));
    }
    if let Some(left) = left {
        let _ = writeln!(out, "other parse: {}", left.render(true));
        t.row("other rules", ">B2,>B1", rules(left));
        let rewritten = nf_rewrite(left).map_err(|e| e.to_string())?;
        t.row(
            "nf_rewrite(other)",
            nf_tree.as_ref().map(|x| x.render(true)).unwrap_or_default(),
            rewritten.render(true),
        );
    }
    Ok(t)
}

fn blocked(out: &mut String) -> Result<Table, String> {
    let words = ["A/B", "B/C", "C"];
    let pf = load_policy(BLOCKED_POLICY).map_err(|e| e.to_string())?;
    let target = pf.target.clone().unwrap_or_else(|| cat("A"));
    let g = Grammar::schematic(pf.apply_to(RulePolicy::pure(1))).with_target(target);
    let _ = writeln!(out, "policy: {}", BLOCKED_POLICY.lines().filter(|l| l.starts_with("block")).collect::<Vec<_>>().join("; "));
    let nf = parse_nf(&words, &g).map_err(|e| e.to_string())?;
    let canon = parse_canonical(&words, &g, &PreferencePolicy::FirstFound).map_err(|e| e.to_string())?;
    let parses = canon.parses();
    let mut t = Table::new();
    t.row("nf", 0, nf.count_trees((0, 3), &g.target));
    t.row("canonical", 1, parses.len());
    if let Some(p) = parses.first() {
        let key = canon.nf_tree(p.nf);
        let _ = writeln!(out, "survivor: {}  key {}: {}", p.tree.render(false), p.nf, key.render(false));
        t.row("survivor", "[[[A/B] [B/C]]A/C-FC1 [C]]A-OT", p.tree.render(false));
        t.row("key", "[[A/B] [[B/C] [C]]B-OT]A-OT", key.render(false));
        t.row("key equal", true, nf_key_equal(&p.tree, &key).map_err(|e| e.to_string())?);
    }
    Ok(t)
}
